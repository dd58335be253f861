//! Command line interface.
//!
//! Four commands share one option vocabulary: `simulate` evolves a measure
//! under the cosine sequence, `check` evaluates the windowed decay
//! conditions, `witness` scans the power family for witness measures around
//! a pair of targets, and `example` prints a ready-made ramp system.
//!
//! Options can come from flags or from a JSON config passed with
//! `--config`; flags win field by field. Tables print with 17 significant
//! digits so values round-trip exactly, and `--csv` or `--json` switch the
//! output format. Exit codes carry the result: `check` exits 0, 2, or 3 for
//! HOLDS, FAILS, or INCONCLUSIVE, `witness` exits 0 when the scan
//! stabilizes and 2 when it does not, and any error exits 1.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::conditions::{
    check_limit_conditions, LimitConditionReport, PartitionCase, Verdict, DEFAULT_GRID_STEP,
};
use crate::dynamics::{cosine, CosineSystem};
use crate::error::{Error, Result};
use crate::measure::{CompactWindow, WindowFile};
use crate::scenarios::{build_example, load_measure, load_system, ExampleParams};
use crate::witness::{scan_witnesses, BallSpec, ScanCase, WitnessScan};

#[derive(Parser)]
#[command(
    name = "cosdyn",
    version,
    about = "Cosine operator dynamics on atomic measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a measure under the cosine sequence and tabulate its size.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        /// Largest order to evolve to.
        #[arg(long)]
        horizon: Option<u32>,
    },
    /// Evaluate the windowed decay conditions for a system.
    Check {
        #[command(flatten)]
        io: IoArgs,
        /// Window endpoints.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        /// Largest order to scan.
        #[arg(long)]
        horizon: Option<u32>,
        /// Decay tolerance for the verdicts.
        #[arg(long)]
        tol: Option<f64>,
        /// Uniform refinement step for the sampling grids.
        #[arg(long)]
        grid_step: Option<f64>,
    },
    /// Scan the power family for witnesses around a pair of measures.
    Witness {
        #[command(flatten)]
        io: IoArgs,
        /// Window endpoints.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        /// Largest order to scan.
        #[arg(long)]
        horizon: Option<u32>,
        /// Radius of the balls around both measures.
        #[arg(long)]
        radius: Option<f64>,
        /// Which degenerate window split to use.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
    /// Print a ready-made ramp system.
    Example {
        #[command(flatten)]
        io: IoArgs,
        /// Left plateau of the ramp weight.
        #[arg(long, default_value_t = 4.0)]
        m: f64,
        /// Height of the right plateau above one.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
}

#[derive(Args)]
struct IoArgs {
    /// JSON config supplying defaults for the other options.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// System description file.
    #[arg(long, value_name = "PATH")]
    system: Option<PathBuf>,
    /// Measure file; repeat the flag for commands that take several.
    #[arg(long = "measure", value_name = "PATH")]
    measures: Vec<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Emit the table as CSV.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    /// Emit the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum CaseArg {
    DEqualsK,
    EEqualsK,
}

impl From<CaseArg> for PartitionCase {
    fn from(case: CaseArg) -> Self {
        match case {
            CaseArg::DEqualsK => PartitionCase::DEqualsK,
            CaseArg::EEqualsK => PartitionCase::EEqualsK,
        }
    }
}

/// Config file mirror of the shared options.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    system: Option<PathBuf>,
    measures: Vec<PathBuf>,
    window: Option<WindowFile>,
    horizon: Option<u32>,
    tol: Option<f64>,
    radius: Option<f64>,
    case: Option<CaseArg>,
    grid_step: Option<f64>,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e))
    }
}

/// Options after merging flags over the config.
struct Effective {
    system: Option<PathBuf>,
    measures: Vec<PathBuf>,
    window: Option<CompactWindow>,
    horizon: u32,
    tol: f64,
    radius: f64,
    case: CaseArg,
    grid_step: f64,
}

impl Effective {
    fn merge(
        io: &IoArgs,
        window: &Option<Vec<f64>>,
        horizon: Option<u32>,
        tol: Option<f64>,
        radius: Option<f64>,
        case: Option<CaseArg>,
        grid_step: Option<f64>,
    ) -> Result<Self> {
        let config = RunConfig::load(io.config.as_deref())?;
        let window = match window {
            Some(pair) => Some(CompactWindow::new(pair[0], pair[1])?),
            None => config.window.map(CompactWindow::try_from).transpose()?,
        };
        let measures = if io.measures.is_empty() {
            config.measures
        } else {
            io.measures.clone()
        };
        Ok(Effective {
            system: io.system.clone().or(config.system),
            measures,
            window,
            horizon: horizon.or(config.horizon).unwrap_or(60),
            tol: tol.or(config.tol).unwrap_or(1e-6),
            radius: radius.or(config.radius).unwrap_or(0.25),
            case: case.or(config.case).unwrap_or(CaseArg::EEqualsK),
            grid_step: grid_step.or(config.grid_step).unwrap_or(DEFAULT_GRID_STEP),
        })
    }

    fn system(&self) -> Result<CosineSystem> {
        let path = self
            .system
            .as_ref()
            .ok_or_else(|| Error::invalid("system", "a system file is required"))?;
        load_system(path)
    }

    fn window(&self) -> Result<CompactWindow> {
        self.window
            .ok_or_else(|| Error::invalid("window", "window endpoints are required"))
    }

    fn measure_paths(&self, expected: usize, usage: &str) -> Result<&[PathBuf]> {
        if self.measures.len() != expected {
            return Err(Error::invalid("measure", usage));
        }
        Ok(&self.measures)
    }
}

/// Parses the process arguments, runs the requested command, and returns
/// the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Simulate { io, horizon } => {
            let eff = Effective::merge(&io, &None, horizon, None, None, None, None)?;
            run_simulate(&io, &eff)
        }
        Command::Check {
            io,
            window,
            horizon,
            tol,
            grid_step,
        } => {
            let eff = Effective::merge(&io, &window, horizon, tol, None, None, grid_step)?;
            run_check(&io, &eff)
        }
        Command::Witness {
            io,
            window,
            horizon,
            radius,
            case,
        } => {
            let eff = Effective::merge(&io, &window, horizon, None, radius, case, None)?;
            run_witness(&io, &eff)
        }
        Command::Example { io, m, delta } => run_example(&io, m, delta),
    }
}

/// 17 significant digits; enough for any `f64` to round-trip.
fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(io: &IoArgs, content: &str) -> Result<()> {
    match &io.out {
        Some(path) => fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn table(header: &str, rows: &[Vec<String>], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
    } else {
        out.push_str(&header.replace(',', "  "));
        out.push('\n');
        for row in rows {
            out.push_str(&row.join("  "));
            out.push('\n');
        }
    }
    out
}

fn to_json<T: serde::Serialize>(report: &T) -> Result<String> {
    let text =
        serde_json::to_string_pretty(report).map_err(|e| Error::parse("serializing report", e))?;
    Ok(text + "\n")
}

fn run_simulate(io: &IoArgs, eff: &Effective) -> Result<i32> {
    let sys = eff.system()?;
    let paths = eff.measure_paths(1, "simulate takes exactly one --measure")?;
    let m = load_measure(&paths[0])?;

    #[derive(serde::Serialize)]
    struct Row {
        n: u32,
        tv_norm: f64,
        atom_count: usize,
        min_position: Option<f64>,
        max_position: Option<f64>,
    }
    let rows: Vec<Row> = (1..=eff.horizon)
        .map(|n| {
            let image = cosine(&sys, &m, n);
            Row {
                n,
                tv_norm: image.total_variation(),
                atom_count: image.atom_count(),
                min_position: image.min_position(),
                max_position: image.max_position(),
            }
        })
        .collect();

    let content = if io.json {
        to_json(&rows)?
    } else {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    g17(r.tv_norm),
                    r.atom_count.to_string(),
                    g17(r.min_position.unwrap_or(f64::NAN)),
                    g17(r.max_position.unwrap_or(f64::NAN)),
                ]
            })
            .collect();
        table(
            "n,tv_norm,atom_count,min_position,max_position",
            &cells,
            io.csv,
        )
    };
    emit(io, &content)?;
    Ok(0)
}

fn check_rows(report: &LimitConditionReport) -> Vec<Vec<String>> {
    (0..report.horizon as usize)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                g17(report.values_a[i]),
                g17(report.values_b[i]),
                g17(report.values_c[i]),
            ]
        })
        .collect()
}

fn run_check(io: &IoArgs, eff: &Effective) -> Result<i32> {
    let sys = eff.system()?;
    eff.measure_paths(0, "check takes no --measure")?;
    let window = eff.window()?;
    let report = check_limit_conditions(&sys, &window, eff.horizon, eff.tol, eff.grid_step)?;

    let content = if io.json {
        to_json(&report)?
    } else {
        let mut content = table("n,value_a,value_b,value_c", &check_rows(&report), io.csv);
        if !io.csv {
            content.push_str(&format!("condition_a: {}\n", report.verdict_a));
            content.push_str(&format!("condition_b: {}\n", report.verdict_b));
            content.push_str(&format!("condition_c: {}\n", report.verdict_c));
            content.push_str(&format!("overall: {}\n", report.overall));
        }
        content
    };
    emit(io, &content)?;
    Ok(match report.overall {
        Verdict::Holds => 0,
        Verdict::Fails => 2,
        Verdict::Inconclusive => 3,
    })
}

fn witness_rows(scan: &WitnessScan) -> Vec<Vec<String>> {
    scan.reports
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                g17(r.lambda),
                g17(r.dist_phi_to_mu),
                g17(r.dist_scaled_cosine_to_nu),
                r.success.to_string(),
            ]
        })
        .collect()
}

fn run_witness(io: &IoArgs, eff: &Effective) -> Result<i32> {
    let sys = eff.system()?;
    let paths = eff.measure_paths(2, "witness takes exactly two --measure, source then target")?;
    let mu = load_measure(&paths[0])?;
    let nu = load_measure(&paths[1])?;
    let window = eff.window()?;
    let ball_mu = BallSpec::new(mu, eff.radius)?;
    let ball_nu = BallSpec::new(nu, eff.radius)?;
    let case = ScanCase::from(PartitionCase::from(eff.case));
    let scan = scan_witnesses(&sys, &ball_mu, &ball_nu, window, &case, eff.horizon)?;

    let content = if io.json {
        to_json(&scan)?
    } else {
        let mut content = table(
            "n,lambda,dist_phi,dist_target,success",
            &witness_rows(&scan),
            io.csv,
        );
        if !io.csv {
            match scan.stable_from {
                Some(n) => content.push_str(&format!("stable_from: {n}\n")),
                None => content.push_str(&format!(
                    "no stable witness within horizon {}\n",
                    eff.horizon
                )),
            }
        }
        content
    };
    emit(io, &content)?;
    Ok(if scan.stable_from.is_some() { 0 } else { 2 })
}

fn run_example(io: &IoArgs, m: f64, delta: f64) -> Result<i32> {
    let params = ExampleParams::new(m, delta)?;
    let sys = build_example(&params);
    let content = to_json(&sys)?;
    emit(io, &content)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_declaration_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn g17_round_trips_values() {
        for x in [1.625, -0.1, 3.0e-7, 123456.789] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn config_files_reject_unknown_fields() {
        let good = r#"{"horizon": 12, "window": {"lo": -1.0, "hi": 1.0}}"#;
        let cfg: RunConfig = serde_json::from_str(good).unwrap();
        assert_eq!(cfg.horizon, Some(12));
        let bad = r#"{"horizn": 12}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
    }

    #[test]
    fn flags_override_config_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("cfg.json");
        fs::write(
            &cfg_path,
            r#"{"horizon": 7, "tol": 0.5, "window": {"lo": -2.0, "hi": 2.0}}"#,
        )
        .unwrap();
        let io = IoArgs {
            config: Some(cfg_path),
            system: None,
            measures: vec![],
            out: None,
            csv: false,
            json: false,
        };
        let eff = Effective::merge(&io, &None, Some(30), None, None, None, None).unwrap();
        assert_eq!(eff.horizon, 30);
        assert_eq!(eff.tol, 0.5);
        let w = eff.window().unwrap();
        assert_eq!((w.lo(), w.hi()), (-2.0, 2.0));
    }
}
