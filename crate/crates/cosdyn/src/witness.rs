//! Construction of witness measures.
//!
//! Given a source measure `mu`, a target measure `nu`, and a window split
//! `(A, D, E)`, the construction restricts `mu` to the kept window and `nu`
//! to `D` and `E`, pushes the restrictions through the adjoint actions of a
//! family member, and assembles
//!
//! ```text
//! phi    = mu_kept + (2 sqrt(a) / sqrt(b)) (T* nu_d + S* nu_e)
//! lambda = sqrt(b) / sqrt(a)
//! ```
//!
//! where `a` and `b` are the total variations of the pushed restrictions of
//! `mu` and `nu`. When the decay conditions hold at the member, `phi` lands
//! near `mu` while `lambda` times the member's cosine operator sends it near
//! `nu`, so every neighbourhood of `mu` meets a scaled cosine preimage of
//! every neighbourhood of `nu`.
//!
//! [`certify_norm_bounds`] re-derives sup-based upper bounds for all the
//! norms a report records, sampling weight functionals on grids that include
//! the atom positions of the restrictions, and checks the two triangle
//! inequalities that bound the reported distances. `phi` and the distances
//! are computed from actual atoms, so certification is an independent check
//! on the arithmetic, not a restatement of it.

use serde::Serialize;

use crate::conditions::{sampled_sup, window_grid, PartitionCase, PartitionScheme};
use crate::dynamics::{CosineSystem, FamilyMember};
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, CompactWindow};

/// A metric ball: all measures within `radius` of `center` in total
/// variation.
#[derive(Clone, Debug, Serialize)]
pub struct BallSpec {
    center: AtomicMeasure,
    radius: f64,
}

impl BallSpec {
    pub fn new(center: AtomicMeasure, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::invalid("radius", "must be a positive real"));
        }
        Ok(BallSpec { center, radius })
    }

    pub fn center(&self) -> &AtomicMeasure {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// The tolerance sufficient for a witness within distance `delta`: the
/// smallest of `delta/4`, `delta^2 / (64 |mu| |nu|)`, and `delta / (8 |nu|)`.
pub fn epsilon_for_radius(delta: f64, mu_norm: f64, nu_norm: f64) -> Result<f64> {
    for (name, v) in [("delta", delta), ("mu_norm", mu_norm), ("nu_norm", nu_norm)] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::invalid(name, "must be a positive real"));
        }
    }
    Ok((delta / 4.0)
        .min(delta * delta / (64.0 * mu_norm * nu_norm))
        .min(delta / (8.0 * nu_norm)))
}

/// Total variations of the pushed restrictions that enter the construction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormQuantities {
    /// Forward adjoint applied to `mu` restricted to the kept window.
    pub forward_mu_kept: f64,
    /// Backward adjoint applied to `mu` restricted to the kept window.
    pub backward_mu_kept: f64,
    /// Forward adjoint applied to `nu` restricted to `D`.
    pub forward_nu_d: f64,
    /// Backward adjoint applied to `nu` restricted to `E`.
    pub backward_nu_e: f64,
    /// Two-step forward adjoint applied to `nu` restricted to `D`.
    pub two_step_forward_nu_d: f64,
    /// Two-step backward adjoint applied to `nu` restricted to `E`.
    pub two_step_backward_nu_e: f64,
}

impl NormQuantities {
    /// `a`, the mass scale contributed by the source.
    pub fn a(&self) -> f64 {
        self.forward_mu_kept + self.backward_mu_kept
    }

    /// `b`, the mass scale contributed by the target.
    pub fn b(&self) -> f64 {
        self.forward_nu_d + self.backward_nu_e
    }
}

/// Outcome of one witness construction.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub index: u32,
    /// Tolerance sufficient for the smaller of the two requested radii.
    pub epsilon_used: f64,
    pub lambda: f64,
    pub dist_phi_to_mu: f64,
    pub dist_scaled_cosine_to_nu: f64,
    pub norms: NormQuantities,
    pub phi: AtomicMeasure,
    /// Whether `phi` landed strictly inside the ball around `mu` and its
    /// scaled cosine image strictly inside the ball around `nu`.
    pub success: bool,
}

fn restrictions(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    scheme: &PartitionScheme,
) -> (AtomicMeasure, AtomicMeasure, AtomicMeasure) {
    let kept = scheme.complement_of_a();
    let mu_kept = mu.restrict(|t| kept.contains(t));
    let nu_d = nu.restrict(|t| scheme.d().contains(t));
    let nu_e = nu.restrict(|t| scheme.e().contains(t));
    (mu_kept, nu_d, nu_e)
}

/// Builds the witness for one family member against the given balls.
///
/// The source measure is the center of `ball_mu` and the target the center
/// of `ball_nu`; the reported distances are measured to those centers. Both
/// centers must be nonzero and supported inside the scheme's window.
pub fn build_witness_member(
    member: &FamilyMember,
    index: u32,
    ball_mu: &BallSpec,
    ball_nu: &BallSpec,
    scheme: &PartitionScheme,
) -> Result<WitnessReport> {
    let mu = ball_mu.center();
    let nu = ball_nu.center();
    let window = scheme.window();
    for (name, m) in [("ball_mu", mu), ("ball_nu", nu)] {
        if m.is_empty() {
            return Err(Error::validation(name, "center must be a nonzero measure"));
        }
        if let Some(atom) = m.atoms().iter().find(|a| !window.contains(a.position)) {
            return Err(Error::validation(
                name,
                format!("center atom at {} lies outside the window", atom.position),
            ));
        }
    }

    let (mu_kept, nu_d, nu_e) = restrictions(mu, nu, scheme);
    let t_mu = member.adjoint_t(&mu_kept);
    let s_mu = member.adjoint_s(&mu_kept);
    let t_nu = member.adjoint_t(&nu_d);
    let s_nu = member.adjoint_s(&nu_e);
    let norms = NormQuantities {
        forward_mu_kept: t_mu.total_variation(),
        backward_mu_kept: s_mu.total_variation(),
        forward_nu_d: t_nu.total_variation(),
        backward_nu_e: s_nu.total_variation(),
        two_step_forward_nu_d: member.adjoint_t_squared(&nu_d).total_variation(),
        two_step_backward_nu_e: member.adjoint_s_squared(&nu_e).total_variation(),
    };
    let a = norms.a();
    let b = norms.b();
    if a == 0.0 {
        return Err(Error::DegenerateWitness(
            "the source restricted to the kept window carries no mass".into(),
        ));
    }
    if b == 0.0 {
        return Err(Error::DegenerateWitness(
            "the target restricted to the split carries no mass".into(),
        ));
    }

    let coefficient = 2.0 * a.sqrt() / b.sqrt();
    let pushed_nu = AtomicMeasure::linear_combine(1.0, &t_nu, 1.0, &s_nu);
    let phi = AtomicMeasure::linear_combine(1.0, &mu_kept, coefficient, &pushed_nu);
    let lambda = b.sqrt() / a.sqrt();

    let dist_phi_to_mu = phi.tv_distance(mu);
    let scaled_cosine = member.cosine(&phi).scaled(lambda);
    let dist_scaled_cosine_to_nu = scaled_cosine.tv_distance(nu);

    let epsilon_used = epsilon_for_radius(
        ball_mu.radius().min(ball_nu.radius()),
        mu.total_variation(),
        nu.total_variation(),
    )?;
    let success = dist_phi_to_mu < ball_mu.radius() && dist_scaled_cosine_to_nu < ball_nu.radius();

    Ok(WitnessReport {
        index,
        epsilon_used,
        lambda,
        dist_phi_to_mu,
        dist_scaled_cosine_to_nu,
        norms,
        phi,
        success,
    })
}

/// Builds the witness for the `n`-step power member of `sys`.
pub fn build_witness(
    sys: &CosineSystem,
    n: u32,
    ball_mu: &BallSpec,
    ball_nu: &BallSpec,
    scheme: &PartitionScheme,
) -> Result<WitnessReport> {
    let member = FamilyMember::power(sys.clone(), n)?;
    build_witness_member(&member, n, ball_mu, ball_nu, scheme)
}

/// One certified inequality: a recorded value against an independently
/// sampled upper bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

fn check(name: &'static str, value: f64, bound: f64) -> BoundCheck {
    check_with_cushion(name, value, bound, 0.0)
}

fn check_with_cushion(name: &'static str, value: f64, bound: f64, cushion: f64) -> BoundCheck {
    const RELATIVE_SLACK: f64 = 1e-9;
    BoundCheck {
        name,
        value,
        bound,
        pass: value <= bound * (1.0 + RELATIVE_SLACK) + cushion,
    }
}

/// Certificate produced by [`certify_norm_bounds`].
#[derive(Clone, Debug, Serialize)]
pub struct NormBoundCertificate {
    /// Sup-based bounds for the six recorded norms.
    pub norm_bounds: [BoundCheck; 6],
    /// Triangle inequalities bounding the two recorded distances.
    pub distance_bounds: [BoundCheck; 2],
    pub all_pass: bool,
}

/// Checks a report's norms against sup-sampled bounds and its distances
/// against the triangle inequalities of the construction.
///
/// Each pushed restriction has total variation at most the supremum of the
/// member's weight functional over the restriction set times the mass
/// restricted there; the sampling grids include the atom positions, so the
/// sampled suprema dominate the pointwise weights that actually enter the
/// norms. The distances satisfy
///
/// ```text
/// dist(phi, mu)             <= |mu - mu_kept| + 2 sqrt(a) sqrt(b)
/// dist(lambda C phi, nu)    <= sqrt(a) sqrt(b) / 2 + |T*T* nu_d|
///                              + |S*S* nu_e| + |nu_d + nu_e - nu|
/// ```
///
/// All checks carry a relative slack of `1e-9` for accumulated rounding,
/// and the two distance checks additionally allow an absolute cushion of
/// `1e-12` times the combined mass of `mu` and `nu`: the distances are
/// computed from atom arithmetic whose cancellations leave dust at machine
/// precision, which outweighs the true distance once the construction has
/// converged far enough.
pub fn certify_norm_bounds(
    report: &WitnessReport,
    member: &FamilyMember,
    scheme: &PartitionScheme,
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    grid_step: f64,
) -> Result<NormBoundCertificate> {
    let window = scheme.window();
    let kept = scheme.complement_of_a();
    let (mu_kept, nu_d, nu_e) = restrictions(mu, nu, scheme);

    let extras: Vec<f64> = member
        .weight_kink_points(&window)
        .into_iter()
        .chain(kept.endpoints())
        .chain(scheme.d().endpoints())
        .chain(scheme.e().endpoints())
        .chain(mu_kept.atoms().iter().map(|a| a.position))
        .chain(nu_d.atoms().iter().map(|a| a.position))
        .chain(nu_e.atoms().iter().map(|a| a.position))
        .collect();
    let grid = window_grid(&window, grid_step, extras.iter().copied())?;

    let sup_w_kept = sampled_sup(&grid, &kept, |t| member.weight_value(t));
    let sup_bw_kept = sampled_sup(&grid, &kept, |t| member.backward_weight_value(t));
    let sup_w_d = sampled_sup(&grid, scheme.d(), |t| member.weight_value(t));
    let sup_bw_e = sampled_sup(&grid, scheme.e(), |t| member.backward_weight_value(t));
    let sup_two_fwd_d = sampled_sup(&grid, scheme.d(), |t| member.two_step_forward(t));
    let sup_two_bwd_e = sampled_sup(&grid, scheme.e(), |t| member.two_step_backward(t));

    let norms = &report.norms;
    let norm_bounds = [
        check(
            "forward_mu_kept",
            norms.forward_mu_kept,
            sup_w_kept * mu_kept.total_variation(),
        ),
        check(
            "backward_mu_kept",
            norms.backward_mu_kept,
            sup_bw_kept * mu_kept.total_variation(),
        ),
        check(
            "forward_nu_d",
            norms.forward_nu_d,
            sup_w_d * nu_d.total_variation(),
        ),
        check(
            "backward_nu_e",
            norms.backward_nu_e,
            sup_bw_e * nu_e.total_variation(),
        ),
        check(
            "two_step_forward_nu_d",
            norms.two_step_forward_nu_d,
            sup_two_fwd_d * nu_d.total_variation(),
        ),
        check(
            "two_step_backward_nu_e",
            norms.two_step_backward_nu_e,
            sup_two_bwd_e * nu_e.total_variation(),
        ),
    ];

    let root_ab = norms.a().sqrt() * norms.b().sqrt();
    let mu_discard = mu.tv_distance(&mu_kept);
    let nu_discard = AtomicMeasure::linear_combine(1.0, &nu_d, 1.0, &nu_e).tv_distance(nu);
    // The reported distances come from atom arithmetic in which opposing
    // terms cancel; the cancellation leaves dust on the order of machine
    // epsilon times the mass scale, which dominates the true distance once
    // the construction converges far enough. The cushion absorbs it.
    let dust = 1e-12 * (mu.total_variation() + nu.total_variation());
    let distance_bounds = [
        check_with_cushion(
            "dist_phi_to_mu",
            report.dist_phi_to_mu,
            mu_discard + 2.0 * root_ab,
            dust,
        ),
        check_with_cushion(
            "dist_scaled_cosine_to_nu",
            report.dist_scaled_cosine_to_nu,
            root_ab / 2.0 + norms.two_step_forward_nu_d + norms.two_step_backward_nu_e + nu_discard,
            dust,
        ),
    ];

    let all_pass = norm_bounds
        .iter()
        .chain(distance_bounds.iter())
        .all(|c| c.pass);
    Ok(NormBoundCertificate {
        norm_bounds,
        distance_bounds,
        all_pass,
    })
}

/// Which window split each scanned order uses.
#[derive(Clone, Debug)]
pub enum ScanCase {
    /// The degenerate split `D = K` at every order.
    DEqualsK,
    /// The degenerate split `E = K` at every order.
    EEqualsK,
    /// An explicit split per order, `schemes[i]` for order `i + 1`.
    Custom(Vec<PartitionScheme>),
}

impl From<PartitionCase> for ScanCase {
    fn from(case: PartitionCase) -> Self {
        match case {
            PartitionCase::DEqualsK => ScanCase::DEqualsK,
            PartitionCase::EEqualsK => ScanCase::EEqualsK,
        }
    }
}

/// One report per order, plus the start of the trailing run of successes.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessScan {
    pub reports: Vec<WitnessReport>,
    /// First order from which every later scanned order also succeeded.
    pub stable_from: Option<u32>,
}

/// Scans the power family of `sys` for witnesses at orders `1..=horizon`,
/// sourcing from the center of `ball_mu` and targeting the center of
/// `ball_nu`.
pub fn scan_witnesses(
    sys: &CosineSystem,
    ball_mu: &BallSpec,
    ball_nu: &BallSpec,
    window: CompactWindow,
    case: &ScanCase,
    horizon: u32,
) -> Result<WitnessScan> {
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    if let ScanCase::Custom(schemes) = case {
        if schemes.len() != horizon as usize {
            return Err(Error::invalid(
                "case",
                "custom scans need exactly one scheme per order",
            ));
        }
        if schemes.iter().any(|s| s.window() != window) {
            return Err(Error::invalid(
                "case",
                "every custom scheme must use the scan window",
            ));
        }
    }

    let mut reports = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        let scheme = match case {
            ScanCase::DEqualsK => PartitionScheme::d_equals_k(window),
            ScanCase::EEqualsK => PartitionScheme::e_equals_k(window),
            ScanCase::Custom(schemes) => schemes[(n - 1) as usize].clone(),
        };
        reports.push(build_witness(sys, n, ball_mu, ball_nu, &scheme)?);
    }
    let stable_from = reports
        .iter()
        .rev()
        .take_while(|r| r.success)
        .last()
        .map(|r| r.index);
    Ok(WitnessScan {
        reports,
        stable_from,
    })
}
