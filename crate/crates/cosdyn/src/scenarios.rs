//! A ready-made system family and JSON file I/O.
//!
//! The ramp family translates by one step and weights by a function that is
//! large on the far left, small on the far right, and linear across
//! `[-1, 1]`. Forward orbits pass from the expanding side to the
//! contracting side, which makes it the standard smoke test for every
//! checker in this crate: forward products at a fixed point diverge while
//! the windowed decay conditions hold.
//!
//! Loading splits syntactic problems from semantic ones: a file that is not
//! valid JSON of the right shape reports a parse error with the path, while
//! well-formed data describing an invalid object (a non-increasing
//! breakpoint list, a zero slope) reports a validation error naming the
//! offending field.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    CosineSystem, Homeomorphism, HomeomorphismFile, PiecewiseLinearFile, WeightFunction,
};
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, MeasureFile};

/// Parameters for the ramp family.
///
/// The weight ramps from `m` (left tail, up to the node at -1) down to
/// `1 + delta` (right tail, from the node at 1). The constraints `delta >= 1`
/// and `m >= 2 + 2 delta` keep the left side expanding strictly faster than
/// the right side contracts, which is what drives the decay conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub m: f64,
    pub delta: f64,
}

impl ExampleParams {
    pub fn new(m: f64, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 1.0 {
            return Err(Error::validation("delta", "must be at least 1"));
        }
        if !m.is_finite() || m < 2.0 + 2.0 * delta {
            return Err(Error::validation("m", "must be at least 2 + 2 delta"));
        }
        Ok(ExampleParams { m, delta })
    }
}

impl Default for ExampleParams {
    /// The canonical instance, `m = 4`, `delta = 1`.
    fn default() -> Self {
        ExampleParams { m: 4.0, delta: 1.0 }
    }
}

/// Builds the ramp system for the given parameters.
pub fn build_example(params: &ExampleParams) -> CosineSystem {
    let high = params.m;
    let low = 1.0 + params.delta;
    CosineSystem {
        alpha: Homeomorphism::translation(1.0).expect("a unit translation is always valid"),
        weight: WeightFunction::new(vec![(-1.0, high), (1.0, low)], high, low)
            .expect("validated parameters give a positive ramp"),
    }
}

/// Wire form of a system file; conversion to domain types happens after
/// parsing so shape errors and semantic errors stay distinguishable.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    alpha: HomeomorphismFile,
    weight: PiecewiseLinearFile,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from)
}

fn parse_context(path: &Path) -> String {
    path.display().to_string()
}

pub fn load_system(path: impl AsRef<Path>) -> Result<CosineSystem> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: SystemFile =
        serde_json::from_str(&text).map_err(|e| Error::parse(parse_context(path), e))?;
    Ok(CosineSystem {
        alpha: Homeomorphism::try_from(file.alpha)?,
        weight: WeightFunction::try_from(file.weight)?,
    })
}

pub fn save_system(path: impl AsRef<Path>, sys: &CosineSystem) -> Result<()> {
    let text =
        serde_json::to_string_pretty(sys).map_err(|e| Error::parse("serializing system", e))?;
    fs::write(path, text + "\n").map_err(Error::from)
}

pub fn load_measure(path: impl AsRef<Path>) -> Result<AtomicMeasure> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: MeasureFile =
        serde_json::from_str(&text).map_err(|e| Error::parse(parse_context(path), e))?;
    AtomicMeasure::try_from(file)
}

pub fn save_measure(path: impl AsRef<Path>, m: &AtomicMeasure) -> Result<()> {
    let text =
        serde_json::to_string_pretty(m).map_err(|e| Error::parse("serializing measure", e))?;
    fs::write(path, text + "\n").map_err(Error::from)
}
