//! Shared proptest strategies.
//!
//! Positions and offsets are multiples of `2^-10` and masses are multiples
//! of `2^-20`, both with bounded magnitude. On that lattice translations,
//! the affine maps with power-of-two slopes, and mass sums are all exact in
//! `f64`, so the algebraic identities under test hold with no rounding on
//! the position side and only product rounding on the mass side.

use cosdyn::dynamics::{CosineSystem, Homeomorphism, WeightFunction};
use cosdyn::measure::AtomicMeasure;
use proptest::prelude::*;

pub fn dyadic_position() -> impl Strategy<Value = f64> {
    (-8192i32..=8192).prop_map(|k| k as f64 / 1024.0)
}

pub fn dyadic_mass() -> impl Strategy<Value = f64> {
    (-1_048_576i64..=1_048_576)
        .prop_filter("mass must be nonzero", |k| *k != 0)
        .prop_map(|k| k as f64 / 1_048_576.0)
}

pub fn measure() -> impl Strategy<Value = AtomicMeasure> {
    prop::collection::vec((dyadic_position(), dyadic_mass()), 1..=6).prop_map(AtomicMeasure::new)
}

/// Positive dyadic weight levels in `(0, 8]`.
fn weight_level() -> impl Strategy<Value = f64> {
    (1i32..=8192).prop_map(|k| k as f64 / 1024.0)
}

pub fn weight() -> impl Strategy<Value = WeightFunction> {
    (
        prop::collection::btree_set(-8192i32..=8192, 0..4),
        prop::collection::vec(weight_level(), 4),
    )
        .prop_map(|(xs, ys)| {
            if xs.is_empty() {
                return WeightFunction::constant(ys[0]).unwrap();
            }
            let breakpoints: Vec<(f64, f64)> = xs
                .iter()
                .zip(ys.iter())
                .map(|(&x, &y)| (x as f64 / 1024.0, y))
                .collect();
            let left = breakpoints.first().unwrap().1;
            let right = breakpoints.last().unwrap().1;
            WeightFunction::new(breakpoints, left, right).unwrap()
        })
}

pub fn translation_system() -> impl Strategy<Value = CosineSystem> {
    (dyadic_position(), weight()).prop_map(|(offset, weight)| CosineSystem {
        alpha: Homeomorphism::translation(offset).unwrap(),
        weight,
    })
}

/// Translations plus affine maps with power-of-two slopes; every map sends
/// the dyadic lattice to itself exactly.
pub fn exact_system() -> impl Strategy<Value = CosineSystem> {
    let slope = prop_oneof![Just(0.5f64), Just(1.0), Just(2.0)];
    (slope, dyadic_position(), weight()).prop_map(|(a, b, weight)| CosineSystem {
        alpha: if a == 1.0 {
            Homeomorphism::translation(b).unwrap()
        } else {
            Homeomorphism::affine(a, b).unwrap()
        },
        weight,
    })
}

/// Asserts two measures are equal up to relative rounding `rel` in total
/// variation. The difference is coalesced first: merging nearby atoms can
/// only shrink the total variation of a difference, so the comparison stays
/// an upper bound.
pub fn assert_measures_close(x: &AtomicMeasure, y: &AtomicMeasure, rel: f64) {
    let scale = x.total_variation().max(y.total_variation()).max(1e-300);
    let diff = AtomicMeasure::linear_combine(1.0, x, -1.0, y).coalesced(1e-9);
    let dist = diff.total_variation();
    assert!(
        dist <= rel * scale,
        "measures differ by {dist:e} (scale {scale:e})\n  left: {x:?}\n right: {y:?}"
    );
}
