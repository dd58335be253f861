//! Weighted composition dynamics on the line.
//!
//! The generating data is a pair `(alpha, w)`: an invertible self-map of the
//! real line and a strictly positive weight. On continuous functions the
//! weighted composition operator acts as `T f = w * (f o alpha)` with inverse
//! `S f = (f o alpha^{-1}) / (w o alpha^{-1})`, and the iterates telescope
//! into weight products along orbits:
//!
//! ```text
//! T^n f = (prod_{j=0}^{n-1} w o alpha^j) * (f o alpha^n)
//! S^n f = (prod_{j=1}^{n}   w o alpha^{-j})^{-1} * (f o alpha^{-n})
//! ```
//!
//! The dual actions on atomic measures move each point mass along the orbit
//! and scale its coefficient by the matching weight product. The discrete
//! cosine family is `C_n = (T^n + S^n) / 2` on the adjoint side, with
//! `C_0` the identity, and it satisfies the d'Alembert functional equation
//! `2 C_m C_n = C_{m+n} + C_{m-n}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;

/// Wire form of a homeomorphism: `{"kind": "translation", "b": ...}` or
/// `{"kind": "affine", "a": ..., "b": ...}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomeomorphismFile {
    Translation { b: f64 },
    Affine { a: f64, b: f64 },
}

/// Invertible self-map of the real line with closed-form iterates.
///
/// Only translations `t + b` and affine maps `a t + b` are supported, so the
/// n-fold iterate is available in closed form and orbit positions carry no
/// accumulated per-step rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "HomeomorphismFile", try_from = "HomeomorphismFile")]
pub enum Homeomorphism {
    Translation { offset: f64 },
    Affine { slope: f64, offset: f64 },
}

impl Homeomorphism {
    pub fn translation(offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::validation("alpha.b", "must be finite"));
        }
        Ok(Homeomorphism::Translation { offset })
    }

    pub fn affine(slope: f64, offset: f64) -> Result<Self> {
        if !slope.is_finite() || !offset.is_finite() {
            return Err(Error::validation("alpha.a/alpha.b", "must be finite"));
        }
        if slope == 0.0 {
            return Err(Error::validation("alpha.a", "must be nonzero"));
        }
        Ok(Homeomorphism::Affine { slope, offset })
    }

    pub fn apply(&self, t: f64) -> f64 {
        match *self {
            Homeomorphism::Translation { offset } => t + offset,
            Homeomorphism::Affine { slope, offset } => slope * t + offset,
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Homeomorphism::Translation { offset } => Homeomorphism::Translation { offset: -offset },
            Homeomorphism::Affine { slope, offset } => Homeomorphism::Affine {
                slope: 1.0 / slope,
                offset: -offset / slope,
            },
        }
    }

    /// The n-fold iterate as a map of the same shape, for any sign of `n`.
    ///
    /// For a translation the offset is `n b`. For an affine map with slope
    /// `a != 1` the iterate is `a^n t + b (a^n - 1) / (a - 1)`; the formula
    /// holds for negative `n` as well.
    pub fn iterate(&self, n: i64) -> Self {
        match *self {
            Homeomorphism::Translation { offset } => Homeomorphism::Translation {
                offset: n as f64 * offset,
            },
            Homeomorphism::Affine { slope: 1.0, offset } => Homeomorphism::Affine {
                slope: 1.0,
                offset: n as f64 * offset,
            },
            Homeomorphism::Affine { slope, offset } => {
                let pow = slope.powi(n as i32);
                Homeomorphism::Affine {
                    slope: pow,
                    offset: offset * (pow - 1.0) / (slope - 1.0),
                }
            }
        }
    }

    /// `alpha^n(t)` through the closed-form iterate.
    pub fn apply_iter(&self, t: f64, n: i64) -> f64 {
        self.iterate(n).apply(t)
    }
}

impl From<Homeomorphism> for HomeomorphismFile {
    fn from(h: Homeomorphism) -> Self {
        match h {
            Homeomorphism::Translation { offset } => HomeomorphismFile::Translation { b: offset },
            Homeomorphism::Affine { slope, offset } => HomeomorphismFile::Affine {
                a: slope,
                b: offset,
            },
        }
    }
}

impl TryFrom<HomeomorphismFile> for Homeomorphism {
    type Error = Error;

    fn try_from(file: HomeomorphismFile) -> Result<Self> {
        match file {
            HomeomorphismFile::Translation { b } => Homeomorphism::translation(b),
            HomeomorphismFile::Affine { a, b } => Homeomorphism::affine(a, b),
        }
    }
}

/// Wire form shared by piecewise-linear functions and weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PiecewiseLinearFile {
    pub breakpoints: Vec<(f64, f64)>,
    pub left_tail: f64,
    pub right_tail: f64,
}

/// Continuous piecewise-linear function with constant tails.
///
/// `breakpoints` is a strictly increasing sequence of nodes `(x, y)`. The
/// function equals `left_tail` for `t <= x_first`, `right_tail` for
/// `t >= x_last`, and interpolates linearly in between. Continuity forces
/// the tails to agree with the boundary node values; with no nodes the
/// function is the constant `left_tail` and the tails must coincide.
///
/// Values may change sign here; see [`WeightFunction`] for the positive
/// variant. Extrema over the whole line are attained at nodes or tails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PiecewiseLinearFile", try_from = "PiecewiseLinearFile")]
pub struct PiecewiseLinear {
    breakpoints: Vec<(f64, f64)>,
    left_tail: f64,
    right_tail: f64,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<(f64, f64)>, left_tail: f64, right_tail: f64) -> Result<Self> {
        if !left_tail.is_finite() {
            return Err(Error::validation("left_tail", "must be finite"));
        }
        if !right_tail.is_finite() {
            return Err(Error::validation("right_tail", "must be finite"));
        }
        for (i, (x, y)) in breakpoints.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::validation(
                    format!("breakpoints[{i}]"),
                    "must be finite",
                ));
            }
        }
        for i in 1..breakpoints.len() {
            if breakpoints[i - 1].0 >= breakpoints[i].0 {
                return Err(Error::validation(
                    format!("breakpoints[{i}].x"),
                    "positions must be strictly increasing",
                ));
            }
        }
        match (breakpoints.first(), breakpoints.last()) {
            (Some(first), Some(last)) => {
                if left_tail != first.1 {
                    return Err(Error::validation(
                        "left_tail",
                        "must equal the first breakpoint value (the function is continuous)",
                    ));
                }
                if right_tail != last.1 {
                    return Err(Error::validation(
                        "right_tail",
                        "must equal the last breakpoint value (the function is continuous)",
                    ));
                }
            }
            _ => {
                if left_tail != right_tail {
                    return Err(Error::validation(
                        "left_tail/right_tail",
                        "must coincide when there are no breakpoints",
                    ));
                }
            }
        }
        Ok(PiecewiseLinear {
            breakpoints,
            left_tail,
            right_tail,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(Vec::new(), c, c)
    }

    pub fn value(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.is_empty() || t <= bp[0].0 {
            return self.left_tail;
        }
        if t >= bp[bp.len() - 1].0 {
            return self.right_tail;
        }
        // t lies strictly between the first and last node.
        let idx = bp.partition_point(|&(x, _)| x <= t);
        let (x0, y0) = bp[idx - 1];
        let (x1, y1) = bp[idx];
        y0 + (t - x0) * (y1 - y0) / (x1 - x0)
    }

    /// Supremum over the whole line; attained at a node or tail.
    pub fn sup(&self) -> f64 {
        self.breakpoints
            .iter()
            .map(|&(_, y)| y)
            .fold(self.left_tail.max(self.right_tail), f64::max)
    }

    /// Infimum over the whole line; attained at a node or tail.
    pub fn inf(&self) -> f64 {
        self.breakpoints
            .iter()
            .map(|&(_, y)| y)
            .fold(self.left_tail.min(self.right_tail), f64::min)
    }

    /// Node positions, i.e. the points where the slope may change.
    pub fn node_positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.iter().map(|&(x, _)| x)
    }
}

impl From<PiecewiseLinear> for PiecewiseLinearFile {
    fn from(f: PiecewiseLinear) -> Self {
        PiecewiseLinearFile {
            breakpoints: f.breakpoints,
            left_tail: f.left_tail,
            right_tail: f.right_tail,
        }
    }
}

impl TryFrom<PiecewiseLinearFile> for PiecewiseLinear {
    type Error = Error;

    fn try_from(file: PiecewiseLinearFile) -> Result<Self> {
        PiecewiseLinear::new(file.breakpoints, file.left_tail, file.right_tail)
    }
}

/// Strictly positive piecewise-linear weight, bounded with bounded inverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PiecewiseLinearFile", try_from = "PiecewiseLinearFile")]
pub struct WeightFunction {
    shape: PiecewiseLinear,
}

impl WeightFunction {
    pub fn new(breakpoints: Vec<(f64, f64)>, left_tail: f64, right_tail: f64) -> Result<Self> {
        let shape = PiecewiseLinear::new(breakpoints, left_tail, right_tail)?;
        if shape.left_tail <= 0.0 {
            return Err(Error::validation("left_tail", "must be strictly positive"));
        }
        if shape.right_tail <= 0.0 {
            return Err(Error::validation("right_tail", "must be strictly positive"));
        }
        for (i, (_, y)) in shape.breakpoints.iter().enumerate() {
            if *y <= 0.0 {
                return Err(Error::validation(
                    format!("breakpoints[{i}].y"),
                    "must be strictly positive",
                ));
            }
        }
        Ok(WeightFunction { shape })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(Vec::new(), c, c)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.shape.value(t)
    }

    pub fn sup(&self) -> f64 {
        self.shape.sup()
    }

    pub fn inf(&self) -> f64 {
        self.shape.inf()
    }

    pub fn node_positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.shape.node_positions()
    }

    pub fn shape(&self) -> &PiecewiseLinear {
        &self.shape
    }
}

impl From<WeightFunction> for PiecewiseLinearFile {
    fn from(w: WeightFunction) -> Self {
        w.shape.into()
    }
}

impl TryFrom<PiecewiseLinearFile> for WeightFunction {
    type Error = Error;

    fn try_from(file: PiecewiseLinearFile) -> Result<Self> {
        WeightFunction::new(file.breakpoints, file.left_tail, file.right_tail)
    }
}

/// The generating pair of the operator family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosineSystem {
    pub alpha: Homeomorphism,
    pub weight: WeightFunction,
}

/// Orbit direction for weight products and sup scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Running product in scaled mantissa and exponent form.
///
/// Long weight products can leave f64 range even when the downstream
/// quantities (norm ratios, distances) are tame, so the accumulator
/// renormalizes by exact powers of two. Scaling by `2^(+-512)` is exact,
/// which keeps short products bit-identical to naive multiplication.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ScaledProduct {
    mantissa: f64,
    exp2: i64,
}

const TWO_POW_512: f64 = f64::from_bits(0x5FF0_0000_0000_0000);
const TWO_POW_NEG_512: f64 = f64::from_bits(0x1FF0_0000_0000_0000);

impl ScaledProduct {
    pub fn one() -> Self {
        ScaledProduct {
            mantissa: 1.0,
            exp2: 0,
        }
    }

    pub fn mul(&mut self, factor: f64) {
        self.mantissa *= factor;
        self.renormalize();
    }

    pub fn div(&mut self, divisor: f64) {
        self.mantissa /= divisor;
        self.renormalize();
    }

    fn renormalize(&mut self) {
        while self.mantissa.abs() >= TWO_POW_512 {
            self.mantissa *= TWO_POW_NEG_512;
            self.exp2 += 512;
        }
        while self.mantissa != 0.0 && self.mantissa.abs() < TWO_POW_NEG_512 {
            self.mantissa *= TWO_POW_512;
            self.exp2 -= 512;
        }
    }

    /// Collapses to a plain f64, saturating to infinity or zero outside
    /// representable range. Exponent splitting keeps the two scalings exact
    /// whenever the true value is representable.
    pub fn value(&self) -> f64 {
        if self.exp2 == 0 {
            return self.mantissa;
        }
        let h1 = (self.exp2 / 2) as i32;
        let h2 = (self.exp2 - h1 as i64) as i32;
        self.mantissa * 2f64.powi(h1) * 2f64.powi(h2)
    }
}

/// `prod_{j=0}^{n-1} w(alpha^j(t))`, the weight picked up by `T^n` along the
/// forward orbit of `t`. The empty product (`n == 0`) is 1.
pub fn forward_weight_product(sys: &CosineSystem, t: f64, n: u32) -> f64 {
    let mut p = ScaledProduct::one();
    for j in 0..n {
        p.mul(sys.weight.value(sys.alpha.apply_iter(t, j as i64)));
    }
    p.value()
}

/// `prod_{j=1}^{n} w(alpha^{-j}(t))^{-1}`, the weight picked up by `S^n`
/// along the backward orbit of `t`. The empty product (`n == 0`) is 1.
pub fn backward_weight_product(sys: &CosineSystem, t: f64, n: u32) -> f64 {
    let mut p = ScaledProduct::one();
    for j in 1..=n {
        p.div(sys.weight.value(sys.alpha.apply_iter(t, -(j as i64))));
    }
    p.value()
}

/// Adjoint forward action on atoms: a point mass at `t` with coefficient `c`
/// moves to `alpha^n(t)` with coefficient `c` times the forward weight
/// product. `n == 0` is the identity.
pub fn adjoint_t(sys: &CosineSystem, m: &AtomicMeasure, n: u32) -> AtomicMeasure {
    AtomicMeasure::new(m.atoms().iter().map(|a| {
        (
            sys.alpha.apply_iter(a.position, n as i64),
            a.mass * forward_weight_product(sys, a.position, n),
        )
    }))
}

/// Adjoint backward action on atoms: a point mass at `t` with coefficient
/// `c` moves to `alpha^{-n}(t)` with coefficient `c` times the backward
/// weight product. Inverse of [`adjoint_t`] at every order.
pub fn adjoint_s(sys: &CosineSystem, m: &AtomicMeasure, n: u32) -> AtomicMeasure {
    AtomicMeasure::new(m.atoms().iter().map(|a| {
        (
            sys.alpha.apply_iter(a.position, -(n as i64)),
            a.mass * backward_weight_product(sys, a.position, n),
        )
    }))
}

/// The adjoint cosine iterate `C_n m = (T^n m + S^n m) / 2`, with `C_0` the
/// identity.
pub fn cosine(sys: &CosineSystem, m: &AtomicMeasure, n: u32) -> AtomicMeasure {
    if n == 0 {
        return m.clone();
    }
    AtomicMeasure::linear_combine(0.5, &adjoint_t(sys, m, n), 0.5, &adjoint_s(sys, m, n))
}

/// Pointwise evaluation of the function-side operator iterates: forward is
/// `(T^n f)(t)`, backward is `(S^n f)(t)`.
pub fn apply_function_operator(
    sys: &CosineSystem,
    f: impl Fn(f64) -> f64,
    t: f64,
    n: u32,
    direction: Direction,
) -> f64 {
    match direction {
        Direction::Forward => {
            forward_weight_product(sys, t, n) * f(sys.alpha.apply_iter(t, n as i64))
        }
        Direction::Backward => {
            backward_weight_product(sys, t, n) * f(sys.alpha.apply_iter(t, -(n as i64)))
        }
    }
}

/// The pairing `<m, f> = sum_i mass_i * f(position_i)` between an atomic
/// measure and a bounded continuous function.
pub fn duality_pairing(m: &AtomicMeasure, f: impl Fn(f64) -> f64) -> f64 {
    m.atoms().iter().map(|a| a.mass * f(a.position)).sum()
}

/// One member of an indexed operator family.
///
/// `Explicit` carries its own generating pair and acts by a single operator
/// application. `Power` is the n-step specialization of a shared base pair:
/// the map is `alpha^n` and the weight is the n-step forward product, which
/// makes its single application agree with the n-th power of the base
/// operator.
#[derive(Clone, Debug)]
pub enum FamilyMember {
    Explicit(CosineSystem),
    Power { base: CosineSystem, steps: u32 },
}

impl FamilyMember {
    pub fn power(base: CosineSystem, steps: u32) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("steps", "must be at least 1"));
        }
        Ok(FamilyMember::Power { base, steps })
    }

    fn parts(&self) -> (&CosineSystem, u32) {
        match self {
            FamilyMember::Explicit(sys) => (sys, 1),
            FamilyMember::Power { base, steps } => (base, *steps),
        }
    }

    /// The member's map `alpha_z`.
    pub fn alpha(&self) -> Homeomorphism {
        let (sys, steps) = self.parts();
        sys.alpha.iterate(steps as i64)
    }

    /// `w_z(t)`.
    pub fn weight_value(&self, t: f64) -> f64 {
        let (sys, steps) = self.parts();
        forward_weight_product(sys, t, steps)
    }

    /// `(w_z o alpha_z^{-1})^{-1}(t)`, the weight of one backward step.
    pub fn backward_weight_value(&self, t: f64) -> f64 {
        let (sys, steps) = self.parts();
        backward_weight_product(sys, t, steps)
    }

    /// `prod_{j=0}^{1} (w_z o alpha_z^j)(t)`, the two-step forward weight.
    pub fn two_step_forward(&self, t: f64) -> f64 {
        let (sys, steps) = self.parts();
        forward_weight_product(sys, t, 2 * steps)
    }

    /// `prod_{j=1}^{2} (w_z o alpha_z^{-j})(t)^{-1}`, the two-step backward
    /// weight.
    pub fn two_step_backward(&self, t: f64) -> f64 {
        let (sys, steps) = self.parts();
        backward_weight_product(sys, t, 2 * steps)
    }

    /// One application of the member's adjoint forward operator.
    pub fn adjoint_t(&self, m: &AtomicMeasure) -> AtomicMeasure {
        let (sys, steps) = self.parts();
        adjoint_t(sys, m, steps)
    }

    pub fn adjoint_s(&self, m: &AtomicMeasure) -> AtomicMeasure {
        let (sys, steps) = self.parts();
        adjoint_s(sys, m, steps)
    }

    /// The square of the member's adjoint forward operator.
    pub fn adjoint_t_squared(&self, m: &AtomicMeasure) -> AtomicMeasure {
        let (sys, steps) = self.parts();
        adjoint_t(sys, m, 2 * steps)
    }

    pub fn adjoint_s_squared(&self, m: &AtomicMeasure) -> AtomicMeasure {
        let (sys, steps) = self.parts();
        adjoint_s(sys, m, 2 * steps)
    }

    /// The member's adjoint cosine `(T_z + S_z) m / 2`.
    pub fn cosine(&self, m: &AtomicMeasure) -> AtomicMeasure {
        let (sys, steps) = self.parts();
        cosine(sys, m, steps)
    }

    /// Points of `window` where any of the four weight functionals above can
    /// change slope. Sup scans add these to their sampling grids so that
    /// piecewise-linear extrema are hit exactly.
    pub fn weight_kink_points(&self, window: &crate::measure::CompactWindow) -> Vec<f64> {
        let (sys, steps) = self.parts();
        let span = 2 * steps as i64;
        let mut points = Vec::new();
        for x in sys.weight.node_positions() {
            for m in -span..=span {
                let p = sys.alpha.apply_iter(x, m);
                if window.contains(p) {
                    points.push(p);
                }
            }
        }
        points
    }
}
