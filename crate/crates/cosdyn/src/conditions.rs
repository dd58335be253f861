//! Numerical checks for the decay conditions that drive the witness
//! construction.
//!
//! Two flavours are covered. The limit conditions ask that the product of
//! forward and backward sup-products tends to zero while one of the
//! doubled-step sup-products does too; they are decided on a finite horizon
//! with an explicit monotonicity heuristic. The partition conditions are the
//! pointwise sufficient inequalities behind the witness construction: for
//! each family member, a window is split into sets `A`, `D`, `E` and eight
//! quantities built from weight suprema and restricted masses must all fall
//! below a tolerance.
//!
//! All suprema are sampled on deterministic grids: window endpoints, every
//! slope change of the scanned weight functional pulled into the window, the
//! endpoints of the Borel sets involved, plus a uniform refinement. For
//! piecewise-linear data the one-step extrema are attained on such grids.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dynamics::{
    backward_weight_product, forward_weight_product, CosineSystem, Direction, FamilyMember,
    ScaledProduct,
};
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, CompactWindow};

/// Default uniform refinement step for sampling grids.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

const MAX_GRID_POINTS: usize = 20_000_000;

/// A finite union of half-open intervals `[lo, hi)` in canonical form:
/// sorted, pairwise disjoint, with touching intervals merged.
///
/// Half-open intervals are closed under intersection, union, and
/// complement-within by plain endpoint arithmetic, which keeps set equality
/// exact. Windows convert to sets via [`BorelSet::window`], which nudges the
/// upper endpoint up by one ulp so that both closed endpoints are members.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorelSet {
    intervals: Vec<(f64, f64)>,
}

impl BorelSet {
    pub fn empty() -> Self {
        BorelSet {
            intervals: Vec::new(),
        }
    }

    /// Builds a set from arbitrary `[lo, hi)` pieces; empty pieces are
    /// dropped, overlapping and touching pieces are merged.
    pub fn from_intervals(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in intervals {
            if lo.is_nan() || hi.is_nan() {
                return Err(Error::validation("intervals", "endpoints must not be NaN"));
            }
            if lo < hi {
                pieces.push((lo, hi));
            }
        }
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(BorelSet { intervals: merged })
    }

    /// The window as a set containing both of its closed endpoints.
    pub fn window(window: &CompactWindow) -> Self {
        BorelSet {
            intervals: vec![(window.lo(), window.hi().next_up())],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t < hi)
    }

    pub fn union(&self, other: &BorelSet) -> BorelSet {
        Self::from_intervals(self.intervals.iter().chain(other.intervals.iter()).copied())
            .expect("canonical interval endpoints are never NaN")
    }

    pub fn intersect(&self, other: &BorelSet) -> BorelSet {
        let mut pieces = Vec::new();
        for &(lo1, hi1) in &self.intervals {
            for &(lo2, hi2) in &other.intervals {
                let lo = lo1.max(lo2);
                let hi = hi1.min(hi2);
                if lo < hi {
                    pieces.push((lo, hi));
                }
            }
        }
        Self::from_intervals(pieces).expect("canonical interval endpoints are never NaN")
    }

    /// `self` minus `other`.
    pub fn difference(&self, other: &BorelSet) -> BorelSet {
        let mut pieces = Vec::new();
        for &(lo, hi) in &self.intervals {
            let mut cursor = lo;
            for &(olo, ohi) in &other.intervals {
                if ohi <= cursor {
                    continue;
                }
                if olo >= hi {
                    break;
                }
                if olo > cursor {
                    pieces.push((cursor, olo));
                }
                cursor = cursor.max(ohi);
                if cursor >= hi {
                    break;
                }
            }
            if cursor < hi {
                pieces.push((cursor, hi));
            }
        }
        Self::from_intervals(pieces).expect("canonical interval endpoints are never NaN")
    }

    /// `universe` minus `self`.
    pub fn complement_within(&self, universe: &BorelSet) -> BorelSet {
        universe.difference(self)
    }

    pub fn is_disjoint(&self, other: &BorelSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_subset_of(&self, other: &BorelSet) -> bool {
        self.difference(other).is_empty()
    }

    /// All interval endpoints; used to seed sampling grids.
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().flat_map(|&(lo, hi)| [lo, hi])
    }
}

/// A window split for the partition conditions: `A` is the discarded part,
/// and `D`, `E` partition the rest of the window between the forward-decay
/// and backward-decay inequalities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionScheme {
    a: BorelSet,
    d: BorelSet,
    e: BorelSet,
    window: CompactWindow,
}

impl PartitionScheme {
    /// Validates `A` inside the window, `D` and `E` disjoint, and
    /// `D union E` equal to the window minus `A`.
    pub fn new(a: BorelSet, d: BorelSet, e: BorelSet, window: CompactWindow) -> Result<Self> {
        let k = BorelSet::window(&window);
        if !a.is_subset_of(&k) {
            return Err(Error::validation("a", "must be a subset of the window"));
        }
        if !d.is_disjoint(&e) {
            return Err(Error::validation("d/e", "must be disjoint"));
        }
        if d.union(&e) != a.complement_within(&k) {
            return Err(Error::validation(
                "d/e",
                "must partition the window minus `a`",
            ));
        }
        Ok(PartitionScheme { a, d, e, window })
    }

    /// The degenerate split with everything on the forward side:
    /// `A = E = empty`, `D = K`.
    pub fn d_equals_k(window: CompactWindow) -> Self {
        PartitionScheme {
            a: BorelSet::empty(),
            d: BorelSet::window(&window),
            e: BorelSet::empty(),
            window,
        }
    }

    /// The degenerate split with everything on the backward side:
    /// `A = D = empty`, `E = K`.
    pub fn e_equals_k(window: CompactWindow) -> Self {
        PartitionScheme {
            a: BorelSet::empty(),
            d: BorelSet::empty(),
            e: BorelSet::window(&window),
            window,
        }
    }

    pub fn a(&self) -> &BorelSet {
        &self.a
    }

    pub fn d(&self) -> &BorelSet {
        &self.d
    }

    pub fn e(&self) -> &BorelSet {
        &self.e
    }

    pub fn window(&self) -> CompactWindow {
        self.window
    }

    /// The kept part of the window, `K` minus `A`.
    pub fn complement_of_a(&self) -> BorelSet {
        self.a.complement_within(&BorelSet::window(&self.window))
    }
}

/// Builds the deterministic sampling grid over a window: uniform refinement
/// at `step`, both window endpoints, and any extra points that land inside
/// the window.
pub(crate) fn window_grid(
    window: &CompactWindow,
    step: f64,
    extras: impl IntoIterator<Item = f64>,
) -> Result<Vec<f64>> {
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::invalid("grid_step", "must be a positive real"));
    }
    let span = window.hi() - window.lo();
    let count = (span / step).floor();
    if count >= MAX_GRID_POINTS as f64 {
        return Err(Error::invalid(
            "grid_step",
            "too fine for this window (grid would exceed the point cap)",
        ));
    }
    let mut points = Vec::with_capacity(count as usize + 2);
    for k in 0..=count as usize {
        let p = window.lo() + k as f64 * step;
        if p <= window.hi() {
            points.push(p);
        }
    }
    points.push(window.hi());
    points.extend(extras.into_iter().filter(|p| window.contains(*p)));
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(points)
}

/// Sampled supremum of `f` over the grid points belonging to `set`.
/// The supremum over an empty sample is 0 by convention.
pub(crate) fn sampled_sup(points: &[f64], set: &BorelSet, f: impl Fn(f64) -> f64) -> f64 {
    points
        .iter()
        .filter(|&&t| set.contains(t))
        .map(|&t| f(t))
        .fold(0.0, f64::max)
}

fn pullback_extras(sys: &CosineSystem, direction: Direction, n_max: u32) -> Vec<f64> {
    let mut extras = Vec::new();
    for x in sys.weight.node_positions() {
        match direction {
            // The forward product at order n kinks where alpha^j(t) hits a
            // weight node for some j < n, i.e. at alpha^{-j}(node).
            Direction::Forward => {
                for j in 0..n_max as i64 {
                    extras.push(sys.alpha.apply_iter(x, -j));
                }
            }
            // The backward product kinks at alpha^{j}(node) for 1 <= j <= n.
            Direction::Backward => {
                for j in 1..=n_max as i64 {
                    extras.push(sys.alpha.apply_iter(x, j));
                }
            }
        }
    }
    extras
}

/// Sampled supremum over the window of the order-`n` weight product.
pub fn sup_product(
    sys: &CosineSystem,
    window: &CompactWindow,
    n: u32,
    direction: Direction,
    grid_step: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let grid = window_grid(window, grid_step, pullback_extras(sys, direction, n))?;
    let sup = grid
        .iter()
        .map(|&t| match direction {
            Direction::Forward => forward_weight_product(sys, t, n),
            Direction::Backward => backward_weight_product(sys, t, n),
        })
        .fold(0.0, f64::max);
    Ok(sup)
}

/// Per-order sampled sup-products over a window, for orders `1..=n_max`.
#[derive(Clone, Debug, Serialize)]
pub struct SupProductCurve {
    pub window: CompactWindow,
    pub direction: Direction,
    /// `values[i]` is the sampled supremum at order `i + 1` together with
    /// the number of sample points.
    pub values: Vec<(f64, usize)>,
}

impl SupProductCurve {
    /// The sampled supremum at order `n` (1-indexed).
    pub fn value_at(&self, n: u32) -> f64 {
        self.values[(n - 1) as usize].0
    }
}

/// Computes the whole sup-product curve in one sweep.
///
/// The grid is shared by all orders and includes the weight-node pullbacks
/// for every order up to `n_max`, so each per-point product accumulates in
/// the same order as [`sup_product`] evaluates it.
pub fn sup_product_curve(
    sys: &CosineSystem,
    window: &CompactWindow,
    n_max: u32,
    direction: Direction,
    grid_step: f64,
) -> Result<SupProductCurve> {
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be at least 1"));
    }
    let grid = window_grid(window, grid_step, pullback_extras(sys, direction, n_max))?;
    let mut acc = vec![ScaledProduct::one(); grid.len()];
    let mut values = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        for (t, p) in grid.iter().zip(acc.iter_mut()) {
            match direction {
                Direction::Forward => {
                    p.mul(sys.weight.value(sys.alpha.apply_iter(*t, n as i64 - 1)))
                }
                Direction::Backward => {
                    p.div(sys.weight.value(sys.alpha.apply_iter(*t, -(n as i64))))
                }
            }
        }
        let sup = acc.iter().map(ScaledProduct::value).fold(0.0, f64::max);
        values.push((sup, grid.len()));
    }
    Ok(SupProductCurve {
        window: *window,
        direction,
        values,
    })
}

/// Three-way verdict for a decay condition on a finite horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Classifies a positive sequence against a tolerance using its final value
/// and the monotonicity of its last quarter.
///
/// Holds: the final value is below `tol` and the last quarter never
/// increases. Fails: the last quarter never decreases while the final value
/// is still at or above `tol` (this covers constant sequences, which can
/// never reach the tolerance), or the sequence has outright exceeded
/// `1/tol`. Anything else is inconclusive.
fn classify(values: &[f64], tol: f64) -> Verdict {
    let len = values.len();
    let tail = &values[len - (len / 4).max(1)..];
    let final_value = values[len - 1];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let non_decreasing = tail.windows(2).all(|w| w[1] >= w[0]);
    if final_value < tol && non_increasing {
        Verdict::Holds
    } else if (non_decreasing && final_value >= tol) || final_value > 1.0 / tol {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

/// Report for the three limit conditions on a finite horizon.
///
/// Condition (a) is the product of the forward and backward sup-products at
/// order n; conditions (b) and (c) are the forward and backward sup-products
/// at order 2n. The overall verdict holds when (a) holds together with (b)
/// or (c).
#[derive(Clone, Debug, Serialize)]
pub struct LimitConditionReport {
    pub window: CompactWindow,
    pub horizon: u32,
    pub tol: f64,
    pub grid_step: f64,
    pub values_a: Vec<f64>,
    pub values_b: Vec<f64>,
    pub values_c: Vec<f64>,
    pub verdict_a: Verdict,
    pub verdict_b: Verdict,
    pub verdict_c: Verdict,
    pub overall: Verdict,
}

/// Evaluates the three limit conditions for `n = 1..=horizon`.
pub fn check_limit_conditions(
    sys: &CosineSystem,
    window: &CompactWindow,
    horizon: u32,
    tol: f64,
    grid_step: f64,
) -> Result<LimitConditionReport> {
    if horizon < 4 {
        return Err(Error::invalid(
            "horizon",
            "must be at least 4 so the last-quarter heuristic is meaningful",
        ));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::invalid("tol", "must be a positive real"));
    }
    // Conditions (b) and (c) read the curves at order 2n.
    let forward = sup_product_curve(sys, window, 2 * horizon, Direction::Forward, grid_step)?;
    let backward = sup_product_curve(sys, window, 2 * horizon, Direction::Backward, grid_step)?;

    let mut values_a = Vec::with_capacity(horizon as usize);
    let mut values_b = Vec::with_capacity(horizon as usize);
    let mut values_c = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        values_a.push(forward.value_at(n) * backward.value_at(n));
        values_b.push(forward.value_at(2 * n));
        values_c.push(backward.value_at(2 * n));
    }

    let verdict_a = classify(&values_a, tol);
    let verdict_b = classify(&values_b, tol);
    let verdict_c = classify(&values_c, tol);
    let overall = if verdict_a == Verdict::Holds
        && (verdict_b == Verdict::Holds || verdict_c == Verdict::Holds)
    {
        Verdict::Holds
    } else if verdict_a == Verdict::Fails
        || (verdict_b == Verdict::Fails && verdict_c == Verdict::Fails)
    {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };

    Ok(LimitConditionReport {
        window: *window,
        horizon,
        tol,
        grid_step,
        values_a,
        values_b,
        values_c,
        verdict_a,
        verdict_b,
        verdict_c,
        overall,
    })
}

/// First order `n <= horizon` at which the forward weight product at `t`
/// exceeds `threshold`, if any.
pub fn check_forward_divergence(
    sys: &CosineSystem,
    t: f64,
    threshold: f64,
    horizon: u32,
) -> Result<Option<u32>> {
    if threshold <= 0.0 || !threshold.is_finite() {
        return Err(Error::invalid("threshold", "must be a positive real"));
    }
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    let mut p = ScaledProduct::one();
    for n in 1..=horizon {
        p.mul(sys.weight.value(sys.alpha.apply_iter(t, n as i64 - 1)));
        if p.value() > threshold {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// One indexed entry for the partition-condition checker: a family member
/// together with the window split it is tested against.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub index: u32,
    pub member: FamilyMember,
    pub scheme: PartitionScheme,
}

/// The two degenerate splits used by the power-family specialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionCase {
    DEqualsK,
    EEqualsK,
}

/// The power-family specialization: entry `n` carries the n-step member of
/// `sys` (map `alpha^n`, weight the n-step forward product) and one of the
/// two degenerate window splits.
pub fn power_family_entries(
    sys: &CosineSystem,
    window: CompactWindow,
    case: PartitionCase,
    horizon: u32,
) -> Result<Vec<FamilyEntry>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    let scheme = match case {
        PartitionCase::DEqualsK => PartitionScheme::d_equals_k(window),
        PartitionCase::EEqualsK => PartitionScheme::e_equals_k(window),
    };
    (1..=horizon)
        .map(|n| {
            Ok(FamilyEntry {
                index: n,
                member: FamilyMember::power(sys.clone(), n)?,
                scheme: scheme.clone(),
            })
        })
        .collect()
}

/// Per-entry outcome of the partition conditions.
///
/// `masses` holds the restricted total variations `|mu|(A)` and `|nu|(A)`.
/// `lhs` holds the six sup-based left-hand sides, in order: the four cross
/// products of the one-step forward sup (over the kept window and over `D`)
/// with the one-step backward sup (over the kept window and over `E`), then
/// the two-step forward sup over `D`, then the two-step backward sup over
/// `E`. `holds` records each of the eight strict comparisons against the
/// tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionConditionEntry {
    pub index: u32,
    pub mu_mass_on_a: f64,
    pub nu_mass_on_a: f64,
    pub lhs: [f64; 6],
    pub holds: [bool; 8],
    pub all_hold: bool,
}

/// Report for the partition conditions over an indexed family.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionConditionReport {
    pub epsilon: f64,
    pub grid_step: f64,
    pub window: CompactWindow,
    pub entries: Vec<PartitionConditionEntry>,
    pub all_hold_indices: Vec<u32>,
    /// First index such that every later listed entry also holds; the
    /// finite-horizon stand-in for "all large orders".
    pub suffix_start: Option<u32>,
}

impl PartitionConditionReport {
    pub fn all_hold_set(&self) -> BTreeSet<u32> {
        self.all_hold_indices.iter().copied().collect()
    }
}

/// Evaluates the eight partition inequalities for every entry.
///
/// Both measures must be supported inside the shared window. The suprema
/// are sampled on grids seeded with each member's weight kinks and the
/// relevant set endpoints; sups over empty sets are 0, which makes the
/// conditions involving an empty side hold vacuously.
pub fn check_partition_conditions(
    entries: &[FamilyEntry],
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    epsilon: f64,
    grid_step: f64,
) -> Result<PartitionConditionReport> {
    if entries.is_empty() {
        return Err(Error::invalid("entries", "must not be empty"));
    }
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon", "must be a positive real"));
    }
    let window = entries[0].scheme.window();
    if entries.iter().any(|e| e.scheme.window() != window) {
        return Err(Error::invalid(
            "entries",
            "all schemes must share one window",
        ));
    }
    for (name, m) in [("mu", mu), ("nu", nu)] {
        if m.is_empty() {
            return Err(Error::validation(name, "must be a nonzero measure"));
        }
        if let Some(atom) = m.atoms().iter().find(|a| !window.contains(a.position)) {
            return Err(Error::validation(
                name,
                format!("atom at {} lies outside the window", atom.position),
            ));
        }
    }

    let mut report_entries = Vec::with_capacity(entries.len());
    for entry in entries {
        let scheme = &entry.scheme;
        let member = &entry.member;
        let kept = scheme.complement_of_a();

        let mu_mass_on_a = mu.restrict(|t| scheme.a().contains(t)).total_variation();
        let nu_mass_on_a = nu.restrict(|t| scheme.a().contains(t)).total_variation();

        let extras: Vec<f64> = member
            .weight_kink_points(&window)
            .into_iter()
            .chain(kept.endpoints())
            .chain(scheme.d().endpoints())
            .chain(scheme.e().endpoints())
            .collect();
        let grid = window_grid(&window, grid_step, extras.iter().copied())?;

        let sup_w_kept = sampled_sup(&grid, &kept, |t| member.weight_value(t));
        let sup_w_d = sampled_sup(&grid, scheme.d(), |t| member.weight_value(t));
        let sup_bw_kept = sampled_sup(&grid, &kept, |t| member.backward_weight_value(t));
        let sup_bw_e = sampled_sup(&grid, scheme.e(), |t| member.backward_weight_value(t));
        let sup_two_fwd_d = sampled_sup(&grid, scheme.d(), |t| member.two_step_forward(t));
        let sup_two_bwd_e = sampled_sup(&grid, scheme.e(), |t| member.two_step_backward(t));

        let lhs = [
            sup_w_kept * sup_w_d,
            sup_w_kept * sup_bw_e,
            sup_bw_kept * sup_w_d,
            sup_bw_kept * sup_bw_e,
            sup_two_fwd_d,
            sup_two_bwd_e,
        ];
        let holds = [
            mu_mass_on_a < epsilon,
            nu_mass_on_a < epsilon,
            lhs[0] < epsilon,
            lhs[1] < epsilon,
            lhs[2] < epsilon,
            lhs[3] < epsilon,
            lhs[4] < epsilon,
            lhs[5] < epsilon,
        ];
        report_entries.push(PartitionConditionEntry {
            index: entry.index,
            mu_mass_on_a,
            nu_mass_on_a,
            lhs,
            all_hold: holds.iter().all(|&h| h),
            holds,
        });
    }

    let all_hold_indices: Vec<u32> = report_entries
        .iter()
        .filter(|e| e.all_hold)
        .map(|e| e.index)
        .collect();
    let suffix_start = report_entries
        .iter()
        .rev()
        .take_while(|e| e.all_hold)
        .last()
        .map(|e| e.index);

    Ok(PartitionConditionReport {
        epsilon,
        grid_step,
        window,
        entries: report_entries,
        all_hold_indices,
        suffix_start,
    })
}

/// An explicitly listed Furstenberg family over a finite index universe:
/// members are non-empty subsets of the universe and membership is closed
/// under taking supersets within the universe.
#[derive(Clone, Debug, PartialEq)]
pub struct FurstenbergFamily {
    universe: BTreeSet<u32>,
    members: BTreeSet<BTreeSet<u32>>,
}

impl FurstenbergFamily {
    pub fn new(
        universe: impl IntoIterator<Item = u32>,
        members: impl IntoIterator<Item = BTreeSet<u32>>,
    ) -> Result<Self> {
        let universe: BTreeSet<u32> = universe.into_iter().collect();
        let members: BTreeSet<BTreeSet<u32>> = members.into_iter().collect();
        for set in &members {
            if set.is_empty() {
                return Err(Error::validation(
                    "members",
                    "the empty set cannot belong to a Furstenberg family",
                ));
            }
            if !set.is_subset(&universe) {
                return Err(Error::validation(
                    "members",
                    "every member must be a subset of the universe",
                ));
            }
            // Adding any one missing element must stay inside the family;
            // by induction this gives closure under all supersets.
            for u in universe.difference(set) {
                let mut bigger = set.clone();
                bigger.insert(*u);
                if !members.contains(&bigger) {
                    return Err(Error::validation(
                        "members",
                        "family is not closed under supersets within the universe",
                    ));
                }
            }
        }
        Ok(FurstenbergFamily { universe, members })
    }

    pub fn contains(&self, set: &BTreeSet<u32>) -> bool {
        self.members.contains(set)
    }

    pub fn universe(&self) -> &BTreeSet<u32> {
        &self.universe
    }
}
