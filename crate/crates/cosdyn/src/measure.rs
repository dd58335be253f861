//! Finitely-atomic signed measures on the real line.
//!
//! A measure here is a finite signed combination of point masses. Its
//! total-variation norm is the sum of absolute atom masses, and every value
//! is kept in canonical form: atoms sorted by position, coincident positions
//! merged by mass addition, zero masses dropped. Canonical form makes
//! equality, serialization, and distance computations deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single point mass: a position on the line and a signed coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

/// Wire form of a measure: `{"atoms": [[position, mass], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureFile {
    pub atoms: Vec<(f64, f64)>,
}

/// A finite signed combination of point masses, always in canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "MeasureFile", try_from = "MeasureFile")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// The zero measure.
    pub fn empty() -> Self {
        AtomicMeasure { atoms: Vec::new() }
    }

    /// Builds a measure from `(position, mass)` pairs, normalizing with
    /// exact position equality for the merge step.
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self::with_merge_tolerance(pairs, 0.0)
    }

    /// Builds a measure, merging atoms whose positions differ by at most
    /// `tol` from the first atom of their run. A tolerance of zero merges
    /// exactly coincident positions only. Useful for orbits whose positions
    /// agree up to rounding.
    pub fn with_merge_tolerance(pairs: impl IntoIterator<Item = (f64, f64)>, tol: f64) -> Self {
        let tol = tol.max(0.0);
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut atoms: Vec<Atom> = Vec::with_capacity(pairs.len());
        for (position, mass) in pairs {
            match atoms.last_mut() {
                // Runs are anchored at their first position so chains of
                // nearby atoms cannot drift arbitrarily far.
                Some(last) if position - last.position <= tol => last.mass += mass,
                _ => atoms.push(Atom { position, mass }),
            }
        }
        atoms.retain(|a| a.mass != 0.0);
        AtomicMeasure { atoms }
    }

    /// A single unit of signed mass at `position`.
    pub fn point_mass(position: f64, mass: f64) -> Self {
        Self::new([(position, mass)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Smallest atom position, if any. Atoms are stored sorted.
    pub fn min_position(&self) -> Option<f64> {
        self.atoms.first().map(|a| a.position)
    }

    pub fn max_position(&self) -> Option<f64> {
        self.atoms.last().map(|a| a.position)
    }

    /// Total-variation norm: the sum of absolute atom masses.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass.abs()).sum()
    }

    /// Restriction to `{t : pred(t)}`. Keeps the surviving atoms untouched,
    /// so restricting to a set and to its complement partitions the atom
    /// list exactly.
    pub fn restrict(&self, pred: impl Fn(f64) -> bool) -> Self {
        AtomicMeasure {
            atoms: self
                .atoms
                .iter()
                .copied()
                .filter(|a| pred(a.position))
                .collect(),
        }
    }

    /// `a * m1 + b * m2`, renormalized.
    pub fn linear_combine(a: f64, m1: &AtomicMeasure, b: f64, m2: &AtomicMeasure) -> Self {
        let pairs = m1
            .atoms
            .iter()
            .map(|atom| (atom.position, a * atom.mass))
            .chain(m2.atoms.iter().map(|atom| (atom.position, b * atom.mass)));
        Self::new(pairs)
    }

    /// The measure scaled by `a`.
    pub fn scaled(&self, a: f64) -> Self {
        Self::linear_combine(a, self, 0.0, &Self::empty())
    }

    /// Total-variation distance `|self - other|(R)`.
    pub fn tv_distance(&self, other: &AtomicMeasure) -> f64 {
        Self::linear_combine(1.0, self, -1.0, other).total_variation()
    }

    /// Renormalizes with a positive merge tolerance. Intended for comparing
    /// measures whose atom positions agree only up to rounding.
    pub fn coalesced(&self, tol: f64) -> Self {
        Self::with_merge_tolerance(self.atoms.iter().map(|a| (a.position, a.mass)), tol)
    }
}

impl From<AtomicMeasure> for MeasureFile {
    fn from(m: AtomicMeasure) -> Self {
        MeasureFile {
            atoms: m.atoms.iter().map(|a| (a.position, a.mass)).collect(),
        }
    }
}

impl TryFrom<MeasureFile> for AtomicMeasure {
    type Error = Error;

    fn try_from(file: MeasureFile) -> Result<Self> {
        for (i, (position, mass)) in file.atoms.iter().enumerate() {
            if !position.is_finite() {
                return Err(Error::validation(
                    format!("atoms[{i}].position"),
                    "must be finite",
                ));
            }
            if !mass.is_finite() {
                return Err(Error::validation(
                    format!("atoms[{i}].mass"),
                    "must be finite",
                ));
            }
        }
        Ok(AtomicMeasure::new(file.atoms))
    }
}

/// Wire form of a window: `{"lo": ..., "hi": ...}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WindowFile {
    pub lo: f64,
    pub hi: f64,
}

/// A closed bounded interval `[lo, hi]` standing in for a compact subset of
/// the line. Degenerate windows (`lo == hi`) are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "WindowFile", try_from = "WindowFile")]
pub struct CompactWindow {
    lo: f64,
    hi: f64,
}

impl CompactWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::validation("window", "endpoints must be finite"));
        }
        if lo > hi {
            return Err(Error::validation("window", "requires lo <= hi"));
        }
        Ok(CompactWindow { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

impl From<CompactWindow> for WindowFile {
    fn from(w: CompactWindow) -> Self {
        WindowFile { lo: w.lo, hi: w.hi }
    }
}

impl TryFrom<WindowFile> for CompactWindow {
    type Error = Error;

    fn try_from(file: WindowFile) -> Result<Self> {
        CompactWindow::new(file.lo, file.hi)
    }
}
