//! Cosine operator dynamics for weighted composition operators on atomic
//! measures.
//!
//! A system pairs an increasing homeomorphism `alpha` of the real line with
//! a positive weight `w`. The weighted composition operator and its inverse,
//!
//! ```text
//! (T f)(t) = w(t) f(alpha(t))        (S f)(t) = f(alpha_inv(t)) / w(alpha_inv(t))
//! ```
//!
//! generate the cosine sequence `C_n = (T^n + S^n) / 2`, which satisfies the
//! d'Alembert identity `2 C_m C_n = C_{m+n} + C_{m-n}`. This crate works on
//! the dual side: measures are finite combinations of point masses, the
//! adjoint actions move atoms along orbits of `alpha` while scaling masses
//! by orbit products of the weight, and all sizes are measured in total
//! variation.
//!
//! The library answers three questions about such a system.
//!
//! - [`conditions`] checks decay conditions numerically: products of
//!   windowed weight suprema along orbits, scanned over orders, with a
//!   three-way verdict per condition; and a family of pointwise partition
//!   inequalities that certify witness constructions order by order.
//! - [`witness`] builds, for a pair of measures `mu` and `nu`, a measure
//!   `phi` close to `mu` whose scaled cosine image lands close to `nu`, and
//!   independently certifies the norm bookkeeping behind it. When the scan
//!   stabilizes, every neighbourhood of `mu` keeps reaching every
//!   neighbourhood of `nu` through scaled cosine images at all large
//!   orders.
//! - [`dynamics`] exposes the raw operator actions, including exact orbit
//!   products kept in scaled mantissa and exponent form so that thousands of
//!   multiplications neither overflow nor lose the exactness of small cases.
//!
//! [`measure`] holds the atomic measure arithmetic, [`scenarios`] ships a
//! ready-made ramp system plus JSON file I/O, and [`cli`] wires everything
//! into a command line tool.

pub mod cli;
pub mod conditions;
pub mod dynamics;
pub mod error;
pub mod measure;
pub mod scenarios;
pub mod witness;

pub use error::{Error, Result};
