//! Hyperbolic-geometry toolkit for punctured-surface group representations
//! into PSL(2,C): ideal triangulations and normal curves, Fock-Goncharov
//! edge coordinates, pleated-plane development and straightening, simple
//! closed curve enumeration, strip deformations, and domination
//! certificates over the simple length spectrum.

pub mod curves;
pub(crate) mod devtree;
pub mod domination;
mod error;
pub mod io;
pub mod moebius;
pub mod pleat;
pub mod presentation;
pub mod representation;
pub mod strip;
pub mod surface;
pub mod word;

pub use error::Error;

/// Numeric tolerances used across validation checks. The defaults follow
/// the documented contract values; the CLI can override `check` via
/// `--tolerance`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Fixed-point and relation residual checks.
    pub check: f64,
    /// Parabolic boundary detection on tr^2.
    pub parabolic: f64,
    /// Pairwise distinctness of sphere points.
    pub distinct: f64,
    /// Strict-verdict margin on sup ratios.
    pub strict_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            check: 1e-8,
            parabolic: 1e-9,
            distinct: 1e-12,
            strict_margin: 1e-9,
        }
    }
}
