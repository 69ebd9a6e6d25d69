//! Goodness-of-fit tests for normality based on the empirical distribution
//! function (EDF) when the mean and variance are estimated from the sample.
//!
//! When `N(μ, σ²)` is fitted by maximum likelihood and the fitted CDF is
//! compared with the empirical CDF, the classical EDF statistics —
//! Kolmogorov–Smirnov `D`, Cramér–von Mises `ω²`, Anderson–Darling `A²`,
//! and the centered (Watson-type) variants `G` and `U²` — no longer follow
//! their textbook null distributions.  The estimated-parameter empirical
//! process converges to a centered Gaussian process whose covariance kernel
//! picks up correction terms from the estimators, and the large-sample
//! behaviour of every statistic is governed by that kernel.
//!
//! This crate provides the full computational chain:
//!
//! * [`numerics`] — special functions (`Φ`, `φ`, `Φ⁻¹`), Gauss–Legendre
//!   quadrature, and global maximization of |f| used by everything else.
//! * [`kernels`] — closed forms of the limiting covariance kernels: the
//!   Brownian-bridge kernel `K₀`, the estimated-parameter kernel `K_η`, and
//!   the doubly-centered kernel `K_ξ`.
//! * [`spectral`] — Nyström discretization of the covariance operators and
//!   their leading eigenvalues (power iteration with deflation), including a
//!   validation mode that reproduces the classical simple-hypothesis spectra.
//! * [`alternatives`] — local alternative families (Lehmann, two local
//!   proportional-hazard style families, normal contamination) with exact
//!   `θ`-derivatives at the null and exact samplers.
//! * [`slopes`] — local approximate Bahadur slopes of the five statistics
//!   and of the likelihood-ratio test, and the efficiency table comparing
//!   them family by family.
//! * [`edf_tests`] — the data-facing statistics with MLE fitting and Monte
//!   Carlo p-values.
//! * [`montecarlo`] — simulation-based validation: empirical process
//!   covariances, null distributions, and in-probability limits under
//!   alternatives.
//! * [`cli`] — the `edfnorm` command-line tool wiring it all together.
//!
//! # Reproducibility
//!
//! All randomness flows from one user-visible `u64` seed.  Replicate `r` of
//! any Monte Carlo loop uses `ChaCha8Rng::seed_from_u64(seed)` with the
//! stream index set to `r` (see [`seeding::replicate_rng`]), so results are
//! byte-identical across reruns and independent of any worker count.

pub mod alternatives;
pub mod cli;
pub mod kernels;
pub mod montecarlo;
pub mod numerics;
pub mod slopes;
pub mod spectral;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Errors produced by the computational layers of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A function handed to the quadrature or maximization routines
    /// evaluated to NaN or ±∞ at the reported abscissa.
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    /// A quadrature rule was requested with invalid geometry.
    #[error("invalid quadrature rule: {reason}")]
    InvalidQuadrature { reason: String },

    /// `diagonal_sup` was asked for the diagonal supremum of a weighted
    /// kernel; the Anderson–Darling weight makes the diagonal unbounded.
    #[error("diagonal supremum of a weighted kernel is unbounded; use the unweighted kernel")]
    WeightedDiagonalUnbounded,

    /// Power iteration failed to reach the requested tolerance.
    #[error(
        "eigenvalue iteration did not converge after {iterations} iterations \
         (last Rayleigh quotient {rayleigh:.6e}, residual {residual:.3e})"
    )]
    EigenNoConvergence {
        iterations: usize,
        rayleigh: f64,
        residual: f64,
    },

    /// Doubling the Nyström grid moved the leading eigenvalue by more than
    /// the discretization acceptance threshold.
    #[error(
        "spectral refinement not converged: |λ₁({fine}) − λ₁({coarse})| / λ₁ = {delta:.3e} \
         ≥ 1e-4; increase the grid size m"
    )]
    RefinementNotConverged {
        coarse: usize,
        fine: usize,
        delta: f64,
    },

    /// The alternative-family parameter lies outside the family's range.
    #[error("θ = {theta} outside the valid range ({lo}, {hi}) for this family")]
    ThetaOutOfRange { theta: f64, lo: f64, hi: f64 },

    /// A family was constructed with invalid shape parameters.
    #[error("invalid family parameter: {reason}")]
    InvalidFamilyParameter { reason: String },

    /// A slope computation needed a spectral quantity that the supplied
    /// context does not carry.
    #[error("slope context is missing {quantity}; compute it with SlopeContext::compute")]
    MissingSpectralInput { quantity: &'static str },

    /// The data sample cannot support the statistics (too small, non-finite
    /// entries, or all values equal so that σ̂ = 0).
    #[error("degenerate sample: {reason}")]
    DegenerateSample { reason: String },

    /// A generic precondition on counts, grids, or sizes was violated.
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// The five EDF statistics handled by this crate, in the column order used
/// by every table this crate emits.
///
/// * `D`  — Kolmogorov–Smirnov sup-distance, scaled as `√n·D`.
/// * `W2` — Cramér–von Mises integral, scaled as `n·ω²`.
/// * `A2` — Anderson–Darling weighted integral, scaled as `n·A²`.
/// * `G`  — sup-distance of the mean-centered process, scaled as `√n·G`.
/// * `U2` — Watson's centered integral, scaled as `n·U²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    D,
    W2,
    A2,
    G,
    U2,
}

impl TestKind {
    /// All five tests in canonical column order.
    pub const ALL: [TestKind; 5] = [
        TestKind::D,
        TestKind::W2,
        TestKind::A2,
        TestKind::G,
        TestKind::U2,
    ];

    /// Short ASCII name, identical to the CSV column header.
    pub fn name(self) -> &'static str {
        match self {
            TestKind::D => "D",
            TestKind::W2 => "W2",
            TestKind::A2 => "A2",
            TestKind::G => "G",
            TestKind::U2 => "U2",
        }
    }

    /// True for the sup-norm statistics (`D`, `G`), false for the
    /// integral statistics (`W2`, `A2`, `U2`).
    pub fn is_sup_type(self) -> bool {
        matches!(self, TestKind::D | TestKind::G)
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D" | "KS" => Ok(TestKind::D),
            "W2" | "CVM" => Ok(TestKind::W2),
            "A2" | "AD" => Ok(TestKind::A2),
            "G" => Ok(TestKind::G),
            "U2" => Ok(TestKind::U2),
            other => Err(Error::InvalidArgument {
                reason: format!("unknown test '{other}'; expected one of D, W2, A2, G, U2"),
            }),
        }
    }
}

/// Seed-splitting rule shared by every Monte Carlo loop in the crate.
pub mod seeding {
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// RNG for replicate `replicate` of a run with master seed `seed`.
    ///
    /// The master seed picks the ChaCha8 key; the replicate index selects
    /// the stream.  Streams are statistically independent, so replicates
    /// can be generated in any order (or on any number of workers) and
    /// still produce byte-identical results for a given `(seed, replicate)`
    /// pair.
    pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replicate);
        rng
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scenario: round-trip every test kind through its string name.
    /// Expected: parsing the display form recovers the variant.
    #[test]
    fn test_kind_roundtrip() {
        for t in TestKind::ALL {
            assert_eq!(t.name().parse::<TestKind>().unwrap(), t);
        }
    }

    /// Scenario: parse common aliases case-insensitively.
    /// Expected: ks→D, cvm→W2, ad→A2; garbage is rejected.
    #[test]
    fn test_kind_aliases() {
        assert_eq!("ks".parse::<TestKind>().unwrap(), TestKind::D);
        assert_eq!("cvm".parse::<TestKind>().unwrap(), TestKind::W2);
        assert_eq!("ad".parse::<TestKind>().unwrap(), TestKind::A2);
        assert_eq!("u2".parse::<TestKind>().unwrap(), TestKind::U2);
        assert!("Z9".parse::<TestKind>().is_err());
    }

    /// Scenario: classify statistics by scaling type.
    /// Expected: D and G are sup-type, the rest integral-type.
    #[test]
    fn sup_type_classification() {
        assert!(TestKind::D.is_sup_type());
        assert!(TestKind::G.is_sup_type());
        assert!(!TestKind::W2.is_sup_type());
        assert!(!TestKind::A2.is_sup_type());
        assert!(!TestKind::U2.is_sup_type());
    }
}
