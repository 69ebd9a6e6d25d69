//! Closed-form covariance kernels of the limiting Gaussian processes.
//!
//! Let `F̂_n` be the empirical CDF of an i.i.d. normal sample and `Φ̂` the
//! normal CDF fitted by maximum likelihood.  Three centered Gaussian
//! processes arise as large-sample limits of `√n(F̂_n − Φ̂)` (written in the
//! standardized coordinate `x`):
//!
//! * the Brownian bridge in `Φ(x)`, with kernel [`k0`] — the classical
//!   limit when μ and σ are **known**;
//! * the estimated-parameter limit with kernel [`k_eta`] — `k0` minus the
//!   price paid for fitting μ̂ and σ̂² by maximum likelihood;
//! * the doubly-centered limit with kernel [`k_xi`] — the covariance of
//!   the η-process after subtracting its average against the normal
//!   density, which is what the Watson-type statistics `G` and `U²` see.
//!
//! The kernels are exact closed forms in `Φ` and `φ`; no quadrature is
//! involved in evaluating them.

use crate::numerics::{maximize_abs, norm_cdf, norm_pdf, INV_SQRT_PI};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// `∫ c(x) φ(x) dx` for the centering function below: `1/12 − 1/(4π)`.
const CENTERING_MEAN: f64 = 1.0 / 12.0 - 1.0 / (4.0 * std::f64::consts::PI);

/// Brownian-bridge kernel `K₀(x, y) = Φ(min(x,y)) − Φ(x)Φ(y)`.
///
/// Covariance of the limiting empirical process when the null distribution
/// is fully specified (no estimated parameters).
pub fn k0(x: f64, y: f64) -> f64 {
    norm_cdf(x.min(y)) - norm_cdf(x) * norm_cdf(y)
}

/// Estimated-parameter kernel
/// `K_η(x, y) = K₀(x, y) − φ(x)φ(y) − ½·x·y·φ(x)φ(y)`.
///
/// The two subtracted terms are the variance removed by the ML estimators
/// of location (`φφ`) and scale (`½xyφφ`); they make the process strictly
/// "narrower" than the Brownian bridge on the diagonal.
pub fn k_eta(x: f64, y: f64) -> f64 {
    let pp = norm_pdf(x) * norm_pdf(y);
    k0(x, y) - pp - 0.5 * x * y * pp
}

/// Centering function `c(x) = ½·Φ(x)Φ(−x) − φ(x)/(2√π)`, the covariance of
/// the η-process at `x` with its own integral against `φ`.
///
/// `Φ(x)(1 − Φ(x))` is formed as `Φ(x)·Φ(−x)` so both factors keep full
/// relative precision in the tails.
fn centering(x: f64) -> f64 {
    0.5 * norm_cdf(x) * norm_cdf(-x) - 0.5 * INV_SQRT_PI * norm_pdf(x)
}

/// Doubly-centered kernel
/// `K_ξ(x, y) = K_η(x, y) − c(x) − c(y) + ∫c dΦ`, where `c` is
/// [`centering`] and `∫c dΦ = 1/12 − 1/(4π)`.
///
/// Expanded, this is
/// `K₀ − φφ − ½xyφφ − ½Φ(x)(1−Φ(x)) − ½Φ(y)(1−Φ(y)) + (φ(x)+φ(y))/(2√π)
///  + 1/12 − 1/(4π)`.
/// Both `Φ(1−Φ)` terms enter with a **negative** sign: `K_ξ` is the
/// covariance of `η − ∫η dΦ`, so subtracting `c` at each argument is forced
/// by the centering.  The kernel integrates to zero against `φ` in either
/// argument, which is the defining property of the centered process (see
/// the `xi_integrates_to_zero` test).
pub fn k_xi(x: f64, y: f64) -> f64 {
    k_eta(x, y) - centering(x) - centering(y) + CENTERING_MEAN
}

/// Which closed-form kernel a [`KernelSpec`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    /// Brownian bridge `K₀` (simple null, validation spectra).
    K0,
    /// Estimated-parameter kernel `K_η` (statistics `D`, `ω²`, `A²`).
    KEta,
    /// Doubly-centered kernel `K_ξ` (statistics `G`, `U²`).
    KXi,
}

/// How the spectral layer should weight the kernel when discretizing.
///
/// The weighting is **not** applied by [`KernelSpec::evaluate`]; it is a
/// declaration consumed by `spectral::build_operator_matrix`, because the
/// Anderson–Darling weight `1/(Φ(x)(1−Φ(x)))` belongs to the integral
/// operator, not to the covariance function itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    /// Plain `L²(dΦ)` operator.
    None,
    /// Anderson–Darling weight `1/(u(1−u))` in the probit coordinate.
    AndersonDarling,
}

/// A kernel together with the weighting its operator should carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub weighting: Weighting,
}

impl KernelSpec {
    /// Unweighted spec for a kernel kind.
    pub fn plain(kind: KernelKind) -> Self {
        KernelSpec {
            kind,
            weighting: Weighting::None,
        }
    }

    /// Evaluate the (unweighted) kernel closed form at `(x, y)`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::K0 => k0(x, y),
            KernelKind::KEta => k_eta(x, y),
            KernelKind::KXi => k_xi(x, y),
        }
    }
}

/// Supremum of the kernel diagonal `x ↦ K(x, x)` over `[-10, 10]`,
/// returned as `(argmax, sup)`.
///
/// This is the scale constant of the sup-norm statistics: `a_D` for `K_η`
/// and `a_G` for `K_ξ`.  Requires `weighting = None` — the Anderson–Darling
/// weighted diagonal grows without bound in the tails, so its supremum is
/// meaningless.
pub fn diagonal_sup(spec: KernelSpec) -> Result<(f64, f64)> {
    if spec.weighting != Weighting::None {
        return Err(Error::WeightedDiagonalUnbounded);
    }
    maximize_abs(|x| spec.evaluate(x, x), -10.0, 10.0, 20_001)
}
