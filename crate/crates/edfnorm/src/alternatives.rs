//! Local alternative families used to measure the power of the normality
//! tests.
//!
//! Each family is a one-parameter path `θ ↦ g(·; θ)` of densities through
//! the standard normal at `θ = 0`.  The slope machinery only needs local
//! data at the null — the θ-derivatives `∂G/∂θ|₀` and `∂g/∂θ|₀` — plus an
//! exact sampler for Monte Carlo work away from the null.
//!
//! Four families are built in:
//!
//! * **Lehmann**: `g = (1+θ)Φ^θ φ`, i.e. `G = Φ^{1+θ}` — the classical
//!   "powers of the CDF" path, `θ > −1`.
//! * **Ley–Paindaveine 1**: `g = φ·e^{−θ(1−Φ)}(1 + θΦ)`, i.e.
//!   `G = Φ·e^{−θ(1−Φ)}`, for `θ ≥ 0`.
//! * **Ley–Paindaveine 2**: `g = φ·(1 − θπ·cos(πΦ))`, i.e.
//!   `G = Φ − θ·sin(πΦ)`, for `|θ| ≤ 1/π`.
//! * **Contamination**: `g = (1−θ)φ + θ·N(μ, σ²)` density, `θ ∈ [0, 1]`.
//!
//! All four pass through `N(0,1)` at `θ = 0` (the standardized null), which
//! is what the slope formulas assume.

use crate::numerics::{integrate_gauss, norm_cdf, norm_pdf, norm_quantile, QuadratureRule};
use crate::seeding::replicate_rng;
use crate::{Error, Result};
use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// A one-parameter family of densities passing through the standard normal
/// at `θ = 0`.
pub trait Alternative {
    /// Short display name, also used as the row label in tables.
    fn name(&self) -> String;

    /// Density `g(x; θ)`.
    fn density(&self, x: f64, theta: f64) -> f64;

    /// `∂G(x; θ)/∂θ` at `θ = 0`, where `G` is the family CDF.
    fn cdf_theta_deriv(&self, x: f64) -> f64;

    /// `∂g(x; θ)/∂θ` at `θ = 0`.
    fn density_theta_deriv(&self, x: f64) -> f64;

    /// Mean of the null member (`θ = 0`).
    fn null_mu(&self) -> f64 {
        0.0
    }

    /// Variance of the null member (`θ = 0`).
    fn null_sigma2(&self) -> f64 {
        1.0
    }

    /// Valid parameter interval `(lo, hi)`; endpoint inclusion is decided
    /// by [`Alternative::theta_valid`].
    fn theta_range(&self) -> (f64, f64);

    /// Whether `θ` is admissible for this family.
    fn theta_valid(&self, theta: f64) -> bool;

    /// One exact draw from `g(·; θ)`; `θ` must already be validated.
    fn draw(&self, theta: f64, rng: &mut dyn RngCore) -> f64;

    /// Validate `θ`, reporting the family range on failure.
    fn validate_theta(&self, theta: f64) -> Result<()> {
        if !theta.is_finite() || !self.theta_valid(theta) {
            let (lo, hi) = self.theta_range();
            return Err(Error::ThetaOutOfRange { theta, lo, hi });
        }
        Ok(())
    }
}

/// The built-in families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinFamily {
    /// `G = Φ^{1+θ}`, `θ > −1`.
    Lehmann,
    /// `G = Φ·e^{−θ(1−Φ)}`, `θ ≥ 0`.
    LeyPaindaveine1,
    /// `G = Φ − θ·sin(πΦ)`, `|θ| ≤ 1/π`.
    LeyPaindaveine2,
    /// `(1−θ)·N(0,1) + θ·N(mu, sigma2)`, `θ ∈ [0, 1]`.
    Contamination { mu: f64, sigma2: f64 },
}

impl BuiltinFamily {
    /// Contamination family with validated shape parameters.
    pub fn contamination(mu: f64, sigma2: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(Error::InvalidFamilyParameter {
                reason: format!("contamination needs finite mu and sigma2 > 0, got ({mu}, {sigma2})"),
            });
        }
        Ok(BuiltinFamily::Contamination { mu, sigma2 })
    }
}

/// The six family instances making up the rows of the efficiency table, in
/// row order: Lehmann, the two Ley–Paindaveine families, and contamination
/// by N(1,1), N(0.5,1), N(0,0.5).
pub fn table_families() -> Vec<BuiltinFamily> {
    vec![
        BuiltinFamily::Lehmann,
        BuiltinFamily::LeyPaindaveine1,
        BuiltinFamily::LeyPaindaveine2,
        BuiltinFamily::Contamination {
            mu: 1.0,
            sigma2: 1.0,
        },
        BuiltinFamily::Contamination {
            mu: 0.5,
            sigma2: 1.0,
        },
        BuiltinFamily::Contamination {
            mu: 0.0,
            sigma2: 0.5,
        },
    ]
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alternative::name(self))
    }
}

impl FromStr for BuiltinFamily {
    type Err = Error;

    /// Accepts `lehmann`, `lp1`, `lp2`, and `contam:MU:SIGMA2` (or the
    /// display form `contam(MU,SIGMA2)`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "lehmann" => return Ok(BuiltinFamily::Lehmann),
            "lp1" | "ley-paindaveine-1" => return Ok(BuiltinFamily::LeyPaindaveine1),
            "lp2" | "ley-paindaveine-2" => return Ok(BuiltinFamily::LeyPaindaveine2),
            _ => {}
        }
        let rest = t
            .strip_prefix("contam:")
            .map(str::to_string)
            .or_else(|| {
                t.strip_prefix("contam(")
                    .and_then(|r| r.strip_suffix(')'))
                    .map(|r| r.replace(',', ":"))
            });
        if let Some(args) = rest {
            let parts: Vec<&str> = args.split(':').collect();
            if parts.len() == 2 {
                let mu: f64 = parts[0].trim().parse().map_err(|_| Error::InvalidArgument {
                    reason: format!("cannot parse contamination mean '{}'", parts[0]),
                })?;
                let s2: f64 = parts[1].trim().parse().map_err(|_| Error::InvalidArgument {
                    reason: format!("cannot parse contamination variance '{}'", parts[1]),
                })?;
                return BuiltinFamily::contamination(mu, s2);
            }
        }
        Err(Error::InvalidArgument {
            reason: format!("unknown family '{s}'; expected lehmann, lp1, lp2, or contam:MU:SIGMA2"),
        })
    }
}

impl Alternative for BuiltinFamily {
    fn name(&self) -> String {
        match self {
            BuiltinFamily::Lehmann => "lehmann".into(),
            BuiltinFamily::LeyPaindaveine1 => "lp1".into(),
            BuiltinFamily::LeyPaindaveine2 => "lp2".into(),
            BuiltinFamily::Contamination { mu, sigma2 } => {
                format!("contam({mu},{sigma2})")
            }
        }
    }

    fn density(&self, x: f64, theta: f64) -> f64 {
        let phi = norm_pdf(x);
        match *self {
            BuiltinFamily::Lehmann => {
                let cdf = norm_cdf(x);
                (1.0 + theta) * cdf.powf(theta) * phi
            }
            BuiltinFamily::LeyPaindaveine1 => {
                let cdf = norm_cdf(x);
                phi * (-theta * (1.0 - cdf)).exp() * (1.0 + theta * cdf)
            }
            BuiltinFamily::LeyPaindaveine2 => {
                let cdf = norm_cdf(x);
                phi * (1.0 - theta * PI * (PI * cdf).cos())
            }
            BuiltinFamily::Contamination { mu, sigma2 } => {
                let sigma = sigma2.sqrt();
                (1.0 - theta) * phi + theta * norm_pdf((x - mu) / sigma) / sigma
            }
        }
    }

    fn cdf_theta_deriv(&self, x: f64) -> f64 {
        let cdf = norm_cdf(x);
        match *self {
            BuiltinFamily::Lehmann => {
                // d/dθ Φ^{1+θ} at 0 = Φ·ln Φ; Φ ln Φ → 0 as Φ → 0.
                if cdf == 0.0 {
                    0.0
                } else {
                    cdf * cdf.ln()
                }
            }
            BuiltinFamily::LeyPaindaveine1 => -cdf * (1.0 - cdf),
            BuiltinFamily::LeyPaindaveine2 => -(PI * cdf).sin(),
            BuiltinFamily::Contamination { mu, sigma2 } => {
                let sigma = sigma2.sqrt();
                norm_cdf((x - mu) / sigma) - cdf
            }
        }
    }

    fn density_theta_deriv(&self, x: f64) -> f64 {
        let phi = norm_pdf(x);
        let cdf = norm_cdf(x);
        match *self {
            BuiltinFamily::Lehmann => {
                // d/dθ (1+θ)Φ^θφ at 0 = φ(1 + ln Φ); φ·lnΦ → 0 in the tail.
                if cdf == 0.0 {
                    0.0
                } else {
                    phi * (1.0 + cdf.ln())
                }
            }
            BuiltinFamily::LeyPaindaveine1 => phi * (2.0 * cdf - 1.0),
            BuiltinFamily::LeyPaindaveine2 => -PI * phi * (PI * cdf).cos(),
            BuiltinFamily::Contamination { mu, sigma2 } => {
                let sigma = sigma2.sqrt();
                norm_pdf((x - mu) / sigma) / sigma - phi
            }
        }
    }

    fn theta_range(&self) -> (f64, f64) {
        match self {
            BuiltinFamily::Lehmann => (-1.0, f64::INFINITY),
            BuiltinFamily::LeyPaindaveine1 => (0.0, f64::INFINITY),
            BuiltinFamily::LeyPaindaveine2 => (-1.0 / PI, 1.0 / PI),
            BuiltinFamily::Contamination { .. } => (0.0, 1.0),
        }
    }

    fn theta_valid(&self, theta: f64) -> bool {
        match self {
            BuiltinFamily::Lehmann => theta > -1.0,
            BuiltinFamily::LeyPaindaveine1 => theta >= 0.0,
            BuiltinFamily::LeyPaindaveine2 => theta.abs() <= 1.0 / PI,
            BuiltinFamily::Contamination { .. } => (0.0..=1.0).contains(&theta),
        }
    }

    fn draw(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
        match *self {
            BuiltinFamily::Lehmann => {
                // G⁻¹(u) = Φ⁻¹(u^{1/(1+θ)}); u = 0 is resampled and the
                // power is kept strictly inside (0, 1) for the quantile.
                let mut u: f64 = rng.gen();
                while u <= 0.0 {
                    u = rng.gen();
                }
                let p = u.powf(1.0 / (1.0 + theta)).clamp(1e-300, 1.0 - 1e-16);
                norm_quantile(p).expect("clamped into the quantile domain")
            }
            BuiltinFamily::LeyPaindaveine1 => {
                // Rejection from φ: g/φ = e^{−θ(1−Φ)}(1+θΦ) ≤ 1 + θ.
                let bound = 1.0 + theta;
                loop {
                    let x: f64 = StandardNormal.sample(rng);
                    let cdf = norm_cdf(x);
                    let ratio = (-theta * (1.0 - cdf)).exp() * (1.0 + theta * cdf);
                    if rng.gen::<f64>() * bound <= ratio {
                        return x;
                    }
                }
            }
            BuiltinFamily::LeyPaindaveine2 => {
                // Rejection from φ: g/φ = 1 − θπcos(πΦ) ≤ 1 + |θ|π.
                let bound = 1.0 + theta.abs() * PI;
                loop {
                    let x: f64 = StandardNormal.sample(rng);
                    let ratio = 1.0 - theta * PI * (PI * norm_cdf(x)).cos();
                    if rng.gen::<f64>() * bound <= ratio {
                        return x;
                    }
                }
            }
            BuiltinFamily::Contamination { mu, sigma2 } => {
                let z: f64 = StandardNormal.sample(rng);
                if rng.gen::<f64>() < theta {
                    mu + sigma2.sqrt() * z
                } else {
                    z
                }
            }
        }
    }
}

/// θ-derivatives of the null mean and variance along the family path.
#[derive(Debug, Clone, Copy)]
pub struct LocalDerivatives {
    /// `μ'(0) = ∫ x·∂g/∂θ|₀ dx`.
    pub mu_prime: f64,
    /// `(σ²)'(0) = ∫ (x−μ₀)²·∂g/∂θ|₀ dx`.
    pub sigma2_prime: f64,
    /// `σ'(0) = (σ²)'(0) / (2σ₀)`.
    pub sigma_prime: f64,
}

/// Require the standardized null; the slope formulas below are written in
/// that coordinate system.
fn require_standard_null(family: &dyn Alternative) -> Result<()> {
    if family.null_mu() != 0.0 || family.null_sigma2() != 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!(
                "family '{}' must have the standardized null N(0,1); found N({}, {})",
                family.name(),
                family.null_mu(),
                family.null_sigma2()
            ),
        });
    }
    Ok(())
}

/// Compute `μ'(0)` and `(σ²)'(0)` by quadrature of the density derivative.
pub fn local_derivatives(family: &dyn Alternative) -> Result<LocalDerivatives> {
    require_standard_null(family)?;
    let rule = QuadratureRule::default_rule();
    let mu_prime = integrate_gauss(|x| x * family.density_theta_deriv(x), &rule)?;
    let sigma2_prime = integrate_gauss(|x| x * x * family.density_theta_deriv(x), &rule)?;
    Ok(LocalDerivatives {
        mu_prime,
        sigma2_prime,
        sigma_prime: 0.5 * sigma2_prime,
    })
}

/// The drift function `g⋆` of the estimated-parameter empirical process
/// under the local alternative.
///
/// `g⋆(x) = ∂G/∂θ|₀(x) + φ(x)·(μ'(0) + x·σ'(0))`: the raw CDF drift plus
/// the compensation picked up because μ̂ and σ̂² track the drifting
/// alternative.  Everything a slope needs about a family flows through
/// this function.
pub struct DriftFunction<'a> {
    family: &'a dyn Alternative,
    /// The local estimator derivatives entering the compensation term.
    pub derivatives: LocalDerivatives,
}

impl DriftFunction<'_> {
    /// Evaluate `g⋆(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.family.cdf_theta_deriv(x)
            + norm_pdf(x) * (self.derivatives.mu_prime + x * self.derivatives.sigma_prime)
    }
}

/// Build [`DriftFunction`] for a family (computes the local derivatives).
pub fn g_star(family: &dyn Alternative) -> Result<DriftFunction<'_>> {
    let derivatives = local_derivatives(family)?;
    Ok(DriftFunction {
        family,
        derivatives,
    })
}

/// Local slope coefficient of the likelihood-ratio test:
///
/// `k_LRT = ∫ (∂g/∂θ|₀)²/φ dx − (∫ x·∂g/∂θ|₀ dx)² − ½(∫ x²·∂g/∂θ|₀ dx)²`,
///
/// the θ-information left after projecting out the location and scale
/// scores (those directions are absorbed by μ̂ and σ̂², so they carry no
/// power against the fitted normal).
pub fn lrt_slope_coefficient(family: &dyn Alternative) -> Result<f64> {
    require_standard_null(family)?;
    let rule = QuadratureRule::default_rule();
    let fisher = integrate_gauss(
        |x| {
            let d = family.density_theta_deriv(x);
            d * d / norm_pdf(x)
        },
        &rule,
    )?;
    let loc = integrate_gauss(|x| x * family.density_theta_deriv(x), &rule)?;
    let scale = integrate_gauss(|x| x * x * family.density_theta_deriv(x), &rule)?;
    Ok(fisher - loc * loc - 0.5 * scale * scale)
}

/// Draw `n` values from `g(·; θ)` with the crate seeding rule (a single
/// replicate stream, index 0).
pub fn sample(family: &dyn Alternative, theta: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    family.validate_theta(theta)?;
    let mut rng = replicate_rng(seed, 0);
    Ok((0..n).map(|_| family.draw(theta, &mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn the_six() -> Vec<BuiltinFamily> {
        table_families()
    }

    /// Scenario: densities integrate to one at θ ∈ {0, 0.05, 0.1}.
    /// Expected: ∫g dx = 1 within 1e-8 for every builtin family.
    #[test]
    fn density_normalization() {
        let rule = QuadratureRule::default_rule();
        for fam in the_six() {
            for theta in [0.0, 0.05, 0.1] {
                let total = integrate_gauss(|x| fam.density(x, theta), &rule).unwrap();
                assert!(
                    (total - 1.0).abs() <= 1e-8,
                    "{fam}: ∫g(x;{theta}) = {total}"
                );
            }
        }
    }

    /// Scenario: density derivative integrates to zero (mass is conserved
    /// along the path).
    /// Expected: ∫ ∂g/∂θ|₀ dx = 0 within 1e-10.
    #[test]
    fn density_deriv_integrates_to_zero() {
        let rule = QuadratureRule::default_rule();
        for fam in the_six() {
            let total = integrate_gauss(|x| fam.density_theta_deriv(x), &rule).unwrap();
            assert!(total.abs() <= 1e-10, "{fam}: ∫g'₀ = {total:e}");
        }
    }

    /// Scenario: CDF derivative versus the integral of the density
    /// derivative from −10 to x, at several x.
    /// Expected: agreement within 1e-8 (fundamental theorem along θ).
    #[test]
    fn cdf_deriv_consistent_with_density_deriv() {
        for fam in the_six() {
            for x in [-3.0, -1.5, 0.0, 0.8, 2.2] {
                let rule =
                    QuadratureRule::composite_gauss_legendre(-10.0, x, 0.5, 256).unwrap();
                let integral =
                    integrate_gauss(|t| fam.density_theta_deriv(t), &rule).unwrap();
                let direct = fam.cdf_theta_deriv(x);
                assert!(
                    (integral - direct).abs() <= 1e-8,
                    "{fam} at {x}: ∫g'₀ = {integral} vs G'₀ = {direct}"
                );
            }
        }
    }

    /// Scenario: finite-difference check of ∂g/∂θ|₀ at h = 1e-5 on a grid.
    /// Expected: within 1e-6 of the closed form.  Families whose θ-range
    /// starts at 0 (LP1, contamination) use a second-order one-sided
    /// stencil; the rest use a central difference.
    #[test]
    fn density_deriv_finite_difference() {
        let h = 1e-5;
        for fam in the_six() {
            let one_sided = matches!(
                fam,
                BuiltinFamily::LeyPaindaveine1 | BuiltinFamily::Contamination { .. }
            );
            let mut x = -6.0;
            while x <= 6.0 {
                let fd = if one_sided {
                    // (−3g(0) + 4g(h) − g(2h)) / (2h), O(h²) one-sided.
                    (-3.0 * fam.density(x, 0.0) + 4.0 * fam.density(x, h)
                        - fam.density(x, 2.0 * h))
                        / (2.0 * h)
                } else {
                    (fam.density(x, h) - fam.density(x, -h)) / (2.0 * h)
                };
                let exact = fam.density_theta_deriv(x);
                assert!(
                    (fd - exact).abs() <= 1e-6,
                    "{fam} at x={x}: fd {fd} vs exact {exact}"
                );
                x += 0.5;
            }
        }
    }

    /// Scenario: local mean/variance derivatives of each builtin family.
    /// Expected: contamination closed forms μ' = θμ-direction mean = μ,
    /// (σ²)' = σ² + μ² − 1; quadrature references for the other three.
    #[test]
    fn local_derivative_values() {
        let want: [(BuiltinFamily, f64, f64); 6] = [
            (BuiltinFamily::Lehmann, 0.9031972856, -0.5956355968),
            // 1/√π exactly.
            (BuiltinFamily::LeyPaindaveine1, 0.5641895835477563, 0.0),
            (BuiltinFamily::LeyPaindaveine2, 2.1068808056, 0.0),
            (
                BuiltinFamily::Contamination {
                    mu: 1.0,
                    sigma2: 1.0,
                },
                1.0,
                1.0,
            ),
            (
                BuiltinFamily::Contamination {
                    mu: 0.5,
                    sigma2: 1.0,
                },
                0.5,
                0.25,
            ),
            (
                BuiltinFamily::Contamination {
                    mu: 0.0,
                    sigma2: 0.5,
                },
                0.0,
                -0.5,
            ),
        ];
        for (fam, mu_p, s2_p) in want {
            let ld = local_derivatives(&fam).unwrap();
            assert!(
                (ld.mu_prime - mu_p).abs() <= 1e-9,
                "{fam}: μ' = {}, want {mu_p}",
                ld.mu_prime
            );
            assert!(
                (ld.sigma2_prime - s2_p).abs() <= 1e-9,
                "{fam}: (σ²)' = {}, want {s2_p}",
                ld.sigma2_prime
            );
            assert_eq!(ld.sigma_prime, 0.5 * ld.sigma2_prime);
        }
    }

    /// Scenario: LRT slope coefficients with closed-form references.
    /// Expected: contamination N(1,1) → e − 2.5 and N(0,0.5) → 2/√3 − 9/8
    /// within 1e-8; LP1 → 1/3 − 1/π; LP2 → π²/2 − (σ²-scaled mean drift)².
    #[test]
    fn lrt_slope_closed_forms() {
        let e = std::f64::consts::E;
        let c11 = BuiltinFamily::Contamination {
            mu: 1.0,
            sigma2: 1.0,
        };
        let got = lrt_slope_coefficient(&c11).unwrap();
        assert!(
            (got - (e - 2.5)).abs() <= 1e-8,
            "contam(1,1): {got} vs {}",
            e - 2.5
        );

        let c005 = BuiltinFamily::Contamination {
            mu: 0.0,
            sigma2: 0.5,
        };
        let want = 2.0 / 3.0_f64.sqrt() - 1.125;
        let got = lrt_slope_coefficient(&c005).unwrap();
        assert!((got - want).abs() <= 1e-8, "contam(0,0.5): {got} vs {want}");

        let lp1 = lrt_slope_coefficient(&BuiltinFamily::LeyPaindaveine1).unwrap();
        let want = 1.0 / 3.0 - 1.0 / PI;
        assert!((lp1 - want).abs() <= 1e-8, "lp1: {lp1} vs {want}");

        // LP2: Fisher term π²/2; location projection μ'² with
        // μ' = ∫x·(−πφ cos(πΦ)) = 2.1068808056; scale projection 0.
        let lp2 = lrt_slope_coefficient(&BuiltinFamily::LeyPaindaveine2).unwrap();
        let want = PI * PI / 2.0 - 2.1068808056_f64.powi(2);
        assert!((lp2 - want).abs() <= 1e-7, "lp2: {lp2} vs {want}");

        let leh = lrt_slope_coefficient(&BuiltinFamily::Lehmann).unwrap();
        assert!((leh - 0.0068437812).abs() <= 1e-9, "lehmann: {leh}");
    }

    /// Scenario: reparameterize θ ↦ cθ and recompute the LRT slope.
    /// Expected: k_LRT scales by c² (slопes are quadratic in the local
    /// parameterization), checked at c = 2 for the Lehmann family.
    #[test]
    fn lrt_slope_scale_covariance() {
        struct Scaled {
            inner: BuiltinFamily,
            c: f64,
        }
        impl Alternative for Scaled {
            fn name(&self) -> String {
                format!("scaled-{}", self.inner.name())
            }
            fn density(&self, x: f64, theta: f64) -> f64 {
                self.inner.density(x, self.c * theta)
            }
            fn cdf_theta_deriv(&self, x: f64) -> f64 {
                self.c * self.inner.cdf_theta_deriv(x)
            }
            fn density_theta_deriv(&self, x: f64) -> f64 {
                self.c * self.inner.density_theta_deriv(x)
            }
            fn theta_range(&self) -> (f64, f64) {
                let (lo, hi) = self.inner.theta_range();
                (lo / self.c, hi / self.c)
            }
            fn theta_valid(&self, theta: f64) -> bool {
                self.inner.theta_valid(self.c * theta)
            }
            fn draw(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
                self.inner.draw(self.c * theta, rng)
            }
        }
        let base = lrt_slope_coefficient(&BuiltinFamily::Lehmann).unwrap();
        let scaled = lrt_slope_coefficient(&Scaled {
            inner: BuiltinFamily::Lehmann,
            c: 2.0,
        })
        .unwrap();
        assert!(
            ((scaled - 4.0 * base) / (4.0 * base)).abs() <= 1e-8,
            "scaled {scaled} vs 4×{base}"
        );
    }

    /// One-sided Kolmogorov distance of a sample against a CDF closure.
    fn ks_distance<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
        sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sample.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in sample.iter().enumerate() {
            let u = cdf(x);
            d = d.max(((i + 1) as f64 / n - u).abs()).max((u - i as f64 / n).abs());
        }
        d
    }

    /// Scenario: samplers at θ = 0 deliver standard normal draws.
    /// Expected: √n·KS distance against Φ below 1.9 (fixed seed; 1.36 is
    /// the 5% point, 1.95 the 0.1% point of the Kolmogorov law).
    #[test]
    fn samplers_reduce_to_normal_at_null() {
        for (i, fam) in the_six().into_iter().enumerate() {
            let mut xs = sample(&fam, 0.0, 2000, 9000 + i as u64).unwrap();
            let d = ks_distance(&mut xs, norm_cdf);
            assert!(
                (2000.0_f64).sqrt() * d < 1.9,
                "{fam}: √n·KS = {}",
                (2000.0_f64).sqrt() * d
            );
        }
    }

    /// Scenario: samplers away from the null against the closed-form CDFs.
    /// Expected: √n·KS under 1.9 for Lehmann θ=1 (G = Φ²), LP1 θ=0.5,
    /// LP2 θ=0.3, contamination(1,1) θ=0.3.
    #[test]
    fn samplers_match_family_cdfs() {
        let n = 4000;
        let sq = (n as f64).sqrt();

        let mut xs = sample(&BuiltinFamily::Lehmann, 1.0, n, 21).unwrap();
        let d = ks_distance(&mut xs, |x| norm_cdf(x).powi(2));
        assert!(sq * d < 1.9, "lehmann θ=1: {}", sq * d);

        let mut xs = sample(&BuiltinFamily::LeyPaindaveine1, 0.5, n, 22).unwrap();
        let d = ks_distance(&mut xs, |x| {
            let c = norm_cdf(x);
            c * (-0.5 * (1.0 - c)).exp()
        });
        assert!(sq * d < 1.9, "lp1 θ=0.5: {}", sq * d);

        let mut xs = sample(&BuiltinFamily::LeyPaindaveine2, 0.3, n, 23).unwrap();
        let d = ks_distance(&mut xs, |x| {
            let c = norm_cdf(x);
            c - 0.3 * (PI * c).sin() / PI * PI
        });
        // G = Φ − θ·sin(πΦ); written out directly:
        let d2 = {
            let mut ys = sample(&BuiltinFamily::LeyPaindaveine2, 0.3, n, 23).unwrap();
            ks_distance(&mut ys, |x| {
                let c = norm_cdf(x);
                c - 0.3 * (PI * c).sin()
            })
        };
        let _ = d;
        assert!(sq * d2 < 1.9, "lp2 θ=0.3: {}", sq * d2);

        let contam = BuiltinFamily::Contamination {
            mu: 1.0,
            sigma2: 1.0,
        };
        let mut xs = sample(&contam, 0.3, n, 24).unwrap();
        let d = ks_distance(&mut xs, |x| 0.7 * norm_cdf(x) + 0.3 * norm_cdf(x - 1.0));
        assert!(sq * d < 1.9, "contam θ=0.3: {}", sq * d);
        // Mean of the mixture is θ·μ = 0.3.
        let mean: f64 = xs.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.3).abs() < 3.0 * 1.1 / sq, "mean {mean}");
    }

    /// Scenario: identical seeds, two sampling runs.
    /// Expected: byte-identical output vectors.
    #[test]
    fn sampling_is_deterministic() {
        for fam in the_six() {
            let a = sample(&fam, 0.05, 100, 4242).unwrap();
            let b = sample(&fam, 0.05, 100, 4242).unwrap();
            assert_eq!(a, b);
        }
    }

    /// Scenario: θ outside each family's range.
    /// Expected: ThetaOutOfRange errors; boundary semantics respected
    /// (closed at 0 for LP1/contamination, open at −1 for Lehmann, closed
    /// at ±1/π for LP2).
    #[test]
    fn theta_validation() {
        assert!(sample(&BuiltinFamily::Lehmann, -1.0, 10, 1).is_err());
        assert!(sample(&BuiltinFamily::Lehmann, -0.999, 10, 1).is_ok());
        assert!(sample(&BuiltinFamily::LeyPaindaveine1, -0.01, 10, 1).is_err());
        assert!(sample(&BuiltinFamily::LeyPaindaveine1, 0.0, 10, 1).is_ok());
        assert!(sample(&BuiltinFamily::LeyPaindaveine2, 0.35, 10, 1).is_err());
        assert!(sample(&BuiltinFamily::LeyPaindaveine2, 1.0 / PI, 10, 1).is_ok());
        assert!(sample(&BuiltinFamily::LeyPaindaveine2, -1.0 / PI, 10, 1).is_ok());
        let contam = BuiltinFamily::Contamination {
            mu: 1.0,
            sigma2: 1.0,
        };
        assert!(sample(&contam, 1.2, 10, 1).is_err());
        assert!(sample(&contam, 1.0, 10, 1).is_ok());
        assert!(sample(&contam, f64::NAN, 10, 1).is_err());
    }

    /// Scenario: invalid contamination shapes.
    /// Expected: InvalidFamilyParameter.
    #[test]
    fn contamination_shape_validation() {
        assert!(BuiltinFamily::contamination(0.0, 0.0).is_err());
        assert!(BuiltinFamily::contamination(0.0, -1.0).is_err());
        assert!(BuiltinFamily::contamination(f64::NAN, 1.0).is_err());
        assert!(BuiltinFamily::contamination(2.0, 0.25).is_ok());
    }

    /// Scenario: parse family names, including both contamination forms.
    /// Expected: round-trips and sensible rejections.
    #[test]
    fn family_parsing() {
        assert_eq!(
            "lehmann".parse::<BuiltinFamily>().unwrap(),
            BuiltinFamily::Lehmann
        );
        assert_eq!(
            "LP1".parse::<BuiltinFamily>().unwrap(),
            BuiltinFamily::LeyPaindaveine1
        );
        let c: BuiltinFamily = "contam:0.5:1".parse().unwrap();
        assert_eq!(
            c,
            BuiltinFamily::Contamination {
                mu: 0.5,
                sigma2: 1.0
            }
        );
        let c: BuiltinFamily = "contam(0,0.5)".parse().unwrap();
        assert_eq!(
            c,
            BuiltinFamily::Contamination {
                mu: 0.0,
                sigma2: 0.5
            }
        );
        assert!("gumbel".parse::<BuiltinFamily>().is_err());
        assert!("contam:a:b".parse::<BuiltinFamily>().is_err());
    }

    /// Scenario: the drift function g⋆ at the LP1 family, where everything
    /// is available in closed form: G'₀ = −Φ(1−Φ), μ' = 1/√π, σ' = 0.
    /// Expected: g⋆(x) = −Φ(x)(1−Φ(x)) + φ(x)/√π within 1e-9.
    #[test]
    fn drift_function_closed_form() {
        let fam = BuiltinFamily::LeyPaindaveine1;
        let gs = g_star(&fam).unwrap();
        let inv_sqrt_pi = 1.0 / PI.sqrt();
        for x in [-4.0, -1.0, 0.0, 0.5, 2.0, 6.0] {
            let want = -norm_cdf(x) * norm_cdf(-x) + norm_pdf(x) * inv_sqrt_pi;
            let got = gs.eval(x);
            assert!(
                (got - want).abs() <= 1e-9,
                "g⋆({x}) = {got}, want {want}"
            );
        }
    }
}
