//! Nyström discretization of the limiting covariance operators and their
//! leading eigenvalues.
//!
//! The integral operators act on `L²(dΦ)`:
//!
//! ```text
//! (T f)(x) = ∫ K(x, y) w(x)^{1/2} w(y)^{1/2} f(y) φ(y) dy
//! ```
//!
//! with `w ≡ 1` for the plain operators and the Anderson–Darling weight
//! `w(x) = 1/(Φ(x)(1−Φ(x)))` for the weighted one.  Substituting
//! `u = Φ(x)` turns this into an operator on `L²(0, 1)` with kernel
//! `K̃(u, v) = K(Φ⁻¹(u), Φ⁻¹(v))`, which a Gauss–Legendre rule on `(0, 1)`
//! discretizes as the symmetric matrix `M[i][j] = √(wᵢwⱼ)·K̃(uᵢ, uⱼ)`.
//! Symmetrizing by `√w` preserves the spectrum of the plain collocation
//! matrix `K̃(uᵢ,uⱼ)wⱼ` (they are similar via `diag(√w)`) while keeping the
//! numerics symmetric.
//!
//! Reliability is anchored two ways:
//! * a **simple-null mode** swaps in the Brownian-bridge kernel `K₀`, whose
//!   spectra are classical: `1/(k²π²)` unweighted and `1/(k(k+1))` with the
//!   Anderson–Darling weight;
//! * every eigenvalue is computed on a grid of size `m` and again at `2m`,
//!   and the relative movement of the leading eigenvalue must fall below
//!   `1e-4` or the computation is rejected.

use crate::kernels::{KernelKind, KernelSpec, Weighting};
use crate::numerics::{norm_pdf, norm_quantile, QuadratureRule};
use crate::seeding::replicate_rng;
use crate::{Error, Result};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Master seed for the deterministic start vectors of the power iteration.
const EIGEN_START_SEED: u64 = 2_718_281_828;

/// The three covariance operators whose eigenvalues scale the integral
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// Cramér–von Mises operator: kernel `K_η`, no weight.  Leading
    /// eigenvalue `λ₁` scales `n·ω²`.
    W,
    /// Anderson–Darling operator: kernel `K_η` with the `1/(u(1−u))`
    /// weight.  Leading eigenvalue `ν₁` scales `n·A²`.
    A,
    /// Watson operator: kernel `K_ξ`, no weight.  Leading eigenvalue `ζ₁`
    /// scales `n·U²`.
    U,
}

impl OperatorKind {
    /// All operators in display order.
    pub const ALL: [OperatorKind; 3] = [OperatorKind::W, OperatorKind::A, OperatorKind::U];

    /// Kernel + weighting defining the operator.
    pub fn kernel_spec(self) -> KernelSpec {
        match self {
            OperatorKind::W => KernelSpec {
                kind: KernelKind::KEta,
                weighting: Weighting::None,
            },
            OperatorKind::A => KernelSpec {
                kind: KernelKind::KEta,
                weighting: Weighting::AndersonDarling,
            },
            OperatorKind::U => KernelSpec {
                kind: KernelKind::KXi,
                weighting: Weighting::None,
            },
        }
    }

    /// One-letter display name.
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::W => "W",
            OperatorKind::A => "A",
            OperatorKind::U => "U",
        }
    }

    /// Conventional symbol for the leading eigenvalue of this operator.
    pub fn eigenvalue_symbol(self) -> &'static str {
        match self {
            OperatorKind::W => "lambda1",
            OperatorKind::A => "nu1",
            OperatorKind::U => "zeta1",
        }
    }
}

/// Which covariance kernel family the operator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NullKernel {
    /// Estimated-parameter kernels (`K_η` / `K_ξ`) — the production mode.
    Estimated,
    /// Brownian-bridge kernel `K₀` with the operator's weighting kept —
    /// the validation mode with classically known spectra.
    Simple,
}

/// Coordinate transform used for discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    /// `u = Φ(x)`: maps `L²(dΦ)` on the line isometrically onto
    /// `L²(0, 1)`, so an ordinary Gauss–Legendre rule on `(0, 1)` applies.
    Probit,
}

/// Discretization and iteration controls for the Nyström eigensolver.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiscretizationConfig {
    /// Coordinate transform (probit is the only supported choice).
    pub transform: Transform,
    /// Base grid size; refinement also solves at `2m`.
    pub m: usize,
    /// Relative tolerance on successive Rayleigh quotients.
    pub eig_tol: f64,
    /// Iteration budget per eigenvalue.
    pub max_iter: usize,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        DiscretizationConfig {
            transform: Transform::Probit,
            m: 1024,
            eig_tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

impl DiscretizationConfig {
    /// Default controls with a different base grid size.
    pub fn with_m(m: usize) -> Self {
        DiscretizationConfig {
            m,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidArgument {
                reason: format!("grid size m must be at least 2, got {}", self.m),
            });
        }
        if !(self.eig_tol > 0.0) {
            return Err(Error::InvalidArgument {
                reason: "eig_tol must be positive".into(),
            });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument {
                reason: "max_iter must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Dense symmetric matrix with full row-major storage.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Build from an entry function; `f` is called only for `i ≤ j` and the
    /// result mirrored, so the matrix is exactly symmetric by construction.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymmetricMatrix { n, data }
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `out = M·v`.
    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = 0.0;
            for (rv, vv) in row.iter().zip(v) {
                acc += rv * vv;
            }
            *o = acc;
        }
    }
}

/// A discretized covariance operator: the symmetrized Nyström matrix plus
/// the quadrature rule and node data that produced it.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    /// `M[i][j] = √(wᵢ ŵᵢ) √(wⱼ ŵⱼ) K̃(uᵢ, uⱼ)` where `w` are quadrature
    /// weights and `ŵ` the operator weighting.
    pub matrix: SymmetricMatrix,
    /// Gauss–Legendre rule on `(0, 1)` whose nodes index the matrix.
    pub rule: QuadratureRule,
    pub operator: OperatorKind,
    pub null: NullKernel,
}

/// Discretize the operator on an `m`-point Gauss–Legendre grid on `(0,1)`.
///
/// In the probit coordinate the kernels reduce to closed forms of the node
/// data `uᵢ`, `xᵢ = Φ⁻¹(uᵢ)`, `φ(xᵢ)`, so assembly is `O(m²)` flops with
/// no special-function calls in the inner loop.
pub fn build_operator_matrix(
    operator: OperatorKind,
    null: NullKernel,
    m: usize,
) -> Result<OperatorMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument {
            reason: format!("grid size m must be at least 2, got {m}"),
        });
    }
    let rule = QuadratureRule::gauss_legendre(m, 0.0, 1.0)?;
    let spec = operator.kernel_spec();
    let kind = match null {
        NullKernel::Estimated => spec.kind,
        NullKernel::Simple => KernelKind::K0,
    };

    // Per-node data in the probit coordinate.
    let u = &rule.nodes;
    let mut x = vec![0.0; m];
    let mut pdf = vec![0.0; m];
    let mut cen = vec![0.0; m];
    let mut scale = vec![0.0; m]; // √(quadrature weight × operator weight)
    for i in 0..m {
        x[i] = norm_quantile(u[i])?;
        pdf[i] = norm_pdf(x[i]);
        // ½ΦΦ̄ − φ/(2√π), the K_ξ centering function at the node.
        cen[i] = 0.5 * u[i] * (1.0 - u[i]) - 0.5 * crate::numerics::INV_SQRT_PI * pdf[i];
        let w_op = match spec.weighting {
            Weighting::None => 1.0,
            Weighting::AndersonDarling => 1.0 / (u[i] * (1.0 - u[i])),
        };
        scale[i] = (rule.weights[i] * w_op).sqrt();
    }
    let centering_mean = 1.0 / 12.0 - 1.0 / (4.0 * std::f64::consts::PI);

    let matrix = SymmetricMatrix::from_fn(m, |i, j| {
        let base = u[i].min(u[j]) - u[i] * u[j];
        let k = match kind {
            KernelKind::K0 => base,
            KernelKind::KEta => base - pdf[i] * pdf[j] * (1.0 + 0.5 * x[i] * x[j]),
            KernelKind::KXi => {
                base - pdf[i] * pdf[j] * (1.0 + 0.5 * x[i] * x[j]) - cen[i] - cen[j]
                    + centering_mean
            }
        };
        scale[i] * scale[j] * k
    });
    Ok(OperatorMatrix {
        matrix,
        rule,
        operator,
        null,
    })
}

/// Orthogonalize `v` against each unit vector in `basis` (one pass of
/// classical Gram–Schmidt; callers re-run it every iteration, which keeps
/// the loss bounded).
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let proj: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= proj * bi;
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Top-`k` eigenvalues of a symmetric PSD matrix by power iteration with
/// deflation, in descending order.
///
/// Start vectors are seeded deterministically (ChaCha8 stream per
/// eigenvalue index), so repeated runs are bit-identical.  Convergence is
/// declared when successive Rayleigh quotients move by less than
/// `tol·|λ|`; exceeding `max_iter` yields [`Error::EigenNoConvergence`]
/// with the last Rayleigh quotient and residual.
pub fn largest_eigenvalues(
    mat: &SymmetricMatrix,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = mat.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument {
            reason: format!("requested {k} eigenvalues of a {n}×{n} matrix"),
        });
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    let mut w = vec![0.0; n];
    for j in 0..k {
        let mut rng = replicate_rng(EIGEN_START_SEED, j as u64);
        let mut v: Vec<f64> = (0..n)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        orthogonalize(&mut v, &basis);
        let nv = norm2(&v);
        for vi in &mut v {
            *vi /= nv;
        }
        let mut lambda = 0.0;
        let mut lambda_prev = f64::INFINITY;
        let mut converged = false;
        for _ in 0..max_iter {
            mat.matvec(&v, &mut w);
            orthogonalize(&mut w, &basis);
            lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let nw = norm2(&w);
            if nw == 0.0 {
                // The deflated operator annihilates v: eigenvalue 0.
                lambda = 0.0;
                converged = true;
                break;
            }
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / nw;
            }
            if (lambda - lambda_prev).abs() <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
            lambda_prev = lambda;
        }
        if !converged {
            mat.matvec(&v, &mut w);
            orthogonalize(&mut w, &basis);
            let residual = v
                .iter()
                .zip(&w)
                .map(|(vi, wi)| (wi - lambda * vi).powi(2))
                .sum::<f64>()
                .sqrt();
            return Err(Error::EigenNoConvergence {
                iterations: max_iter,
                rayleigh: lambda,
                residual,
            });
        }
        values.push(lambda);
        basis.push(v);
    }
    // Deflation yields a non-increasing sequence up to tolerance wobble;
    // enforce the ordering exactly.
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(values)
}

/// Result of a refined leading-eigenvalue computation.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    pub operator: OperatorKind,
    pub null: NullKernel,
    /// Top eigenvalues from the fine (`2m`) grid, descending.
    pub leading_eigenvalues: Vec<f64>,
    /// Base grid size; the refinement grid is `2m`.
    pub m: usize,
    /// `|λ₁(2m) − λ₁(m)| / λ₁(2m)` — must be below `1e-4`.
    pub refinement_delta: f64,
    pub config: DiscretizationConfig,
}

impl SpectralResult {
    /// The leading eigenvalue (largest).
    pub fn leading(&self) -> f64 {
        self.leading_eigenvalues[0]
    }
}

/// Acceptance threshold on the relative grid-doubling movement of λ₁.
pub const REFINEMENT_TOLERANCE: f64 = 1e-4;

/// Compute the top-`k` eigenvalues of an operator at grid `m` and `2m`.
///
/// Returns the `2m` values; errors with [`Error::RefinementNotConverged`]
/// if λ₁ moved by ≥ `1e-4` relative between the grids, which signals that
/// `m` is too small for the requested kernel.
pub fn leading_eigenvalue(
    operator: OperatorKind,
    null: NullKernel,
    config: &DiscretizationConfig,
    k: usize,
) -> Result<SpectralResult> {
    config.validate()?;
    let coarse = build_operator_matrix(operator, null, config.m)?;
    let lambda_coarse =
        largest_eigenvalues(&coarse.matrix, 1, config.eig_tol, config.max_iter)?[0];
    drop(coarse);
    let fine = build_operator_matrix(operator, null, 2 * config.m)?;
    let values = largest_eigenvalues(&fine.matrix, k, config.eig_tol, config.max_iter)?;
    let delta = (values[0] - lambda_coarse).abs() / values[0].abs().max(f64::MIN_POSITIVE);
    if delta >= REFINEMENT_TOLERANCE {
        return Err(Error::RefinementNotConverged {
            coarse: config.m,
            fine: 2 * config.m,
            delta,
        });
    }
    Ok(SpectralResult {
        operator,
        null,
        leading_eigenvalues: values,
        m: config.m,
        refinement_delta: delta,
        config: *config,
    })
}
