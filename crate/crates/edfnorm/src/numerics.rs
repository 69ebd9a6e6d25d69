//! Special functions and quadrature shared by every other module.
//!
//! The standard normal CDF is evaluated through a rational-approximation
//! `erf`/`erfc` pair (Cody's SPECFUN coefficients) accurate to better than
//! `1e-15` relative over the whole range, so tail probabilities like
//! `Φ(-8)` come out with full relative precision instead of underflowing.
//! The quantile uses Acklam's rational initializer polished by two Newton
//! steps against that CDF.
//!
//! Integration is plain Gauss–Legendre: either a single panel or a
//! composite rule made of fixed-width panels.  The default rule used by the
//! slope integrals is 40 panels of width 0.5 covering `[-10, 10]` with 256
//! nodes per panel, which resolves products of normal densities and smooth
//! factors to well below `1e-12`.

use crate::{Error, Result};

/// `1/√(2π)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_68;
/// `√(2π)`.
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
/// `1/√π`, used by the kernel closed forms.
pub const INV_SQRT_PI: f64 = 0.564_189_583_547_756_29;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

// ---------------------------------------------------------------------------
// erf / erfc (Cody, "Rational Chebyshev approximation of the error function")
// ---------------------------------------------------------------------------

const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const ERF_B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const ERF_C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94e0,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const ERF_D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
const ERF_P: [f64; 6] = [
    3.053_266_349_612_323_44e-1,
    3.603_448_999_498_044_39e-1,
    1.257_817_261_112_292_46e-1,
    1.608_378_514_874_227_66e-2,
    6.587_491_615_298_378_03e-4,
    1.631_538_713_730_209_78e-2,
];
const ERF_Q: [f64; 5] = [
    2.568_520_192_289_822_42e0,
    1.872_952_849_923_460_47e0,
    5.279_051_029_514_284_12e-1,
    6.051_834_131_244_131_91e-2,
    2.335_204_976_268_691_85e-3,
];

const ERF_THRESH: f64 = 0.46875;
const ERFC_XBIG: f64 = 26.543;
const XSMALL: f64 = 1.11e-16;

/// `erf` on `|x| ≤ 0.46875` (odd rational approximation, returns erf(x)).
fn erf_small(x: f64) -> f64 {
    let y = x.abs();
    let ysq = if y > XSMALL { y * y } else { 0.0 };
    let mut xnum = ERF_A[4] * ysq;
    let mut xden = ysq;
    for i in 0..3 {
        xnum = (xnum + ERF_A[i]) * ysq;
        xden = (xden + ERF_B[i]) * ysq;
    }
    x * (xnum + ERF_A[3]) / (xden + ERF_B[3])
}

/// `erfc` on `0.46875 ≤ y ≤ 4` for non-negative `y`.
fn erfc_mid(y: f64) -> f64 {
    let mut xnum = ERF_C[8] * y;
    let mut xden = y;
    for i in 0..7 {
        xnum = (xnum + ERF_C[i]) * y;
        xden = (xden + ERF_D[i]) * y;
    }
    let result = (xnum + ERF_C[7]) / (xden + ERF_D[7]);
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * result
}

/// `erfc` on `y > 4` for non-negative `y`.
fn erfc_large(y: f64) -> f64 {
    if y >= ERFC_XBIG {
        return 0.0;
    }
    let ysq_inv = 1.0 / (y * y);
    let mut xnum = ERF_P[5] * ysq_inv;
    let mut xden = ysq_inv;
    for i in 0..4 {
        xnum = (xnum + ERF_P[i]) * ysq_inv;
        xden = (xden + ERF_Q[i]) * ysq_inv;
    }
    let mut result = ysq_inv * (xnum + ERF_P[4]) / (xden + ERF_Q[4]);
    result = (INV_SQRT_PI - result) / y;
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * result
}

/// Error function, `erf(x) = (2/√π)∫₀ˣ e^{−t²} dt`.
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= ERF_THRESH {
        erf_small(x)
    } else {
        let e = if y <= 4.0 { erfc_mid(y) } else { erfc_large(y) };
        if x > 0.0 {
            1.0 - e
        } else {
            e - 1.0
        }
    }
}

/// Complementary error function, `erfc(x) = 1 − erf(x)`, without the
/// cancellation `1 − erf` would suffer for large `x`.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    let result = if y <= ERF_THRESH {
        1.0 - erf_small(x.abs())
    } else if y <= 4.0 {
        erfc_mid(y)
    } else {
        erfc_large(y)
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

// ---------------------------------------------------------------------------
// Standard normal density, CDF, quantile
// ---------------------------------------------------------------------------

/// Standard normal density `φ(x) = e^{−x²/2}/√(2π)`.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF `Φ(x) = ½·erfc(−x/√2)`.
///
/// Relative accuracy is preserved in the lower tail, so products like
/// `Φ(x)·Φ(−x)` (the Anderson–Darling weight denominator) can be formed
/// without catastrophic loss for `|x|` up to ~37.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

// Acklam's rational approximation for the normal quantile.
const ACK_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239e0,
];
const ACK_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const ACK_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838e0,
    -2.549_732_539_343_734e0,
    4.374_664_141_464_968e0,
    2.938_163_982_698_783e0,
];
const ACK_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996e0,
    3.754_408_661_907_416e0,
];
const ACK_P_LOW: f64 = 0.02425;

/// Standard normal quantile `Φ⁻¹(p)` for `0 < p < 1`.
///
/// Acklam's rational approximation (worst relative error ≈ 1.15e-9) is
/// refined with two Newton steps against [`norm_cdf`], giving errors below
/// `1e-13` across the domain.  The upper half is reflected through
/// `Φ⁻¹(p) = −Φ⁻¹(1−p)` — exact in floating point for `p ≥ 0.5` — so the
/// Newton residual `Φ(x) − p` is always formed from well-scaled numbers
/// instead of two values close to 1.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument {
            reason: format!("norm_quantile requires 0 < p < 1, got {p}"),
        });
    }
    if p > 0.5 {
        return Ok(-norm_quantile_lower_half(1.0 - p));
    }
    Ok(norm_quantile_lower_half(p))
}

/// Quantile for `0 < p ≤ 0.5`; here `Φ(x) − p` keeps full relative
/// precision all the way into the deep tail.
fn norm_quantile_lower_half(p: f64) -> f64 {
    let mut x = if p < ACK_P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((ACK_C[0] * q + ACK_C[1]) * q + ACK_C[2]) * q + ACK_C[3]) * q + ACK_C[4]) * q
            + ACK_C[5])
            / ((((ACK_D[0] * q + ACK_D[1]) * q + ACK_D[2]) * q + ACK_D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((ACK_A[0] * r + ACK_A[1]) * r + ACK_A[2]) * r + ACK_A[3]) * r + ACK_A[4]) * r
            + ACK_A[5])
            * q
            / (((((ACK_B[0] * r + ACK_B[1]) * r + ACK_B[2]) * r + ACK_B[3]) * r + ACK_B[4]) * r
                + 1.0)
    };
    // Two Newton corrections against the high-accuracy CDF.
    for _ in 0..2 {
        let err = norm_cdf(x) - p;
        let d = norm_pdf(x);
        if d > 0.0 {
            x -= err / d;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of a fixed quadature rule on some interval.
///
/// The fields are public so integrands can be evaluated with a plain
/// `zip`; the invariant `nodes.len() == weights.len()` is maintained by
/// every constructor.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Abscissas, in increasing order.
    pub nodes: Vec<f64>,
    /// Matching positive weights; they sum to the interval length.
    pub weights: Vec<f64>,
}

/// Reference Gauss–Legendre nodes/weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.  Nodes are returned ascending and
/// exactly symmetric about 0.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi-style initial guess for the i-th root from the top.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        if n % 2 == 1 && i == (n - 1) / 2 {
            x = 0.0;
        }
        let mut dpn = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dpn = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dpn;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                // One final derivative refresh happens naturally next loop;
                // the weight formula below tolerates the last half-ulp.
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        // Mirror the root to keep the rule exactly symmetric.
        nodes[i] = -x.abs();
        nodes[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule on a single interval `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuadrature {
                reason: "node count must be positive".into(),
            });
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidQuadrature {
                reason: format!("invalid interval [{a}, {b}]"),
            });
        }
        let (xs, ws) = legendre_reference(n);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        Ok(QuadratureRule {
            nodes: xs.iter().map(|&x| c + h * x).collect(),
            weights: ws.iter().map(|&w| h * w).collect(),
        })
    }

    /// Composite rule: panels of width `panel_width` tiling `[a, b]` (the
    /// last panel is shortened if the width does not divide the interval),
    /// each carrying an `nodes_per_panel`-point Gauss–Legendre rule.
    pub fn composite_gauss_legendre(
        a: f64,
        b: f64,
        panel_width: f64,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        if !(panel_width > 0.0) {
            return Err(Error::InvalidQuadrature {
                reason: format!("panel width must be positive, got {panel_width}"),
            });
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidQuadrature {
                reason: format!("invalid interval [{a}, {b}]"),
            });
        }
        if nodes_per_panel == 0 {
            return Err(Error::InvalidQuadrature {
                reason: "node count must be positive".into(),
            });
        }
        let (xs, ws) = legendre_reference(nodes_per_panel);
        let panels = ((b - a) / panel_width).ceil() as usize;
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for k in 0..panels {
            let lo = a + k as f64 * panel_width;
            let hi = (lo + panel_width).min(b);
            if hi <= lo {
                break;
            }
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            for (&x, &w) in xs.iter().zip(&ws) {
                nodes.push(c + h * x);
                weights.push(h * w);
            }
        }
        Ok(QuadratureRule { nodes, weights })
    }

    /// The crate-wide default: `[-10, 10]` in 40 panels of width 0.5 with
    /// 256 nodes per panel.  All slope and derivative integrals against the
    /// normal density use this rule unless told otherwise.
    pub fn default_rule() -> Self {
        Self::composite_gauss_legendre(-10.0, 10.0, 0.5, 256)
            .expect("default rule parameters are valid")
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the rule has no nodes (cannot happen via constructors).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Integrate `f` with the given rule.
///
/// Fails with [`Error::NonFiniteIntegrand`] naming the offending abscissa
/// if `f` returns NaN or ±∞ at any node.
pub fn integrate_gauss<F: FnMut(f64) -> f64>(mut f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut acc = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { x });
        }
        acc += w * v;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Global maximization of |f|
// ---------------------------------------------------------------------------

/// Golden-section refinement of the maximum of `g` on `[lo, hi]`, assuming
/// the bracket contains a single local maximum.  Returns `(x, g(x))`.
fn golden_section_max<F: FnMut(f64) -> f64>(mut g: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, g(mid))
}

/// Global maximum of `|f|` over `[lo, hi]`.
///
/// A scan over `grid` equally spaced points (endpoints included) locates
/// the best basin; golden-section search then refines the bracket around it
/// to an abscissa tolerance of `1e-10`.  Returns `(argmax, max)`.
///
/// Ties in the scan are broken toward the smaller abscissa (the scan keeps
/// the first maximum it sees), and the returned maximum is never smaller
/// than any scanned value: if the refinement cannot improve on the best
/// scan point, the scan point is returned unchanged.
pub fn maximize_abs<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Result<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument {
            reason: format!("invalid maximization interval [{lo}, {hi}]"),
        });
    }
    if grid < 2 {
        return Err(Error::InvalidArgument {
            reason: "maximization grid needs at least 2 points".into(),
        });
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best_i = 0usize;
    let mut best_x = lo;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid {
        let x = if i == grid - 1 { hi } else { lo + i as f64 * step };
        let v = f(x).abs();
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { x });
        }
        if v > best_v {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    let bra_lo = if best_i == 0 { lo } else { lo + (best_i - 1) as f64 * step };
    let bra_hi = if best_i + 1 >= grid {
        hi
    } else {
        lo + (best_i + 1) as f64 * step
    };
    let (rx, rv) = golden_section_max(|x| f(x).abs(), bra_lo, bra_hi);
    if rv.is_finite() && rv > best_v {
        Ok((rx, rv))
    } else {
        Ok((best_x, best_v))
    }
}
