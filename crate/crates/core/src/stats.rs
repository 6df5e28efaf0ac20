//! Special functions and normal-measure quadrature.
//!
//! Everything here is a pure function of its arguments. The normal CDF goes
//! through a complementary error function (never through quadrature), the
//! quantile is Wichura's AS241 refined by one Halley step, and Student-t
//! quantities are built on the regularized incomplete beta function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use libm::erfc;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// 1/√(2π)
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Integration range for the normal measure is truncated to (-TRUNCATION, TRUNCATION].
/// Mass outside is 2Φ(-9) ≈ 2.3e-19.
pub const TRUNCATION: f64 = 9.0;

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 256;

#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub fn log_norm_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Standard normal CDF Φ(x). Total on the extended reals.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 - Φ(x), accurate in relative terms for large x.
#[inline]
pub fn norm_sf(x: f64) -> f64 {
    norm_cdf(-x)
}

/// log Φ(x), finite for every finite x.
pub fn log_norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 0.0;
    }
    if x > -30.0 {
        if x > 5.0 {
            // ln(1 - t) for tiny t
            return (-norm_sf(x)).ln_1p();
        }
        return norm_cdf(x).ln();
    }
    if x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    // Asymptotic series for the Mills ratio.
    let z2 = 1.0 / (x * x);
    let series = 1.0 - z2 * (1.0 - 3.0 * z2 * (1.0 - 5.0 * z2 * (1.0 - 7.0 * z2)));
    log_norm_pdf(x) - (-x).ln() + series.ln()
}

/// Standard normal quantile Φ⁻¹(p) for p in (0, 1).
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("normal quantile requires p in (0,1), got {p}"));
    }
    let x = ppnd16(p);
    Ok(halley_refine(x, p))
}

/// Quantile of the standard normal for the upper tail: Φ⁻¹(1 - tail), keeping
/// full relative precision when `tail` is tiny.
pub fn norm_isf(tail: f64) -> Result<f64> {
    Ok(-norm_quantile(tail)?)
}

fn halley_refine(x: f64, p: f64) -> f64 {
    if !x.is_finite() || !(1e-300..=1.0 - 1e-16).contains(&p) {
        return x;
    }
    // work in the tail that keeps precision
    let (err, sign) = if p > 0.5 { (norm_sf(x) - (1.0 - p), -1.0) } else { (norm_cdf(x) - p, 1.0) };
    let u = sign * err * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Wichura (1988) algorithm AS241, PPND16.
#[allow(clippy::excessive_precision)]
fn ppnd16(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r
            + 45921.953931549871457)
            * r
            + 13731.693765509461125)
            * r
            + 1971.5909503065514427)
            * r
            + 133.14166789178437745)
            * r
            + 3.387132872796366608;
        let den = ((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r
            + 21213.794301586595867)
            * r
            + 5394.1960214247511077)
            * r
            + 687.1870074920579083)
            * r
            + 42.313330701600911252)
            * r
            + 1.0;
        return q * num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r
            + 1.27045825245236838258)
            * r
            + 3.64784832476320460504)
            * r
            + 5.7694972214606914055)
            * r
            + 4.6303378461565452959)
            * r
            + 1.42343711074968357734;
        let den = ((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966)
            * r
            + 0.14810397642748007459)
            * r
            + 0.68976733498510000455)
            * r
            + 1.6763848301838038494)
            * r
            + 2.05319162663775882187)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386)
            * r
            + 0.026532189526576123093)
            * r
            + 0.29656057182850489123)
            * r
            + 1.7848265399172913358)
            * r
            + 5.4637849111641143699)
            * r
            + 6.6579046435011037772;
        let den = ((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5)
            * r
            + 7.868691311456132591e-4)
            * r
            + 0.0148753612908506148525)
            * r
            + 0.13692988092273580531)
            * r
            + 0.59983220655588793769)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Upper tail P(T > t) of Student's t with `df` degrees of freedom, t ≥ 0.
fn t_upper_tail(t: f64, df: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t == f64::INFINITY {
        return 0.0;
    }
    let t2 = t * t;
    // 0.5 I_{df/(df+t²)}(df/2, 1/2), evaluated on the argument that avoids cancellation
    let x = df / (df + t2);
    if x < 0.5 {
        0.5 * beta_reg(0.5 * df, 0.5, x)
    } else {
        0.5 * (1.0 - beta_reg(0.5, 0.5 * df, t2 / (df + t2)))
    }
}

fn check_df(df: f64) -> Result<()> {
    if !(df >= 1.0 && df.is_finite()) {
        return domain(format!("degrees of freedom must be >= 1, got {df}"));
    }
    Ok(())
}

/// Student-t CDF.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if t.is_nan() {
        return domain("t_cdf: NaN argument");
    }
    Ok(if t >= 0.0 { 1.0 - t_upper_tail(t, df) } else { t_upper_tail(-t, df) })
}

/// Student-t density.
pub fn t_pdf(t: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * (df * PI).ln();
    (ln_norm - 0.5 * (df + 1.0) * (t * t / df).ln_1p()).exp()
}

/// Student-t quantile for p in (0, 1) and df ≥ 1.
pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("t quantile requires p in (0,1), got {p}"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let tail = if p > 0.5 { 1.0 - p } else { p };
    let sign = if p > 0.5 { 1.0 } else { -1.0 };
    if df == 1.0 {
        // Cauchy
        return Ok(sign * (PI * (0.5 - tail)).tan());
    }
    if df == 2.0 {
        let u = 1.0 - 2.0 * tail;
        return Ok(sign * u * (2.0 / (1.0 - u * u)).sqrt());
    }

    // Safeguarded Newton for t > 0 with P(T > t) = tail.
    let mut lo = 0.0;
    let mut hi = norm_isf(tail)?.max(1.0);
    while t_upper_tail(hi, df) > tail {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence { iterations: 0, residual: tail });
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = t_upper_tail(t, df) - tail;
        if g > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let step = g / t_pdf(t, df);
        let mut next = t + step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.max(1.0) {
            t = next;
            break;
        }
        t = next;
    }
    Ok(sign * t)
}

/// How reference Gauss-Legendre nodes are placed on the normal measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RuleKind {
    /// Legendre nodes on y ∈ (-9, upper], weights multiplied by φ(y).
    LegendreInY,
    /// Legendre nodes on u ∈ (Φ(-9), Φ(upper)], mapped through Φ⁻¹.
    LegendreInProbability,
}

/// A Gauss-Legendre reference rule on [-1, 1] plus the recipe for carrying it
/// onto the standard normal measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    reference_nodes: Vec<f64>,
    reference_weights: Vec<f64>,
}

/// Nodes and weights for ∫_{-∞}^{upper} · dΦ(y).
#[derive(Debug, Clone)]
pub struct NormalNodes {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n: usize) -> Self {
        let (reference_nodes, reference_weights) = gauss_legendre(n);
        Self { kind, reference_nodes, reference_weights }
    }

    /// The shared 256-node default rule.
    pub fn standard() -> &'static QuadratureRule {
        static RULE: OnceLock<QuadratureRule> = OnceLock::new();
        RULE.get_or_init(|| QuadratureRule::new(RuleKind::LegendreInY, DEFAULT_NODES))
    }

    pub fn len(&self) -> usize {
        self.reference_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference_nodes.is_empty()
    }

    /// Nodes increasing, weights positive. Empty when `upper ≤ -9`.
    pub fn on_normal_measure(&self, upper: f64) -> NormalNodes {
        let mut out = NormalNodes { nodes: Vec::with_capacity(self.len()), weights: Vec::with_capacity(self.len()) };
        self.for_each_node(upper, |y, w| {
            out.nodes.push(y);
            out.weights.push(w);
        });
        out
    }

    /// Visits (node, weight) pairs of the normal-measure rule without allocating.
    #[inline]
    pub fn for_each_node(&self, upper: f64, mut visit: impl FnMut(f64, f64)) {
        let up = upper.min(TRUNCATION);
        if up <= -TRUNCATION {
            return;
        }
        match self.kind {
            RuleKind::LegendreInY => {
                let half = 0.5 * (up + TRUNCATION);
                let mid = 0.5 * (up - TRUNCATION);
                for (&x, &w) in self.reference_nodes.iter().zip(&self.reference_weights) {
                    let y = mid + half * x;
                    visit(y, half * w * norm_pdf(y));
                }
            }
            RuleKind::LegendreInProbability => {
                let u_lo = norm_cdf(-TRUNCATION);
                let u_hi = norm_cdf(up);
                let half = 0.5 * (u_hi - u_lo);
                let mid = 0.5 * (u_hi + u_lo);
                for (&x, &w) in self.reference_nodes.iter().zip(&self.reference_weights) {
                    let u = mid + half * x;
                    // u stays strictly inside (0, 1)
                    let y = ppnd16(u);
                    let y = halley_refine(y, u);
                    visit(y, half * w);
                }
            }
        }
    }
}

/// ∫_{-∞}^{upper} f(y) dΦ(y) with the given rule.
pub fn integrate_dphi(f: impl Fn(f64) -> f64, upper: f64, rule: &QuadratureRule) -> Result<f64> {
    if upper.is_nan() {
        return domain("integrate_dphi: NaN upper limit");
    }
    let mut acc = 0.0;
    let mut bad = None;
    rule.for_each_node(upper, |y, w| {
        if bad.is_some() {
            return;
        }
        let v = f(y);
        if !v.is_finite() {
            bad = Some((y, v));
        } else {
            acc += w * v;
        }
    });
    match bad {
        Some((node, value)) => Err(Error::NonFinite { node, value }),
        None => Ok(acc),
    }
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let prev = z;
            z = prev - p1 / dp;
            if (z - prev).abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
