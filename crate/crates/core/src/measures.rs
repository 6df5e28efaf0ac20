//! Exact performance measures of the thresholded interval estimator under the
//! normal-normal model.
//!
//! For one unit with standard error σ and prior N(η, τ²), the estimator keeps
//! the half-width ν·σ on the side facing η and drops the outer side whenever
//! X̄ falls outside η ± Cτ. With C_m = Cτ/√(σ²+τ²), a = σ/τ and b = √(1+a²):
//!
//! * expected length      BEL = 2νσΦ(C_m)
//! * coverage probability BCP = 2∫_{-∞}^{C_m} {Φ(ay + bν) − Φ(ay)} dΦ(y)
//! * threshold ratio      BTR = (2/M) Σ Φ(−C_m)
//!
//! Differentiating the BCP integrand in ν and integrating the Gaussian product
//! in closed form gives ∂BCP/∂ν = 2φ(ν)Φ(bC_m + aν).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use std::sync::OnceLock;

use crate::stats::{gauss_legendre, log_norm_cdf, log_norm_pdf, norm_cdf, norm_isf, norm_pdf, TRUNCATION};

/// Beyond this standardized threshold the C = ∞ closed forms are used.
/// The neglected mass is below 2Φ(−8) ≈ 1.2e-15.
pub const CM_SATURATION: f64 = 8.0;

/// Hyperparameters of the common normal prior N(η, τ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub eta: f64,
    pub tau: f64,
}

impl Prior {
    pub fn new(eta: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) || !eta.is_finite() {
            return domain(format!("prior requires finite eta and tau > 0, got ({eta}, {tau})"));
        }
        Ok(Self { eta, tau })
    }
}

/// Sampling information for one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSpec {
    pub sigma: f64,
    pub xbar: Option<f64>,
}

impl UnitSpec {
    pub fn new(sigma: f64, xbar: Option<f64>) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return domain(format!("standard error must be positive and finite, got {sigma}"));
        }
        Ok(Self { sigma, xbar })
    }
}

/// Global measures for one configuration of levels and threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalMeasures {
    /// Average expected length relative to the Sidak z-based family.
    pub brel: f64,
    /// Product of the individual coverage probabilities.
    pub bfwcr: f64,
    /// Expected share of one-sided intervals.
    pub btr: f64,
    /// Average expected length.
    pub bael: f64,
}

/// Standardized threshold C_m = Cτ/√(σ²+τ²).
#[inline]
pub fn c_m(c: f64, sigma: f64, tau: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    c * tau / sigma.hypot(tau)
}

/// Sidak individual level 1 − (1−q)^{1/M}.
pub fn sidak_alpha(q: f64, m: usize) -> f64 {
    -((-q).ln_1p() / m as f64).exp_m1()
}

/// ν = z_{α_S/2} for the Sidak level.
pub fn sidak_nu(q: f64, m: usize) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) || m == 0 {
        return domain(format!("Sidak level needs q in (0,1) and M >= 1, got q={q}, M={m}"));
    }
    norm_isf(0.5 * sidak_alpha(q, m))
}

/// Individual level α = 2(1 − Φ(ν)) for a half-width multiplier ν.
#[inline]
pub fn alpha_of_nu(nu: f64) -> f64 {
    2.0 * norm_cdf(-nu)
}

/// Bayes expected length 2νσΦ(C_m).
pub fn bel(nu: f64, c: f64, sigma: f64, tau: f64) -> f64 {
    2.0 * nu * sigma * norm_cdf(c_m(c, sigma, tau))
}

/// Legendre nodes per panel of the coverage integral.
const PANEL_NODES: usize = 48;

/// Width of the first panel, in units of 1/a.
const PANEL_EDGE: f64 = 8.0;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

/// One unit's coverage geometry at a fixed threshold.
///
/// BCP is evaluated as 2∫₀^ν Φ(bC_m + aw)φ(w)dw. The integrand rises over a
/// width of 1/a next to w = 0, so [0, ν] is split at min(ν, 8/a) and each
/// panel gets its own Legendre rule.
#[derive(Debug, Clone)]
pub struct CoverageKernel {
    a: f64,
    b: f64,
    cm: f64,
    sup: f64,
}

impl CoverageKernel {
    pub fn new(c: f64, sigma: f64, tau: f64) -> Self {
        let a = sigma / tau;
        let b = a.hypot(1.0);
        let cm = c_m(c, sigma, tau);
        let mut kernel = Self { a, b, cm, sup: 1.0 };
        if cm < CM_SATURATION {
            kernel.sup = kernel.integral(TRUNCATION);
        }
        kernel
    }

    fn integral(&self, nu: f64) -> f64 {
        let hi = nu.min(TRUNCATION);
        if !(hi > 0.0) {
            return 0.0;
        }
        let split = hi.min(PANEL_EDGE / self.a);
        let offset = self.b * self.cm;
        let (xs, ws) = panel_rule();
        let mut acc = 0.0;
        for (lo, up) in [(0.0, split), (split, hi)] {
            if up <= lo {
                continue;
            }
            let half = 0.5 * (up - lo);
            let mid = 0.5 * (up + lo);
            let mut panel = 0.0;
            for (&x, &w) in xs.iter().zip(ws) {
                let t = mid + half * x;
                panel += w * norm_cdf(offset + self.a * t) * norm_pdf(t);
            }
            acc += half * panel;
        }
        2.0 * acc
    }

    #[inline]
    pub fn standardized_threshold(&self) -> f64 {
        self.cm
    }

    #[inline]
    pub fn saturated(&self) -> bool {
        self.cm >= CM_SATURATION
    }

    /// BCP at ν.
    pub fn coverage(&self, nu: f64) -> f64 {
        if self.saturated() {
            return 1.0 - 2.0 * norm_cdf(-nu);
        }
        if nu == f64::INFINITY {
            return self.sup;
        }
        self.integral(nu)
    }

    /// Supremum of BCP over ν, reached as ν → ∞.
    pub fn max_coverage(&self) -> f64 {
        self.sup
    }

    /// ∂BCP/∂ν.
    #[inline]
    pub fn coverage_d1(&self, nu: f64) -> f64 {
        if self.saturated() {
            return 2.0 * norm_pdf(nu);
        }
        2.0 * norm_pdf(nu) * norm_cdf(self.b * self.cm + self.a * nu)
    }

    /// log ∂BCP/∂ν, finite for large ν.
    #[inline]
    pub fn log_coverage_d1(&self, nu: f64) -> f64 {
        let base = std::f64::consts::LN_2 + log_norm_pdf(nu);
        if self.saturated() {
            return base;
        }
        base + log_norm_cdf(self.b * self.cm + self.a * nu)
    }

    /// ∂²BCP/∂ν².
    #[inline]
    pub fn coverage_d2(&self, nu: f64) -> f64 {
        if self.saturated() {
            return -2.0 * nu * norm_pdf(nu);
        }
        let arg = self.b * self.cm + self.a * nu;
        2.0 * norm_pdf(nu) * (self.a * norm_pdf(arg) - nu * norm_cdf(arg))
    }

    /// ∂²BCP/∂ν² divided by ∂BCP/∂ν (the log-derivative of BCP'), stable for large ν.
    #[inline]
    pub fn d2_over_d1(&self, nu: f64) -> f64 {
        if self.saturated() {
            return -nu;
        }
        let arg = self.b * self.cm + self.a * nu;
        // φ(arg)/Φ(arg) through logs to survive arg ≪ 0
        self.a * (log_norm_pdf(arg) - log_norm_cdf(arg)).exp() - nu
    }
}

/// Bayes coverage probability of one thresholded interval.
pub fn bcp(nu: f64, c: f64, sigma: f64, tau: f64) -> f64 {
    CoverageKernel::new(c, sigma, tau).coverage(nu)
}

/// First derivative of [`bcp`] in ν.
pub fn bcp_dnu(nu: f64, c: f64, sigma: f64, tau: f64) -> f64 {
    let a = sigma / tau;
    let cm = c_m(c, sigma, tau);
    if cm >= CM_SATURATION {
        return 2.0 * norm_pdf(nu);
    }
    2.0 * norm_pdf(nu) * norm_cdf(a.hypot(1.0) * cm + a * nu)
}

/// Second derivative of [`bcp`] in ν.
pub fn bcp_d2nu(nu: f64, c: f64, sigma: f64, tau: f64) -> f64 {
    let a = sigma / tau;
    let cm = c_m(c, sigma, tau);
    if cm >= CM_SATURATION {
        return -2.0 * nu * norm_pdf(nu);
    }
    let arg = a.hypot(1.0) * cm + a * nu;
    2.0 * norm_pdf(nu) * (a * norm_pdf(arg) - nu * norm_cdf(arg))
}

/// Bayes threshold ratio (2/M) Σ Φ(−C_m).
pub fn btr(c: f64, sigmas: &[f64], tau: f64) -> Result<f64> {
    if sigmas.is_empty() {
        return domain("btr: empty list of standard errors");
    }
    let total: f64 = sigmas.iter().map(|&s| norm_cdf(-c_m(c, s, tau))).sum();
    Ok(2.0 * total / sigmas.len() as f64)
}

/// Sum of log BCP; `-inf` as soon as one unit has zero coverage.
pub fn log_bfwcr(nus: &[f64], c: f64, sigmas: &[f64], tau: f64) -> f64 {
    let mut total = 0.0;
    for (&nu, &s) in nus.iter().zip(sigmas) {
        let p = bcp(nu, c, s, tau);
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        total += p.ln();
    }
    total
}

/// BFWCR at a common half-width multiplier (e.g. Sidak levels) for every unit.
pub fn bfwcr_common(nu: f64, c: f64, sigmas: &[f64], tau: f64) -> f64 {
    let mut total = 0.0;
    for &s in sigmas {
        let p = bcp(nu, c, s, tau);
        if p <= 0.0 {
            return 0.0;
        }
        total += p.ln();
    }
    total.exp()
}

/// Σ BEL_m / Σ 2ν_ref,m σ_m: expected length relative to a z-based family
/// with the given reference multipliers.
pub fn relative_length(nus: &[f64], c: f64, sigmas: &[f64], tau: f64, reference_nus: &[f64]) -> f64 {
    let num: f64 = nus.iter().zip(sigmas).map(|(&nu, &s)| bel(nu, c, s, tau)).sum();
    let den: f64 = reference_nus.iter().zip(sigmas).map(|(&nu, &s)| 2.0 * nu * s).sum();
    num / den
}

/// All four global measures, with BREL taken against the Sidak z-based family.
pub fn global_measures(nus: &[f64], c: f64, sigmas: &[f64], tau: f64, q: f64) -> Result<GlobalMeasures> {
    let m = sigmas.len();
    if m == 0 || nus.len() != m {
        return domain(format!("global_measures: need |nus| = |sigmas| >= 1, got {} and {m}", nus.len()));
    }
    if !(tau > 0.0) || c.is_nan() || c < 0.0 {
        return domain(format!("global_measures: invalid tau={tau} or C={c}"));
    }
    let nu_ref = sidak_nu(q, m)?;
    let bel_sum: f64 = nus.iter().zip(sigmas).map(|(&nu, &s)| bel(nu, c, s, tau)).sum();
    let ref_sum: f64 = sigmas.iter().map(|&s| 2.0 * nu_ref * s).sum();
    let log_fw = log_bfwcr(nus, c, sigmas, tau);
    Ok(GlobalMeasures {
        brel: bel_sum / ref_sum,
        bfwcr: if log_fw == f64::NEG_INFINITY { 0.0 } else { log_fw.exp() },
        btr: btr(c, sigmas, tau)?,
        bael: bel_sum / m as f64,
    })
}

/// M standard errors equi-spaced on [lo, hi].
pub fn equispaced(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{integrate_dphi, QuadratureRule};

    #[test]
    fn c_m_examples() {
        assert_eq!(c_m(0.0, 2.0, 3.0), 0.0);
        assert!((c_m(1.7, 1e-12, 3.0) - 1.7).abs() < 1e-12);
        // 3.5·3/√34
        assert!((c_m(3.5, 5.0, 3.0) - 1.800_735_143_996_342_6).abs() < 1e-14);
        assert_eq!(c_m(f64::INFINITY, 5.0, 3.0), f64::INFINITY);
    }

    #[test]
    fn bel_limits() {
        assert!((bel(1.3, 0.0, 2.0, 1.0) - 1.3 * 2.0).abs() < 1e-15);
        assert!((bel(1.3, f64::INFINITY, 2.0, 1.0) - 2.0 * 1.3 * 2.0).abs() < 1e-15);
        let v = bel(1.6449, 3.5, 5.0, 3.0);
        assert!((v - 2.0 * 1.6449 * 5.0 * norm_cdf(1.800_735_143_996_342_6)).abs() < 1e-12);
        assert!((v - 15.86).abs() < 0.01);
    }

    #[test]
    fn bcp_limits() {
        for &nu in &[0.5, 1.96, 3.8] {
            let full = bcp(nu, f64::INFINITY, 2.0, 1.0);
            assert!((full - (1.0 - alpha_of_nu(nu))).abs() < 1e-15);
        }
        assert!(bcp(1e-9, 2.0, 1.0, 2.0) < 1e-8);
        assert_eq!(bcp(0.0, 2.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn bcp_at_c10_matches_limit() {
        for &(nu, s, t) in &[(1.5, 0.1, 3.0), (3.0, 1.0, 5.0), (2.2, 0.5, 2.0)] {
            assert!(c_m(10.0, s, t) >= CM_SATURATION);
            assert!((bcp(nu, 10.0, s, t) - (2.0 * norm_cdf(nu) - 1.0)).abs() <= 1e-6);
        }
    }

    #[test]
    fn bcp_just_below_saturation_is_continuous() {
        // pick tau so c_m straddles the switch
        let (nu, s) = (2.0_f64, 1.0_f64);
        let tau = 3.0;
        let c_lo = (CM_SATURATION - 1e-9) * s.hypot(tau) / tau;
        let below = bcp(nu, c_lo, s, tau);
        let limit = 2.0 * norm_cdf(nu) - 1.0;
        assert!((below - limit).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (nu, c, s, t) = (1.5, 3.0, 2.0, 3.0);
        let h = 1e-5;
        let fd = (bcp(nu + h, c, s, t) - bcp(nu - h, c, s, t)) / (2.0 * h);
        assert!((fd - bcp_dnu(nu, c, s, t)).abs() < 1e-6);
        let fd2 = (bcp_dnu(nu + h, c, s, t) - bcp_dnu(nu - h, c, s, t)) / (2.0 * h);
        assert!((fd2 - bcp_d2nu(nu, c, s, t)).abs() < 1e-6);
        assert!((bcp_dnu(nu, f64::INFINITY, s, t) - 2.0 * norm_pdf(nu)).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_differentiated_integrand() {
        // integrate b·φ(ay + bν) against dΦ up to C_m
        let rule = QuadratureRule::standard();
        for &(nu, c, s, t) in &[(0.3, 0.0, 1.0, 1.0), (1.5, 3.0, 2.0, 3.0), (4.0, 1.0, 9.0, 2.0)] {
            let a: f64 = s / t;
            let b = a.hypot(1.0);
            let quad = 2.0 * integrate_dphi(|y| b * norm_pdf(a * y + b * nu), c_m(c, s, t), rule).unwrap();
            assert!((quad - bcp_dnu(nu, c, s, t)).abs() < 1e-12, "{quad} vs {}", bcp_dnu(nu, c, s, t));
        }
    }

    #[test]
    fn matches_integral_over_y() {
        let rule = QuadratureRule::standard();
        for &(nu, c, s, t) in &[(0.3, 0.0, 1.0, 1.0), (1.5, 3.0, 2.0, 3.0), (2.0, 1.0, 0.05, 2.0), (4.0, 1.0, 9.0, 2.0)]
        {
            let a: f64 = s / t;
            let b = a.hypot(1.0);
            let f = |y: f64| norm_cdf(a * y + b * nu) - norm_cdf(a * y);
            let quad = 2.0 * integrate_dphi(f, c_m(c, s, t), rule).unwrap();
            assert!((quad - bcp(nu, c, s, t)).abs() < 1e-13, "{quad} vs {}", bcp(nu, c, s, t));
        }
    }

    #[test]
    fn steep_units_are_monotone_in_threshold() {
        let (nu, s, t) = (1.7757, 7.116, 0.2);
        let cs: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let p: Vec<f64> = cs.iter().map(|&c| bcp(nu, c, s, t)).collect();
        assert!(p.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        let h = 1e-5;
        let fd = (bcp(3.383 + h, 0.0, 9.399, 0.2) - bcp(3.383 - h, 0.0, 9.399, 0.2)) / (2.0 * h);
        assert!((fd - bcp_dnu(3.383, 0.0, 9.399, 0.2)).abs() < 1e-9);
    }

    #[test]
    fn kernel_log_derivative_is_stable() {
        let k = CoverageKernel::new(2.0, 5.0, 2.0);
        for &nu in &[0.5, 3.0, 10.0] {
            let direct = k.coverage_d1(nu).ln();
            assert!((k.log_coverage_d1(nu) - direct).abs() < 1e-12);
            let ratio = k.coverage_d2(nu) / k.coverage_d1(nu);
            assert!((k.d2_over_d1(nu) - ratio).abs() < 1e-10 * ratio.abs().max(1.0));
        }
        assert!(k.log_coverage_d1(60.0).is_finite());
    }

    #[test]
    fn btr_examples() {
        let s = equispaced(0.01, 10.0, 1000);
        assert_eq!(btr(0.0, &s, 3.0).unwrap(), 1.0);
        assert_eq!(btr(f64::INFINITY, &s, 3.0).unwrap(), 0.0);
        assert!(btr(1.0, &[], 3.0).is_err());
    }

    #[test]
    fn global_measures_limits() {
        let s = equispaced(0.01, 10.0, 1000);
        let q = 0.1;
        let nu = sidak_nu(q, s.len()).unwrap();
        let nus = vec![nu; s.len()];
        let inf = global_measures(&nus, f64::INFINITY, &s, 3.0, q).unwrap();
        assert!((inf.brel - 1.0).abs() < 1e-14);
        assert!((inf.bfwcr - 0.9).abs() < 1e-12);
        assert_eq!(inf.btr, 0.0);
        let zero = global_measures(&nus, 0.0, &s, 3.0, q).unwrap();
        assert!((zero.brel - 0.5).abs() < 1e-14);
        assert_eq!(zero.btr, 1.0);
    }

    #[test]
    fn bfwcr_zero_coverage_is_exact_zero() {
        let g = global_measures(&[0.0, 1.0], 1.0, &[1.0, 1.0], 1.0, 0.1).unwrap();
        assert_eq!(g.bfwcr, 0.0);
    }

    #[test]
    fn global_measures_rejects_mismatch() {
        assert!(global_measures(&[1.0], 1.0, &[1.0, 2.0], 1.0, 0.1).is_err());
        assert!(global_measures(&[], 1.0, &[], 1.0, 0.1).is_err());
    }

    #[test]
    fn sidak_single_unit_uses_full_budget() {
        assert!((sidak_alpha(0.1, 1) - 0.1).abs() < 1e-15);
        let nu = sidak_nu(0.1, 1).unwrap();
        assert!((alpha_of_nu(nu) - 0.1).abs() < 1e-14);
    }
}
