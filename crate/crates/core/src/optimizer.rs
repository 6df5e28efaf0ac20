//! Allocation of individual levels under a family-wise coverage constraint,
//! and selection of the threshold C*.
//!
//! For a fixed threshold C the problem is
//!
//! ```text
//! minimize   (1/M) Σ h_β(BEL_m(ν_m))
//! subject to Σ log BCP_m(ν_m) = log(1 − q)
//! ```
//!
//! with h_β(x) = x/(β + x). Each ν_m couples to the others only through the
//! multiplier λ, so the KKT Jacobian is diagonal plus a rank-one border and a
//! Newton step costs O(M).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{alpha_of_nu, bel, bfwcr_common, btr, c_m, sidak_nu, CoverageKernel};
use crate::stats::norm_cdf;

const NU_MIN: f64 = 1e-6;
const NU_MAX: f64 = 40.0;
const NEWTON_MAX_ITER: usize = 200;
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_START_ITER: usize = 8;
const OUTER_MAX_ITER: usize = 200;

/// The bounded length loss h(x) = u/(β + u) with u = x / `length_divisor`.
///
/// `length_divisor = 1` is the plain loss on the expected length. Larger
/// divisors rescale β: h applied to x/d with β equals h applied to x with d·β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthLoss {
    pub beta: f64,
    pub length_divisor: f64,
}

impl LengthLoss {
    pub const DEFAULT_BETA: f64 = 1000.0;

    pub fn new(beta: f64) -> Self {
        Self { beta, length_divisor: 1.0 }
    }

    pub fn with_length_divisor(mut self, divisor: f64) -> Self {
        self.length_divisor = divisor;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return domain(format!("beta must be positive and finite, got {}", self.beta));
        }
        if !(self.length_divisor > 0.0 && self.length_divisor.is_finite()) {
            return domain(format!("length divisor must be positive, got {}", self.length_divisor));
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        let u = x / self.length_divisor;
        u / (self.beta + u)
    }

    #[inline]
    pub fn d1(&self, x: f64) -> f64 {
        let u = x / self.length_divisor;
        self.beta / (self.length_divisor * (self.beta + u).powi(2))
    }

    #[inline]
    pub fn d2(&self, x: f64) -> f64 {
        let u = x / self.length_divisor;
        -2.0 * self.beta / (self.length_divisor.powi(2) * (self.beta + u).powi(3))
    }
}

impl Default for LengthLoss {
    fn default() -> Self {
        Self::new(Self::DEFAULT_BETA)
    }
}

/// Which solver produced an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    /// Newton-Raphson on the full Lagrange system from the Sidak start.
    Newton,
    /// Bracketed solve on the multiplier, then Newton polish.
    BracketedMultiplier,
}

/// Optimized individual levels at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelAllocation {
    /// ν_m = z_{α_m/2}
    pub nus: Vec<f64>,
    /// α_m = 2(1 − Φ(ν_m))
    pub alphas: Vec<f64>,
    pub lagrange: f64,
    /// max_m |∂L/∂ν_m| / |∂f/∂ν_m|
    pub kkt_residual: f64,
    /// |Σ log BCP_m − log(1 − q)|
    pub constraint_residual: f64,
    pub objective: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

/// Per-unit quantities at the current ν.
#[derive(Debug, Clone, Copy)]
struct UnitState {
    log_p: f64,
    /// (log BCP)'
    g1: f64,
    /// (log BCP)''
    g2: f64,
    /// objective derivatives
    f1: f64,
    f2: f64,
}

struct Problem<'a> {
    kernels: Vec<CoverageKernel>,
    /// BEL_m = slope_m · ν_m
    slopes: Vec<f64>,
    loss: &'a LengthLoss,
    m: f64,
    log_target: f64,
}

impl<'a> Problem<'a> {
    fn new(c: f64, sigmas: &[f64], tau: f64, q: f64, loss: &'a LengthLoss) -> Self {
        let kernels = sigmas.iter().map(|&s| CoverageKernel::new(c, s, tau)).collect();
        let slopes = sigmas.iter().map(|&s| 2.0 * s * norm_cdf(c_m(c, s, tau))).collect();
        Self { kernels, slopes, loss, m: sigmas.len() as f64, log_target: (-q).ln_1p() }
    }

    fn len(&self) -> usize {
        self.kernels.len()
    }

    fn unit(&self, i: usize, nu: f64) -> UnitState {
        let k = &self.kernels[i];
        let slope = self.slopes[i];
        let p = k.coverage(nu);
        let log_p = p.ln();
        // p1/p through logs: p1 can underflow long before the ratio matters
        let g1 = (k.log_coverage_d1(nu) - log_p).exp();
        let g2 = g1 * k.d2_over_d1(nu) - g1 * g1;
        let x = slope * nu;
        UnitState { log_p, g1, g2, f1: slope * self.loss.d1(x) / self.m, f2: slope * slope * self.loss.d2(x) / self.m }
    }

    fn objective(&self, nus: &[f64]) -> f64 {
        nus.iter().zip(&self.slopes).map(|(&nu, &s)| self.loss.value(s * nu)).sum::<f64>() / self.m
    }

    fn max_log_coverage(&self) -> f64 {
        self.kernels.iter().map(|k| k.max_coverage().ln()).sum()
    }

    /// (scaled stationarity residual, constraint residual)
    fn residuals(&self, nus: &[f64], lambda: f64) -> (f64, f64) {
        let mut stat = 0.0_f64;
        let mut total = 0.0;
        for (i, &nu) in nus.iter().enumerate() {
            let u = self.unit(i, nu);
            total += u.log_p;
            stat = stat.max(((u.f1 - lambda * u.g1) / u.f1).abs());
        }
        (stat, (total - self.log_target).abs())
    }

    /// ν solving f1(ν) = λ g1(ν) for one unit, clamped to [NU_MIN, NU_MAX].
    /// Returns the solution and dψ/dν there.
    fn unit_response(&self, i: usize, log_lambda: f64, start: f64) -> (f64, f64) {
        // ψ(ν) = log f1 − log g1, increasing near the solution
        let psi = |nu: f64| {
            let u = self.unit(i, nu);
            (u.f1.ln() - u.g1.ln() - log_lambda, u.f2 / u.f1 - u.g2 / u.g1)
        };
        let mut nu = start.clamp(NU_MIN, NU_MAX);
        for _ in 0..8 {
            let (val, d) = psi(nu);
            if !(d > 0.0) || !val.is_finite() {
                break;
            }
            let next = nu - val / d;
            if !(next > NU_MIN && next < NU_MAX) {
                break;
            }
            if (next - nu).abs() <= 1e-12 * nu.max(1.0) {
                return (next, d);
            }
            nu = next;
        }

        let (lo_val, _) = psi(NU_MIN);
        if lo_val >= 0.0 {
            return (NU_MIN, f64::INFINITY);
        }
        let (hi_val, _) = psi(NU_MAX);
        if hi_val <= 0.0 {
            return (NU_MAX, f64::INFINITY);
        }
        let (mut lo, mut hi) = (NU_MIN, NU_MAX);
        let mut deriv = f64::INFINITY;
        for _ in 0..200 {
            let (val, d) = psi(nu);
            deriv = d;
            if val < 0.0 {
                lo = nu;
            } else {
                hi = nu;
            }
            let mut next = nu - val / d;
            if !(d > 0.0) || !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - nu).abs() <= 1e-12 * nu.max(1.0) || hi - lo <= 1e-12 * hi {
                nu = next;
                break;
            }
            nu = next;
        }
        (nu, deriv)
    }

    /// Bracketed solve on log λ; each ν_m follows its stationarity equation.
    fn solve_bracketed(&self, start: &[f64], log_lambda0: f64, tol: f64) -> Result<(Vec<f64>, f64, usize)> {
        let mut nus = start.to_vec();
        let eval = |log_lambda: f64, nus: &mut Vec<f64>| -> (f64, f64) {
            let mut total = 0.0;
            let mut slope = 0.0;
            for (i, slot) in nus.iter_mut().enumerate() {
                let (nu, d) = self.unit_response(i, log_lambda, *slot);
                *slot = nu;
                let u = self.unit(i, nu);
                total += u.log_p;
                if d.is_finite() && d > 0.0 {
                    slope += u.g1 / d;
                }
            }
            // log(−Σ log p) is close to linear in log λ
            if total < 0.0 {
                ((-self.log_target).ln() - (-total).ln(), -slope / total)
            } else {
                (f64::INFINITY, 0.0)
            }
        };

        let mut s = log_lambda0;
        let (mut val, mut slope) = eval(s, &mut nus);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut iterations = 0;
        for it in 0..OUTER_MAX_ITER {
            iterations = it + 1;
            if val.abs() <= tol {
                return Ok((nus, s, iterations));
            }
            if val < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let mut next = if slope > 0.0 { s - val / slope } else { f64::NAN };
            let bracketed = lo.is_finite() && hi.is_finite();
            if !next.is_finite() || (bracketed && !(next > lo && next < hi)) {
                next = if bracketed {
                    0.5 * (lo + hi)
                } else if val < 0.0 {
                    s + 4.0
                } else {
                    s - 4.0
                };
            }
            if !lo.is_finite() && next > s + 8.0 {
                next = s + 8.0;
            }
            if !hi.is_finite() && next < s - 8.0 {
                next = s - 8.0;
            }
            if bracketed && (hi - lo) < 1e-15 * s.abs().max(1.0) {
                break;
            }
            s = next;
            (val, slope) = eval(s, &mut nus);
        }
        if val.abs() <= tol * 100.0 {
            return Ok((nus, s, iterations));
        }
        Err(Error::NoConvergence { iterations, residual: val.abs() })
    }

    /// Sum of squared scaled residuals.
    fn merit(&self, nus: &[f64], lambda: f64) -> f64 {
        let mut sum = 0.0;
        let mut total = 0.0;
        for (i, &nu) in nus.iter().enumerate() {
            let u = self.unit(i, nu);
            total += u.log_p;
            sum += ((u.f1 - lambda * u.g1) / u.f1).powi(2);
        }
        sum + (total - self.log_target).powi(2)
    }

    /// Newton-Raphson on (ν, λ) with step halving.
    fn solve_newton(&self, nus0: &[f64], lambda0: f64, max_iter: usize) -> Option<(Vec<f64>, f64, usize)> {
        let n = self.len();
        let mut nus = nus0.to_vec();
        let mut lambda = lambda0;
        let merit = |nus: &[f64], lambda: f64| self.merit(nus, lambda);
        let mut current = merit(&nus, lambda);
        if !current.is_finite() {
            return None;
        }
        let mut d_inv_r = vec![0.0; n];
        let mut d_inv_g = vec![0.0; n];
        for it in 0..max_iter {
            if current <= NEWTON_TOL * NEWTON_TOL {
                return Some((nus, lambda, it));
            }
            let mut log_total = 0.0;
            let mut gdr = 0.0;
            let mut gdg = 0.0;
            for i in 0..n {
                let u = self.unit(i, nus[i]);
                log_total += u.log_p;
                let r = u.f1 - lambda * u.g1;
                let d = u.f2 - lambda * u.g2;
                // indefinite pivots are fine as long as they are not near zero
                if !d.is_finite() || d.abs() <= 1e-10 * (u.f2.abs() + lambda * u.g2.abs()) {
                    return None;
                }
                d_inv_r[i] = r / d;
                d_inv_g[i] = u.g1 / d;
                gdr += u.g1 * d_inv_r[i];
                gdg += u.g1 * d_inv_g[i];
            }
            let rc = log_total - self.log_target;
            let d_lambda = (gdr - rc) / gdg;
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial: Vec<f64> = (0..n).map(|i| nus[i] + step * (d_inv_g[i] * d_lambda - d_inv_r[i])).collect();
                let trial_lambda = lambda + step * d_lambda;
                if trial.iter().all(|&v| v > 0.0 && v < NU_MAX) && trial_lambda > 0.0 {
                    let m = merit(&trial, trial_lambda);
                    if m < current {
                        nus = trial;
                        lambda = trial_lambda;
                        current = m;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                return (current <= (NEWTON_TOL * 10.0).powi(2)).then_some((nus, lambda, it));
            }
        }
        (current <= NEWTON_TOL * NEWTON_TOL).then_some((nus, lambda, max_iter))
    }

    /// λ minimizing ‖f1 − λ g1‖ at fixed ν.
    fn least_squares_lambda(&self, nus: &[f64]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (i, &nu) in nus.iter().enumerate() {
            let u = self.unit(i, nu);
            // relative weighting so every unit counts equally
            let w = 1.0 / (u.f1 * u.f1);
            num += w * u.f1 * u.g1;
            den += w * u.g1 * u.g1;
        }
        num / den
    }
}

/// Optimal ν allocation at threshold `c` under the constraint BFWCR = 1 − q.
pub fn optimize_levels(c: f64, sigmas: &[f64], tau: f64, q: f64, loss: &LengthLoss) -> Result<LevelAllocation> {
    validate(c, sigmas, tau, q)?;
    loss.validate()?;
    let problem = Problem::new(c, sigmas, tau, q, loss);
    let max_log = problem.max_log_coverage();
    if max_log < problem.log_target + 1e-12 {
        return Err(Error::Infeasible { max_log_coverage: max_log, required: problem.log_target });
    }

    let start = vec![sidak_nu(q, sigmas.len())?; sigmas.len()];
    let lambda0 = problem.least_squares_lambda(&start);

    let (nus, lambda, iterations, method) = match problem.solve_newton(&start, lambda0, NEWTON_START_ITER) {
        Some((nus, lambda, it)) => (nus, lambda, it, SolveMethod::Newton),
        None => {
            let (nus, log_lambda, outer) = problem.solve_bracketed(&start, lambda0.ln(), 1e-4)?;
            match problem.solve_newton(&nus, log_lambda.exp(), NEWTON_MAX_ITER) {
                Some((polished, lambda, it)) => (polished, lambda, outer + it, SolveMethod::BracketedMultiplier),
                None => (nus, log_lambda.exp(), outer, SolveMethod::BracketedMultiplier),
            }
        }
    };

    let (kkt_residual, constraint_residual) = problem.residuals(&nus, lambda);
    let objective = problem.objective(&nus);
    Ok(LevelAllocation {
        alphas: nus.iter().map(|&nu| alpha_of_nu(nu)).collect(),
        nus,
        lagrange: lambda,
        kkt_residual,
        constraint_residual,
        objective,
        iterations,
        method,
    })
}

/// Objective (1/M) Σ h(BEL_m) for a given allocation.
pub fn allocation_objective(nus: &[f64], c: f64, sigmas: &[f64], tau: f64, loss: &LengthLoss) -> f64 {
    nus.iter().zip(sigmas).map(|(&nu, &s)| loss.value(bel(nu, c, s, tau))).sum::<f64>() / sigmas.len() as f64
}

fn validate(c: f64, sigmas: &[f64], tau: f64, q: f64) -> Result<()> {
    if sigmas.is_empty() {
        return domain("need at least one standard error");
    }
    if sigmas.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return domain("standard errors must be positive and finite");
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return domain(format!("tau must be positive, got {tau}"));
    }
    if !(q > 0.0 && q < 1.0) {
        return domain(format!("q must lie in (0,1), got {q}"));
    }
    if c.is_nan() || c < 0.0 {
        return domain(format!("threshold must be nonnegative, got {c}"));
    }
    Ok(())
}

/// One threshold on the BREL curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub c: f64,
    /// Optimized expected length over the Sidak z-based family; `None` when infeasible.
    pub brel: Option<f64>,
    /// Optimized expected length over the optimized z-based family (C = ∞ allocation).
    pub brel_vs_optimized: Option<f64>,
    pub btr: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CStarResult {
    pub c_star: f64,
    pub brel_at_cstar: f64,
    pub allocation: LevelAllocation,
    pub curve: Vec<CurvePoint>,
    /// REL of the optimized z-based family against Sidak.
    pub classical_rel: f64,
}

/// Default threshold grid: 0 to 6 by 0.05, then C = ∞.
pub fn default_c_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=120).map(|i| i as f64 * 0.05).collect();
    grid.push(f64::INFINITY);
    grid
}

/// Scan `c_grid`, optimize levels at each point and return the BREL minimizer.
pub fn find_c_star(sigmas: &[f64], tau: f64, q: f64, loss: &LengthLoss, c_grid: &[f64]) -> Result<CStarResult> {
    if c_grid.is_empty() {
        return domain("threshold grid is empty");
    }
    if c_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return domain("threshold grid must be sorted ascending");
    }
    validate(0.0, sigmas, tau, q)?;
    let nu_s = sidak_nu(q, sigmas.len())?;
    let sidak_len: f64 = sigmas.iter().map(|&s| 2.0 * nu_s * s).sum();
    let classical = optimize_levels(f64::INFINITY, sigmas, tau, q, loss)?;
    let classical_len: f64 = classical.nus.iter().zip(sigmas).map(|(&nu, &s)| 2.0 * nu * s).sum();

    let solved: Vec<(f64, Result<LevelAllocation>)> = c_grid
        .par_iter()
        .map(|&c| {
            if c == f64::INFINITY {
                (c, Ok(classical.clone()))
            } else {
                (c, optimize_levels(c, sigmas, tau, q, loss))
            }
        })
        .collect();

    let mut curve = Vec::with_capacity(solved.len());
    let mut best: Option<(f64, f64, LevelAllocation)> = None;
    let mut last_error = None;
    for (c, outcome) in solved {
        let threshold_ratio = btr(c, sigmas, tau)?;
        match outcome {
            Ok(alloc) => {
                let len: f64 = alloc.nus.iter().zip(sigmas).map(|(&nu, &s)| bel(nu, c, s, tau)).sum();
                let brel = len / sidak_len;
                curve.push(CurvePoint {
                    c,
                    brel: Some(brel),
                    brel_vs_optimized: Some(len / classical_len),
                    btr: threshold_ratio,
                    error: None,
                });
                if best.as_ref().is_none_or(|(_, b, _)| brel < *b) {
                    best = Some((c, brel, alloc));
                }
            }
            Err(e) => {
                curve.push(CurvePoint {
                    c,
                    brel: None,
                    brel_vs_optimized: None,
                    btr: threshold_ratio,
                    error: Some(e.to_string()),
                });
                last_error = Some(e);
            }
        }
    }
    let (c_star, brel_at_cstar, allocation) =
        best.ok_or_else(|| last_error.unwrap_or_else(|| Error::Domain("empty threshold grid".into())))?;
    Ok(CStarResult { c_star, brel_at_cstar, allocation, curve, classical_rel: classical_len / sidak_len })
}

/// Largest attainable Σ log BCP at threshold `c` (all ν → ∞).
pub fn max_log_coverage(c: f64, sigmas: &[f64], tau: f64) -> f64 {
    sigmas.iter().map(|&s| CoverageKernel::new(c, s, tau).max_coverage().ln()).sum()
}

/// Outcome of [`search_c_star`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CStarSearch {
    pub c_star: f64,
    pub brel: f64,
    pub allocation: LevelAllocation,
    pub evaluations: usize,
}

/// C* by golden-section search on BREL over `[feasibility bound, hi]`.
///
/// Much cheaper than [`find_c_star`] and assumes the feasible part of the
/// BREL curve is unimodal. C = ∞ is returned when it beats the interior minimum.
pub fn search_c_star(sigmas: &[f64], tau: f64, q: f64, loss: &LengthLoss, hi: f64, tol: f64) -> Result<CStarSearch> {
    validate(0.0, sigmas, tau, q)?;
    if !(hi > 0.0 && hi.is_finite() && tol > 0.0) {
        return domain(format!("invalid search bound {hi} or tolerance {tol}"));
    }
    let log_target = (-q).ln_1p();
    let nu_s = sidak_nu(q, sigmas.len())?;
    let sidak_len: f64 = sigmas.iter().map(|&s| 2.0 * nu_s * s).sum();
    let mut evaluations = 0;
    let mut eval = |c: f64| -> Option<(f64, LevelAllocation)> {
        evaluations += 1;
        let alloc = optimize_levels(c, sigmas, tau, q, loss).ok()?;
        let len: f64 = alloc.nus.iter().zip(sigmas).map(|(&nu, &s)| bel(nu, c, s, tau)).sum();
        Some((len / sidak_len, alloc))
    };

    let (inf_brel, inf_alloc) = eval(f64::INFINITY).ok_or_else(|| Error::Domain("C = ∞ allocation failed".into()))?;
    let mut best = (f64::INFINITY, inf_brel, inf_alloc);

    // feasibility needs Σ log max BCP above the target, which grows with C
    let feasible = |c: f64| max_log_coverage(c, sigmas, tau) > log_target + 1e-9;
    let lo = if feasible(0.0) {
        0.0
    } else if !feasible(hi) {
        hi
    } else {
        let (mut a, mut b) = (0.0, hi);
        while b - a > 1e-3 {
            let mid = 0.5 * (a + b);
            if feasible(mid) {
                b = mid;
            } else {
                a = mid;
            }
        }
        b
    };
    if lo < hi {
        let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        let val = |f: &Option<(f64, LevelAllocation)>| f.as_ref().map_or(f64::INFINITY, |v| v.0);
        while b - a > tol {
            if val(&f1) <= val(&f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = eval(x2);
            }
        }
        for (c, f) in [(x1, f1), (x2, f2)] {
            if let Some((brel, alloc)) = f {
                if brel < best.1 {
                    best = (c, brel, alloc);
                }
            }
        }
    }
    let (c_star, brel, allocation) = best;
    Ok(CStarSearch { c_star, brel, allocation, evaluations })
}

/// Smallest C in `range` whose BFWCR at the common multiplier `nu` reaches
/// `target` within 1e-6, by bisection on the nondecreasing BFWCR(C).
pub fn match_bfwcr_c(sigmas: &[f64], nu: f64, tau: f64, target: f64, range: (f64, f64)) -> Result<f64> {
    const TOL: f64 = 1e-6;
    let (lo0, hi0) = range;
    if sigmas.is_empty() || !(tau > 0.0) || !(lo0 >= 0.0 && lo0 <= hi0) {
        return domain(format!("invalid search setup: M={}, tau={tau}, range=({lo0}, {hi0})", sigmas.len()));
    }
    let f = |c: f64| bfwcr_common(nu, c, sigmas, tau);
    let low_val = f(lo0);
    let high_val = f(hi0);
    if high_val < target - TOL {
        return Err(Error::NotBracketed { target, low: low_val, high: high_val });
    }
    if low_val >= target - TOL {
        return Ok(lo0);
    }
    let (mut lo, mut hi) = (lo0, if hi0.is_finite() { hi0 } else { finite_upper(&f, lo0, target - TOL) });
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target - TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn finite_upper(f: &impl Fn(f64) -> f64, start: f64, level: f64) -> f64 {
    let mut c = start.max(1.0);
    while f(c) < level {
        c *= 2.0;
    }
    c
}

/// [`match_bfwcr_c`] at Sidak levels.
pub fn match_bfwcr_c_sidak(sigmas: &[f64], tau: f64, q: f64, target: f64, range: (f64, f64)) -> Result<f64> {
    let nu = sidak_nu(q, sigmas.len())?;
    match_bfwcr_c(sigmas, nu, tau, target, range)
}
