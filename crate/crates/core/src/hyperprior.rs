//! Type-II maximum likelihood for the normal hyperprior.
//!
//! Marginally X̄_m ~ N(η, σ_m² + τ²). For fixed τ² the maximizing η is the
//! precision-weighted mean; for fixed η the score in τ² is
//!
//! ```text
//! S(τ²) = Σ (x_m − η)² / (σ_m² + τ²)² − Σ 1 / (σ_m² + τ²)
//! ```
//!
//! which is nonpositive at τ² = (max x − min x)², so a root is bracketed
//! whenever S(floor²) > 0.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::Prior;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ml2Options {
    pub tau_floor: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Ml2Options {
    fn default() -> Self {
        Self { tau_floor: 1e-8, tol: 1e-10, max_iter: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ml2Result {
    pub prior: Prior,
    pub iterations: usize,
    /// |Δη| + |Δτ| at the last alternation step
    pub residual: f64,
    /// τ̂ hit the floor: the data show no spread beyond the sampling noise.
    pub tau_floored: bool,
    pub log_likelihood: f64,
}

pub fn weighted_mean(xs: &[f64], sigmas: &[f64], tau2: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &s) in xs.iter().zip(sigmas) {
        let w = 1.0 / (s * s + tau2);
        num += w * x;
        den += w;
    }
    num / den
}

pub fn score_tau2(xs: &[f64], sigmas: &[f64], eta: f64, tau2: f64) -> f64 {
    xs.iter()
        .zip(sigmas)
        .map(|(&x, &s)| {
            let v = s * s + tau2;
            (x - eta).powi(2) / (v * v) - 1.0 / v
        })
        .sum()
}

/// Marginal log-likelihood, up to the constant −(M/2) log 2π.
pub fn marginal_log_likelihood(xs: &[f64], sigmas: &[f64], eta: f64, tau: f64) -> f64 {
    xs.iter()
        .zip(sigmas)
        .map(|(&x, &s)| {
            let v = s * s + tau * tau;
            -0.5 * (v.ln() + (x - eta).powi(2) / v)
        })
        .sum()
}

fn tau2_given_eta(xs: &[f64], sigmas: &[f64], eta: f64, floor2: f64, cap2: f64, tol: f64) -> f64 {
    if score_tau2(xs, sigmas, eta, floor2) <= 0.0 {
        return floor2;
    }
    let mut hi = cap2.max(floor2);
    while score_tau2(xs, sigmas, eta, hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = floor2;
    // bisection on log τ² keeps relative precision across scales
    let (mut a, mut b) = (lo.ln(), hi.ln());
    while b - a > tol * 1e-2 {
        let mid = 0.5 * (a + b);
        if score_tau2(xs, sigmas, eta, mid.exp()) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    lo = (0.5 * (a + b)).exp();
    lo
}

/// Alternating ML-II estimate of (η, τ).
pub fn ml2_estimate(xs: &[f64], sigmas: &[f64], opts: &Ml2Options) -> Result<Ml2Result> {
    if xs.len() != sigmas.len() {
        return domain(format!("{} estimates but {} standard errors", xs.len(), sigmas.len()));
    }
    if xs.len() < 2 {
        return domain("need at least two units to estimate the hyperprior");
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return domain("estimates must be finite");
    }
    if sigmas.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return domain("standard errors must be positive and finite");
    }
    if !(opts.tau_floor > 0.0) {
        return domain("tau floor must be positive");
    }
    let floor2 = opts.tau_floor * opts.tau_floor;
    let (min, max) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let cap2 = (max - min).powi(2).max(floor2);

    let mut tau2 = {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        let noise = sigmas.iter().map(|s| s * s).sum::<f64>() / sigmas.len() as f64;
        (var - noise).max(floor2)
    };
    let mut eta = weighted_mean(xs, sigmas, tau2);
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let next_tau2 = tau2_given_eta(xs, sigmas, eta, floor2, cap2, opts.tol);
        let next_eta = weighted_mean(xs, sigmas, next_tau2);
        residual = (next_eta - eta).abs() + (next_tau2.sqrt() - tau2.sqrt()).abs();
        eta = next_eta;
        tau2 = next_tau2;
        if residual <= opts.tol {
            let tau = tau2.sqrt();
            return Ok(Ml2Result {
                prior: Prior::new(eta, tau)?,
                iterations: it,
                residual,
                tau_floored: tau2 <= floor2 * (1.0 + 1e-9),
                log_likelihood: marginal_log_likelihood(xs, sigmas, eta, tau),
            });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual })
}
