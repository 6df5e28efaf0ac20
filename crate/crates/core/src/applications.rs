//! End-to-end pipelines for the batting and gene-expression applications.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::estimators::{
    all_covered, bie_thres, coverage_ratio, normal_scores, pooled_difference, thresholded, z_interval, Interval,
    RankScope,
};
use crate::hyperprior::{ml2_estimate, Ml2Options};
use crate::ingest::{ExpressionMatrix, PeriodData};
use crate::measures::{bel, bfwcr_common, btr, log_bfwcr, sidak_alpha, sidak_nu};
use crate::optimizer::{find_c_star, match_bfwcr_c, LengthLoss};
use crate::stats::t_quantile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitInterval {
    pub label: String,
    pub estimate: f64,
    pub sigma: f64,
    pub nu: f64,
    pub interval: Interval,
    /// The value the interval is scored against.
    pub reference: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BattingReport {
    pub period: u32,
    pub m: usize,
    pub eta_hat: f64,
    pub tau_hat: f64,
    pub tau_floored: bool,
    pub c_star: f64,
    /// BFWCR under the fitted prior at C* and the optimized levels.
    pub model_bfwcr: f64,
    /// Expected total length relative to Sidak z intervals.
    pub brel: f64,
    /// Expected share of one-sided intervals.
    pub btr: f64,
    /// Share of realized intervals that are one-sided.
    pub realized_one_sided: f64,
    /// Realized total length relative to the Sidak z intervals.
    pub realized_relative_length: f64,
    pub interval_coverage: f64,
    pub all_covered: bool,
    pub z_interval_coverage: f64,
    pub z_all_covered: bool,
    pub intervals: Vec<UnitInterval>,
}

fn one_sided_share(intervals: &[Interval]) -> f64 {
    intervals.iter().filter(|i| i.is_one_sided()).count() as f64 / intervals.len() as f64
}

pub fn batting_report(data: &PeriodData, q: f64, loss: &LengthLoss, c_grid: &[f64]) -> Result<BattingReport> {
    if data.len() < 2 {
        return domain(format!("period {} keeps only {} players", data.period, data.len()));
    }
    let xs = data.xs();
    let sigmas = data.sigmas();
    let fit = ml2_estimate(&xs, &sigmas, &Ml2Options::default())?;
    let prior = fit.prior;
    let search = find_c_star(&sigmas, prior.tau, q, loss, c_grid)?;
    let c = search.c_star;
    let nus = &search.allocation.nus;
    let nu_s = sidak_nu(q, xs.len())?;

    let thres: Vec<Interval> =
        xs.iter().zip(&sigmas).zip(nus).map(|((&x, &s), &nu)| bie_thres(x, s, nu, c, &prior)).collect();
    let zs: Vec<Interval> = xs.iter().zip(&sigmas).map(|(&x, &s)| z_interval(x, s, nu_s)).collect();
    let z_len: f64 = zs.iter().map(Interval::length).sum();

    let intervals = data
        .player_ids
        .iter()
        .zip(&thres)
        .enumerate()
        .map(|(i, (id, iv))| UnitInterval {
            label: id.clone(),
            estimate: xs[i],
            sigma: sigmas[i],
            nu: nus[i],
            interval: *iv,
            reference: data.truths[i],
            covered: iv.covers(data.truths[i]),
        })
        .collect();

    Ok(BattingReport {
        period: data.period,
        m: xs.len(),
        eta_hat: prior.eta,
        tau_hat: prior.tau,
        tau_floored: fit.tau_floored,
        c_star: c,
        model_bfwcr: log_bfwcr(nus, c, &sigmas, prior.tau).exp(),
        brel: search.brel_at_cstar,
        btr: btr(c, &sigmas, prior.tau)?,
        realized_one_sided: one_sided_share(&thres),
        realized_relative_length: thres.iter().map(Interval::length).sum::<f64>() / z_len,
        interval_coverage: coverage_ratio(&thres, &data.truths)?,
        all_covered: all_covered(&thres, &data.truths)?,
        z_interval_coverage: coverage_ratio(&zs, &data.truths)?,
        z_all_covered: all_covered(&zs, &data.truths)?,
        intervals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenesReport {
    pub m: usize,
    pub group_sizes: (usize, usize),
    pub df: f64,
    pub rank_scope: RankScope,
    pub eta_hat: f64,
    pub tau_hat: f64,
    pub tau_floored: bool,
    /// Common multiplier: the t quantile at the Sidak level.
    pub nu: f64,
    /// BFWCR of the classical t intervals (C = ∞), the matching target.
    pub classical_bfwcr: f64,
    pub c_star: f64,
    pub bfwcr: f64,
    pub brel: f64,
    pub btr: f64,
    pub realized_one_sided: f64,
    pub realized_relative_length: f64,
    /// Share of intervals containing zero.
    pub zero_coverage: f64,
    pub intervals: Vec<UnitInterval>,
}

pub fn genes_report(matrix: &ExpressionMatrix, q: f64, scope: RankScope) -> Result<GenesReport> {
    let (n1, n2) = matrix.group_sizes();
    let m = matrix.values.len();
    if m < 2 {
        return domain("need at least two genes");
    }
    let scores = normal_scores(&matrix.values, scope)?;
    let mut centers = Vec::with_capacity(m);
    let mut sigmas = Vec::with_capacity(m);
    let mut df = 0.0;
    for (gene, row) in matrix.genes.iter().zip(&scores) {
        let (center, se, d) = pooled_difference(&row[..n1], &row[n1..])?;
        if !(se > 0.0) {
            return domain(format!("gene '{gene}' has zero pooled variance"));
        }
        centers.push(center);
        sigmas.push(se);
        df = d;
    }
    let fit = ml2_estimate(&centers, &sigmas, &Ml2Options::default())?;
    let prior = fit.prior;
    let nu = t_quantile(1.0 - sidak_alpha(q, m) / 2.0, df)?;
    let classical_bfwcr = bfwcr_common(nu, f64::INFINITY, &sigmas, prior.tau);
    let c = match_bfwcr_c(&sigmas, nu, prior.tau, classical_bfwcr, (0.0, f64::INFINITY))?;

    let thres: Vec<Interval> = centers.iter().zip(&sigmas).map(|(&x, &s)| thresholded(x, nu * s, c, &prior)).collect();
    let expected: f64 = sigmas.iter().map(|&s| bel(nu, c, s, prior.tau)).sum();
    let classical_len: f64 = sigmas.iter().map(|&s| 2.0 * nu * s).sum();
    let zeros = vec![0.0; m];

    let intervals = matrix
        .genes
        .iter()
        .zip(&thres)
        .enumerate()
        .map(|(i, (g, iv))| UnitInterval {
            label: g.clone(),
            estimate: centers[i],
            sigma: sigmas[i],
            nu,
            interval: *iv,
            reference: 0.0,
            covered: iv.covers(0.0),
        })
        .collect();

    Ok(GenesReport {
        m,
        group_sizes: (n1, n2),
        df,
        rank_scope: scope,
        eta_hat: prior.eta,
        tau_hat: prior.tau,
        tau_floored: fit.tau_floored,
        nu,
        classical_bfwcr,
        c_star: c,
        bfwcr: bfwcr_common(nu, c, &sigmas, prior.tau),
        brel: expected / classical_len,
        btr: btr(c, &sigmas, prior.tau)?,
        realized_one_sided: one_sided_share(&thres),
        realized_relative_length: thres.iter().map(Interval::length).sum::<f64>() / classical_len,
        zero_coverage: coverage_ratio(&thres, &zeros)?,
        intervals,
    })
}
