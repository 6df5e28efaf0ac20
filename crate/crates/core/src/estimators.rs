//! Realized intervals for the competing multiple interval estimators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::measures::{sidak_alpha, sidak_nu, Prior, UnitSpec};
use crate::stats::{norm_quantile, t_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// The left tail was removed: `lower` is the point estimate.
    pub thresholded_left: bool,
    /// The right tail was removed: `upper` is the point estimate.
    pub thresholded_right: bool,
}

impl Interval {
    pub fn two_sided(center: f64, half_width: f64) -> Self {
        Self {
            lower: center - half_width,
            upper: center + half_width,
            thresholded_left: false,
            thresholded_right: false,
        }
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-endpoint membership.
    pub fn covers(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn is_one_sided(&self) -> bool {
        self.thresholded_left || self.thresholded_right
    }
}

/// The five estimators compared in the misspecification study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MieFamily {
    /// z-based intervals at Sidak levels
    G0,
    /// thresholded, fixed hyperparameters
    G1,
    /// thresholded, estimated hyperparameters
    G2,
    /// posterior credible intervals, fixed hyperparameters
    G3,
    /// posterior credible intervals, estimated hyperparameters
    G4,
}

impl MieFamily {
    pub const ALL: [MieFamily; 5] = [Self::G0, Self::G1, Self::G2, Self::G3, Self::G4];

    pub fn uses_estimated_prior(self) -> bool {
        matches!(self, Self::G2 | Self::G4)
    }

    pub fn is_thresholded(self) -> bool {
        matches!(self, Self::G1 | Self::G2)
    }
}

impl fmt::Display for MieFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        write!(f, "g{i}")
    }
}

impl FromStr for MieFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g0" | "gamma0" => Ok(Self::G0),
            "g1" | "gamma1" => Ok(Self::G1),
            "g2" | "gamma2" => Ok(Self::G2),
            "g3" | "gamma3" => Ok(Self::G3),
            "g4" | "gamma4" => Ok(Self::G4),
            other => domain(format!("unknown family '{other}', expected g0..g4")),
        }
    }
}

/// Thresholded interval around `center` with half-width `half_width`.
///
/// The lower tail is kept only when `center > η − Cτ` and the upper tail only
/// when `center < η + Cτ`.
pub fn thresholded(center: f64, half_width: f64, c: f64, prior: &Prior) -> Interval {
    let reach = c * prior.tau;
    let keep_left = center > prior.eta - reach;
    let keep_right = center < prior.eta + reach;
    Interval {
        lower: if keep_left { center - half_width } else { center },
        upper: if keep_right { center + half_width } else { center },
        thresholded_left: !keep_left,
        thresholded_right: !keep_right,
    }
}

pub fn bie_thres(xbar: f64, sigma: f64, nu: f64, c: f64, prior: &Prior) -> Interval {
    thresholded(xbar, nu * sigma, c, prior)
}

/// z interval with multiplier `nu`.
pub fn z_interval(xbar: f64, sigma: f64, nu: f64) -> Interval {
    Interval::two_sided(xbar, nu * sigma)
}

/// Posterior interval: center βx̄ + (1−β)η, half-width νσ√β with β = τ²/(σ²+τ²).
pub fn credible_interval(xbar: f64, sigma: f64, prior: &Prior, nu: f64) -> Interval {
    let t2 = prior.tau * prior.tau;
    let beta = t2 / (sigma * sigma + t2);
    Interval::two_sided(beta * xbar + (1.0 - beta) * prior.eta, nu * sigma * beta.sqrt())
}

/// Γ0 member at the Sidak level for M units.
pub fn z_mie(xbar: f64, sigma: f64, q: f64, m: usize) -> Result<Interval> {
    Ok(z_interval(xbar, sigma, sidak_nu(q, m)?))
}

/// Γ3 member at the Sidak level for M units.
pub fn credible_mie(xbar: f64, sigma: f64, prior: &Prior, q: f64, m: usize) -> Result<Interval> {
    Ok(credible_interval(xbar, sigma, prior, sidak_nu(q, m)?))
}

/// Variance-stabilized binomial unit: x = asin √((H + ¼)/(N + ½)), σ² = 1/(4N).
pub fn arcsine_unit(hits: u64, at_bats: u64) -> Result<UnitSpec> {
    if at_bats == 0 {
        return domain("at-bats must be at least 1");
    }
    if hits > at_bats {
        return domain(format!("hits {hits} exceed at-bats {at_bats}"));
    }
    let p = (hits as f64 + 0.25) / (at_bats as f64 + 0.5);
    UnitSpec::new(0.5 / (at_bats as f64).sqrt(), Some(p.sqrt().asin()))
}

/// Which entries share a ranking in [`normal_scores`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RankScope {
    /// All entries of the matrix ranked together.
    #[default]
    Matrix,
    /// Each row ranked separately.
    Row,
}

impl FromStr for RankScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "matrix" => Ok(Self::Matrix),
            "row" => Ok(Self::Row),
            other => domain(format!("unknown rank scope '{other}', expected matrix or row")),
        }
    }
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

fn scores_of(values: &[f64]) -> Result<Vec<f64>> {
    let n = values.len() as f64;
    average_ranks(values).into_iter().map(|r| norm_quantile((r - 0.5) / n)).collect()
}

/// x ↦ Φ⁻¹((rank(x) − ½)/n) where n is the number of entries ranked together.
pub fn normal_scores(rows: &[Vec<f64>], scope: RankScope) -> Result<Vec<Vec<f64>>> {
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return domain("normal scores need finite entries");
    }
    match scope {
        RankScope::Row => rows.iter().map(|r| scores_of(r)).collect(),
        RankScope::Matrix => {
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            let mut scores = scores_of(&flat)?.into_iter();
            Ok(rows.iter().map(|r| scores.by_ref().take(r.len()).collect()).collect())
        }
    }
}

/// Pooled two-sample t interval with thresholding on the mean difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TThres {
    pub interval: Interval,
    pub center: f64,
    /// S^p √(1/n¹ + 1/n²)
    pub std_error: f64,
    pub df: f64,
    /// Zero pooled variance: the interval collapses to the center.
    pub degenerate: bool,
}

/// Center x̄¹ − x̄², std error S^p√(1/n¹+1/n²) and degrees of freedom.
pub fn pooled_difference(group1: &[f64], group2: &[f64]) -> Result<(f64, f64, f64)> {
    let (n1, n2) = (group1.len(), group2.len());
    if n1 == 0 || n2 == 0 || n1 + n2 < 3 {
        return domain(format!("two-sample interval needs n1, n2 >= 1 and n1 + n2 >= 3, got ({n1}, {n2})"));
    }
    let mean = |g: &[f64]| g.iter().sum::<f64>() / g.len() as f64;
    let (m1, m2) = (mean(group1), mean(group2));
    let ss: f64 =
        group1.iter().map(|x| (x - m1).powi(2)).sum::<f64>() + group2.iter().map(|x| (x - m2).powi(2)).sum::<f64>();
    let df = (n1 + n2 - 2) as f64;
    let sp = (ss / df).sqrt();
    Ok((m1 - m2, sp * (1.0 / n1 as f64 + 1.0 / n2 as f64).sqrt(), df))
}

pub fn t_thres(group1: &[f64], group2: &[f64], alpha_s: f64, c: f64, prior: &Prior) -> Result<TThres> {
    if !(alpha_s > 0.0 && alpha_s < 1.0) {
        return domain(format!("level must lie in (0,1), got {alpha_s}"));
    }
    let (center, std_error, df) = pooled_difference(group1, group2)?;
    let t = t_quantile(1.0 - alpha_s / 2.0, df)?;
    Ok(TThres {
        interval: thresholded(center, t * std_error, c, prior),
        center,
        std_error,
        df,
        degenerate: std_error == 0.0,
    })
}

/// [`t_thres`] at the Sidak level for M units.
pub fn t_thres_sidak(group1: &[f64], group2: &[f64], q: f64, m: usize, c: f64, prior: &Prior) -> Result<TThres> {
    t_thres(group1, group2, sidak_alpha(q, m), c, prior)
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return domain(format!("{a} intervals but {b} reference values"));
    }
    if a == 0 {
        return domain("no intervals");
    }
    Ok(())
}

/// Share of intervals covering their truth.
pub fn coverage_ratio(intervals: &[Interval], truths: &[f64]) -> Result<f64> {
    check_lengths(intervals.len(), truths.len())?;
    let hits = intervals.iter().zip(truths).filter(|(i, &t)| i.covers(t)).count();
    Ok(hits as f64 / intervals.len() as f64)
}

/// Whether every interval covers its truth.
pub fn all_covered(intervals: &[Interval], truths: &[f64]) -> Result<bool> {
    check_lengths(intervals.len(), truths.len())?;
    Ok(intervals.iter().zip(truths).all(|(i, &t)| i.covers(t)))
}

/// Σ length / Σ 2·reference half-width.
pub fn relative_content(intervals: &[Interval], reference_half_widths: &[f64]) -> Result<f64> {
    check_lengths(intervals.len(), reference_half_widths.len())?;
    let num: f64 = intervals.iter().map(Interval::length).sum();
    let den: f64 = reference_half_widths.iter().map(|h| 2.0 * h).sum();
    Ok(num / den)
}
