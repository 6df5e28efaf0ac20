//! Monte-Carlo study of the estimators under prior misspecification.
//!
//! Each replication draws σ_m ~ U(σ_lo, σ_hi), μ_m from the true law and
//! X̄_m ~ N(μ_m, σ_m²), estimates the hyperprior, searches C* at τ̂ and
//! evaluates every requested family for every prior in the grid. Replication k
//! draws from its own ChaCha stream keyed by (seed, k), so results do not
//! depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::{
    all_covered, bie_thres, coverage_ratio, credible_interval, relative_content, z_interval, Interval, MieFamily,
};
use crate::hyperprior::{ml2_estimate, Ml2Options};
use crate::measures::{sidak_nu, Prior};
use crate::optimizer::{search_c_star, LengthLoss};

/// Law generating the true means, parametrized by its mean and sd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrueDist {
    Normal,
    /// U(η* − √3τ*, η* + √3τ*)
    Uniform,
    /// location η*, scale τ*√3/π
    Logistic,
    /// η* − τ* + Exp(rate 1/τ*)
    Exponential,
}

impl fmt::Display for TrueDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Normal => "normal",
            Self::Uniform => "uniform",
            Self::Logistic => "logistic",
            Self::Exponential => "exponential",
        };
        f.write_str(s)
    }
}

impl FromStr for TrueDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" => Ok(Self::Normal),
            "uniform" => Ok(Self::Uniform),
            "logistic" => Ok(Self::Logistic),
            "exponential" => Ok(Self::Exponential),
            other => domain(format!("unknown distribution '{other}'")),
        }
    }
}

pub fn sample_mu<R: Rng + ?Sized>(
    dist: TrueDist,
    eta_star: f64,
    tau_star: f64,
    m: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(tau_star > 0.0 && tau_star.is_finite()) || !eta_star.is_finite() {
        return domain(format!("true law needs finite mean and sd > 0, got ({eta_star}, {tau_star})"));
    }
    let draws = match dist {
        TrueDist::Normal => (0..m).map(|_| eta_star + tau_star * rng.sample::<f64, _>(StandardNormal)).collect(),
        TrueDist::Uniform => {
            let half = 3.0_f64.sqrt() * tau_star;
            (0..m).map(|_| rng.gen_range(eta_star - half..eta_star + half)).collect()
        }
        TrueDist::Logistic => {
            let scale = tau_star * 3.0_f64.sqrt() / std::f64::consts::PI;
            (0..m)
                .map(|_| {
                    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
                    eta_star + scale * (u / (1.0 - u)).ln()
                })
                .collect()
        }
        TrueDist::Exponential => {
            let exp = Exp::new(1.0 / tau_star).map_err(|e| Error::Domain(e.to_string()))?;
            (0..m).map(|_| eta_star - tau_star + exp.sample(rng)).collect()
        }
    };
    Ok(draws)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub m: usize,
    pub n_rep: usize,
    pub q: f64,
    /// σ_m ~ U(lo, hi)
    pub sigma_range: (f64, f64),
    /// Draw σ once and reuse it in every replication.
    pub fix_sigmas: bool,
    pub true_dist: TrueDist,
    pub eta_star: f64,
    pub tau_star: f64,
    /// (η, τ) pairs used by the fixed-prior families
    pub prior_grid: Vec<(f64, f64)>,
    pub families: Vec<MieFamily>,
    pub seed: u64,
    pub loss: LengthLoss,
    /// Upper end and tolerance of the per-replication C* search.
    pub c_max: f64,
    pub c_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        let prior_grid = [1.0, 2.0, 3.0].iter().flat_map(|&tau| [0.0, 2.0, 4.0, 6.0].map(|eta| (eta, tau))).collect();
        Self {
            m: 1000,
            n_rep: 1000,
            q: 0.1,
            sigma_range: (0.01, 10.0),
            fix_sigmas: false,
            true_dist: TrueDist::Normal,
            eta_star: 0.0,
            tau_star: 2.0,
            prior_grid,
            families: MieFamily::ALL.to_vec(),
            seed: 0,
            loss: LengthLoss::default(),
            c_max: 6.0,
            c_tol: 0.01,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n_rep == 0 {
            return domain("M and n_rep must be at least 1");
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return domain(format!("q must lie in (0,1), got {}", self.q));
        }
        let (lo, hi) = self.sigma_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return domain(format!("invalid sigma range ({lo}, {hi})"));
        }
        if self.prior_grid.is_empty() || self.families.is_empty() {
            return domain("prior grid and family list must be nonempty");
        }
        for &(eta, tau) in &self.prior_grid {
            Prior::new(eta, tau)?;
        }
        if !(self.tau_star > 0.0) {
            return domain("tau* must be positive");
        }
        Ok(())
    }

    fn needs_threshold(&self) -> bool {
        self.families.iter().any(|f| f.is_thresholded())
    }

    fn needs_estimate(&self) -> bool {
        self.families.iter().any(|f| f.is_thresholded() || f.uses_estimated_prior())
    }
}

/// Aggregated result for one family and prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCell {
    pub family: MieFamily,
    pub eta: f64,
    pub tau: f64,
    /// Share of replications in which every interval covered its mean.
    pub familywise_coverage: f64,
    pub familywise_coverage_se: f64,
    /// Share of intervals covering their mean, averaged over replications.
    pub interval_coverage: f64,
    pub interval_coverage_se: f64,
    /// Total length relative to the z-based family.
    pub content: f64,
    pub content_se: f64,
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutput {
    pub cells: Vec<SimCell>,
    /// (replication, reason) for replications excluded from the averages.
    pub failures: Vec<(usize, String)>,
}

/// One replication's (family-wise, per-interval, content) per cell.
type RepMetrics = Vec<[f64; 3]>;

fn replication_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_sigmas<R: Rng>(cfg: &SimConfig, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = cfg.sigma_range;
    (0..cfg.m).map(|_| if lo == hi { lo } else { rng.gen_range(lo..hi) }).collect()
}

fn run_replication(cfg: &SimConfig, k: usize, fixed_sigmas: Option<&[f64]>, nu_s: f64) -> Result<RepMetrics> {
    let mut rng = replication_rng(cfg.seed, k as u64);
    let sigmas = match fixed_sigmas {
        Some(s) => s.to_vec(),
        None => draw_sigmas(cfg, &mut rng),
    };
    let mus = sample_mu(cfg.true_dist, cfg.eta_star, cfg.tau_star, cfg.m, &mut rng)?;
    let xs: Vec<f64> = mus.iter().zip(&sigmas).map(|(&mu, &s)| mu + s * rng.sample::<f64, _>(StandardNormal)).collect();

    let estimate =
        if cfg.needs_estimate() { Some(ml2_estimate(&xs, &sigmas, &Ml2Options::default())?.prior) } else { None };
    let threshold = match (cfg.needs_threshold(), estimate) {
        (true, Some(p)) => Some(search_c_star(&sigmas, p.tau, cfg.q, &cfg.loss, cfg.c_max, cfg.c_tol)?),
        _ => None,
    };

    let reference: Vec<f64> = sigmas.iter().map(|s| nu_s * s).collect();
    let mut out = Vec::with_capacity(cfg.prior_grid.len() * cfg.families.len());
    let mut intervals: Vec<Interval> = Vec::with_capacity(cfg.m);
    for &(eta, tau) in &cfg.prior_grid {
        let fixed = Prior { eta, tau };
        for &family in &cfg.families {
            intervals.clear();
            let prior = if family.uses_estimated_prior() { estimate.expect("estimate computed") } else { fixed };
            match family {
                MieFamily::G0 => intervals.extend(xs.iter().zip(&sigmas).map(|(&x, &s)| z_interval(x, s, nu_s))),
                MieFamily::G1 | MieFamily::G2 => {
                    let t = threshold.as_ref().expect("threshold computed");
                    intervals.extend(
                        xs.iter()
                            .zip(&sigmas)
                            .zip(&t.allocation.nus)
                            .map(|((&x, &s), &nu)| bie_thres(x, s, nu, t.c_star, &prior)),
                    );
                }
                MieFamily::G3 | MieFamily::G4 => {
                    intervals.extend(xs.iter().zip(&sigmas).map(|(&x, &s)| credible_interval(x, s, &prior, nu_s)))
                }
            }
            let fw = if all_covered(&intervals, &mus)? { 1.0 } else { 0.0 };
            out.push([fw, coverage_ratio(&intervals, &mus)?, relative_content(&intervals, &reference)?]);
        }
    }
    Ok(out)
}

fn mean_se(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = sum / nf;
    let se = if n > 1 { ((sum_sq - nf * mean * mean).max(0.0) / (nf - 1.0) / nf).sqrt() } else { f64::NAN };
    (mean, se)
}

/// Run every replication and aggregate per (prior, family) cell.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimOutput> {
    cfg.validate()?;
    let nu_s = sidak_nu(cfg.q, cfg.m)?;
    let fixed = cfg.fix_sigmas.then(|| draw_sigmas(cfg, &mut replication_rng(cfg.seed, u64::MAX)));

    let reps: Vec<Result<RepMetrics>> =
        (0..cfg.n_rep).into_par_iter().map(|k| run_replication(cfg, k, fixed.as_deref(), nu_s)).collect();

    let n_cells = cfg.prior_grid.len() * cfg.families.len();
    let mut sums = vec![[0.0_f64; 6]; n_cells];
    let mut ok = 0;
    let mut failures = Vec::new();
    for (k, rep) in reps.into_iter().enumerate() {
        match rep {
            Ok(metrics) => {
                ok += 1;
                for (acc, m) in sums.iter_mut().zip(&metrics) {
                    for j in 0..3 {
                        acc[2 * j] += m[j];
                        acc[2 * j + 1] += m[j] * m[j];
                    }
                }
            }
            Err(e) => failures.push((k, e.to_string())),
        }
    }

    let mut cells = Vec::with_capacity(n_cells);
    let mut idx = 0;
    for &(eta, tau) in &cfg.prior_grid {
        for &family in &cfg.families {
            let s = &sums[idx];
            idx += 1;
            let (fw, fw_se) = mean_se(s[0], s[1], ok);
            let (ic, ic_se) = mean_se(s[2], s[3], ok);
            let (ct, ct_se) = mean_se(s[4], s[5], ok);
            cells.push(SimCell {
                family,
                eta,
                tau,
                familywise_coverage: fw,
                familywise_coverage_se: fw_se,
                interval_coverage: ic,
                interval_coverage_se: ic_se,
                content: ct,
                content_se: ct_se,
                replications: ok,
            });
        }
    }
    Ok(SimOutput { cells, failures })
}

/// One table row: a τ block and family, with one entry per η column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub tau: f64,
    pub family: MieFamily,
    pub coverage: Vec<Option<f64>>,
    pub content: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SummaryTable {
    pub etas: Vec<f64>,
    pub rows: Vec<SummaryRow>,
}

fn push_unique(v: &mut Vec<f64>, x: f64) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Arrange cells as τ blocks × families with η columns (family-wise coverage).
pub fn summarize(cells: &[SimCell]) -> SummaryTable {
    let mut etas = Vec::new();
    let mut taus = Vec::new();
    let mut families = Vec::new();
    for c in cells {
        push_unique(&mut etas, c.eta);
        push_unique(&mut taus, c.tau);
        if !families.contains(&c.family) {
            families.push(c.family);
        }
    }
    etas.sort_by(f64::total_cmp);
    taus.sort_by(f64::total_cmp);
    families.sort();
    let mut rows = Vec::new();
    for &tau in &taus {
        for &family in &families {
            let block: Vec<&SimCell> = cells.iter().filter(|c| c.tau == tau && c.family == family).collect();
            if block.is_empty() {
                continue;
            }
            let pick = |eta: f64, f: fn(&SimCell) -> f64| block.iter().find(|c| c.eta == eta).map(|c| f(c));
            rows.push(SummaryRow {
                tau,
                family,
                coverage: etas.iter().map(|&e| pick(e, |c| c.familywise_coverage)).collect(),
                content: etas.iter().map(|&e| pick(e, |c| c.content)).collect(),
            });
        }
    }
    SummaryTable { etas, rows }
}
