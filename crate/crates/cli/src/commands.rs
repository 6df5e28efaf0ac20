use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use bmie_core::applications::{batting_report, genes_report};
use bmie_core::estimators::MieFamily;
use bmie_core::ingest::{load_batting, load_expression, select_period};
use bmie_core::measures::{global_measures, sidak_nu};
use bmie_core::optimizer::find_c_star;
use bmie_core::simulation::{run_simulation, summarize, SimConfig, TrueDist};
use bmie_core::{LengthLoss, RankScope};

use crate::output::{num, opt, OutputDir, Row, RunManifest, TableFormat};
use crate::spec::{parse_grid, parse_list, SigmaSpec};
use crate::UsageError;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON file with configuration values; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
}

pub const DEFAULT_OUT: &str = "bmie-out";

impl CommonArgs {
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    fn base<C: DeserializeOwned + Default>(&self) -> Result<C> {
        match &self.config {
            None => Ok(C::default()),
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())).into())
            }
        }
    }
}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| UsageError(format!("{e:#}")).into())
}

macro_rules! overlay {
    ($cfg:ident, $args:ident, $($field:ident),+) => {
        $(if let Some(v) = $args.$field.clone() { $cfg.$field = v; })+
    };
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(UsageError(format!("--q must lie in (0,1), got {q}")).into());
    }
    Ok(())
}

fn positive_list(name: &str, spec: &str) -> Result<Vec<f64>> {
    let v = usage(parse_list(spec))?;
    if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(UsageError(format!("--{name} values must be positive and finite")).into());
    }
    Ok(v)
}

fn sorted_grid(spec: &str) -> Result<Vec<f64>> {
    let mut g = usage(parse_grid(spec))?;
    if g.iter().any(|c| *c < 0.0) {
        return Err(UsageError("threshold grid values must be nonnegative".into()).into());
    }
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

fn fixed_sigmas(spec: &str, m: usize) -> Result<Vec<f64>> {
    let s = usage(SigmaSpec::parse(spec))?;
    let v = usage(s.resolve(m))?;
    if v.is_empty() {
        return Err(UsageError("--M must be at least 1".into()).into());
    }
    Ok(v)
}

// ---------------------------------------------------------------- curves

#[derive(Args, Debug, Clone, Default)]
pub struct CurvesArgs {
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Prior standard deviations, comma separated
    #[arg(long)]
    pub tau: Option<String>,
    /// e.g. 0:6:0.05,inf
    #[arg(long = "C-grid")]
    pub c_grid: Option<String>,
    /// equi:LO:HI or a comma list
    #[arg(long = "sigma-spec")]
    pub sigma_spec: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvesConfig {
    pub m: usize,
    pub q: f64,
    pub tau: String,
    pub c_grid: String,
    pub sigma_spec: String,
}

impl Default for CurvesConfig {
    fn default() -> Self {
        Self { m: 1000, q: 0.1, tau: "2,3,5".into(), c_grid: "0:6:0.05".into(), sigma_spec: "equi:0.01:10".into() }
    }
}

impl CurvesArgs {
    pub fn resolve(&self) -> Result<CurvesConfig> {
        let mut cfg: CurvesConfig = self.common.base()?;
        let args = self;
        overlay!(cfg, args, m, q, tau, c_grid, sigma_spec);
        Ok(cfg)
    }
}

pub fn run_curves(cfg: &CurvesConfig, out: &OutputDir) -> Result<()> {
    check_q(cfg.q)?;
    let sigmas = fixed_sigmas(&cfg.sigma_spec, cfg.m)?;
    let taus = positive_list("tau", &cfg.tau)?;
    let grid = sorted_grid(&cfg.c_grid)?;
    let nus = vec![sidak_nu(cfg.q, sigmas.len())?; sigmas.len()];
    let mut rows: Vec<Row> = Vec::new();
    for &tau in &taus {
        for &c in &grid {
            let g = global_measures(&nus, c, &sigmas, tau, cfg.q)?;
            rows.push(vec![num(tau), num(c), num(g.brel), num(g.bfwcr), num(g.btr)]);
        }
    }
    out.table("curves", &["tau", "c", "brel", "bfwcr", "btr"], &rows)?;
    Ok(())
}

// ---------------------------------------------------------------- optimize

#[derive(Args, Debug, Clone, Default)]
pub struct OptimizeArgs {
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub tau: Option<String>,
    /// Loss parameters, comma separated
    #[arg(long)]
    pub beta: Option<String>,
    /// Expected lengths are divided by this before the loss is applied
    #[arg(long = "length-divisor")]
    pub length_divisor: Option<f64>,
    #[arg(long = "C-grid")]
    pub c_grid: Option<String>,
    #[arg(long = "sigma-spec")]
    pub sigma_spec: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    pub m: usize,
    pub q: f64,
    pub tau: String,
    pub beta: String,
    pub length_divisor: f64,
    pub c_grid: String,
    pub sigma_spec: String,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            m: 1000,
            q: 0.1,
            tau: "2,3,5".into(),
            beta: "1000".into(),
            length_divisor: 1.0,
            c_grid: "0:6:0.05,inf".into(),
            sigma_spec: "equi:0.01:10".into(),
        }
    }
}

impl OptimizeArgs {
    pub fn resolve(&self) -> Result<OptimizeConfig> {
        let mut cfg: OptimizeConfig = self.common.base()?;
        let args = self;
        overlay!(cfg, args, m, q, tau, beta, length_divisor, c_grid, sigma_spec);
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct OptimizeRecord {
    tau: f64,
    beta: f64,
    result: bmie_core::CStarResult,
}

pub fn run_optimize(cfg: &OptimizeConfig, out: &OutputDir) -> Result<()> {
    check_q(cfg.q)?;
    let sigmas = fixed_sigmas(&cfg.sigma_spec, cfg.m)?;
    let taus = positive_list("tau", &cfg.tau)?;
    let betas = positive_list("beta", &cfg.beta)?;
    if !(cfg.length_divisor > 0.0 && cfg.length_divisor.is_finite()) {
        return Err(UsageError("--length-divisor must be positive".into()).into());
    }
    let grid = sorted_grid(&cfg.c_grid)?;

    let (mut curve, mut best, mut alloc) = (Vec::new(), Vec::new(), Vec::new());
    let mut records = Vec::new();
    for &tau in &taus {
        for &beta in &betas {
            let loss = LengthLoss::new(beta).with_length_divisor(cfg.length_divisor);
            let r = find_c_star(&sigmas, tau, cfg.q, &loss, &grid)?;
            for p in &r.curve {
                curve.push(vec![
                    num(tau),
                    num(beta),
                    num(p.c),
                    opt(p.brel),
                    opt(p.brel_vs_optimized),
                    num(p.btr),
                    p.error.clone().unwrap_or_else(|| "ok".into()),
                ]);
            }
            best.push(vec![num(tau), num(beta), num(r.c_star), num(r.brel_at_cstar), num(r.classical_rel)]);
            for (i, ((&nu, &a), &s)) in r.allocation.nus.iter().zip(&r.allocation.alphas).zip(&sigmas).enumerate() {
                alloc.push(vec![num(tau), num(beta), (i + 1).to_string(), num(s), num(nu), num(a)]);
            }
            records.push(OptimizeRecord { tau, beta, result: r });
        }
    }
    out.table("curve", &["tau", "beta", "c", "brel", "brel_vs_optimized", "btr", "status"], &curve)?;
    out.table("cstar", &["tau", "beta", "c_star", "brel", "classical_rel"], &best)?;
    out.table("allocation", &["tau", "beta", "unit", "sigma", "nu", "alpha"], &alloc)?;
    out.json("optimize", &records)?;
    Ok(())
}

// ---------------------------------------------------------------- batting

#[derive(Args, Debug, Clone, Default)]
pub struct BattingArgs {
    /// Delimited file with columns player_id,month,hits,at_bats[,is_pitcher]
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Prediction periods (1, 2 or 3), comma separated
    #[arg(long)]
    pub period: Option<String>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long = "C-grid")]
    pub c_grid: Option<String>,
    /// Field delimiter; sniffed from the header when absent
    #[arg(long)]
    pub delimiter: Option<char>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BattingConfig {
    pub input: Option<PathBuf>,
    pub period: String,
    pub q: f64,
    pub beta: f64,
    pub c_grid: String,
    pub delimiter: Option<char>,
}

impl Default for BattingConfig {
    fn default() -> Self {
        Self {
            input: None,
            period: "1,2,3".into(),
            q: 0.1,
            beta: 1000.0,
            c_grid: "0:6:0.05,inf".into(),
            delimiter: None,
        }
    }
}

impl BattingArgs {
    pub fn resolve(&self) -> Result<BattingConfig> {
        let mut cfg: BattingConfig = self.common.base()?;
        let args = self;
        overlay!(cfg, args, period, q, beta, c_grid);
        if self.input.is_some() {
            cfg.input = self.input.clone();
        }
        if self.delimiter.is_some() {
            cfg.delimiter = self.delimiter;
        }
        Ok(cfg)
    }
}

fn require_input(input: &Option<PathBuf>) -> Result<&Path> {
    input.as_deref().ok_or_else(|| UsageError("--input is required".into()).into())
}

fn delimiter_byte(d: Option<char>) -> Result<Option<u8>> {
    match d {
        None => Ok(None),
        Some(c) if c.is_ascii() => Ok(Some(c as u8)),
        Some(c) => Err(UsageError(format!("delimiter '{c}' must be ASCII")).into()),
    }
}

pub fn run_batting(cfg: &BattingConfig, out: &OutputDir) -> Result<()> {
    check_q(cfg.q)?;
    let input = require_input(&cfg.input)?;
    let periods: Vec<u32> = usage(parse_list(&cfg.period))?
        .into_iter()
        .map(|p| if [1.0, 2.0, 3.0].contains(&p) { Ok(p as u32) } else { Err(UsageError(format!("bad period {p}"))) })
        .collect::<std::result::Result<_, _>>()?;
    let grid = sorted_grid(&cfg.c_grid)?;
    let load =
        load_batting(input, delimiter_byte(cfg.delimiter)?).with_context(|| format!("reading {}", input.display()))?;
    for w in &load.warnings {
        eprintln!("warning: {w}");
    }
    for (line, msg) in &load.row_errors {
        eprintln!("warning: line {line}: {msg}");
    }
    let loss = LengthLoss::new(cfg.beta);
    let (mut summary, mut units, mut reports) = (Vec::new(), Vec::new(), Vec::new());
    for j in periods {
        let data = select_period(&load.records, j)?;
        let r = batting_report(&data, cfg.q, &loss, &grid)?;
        summary.push(vec![
            j.to_string(),
            r.m.to_string(),
            num(r.eta_hat),
            num(r.tau_hat),
            num(r.c_star),
            num(r.model_bfwcr),
            num(r.brel),
            num(r.btr),
            num(r.realized_one_sided),
            num(r.realized_relative_length),
            num(r.interval_coverage),
            u8::from(r.all_covered).to_string(),
            num(r.z_interval_coverage),
            u8::from(r.z_all_covered).to_string(),
        ]);
        for u in &r.intervals {
            units.push(vec![
                j.to_string(),
                u.label.clone(),
                num(u.estimate),
                num(u.sigma),
                num(u.nu),
                num(u.interval.lower),
                num(u.interval.upper),
                u8::from(u.interval.is_one_sided()).to_string(),
                num(u.reference),
                u8::from(u.covered).to_string(),
            ]);
        }
        reports.push(r);
    }
    out.table(
        "batting_summary",
        &[
            "period",
            "m",
            "eta_hat",
            "tau_hat",
            "c_star",
            "model_bfwcr",
            "brel",
            "btr",
            "realized_one_sided",
            "realized_relative_length",
            "empirical_interval_coverage",
            "empirical_all_covered",
            "z_empirical_interval_coverage",
            "z_empirical_all_covered",
        ],
        &summary,
    )?;
    out.table(
        "batting_intervals",
        &["period", "player_id", "estimate", "sigma", "nu", "lower", "upper", "one_sided", "truth", "covered"],
        &units,
    )?;
    out.json("batting", &reports)?;
    Ok(())
}

// ---------------------------------------------------------------- genes

#[derive(Args, Debug, Clone, Default)]
pub struct GenesArgs {
    /// Expression matrix: header row of sample labels, one row per gene
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of leading samples in group 1
    #[arg(long)]
    pub group1: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long = "rank-scope", value_parser = ["matrix", "row"])]
    pub rank_scope: Option<String>,
    #[arg(long)]
    pub delimiter: Option<char>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenesConfig {
    pub input: Option<PathBuf>,
    pub group1: Option<usize>,
    pub q: f64,
    pub rank_scope: String,
    pub delimiter: Option<char>,
}

impl Default for GenesConfig {
    fn default() -> Self {
        Self { input: None, group1: None, q: 0.1, rank_scope: "matrix".into(), delimiter: None }
    }
}

impl GenesArgs {
    pub fn resolve(&self) -> Result<GenesConfig> {
        let mut cfg: GenesConfig = self.common.base()?;
        let args = self;
        overlay!(cfg, args, q, rank_scope);
        if self.input.is_some() {
            cfg.input = self.input.clone();
        }
        if self.group1.is_some() {
            cfg.group1 = self.group1;
        }
        if self.delimiter.is_some() {
            cfg.delimiter = self.delimiter;
        }
        Ok(cfg)
    }
}

pub fn run_genes(cfg: &GenesConfig, out: &OutputDir) -> Result<()> {
    check_q(cfg.q)?;
    let input = require_input(&cfg.input)?;
    let group1 = cfg.group1.ok_or_else(|| UsageError("--group1 is required".into()))?;
    let scope: RankScope = cfg.rank_scope.parse().map_err(|e| UsageError(format!("{e}")))?;
    let matrix = load_expression(input, group1, delimiter_byte(cfg.delimiter)?)
        .with_context(|| format!("reading {}", input.display()))?;
    let r = genes_report(&matrix, cfg.q, scope)?;
    let summary = vec![vec![
        r.m.to_string(),
        r.group_sizes.0.to_string(),
        r.group_sizes.1.to_string(),
        num(r.eta_hat),
        num(r.tau_hat),
        num(r.nu),
        num(r.classical_bfwcr),
        num(r.c_star),
        num(r.bfwcr),
        num(r.brel),
        num(r.btr),
        num(r.realized_one_sided),
        num(r.realized_relative_length),
        num(r.zero_coverage),
    ]];
    out.table(
        "genes_summary",
        &[
            "m",
            "n1",
            "n2",
            "eta_hat",
            "tau_hat",
            "nu",
            "classical_bfwcr",
            "c_star",
            "bfwcr",
            "brel",
            "btr",
            "realized_one_sided",
            "realized_relative_length",
            "zero_coverage",
        ],
        &summary,
    )?;
    let units: Vec<Row> = r
        .intervals
        .iter()
        .map(|u| {
            vec![
                u.label.clone(),
                num(u.estimate),
                num(u.sigma),
                num(u.interval.lower),
                num(u.interval.upper),
                u8::from(u.interval.is_one_sided()).to_string(),
                u8::from(u.covered).to_string(),
            ]
        })
        .collect();
    out.table(
        "genes_intervals",
        &["gene", "difference", "std_error", "lower", "upper", "one_sided", "covers_zero"],
        &units,
    )?;
    out.json("genes", &r)?;
    Ok(())
}

// ---------------------------------------------------------------- simulate

#[derive(Args, Debug, Clone, Default)]
pub struct SimulateArgs {
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub nrep: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, value_parser = ["normal", "uniform", "logistic", "exponential"])]
    pub dist: Option<String>,
    #[arg(long = "eta-star", allow_hyphen_values = true)]
    pub eta_star: Option<f64>,
    #[arg(long = "tau-star")]
    pub tau_star: Option<f64>,
    /// Prior means for the fixed-prior families, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Prior standard deviations for the fixed-prior families
    #[arg(long)]
    pub tau: Option<String>,
    /// Subset of g0,g1,g2,g3,g4
    #[arg(long)]
    pub families: Option<String>,
    /// uniform:LO:HI or a single constant
    #[arg(long = "sigma-spec")]
    pub sigma_spec: Option<String>,
    /// Draw the standard errors once and reuse them in every replication
    #[arg(long = "fix-sigmas")]
    pub fix_sigmas: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub m: usize,
    pub nrep: usize,
    pub q: f64,
    pub dist: String,
    pub eta_star: f64,
    pub tau_star: f64,
    pub eta: String,
    pub tau: String,
    pub families: String,
    pub sigma_spec: String,
    pub fix_sigmas: bool,
    pub seed: u64,
    pub beta: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            m: 1000,
            nrep: 1000,
            q: 0.1,
            dist: "normal".into(),
            eta_star: 0.0,
            tau_star: 2.0,
            eta: "0,2,4,6".into(),
            tau: "1,2,3".into(),
            families: "g0,g1,g2,g3,g4".into(),
            sigma_spec: "uniform:0.01:10".into(),
            fix_sigmas: false,
            seed: 1,
            beta: 1000.0,
        }
    }
}

impl SimulateArgs {
    pub fn resolve(&self) -> Result<SimulateConfig> {
        let mut cfg: SimulateConfig = self.common.base()?;
        let args = self;
        overlay!(cfg, args, m, nrep, q, dist, eta_star, tau_star, eta, tau, families, sigma_spec, seed, beta);
        if self.fix_sigmas {
            cfg.fix_sigmas = true;
        }
        Ok(cfg)
    }
}

impl SimulateConfig {
    pub fn to_sim(&self) -> Result<SimConfig> {
        check_q(self.q)?;
        let true_dist: TrueDist = self.dist.parse().map_err(|e| UsageError(format!("{e}")))?;
        let etas = usage(parse_list(&self.eta))?;
        let taus = positive_list("tau", &self.tau)?;
        let families = self
            .families
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<MieFamily>().map_err(|e| UsageError(format!("{e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let sigma_range = match usage(SigmaSpec::parse(&self.sigma_spec))? {
            SigmaSpec::Uniform(lo, hi) => (lo, hi),
            SigmaSpec::List(v) if v.len() == 1 => (v[0], v[0]),
            _ => bail!(UsageError("simulate --sigma-spec must be uniform:LO:HI or one constant".into())),
        };
        let prior_grid = taus.iter().flat_map(|&t| etas.iter().map(move |&e| (e, t))).collect();
        let cfg = SimConfig {
            m: self.m,
            n_rep: self.nrep,
            q: self.q,
            sigma_range,
            fix_sigmas: self.fix_sigmas,
            true_dist,
            eta_star: self.eta_star,
            tau_star: self.tau_star,
            prior_grid,
            families,
            seed: self.seed,
            loss: LengthLoss::new(self.beta),
            ..SimConfig::default()
        };
        cfg.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(cfg)
    }
}

pub fn run_simulate(cfg: &SimulateConfig, out: &OutputDir) -> Result<()> {
    let sim = cfg.to_sim()?;
    let result = run_simulation(&sim)?;
    for (k, msg) in &result.failures {
        eprintln!("warning: replication {k} failed: {msg}");
    }
    let cells: Vec<Row> = result
        .cells
        .iter()
        .map(|c| {
            vec![
                c.family.to_string(),
                num(c.eta),
                num(c.tau),
                num(c.familywise_coverage),
                num(c.familywise_coverage_se),
                num(c.interval_coverage),
                num(c.interval_coverage_se),
                num(c.content),
                num(c.content_se),
                c.replications.to_string(),
            ]
        })
        .collect();
    out.table(
        "simulate_cells",
        &[
            "family",
            "eta",
            "tau",
            "familywise_coverage",
            "familywise_coverage_se",
            "interval_coverage",
            "interval_coverage_se",
            "content",
            "content_se",
            "replications",
        ],
        &cells,
    )?;

    let table = summarize(&result.cells);
    let mut header = vec!["tau".to_string(), "family".to_string()];
    header.extend(table.etas.iter().map(|e| format!("familywise_coverage_eta_{e}")));
    header.extend(table.etas.iter().map(|e| format!("content_eta_{e}")));
    let rows: Vec<Row> = table
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![num(r.tau), r.family.to_string()];
            row.extend(r.coverage.iter().map(|v| opt(*v)));
            row.extend(r.content.iter().map(|v| opt(*v)));
            row
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    out.table("simulate_table", &header_refs, &rows)?;
    out.json("simulate", &result)?;
    Ok(())
}

/// Re-dispatch a manifest's stored configuration.
pub fn rerun(manifest: &RunManifest, out: &OutputDir) -> Result<()> {
    let cfg = manifest.config.clone();
    let bad = |e: serde_json::Error| UsageError(format!("manifest config: {e}"));
    match manifest.subcommand.as_str() {
        "curves" => run_curves(&serde_json::from_value(cfg).map_err(bad)?, out),
        "optimize" => run_optimize(&serde_json::from_value(cfg).map_err(bad)?, out),
        "batting" => run_batting(&serde_json::from_value(cfg).map_err(bad)?, out),
        "genes" => run_genes(&serde_json::from_value(cfg).map_err(bad)?, out),
        "simulate" => run_simulate(&serde_json::from_value(cfg).map_err(bad)?, out),
        other => Err(UsageError(format!("unknown subcommand '{other}' in manifest")).into()),
    }
}
