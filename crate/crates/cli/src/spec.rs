//! Parsers for the compact grid and standard-error specifications.

use anyhow::{bail, Context, Result};

fn number(s: &str) -> Result<f64> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => t.parse::<f64>().with_context(|| format!("'{t}' is not a number")),
    }
}

/// Comma-separated items, each a number, `inf`, or a range `start:stop:step`.
///
/// `0:6:0.05,inf` is the grid 0, 0.05, …, 6 followed by ∞.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(number(v)?),
            [a, b, step] => {
                let (a, b, step) = (number(a)?, number(b)?, number(step)?);
                if !(step > 0.0 && a.is_finite() && b.is_finite() && a <= b) {
                    bail!("bad range '{item}'");
                }
                let n = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| a + i as f64 * step));
            }
            _ => bail!("bad grid item '{item}', expected a number or start:stop:step"),
        }
    }
    if out.is_empty() {
        bail!("empty grid '{spec}'");
    }
    if out.iter().any(|v| v.is_nan()) {
        bail!("grid contains NaN");
    }
    Ok(out)
}

pub fn parse_list(spec: &str) -> Result<Vec<f64>> {
    parse_grid(spec)
}

/// Standard errors: `equi:LO:HI` (M equi-spaced values), `uniform:LO:HI`
/// (drawn, simulation only) or an explicit comma list.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSpec {
    Equispaced(f64, f64),
    Uniform(f64, f64),
    List(Vec<f64>),
}

impl SigmaSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let bounds = |rest: &str| -> Result<(f64, f64)> {
            let p: Vec<&str> = rest.split(':').collect();
            let [lo, hi] = p.as_slice() else { bail!("expected LO:HI in '{s}'") };
            let (lo, hi) = (number(lo)?, number(hi)?);
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                bail!("sigma bounds must satisfy 0 < LO <= HI < inf, got '{s}'");
            }
            Ok((lo, hi))
        };
        if let Some(rest) = s.strip_prefix("equi:") {
            let (lo, hi) = bounds(rest)?;
            Ok(Self::Equispaced(lo, hi))
        } else if let Some(rest) = s.strip_prefix("uniform:") {
            let (lo, hi) = bounds(rest)?;
            Ok(Self::Uniform(lo, hi))
        } else {
            let v = parse_list(s)?;
            if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                bail!("standard errors must be positive and finite");
            }
            Ok(Self::List(v))
        }
    }

    /// Deterministic standard errors for M units.
    pub fn resolve(&self, m: usize) -> Result<Vec<f64>> {
        match self {
            Self::Equispaced(lo, hi) => Ok(bmie_core::measures::equispaced(*lo, *hi, m)),
            Self::List(v) => Ok(v.clone()),
            Self::Uniform(..) => bail!("uniform sigma draws are only available in simulate"),
        }
    }
}
