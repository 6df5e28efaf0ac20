//! Readers for the batting and gene-expression inputs.
//!
//! Batting files are delimited text with header
//! `player_id,month,hits,at_bats,is_pitcher`, one row per player and season
//! month (1 = first month of the season). `is_pitcher` is optional.
//!
//! Expression files are delimited text whose header is a label column name
//! followed by sample labels; each further row is a gene label and its values.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::arcsine_unit;
use crate::measures::UnitSpec;

/// Minimum at-bats on each side of the split for a player to be kept.
pub const MIN_AT_BATS: u64 = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BattingRecord {
    pub player_id: String,
    pub month: u32,
    pub hits: u64,
    pub at_bats: u64,
    pub is_pitcher: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BattingLoad {
    pub records: Vec<BattingRecord>,
    /// (line, message) for rows that failed validation
    pub row_errors: Vec<(usize, String)>,
    pub warnings: Vec<String>,
}

/// Comma unless the first line contains a tab.
pub fn sniff_delimiter(first_line: &str) -> u8 {
    if first_line.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

fn open_sniffed(path: &Path, delimiter: Option<u8>) -> Result<(Vec<u8>, u8)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let delim = delimiter.unwrap_or_else(|| {
        let first = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
        sniff_delimiter(&String::from_utf8_lossy(first))
    });
    Ok((bytes, delim))
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "t" | "yes" | "y" => Some(true),
        "0" | "false" | "f" | "no" | "n" | "" => Some(false),
        _ => None,
    }
}

pub fn load_batting(path: impl AsRef<Path>, delimiter: Option<u8>) -> Result<BattingLoad> {
    let (bytes, delim) = open_sniffed(path.as_ref(), delimiter)?;
    read_batting(bytes.as_slice(), delim)
}

pub fn read_batting<R: Read>(reader: R, delimiter: u8) -> Result<BattingLoad> {
    let mut rdr =
        csv::ReaderBuilder::new().delimiter(delimiter).trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut out = BattingLoad::default();
    let headers = match rdr.headers() {
        Ok(h) if !h.is_empty() && !(h.len() == 1 && h[0].is_empty()) => h.clone(),
        Ok(_) => {
            out.warnings.push("empty batting file".into());
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let mut required = [0usize; 4];
    for (slot, name) in required.iter_mut().zip(["player_id", "month", "hits", "at_bats"]) {
        *slot = col(name).ok_or_else(|| Error::Parse { line: 1, message: format!("missing column '{name}'") })?;
    }
    let [id_col, month_col, hits_col, ab_col] = required;
    let pitcher_col = col("is_pitcher");
    if pitcher_col.is_none() {
        out.warnings.push("no is_pitcher column: pitchers cannot be excluded".into());
    }

    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                out.row_errors.push((line, e.to_string()));
                continue;
            }
        };
        let field = |c: usize| row.get(c).unwrap_or("");
        let parsed = (|| -> std::result::Result<BattingRecord, String> {
            let player_id = field(id_col).to_string();
            if player_id.is_empty() {
                return Err("empty player_id".into());
            }
            let month = field(month_col).parse::<u32>().map_err(|_| format!("bad month '{}'", field(month_col)))?;
            let hits = field(hits_col).parse::<u64>().map_err(|_| format!("bad hits '{}'", field(hits_col)))?;
            let at_bats = field(ab_col).parse::<u64>().map_err(|_| format!("bad at_bats '{}'", field(ab_col)))?;
            if hits > at_bats {
                return Err(format!("hits {hits} exceed at_bats {at_bats}"));
            }
            let is_pitcher = match pitcher_col {
                Some(c) => parse_bool(field(c)).ok_or_else(|| format!("bad is_pitcher '{}'", field(c)))?,
                None => false,
            };
            Ok(BattingRecord { player_id, month, hits, at_bats, is_pitcher })
        })();
        match parsed {
            Ok(r) => out.records.push(r),
            Err(msg) => out.row_errors.push((line, msg)),
        }
    }
    if out.records.is_empty() && out.row_errors.is_empty() {
        out.warnings.push("no batting rows".into());
    }
    Ok(out)
}

pub fn write_batting<W: Write>(writer: W, records: &[BattingRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["player_id", "month", "hits", "at_bats", "is_pitcher"])?;
    for r in records {
        w.write_record([
            r.player_id.clone(),
            r.month.to_string(),
            r.hits.to_string(),
            r.at_bats.to_string(),
            u8::from(r.is_pitcher).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Players kept for a prediction period, sorted by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodData {
    pub period: u32,
    pub player_ids: Vec<String>,
    /// transformed early-season averages
    pub units: Vec<UnitSpec>,
    /// transformed rest-of-season averages, used as the true values
    pub truths: Vec<f64>,
}

impl PeriodData {
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.units.iter().map(|u| u.xbar.expect("observed unit")).collect()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.units.iter().map(|u| u.sigma).collect()
    }
}

/// Sum hits and at-bats over months `1..=j` and the remainder, drop pitchers
/// and players with fewer than [`MIN_AT_BATS`] on either side.
pub fn select_period(records: &[BattingRecord], j: u32) -> Result<PeriodData> {
    if !(1..=3).contains(&j) {
        return domain(format!("prediction period must be 1, 2 or 3, got {j}"));
    }
    #[derive(Default)]
    struct Totals {
        early: (u64, u64),
        late: (u64, u64),
        pitcher: bool,
    }
    let mut players: BTreeMap<&str, Totals> = BTreeMap::new();
    for r in records {
        let t = players.entry(&r.player_id).or_default();
        t.pitcher |= r.is_pitcher;
        let side = if r.month <= j { &mut t.early } else { &mut t.late };
        side.0 += r.hits;
        side.1 += r.at_bats;
    }
    let mut out = PeriodData { period: j, player_ids: Vec::new(), units: Vec::new(), truths: Vec::new() };
    for (id, t) in players {
        if t.pitcher || t.early.1 < MIN_AT_BATS || t.late.1 < MIN_AT_BATS {
            continue;
        }
        out.player_ids.push(id.to_string());
        out.units.push(arcsine_unit(t.early.0, t.early.1)?);
        out.truths.push(arcsine_unit(t.late.0, t.late.1)?.xbar.expect("arcsine sets xbar"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionMatrix {
    pub genes: Vec<String>,
    pub samples: Vec<String>,
    /// one row per gene
    pub values: Vec<Vec<f64>>,
    /// the first `group_split` samples form group 1
    pub group_split: usize,
}

impl ExpressionMatrix {
    pub fn group_sizes(&self) -> (usize, usize) {
        (self.group_split, self.samples.len() - self.group_split)
    }
}

pub fn load_expression(path: impl AsRef<Path>, group_split: usize, delimiter: Option<u8>) -> Result<ExpressionMatrix> {
    let (bytes, delim) = open_sniffed(path.as_ref(), delimiter)?;
    read_expression(bytes.as_slice(), group_split, delim)
}

pub fn read_expression<R: Read>(reader: R, group_split: usize, delimiter: u8) -> Result<ExpressionMatrix> {
    let sep = delimiter as char;
    let mut lines = BufReader::new(reader).lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) => {
                let l = l?;
                if !l.trim().is_empty() {
                    break l;
                }
            }
            None => return Err(Error::Parse { line: 1, message: "empty expression file".into() }),
        }
    };
    let samples: Vec<String> = header.split(sep).skip(1).map(|s| s.trim().to_string()).collect();
    let n = samples.len();
    if n == 0 {
        return Err(Error::Parse { line: 1, message: "header names no samples".into() });
    }
    if group_split == 0 || group_split >= n {
        return domain(format!("group split {group_split} must leave both groups nonempty among {n} samples"));
    }
    let mut genes = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let mut cells = line.split(sep);
        let label = cells.next().unwrap_or_default().trim().to_string();
        let row: Vec<&str> = cells.collect();
        if row.len() != n {
            return Err(Error::Parse {
                line: lineno,
                message: format!("row '{label}' has {} values, expected {n}", row.len()),
            });
        }
        let parsed = row
            .iter()
            .map(|c| {
                c.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: format!("row '{label}': non-numeric value '{}'", c.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        genes.push(label);
        values.push(parsed);
    }
    if genes.is_empty() {
        return Err(Error::Parse { line: 2, message: "no gene rows".into() });
    }
    Ok(ExpressionMatrix { genes, samples, values, group_split })
}

pub fn write_expression<W: Write>(mut writer: W, m: &ExpressionMatrix) -> Result<()> {
    writeln!(writer, "gene,{}", m.samples.join(","))?;
    for (g, row) in m.genes.iter().zip(&m.values) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(writer, "{g},{}", cells.join(","))?;
    }
    Ok(())
}
