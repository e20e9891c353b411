//! Exhaustive surgery atlas persisted as JSON lines.
//!
//! Records are evaluated in parallel but written serially in enumeration
//! order, so a run interrupted at any byte and resumed produces the same file
//! as an uninterrupted one. Resuming keeps every complete line and drops a
//! trailing partial one.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use dehn_surgery::jsj::{evaluate_surgery, reduce_to_companion, CoreKind, FilledPiece, ClassifiedPiece, Stage, SurgeryEvaluation, SurgeryOutcome};
use dehn_surgery::seifert::SeifertData;
use dehn_surgery::{KnotExpr, Slope};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RECORD_SCHEMA: &str = "atlas-record/1";
pub const SUMMARY_SCHEMA: &str = "atlas-summary/1";

const CHUNK: usize = 512;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("invalid atlas config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path} line {line} does not match this configuration; rerun without --resume")]
    Mismatch { path: PathBuf, line: usize },
    #[error("evaluating {expression} at {slope}: {message}")]
    Evaluate { expression: String, slope: Slope, message: String },
}

/// Enumeration bounds. Torus knots and cabling parameters range over
/// `min_rs <= |r|, |s| <= max_rs` (cabling `r` may also be `±1`), slopes over
/// `1 <= q <= max_q`, `|p| <= max_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasConfig {
    pub min_rs: i64,
    pub max_rs: i64,
    pub max_depth: usize,
    /// Sums of up to this many torus knots; below 2 means no sums.
    pub max_summands: usize,
    pub max_p: i64,
    pub max_q: i64,
}

impl AtlasConfig {
    pub fn validate(&self) -> Result<(), AtlasError> {
        let bad = |m: &str| Err(AtlasError::Config(m.to_string()));
        if self.min_rs < 2 {
            return bad("min |r|,|s| must be at least 2");
        }
        if self.max_rs < self.min_rs {
            return bad("max |r|,|s| is below the minimum");
        }
        if self.max_p < 0 || self.max_q < 1 {
            return bad("need max |p| >= 0 and max |q| >= 1");
        }
        if self.max_depth > 4 || self.max_summands > 4 {
            return bad("cable depth and summand count are capped at 4");
        }
        Ok(())
    }

    /// One representative per torus knot: `s >= min_rs`, `|r| > s`.
    fn torus_knots(&self) -> Vec<KnotExpr> {
        let mut out = Vec::new();
        for s in self.min_rs..=self.max_rs {
            for r in (-self.max_rs..=self.max_rs).filter(|r| r.abs() > s && r.gcd(&s) == 1) {
                out.push(KnotExpr::torus(r, s));
            }
        }
        out
    }

    /// Every expression in bounds, sorted by canonical text.
    pub fn expressions(&self) -> Vec<KnotExpr> {
        let tori = self.torus_knots();
        let mut all = tori.clone();
        let mut layer = tori.clone();
        for _ in 0..self.max_depth {
            let mut next = Vec::new();
            for c in &layer {
                for s in self.min_rs..=self.max_rs {
                    for r in (-self.max_rs..=self.max_rs).filter(|r| r.gcd(&s) == 1) {
                        next.push(KnotExpr::cable(r, s, c.clone()));
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        for n in 2..=self.max_summands {
            let mut idx = vec![0usize; n];
            'multisets: loop {
                all.push(KnotExpr::sum(idx.iter().map(|&i| tori[i].clone()).collect()));
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'multisets;
                    }
                    k -= 1;
                    if idx[k] + 1 < tori.len() {
                        let v = idx[k] + 1;
                        idx[k..].iter_mut().for_each(|x| *x = v);
                        break;
                    }
                }
            }
        }
        let mut keyed: Vec<(String, KnotExpr)> = all.into_iter().map(|e| (e.to_string(), e)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        keyed.into_iter().map(|(_, e)| e).collect()
    }

    /// Coprime slopes in bounds, ordered by `q` then `p`.
    pub fn slopes(&self) -> Vec<Slope> {
        let mut out = Vec::new();
        for q in 1..=self.max_q {
            for p in (-self.max_p..=self.max_p).filter(|p| p.gcd(&q) == 1) {
                out.push(Slope::new(p, q).expect("q >= 1"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldSummary {
    /// Closed Seifert fibered, normalized.
    Seifert { seifert: SeifertData },
    /// Seifert outer piece glued along JSJ tori to further pieces.
    Graph { pieces: usize, jsj_tori: usize },
    Hyperbolic {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certified_by: Option<String>,
    },
    /// Hyperbolic outer piece filled, glued to further pieces.
    HyperbolicGraph {
        name: String,
        pieces: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certified_by: Option<String>,
    },
    /// Filled along a Seifert fiber: the fibration does not extend.
    FiberFilling { piece: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasRecord {
    pub schema: String,
    pub index: u64,
    pub expression: String,
    pub slope: Slope,
    pub manifold: ManifoldSummary,
    #[serde(with = "dehn_surgery::serde_int")]
    pub h1_order: BigInt,
    pub chain: Vec<Stage>,
}

fn final_stage(ev: &SurgeryEvaluation) -> &SurgeryEvaluation {
    match &ev.outcome {
        SurgeryOutcome::Companion { then, .. } => final_stage(then),
        SurgeryOutcome::Filled { .. } => ev,
    }
}

fn summarize(ev: &SurgeryEvaluation) -> ManifoldSummary {
    let last = final_stage(ev);
    if let Some(s) = last.closed_seifert() {
        return ManifoldSummary::Seifert { seifert: s.clone() };
    }
    match (&last.core().kind, &last.pieces[0]) {
        (CoreKind::FiberFilling, ClassifiedPiece::Filled(FilledPiece::FiberSlope { source, .. })) => {
            ManifoldSummary::FiberFilling { piece: source.kind_name().to_string() }
        }
        (_, ClassifiedPiece::Filled(FilledPiece::Hyperbolic { name, certified_by, .. })) => {
            if last.pieces.len() == 1 {
                ManifoldSummary::Hyperbolic { name: name.clone(), certified_by: certified_by.clone() }
            } else {
                ManifoldSummary::HyperbolicGraph {
                    name: name.clone(),
                    pieces: last.pieces.len(),
                    certified_by: certified_by.clone(),
                }
            }
        }
        _ => ManifoldSummary::Graph { pieces: last.pieces.len(), jsj_tori: last.tori.len() },
    }
}

pub fn evaluate(index: u64, e: &KnotExpr, slope: &Slope) -> Result<AtlasRecord, AtlasError> {
    let fail = |message: String| AtlasError::Evaluate { expression: e.to_string(), slope: slope.clone(), message };
    let ev = evaluate_surgery(e, slope).map_err(|x| fail(x.to_string()))?;
    let h1_order = ev.h1_order().map_err(|x| fail(x.to_string()))?;
    let chain = reduce_to_companion(e, slope).map_err(|x| fail(x.to_string()))?.chain;
    Ok(AtlasRecord {
        schema: RECORD_SCHEMA.into(),
        index,
        expression: e.to_string(),
        slope: slope.clone(),
        manifold: summarize(&ev),
        h1_order,
        chain,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub expression: String,
    pub slope: Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceClass {
    pub seifert: SeifertData,
    pub members: Vec<Member>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasSummary {
    pub schema: String,
    pub config: AtlasConfig,
    pub output: PathBuf,
    pub records: u64,
    pub resumed_from: u64,
    /// Records whose `h1_order` differs from `|p|`.
    pub h1_violations: Vec<u64>,
    /// Closed Seifert results with at least three exceptional fibers shared
    /// by two or more records.
    pub coincidences: Vec<CoincidenceClass>,
}

#[derive(Default)]
struct Tally {
    records: u64,
    h1_violations: Vec<u64>,
    classes: BTreeMap<String, (SeifertData, Vec<Member>)>,
}

impl Tally {
    fn add(&mut self, r: &AtlasRecord) {
        self.records += 1;
        if r.h1_order != r.slope.p().abs() {
            self.h1_violations.push(r.index);
        }
        if let ManifoldSummary::Seifert { seifert } = &r.manifold {
            if seifert.exceptional.len() >= 3 {
                let key = serde_json::to_string(seifert).expect("Seifert data serializes");
                let entry = self.classes.entry(key).or_insert_with(|| (seifert.clone(), Vec::new()));
                entry.1.push(Member { expression: r.expression.clone(), slope: r.slope.clone() });
            }
        }
    }

    fn coincidences(self) -> Vec<CoincidenceClass> {
        self.classes
            .into_values()
            .filter(|(_, m)| m.len() >= 2)
            .map(|(seifert, members)| CoincidenceClass { seifert, members })
            .collect()
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> AtlasError + '_ {
    move |source| AtlasError::Io { path: path.to_path_buf(), source }
}

/// Reads complete records from an existing output and truncates a partial
/// last line. Returns the records kept.
fn recover(path: &Path, jobs: &[(KnotExpr, Slope)], tally: &mut Tally) -> Result<u64, AtlasError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut reader = BufReader::new(file);
    let mut kept_bytes = 0u64;
    let mut kept = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader.read_line(&mut line).map_err(io_err(path))?;
        if n == 0 || !line.ends_with('\n') {
            break;
        }
        let mismatch = || AtlasError::Mismatch { path: path.to_path_buf(), line: kept as usize + 1 };
        let record: AtlasRecord = serde_json::from_str(&line).map_err(|_| mismatch())?;
        let (e, s) = jobs.get(kept as usize).ok_or_else(mismatch)?;
        if record.index != kept || record.expression != e.to_string() || record.slope != *s {
            return Err(mismatch());
        }
        tally.add(&record);
        kept += 1;
        kept_bytes += n as u64;
    }
    let f = OpenOptions::new().write(true).open(path).map_err(io_err(path))?;
    f.set_len(kept_bytes).map_err(io_err(path))?;
    Ok(kept)
}

/// Runs the atlas into `path`. `stop_after` bounds the number of new records
/// written in this call (for staged runs).
pub fn run(cfg: &AtlasConfig, path: &Path, resume: bool, stop_after: Option<u64>) -> Result<AtlasSummary, AtlasError> {
    cfg.validate()?;
    let slopes = cfg.slopes();
    let jobs: Vec<(KnotExpr, Slope)> =
        cfg.expressions().into_iter().flat_map(|e| slopes.iter().map(move |s| (e.clone(), s.clone()))).collect();
    let mut tally = Tally::default();
    let start = if resume { recover(path, &jobs, &mut tally)? } else { 0 };
    let mut file = OpenOptions::new()
        .create(true)
        .write(true)
        .truncate(!resume)
        .open(path)
        .map_err(io_err(path))?;
    file.seek(SeekFrom::End(0)).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let end = match stop_after {
        Some(n) => (start + n).min(jobs.len() as u64),
        None => jobs.len() as u64,
    };
    let mut i = start;
    while i < end {
        let hi = (i + CHUNK as u64).min(end);
        let batch: Vec<Result<AtlasRecord, AtlasError>> = (i..hi)
            .into_par_iter()
            .map(|k| {
                let (e, s) = &jobs[k as usize];
                evaluate(k, e, s)
            })
            .collect();
        for r in batch {
            let r = r?;
            let line = serde_json::to_string(&r).expect("records serialize");
            writeln!(out, "{line}").map_err(io_err(path))?;
            tally.add(&r);
        }
        out.flush().map_err(io_err(path))?;
        i = hi;
    }
    out.flush().map_err(io_err(path))?;
    let records = tally.records;
    let h1_violations = std::mem::take(&mut tally.h1_violations);
    Ok(AtlasSummary {
        schema: SUMMARY_SCHEMA.into(),
        config: cfg.clone(),
        output: path.to_path_buf(),
        records,
        resumed_from: start,
        h1_violations,
        coincidences: tally.coincidences(),
    })
}
