//! Classification scans over weight grids, table output, and the contact
//! discrepancy ledger.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brackets::{bracket_from_singular, equivariance_report, Subalgebra};
use crate::error::{GrcError, Result};
use crate::induced::Algebra;
use crate::rat::{fmt_rat, parse_rat, serde_rat, Rat};
use crate::singular::{
    action_formula_ledger, compare_closed_vs_kernel, corrected_contact_dimension, singular_space,
    ComparisonReport, FormulaCheck,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormCheck {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub algebra: Algebra,
    #[serde(with = "serde_rat")]
    pub mu1: Rat,
    #[serde(with = "serde_rat")]
    pub mu2: Rat,
    pub n: u32,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub pred_even: usize,
    pub pred_odd: usize,
    pub case: String,
    #[serde(rename = "match")]
    pub matches: bool,
    pub closed_form: ClosedFormCheck,
}

impl ClassRecord {
    pub fn from_report(r: &ComparisonReport) -> ClassRecord {
        let dim = |i: usize| r.sectors[i].kernel_dim;
        let pred = |i: usize| r.sectors[i].predicted_dim;
        let has_families = r.sectors.iter().any(|s| !s.families.is_empty());
        let closed_form = if !has_families {
            ClosedFormCheck::NotApplicable
        } else if r.discrepancies.iter().any(|d| d.kind != "dimension") {
            ClosedFormCheck::Fail
        } else {
            ClosedFormCheck::Pass
        };
        ClassRecord {
            algebra: r.algebra,
            mu1: r.mu1.clone(),
            mu2: r.mu2.clone(),
            n: r.level,
            dim_even: dim(0),
            dim_odd: dim(1),
            pred_even: pred(0),
            pred_odd: pred(1),
            case: r.case.clone(),
            matches: dim(0) == pred(0) && dim(1) == pred(1),
            closed_form,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(GrcError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub algebra: Algebra,
    pub mus: Vec<Rat>,
    /// Inclusive order range; empty when `start > end`.
    pub orders: (u32, u32),
    /// Number of cells to run the oracle on.
    pub spot_check: usize,
    /// Oracle degree bound; `None` means order + 2.
    pub degree_bound: Option<u32>,
    pub seed: u64,
}

impl ScanConfig {
    pub fn new(algebra: Algebra, mus: Vec<Rat>, orders: (u32, u32)) -> Self {
        ScanConfig {
            algebra,
            mus,
            orders,
            spot_check: 0,
            degree_bound: None,
            seed: 0,
        }
    }

    pub fn cells(&self) -> Vec<(Rat, Rat, u32)> {
        let mut mus = self.mus.clone();
        mus.sort();
        mus.dedup();
        let mut out = Vec::new();
        for a in &mus {
            for b in &mus {
                for n in self.orders.0..=self.orders.1 {
                    out.push((a.clone(), b.clone(), n));
                }
            }
        }
        out
    }
}

/// `"0, 1/2, 3"`.
pub fn parse_mu_list(s: &str) -> Result<Vec<Rat>> {
    let out: Vec<Rat> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_rat)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(GrcError::InvalidGrid("empty weight list".into()));
    }
    Ok(out)
}

/// `"A..B:STEP"`, inclusive of `B` when it is hit.
pub fn parse_mu_range(s: &str) -> Result<Vec<Rat>> {
    let bad = || GrcError::InvalidGrid(format!("expected A..B:STEP, got {s:?}"));
    let (range, step) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let (a, b, step) = (parse_rat(a)?, parse_rat(b)?, parse_rat(step)?);
    if step <= Rat::from_integer(0.into()) {
        return Err(GrcError::InvalidGrid("step must be positive".into()));
    }
    if a > b {
        return Err(GrcError::InvalidGrid(format!("empty range {s:?}")));
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b {
        out.push(x.clone());
        x += &step;
    }
    Ok(out)
}

/// `"A..B"` inclusive; `"N"` alone is a single order.
pub fn parse_orders(s: &str) -> Result<(u32, u32)> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| GrcError::InvalidGrid(format!("bad order {t:?}")))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b)?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    #[serde(with = "serde_rat")]
    pub mu1: Rat,
    #[serde(with = "serde_rat")]
    pub mu2: Rat,
    pub n: u32,
    pub degree_bound: u32,
    pub vectors: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub records: Vec<ClassRecord>,
    pub spot_checks: Vec<SpotCheck>,
}

fn spot_check(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    n: u32,
    bound: Option<u32>,
) -> Result<SpotCheck> {
    let degree_bound = bound.unwrap_or(n + 2).max(n + 2);
    let space = singular_space(algebra, mu1, mu2, n)?;
    let mut failures = 0;
    let mut vectors = 0;
    for v in space.even.iter().chain(&space.odd) {
        vectors += 1;
        let op = bracket_from_singular(v)?;
        if !equivariance_report(&op, Subalgebra::classifying(algebra), degree_bound)?.passed() {
            failures += 1;
        }
    }
    Ok(SpotCheck {
        mu1: mu1.clone(),
        mu2: mu2.clone(),
        n,
        degree_bound,
        vectors,
        failures,
    })
}

/// One record per grid cell in `(μ₁, μ₂, n)` order, plus oracle checks on
/// a seeded sample of cells.
pub fn scan_classify(cfg: &ScanConfig) -> Result<ScanResult> {
    if cfg.mus.is_empty() {
        return Err(GrcError::InvalidGrid("empty weight grid".into()));
    }
    let cells = cfg.cells();
    let records: Vec<ClassRecord> = cells
        .par_iter()
        .map(|(a, b, n)| {
            compare_closed_vs_kernel(cfg.algebra, a, b, *n).map(|r| ClassRecord::from_report(&r))
        })
        .collect::<Result<_>>()?;
    let k = cfg.spot_check.min(cells.len());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked: Vec<usize> = sample(&mut rng, cells.len(), k).into_vec();
    picked.sort_unstable();
    let spot_checks = picked
        .par_iter()
        .map(|&i| {
            let (a, b, n) = &cells[i];
            spot_check(cfg.algebra, a, b, *n, cfg.degree_bound)
        })
        .collect::<Result<_>>()?;
    Ok(ScanResult {
        records,
        spot_checks,
    })
}

pub fn emit_table(records: &[ClassRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if records.is_empty() {
                w.write_record(CSV_HEADER).map_err(csv_err)?;
            }
            for r in records {
                w.serialize(r).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| GrcError::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| GrcError::Parse(e.to_string()))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)
                .map_err(|e| GrcError::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Markdown => Ok(markdown(records)),
    }
}

const CSV_HEADER: [&str; 11] = [
    "algebra",
    "mu1",
    "mu2",
    "n",
    "dim_even",
    "dim_odd",
    "pred_even",
    "pred_odd",
    "case",
    "match",
    "closed_form",
];

fn csv_err(e: csv::Error) -> GrcError {
    GrcError::Parse(e.to_string())
}

pub fn parse_csv(s: &str) -> Result<Vec<ClassRecord>> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    r.deserialize().map(|x| x.map_err(csv_err)).collect()
}

pub fn parse_json(s: &str) -> Result<Vec<ClassRecord>> {
    serde_json::from_str(s).map_err(|e| GrcError::Parse(e.to_string()))
}

fn legend(algebra: Algebra) -> &'static str {
    match algebra {
        Algebra::Vect => {
            "- ThMain-i: mu1, mu2 even and >= 0 with mu1 + mu2 = 2n - 4; dimensions (1|1)\n\
             - ThMain-ii: mu1, mu2 in {0, 2, ..., 2n - 2} with mu1 + mu2 >= 2n - 2; dimensions (0|2)\n\
             - ThMain-iii: otherwise; dimensions (0|1)\n"
        }
        Algebra::Contact => {
            "- i-1 / i-2: even level 2n, generic / exceptional (two free parameters)\n\
             - ii-1 / ii-2 / ii-3: odd level 2n+1, by the position of mu2 and the vanishing diagonal\n\
             - level-0: the product, dimensions (1|0)\n"
        }
    }
}

fn markdown(records: &[ClassRecord]) -> String {
    let mut s = String::new();
    let mut algebras: Vec<Algebra> = records.iter().map(|r| r.algebra).collect();
    algebras.dedup();
    s.push_str(
        "| algebra | mu1 | mu2 | n | dim (even|odd) | predicted | case | match | closed form |\n",
    );
    s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in records {
        let cf = match r.closed_form {
            ClosedFormCheck::Pass => "pass",
            ClosedFormCheck::Fail => "fail",
            ClosedFormCheck::NotApplicable => "n/a",
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {}\\|{} | {}\\|{} | {} | {} | {} |",
            r.algebra,
            fmt_rat(&r.mu1),
            fmt_rat(&r.mu2),
            r.n,
            r.dim_even,
            r.dim_odd,
            r.pred_even,
            r.pred_odd,
            r.case,
            if r.matches { "yes" } else { "no" },
            cf
        );
    }
    let total = records.len();
    let matched = records.iter().filter(|r| r.matches).count();
    let _ = writeln!(
        s,
        "\n{matched} of {total} cells match the predicted dimensions."
    );
    for a in algebras {
        let _ = write!(s, "\nCases for {a}:\n\n{}", legend(a));
    }
    s
}

/// Per-cell entry of the contact ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCell {
    #[serde(with = "serde_rat")]
    pub mu1: Rat,
    #[serde(with = "serde_rat")]
    pub mu2: Rat,
    pub level: u32,
    pub case: String,
    pub kernel: (usize, usize),
    pub printed_prediction: (usize, usize),
    pub corrected_prediction: (usize, usize),
    /// The corrected families lie in the kernel and span it.
    pub corrected_families_span: bool,
    pub discrepancies: Vec<String>,
}

/// Machine-readable comparison of the printed contact case analysis with
/// the straightening engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyLedger {
    pub max_level: u32,
    pub formulas: Vec<FormulaCheck>,
    pub cells_checked: usize,
    /// Cells where printed data and kernel disagree.
    pub cells: Vec<LedgerCell>,
    /// Every mismatch has corrected data attached and the corrected data
    /// agrees with the kernel everywhere on the grid.
    pub corrections_complete: bool,
}

impl DiscrepancyLedger {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && self.formulas.iter().all(|f| f.matches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }
}

/// The ledger over the full grid `mus × mus × 0..=max_level`.
pub fn contact_ledger(mus: &[Rat], max_level: u32) -> Result<DiscrepancyLedger> {
    let cells = ScanConfig::new(Algebra::Contact, mus.to_vec(), (0, max_level)).cells();
    contact_ledger_for(&cells, max_level)
}

/// The ledger over explicit `(μ₁, μ₂, level)` cells; the action formulas
/// are checked through `max_level`.
pub fn contact_ledger_for(cells: &[(Rat, Rat, u32)], max_level: u32) -> Result<DiscrepancyLedger> {
    let formulas = action_formula_ledger(max_level)?;
    let reports: Vec<ComparisonReport> = cells
        .par_iter()
        .map(|(a, b, n)| compare_closed_vs_kernel(Algebra::Contact, a, b, *n))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut complete = formulas.iter().all(|f| f.matches || f.corrected.is_some());
    for r in &reports {
        let kernel = (r.sectors[0].kernel_dim, r.sectors[1].kernel_dim);
        let corrected = corrected_contact_dimension(&r.mu1, &r.mu2, r.level);
        let corrected_span = r.sectors.iter().all(|s| s.corrected_spans.unwrap_or(true));
        if corrected != kernel || !corrected_span {
            complete = false;
        }
        if r.all_match() {
            continue;
        }
        out.push(LedgerCell {
            mu1: r.mu1.clone(),
            mu2: r.mu2.clone(),
            level: r.level,
            case: r.case.clone(),
            kernel,
            printed_prediction: (r.sectors[0].predicted_dim, r.sectors[1].predicted_dim),
            corrected_prediction: corrected,
            corrected_families_span: corrected_span,
            discrepancies: r
                .discrepancies
                .iter()
                .map(|d| format!("{}: {}", d.kind, d.detail))
                .collect(),
        });
    }
    Ok(DiscrepancyLedger {
        max_level,
        formulas,
        cells_checked: reports.len(),
        cells: out,
        corrections_complete: complete,
    })
}
