use std::fs;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use grc_core::brackets::{bracket_from_singular, equivariance_report, BilinOp, Subalgebra, Target};
use grc_core::gl11::{level1_highest, tensor_case};
use grc_core::induced::{Algebra, ModVec};
use grc_core::rat::{fmt_rat, parse_rat, Rat};
use grc_core::singular::singular_space;
use grc_core::tables::{
    contact_ledger, emit_table, parse_mu_list, parse_mu_range, parse_orders, scan_classify, Format,
    ScanConfig,
};
use grc_core::GrcError;

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn algebra_arg(s: &str) -> Result<Algebra, String> {
    Algebra::parse(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "grc",
    version,
    about = "Invariant bilinear operators on the (1|1) superstring"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Cell {
    /// k11 or vect11
    #[arg(long, value_parser = algebra_arg)]
    algebra: Algebra,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    mu1: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    mu2: Rat,
    #[arg(long)]
    order: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singular vectors of a given level and their dimensions.
    Singular {
        #[command(flatten)]
        cell: Cell,
        #[arg(long)]
        json: bool,
    },
    /// Bilinear operators read off from the singular vectors.
    Bracket {
        #[command(flatten)]
        cell: Cell,
        /// Only the I-th singular vector (even sector first, from 0).
        #[arg(long)]
        index: Option<usize>,
    },
    /// Runs the equivariance oracle on every bracket of the cell.
    Verify {
        #[command(flatten)]
        cell: Cell,
        /// osp12, pgl21, k11-full or vect11-full
        #[arg(long)]
        subalgebra: String,
        #[arg(long)]
        degree_bound: u32,
    },
    /// Scans a weight grid and writes a classification table.
    #[command(group(ArgGroup::new("grid").required(true).args(["mu_list", "mu_range"])))]
    Classify {
        #[arg(long, value_parser = algebra_arg)]
        algebra: Algebra,
        #[arg(long, allow_hyphen_values = true)]
        mu_list: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu_range: Option<String>,
        #[arg(long)]
        orders: String,
        #[arg(long, default_value_t = 0)]
        spot_check: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: String,
        /// Also write the contact discrepancy ledger (JSON) here.
        #[arg(long)]
        ledger: Option<String>,
    },
    /// Case analysis of M^{lambda;mu} (x) M^{sigma;rho} over gl(1|1).
    TensorCase {
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        lambda: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        mu: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        sigma: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        rho: Rat,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<GrcError> for Failure {
    fn from(e: GrcError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn vectors(cell: &Cell) -> Result<Vec<ModVec>, GrcError> {
    let sp = singular_space(cell.algebra, &cell.mu1, &cell.mu2, cell.order)?;
    Ok(sp.even.into_iter().chain(sp.odd).collect())
}

fn describe(op: &BilinOp) -> String {
    let target = match &op.target {
        Target::Density(l) => format!("F_{}", fmt_rat(l)),
        Target::Fiber(rep) => {
            let diag = |m: &Vec<Vec<Rat>>| {
                m.iter()
                    .enumerate()
                    .map(|(i, r)| fmt_rat(&r[i]))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            format!(
                "tensor fields, fiber H1=diag({}) H2=diag({})",
                diag(&rep.h1),
                diag(&rep.h2)
            )
        }
    };
    format!(
        "F_{} x F_{} -> {target}, order {}, {:?}\n{}",
        fmt_rat(&op.lambda1),
        fmt_rat(&op.lambda2),
        op.level,
        op.parity,
        op.formula()
    )
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Singular { cell, json } => {
            let sp = singular_space(cell.algebra, &cell.mu1, &cell.mu2, cell.order)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&sp.to_json()).expect("json")
                );
            } else {
                let (e, o) = sp.dims();
                println!(
                    "{} mu1={} mu2={} level={}: dim {e}|{o}",
                    cell.algebra,
                    fmt_rat(&cell.mu1),
                    fmt_rat(&cell.mu2),
                    cell.order
                );
                for (label, vs) in [("even", &sp.even), ("odd", &sp.odd)] {
                    for v in vs {
                        println!("[{label}] {v}");
                    }
                }
            }
        }
        Cmd::Bracket { cell, index } => {
            let vs = vectors(&cell)?;
            let chosen: Vec<(usize, &ModVec)> = match index {
                Some(i) => match vs.get(i) {
                    Some(v) => vec![(i, v)],
                    None => {
                        return Err(Failure::Usage(format!(
                            "index {i} out of range: {} singular vectors",
                            vs.len()
                        )))
                    }
                },
                None => vs.iter().enumerate().collect(),
            };
            if chosen.is_empty() {
                println!("no singular vectors");
            }
            for (i, v) in chosen {
                println!("#{i}: {}", describe(&bracket_from_singular(v)?));
            }
        }
        Cmd::Verify {
            cell,
            subalgebra,
            degree_bound,
        } => {
            let sub = Subalgebra::parse(&subalgebra)?;
            let mut failed = 0;
            for (i, v) in vectors(&cell)?.iter().enumerate() {
                let op = bracket_from_singular(v)?;
                let rep = equivariance_report(&op, sub, degree_bound)?;
                println!(
                    "#{i}: {} checks, {} failures under {}",
                    rep.checks,
                    rep.failures.len(),
                    sub.name()
                );
                for f in rep.failures.iter().take(5) {
                    println!(
                        "  {} on ({}, {}): {}",
                        f.generator,
                        f.phi,
                        f.psi,
                        f.defect.join("; ")
                    );
                }
                failed += usize::from(!rep.passed());
            }
            if failed > 0 {
                return Err(Failure::Verification(format!(
                    "{failed} bracket(s) fail the oracle"
                )));
            }
        }
        Cmd::Classify {
            algebra,
            mu_list,
            mu_range,
            orders,
            spot_check,
            seed,
            format,
            out,
            ledger,
        } => {
            let format = Format::parse(&format)?;
            let mus = match (mu_list, mu_range) {
                (Some(l), _) => parse_mu_list(&l)?,
                (None, Some(r)) => parse_mu_range(&r)?,
                (None, None) => return Err(Failure::Usage("a weight grid is required".into())),
            };
            let mut cfg = ScanConfig::new(algebra, mus, parse_orders(&orders)?);
            cfg.spot_check = spot_check;
            cfg.seed = seed;
            let res = scan_classify(&cfg)?;
            let doc = emit_table(&res.records, format)?;
            fs::write(&out, doc).map_err(|e| Failure::Usage(format!("cannot write {out}: {e}")))?;
            let matched = res.records.iter().filter(|r| r.matches).count();
            println!(
                "{} cells, {matched} match the predicted dimensions; wrote {out}",
                res.records.len()
            );
            if let Some(path) = ledger {
                if algebra != Algebra::Contact {
                    return Err(Failure::Usage("--ledger applies to k11 only".into()));
                }
                let l = contact_ledger(&cfg.mus, cfg.orders.1)?;
                fs::write(&path, l.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
                println!("ledger: {} discrepant cells; wrote {path}", l.cells.len());
            }
            let bad: Vec<_> = res.spot_checks.iter().filter(|s| s.failures > 0).collect();
            for s in &res.spot_checks {
                println!(
                    "spot check mu1={} mu2={} n={}: {}/{} brackets pass at degree {}",
                    fmt_rat(&s.mu1),
                    fmt_rat(&s.mu2),
                    s.n,
                    s.vectors - s.failures,
                    s.vectors,
                    s.degree_bound
                );
            }
            if !bad.is_empty() {
                return Err(Failure::Verification(format!(
                    "{} spot-checked cells fail the oracle",
                    bad.len()
                )));
            }
        }
        Cmd::TensorCase {
            lambda,
            mu,
            sigma,
            rho,
        } => {
            let case = tensor_case(&lambda, &mu, &sigma, &rho);
            let rays: Vec<_> = level1_highest(&lambda, &mu, &sigma, &rho)
                .into_iter()
                .map(|(x, y)| json!({"x": fmt_rat(&x), "y": fmt_rat(&y)}))
                .collect();
            let out = json!({"case": case, "level1_highest": rays});
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
    }
}
