//! End-to-end acceptance run (no libtest harness, so the report is
//! always shown). Prints one `criterion N: PASS|FAIL - ...` line per
//! criterion and exits non-zero if the outcome is unacceptable.
//!
//! Criterion 6 compares against the published exceptional locus of the
//! contact even case; the straightening kernel disagrees there, and the
//! disagreement must show up in the ledger of criterion 7.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use grc_core::brackets::{
    admits_equivariant_target, bracket_from_singular, complement_vectors, equivariance_report,
    ex1_bracket, Subalgebra,
};
use grc_core::gl11::{arrow_identities, level1_highest, sample_lambdas, tensor_case, CaseId};
use grc_core::induced::{act_element, level_basis, AlgElem, Algebra, ModVec, RaiserId};
use grc_core::rat::{int, rat, Rat};
use grc_core::singular::{compare_closed_vs_kernel, kernel_dims, singular_space};
use grc_core::supercalc::{
    contact_bracket, contact_field, d_theta, lie_derivative, monomials_up_to, spoly_mul,
    vfield_bracket, Density, Parity, SuperPoly, VField,
};
use grc_core::tables::{contact_ledger_for, scan_classify, ScanConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| int(x)).collect()
}

fn vect_grid() -> Vec<Rat> {
    let mut v = ints(&[-2, -1, 0, 1, 2, 3, 4, 6, 8, 10, 12]);
    v.push(rat(1, 2));
    v
}

fn thmain() -> Outcome {
    let t = Instant::now();
    let cfg = ScanConfig::new(Algebra::Vect, vect_grid(), (1, 6));
    let res = scan_classify(&cfg).expect("scan");
    let ok = res.records.iter().filter(|r| r.matches).count();
    outcome(
        ok == res.records.len() && res.records.len() == 864,
        format!(
            "{ok}/{} cells match the trichotomy ({:.1?})",
            res.records.len(),
            t.elapsed()
        ),
    )
}

fn vect_closed_forms() -> Outcome {
    let cells = ScanConfig::new(Algebra::Vect, vect_grid(), (1, 6)).cells();
    let bad: Vec<String> = cells
        .par_iter()
        .filter_map(|(a, b, n)| {
            let r = compare_closed_vs_kernel(Algebra::Vect, a, b, *n).expect("compare");
            let ok = r.sectors.iter().all(|s| {
                s.kernel_dim == 0 || (s.printed_spans && s.families.iter().all(|f| f.in_kernel))
            });
            (!ok).then(|| format!("({a},{b},{n})"))
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!(
            "{} cells: closed forms in kernel and spanning; failures {:?}",
            cells.len(),
            bad
        ),
    )
}

fn bijection(algebra: Algebra, mus: &[i64], max_level: u32) -> Outcome {
    let t = Instant::now();
    let sub = Subalgebra::classifying(algebra);
    let mus = ints(mus);
    let cells: Vec<(Rat, Rat, u32)> = ScanConfig::new(algebra, mus, (1, max_level)).cells();
    let per_cell: Vec<(usize, Vec<String>, Option<bool>)> = cells
        .par_iter()
        .map(|(a, b, n)| {
            let sp = singular_space(algebra, a, b, *n).expect("kernel");
            let mut fails = Vec::new();
            let mut count = 0;
            for v in sp.even.iter().chain(&sp.odd) {
                count += 1;
                let passed = bracket_from_singular(v)
                    .and_then(|op| equivariance_report(&op, sub, n + 4))
                    .map(|r| r.passed())
                    .unwrap_or(false);
                if !passed {
                    fails.push(format!("({a},{b},{n})"));
                }
            }
            // None: the whole level is singular, so there is no complement.
            let mut complement_fails = None;
            for p in [Parity::Even, Parity::Odd] {
                if let Some(u) = complement_vectors(algebra, a, b, *n, p)
                    .expect("complement")
                    .first()
                {
                    let fails = !admits_equivariant_target(u).expect("solve");
                    complement_fails = Some(fails || complement_fails == Some(true));
                }
            }
            (count, fails, complement_fails)
        })
        .collect();
    let vectors: usize = per_cell.iter().map(|c| c.0).sum();
    let failures: Vec<&String> = per_cell.iter().flat_map(|c| &c.1).collect();
    let complement_ok = per_cell.iter().filter(|c| c.2 == Some(true)).count();
    let no_complement: Vec<String> = cells
        .iter()
        .zip(&per_cell)
        .filter(|(_, c)| c.2.is_none())
        .map(|((a, b, n), _)| format!("({a},{b},{n})"))
        .collect();
    outcome(
        failures.is_empty() && complement_ok + no_complement.len() == cells.len(),
        format!(
            "{} cells, {vectors} kernel brackets pass under {}, failures {:?}; a complement vector fails in \
             {complement_ok} cells, level fully singular in {:?} ({:.1?})",
            cells.len(),
            sub.name(),
            failures,
            no_complement,
            t.elapsed()
        ),
    )
}

fn ex1() -> Outcome {
    let pairs = [
        (int(1), int(0)),
        (int(0), int(1)),
        (int(1), int(1)),
        (int(2), int(-3)),
        (rat(5, 7), int(1)),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (a, b) in &pairs {
        let rep = equivariance_report(&ex1_bracket(a, b).expect("ex1"), Subalgebra::K11Full, 6)
            .expect("oracle");
        pass &= rep.passed();
        notes.push(format!(
            "({a},{b}) {} checks {} failures",
            rep.checks,
            rep.failures.len()
        ));
    }
    outcome(pass, format!("k11-full at degree 6: {}", notes.join("; ")))
}

fn random_generic(rng: &mut ChaCha8Rng) -> Rat {
    // Non-integers avoid every exceptional locus.
    loop {
        let q = rng.gen_range(2..10i64);
        let p = rng.gen_range(-40..40i64);
        let r = rat(p, q);
        if !r.is_integer() {
            return r;
        }
    }
}

fn contact_generic() -> (Outcome, Vec<(Rat, Rat, u32)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pairs: Vec<(Rat, Rat)> = (0..10)
        .map(|_| (random_generic(&mut rng), random_generic(&mut rng)))
        .collect();
    let generic_ok = pairs.par_iter().all(|(a, b)| {
        (1..=4).all(|n| kernel_dims(Algebra::Contact, a, b, 2 * n).expect("dims").0 == 1)
    });

    // Published locus: μ₁ = j+1, μ₂ = 3(n+j+1), level 2n, 0 ≤ j < n.
    let printed: Vec<(Rat, Rat, u32)> = [(1, 0), (2, 0), (2, 1), (3, 0)]
        .iter()
        .map(|&(n, j)| (int(j + 1), int(3 * (n + j + 1)), 2 * n as u32))
        .collect();
    // Locus where the kernel itself has two parameters.
    let kernel_locus: Vec<(Rat, Rat, u32)> = [(1, 1, 4), (1, 2, 6), (2, 2, 6)]
        .iter()
        .map(|&(a, b, l)| (int(a), int(b), l))
        .collect();
    let dims = |cells: &[(Rat, Rat, u32)]| -> Vec<String> {
        cells
            .iter()
            .map(|(a, b, l)| {
                format!(
                    "({a},{b},{l}):{}",
                    kernel_dims(Algebra::Contact, a, b, *l).expect("dims").0
                )
            })
            .collect()
    };
    let printed_ok = printed
        .iter()
        .all(|(a, b, l)| kernel_dims(Algebra::Contact, a, b, *l).expect("dims").0 == 2);
    let kernel_ok = kernel_locus
        .iter()
        .all(|(a, b, l)| kernel_dims(Algebra::Contact, a, b, *l).expect("dims").0 == 2);
    let detail = format!(
        "generic dim 1 at levels 2,4,6,8 for 10 pairs: {}; published exceptional cells even dims {:?} (expected 2); \
         two-parameter cells found by the kernel {:?}{}",
        if generic_ok { "yes" } else { "no" },
        dims(&printed),
        dims(&kernel_locus),
        if kernel_ok { "" } else { " (unexpected)" }
    );
    (outcome(generic_ok && printed_ok, detail), printed)
}

fn ledger(extra: &[(Rat, Rat, u32)]) -> Outcome {
    let mut cells = ScanConfig::new(Algebra::Contact, ints(&[0, 1, 2, 3]), (0, 8)).cells();
    cells.extend_from_slice(extra);
    let l = contact_ledger_for(&cells, 8).expect("ledger");
    let formulas_ok = l
        .formulas
        .iter()
        .all(|f| f.matches || f.corrected.is_some());
    let extra_ledgered = extra.iter().all(|(a, b, n)| {
        l.cells
            .iter()
            .any(|c| &c.mu1 == a && &c.mu2 == b && c.level == *n)
    });
    let mismatched: Vec<&str> = l
        .formulas
        .iter()
        .filter(|f| !f.matches)
        .map(|f| f.formula.as_str())
        .collect();
    outcome(
        !l.is_empty() && formulas_ok && l.corrections_complete && extra_ledgered,
        format!(
            "{} cells checked, {} discrepant cells with corrected data, formula mismatches {:?}, corrections complete: {}",
            l.cells_checked,
            l.cells.len(),
            mismatched,
            l.corrections_complete
        ),
    )
}

fn identities() -> Outcome {
    let polys = monomials_up_to(3);
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok && !failed.contains(&name.to_string()) {
            failed.push(name.to_string());
        }
    };
    let par = |p: &SuperPoly| p.parity().expect("homogeneous");
    let sgn = |a: Parity, b: Parity| grc_core::supercalc::koszul(a, b);
    for f in &polys {
        check("D_th^2 = -d_t", d_theta(&d_theta(f)) == -f.d_even());
        for g in &polys {
            let (pf, pg) = (par(f), par(g));
            check(
                "supercommutativity",
                spoly_mul(f, g) == spoly_mul(g, f).scale(&sgn(pf, pg)),
            );
            let fg = spoly_mul(f, g);
            check(
                "Leibniz d_t",
                fg.d_even() == &spoly_mul(&f.d_even(), g) + &spoly_mul(f, &g.d_even()),
            );
            check(
                "Leibniz d_th",
                fg.d_odd()
                    == &spoly_mul(&f.d_odd(), g)
                        + &spoly_mul(f, &g.d_odd()).scale(&sgn(pf, Parity::Odd)),
            );
            let fg_b = contact_bracket(f, g).expect("bracket");
            check(
                "contact skew",
                fg_b == contact_bracket(g, f).expect("bracket").scale(&-sgn(pf, pg)),
            );
            for h in &polys {
                let ph = par(h);
                let cyc = |a: &SuperPoly, b: &SuperPoly, c: &SuperPoly, pa: Parity, pc: Parity| {
                    contact_bracket(a, &contact_bracket(b, c).unwrap())
                        .unwrap()
                        .scale(&sgn(pa, pc))
                };
                let sum = &(&cyc(f, g, h, pf, ph) + &cyc(g, h, f, pg, pf)) + &cyc(h, f, g, ph, pg);
                check("contact Jacobi", sum.is_zero());
            }
        }
    }
    let deg6 = monomials_up_to(6);
    for f in &deg6 {
        for g in &deg6 {
            let lhs = vfield_bracket(&contact_field(f).unwrap(), &contact_field(g).unwrap());
            check(
                "[K_f,K_g] = K_{f,g}",
                lhs == contact_field(&contact_bracket(f, g).unwrap()).unwrap(),
            );
        }
    }
    let fields: Vec<VField> = polys
        .iter()
        .flat_map(|p| {
            [
                VField::new(p.clone(), SuperPoly::zero()),
                VField::new(SuperPoly::zero(), p.clone()),
            ]
        })
        .collect();
    for w in [rat(-1, 2), int(0), rat(3, 5)] {
        for x in &fields {
            for y in &fields {
                let s = sgn(x.parity().unwrap(), y.parity().unwrap());
                for f in &polys {
                    let d = Density::new(f.clone(), w.clone());
                    let xy = lie_derivative(x, &lie_derivative(y, &d).unwrap()).unwrap();
                    let yx = lie_derivative(y, &lie_derivative(x, &d).unwrap()).unwrap();
                    let br = lie_derivative(&vfield_bracket(x, y), &d).unwrap();
                    check(
                        "[L_X,L_Y] = L_[X,Y]",
                        &xy.coefficient - &yx.coefficient.scale(&s) == br.coefficient,
                    );
                }
            }
        }
    }
    let (m1, m2) = (rat(2, 3), rat(-7, 4));
    for n in 0..5 {
        for m in level_basis(Algebra::Contact, n) {
            let v = ModVec::basis(Algebra::Contact, m1.clone(), m2.clone(), m);
            let kth = AlgElem::k(SuperPoly::th());
            let sq = act_element(&kth, &act_element(&kth, &v).unwrap()).unwrap();
            let half_k1 = act_element(&AlgElem::k(SuperPoly::one()), &v)
                .unwrap()
                .scale(&rat(1, 2));
            check("K_th^2 = K_1/2", sq == half_k1);
        }
    }
    let sx = RaiserId::XPlus.element().bracket(&RaiserId::SXi.element());
    check("s_x = [X+, s_xi]", sx == RaiserId::SX.element());
    for (a, b, n) in [
        (int(0), int(0), 2),
        (int(2), int(0), 3),
        (int(4), int(2), 4),
        (int(1), int(3), 2),
    ] {
        let sp = singular_space(Algebra::Vect, &a, &b, n).unwrap();
        for v in sp.even.iter().chain(&sp.odd) {
            check(
                "s_x kills singular vectors",
                grc_core::induced::raise(RaiserId::SX, v).unwrap().is_zero(),
            );
        }
    }
    outcome(failed.is_empty(), format!("failed identities: {failed:?}"))
}

fn gl11_cases() -> Outcome {
    let mut fails = Vec::new();
    for l in sample_lambdas() {
        let (mu, rho) = (rat(1, 3), int(2));
        for sigma in [l.clone() * int(2), rat(3, 2) - &l] {
            if sigma.is_zero() || (&l + &sigma).is_zero() {
                continue;
            }
            if !matches!(tensor_case(&l, &mu, &sigma, &rho), CaseId::CaseIii { .. }) {
                fails.push(format!("case at λ={l}, σ={sigma}"));
            }
            let rays = level1_highest(&l, &mu, &sigma, &rho);
            let want = -&sigma / &l;
            if rays.len() != 1 || rays[0].0 != want * &rays[0].1 {
                fails.push(format!("ray at λ={l}, σ={sigma}: {rays:?}"));
            }
        }
        if !matches!(
            tensor_case(&l, &mu, &-l.clone(), &rho),
            CaseId::CaseIv { .. }
        ) {
            fails.push(format!("case iv at λ={l}"));
        }
        for a in arrow_identities(&l, &mu, &rho) {
            if !a.holds {
                fails.push(format!("{} at λ={l}", a.identity));
            }
        }
    }
    outcome(fails.is_empty(), format!("5 sampled λ; failures {fails:?}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_grc"))
            .args([
                "classify",
                "--algebra",
                "vect11",
                "--mu-list",
                "0,1/2,2,4",
                "--orders",
                "1..4",
                "--spot-check",
                "3",
                "--seed",
                "7",
                "--format",
                "csv",
                "--out",
            ])
            .arg(&out)
            .output()
            .expect("run grc");
        (
            status.status.success(),
            std::fs::read(&out).unwrap_or_default(),
        )
    };
    let (ok1, a) = run("a.csv");
    let (ok2, b) = run("b.csv");
    outcome(
        ok1 && ok2 && !a.is_empty() && a == b,
        format!("two runs, {} bytes each, identical: {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let (c6, printed_locus) = contact_generic();
    let results: Vec<(u32, Outcome)> = vec![
        (1, thmain()),
        (2, vect_closed_forms()),
        (3, bijection(Algebra::Vect, &[0, 1, 2, 4], 4)),
        (4, bijection(Algebra::Contact, &[0, 1, 2, 3], 8)),
        (5, ex1()),
        (6, c6),
        (7, ledger(&printed_locus)),
        (8, identities()),
        (9, gl11_cases()),
        (10, determinism()),
    ];
    println!("\nrunning acceptance criteria");
    for (i, o) in &results {
        println!(
            "criterion {i}: {} - {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let passed = |i: u32| results.iter().find(|r| r.0 == i).is_some_and(|r| r.1.pass);
    let mut bad: Vec<u32> = [1, 2, 3, 4, 5, 7, 8, 9, 10]
        .into_iter()
        .filter(|&i| !passed(i))
        .collect();
    // A failure of 6 is acceptable only when the ledger records it.
    if !passed(6) && !passed(7) {
        bad.push(6);
    }
    let accepted = results.iter().filter(|r| r.1.pass).count();
    if bad.is_empty() {
        println!("acceptance: ok. {accepted} of 10 criteria pass; failures are ledgered\n");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED. unacceptable criteria {bad:?}\n");
        ExitCode::FAILURE
    }
}
