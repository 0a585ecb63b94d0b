//! Bilinear differential operators read off from singular vectors, and
//! the brute-force equivariance oracle that certifies them.
//!
//! A lowering monomial on each factor becomes a constant-coefficient
//! operator: for `k(1|1)`, `(K₁)^i (K_θ)^ε ↦ (κ∂_t)^i (σD_θ)^ε`; for
//! `vect(1|1)`, `∂^k δ^ε ↦ (κ∂)^k (σδ)^ε`. A tensor monomial `A ⊗ B`
//! becomes `(φ, ψ) ↦ ± A(φ)·B(ψ)`, the sign being the Koszul sign of `B`
//! passing `φ` when [`Convention::koszul`] is set. The constants are not
//! assumed: [`calibrate_convention`] tries each candidate on reference
//! cells and keeps those for which exact weights exist, and
//! [`frozen_convention`] records the winner, which the test-suite
//! re-derives.
//!
//! For `vect(1|1)` the values are not densities: the singular vector `v`
//! generates a two-dimensional `gl(1|1)`-module `span(v, X₋v)`, and the
//! operator has one component per basis vector, valued in tensor fields
//! whose fiber representation is solved for exactly.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{GrcError, Result};
use crate::induced::{act_element, raise, AlgElem, Algebra, ModVec, PbwMonomial};
use crate::linalg;
use crate::rat::{fmt_rat, int, rat, Rat};
use crate::supercalc::{
    contact_field, d_theta, koszul, lie_derivative, lie_derivative_tensor, monomials_up_to, Coords,
    Density, Gl11Basis, Gl11Rep, Mono, Parity, SuperPoly, TensorField, VField,
};

/// Scalars of the monomial-to-operator dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    #[serde(with = "crate::rat::serde_rat")]
    pub kappa: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    pub sigma: Rat,
    pub koszul: bool,
}

impl Convention {
    pub fn new(kappa: Rat, sigma: Rat, koszul: bool) -> Self {
        Convention {
            kappa,
            sigma,
            koszul,
        }
    }

    /// Candidates tried by [`calibrate_convention`], in order.
    pub fn candidates(algebra: Algebra) -> Vec<Convention> {
        let kappas = match algebra {
            Algebra::Contact => vec![int(-2), int(2), int(-1), int(1), rat(-1, 2), rat(1, 2)],
            Algebra::Vect => vec![int(-1), int(1)],
        };
        let mut out = Vec::new();
        for koszul in [true, false] {
            for k in &kappas {
                for s in [int(1), int(-1)] {
                    out.push(Convention::new(k.clone(), s, koszul));
                }
            }
        }
        out
    }
}

/// The dictionary in force. `κ = -2` for `k(1|1)` is what `K_θ² = ½K₁`
/// and `D_θ² = -∂_t` force. For `vect(1|1)` every singular vector has a
/// fixed number of `∂` and of `δ` in each term, so only the Koszul flag
/// matters there.
pub fn frozen_convention(algebra: Algebra) -> Convention {
    match algebra {
        Algebra::Contact => Convention::new(int(-2), int(1), true),
        Algebra::Vect => Convention::new(int(-1), int(1), true),
    }
}

/// Density weights as affine functions of the module weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDictionary {
    #[serde(with = "crate::rat::serde_rat")]
    pub slope: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    pub intercept: Rat,
}

impl WeightDictionary {
    pub fn source(&self, mu: &Rat) -> Rat {
        &self.slope * mu + &self.intercept
    }
}

/// `λᵢ = -μᵢ` for `k(1|1)`; `λᵢ = -μᵢ/2` for `vect(1|1)`, where the
/// generator has `H₁ = μ/2`. [`fit_dictionary`] re-derives both.
pub fn frozen_dictionary(algebra: Algebra) -> WeightDictionary {
    match algebra {
        Algebra::Contact => WeightDictionary {
            slope: int(-1),
            intercept: Rat::zero(),
        },
        Algebra::Vect => WeightDictionary {
            slope: rat(-1, 2),
            intercept: Rat::zero(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinTerm {
    pub left: PbwMonomial,
    pub right: PbwMonomial,
    #[serde(with = "crate::rat::serde_rat")]
    pub coeff: Rat,
}

fn terms_of(v: &ModVec) -> Vec<BilinTerm> {
    v.terms
        .iter()
        .map(|(m, c)| BilinTerm {
            left: m.left,
            right: m.right,
            coeff: c.clone(),
        })
        .collect()
}

/// Where the operator takes values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `F_λ`.
    Density(Rat),
    /// Tensor fields with this fiber.
    Fiber(Gl11Rep),
}

/// A bilinear operator `F_{λ₁} × F_{λ₂} → target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinOp {
    pub algebra: Algebra,
    pub level: u32,
    pub parity: Parity,
    /// One list of terms per fiber basis vector of the target.
    pub components: Vec<Vec<BilinTerm>>,
    pub convention: Convention,
    pub lambda1: Rat,
    pub lambda2: Rat,
    pub target: Target,
}

fn apply_monomial(algebra: Algebra, conv: &Convention, m: PbwMonomial, f: &SuperPoly) -> SuperPoly {
    let mut g = f.clone();
    for _ in 0..m.even {
        g = g.d_even().scale(&conv.kappa);
    }
    if m.odd {
        g = match algebra {
            Algebra::Contact => d_theta(&g),
            Algebra::Vect => g.d_odd(),
        }
        .scale(&conv.sigma);
    }
    g
}

fn apply_terms(
    algebra: Algebra,
    conv: &Convention,
    terms: &[BilinTerm],
    phi: &SuperPoly,
    psi: &SuperPoly,
) -> SuperPoly {
    let (pe, po) = phi.split_parity();
    let mut acc = SuperPoly::zero();
    for (part, p) in [(pe, Parity::Even), (po, Parity::Odd)] {
        if part.is_zero() {
            continue;
        }
        for t in terms {
            let l = apply_monomial(algebra, conv, t.left, &part);
            if l.is_zero() {
                continue;
            }
            let r = apply_monomial(algebra, conv, t.right, psi);
            let mut c = t.coeff.clone();
            if conv.koszul {
                c *= koszul(t.right.parity(), p);
            }
            acc = &acc + &(&l * &r).scale(&c);
        }
    }
    acc
}

/// Value of an operator on a pair of densities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketValue {
    Density(Density),
    Field {
        components: TensorField,
        fiber: Gl11Rep,
    },
}

impl BilinOp {
    pub fn component_values(&self, phi: &SuperPoly, psi: &SuperPoly) -> Vec<SuperPoly> {
        self.components
            .iter()
            .map(|terms| apply_terms(self.algebra, &self.convention, terms, phi, psi))
            .collect()
    }

    pub fn target_weight(&self) -> Option<&Rat> {
        match &self.target {
            Target::Density(l) => Some(l),
            Target::Fiber(_) => None,
        }
    }

    pub fn coords(&self) -> Coords {
        match self.algebra {
            Algebra::Contact => Coords::Contact,
            Algebra::Vect => Coords::Vect,
        }
    }

    /// Human-readable formula; `(-1)^|f|` marks Koszul signs.
    pub fn formula(&self) -> String {
        let names = |m: PbwMonomial, arg: &str| -> String {
            let (d, odd) = match self.algebra {
                Algebra::Contact => ("d_t", "Dth"),
                Algebra::Vect => ("d_x", "d_xi"),
            };
            let inner = match m.even {
                0 => arg.to_string(),
                1 => format!("{d}({arg})"),
                k => format!("{d}^{k}({arg})"),
            };
            if m.odd {
                format!("{odd}({inner})")
            } else {
                inner
            }
        };
        let mut comps = Vec::new();
        for terms in &self.components {
            let mut parts = Vec::new();
            for t in terms {
                let mut c = t.coeff.clone();
                for _ in 0..t.left.even + t.right.even {
                    c *= &self.convention.kappa;
                }
                for _ in 0..u32::from(t.left.odd) + u32::from(t.right.odd) {
                    c *= &self.convention.sigma;
                }
                let sign = if self.convention.koszul && t.right.odd {
                    "(-1)^|f|*"
                } else {
                    ""
                };
                parts.push(format!(
                    "({})*{sign}{}*{}",
                    fmt_rat(&c),
                    names(t.left, "f"),
                    names(t.right, "g")
                ));
            }
            comps.push(if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            });
        }
        if comps.len() == 1 {
            comps.pop().unwrap_or_default()
        } else {
            comps
                .iter()
                .enumerate()
                .map(|(i, c)| format!("[w{}] {c}", i + 1))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let target = match &self.target {
            Target::Density(l) => json!({"kind": "density", "weight": fmt_rat(l)}),
            Target::Fiber(rep) => {
                let mat = |m: &Vec<Vec<Rat>>| -> Vec<Vec<String>> {
                    m.iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
                };
                json!({
                    "kind": "fiber",
                    "h1": mat(&rep.h1), "h2": mat(&rep.h2),
                    "x_minus": mat(&rep.x_minus), "x_plus": mat(&rep.x_plus),
                })
            }
        };
        json!({
            "algebra": self.algebra,
            "level": self.level,
            "parity": self.parity,
            "lambda1": fmt_rat(&self.lambda1),
            "lambda2": fmt_rat(&self.lambda2),
            "target": target,
            "convention": self.convention,
            "components": self.components,
            "formula": self.formula(),
        })
    }
}

impl fmt::Display for BilinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

/// `[v]` for `k(1|1)`, `[v, X₋v]` for `vect(1|1)`.
pub fn operator_components(v: &ModVec) -> Result<Vec<ModVec>> {
    match v.algebra {
        Algebra::Contact => Ok(vec![v.clone()]),
        Algebra::Vect => {
            let xm = act_element(&AlgElem::gl11(Gl11Basis::XMinus), v)?;
            Ok(vec![v.clone(), xm])
        }
    }
}

pub fn is_singular(v: &ModVec) -> Result<bool> {
    for &r in v.algebra.classification_raisers() {
        if !raise(r, v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The operator attached to a singular vector under the frozen
/// conventions, with source weights from the frozen dictionary and the
/// target solved for exactly.
pub fn bracket_from_singular(v: &ModVec) -> Result<BilinOp> {
    if v.is_zero() || !is_singular(v)? {
        return Err(GrcError::NotSingular(v.to_string()));
    }
    let (level, parity) = v.require_homogeneous()?;
    let conv = frozen_convention(v.algebra);
    let dict = frozen_dictionary(v.algebra);
    let l1 = dict.source(&v.mu1);
    let l2 = dict.source(&v.mu2);
    let comps = operator_components(v)?;
    let shape = Shape {
        algebra: v.algebra,
        level,
        parity,
        components: comps.iter().map(terms_of).collect(),
        convention: conv,
    };
    let sol = solve_weights(
        &shape,
        Some((l1.clone(), l2.clone())),
        Subalgebra::classifying(v.algebra),
        level + 2,
    )?;
    let target = sol.target.ok_or_else(|| {
        GrcError::NoConsistentWeight(format!("no target makes the bracket of {v} equivariant"))
    })?;
    Ok(shape.into_op(l1, l2, target))
}

/// Operator shape before weights are attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub algebra: Algebra,
    pub level: u32,
    pub parity: Parity,
    pub components: Vec<Vec<BilinTerm>>,
    pub convention: Convention,
}

impl Shape {
    pub fn from_vector(v: &ModVec, convention: Convention) -> Result<Shape> {
        let (level, parity) = v.require_homogeneous()?;
        Ok(Shape {
            algebra: v.algebra,
            level,
            parity,
            components: operator_components(v)?.iter().map(terms_of).collect(),
            convention,
        })
    }

    pub fn into_op(self, lambda1: Rat, lambda2: Rat, target: Target) -> BilinOp {
        BilinOp {
            algebra: self.algebra,
            level: self.level,
            parity: self.parity,
            components: self.components,
            convention: self.convention,
            lambda1,
            lambda2,
            target,
        }
    }

    fn values(&self, phi: &SuperPoly, psi: &SuperPoly) -> Vec<SuperPoly> {
        self.components
            .iter()
            .map(|t| apply_terms(self.algebra, &self.convention, t, phi, psi))
            .collect()
    }
}

/// Applies the operator to two densities of the declared source weights.
pub fn apply_bracket(b: &BilinOp, d1: &Density, d2: &Density) -> Result<BracketValue> {
    d1.to_vvol().require_vvol(&b.lambda1)?;
    d2.to_vvol().require_vvol(&b.lambda2)?;
    let vals = b.component_values(&d1.coefficient, &d2.coefficient);
    Ok(match &b.target {
        Target::Density(l) => BracketValue::Density(Density::new(vals[0].clone(), l.clone())),
        Target::Fiber(rep) => BracketValue::Field {
            components: TensorField { components: vals },
            fiber: rep.clone(),
        },
    })
}

/// The first-order operator `(f, g) ↦ a·D_θ(f)·g + b·(-1)^{p(f)} f·D_θ(g)`
/// on `F₀ × F₀`, valued in `F₁`.
pub fn ex1_bracket(a: &Rat, b: &Rat) -> Result<BilinOp> {
    if a.is_zero() && b.is_zero() {
        return Err(GrcError::ZeroParameters);
    }
    let conv = frozen_convention(Algebra::Contact);
    let mut terms = Vec::new();
    let gen = PbwMonomial::GEN;
    let kth = PbwMonomial::new(0, true);
    if !a.is_zero() {
        terms.push(BilinTerm {
            left: kth,
            right: gen,
            coeff: a / &conv.sigma,
        });
    }
    if !b.is_zero() {
        terms.push(BilinTerm {
            left: gen,
            right: kth,
            coeff: b / &conv.sigma,
        });
    }
    Ok(BilinOp {
        algebra: Algebra::Contact,
        level: 1,
        parity: Parity::Odd,
        components: vec![terms],
        convention: conv,
        lambda1: Rat::zero(),
        lambda2: Rat::zero(),
        target: Target::Density(Rat::one()),
    })
}

// ---------------------------------------------------------------------------
// The oracle.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subalgebra {
    Osp12,
    Pgl21,
    #[serde(rename = "k11-full")]
    K11Full,
    #[serde(rename = "vect11-full")]
    Vect11Full,
}

impl Subalgebra {
    pub fn parse(s: &str) -> Result<Subalgebra> {
        match s {
            "osp12" => Ok(Subalgebra::Osp12),
            "pgl21" => Ok(Subalgebra::Pgl21),
            "k11-full" => Ok(Subalgebra::K11Full),
            "vect11-full" => Ok(Subalgebra::Vect11Full),
            _ => Err(GrcError::Parse(format!("unknown subalgebra {s:?}"))),
        }
    }

    /// The subalgebra whose raisers define singular vectors.
    pub fn classifying(algebra: Algebra) -> Subalgebra {
        match algebra {
            Algebra::Contact => Subalgebra::Osp12,
            Algebra::Vect => Subalgebra::Pgl21,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subalgebra::Osp12 => "osp12",
            Subalgebra::Pgl21 => "pgl21",
            Subalgebra::K11Full => "k11-full",
            Subalgebra::Vect11Full => "vect11-full",
        }
    }

    pub fn algebra(self) -> Algebra {
        match self {
            Subalgebra::Osp12 | Subalgebra::K11Full => Algebra::Contact,
            Subalgebra::Pgl21 | Subalgebra::Vect11Full => Algebra::Vect,
        }
    }

    /// Named generating fields; the full algebras are truncated at
    /// coefficient degree `degree_bound`.
    pub fn generators(self, degree_bound: u32) -> Vec<(String, VField)> {
        let contact = |f: SuperPoly| {
            let name = format!("K[{}]", f.display_with(Coords::Contact));
            (name, contact_field(&f).expect("monomials are homogeneous"))
        };
        match self {
            Subalgebra::Osp12 => [
                SuperPoly::one(),
                SuperPoly::th(),
                SuperPoly::t(),
                SuperPoly::mono(1, true),
            ]
            .into_iter()
            .map(contact)
            .collect(),
            Subalgebra::K11Full => (0..=degree_bound)
                .flat_map(|k| [SuperPoly::mono(k, false), SuperPoly::mono(k, true)])
                .filter(|f| {
                    f.terms()
                        .all(|(m, _)| m.even + u32::from(m.odd) <= degree_bound)
                })
                .map(contact)
                .collect(),
            Subalgebra::Pgl21 => {
                let x = SuperPoly::t();
                let xi = SuperPoly::th();
                let mut out = vec![
                    ("d".to_string(), VField::d_even()),
                    ("delta".to_string(), VField::d_odd()),
                ];
                for e in Gl11Basis::ALL {
                    out.push((format!("{e:?}"), e.as_vfield()));
                }
                out.push((
                    "s_x".into(),
                    VField::new(SuperPoly::mono(2, false), &x * &xi),
                ));
                out.push((
                    "s_xi".into(),
                    VField::new(SuperPoly::mono(1, true), SuperPoly::zero()),
                ));
                out
            }
            Subalgebra::Vect11Full => {
                let mut out = Vec::new();
                for f in monomials_up_to(degree_bound) {
                    let name = f.display_with(Coords::Vect);
                    out.push((
                        format!("({name})*d_x"),
                        VField::new(f.clone(), SuperPoly::zero()),
                    ));
                    out.push((format!("({name})*d_xi"), VField::new(SuperPoly::zero(), f)));
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleFailure {
    pub generator: String,
    pub phi: String,
    pub psi: String,
    pub defect: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub subalgebra: Subalgebra,
    pub degree_bound: u32,
    pub checks: usize,
    pub failures: Vec<OracleFailure>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `(-1)^{p(f)} f`.
fn parity_twist(f: &SuperPoly) -> SuperPoly {
    let (e, o) = f.split_parity();
    &e - &o
}

/// Values are `Σ w_c ⊗ B_c(φ,ψ)`, fiber on the left; [`lie_derivative_tensor`]
/// works with `f ⊗ w`, so odd fiber components are twisted on the way in
/// and out.
fn lie_target(x: &VField, target: &Target, vals: &[SuperPoly]) -> Result<Vec<SuperPoly>> {
    Ok(match target {
        Target::Density(l) => {
            vec![lie_derivative(x, &Density::new(vals[0].clone(), l.clone()))?.coefficient]
        }
        Target::Fiber(rep) => {
            let twist = |c: usize, f: &SuperPoly| {
                if rep.parities[c] == Parity::Odd {
                    parity_twist(f)
                } else {
                    f.clone()
                }
            };
            let tw: Vec<SuperPoly> = vals.iter().enumerate().map(|(c, f)| twist(c, f)).collect();
            lie_derivative_tensor(x, rep, &TensorField { components: tw })?
                .components
                .iter()
                .enumerate()
                .map(|(c, f)| twist(c, f))
                .collect()
        }
    })
}

/// `L_X B(φ,ψ) - (-1)^{p(X)p(B)} [B(L_Xφ, ψ) + (-1)^{p(X)p(φ)} B(φ, L_Xψ)]`.
fn defect(
    b: &BilinOp,
    x: &VField,
    px: Parity,
    phi: &SuperPoly,
    psi: &SuperPoly,
) -> Result<Vec<SuperPoly>> {
    let pphi = phi.require_parity("density")?;
    let lhs = lie_target(x, &b.target, &b.component_values(phi, psi))?;
    let lphi = lie_derivative(x, &Density::new(phi.clone(), b.lambda1.clone()))?.coefficient;
    let lpsi = lie_derivative(x, &Density::new(psi.clone(), b.lambda2.clone()))?.coefficient;
    let s_b = koszul(px, b.parity);
    let s_phi = koszul(px, pphi);
    let r1 = b.component_values(&lphi, psi);
    let r2 = b.component_values(phi, &lpsi);
    Ok(lhs
        .iter()
        .zip(r1.iter().zip(&r2))
        .map(|(l, (a, c))| l - &(a + &c.scale(&s_phi)).scale(&s_b))
        .collect())
}

/// Checks equivariance on every generator and every pair of monomial
/// densities `t^k θ^ε`, `k ≤ degree_bound`.
pub fn equivariance_report(
    b: &BilinOp,
    sub: Subalgebra,
    degree_bound: u32,
) -> Result<EquivarianceReport> {
    if sub.algebra() != b.algebra {
        return Err(GrcError::SubalgebraMismatch {
            subalgebra: sub.name().to_string(),
            algebra: b.algebra.to_string(),
        });
    }
    if degree_bound < b.level + 2 {
        return Err(GrcError::DegreeBoundTooSmall {
            bound: degree_bound,
            needed: b.level + 2,
        });
    }
    let gens = sub.generators(degree_bound);
    let monos = monomials_up_to(degree_bound);
    let coords = b.coords();
    let jobs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|g| (0..monos.len()).map(move |i| (g, i)))
        .collect();
    let per_job: Vec<Result<Vec<OracleFailure>>> = jobs
        .par_iter()
        .map(|&(g, i)| {
            let (name, x) = &gens[g];
            let px = x.require_parity()?;
            let phi = &monos[i];
            let mut fails = Vec::new();
            for psi in &monos {
                let d = defect(b, x, px, phi, psi)?;
                if d.iter().any(|p| !p.is_zero()) {
                    fails.push(OracleFailure {
                        generator: name.clone(),
                        phi: phi.display_with(coords),
                        psi: psi.display_with(coords),
                        defect: d.iter().map(|p| p.display_with(coords)).collect(),
                    });
                }
            }
            Ok(fails)
        })
        .collect();
    let mut failures = Vec::new();
    for r in per_job {
        failures.extend(r?);
    }
    Ok(EquivarianceReport {
        subalgebra: sub,
        degree_bound,
        checks: jobs.len() * monos.len(),
        failures,
    })
}

// ---------------------------------------------------------------------------
// Weight calibration by exact linear solving.

/// Result of solving the oracle equations for the unknown weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSolution {
    pub lambda1: Option<Rat>,
    pub lambda2: Option<Rat>,
    /// `None` when the equations are inconsistent.
    pub target: Option<Target>,
    /// Dimension of the solution set (0 = unique).
    pub free_directions: usize,
}

impl WeightSolution {
    pub fn consistent(&self) -> bool {
        self.target.is_some()
    }
}

fn fiber_unknowns(dim: usize) -> usize {
    4 * dim * dim
}

fn rep_from(u: &[Rat], dim: usize) -> Gl11Rep {
    let block = |k: usize| -> Vec<Vec<Rat>> {
        (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| u[k * dim * dim + j * dim + i].clone())
                    .collect()
            })
            .collect()
    };
    Gl11Rep {
        parities: (0..dim)
            .map(|j| {
                if j % 2 == 0 {
                    Parity::Even
                } else {
                    Parity::Odd
                }
            })
            .collect(),
        h1: block(0),
        h2: block(1),
        x_minus: block(2),
        x_plus: block(3),
    }
}

fn push_rows(rows: &mut Vec<Vec<Rat>>, pieces: &[Vec<SuperPoly>], base: &[SuperPoly]) {
    // pieces[k][c]: coefficient polynomial of unknown k in component c
    for c in 0..base.len() {
        let mut monos: Vec<Mono> = base[c].terms().map(|(m, _)| *m).collect();
        for p in pieces {
            monos.extend(p[c].terms().map(|(m, _)| *m));
        }
        monos.sort();
        monos.dedup();
        for m in monos {
            let mut row: Vec<Rat> = pieces.iter().map(|p| p[c].coeff(m)).collect();
            row.push(-base[c].coeff(m));
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
}

/// Solves the equivariance equations under `sub` for the source weights
/// (unless fixed) and the target (density weight, or fiber matrices when
/// the shape has several components).
pub fn solve_weights(
    shape: &Shape,
    sources: Option<(Rat, Rat)>,
    sub: Subalgebra,
    degree_bound: u32,
) -> Result<WeightSolution> {
    solve_weights_with(shape, sources, &sub.generators(degree_bound), degree_bound)
}

/// [`solve_weights`] for an explicit list of generators.
pub fn solve_weights_with(
    shape: &Shape,
    sources: Option<(Rat, Rat)>,
    gens: &[(String, VField)],
    degree_bound: u32,
) -> Result<WeightSolution> {
    let ncomp = shape.components.len();
    let n_src = if sources.is_some() { 0 } else { 2 };
    let n_tgt = if ncomp == 1 { 1 } else { fiber_unknowns(ncomp) };
    let k = n_src + n_tgt;
    let monos = monomials_up_to(degree_bound);
    let zero_target = if ncomp == 1 {
        Target::Density(Rat::zero())
    } else {
        Target::Fiber(rep_from(&vec![Rat::zero(); n_tgt], ncomp))
    };
    let unit_target = |j: usize| -> Target {
        if ncomp == 1 {
            Target::Density(Rat::one())
        } else {
            let mut u = vec![Rat::zero(); n_tgt];
            u[j] = Rat::one();
            Target::Fiber(rep_from(&u, ncomp))
        }
    };
    let (l1, l2) = sources.clone().unwrap_or((Rat::zero(), Rat::zero()));
    let jobs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|g| (0..monos.len()).map(move |i| (g, i)))
        .collect();
    let chunks: Vec<Result<Vec<Vec<Rat>>>> = jobs
        .par_iter()
        .map(|&(g, i)| {
            let x = &gens[g].1;
            let px = x.require_parity()?;
            let phi = &monos[i];
            let pphi = phi.require_parity("density")?;
            let s_b = koszul(px, shape.parity);
            let s_phi = koszul(px, pphi);
            let mut rows = Vec::new();
            for psi in &monos {
                let vals = shape.values(phi, psi);
                let lhs0 = lie_target(x, &zero_target, &vals)?;
                let rhs = |a: &Rat, b: &Rat| -> Result<Vec<SuperPoly>> {
                    let lphi =
                        lie_derivative(x, &Density::new(phi.clone(), a.clone()))?.coefficient;
                    let lpsi =
                        lie_derivative(x, &Density::new(psi.clone(), b.clone()))?.coefficient;
                    let r1 = shape.values(&lphi, psi);
                    let r2 = shape.values(phi, &lpsi);
                    Ok(r1
                        .iter()
                        .zip(&r2)
                        .map(|(p, q)| (p + &q.scale(&s_phi)).scale(&s_b))
                        .collect())
                };
                let rhs0 = rhs(&l1, &l2)?;
                let base: Vec<SuperPoly> = lhs0.iter().zip(&rhs0).map(|(a, b)| a - b).collect();
                let mut pieces = Vec::with_capacity(k);
                if sources.is_none() {
                    let r_a = rhs(&Rat::one(), &Rat::zero())?;
                    let r_b = rhs(&Rat::zero(), &Rat::one())?;
                    pieces.push(r_a.iter().zip(&rhs0).map(|(a, b)| b - a).collect());
                    pieces.push(r_b.iter().zip(&rhs0).map(|(a, b)| b - a).collect());
                }
                for j in 0..n_tgt {
                    let l = lie_target(x, &unit_target(j), &vals)?;
                    pieces.push(l.iter().zip(&lhs0).map(|(a, b)| a - b).collect());
                }
                push_rows(&mut rows, &pieces, &base);
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    let pivots = linalg::rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return Ok(WeightSolution {
            lambda1: sources.as_ref().map(|s| s.0.clone()),
            lambda2: sources.as_ref().map(|s| s.1.clone()),
            target: None,
            free_directions: 0,
        });
    }
    let mut u = vec![Rat::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        u[p] = rows[r][k].clone();
    }
    let (lambda1, lambda2) = match sources {
        Some((a, b)) => (a, b),
        None => (u[0].clone(), u[1].clone()),
    };
    let t = &u[n_src..];
    let target = if ncomp == 1 {
        Target::Density(t[0].clone())
    } else {
        Target::Fiber(rep_from(t, ncomp))
    };
    Ok(WeightSolution {
        lambda1: Some(lambda1),
        lambda2: Some(lambda2),
        target: Some(target),
        free_directions: k - pivots.len(),
    })
}

/// Source and target weights for the bracket of `v` under `conv`,
/// solved jointly from the oracle equations of the classifying subalgebra.
pub fn calibrate_weights(v: &ModVec, conv: &Convention) -> Result<WeightSolution> {
    let shape = Shape::from_vector(v, conv.clone())?;
    solve_weights(
        &shape,
        None,
        Subalgebra::classifying(v.algebra),
        shape.level + 2,
    )
}

/// Outcome of the convention search on a set of reference vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionCalibration {
    /// Candidates for which every reference vector admits exact weights.
    pub passing: Vec<Convention>,
    /// Source weights found for each reference vector under the first
    /// passing candidate.
    pub weights: Vec<(Rat, Rat, Rat, Rat)>,
}

/// Tries every candidate convention on the reference vectors.
pub fn calibrate_convention(
    algebra: Algebra,
    references: &[ModVec],
) -> Result<ConventionCalibration> {
    let mut passing = Vec::new();
    let mut weights = Vec::new();
    for conv in Convention::candidates(algebra) {
        let mut ok = true;
        let mut found = Vec::new();
        for v in references {
            let sol = calibrate_weights(v, &conv)?;
            if !sol.consistent() || sol.free_directions != 0 {
                ok = false;
                break;
            }
            found.push((
                v.mu1.clone(),
                v.mu2.clone(),
                sol.lambda1.unwrap_or_else(Rat::zero),
                sol.lambda2.unwrap_or_else(Rat::zero),
            ));
        }
        if ok {
            if passing.is_empty() {
                weights = found;
            }
            passing.push(conv);
        }
    }
    Ok(ConventionCalibration { passing, weights })
}

/// A raw vector's operator under the frozen conventions, with dictionary
/// source weights; the target is solved for and may not exist.
pub fn bracket_unchecked(v: &ModVec) -> Result<(Shape, WeightSolution)> {
    let shape = Shape::from_vector(v, frozen_convention(v.algebra))?;
    let dict = frozen_dictionary(v.algebra);
    let sources = (dict.source(&v.mu1), dict.source(&v.mu2));
    let sol = solve_weights(
        &shape,
        Some(sources),
        Subalgebra::classifying(v.algebra),
        shape.level + 2,
    )?;
    Ok((shape, sol))
}

/// The scaling generators: `K_t` for `k(1|1)`, `H₁, H₂` for `vect(1|1)`.
pub fn scaling_generators(algebra: Algebra) -> Vec<(String, VField)> {
    match algebra {
        Algebra::Contact => vec![(
            "K[t]".to_string(),
            contact_field(&SuperPoly::t()).expect("t is homogeneous"),
        )],
        Algebra::Vect => [Gl11Basis::H1, Gl11Basis::H2]
            .into_iter()
            .map(|e| (format!("{e:?}"), e.as_vfield()))
            .collect(),
    }
}

/// Target weight forced by the scaling generators alone, for fixed
/// source weights. For a density target this is `λ₁ + λ₂ + level`.
pub fn scaling_target(shape: &Shape, lambda1: &Rat, lambda2: &Rat) -> Result<WeightSolution> {
    solve_weights_with(
        shape,
        Some((lambda1.clone(), lambda2.clone())),
        &scaling_generators(shape.algebra),
        shape.level + 2,
    )
}

/// Fits the affine dictionary `λ = slope·μ + intercept` from the weights
/// calibrated on the given singular vectors (each must determine its
/// weights uniquely), and checks every sample against the fit.
pub fn fit_dictionary(samples: &[ModVec]) -> Result<WeightDictionary> {
    let conv = match samples.first() {
        Some(v) => frozen_convention(v.algebra),
        None => return Err(GrcError::NoConsistentWeight("no samples".into())),
    };
    let mut points: Vec<(Rat, Rat)> = Vec::new();
    for v in samples {
        let sol = calibrate_weights(v, &conv)?;
        if !sol.consistent() || sol.free_directions != 0 {
            return Err(GrcError::NoConsistentWeight(format!(
                "weights of {v} are not determined"
            )));
        }
        points.push((v.mu1.clone(), sol.lambda1.unwrap_or_else(Rat::zero)));
        points.push((v.mu2.clone(), sol.lambda2.unwrap_or_else(Rat::zero)));
    }
    let (x0, y0) = points[0].clone();
    let Some((x1, y1)) = points.iter().find(|(x, _)| *x != x0).cloned() else {
        return Err(GrcError::NoConsistentWeight(
            "all samples share one weight".into(),
        ));
    };
    let slope = (&y1 - &y0) / (&x1 - &x0);
    let intercept = &y0 - &slope * &x0;
    let dict = WeightDictionary { slope, intercept };
    for (x, y) in &points {
        if dict.source(x) != *y {
            return Err(GrcError::NoConsistentWeight(format!(
                "mu = {} gives lambda = {}, off the line through the first samples",
                fmt_rat(x),
                fmt_rat(y)
            )));
        }
    }
    Ok(dict)
}

/// Sector basis vectors extending the kernel to the whole sector.
pub fn complement_vectors(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    level: u32,
    sector: Parity,
) -> Result<Vec<ModVec>> {
    let basis = crate::singular::sector_basis(algebra, level, sector);
    let space = crate::singular::singular_space(algebra, mu1, mu2, level)?;
    let mut span: Vec<Vec<Rat>> = space
        .sector(sector)
        .iter()
        .map(|v| v.coords(&basis))
        .collect();
    let mut out = Vec::new();
    for m in &basis {
        let u = ModVec::basis(algebra, mu1.clone(), mu2.clone(), *m);
        let c = u.coords(&basis);
        if !linalg::in_span(&span, &c, basis.len()) {
            span.push(c);
            out.push(u);
        }
    }
    Ok(out)
}

/// Whether some choice of target makes the operator of `v` (frozen
/// convention, dictionary source weights) pass the classifying oracle.
pub fn admits_equivariant_target(v: &ModVec) -> Result<bool> {
    Ok(bracket_unchecked(v)?.1.consistent())
}
