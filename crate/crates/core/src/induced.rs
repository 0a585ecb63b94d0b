//! PBW realization of tensor products of induced modules and the action
//! of raising operators on them.
//!
//! An induced module `I(V) = U(g) ⊗_{U(g≥0)} V` over a one-dimensional
//! `g₀`-module is spanned by lowering monomials applied to a generator:
//! `(K₁)^i (K_θ)^ε v` for `k(1|1)` and `∂^k δ^ε v` for `vect(1|1)`. An
//! element `X` of `g` acts on such a monomial by commuting it to the right
//! with the algebra's own bracket (contact bracket of generating
//! functions, or the bracket of vector fields):
//!
//! `X·(Y·m) = [X, Y]·m + (-1)^{p(X)p(Y)} Y·(X·m)`
//!
//! until it reaches the generator, where `g>0` acts by zero and `g₀` by
//! the weight. Nothing here is copied from closed-form action tables; the
//! structure constants are the only input.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GrcError, Result};
use crate::rat::{int, rat, Rat};
use crate::supercalc::tensor::{decompose_linear, Gl11Basis};
use crate::supercalc::{contact_bracket, koszul, vfield_bracket, Mono, Parity, SuperPoly, VField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algebra {
    /// `k(1|1)`, classified under `osp(1|2)`.
    #[serde(rename = "k11")]
    Contact,
    /// `vect(1|1)`, classified under `pgl(2|1)`.
    #[serde(rename = "vect11")]
    Vect,
}

impl Algebra {
    pub fn name(self) -> &'static str {
        match self {
            Algebra::Contact => "k11",
            Algebra::Vect => "vect11",
        }
    }

    pub fn parse(s: &str) -> Result<Algebra> {
        match s {
            "k11" | "contact" => Ok(Algebra::Contact),
            "vect11" | "vect" => Ok(Algebra::Vect),
            _ => Err(GrcError::Parse(format!("unknown algebra {s:?}"))),
        }
    }

    /// Level contributed by one power of the even lowering generator.
    pub fn even_step(self) -> u32 {
        match self {
            Algebra::Contact => 2,
            Algebra::Vect => 1,
        }
    }

    /// The raisers whose joint kernel defines singular vectors.
    pub fn classification_raisers(self) -> &'static [RaiserId] {
        match self {
            Algebra::Contact => &[RaiserId::NablaPlus],
            Algebra::Vect => &[RaiserId::XPlus, RaiserId::SXi],
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(K₁)^even (K_θ)^odd` or `∂^even δ^odd` applied to the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PbwMonomial {
    pub even: u32,
    pub odd: bool,
}

impl PbwMonomial {
    pub const GEN: PbwMonomial = PbwMonomial {
        even: 0,
        odd: false,
    };

    pub fn new(even: u32, odd: bool) -> Self {
        PbwMonomial { even, odd }
    }

    pub fn level(self, algebra: Algebra) -> u32 {
        algebra.even_step() * self.even + u32::from(self.odd)
    }

    pub fn parity(self) -> Parity {
        if self.odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TensorMonomial {
    pub left: PbwMonomial,
    pub right: PbwMonomial,
}

impl TensorMonomial {
    pub fn new(i1: u32, e1: bool, i2: u32, e2: bool) -> Self {
        TensorMonomial {
            left: PbwMonomial::new(i1, e1),
            right: PbwMonomial::new(i2, e2),
        }
    }

    pub fn level(self, algebra: Algebra) -> u32 {
        self.left.level(algebra) + self.right.level(algebra)
    }

    pub fn parity(self) -> Parity {
        self.left.parity().add(self.right.parity())
    }

    pub fn display(self, algebra: Algebra) -> String {
        let side = |m: PbwMonomial, prime: &str, gen: &str| {
            let (e, o) = match algebra {
                Algebra::Contact => ("K1", "Kth"),
                Algebra::Vect => ("d", "delta"),
            };
            let mut parts = Vec::new();
            if m.even == 1 {
                parts.push(format!("{e}{prime}"));
            } else if m.even > 1 {
                parts.push(format!("{e}{prime}^{}", m.even));
            }
            if m.odd {
                parts.push(format!("{o}{prime}"));
            }
            parts.push(gen.to_string());
            parts.join("*")
        };
        format!(
            "{} (x) {}",
            side(self.left, "'", "v"),
            side(self.right, "''", "w")
        )
    }
}

/// All tensor monomials of total level `n`, in lexicographic order.
pub fn level_basis(algebra: Algebra, n: u32) -> Vec<TensorMonomial> {
    let step = algebra.even_step();
    let mut out = Vec::new();
    for i1 in 0..=n / step {
        for e1 in [false, true] {
            let l1 = step * i1 + u32::from(e1);
            if l1 > n {
                continue;
            }
            let rest = n - l1;
            for e2 in [false, true] {
                let r = rest.checked_sub(u32::from(e2));
                if let Some(r) = r {
                    if r % step == 0 {
                        out.push(TensorMonomial::new(i1, e1, r / step, e2));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// A finite combination of tensor monomials over `I(V₁) ⊗ I(V₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModVec {
    pub algebra: Algebra,
    pub mu1: Rat,
    pub mu2: Rat,
    pub terms: BTreeMap<TensorMonomial, Rat>,
}

impl ModVec {
    pub fn zero(algebra: Algebra, mu1: Rat, mu2: Rat) -> Self {
        ModVec {
            algebra,
            mu1,
            mu2,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(algebra: Algebra, mu1: Rat, mu2: Rat, m: TensorMonomial) -> Self {
        let mut v = Self::zero(algebra, mu1, mu2);
        v.add_term(m, Rat::one());
        v
    }

    pub fn from_coords(
        algebra: Algebra,
        mu1: Rat,
        mu2: Rat,
        basis: &[TensorMonomial],
        coords: &[Rat],
    ) -> Self {
        let mut v = Self::zero(algebra, mu1, mu2);
        for (m, c) in basis.iter().zip(coords) {
            v.add_term(*m, c.clone());
        }
        v
    }

    pub fn add_term(&mut self, m: TensorMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &TensorMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coords(&self, basis: &[TensorMonomial]) -> Vec<Rat> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn scale(&self, c: &Rat) -> ModVec {
        let mut out = ModVec::zero(self.algebra, self.mu1.clone(), self.mu2.clone());
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn add(&self, other: &ModVec) -> ModVec {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*m, v.clone());
        }
        out
    }

    /// `Some((level, parity))` when every term shares both.
    pub fn homogeneity(&self) -> Option<(u32, Parity)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let key = (first.level(self.algebra), first.parity());
        it.all(|m| (m.level(self.algebra), m.parity()) == key)
            .then_some(key)
    }

    pub fn require_homogeneous(&self) -> Result<(u32, Parity)> {
        self.homogeneity()
            .ok_or_else(|| GrcError::NotHomogeneous(self.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModVecJson::from(self)).expect("ModVec serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ModVec> {
        let j: ModVecJson =
            serde_json::from_value(v.clone()).map_err(|e| GrcError::Parse(e.to_string()))?;
        Ok(j.into())
    }
}

impl fmt::Display for ModVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*[{}]", m.display(self.algebra)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    i1: u32,
    e1: u8,
    i2: u32,
    e2: u8,
    #[serde(with = "crate::rat::serde_rat")]
    coeff: Rat,
}

#[derive(Serialize, Deserialize)]
struct ModVecJson {
    algebra: Algebra,
    #[serde(with = "crate::rat::serde_rat")]
    mu1: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    mu2: Rat,
    terms: Vec<TermJson>,
}

impl From<&ModVec> for ModVecJson {
    fn from(v: &ModVec) -> Self {
        ModVecJson {
            algebra: v.algebra,
            mu1: v.mu1.clone(),
            mu2: v.mu2.clone(),
            terms: v
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    i1: m.left.even,
                    e1: u8::from(m.left.odd),
                    i2: m.right.even,
                    e2: u8::from(m.right.odd),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }
}

impl From<ModVecJson> for ModVec {
    fn from(j: ModVecJson) -> Self {
        let mut v = ModVec::zero(j.algebra, j.mu1, j.mu2);
        for t in j.terms {
            v.add_term(
                TensorMonomial::new(t.i1, t.e1 != 0, t.i2, t.e2 != 0),
                t.coeff,
            );
        }
        v
    }
}

/// Named elements of the positive part used as raising operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RaiserId {
    /// `∇₊ = K_{tθ}`.
    NablaPlus,
    /// `X₊ = xδ`.
    XPlus,
    /// `s_ξ = xξ∂`.
    SXi,
    /// `s_x = x²∂ + xξδ`.
    SX,
    /// `K_{t²θ}`; diagnostic only.
    KT2Theta,
}

impl RaiserId {
    pub fn algebra(self) -> Algebra {
        match self {
            RaiserId::NablaPlus | RaiserId::KT2Theta => Algebra::Contact,
            RaiserId::XPlus | RaiserId::SXi | RaiserId::SX => Algebra::Vect,
        }
    }

    pub fn element(self) -> AlgElem {
        let x = SuperPoly::t;
        let xi = SuperPoly::th;
        match self {
            RaiserId::NablaPlus => AlgElem::Contact(SuperPoly::mono(1, true)),
            RaiserId::KT2Theta => AlgElem::Contact(SuperPoly::mono(2, true)),
            RaiserId::XPlus => AlgElem::Vect(VField::new(SuperPoly::zero(), x())),
            RaiserId::SXi => {
                AlgElem::Vect(VField::new(SuperPoly::mono(1, true), SuperPoly::zero()))
            }
            RaiserId::SX => AlgElem::Vect(VField::new(SuperPoly::mono(2, false), &x() * &xi())),
        }
    }

    /// Amount by which the raiser lowers the level.
    pub fn level_degree(self) -> u32 {
        match self {
            RaiserId::NablaPlus => 1,
            RaiserId::KT2Theta => 3,
            RaiserId::XPlus => 0,
            RaiserId::SXi | RaiserId::SX => 1,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            RaiserId::SX => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RaiserId::NablaPlus => "nabla-plus",
            RaiserId::XPlus => "x-plus",
            RaiserId::SXi => "s-xi",
            RaiserId::SX => "s-x",
            RaiserId::KT2Theta => "k-t2theta",
        }
    }
}

/// An element of `k(1|1)` (by generating function) or of `vect(1|1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgElem {
    Contact(SuperPoly),
    Vect(VField),
}

impl AlgElem {
    pub fn algebra(&self) -> Algebra {
        match self {
            AlgElem::Contact(_) => Algebra::Contact,
            AlgElem::Vect(_) => Algebra::Vect,
        }
    }

    pub fn k(f: SuperPoly) -> AlgElem {
        AlgElem::Contact(f)
    }

    pub fn gl11(e: Gl11Basis) -> AlgElem {
        AlgElem::Vect(e.as_vfield())
    }

    fn is_zero(&self) -> bool {
        match self {
            AlgElem::Contact(f) => f.is_zero(),
            AlgElem::Vect(x) => x.is_zero(),
        }
    }

    pub fn parity(&self) -> Result<Parity> {
        match self {
            AlgElem::Contact(f) => f.require_parity("generating function"),
            AlgElem::Vect(x) => x.require_parity(),
        }
    }

    /// Degree in the grading used for induction.
    pub fn degree(&self) -> Result<i64> {
        let d = match self {
            AlgElem::Contact(f) => f.homogeneous_degree(2, 1).map(|d| d as i64 - 2),
            AlgElem::Vect(x) => {
                let de = x.even.homogeneous_degree(1, 1);
                let dd = x.odd.homogeneous_degree(1, 1);
                match (de, dd) {
                    (Some(a), Some(b)) if a != b => None,
                    (Some(a), _) | (None, Some(a)) => Some(a as i64 - 1),
                    (None, None) => Some(0),
                }
            }
        };
        d.ok_or_else(|| GrcError::NotHomogeneous(format!("{self:?}")))
    }

    pub fn bracket(&self, other: &AlgElem) -> AlgElem {
        match (self, other) {
            (AlgElem::Contact(f), AlgElem::Contact(g)) => {
                AlgElem::Contact(contact_bracket(f, g).expect("homogeneous generating functions"))
            }
            (AlgElem::Vect(x), AlgElem::Vect(y)) => AlgElem::Vect(vfield_bracket(x, y)),
            _ => unreachable!("mixed algebras"),
        }
    }
}

type FactorVec = BTreeMap<PbwMonomial, Rat>;

fn add_into(acc: &mut FactorVec, m: PbwMonomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(m).or_insert_with(Rat::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&m);
    }
}

/// Lowering generators spelling a normal-ordered monomial, leftmost first.
fn word_of(algebra: Algebra, m: PbwMonomial) -> Vec<AlgElem> {
    let (even, odd) = match algebra {
        Algebra::Contact => (
            AlgElem::Contact(SuperPoly::one()),
            AlgElem::Contact(SuperPoly::th()),
        ),
        Algebra::Vect => (
            AlgElem::Vect(VField::d_even()),
            AlgElem::Vect(VField::d_odd()),
        ),
    };
    let mut w = vec![even; m.even as usize];
    if m.odd {
        w.push(odd);
    }
    w
}

/// Left multiplication by an element of `g₋` on a normal monomial.
fn lower_mul(elem: &AlgElem, m: PbwMonomial) -> FactorVec {
    let mut out = FactorVec::new();
    // (coefficient of the even generator, coefficient of the odd generator)
    let (ce, co) = match elem {
        // K_f with f = c·1 is c·K₁; f = c·θ gives c·K_θ.
        AlgElem::Contact(f) => (f.coeff(Mono::ONE), f.coeff(Mono::new(0, true))),
        AlgElem::Vect(x) => (x.even.coeff(Mono::ONE), x.odd.coeff(Mono::ONE)),
    };
    if !ce.is_zero() {
        add_into(&mut out, PbwMonomial::new(m.even + 1, m.odd), ce);
    }
    if !co.is_zero() {
        if !m.odd {
            add_into(&mut out, PbwMonomial::new(m.even, true), co);
        } else if elem.algebra() == Algebra::Contact {
            // K_θ² = ½[K_θ, K_θ] = ½K₁
            add_into(
                &mut out,
                PbwMonomial::new(m.even + 1, false),
                co * rat(1, 2),
            );
        }
        // δ² = 0
    }
    out
}

/// Scalar by which a degree-zero element acts on the generator.
fn g0_scalar(elem: &AlgElem, mu: &Rat) -> Rat {
    match elem {
        // g₀ = C·K_t with K_t v = μ v.
        AlgElem::Contact(f) => f.coeff(Mono::new(1, false)) * mu,
        // V^{0;μ}: H₁ = μ/2, H₂ = -μ/2, X± = 0.
        AlgElem::Vect(x) => {
            let half = mu * rat(1, 2);
            let mut acc = Rat::zero();
            for (e, c) in decompose_linear(x) {
                match e {
                    Gl11Basis::H1 => acc += c * &half,
                    Gl11Basis::H2 => acc -= c * &half,
                    _ => {}
                }
            }
            acc
        }
    }
}

fn act_word(elem: &AlgElem, word: &[AlgElem], mu: &Rat) -> Result<FactorVec> {
    if elem.is_zero() {
        return Ok(FactorVec::new());
    }
    let deg = elem.degree()?;
    if deg < 0 {
        let m = PbwMonomial::new(
            word.iter()
                .filter(|y| y.parity().ok() == Some(Parity::Even))
                .count() as u32,
            word.last()
                .is_some_and(|y| y.parity().ok() == Some(Parity::Odd)),
        );
        return Ok(lower_mul(elem, m));
    }
    let Some((head, rest)) = word.split_first() else {
        let mut out = FactorVec::new();
        if deg == 0 {
            add_into(&mut out, PbwMonomial::GEN, g0_scalar(elem, mu));
        }
        return Ok(out);
    };
    let mut out = act_word(&elem.bracket(head), rest, mu)?;
    let inner = act_word(elem, rest, mu)?;
    let sign = koszul(elem.parity()?, head.parity()?);
    for (m, c) in inner {
        for (m2, c2) in lower_mul(head, m) {
            add_into(&mut out, m2, &sign * &c * c2);
        }
    }
    Ok(out)
}

/// `X · m` inside a single induced module with generator weight `mu`.
pub fn act_on_factor(elem: &AlgElem, m: PbwMonomial, mu: &Rat) -> Result<Vec<(PbwMonomial, Rat)>> {
    let word = word_of(elem.algebra(), m);
    Ok(act_word(elem, &word, mu)?.into_iter().collect())
}

/// Coproduct action `Δ(X)(a ⊗ b) = Xa ⊗ b + (-1)^{p(X)p(a)} a ⊗ Xb`.
pub fn act_element(elem: &AlgElem, v: &ModVec) -> Result<ModVec> {
    if elem.algebra() != v.algebra {
        return Err(GrcError::RaiserMismatch {
            raiser: format!("{elem:?}"),
            algebra: v.algebra.to_string(),
        });
    }
    let px = elem.parity()?;
    let mut out = ModVec::zero(v.algebra, v.mu1.clone(), v.mu2.clone());
    for (m, c) in &v.terms {
        for (l, cl) in act_on_factor(elem, m.left, &v.mu1)? {
            out.add_term(
                TensorMonomial {
                    left: l,
                    right: m.right,
                },
                c * cl,
            );
        }
        let sign = koszul(px, m.left.parity());
        for (r, cr) in act_on_factor(elem, m.right, &v.mu2)? {
            out.add_term(
                TensorMonomial {
                    left: m.left,
                    right: r,
                },
                &sign * c * cr,
            );
        }
    }
    Ok(out)
}

pub fn raise(r: RaiserId, v: &ModVec) -> Result<ModVec> {
    if r.algebra() != v.algebra {
        return Err(GrcError::RaiserMismatch {
            raiser: r.name().to_string(),
            algebra: v.algebra.to_string(),
        });
    }
    act_element(&r.element(), v)
}

/// Weight data of a homogeneous vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightData {
    Contact {
        #[serde(with = "crate::rat::serde_rat")]
        kt: Rat,
    },
    Vect {
        #[serde(with = "crate::rat::serde_rat")]
        h1: Rat,
        #[serde(with = "crate::rat::serde_rat")]
        h2: Rat,
    },
}

fn eigenvalue(elem: &AlgElem, v: &ModVec) -> Result<Rat> {
    let mut value: Option<Rat> = None;
    for m in v.terms.keys() {
        let single = ModVec::basis(v.algebra, v.mu1.clone(), v.mu2.clone(), *m);
        let img = act_element(elem, &single)?;
        let lam = img.coeff(m);
        if img != single.scale(&lam) {
            return Err(GrcError::NotHomogeneous(format!(
                "term {} is not an eigenvector",
                m.display(v.algebra)
            )));
        }
        match &value {
            None => value = Some(lam),
            Some(prev) if *prev != lam => {
                return Err(GrcError::NotHomogeneous(format!(
                    "weights {prev} and {lam} differ"
                )))
            }
            _ => {}
        }
    }
    value.ok_or_else(|| GrcError::NotHomogeneous("zero vector".into()))
}

/// Eigenvalues of the Cartan elements, checked term by term.
pub fn weight_check(v: &ModVec) -> Result<WeightData> {
    match v.algebra {
        Algebra::Contact => Ok(WeightData::Contact {
            kt: eigenvalue(&AlgElem::Contact(SuperPoly::t()), v)?,
        }),
        Algebra::Vect => Ok(WeightData::Vect {
            h1: eigenvalue(&AlgElem::gl11(Gl11Basis::H1), v)?,
            h2: eigenvalue(&AlgElem::gl11(Gl11Basis::H2), v)?,
        }),
    }
}

/// Predicted contact weight of `(K₁)^i (K_θ)^ε v`: `μ - 2i - ε`.
pub fn contact_factor_weight(mu: &Rat, m: PbwMonomial) -> Rat {
    mu - int(2 * m.even as i64 + i64::from(m.odd))
}
