//! Two-dimensional `gl(1|1)`-modules `M^{λ;μ}` induced from the Borel
//! subalgebra, and the case analysis of their tensor products.
//!
//! `M^{λ;μ}` has basis `v, X₋v` with `H₁v = av`, `H₂v = bv`, `λ = a+b`,
//! `μ = a-b`; `X₊v = 0` and `X₊X₋v = Ev = λv` where `E = H₁+H₂`. The
//! matrices are checked against the brackets of the linear vector fields
//! `x∂, ξδ, ξ∂, xδ`, and tensor products use the Koszul coproduct.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rat::{fmt_rat, int, rat, serde_rat, Rat};
use crate::supercalc::{koszul, Gl11Basis, Gl11Rep, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl11Module {
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    /// Parity of the generator `v`; odd means `ΠM^{λ;μ}`.
    pub odd: bool,
}

impl Gl11Module {
    pub fn new(lambda: Rat, mu: Rat) -> Self {
        Gl11Module {
            lambda,
            mu,
            odd: false,
        }
    }

    pub fn pi(mut self) -> Self {
        self.odd = !self.odd;
        self
    }

    /// `(a, b)`: eigenvalues of `H₁, H₂` on `v`.
    pub fn ab(&self) -> (Rat, Rat) {
        let two = int(2);
        (
            (&self.lambda + &self.mu) / &two,
            (&self.lambda - &self.mu) / &two,
        )
    }

    /// Action matrices on the basis `(v, X₋v)`.
    pub fn rep(&self) -> Gl11Rep {
        let (a, b) = self.ab();
        let z = Rat::zero();
        let pv = if self.odd { Parity::Odd } else { Parity::Even };
        Gl11Rep {
            parities: vec![pv, pv.flip()],
            h1: vec![vec![a.clone(), z.clone()], vec![z.clone(), &a - Rat::one()]],
            h2: vec![vec![b.clone(), z.clone()], vec![z.clone(), &b + Rat::one()]],
            x_minus: vec![vec![z.clone(), z.clone()], vec![Rat::one(), z.clone()]],
            x_plus: vec![vec![z.clone(), self.lambda.clone()], vec![z.clone(), z]],
        }
    }
}

/// Tensor product of two modules given by matrices; basis `e_i ⊗ f_k`
/// at index `i·dim(f) + k`.
pub fn tensor_rep(a: &Gl11Rep, b: &Gl11Rep) -> Gl11Rep {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let parities = (0..n)
        .map(|ix| a.parities[ix / nb].add(b.parities[ix % nb]))
        .collect();
    let action = |e: Gl11Basis| -> Vec<Vec<Rat>> {
        let (ma, mb) = (a.matrix(e), b.matrix(e));
        let mut m = vec![vec![Rat::zero(); n]; n];
        for i in 0..na {
            for k in 0..nb {
                let col = i * nb + k;
                for j in 0..na {
                    m[j * nb + k][col] += &ma[j][i];
                }
                let s = koszul(e.parity(), a.parities[i]);
                for l in 0..nb {
                    m[i * nb + l][col] += &s * &mb[l][k];
                }
            }
        }
        m
    };
    Gl11Rep {
        parities,
        h1: action(Gl11Basis::H1),
        h2: action(Gl11Basis::H2),
        x_minus: action(Gl11Basis::XMinus),
        x_plus: action(Gl11Basis::XPlus),
    }
}

pub fn apply(rep: &Gl11Rep, e: Gl11Basis, x: &[Rat]) -> Vec<Rat> {
    linalg::mat_vec(rep.matrix(e), x)
}

fn add_matrices(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

/// `E = H₁ + H₂`.
pub fn e_matrix(rep: &Gl11Rep) -> Vec<Vec<Rat>> {
    add_matrices(&rep.h1, &rep.h2)
}

/// `H = H₁ - H₂`.
pub fn h_matrix(rep: &Gl11Rep) -> Vec<Vec<Rat>> {
    let neg: Vec<Vec<Rat>> = rep
        .h2
        .iter()
        .map(|r| r.iter().map(|x| -x).collect())
        .collect();
    add_matrices(&rep.h1, &neg)
}

/// A summand `M^{λ;μ}` or `ΠM^{λ;μ}` of a tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    pub parity: Parity,
}

/// A one-dimensional layer of the case-(iv) gluing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub vector: String,
    /// Eigenvalue of `H = H₁ - H₂`.
    #[serde(with = "serde_rat")]
    pub h_weight: Rat,
}

/// `op(from) = label · to` modulo lower layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: String,
    pub to: String,
    pub op: String,
    #[serde(with = "serde_rat")]
    pub label: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CaseId {
    /// `λ = σ = 0`: the irreducible quotients are 1-dimensional and so is
    /// their product.
    CaseI { product_dim: usize },
    /// Exactly one of `λ, σ` vanishes: `V^{0;μ} ⊗ M^{σ;ρ} ≅ M^{σ;ρ+μ}`.
    CaseIi { result: Summand },
    /// `λσ ≠ 0`, `λ+σ ≠ 0`: two irreducible summands.
    CaseIii { summands: Vec<Summand> },
    /// `λσ ≠ 0`, `λ+σ = 0`: four layers glued like the adjoint module.
    CaseIv {
        layers: Vec<Layer>,
        arrows: Vec<Arrow>,
    },
}

impl CaseId {
    pub fn name(&self) -> &'static str {
        match self {
            CaseId::CaseI { .. } => "case-i",
            CaseId::CaseIi { .. } => "case-ii",
            CaseId::CaseIii { .. } => "case-iii",
            CaseId::CaseIv { .. } => "case-iv",
        }
    }
}

const XV_W: &str = "X-v(x)w";
const V_XW: &str = "v(x)X-w";

/// Which of the four cases `M^{λ;μ} ⊗ M^{σ;ρ}` falls into.
pub fn tensor_case(lambda: &Rat, mu: &Rat, sigma: &Rat, rho: &Rat) -> CaseId {
    let mr = mu + rho;
    match (lambda.is_zero(), sigma.is_zero()) {
        (true, true) => CaseId::CaseI { product_dim: 1 },
        (true, false) => CaseId::CaseIi {
            result: Summand {
                lambda: sigma.clone(),
                mu: mr,
                parity: Parity::Even,
            },
        },
        (false, true) => CaseId::CaseIi {
            result: Summand {
                lambda: lambda.clone(),
                mu: mr,
                parity: Parity::Even,
            },
        },
        (false, false) if !(lambda + sigma).is_zero() => CaseId::CaseIii {
            summands: vec![
                Summand {
                    lambda: lambda + sigma,
                    mu: mr.clone(),
                    parity: Parity::Even,
                },
                Summand {
                    lambda: lambda + sigma,
                    mu: mr - int(2),
                    parity: Parity::Odd,
                },
            ],
        },
        (false, false) => {
            let top = format!("{XV_W} - {V_XW}");
            let left = "X-v(x)X-w".to_string();
            let right = "v(x)w".to_string();
            let bottom = format!("{XV_W} + {V_XW}");
            let layers = vec![
                Layer {
                    vector: top.clone(),
                    h_weight: &mr - int(2),
                },
                Layer {
                    vector: left.clone(),
                    h_weight: &mr - int(4),
                },
                Layer {
                    vector: right.clone(),
                    h_weight: mr.clone(),
                },
                Layer {
                    vector: bottom.clone(),
                    h_weight: &mr - int(2),
                },
            ];
            let arrow = |from: &str, to: &str, op: &str, label: Rat| Arrow {
                from: from.to_string(),
                to: to.to_string(),
                op: op.to_string(),
                label,
            };
            let arrows = vec![
                arrow(&top, &left, "X-", int(-2)),
                arrow(&top, &right, "X+", lambda * int(2)),
                arrow(&left, &bottom, "X+", lambda.clone()),
                arrow(&right, &bottom, "X-", Rat::one()),
            ];
            CaseId::CaseIv { layers, arrows }
        }
    }
}

fn level1_vector(x: &Rat, y: &Rat) -> Vec<Rat> {
    // basis order: v⊗w, v⊗X₋w, X₋v⊗w, X₋v⊗X₋w
    vec![Rat::zero(), y.clone(), x.clone(), Rat::zero()]
}

/// Solutions `(x, y)` of `X₊(x·X₋v⊗w + y·v⊗X₋w) = 0` for even generators,
/// as a basis in reduced echelon form.
pub fn level1_highest(lambda: &Rat, mu: &Rat, sigma: &Rat, rho: &Rat) -> Vec<(Rat, Rat)> {
    let rep = tensor_rep(
        &Gl11Module::new(lambda.clone(), mu.clone()).rep(),
        &Gl11Module::new(sigma.clone(), rho.clone()).rep(),
    );
    let ex = apply(
        &rep,
        Gl11Basis::XPlus,
        &level1_vector(&Rat::one(), &Rat::zero()),
    );
    let ey = apply(
        &rep,
        Gl11Basis::XPlus,
        &level1_vector(&Rat::zero(), &Rat::one()),
    );
    let m: Vec<Vec<Rat>> = ex
        .iter()
        .zip(&ey)
        .map(|(a, b)| vec![a.clone(), b.clone()])
        .collect();
    linalg::kernel(&m, 2)
        .into_iter()
        .map(|v| (v[0].clone(), v[1].clone()))
        .collect()
}

/// One of the four action identities behind the case-(iv) gluing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowCheck {
    pub identity: String,
    pub holds: bool,
}

/// Evaluates the four identities at `σ = -λ` by direct action.
pub fn arrow_identities(lambda: &Rat, mu: &Rat, rho: &Rat) -> Vec<ArrowCheck> {
    let rep = tensor_rep(
        &Gl11Module::new(lambda.clone(), mu.clone()).rep(),
        &Gl11Module::new(-lambda.clone(), rho.clone()).rep(),
    );
    let one = Rat::one();
    let vec4 = |a: i64, b: i64, c: i64, d: i64| vec![int(a), int(b), int(c), int(d)];
    let scaled = |v: Vec<Rat>, s: &Rat| v.into_iter().map(|x| x * s).collect::<Vec<_>>();
    let diff = level1_vector(&one, &-one.clone());
    let sum = level1_vector(&one, &one);
    let vw = vec4(1, 0, 0, 0);
    let xx = vec4(0, 0, 0, 1);
    let checks = [
        (
            "X+(X-v(x)w - v(x)X-w) = 2*lambda*(v(x)w)",
            apply(&rep, Gl11Basis::XPlus, &diff),
            scaled(vw.clone(), &(lambda * int(2))),
        ),
        (
            "X-(X-v(x)w - v(x)X-w) = -2*(X-v(x)X-w)",
            apply(&rep, Gl11Basis::XMinus, &diff),
            scaled(xx.clone(), &int(-2)),
        ),
        (
            "X+(X-v(x)X-w) = lambda*(v(x)X-w + X-v(x)w)",
            apply(&rep, Gl11Basis::XPlus, &xx),
            scaled(sum.clone(), lambda),
        ),
        (
            "X-(v(x)w) = X-v(x)w + v(x)X-w",
            apply(&rep, Gl11Basis::XMinus, &vw),
            sum.clone(),
        ),
    ];
    checks
        .into_iter()
        .map(|(identity, got, want)| ArrowCheck {
            identity: identity.to_string(),
            holds: got == want,
        })
        .collect()
}

/// Case (iii): bases `[u, X₋u]` of the two summands, `u = v⊗w` and
/// `u = -σ/λ·X₋v⊗w + v⊗X₋w`.
pub fn case_iii_bases(m1: &Gl11Module, m2: &Gl11Module) -> [Vec<Vec<Rat>>; 2] {
    let rep = tensor_rep(&m1.rep(), &m2.rep());
    let top = vec![Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()];
    let low = level1_vector(&(-&m2.lambda / &m1.lambda), &Rat::one());
    [top, low].map(|u| {
        let xu = apply(&rep, Gl11Basis::XMinus, &u);
        vec![u, xu]
    })
}

/// `P₁ + P₂` for the projections onto the two case-(iii) summands along
/// each other; the identity when the summands are complementary.
pub fn case_iii_projection_sum(m1: &Gl11Module, m2: &Gl11Module) -> Option<Vec<Vec<Rat>>> {
    let [a, b] = case_iii_bases(m1, m2);
    let cols: Vec<Vec<Rat>> = a.into_iter().chain(b).collect();
    // change of basis C (columns = summand vectors); P_k = C·D_k·C⁻¹
    let n = 4;
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.extend((0..n).map(|j| if j == r { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    if linalg::rref(&mut aug, 2 * n)
        .iter()
        .take_while(|&&p| p < n)
        .count()
        < n
    {
        return None;
    }
    let inv: Vec<Vec<Rat>> = aug.iter().map(|r| r[n..].to_vec()).collect();
    let proj = |range: std::ops::Range<usize>| -> Vec<Vec<Rat>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| range.clone().map(|k| &cols[k][i] * &inv[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    Some(add_matrices(&proj(0..2), &proj(2..4)))
}

/// Whether `span(vectors)` is stable under the four generators.
pub fn is_invariant(rep: &Gl11Rep, vectors: &[Vec<Rat>]) -> bool {
    Gl11Basis::ALL.iter().all(|&e| {
        vectors
            .iter()
            .all(|v| linalg::in_span(vectors, &apply(rep, e, v), rep.dim()))
    })
}

impl std::fmt::Display for Summand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pi = if self.parity == Parity::Odd {
            "Pi "
        } else {
            ""
        };
        write!(f, "{pi}M^({};{})", fmt_rat(&self.lambda), fmt_rat(&self.mu))
    }
}

/// Five sample values used for "symbolic" λ checks.
pub fn sample_lambdas() -> Vec<Rat> {
    vec![int(1), int(-3), rat(1, 2), rat(-5, 7), int(4)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(l: Rat, mu: Rat) -> Gl11Module {
        Gl11Module::new(l, mu)
    }

    #[test]
    fn induced_modules_are_representations() {
        for l in sample_lambdas() {
            for odd in [false, true] {
                let mut md = m(l.clone(), rat(3, 2));
                md.odd = odd;
                assert!(md.rep().is_representation());
            }
        }
    }

    #[test]
    fn tensor_products_are_representations() {
        let a = m(int(1), int(0)).rep();
        let b = m(int(2), int(5)).pi().rep();
        assert!(tensor_rep(&a, &b).is_representation());
        assert!(tensor_rep(&b, &a).is_representation());
    }

    #[test]
    fn x_minus_squares_to_zero() {
        for l in sample_lambdas() {
            let r = tensor_rep(&m(l.clone(), int(1)).rep(), &m(int(2), int(0)).rep());
            for i in 0..4 {
                let mut e = vec![Rat::zero(); 4];
                e[i] = Rat::one();
                let y = apply(&r, Gl11Basis::XMinus, &apply(&r, Gl11Basis::XMinus, &e));
                assert!(y.iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn case_examples() {
        assert_eq!(
            tensor_case(&int(0), &int(3), &int(0), &int(5)),
            CaseId::CaseI { product_dim: 1 }
        );
        match tensor_case(&int(1), &int(0), &int(2), &int(0)) {
            CaseId::CaseIii { summands } => {
                assert_eq!(summands[0].to_string(), "M^(3;0)");
                assert_eq!(summands[1].to_string(), "Pi M^(3;-2)");
            }
            other => panic!("{other:?}"),
        }
        let iv = tensor_case(&int(1), &int(0), &int(-1), &int(0));
        assert_eq!(iv.name(), "case-iv");
        let json = serde_json::to_value(&iv).unwrap();
        assert_eq!(json["case"], "case-iv");
        assert_eq!(json["arrows"].as_array().unwrap().len(), 4);
        match tensor_case(&int(0), &int(1), &int(2), &int(3)) {
            CaseId::CaseIi { result } => assert_eq!(result.to_string(), "M^(2;4)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn level1_rays() {
        assert_eq!(
            level1_highest(&int(1), &int(0), &int(2), &int(0)),
            vec![(int(1), rat(-1, 2))]
        );
        assert_eq!(level1_highest(&int(0), &int(0), &int(0), &int(0)).len(), 2);
        for l in sample_lambdas() {
            let s = rat(2, 3);
            let sol = level1_highest(&l, &int(0), &s, &int(1));
            assert_eq!(sol.len(), 1);
            let (x, y) = &sol[0];
            assert_eq!(x, &(-y * &s / &l));
        }
    }

    #[test]
    fn case_iv_identities() {
        for l in sample_lambdas() {
            for c in arrow_identities(&l, &int(1), &rat(-1, 3)) {
                assert!(c.holds, "{} at lambda = {l}", c.identity);
            }
            let rep = tensor_rep(&m(l.clone(), int(0)).rep(), &m(-l.clone(), int(0)).rep());
            let sum = level1_vector(&Rat::one(), &Rat::one());
            assert!(apply(&rep, Gl11Basis::XPlus, &sum)
                .iter()
                .all(Zero::is_zero));
            assert!(apply(&rep, Gl11Basis::XMinus, &sum)
                .iter()
                .all(Zero::is_zero));
        }
    }

    #[test]
    fn case_iii_decomposes() {
        let (a, b) = (m(int(1), int(0)), m(int(2), int(3)));
        let rep = tensor_rep(&a.rep(), &b.rep());
        let [s1, s2] = case_iii_bases(&a, &b);
        assert!(is_invariant(&rep, &s1));
        assert!(is_invariant(&rep, &s2));
        let all: Vec<Vec<Rat>> = s1.iter().chain(&s2).cloned().collect();
        assert_eq!(linalg::rank(&all, 4), 4);
        let id: Vec<Vec<Rat>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        assert_eq!(case_iii_projection_sum(&a, &b), Some(id));
        // the second summand's generator has H-weight μ+ρ-2 and E-weight λ+σ
        let u = &s2[0];
        let hu = linalg::mat_vec(&h_matrix(&rep), u);
        let eu = linalg::mat_vec(&e_matrix(&rep), u);
        assert_eq!(hu, u.iter().map(|x| x * int(1)).collect::<Vec<_>>());
        assert_eq!(eu, u.iter().map(|x| x * int(3)).collect::<Vec<_>>());
    }
}
