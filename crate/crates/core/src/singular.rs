//! Singular vectors: kernels of the raising operators on each level, the
//! closed-form solution families, and their comparison.
//!
//! The kernel computed from the straightening engine is the reference.
//! Closed forms come in two flavours: [`FamilySource::Printed`] evaluates
//! the published formulas as they stand, [`FamilySource::Corrected`]
//! evaluates the systems re-derived from the engine's action. Both are
//! compared against the kernel, and disagreements become data.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::induced::{level_basis, raise, Algebra, ModVec, RaiserId, TensorMonomial};
use crate::linalg;
use crate::rat::{as_integer, factorial, fmt_rat, int, is_nonneg_even_integer, rat, sign_pow, Rat};
use crate::supercalc::Parity;

fn tm(i1: u32, e1: bool, i2: u32, e2: bool) -> TensorMonomial {
    TensorMonomial::new(i1, e1, i2, e2)
}

/// Stacked matrices of several raisers on one parity sector of a level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    pub algebra: Algebra,
    pub rows: Vec<(RaiserId, TensorMonomial)>,
    pub cols: Vec<TensorMonomial>,
    pub entries: Vec<Vec<Rat>>,
}

impl ConstraintMatrix {
    /// Plain-text dump, one row per line.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        out.push_str("cols:");
        for c in &self.cols {
            out.push_str(&format!(" [{}]", c.display(self.algebra)));
        }
        out.push('\n');
        for ((r, m), row) in self.rows.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(fmt_rat).collect();
            out.push_str(&format!(
                "{} [{}]: {}\n",
                r.name(),
                m.display(self.algebra),
                cells.join(" ")
            ));
        }
        out
    }
}

pub fn sector_basis(algebra: Algebra, n: u32, sector: Parity) -> Vec<TensorMonomial> {
    level_basis(algebra, n)
        .into_iter()
        .filter(|m| m.parity() == sector)
        .collect()
}

pub fn constraint_matrix_for(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    n: u32,
    sector: Parity,
    raisers: &[RaiserId],
) -> Result<ConstraintMatrix> {
    let cols = sector_basis(algebra, n, sector);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &r in raisers {
        let Some(target_level) = n.checked_sub(r.level_degree()) else {
            continue;
        };
        let target = sector_basis(algebra, target_level, sector.add(r.parity()));
        let images: Vec<ModVec> = cols
            .iter()
            .map(|&c| raise(r, &ModVec::basis(algebra, mu1.clone(), mu2.clone(), c)))
            .collect::<Result<_>>()?;
        for t in target {
            rows.push((r, t));
            entries.push(images.iter().map(|img| img.coeff(&t)).collect());
        }
    }
    Ok(ConstraintMatrix {
        algebra,
        rows,
        cols,
        entries,
    })
}

/// The classification raisers of `algebra` stacked on one sector of level `n`.
pub fn constraint_matrix(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    n: u32,
    sector: Parity,
) -> Result<ConstraintMatrix> {
    constraint_matrix_for(
        algebra,
        mu1,
        mu2,
        n,
        sector,
        algebra.classification_raisers(),
    )
}

/// Echelon kernel basis of the matrix, each vector re-checked.
pub fn rational_kernel(m: &ConstraintMatrix) -> Vec<Vec<Rat>> {
    let k = linalg::kernel(&m.entries, m.cols.len());
    for v in &k {
        assert!(
            linalg::mat_vec(&m.entries, v).iter().all(Zero::is_zero),
            "kernel vector fails verification"
        );
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularSpace {
    pub algebra: Algebra,
    pub mu1: Rat,
    pub mu2: Rat,
    pub level: u32,
    pub even: Vec<ModVec>,
    pub odd: Vec<ModVec>,
}

impl SingularSpace {
    pub fn dims(&self) -> (usize, usize) {
        (self.even.len(), self.odd.len())
    }

    pub fn sector(&self, p: Parity) -> &[ModVec] {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// Dimensions `(even, odd)` of the subspace also killed by `K_{t²θ}`,
    /// i.e. singular for all of `k(1|1)`. Contact only; diagnostic.
    pub fn k_t2theta_dims(&self) -> Result<Option<(usize, usize)>> {
        if self.algebra != Algebra::Contact {
            return Ok(None);
        }
        let target = level_basis(Algebra::Contact, self.level + 3);
        let closed = |vs: &[ModVec]| -> Result<usize> {
            let images = vs
                .iter()
                .map(|v| Ok(raise(RaiserId::KT2Theta, v)?.coords(&target)))
                .collect::<Result<Vec<_>>>()?;
            Ok(vs.len() - linalg::rank(&images, target.len()))
        };
        Ok(Some((closed(&self.even)?, closed(&self.odd)?)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let diag = self.k_t2theta_dims().ok().flatten();
        json!({
            "k_t2theta_closed": diag.map(|(e, o)| json!({"dim_even": e, "dim_odd": o})),
            "algebra": self.algebra,
            "mu1": fmt_rat(&self.mu1),
            "mu2": fmt_rat(&self.mu2),
            "level": self.level,
            "dim_even": self.even.len(),
            "dim_odd": self.odd.len(),
            "even": self.even.iter().map(ModVec::to_json).collect::<Vec<_>>(),
            "odd": self.odd.iter().map(ModVec::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Joint kernel of `raisers` on both sectors of level `n`.
pub fn singular_space_for(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    n: u32,
    raisers: &[RaiserId],
) -> Result<SingularSpace> {
    let mut sectors = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let m = constraint_matrix_for(algebra, mu1, mu2, n, p, raisers)?;
        let vecs: Vec<ModVec> = rational_kernel(&m)
            .iter()
            .map(|k| ModVec::from_coords(algebra, mu1.clone(), mu2.clone(), &m.cols, k))
            .collect();
        for v in &vecs {
            for &r in raisers {
                assert!(
                    raise(r, v)?.is_zero(),
                    "singular vector not killed by {}",
                    r.name()
                );
            }
        }
        sectors.push(vecs);
    }
    let odd = sectors.pop().unwrap_or_default();
    let even = sectors.pop().unwrap_or_default();
    Ok(SingularSpace {
        algebra,
        mu1: mu1.clone(),
        mu2: mu2.clone(),
        level: n,
        even,
        odd,
    })
}

pub fn singular_space(algebra: Algebra, mu1: &Rat, mu2: &Rat, n: u32) -> Result<SingularSpace> {
    singular_space_for(algebra, mu1, mu2, n, algebra.classification_raisers())
}

/// Kernel dimensions only; skips building vectors.
pub fn kernel_dims(algebra: Algebra, mu1: &Rat, mu2: &Rat, n: u32) -> Result<(usize, usize)> {
    let mut dims = [0usize; 2];
    for (slot, p) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        let m = constraint_matrix(algebra, mu1, mu2, n, p)?;
        dims[slot] = m.cols.len() - linalg::rank(&m.entries, m.cols.len());
    }
    Ok((dims[0], dims[1]))
}

// ---------------------------------------------------------------------------
// Bidiagonal systems A_i x_i + B_i x_{i+1} = 0, i = 0..L-1, in L+1 unknowns.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BidiagonalCase {
    /// `A_i = 0` and `B_j = 0` with `j ≥ i`: two solutions.
    TwoDimensional { i: usize, j: usize },
    /// Everything else: one solution.
    OneDimensional,
}

/// Solutions of a bidiagonal system in which at most one `A_i` and at
/// most one `B_j` vanish.
pub fn bidiagonal_solutions(a: &[Rat], b: &[Rat]) -> (BidiagonalCase, Vec<(String, Vec<Rat>)>) {
    let len = a.len();
    debug_assert_eq!(len, b.len());
    let prod = |v: &[Rat], lo: usize, hi: usize| -> Rat {
        (lo..hi).fold(Rat::one(), |acc, k| acc * &v[k])
    };
    let zero_a = (0..len).find(|&i| a[i].is_zero());
    let zero_b = (0..len).rev().find(|&j| b[j].is_zero());
    if let (Some(i), Some(j)) = (zero_a, zero_b) {
        if j >= i {
            let first: Vec<Rat> = (0..=len)
                .map(|m| {
                    if m <= i {
                        sign_pow(m as u32) * prod(a, 0, m) * prod(b, m, i)
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            let second: Vec<Rat> = (0..=len)
                .map(|m| {
                    if m <= j {
                        Rat::zero()
                    } else {
                        sign_pow(m as u32) * prod(a, j + 1, m) * prod(b, m, len)
                    }
                })
                .collect();
            return (
                BidiagonalCase::TwoDimensional { i, j },
                vec![("first".into(), first), ("second".into(), second)],
            );
        }
    }
    let unique = (0..=len)
        .map(|m| sign_pow(m as u32) * prod(a, 0, m) * prod(b, m, len))
        .collect();
    (
        BidiagonalCase::OneDimensional,
        vec![("unique".into(), unique)],
    )
}

// ---------------------------------------------------------------------------
// Closed-form families.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// Coefficients `c_i, e_i` at level `2n`.
    ContactEven,
    /// Coefficients `a_i, b_i` at level `2n + 1`.
    ContactOdd,
    /// Coefficients `D_k` on `∂'^k ∂''^{n-k-2} δ'δ'' u`.
    VectD,
    /// Coefficients `b_m` on the `X₊`-kernel basis of the odd sector.
    VectBc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilySource {
    Printed,
    Corrected,
}

/// One solution vector of a closed-form family, as named coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientFamily {
    pub family: FamilyId,
    pub source: FamilySource,
    pub label: String,
    /// Total level of the vector this evaluates to.
    pub level: u32,
    #[serde(with = "param_map")]
    pub parameters: BTreeMap<String, Rat>,
    /// Number of free parameters of the family this vector belongs to.
    pub free_parameters: usize,
}

mod param_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rat>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strs: BTreeMap<&String, String> = m.iter().map(|(k, v)| (k, fmt_rat(v))).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<String, Rat>, D::Error> {
        let strs = BTreeMap::<String, String>::deserialize(d)?;
        strs.into_iter()
            .map(|(k, v)| {
                crate::rat::parse_rat(&v)
                    .map(|r| (k, r))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl CoefficientFamily {
    fn new(
        family: FamilyId,
        source: FamilySource,
        label: &str,
        level: u32,
        free_parameters: usize,
    ) -> Self {
        CoefficientFamily {
            family,
            source,
            label: label.to_string(),
            level,
            parameters: BTreeMap::new(),
            free_parameters,
        }
    }

    fn set(&mut self, name: char, idx: u32, value: Rat) {
        self.parameters.insert(format!("{name}{idx}"), value);
    }

    pub fn get(&self, name: char, idx: u32) -> Rat {
        self.parameters
            .get(&format!("{name}{idx}"))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn algebra(&self) -> Algebra {
        match self.family {
            FamilyId::ContactEven | FamilyId::ContactOdd => Algebra::Contact,
            FamilyId::VectD | FamilyId::VectBc => Algebra::Vect,
        }
    }

    /// The vector in `I(V₁) ⊗ I(V₂)` with these coefficients. Even contact
    /// coefficients carry the factorial weights `1/(i!(n-i)!)` on `c_i` and
    /// `1/(i!(n-1-i)!)` on `e_i`; all others are raw.
    pub fn to_modvec(&self, mu1: &Rat, mu2: &Rat) -> ModVec {
        let mut v = ModVec::zero(self.algebra(), mu1.clone(), mu2.clone());
        let level = self.level;
        match self.family {
            FamilyId::ContactEven => {
                let n = level / 2;
                for i in 0..=n {
                    let w = factorial(i) * factorial(n - i);
                    v.add_term(tm(i, false, n - i, false), self.get('c', i) / w);
                }
                for i in 0..n {
                    let w = factorial(i) * factorial(n - 1 - i);
                    v.add_term(tm(i, true, n - 1 - i, true), self.get('e', i) / w);
                }
            }
            FamilyId::ContactOdd => {
                let n = level / 2;
                for i in 0..=n {
                    v.add_term(tm(i, true, n - i, false), self.get('a', i));
                    v.add_term(tm(i, false, n - i, true), self.get('b', i));
                }
            }
            FamilyId::VectD => {
                for k in 0..level.saturating_sub(1) {
                    v.add_term(tm(k, true, level - k - 2, true), self.get('D', k));
                }
            }
            FamilyId::VectBc => {
                let n = level;
                for k in 0..=n {
                    let b = self.get('b', k);
                    if k > 0 {
                        v.add_term(tm(k - 1, true, n - k, false), int(k as i64) * &b);
                    }
                    if k < n {
                        v.add_term(tm(k, false, n - k - 1, true), int((n - k) as i64) * &b);
                    }
                }
            }
        }
        v
    }
}

/// Level-2n families as printed: generic case from the product formula in
/// `e_n`, exceptional case `μ₁ = j+1, μ₂ = 3(n+j+1)` with two parameters.
/// Coefficients the printed display leaves implicit (`c_j`, `c_n`) are
/// filled from the printed linear system.
pub fn printed_contact_even(mu1: &Rat, mu2: &Rat, n: u32) -> Vec<CoefficientFamily> {
    let level = 2 * n;
    if n == 0 {
        let mut f = CoefficientFamily::new(
            FamilyId::ContactEven,
            FamilySource::Printed,
            "level-0",
            0,
            1,
        );
        f.set('c', 0, Rat::one());
        return vec![f];
    }
    let ni = |x: u32| int(x as i64);
    let a = |i: u32| int(3 * (n + i + 1) as i64) - mu2;
    let b = |i: u32| ni(i + 1) - mu1;
    let c_n_from = |e_last: &Rat| (int(6 * n as i64) - mu2) * e_last / int(2);

    if let Some(j) = (0..n).find(|&j| a(j).is_zero() && b(j).is_zero()) {
        let pow = |base: i64, e: i64| -> Rat {
            if e >= 0 {
                int(base.pow(e as u32))
            } else {
                rat(1, base.pow((-e) as u32))
            }
        };
        let mut upper = CoefficientFamily::new(
            FamilyId::ContactEven,
            FamilySource::Printed,
            "exceptional-ej",
            level,
            2,
        );
        for i in 0..j {
            let p = pow(-3, i as i64 - j as i64);
            upper.set('e', i, p.clone());
            upper.set('c', i, ni(j - i + 1) * p / int(2));
        }
        upper.set('e', j, Rat::one());
        upper.set('c', j, (mu1 - ni(j)) / int(2));
        if j == n - 1 {
            upper.set('c', n, c_n_from(&Rat::one()));
        }
        let mut lower = CoefficientFamily::new(
            FamilyId::ContactEven,
            FamilySource::Printed,
            "exceptional-en",
            level,
            2,
        );
        for l in j + 1..n {
            let p = pow(-3, l as i64 - n as i64);
            lower.set('e', l, p.clone());
            lower.set('c', l, ni(n - l + 1) * p / int(2));
        }
        lower.set('e', n, Rat::one());
        if j < n - 1 {
            let last = lower.get('e', n - 1);
            lower.set('c', n, c_n_from(&last));
        }
        return vec![upper, lower];
    }
    if (0..n).any(|i| a(i).is_zero()) {
        // The printed case split does not cover a lone zero of A_i.
        return Vec::new();
    }
    let mut f = CoefficientFamily::new(
        FamilyId::ContactEven,
        FamilySource::Printed,
        "generic",
        level,
        1,
    );
    f.set('e', n, Rat::one());
    for i in 0..n {
        let e = (i..n).fold(Rat::one(), |acc, k| acc * (mu1 - ni(k + 1)) / a(k));
        f.set('c', i, (mu1 - ni(i)) / int(2) * &e);
        f.set('e', i, e);
    }
    let last = f.get('e', n - 1);
    f.set('c', n, c_n_from(&last));
    vec![f]
}

/// Level-(2n+1) families as printed, by the three subcases on `μ₂ - n + k`.
pub fn printed_contact_odd(mu1: &Rat, mu2: &Rat, n: u32) -> Vec<CoefficientFamily> {
    let level = 2 * n + 1;
    let ni = |x: u32| int(x as i64);
    let k = as_integer(mu2)
        .filter(|&m| m >= 1 && m <= n as i64)
        .map(|m| n - m as u32);
    let mu1_is_n = *mu1 == ni(n);
    let Some(k) = k else {
        if !mu1_is_n {
            return Vec::new();
        }
        let mut f = CoefficientFamily::new(
            FamilyId::ContactOdd,
            FamilySource::Printed,
            "case-ii-1",
            level,
            1,
        );
        f.set('a', n, Rat::one());
        return vec![f];
    };
    let factor = |s: u32| (ni(s) - mu1) * ni(s + 1) / ((int(s as i64) - ni(k)) * ni(n - s));
    let chain = |lo: u32, hi: u32| (lo..hi).fold(Rat::one(), |acc, s| acc * factor(s));
    let t = as_integer(mu1)
        .filter(|&t| t >= 0 && t < k as i64)
        .map(|t| t as u32);
    match t {
        None => {
            let params = if mu1_is_n { 2 } else { 1 };
            let mut f = CoefficientFamily::new(
                FamilyId::ContactOdd,
                FamilySource::Printed,
                "case-ii-2",
                level,
                params,
            );
            f.set('b', k, Rat::one());
            for i in 0..k {
                f.set('b', i, chain(i, k));
                f.set('a', i, ni(i + 1) / ni(n - i) * chain(i + 1, k));
            }
            let mut out = vec![f];
            if mu1_is_n {
                let mut g = CoefficientFamily::new(
                    FamilyId::ContactOdd,
                    FamilySource::Printed,
                    "case-ii-2-an",
                    level,
                    2,
                );
                g.set('a', n, Rat::one());
                out.push(g);
            }
            out
        }
        Some(t) => {
            let mut f = CoefficientFamily::new(
                FamilyId::ContactOdd,
                FamilySource::Printed,
                "case-ii-3-at",
                level,
                2,
            );
            f.set('a', t, Rat::one());
            let mut g = CoefficientFamily::new(
                FamilyId::ContactOdd,
                FamilySource::Printed,
                "case-ii-3-bk",
                level,
                2,
            );
            g.set('b', k, Rat::one());
            for i in t + 1..k {
                g.set('b', i, chain(i, k));
                g.set('a', i, ni(i + 1) / ni(n - i) * chain(i + 1, k));
            }
            vec![f, g]
        }
    }
}

/// Diagonals of the level-2n system satisfied by `e_0..e_{n-1}` in the
/// straightening action: `A_i = (n-i-1) - μ₂`, `B_i = (i+1) - μ₁`.
pub fn corrected_even_diagonals(mu1: &Rat, mu2: &Rat, n: u32) -> (Vec<Rat>, Vec<Rat>) {
    let len = n.saturating_sub(1);
    let a = (0..len).map(|i| int((n - i - 1) as i64) - mu2).collect();
    let b = (0..len).map(|i| int((i + 1) as i64) - mu1).collect();
    (a, b)
}

/// Diagonals for the level-(2n+1) unknowns `(b_0, a_0, …, a_n)`.
pub fn corrected_odd_diagonals(mu1: &Rat, mu2: &Rat, n: u32) -> (Vec<Rat>, Vec<Rat>) {
    let ni = |x: u32| int(x as i64);
    let mut a = vec![mu2 - ni(n)];
    for i in 1..=n {
        a.push((mu2 - ni(n) + ni(i)) * ni(n - i + 1) / ni(i));
    }
    let b = (0..=n).map(|i| mu1 - ni(i)).collect();
    (a, b)
}

pub fn corrected_contact_even(mu1: &Rat, mu2: &Rat, n: u32) -> Vec<CoefficientFamily> {
    let level = 2 * n;
    if n == 0 {
        let mut f = CoefficientFamily::new(
            FamilyId::ContactEven,
            FamilySource::Corrected,
            "level-0",
            0,
            1,
        );
        f.set('c', 0, Rat::one());
        return vec![f];
    }
    let (a, b) = corrected_even_diagonals(mu1, mu2, n);
    let (case, sols) = bidiagonal_solutions(&a, &b);
    let free = if matches!(case, BidiagonalCase::TwoDimensional { .. }) {
        2
    } else {
        1
    };
    sols.into_iter()
        .map(|(label, e)| {
            let mut f = CoefficientFamily::new(
                FamilyId::ContactEven,
                FamilySource::Corrected,
                &label,
                level,
                free,
            );
            for (i, ei) in e.iter().enumerate() {
                let i = i as u32;
                f.set('e', i, ei.clone());
                f.set('c', i, (mu1 - int(i as i64)) * ei / int(2));
            }
            f.set('c', n, -mu2 * &e[n as usize - 1] / int(2));
            f
        })
        .collect()
}

pub fn corrected_contact_odd(mu1: &Rat, mu2: &Rat, n: u32) -> Vec<CoefficientFamily> {
    let level = 2 * n + 1;
    let (a, b) = corrected_odd_diagonals(mu1, mu2, n);
    let (case, sols) = bidiagonal_solutions(&a, &b);
    let free = if matches!(case, BidiagonalCase::TwoDimensional { .. }) {
        2
    } else {
        1
    };
    sols.into_iter()
        .map(|(label, x)| {
            let mut f = CoefficientFamily::new(
                FamilyId::ContactOdd,
                FamilySource::Corrected,
                &label,
                level,
                free,
            );
            f.set('b', 0, x[0].clone());
            for i in 0..=n {
                f.set('a', i, x[i as usize + 1].clone());
                if i >= 1 {
                    let b = int((n - i + 1) as i64) / int(i as i64) * &x[i as usize];
                    f.set('b', i, b);
                }
            }
            f
        })
        .collect()
}

/// Closed-form contact families at level `2n` (even) or `2n+1` (odd).
pub fn closed_form_contact(
    mu1: &Rat,
    mu2: &Rat,
    n: u32,
    parity: Parity,
    source: FamilySource,
) -> Vec<CoefficientFamily> {
    match (parity, source) {
        (Parity::Even, FamilySource::Printed) => printed_contact_even(mu1, mu2, n),
        (Parity::Odd, FamilySource::Printed) => printed_contact_odd(mu1, mu2, n),
        (Parity::Even, FamilySource::Corrected) => corrected_contact_even(mu1, mu2, n),
        (Parity::Odd, FamilySource::Corrected) => corrected_contact_odd(mu1, mu2, n),
    }
}

/// Diagonals of the odd vect system: `A_i = (n-i)(μ₂ - 2(n-i-1))`,
/// `B_i = (i+1)(μ₁ - 2i)`.
pub fn vect_diagonals(mu1: &Rat, mu2: &Rat, n: u32) -> (Vec<Rat>, Vec<Rat>) {
    let a = (0..n)
        .map(|i| int((n - i) as i64) * (mu2 - int(2 * (n - i - 1) as i64)))
        .collect();
    let b = (0..n)
        .map(|i| int((i + 1) as i64) * (mu1 - int(2 * i as i64)))
        .collect();
    (a, b)
}

/// Closed-form vect families at level `n`.
pub fn closed_form_vect(mu1: &Rat, mu2: &Rat, n: u32, parity: Parity) -> Vec<CoefficientFamily> {
    match parity {
        Parity::Even => {
            if !is_nonneg_even_integer(mu1) || !is_nonneg_even_integer(mu2) {
                return Vec::new();
            }
            let k = as_integer(mu1).unwrap_or(-1) / 2;
            let target = 2 * n as i64 - 4 - 2 * k;
            if n < 2 || k > n as i64 - 2 || as_integer(mu2) != Some(target) {
                return Vec::new();
            }
            let mut f =
                CoefficientFamily::new(FamilyId::VectD, FamilySource::Printed, "even-d", n, 1);
            f.set('D', k as u32, Rat::one());
            vec![f]
        }
        Parity::Odd => {
            let (a, b) = vect_diagonals(mu1, mu2, n);
            let (case, sols) = bidiagonal_solutions(&a, &b);
            let free = if matches!(case, BidiagonalCase::TwoDimensional { .. }) {
                2
            } else {
                1
            };
            sols.into_iter()
                .map(|(label, x)| {
                    let mut f = CoefficientFamily::new(
                        FamilyId::VectBc,
                        FamilySource::Printed,
                        &label,
                        n,
                        free,
                    );
                    for (m, v) in x.into_iter().enumerate() {
                        f.set('b', m as u32, v);
                    }
                    f
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Predictions.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub even: usize,
    pub odd: usize,
    pub case: String,
}

fn pred(even: usize, odd: usize, case: &str) -> Prediction {
    Prediction {
        even,
        odd,
        case: case.to_string(),
    }
}

fn even_in(r: &Rat, lo: i64, hi: i64) -> bool {
    matches!(as_integer(r), Some(k) if k % 2 == 0 && k >= lo && k <= hi)
}

/// Dimensions as stated by the published case analysis.
pub fn predict_dimension(algebra: Algebra, mu1: &Rat, mu2: &Rat, n: u32) -> Prediction {
    if n == 0 {
        return pred(1, 0, "level-0");
    }
    match algebra {
        Algebra::Vect => {
            let ni = n as i64;
            let s = mu1 + mu2;
            if is_nonneg_even_integer(mu1) && is_nonneg_even_integer(mu2) && s == int(2 * ni - 4) {
                pred(1, 1, "ThMain-i")
            } else if even_in(mu1, 0, 2 * ni - 2)
                && even_in(mu2, 0, 2 * ni - 2)
                && s >= int(2 * ni - 2)
            {
                pred(0, 2, "ThMain-ii")
            } else {
                pred(0, 1, "ThMain-iii")
            }
        }
        Algebra::Contact => {
            let h = n / 2;
            if n.is_multiple_of(2) {
                let hi = h as i64;
                let exceptional =
                    (0..hi).any(|j| *mu1 == int(j + 1) && *mu2 == int(3 * (hi + j + 1)));
                if exceptional {
                    pred(2, 0, "i-2")
                } else {
                    pred(1, 0, "i-1")
                }
            } else {
                let fams = printed_contact_odd(mu1, mu2, h);
                let k_case = as_integer(mu2).is_some_and(|m| m >= 1 && m <= h as i64);
                let label = match fams.first().map(|f| f.label.as_str()) {
                    Some(l) if l.starts_with("case-ii-3") => "ii-3",
                    _ if k_case => "ii-2",
                    _ => "ii-1",
                };
                let dim = fams.first().map_or(0, |f| f.free_parameters);
                pred(0, dim, label)
            }
        }
    }
}

/// Contact dimensions implied by the re-derived systems.
pub fn corrected_contact_dimension(mu1: &Rat, mu2: &Rat, level: u32) -> (usize, usize) {
    if level == 0 {
        return (1, 0);
    }
    let n = level / 2;
    let in_range =
        |r: &Rat, lo: i64, hi: i64| matches!(as_integer(r), Some(k) if k >= lo && k <= hi);
    let both = |lo: i64, hi: i64| {
        in_range(mu1, lo, hi) && in_range(mu2, lo, hi) && mu1 + mu2 >= int(n as i64)
    };
    if level.is_multiple_of(2) {
        (if both(1, n as i64 - 1) { 2 } else { 1 }, 0)
    } else {
        (0, if both(0, n as i64) { 2 } else { 1 })
    }
}

// ---------------------------------------------------------------------------
// Comparison.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: CoefficientFamily,
    pub in_kernel: bool,
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorComparison {
    pub parity: Parity,
    pub kernel_dim: usize,
    pub predicted_dim: usize,
    pub families: Vec<FamilyCheck>,
    /// Printed families lie in the kernel and span it.
    pub printed_spans: bool,
    /// Same for corrected families, where those exist.
    pub corrected_spans: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub parity: Parity,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub algebra: Algebra,
    #[serde(with = "crate::rat::serde_rat")]
    pub mu1: Rat,
    #[serde(with = "crate::rat::serde_rat")]
    pub mu2: Rat,
    pub level: u32,
    pub case: String,
    pub sectors: Vec<SectorComparison>,
    pub discrepancies: Vec<Discrepancy>,
}

impl ComparisonReport {
    pub fn all_match(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn families_for(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    level: u32,
    p: Parity,
) -> Vec<CoefficientFamily> {
    match algebra {
        Algebra::Vect => closed_form_vect(mu1, mu2, level, p),
        Algebra::Contact => {
            if level.is_multiple_of(2) != (p == Parity::Even) {
                return Vec::new();
            }
            let n = level / 2;
            let mut out = closed_form_contact(mu1, mu2, n, p, FamilySource::Printed);
            out.extend(closed_form_contact(mu1, mu2, n, p, FamilySource::Corrected));
            out
        }
    }
}

fn spans(space: &[ModVec], vecs: &[ModVec], basis: &[TensorMonomial]) -> bool {
    let k: Vec<Vec<Rat>> = space.iter().map(|v| v.coords(basis)).collect();
    let f: Vec<Vec<Rat>> = vecs.iter().map(|v| v.coords(basis)).collect();
    let ncols = basis.len();
    f.iter().all(|v| linalg::in_span(&k, v, ncols)) && linalg::rank(&f, ncols) == k.len()
}

pub fn compare_closed_vs_kernel(
    algebra: Algebra,
    mu1: &Rat,
    mu2: &Rat,
    level: u32,
) -> Result<ComparisonReport> {
    let space = singular_space(algebra, mu1, mu2, level)?;
    let prediction = predict_dimension(algebra, mu1, mu2, level);
    let mut sectors = Vec::new();
    let mut discrepancies = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let basis = sector_basis(algebra, level, p);
        let kernel = space.sector(p);
        let predicted = match p {
            Parity::Even => prediction.even,
            Parity::Odd => prediction.odd,
        };
        if kernel.len() != predicted {
            discrepancies.push(Discrepancy {
                parity: p,
                kind: "dimension".into(),
                detail: format!(
                    "kernel dimension {} but predicted {predicted} ({})",
                    kernel.len(),
                    prediction.case
                ),
            });
        }
        let mut checks = Vec::new();
        let mut printed = Vec::new();
        let mut corrected = Vec::new();
        for fam in families_for(algebra, mu1, mu2, level, p) {
            let v = fam.to_modvec(mu1, mu2);
            let mut in_kernel = true;
            for &r in algebra.classification_raisers() {
                in_kernel &= raise(r, &v)?.is_zero();
            }
            let nonzero = !v.is_zero();
            if fam.source == FamilySource::Printed && (!in_kernel || !nonzero) {
                discrepancies.push(Discrepancy {
                    parity: p,
                    kind: "closed-form".into(),
                    detail: format!(
                        "{} family {:?} is {}",
                        fam.label,
                        fam.family,
                        if nonzero {
                            "not annihilated by the raisers"
                        } else {
                            "the zero vector"
                        }
                    ),
                });
            }
            match fam.source {
                FamilySource::Printed => printed.push(v),
                FamilySource::Corrected => corrected.push(v),
            }
            checks.push(FamilyCheck {
                family: fam,
                in_kernel,
                nonzero,
            });
        }
        let printed_spans = spans(kernel, &printed, &basis);
        if !printed_spans && !(kernel.is_empty() && printed.is_empty()) {
            discrepancies.push(Discrepancy {
                parity: p,
                kind: "span".into(),
                detail: format!(
                    "{} printed vectors do not span the {}-dimensional kernel",
                    printed.len(),
                    kernel.len()
                ),
            });
        }
        let corrected_spans =
            (algebra == Algebra::Contact).then(|| spans(kernel, &corrected, &basis));
        sectors.push(SectorComparison {
            parity: p,
            kernel_dim: kernel.len(),
            predicted_dim: predicted,
            families: checks,
            printed_spans,
            corrected_spans,
        });
    }
    Ok(ComparisonReport {
        algebra,
        mu1: mu1.clone(),
        mu2: mu2.clone(),
        level,
        case: prediction.case,
        sectors,
        discrepancies,
    })
}

// ---------------------------------------------------------------------------
// The four displayed ∇₊ action formulas, checked against straightening.

/// Candidate intercepts for the disputed coefficient `-μ₂ + X` in
/// `∇₊(K_θ'(K₁')^i v ⊗ K_θ''(K₁'')^{n-i-1} w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisputedVariant {
    /// `X = 3(n-i-1)`, the standalone display.
    Standalone,
    /// `X = 3(n+i+1)`, the version used inside the even-case expansion.
    Expansion,
    /// `X = n-i-1`.
    Derived,
}

impl DisputedVariant {
    pub const ALL: [DisputedVariant; 3] = [
        DisputedVariant::Standalone,
        DisputedVariant::Expansion,
        DisputedVariant::Derived,
    ];

    fn intercept(self, n: u32, i: u32) -> Rat {
        let (n, i) = (n as i64, i as i64);
        int(match self {
            DisputedVariant::Standalone => 3 * (n - i - 1),
            DisputedVariant::Expansion => 3 * (n + i + 1),
            DisputedVariant::Derived => n - i - 1,
        })
    }

    pub fn expression(self) -> &'static str {
        match self {
            DisputedVariant::Standalone => "-mu2 + 3(n-i-1)",
            DisputedVariant::Expansion => "-mu2 + 3(n+i+1)",
            DisputedVariant::Derived => "-mu2 + (n-i-1)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub formula: String,
    pub printed: String,
    pub matches: bool,
    pub instances_checked: usize,
    pub first_mismatch: Option<String>,
    pub corrected: Option<String>,
}

type Expected = Vec<(TensorMonomial, Rat)>;

fn check_formula(
    name: &str,
    printed: &str,
    max_level: u32,
    cases: impl Fn(u32) -> Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)>,
) -> Result<FormulaCheck> {
    let samples = [
        (rat(1, 3), rat(-5, 7)),
        (int(2), int(5)),
        (rat(-3, 2), rat(11, 4)),
    ];
    let mut count = 0;
    let mut first_mismatch = None;
    for level in 0..=max_level {
        for (src, expected) in cases(level) {
            for (mu1, mu2) in &samples {
                let v = ModVec::basis(Algebra::Contact, mu1.clone(), mu2.clone(), src);
                let got = raise(RaiserId::NablaPlus, &v)?;
                let mut want = ModVec::zero(Algebra::Contact, mu1.clone(), mu2.clone());
                for (m, c) in expected(mu1, mu2) {
                    want.add_term(m, c);
                }
                count += 1;
                if got != want && first_mismatch.is_none() {
                    first_mismatch = Some(format!(
                        "source [{}] at mu1={mu1}, mu2={mu2}: straightening gives {got}, formula gives {want}",
                        src.display(Algebra::Contact)
                    ));
                }
            }
        }
    }
    Ok(FormulaCheck {
        formula: name.into(),
        printed: printed.into(),
        matches: first_mismatch.is_none(),
        instances_checked: count,
        first_mismatch,
        corrected: None,
    })
}

fn disputed_cases(
    level: u32,
    variant: DisputedVariant,
) -> Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)> {
    let mut out: Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)> = Vec::new();
    if !level.is_multiple_of(2) || level == 0 {
        return out;
    }
    let n = level / 2;
    for i in 0..n {
        let x = variant.intercept(n, i);
        out.push((
            tm(i, true, n - i - 1, true),
            Box::new(move |mu1: &Rat, mu2: &Rat| {
                vec![
                    (tm(i, false, n - i - 1, true), mu1 - int(i as i64)),
                    (tm(i, true, n - i - 1, false), -mu2 + &x),
                ]
            }),
        ));
    }
    out
}

/// Checks the four displayed `∇₊` formulas on every source monomial up to
/// `max_level`, at several rational weights.
pub fn action_formula_ledger(max_level: u32) -> Result<Vec<FormulaCheck>> {
    let ni = |x: u32| int(x as i64);
    let mut out = Vec::new();
    out.push(check_formula(
        "nabla-plus on K1'^i v (x) K1''^(n-i) w",
        "-2i Kth' K1'^(i-1) v (x) K1''^(n-i) w - 2(n-i) K1'^i v (x) Kth'' K1''^(n-i-1) w",
        max_level,
        |level| {
            let mut v: Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)> = Vec::new();
            if level % 2 != 0 {
                return v;
            }
            let n = level / 2;
            for i in 0..=n {
                v.push((
                    tm(i, false, n - i, false),
                    Box::new(move |_: &Rat, _: &Rat| {
                        let mut e = Vec::new();
                        if i > 0 {
                            e.push((tm(i - 1, true, n - i, false), -int(2 * i as i64)));
                        }
                        if i < n {
                            e.push((tm(i, false, n - i - 1, true), -int(2 * (n - i) as i64)));
                        }
                        e
                    }),
                ));
            }
            v
        },
    )?);

    let mut variants = Vec::new();
    for variant in DisputedVariant::ALL {
        let mut c = check_formula(
            &format!("nabla-plus on Kth' K1'^i v (x) Kth'' K1''^(n-i-1) w [{variant:?}]"),
            &format!(
                "(mu1-i) K1'^i v (x) Kth'' K1''^(n-i-1) w + ({}) Kth' K1'^i v (x) K1''^(n-i-1) w",
                variant.expression()
            ),
            max_level,
            |level| disputed_cases(level, variant),
        )?;
        if variant == DisputedVariant::Derived {
            c.printed = format!("(not printed) {}", c.printed);
        }
        variants.push((variant, c));
    }
    let derived_ok = variants
        .iter()
        .any(|(v, c)| *v == DisputedVariant::Derived && c.matches);
    for (variant, mut c) in variants {
        if variant != DisputedVariant::Derived {
            if !c.matches && derived_ok {
                c.corrected = Some(DisputedVariant::Derived.expression().to_string());
            }
            out.push(c);
        } else {
            out.push(c);
        }
    }

    out.push(check_formula(
        "nabla-plus on Kth' K1'^i v (x) K1''^(n-i) w",
        "(mu1-i) K1'^i v (x) K1''^(n-i) w + 2(n-i) Kth' K1'^i v (x) Kth'' K1''^(n-i-1) w",
        max_level,
        |level| {
            let mut v: Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)> = Vec::new();
            if level % 2 != 1 {
                return v;
            }
            let n = level / 2;
            for i in 0..=n {
                v.push((
                    tm(i, true, n - i, false),
                    Box::new(move |mu1: &Rat, _: &Rat| {
                        let mut e = vec![(tm(i, false, n - i, false), mu1 - ni(i))];
                        if i < n {
                            e.push((tm(i, true, n - i - 1, true), ni(2 * (n - i))));
                        }
                        e
                    }),
                ));
            }
            v
        },
    )?);

    out.push(check_formula(
        "nabla-plus on K1'^i v (x) Kth'' K1''^(n-i) w",
        "-2i Kth' K1'^(i-1) v (x) Kth'' K1''^(n-i) w + (mu2-(n-i)) K1'^i v (x) K1''^(n-i) w",
        max_level,
        |level| {
            let mut v: Vec<(TensorMonomial, Box<dyn Fn(&Rat, &Rat) -> Expected>)> = Vec::new();
            if level % 2 != 1 {
                return v;
            }
            let n = level / 2;
            for i in 0..=n {
                v.push((
                    tm(i, false, n - i, true),
                    Box::new(move |_: &Rat, mu2: &Rat| {
                        let mut e = vec![(tm(i, false, n - i, false), mu2 - ni(n - i))];
                        if i > 0 {
                            e.push((tm(i - 1, true, n - i, true), -ni(2 * i)));
                        }
                        e
                    }),
                ));
            }
            v
        },
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(algebra: Algebra, mu1: Rat, mu2: Rat, n: u32) -> (usize, usize) {
        singular_space(algebra, &mu1, &mu2, n).unwrap().dims()
    }

    #[test]
    fn spec_dimension_examples() {
        assert_eq!(dims(Algebra::Vect, int(0), int(0), 2), (1, 1));
        assert_eq!(dims(Algebra::Vect, int(0), int(0), 1), (0, 2));
        assert_eq!(dims(Algebra::Vect, rat(1, 3), int(5), 3), (0, 1));
        assert_eq!(dims(Algebra::Contact, int(0), int(0), 1), (0, 2));
        assert_eq!(dims(Algebra::Contact, int(0), int(0), 0), (1, 0));
    }

    #[test]
    fn kernel_dims_agree_with_space() {
        for (mu1, mu2) in [(int(0), int(2)), (rat(1, 2), int(3))] {
            for n in 0..5 {
                for alg in [Algebra::Contact, Algebra::Vect] {
                    assert_eq!(
                        kernel_dims(alg, &mu1, &mu2, n).unwrap(),
                        dims(alg, mu1.clone(), mu2.clone(), n)
                    );
                }
            }
        }
    }

    #[test]
    fn constraint_matrix_shapes() {
        let m = constraint_matrix(Algebra::Vect, &int(0), &int(0), 1, Parity::Odd).unwrap();
        assert_eq!(m.cols.len(), 2);
        assert!(m.entries.iter().flatten().all(Zero::is_zero));
        let m = constraint_matrix(Algebra::Contact, &int(3), &int(1), 0, Parity::Even).unwrap();
        assert_eq!(m.cols.len(), 1);
        assert!(m.rows.is_empty());
        assert_eq!(rational_kernel(&m).len(), 1);
        let m = constraint_matrix(Algebra::Vect, &int(5), &int(7), 2, Parity::Odd).unwrap();
        assert_eq!(rational_kernel(&m).len(), 1);
        assert!(m.debug_dump().contains("x-plus"));
    }

    #[test]
    fn kernel_basis_is_echelon() {
        let space = singular_space(Algebra::Vect, &int(0), &int(2), 2).unwrap();
        let basis = sector_basis(Algebra::Vect, 2, Parity::Odd);
        let mut last = None;
        for v in &space.odd {
            let coords = v.coords(&basis);
            let lead = coords.iter().position(|c| !c.is_zero()).unwrap();
            assert!(coords[lead].is_one());
            assert!(last.is_none_or(|l| lead > l));
            last = Some(lead);
        }
    }

    #[test]
    fn bidiagonal_cases() {
        let (case, sols) = bidiagonal_solutions(&[int(7)], &[int(5)]);
        assert_eq!(case, BidiagonalCase::OneDimensional);
        assert_eq!(sols[0].1, vec![int(5), int(-7)]);

        let (case, sols) = bidiagonal_solutions(&[int(0), int(2)], &[int(0), int(3)]);
        assert_eq!(case, BidiagonalCase::TwoDimensional { i: 0, j: 0 });
        assert_eq!(sols.len(), 2);
        let (case, _) = bidiagonal_solutions(&[int(1), int(0)], &[int(0), int(3)]);
        assert_eq!(case, BidiagonalCase::OneDimensional);
    }

    #[test]
    fn vect_closed_form_examples() {
        let f = closed_form_vect(&int(5), &int(7), 1, Parity::Odd);
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].get('b', 0), f[0].get('b', 1)), (int(5), int(-7)));

        let f = closed_form_vect(&int(2), &int(0), 3, Parity::Even);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].get('D', 1), int(1));
        assert_eq!(f[0].parameters.len(), 1);

        assert_eq!(closed_form_vect(&int(0), &int(2), 2, Parity::Odd).len(), 2);
    }

    #[test]
    fn vect_a_sector_is_never_singular() {
        for n in 1..6 {
            let a_sector: Vec<TensorMonomial> =
                (0..=n).map(|k| tm(k, false, n - k, false)).collect();
            for mu in [int(0), int(2), rat(1, 2)] {
                let m = constraint_matrix_for(
                    Algebra::Vect,
                    &mu,
                    &int(4),
                    n,
                    Parity::Even,
                    &[RaiserId::XPlus],
                )
                .unwrap();
                let idx: Vec<usize> = a_sector
                    .iter()
                    .map(|a| m.cols.iter().position(|c| c == a).unwrap())
                    .collect();
                let sub: Vec<Vec<Rat>> = m
                    .entries
                    .iter()
                    .map(|r| idx.iter().map(|&i| r[i].clone()).collect())
                    .collect();
                assert_eq!(linalg::kernel(&sub, idx.len()).len(), 0);
            }
        }
    }

    #[test]
    fn predictions() {
        assert_eq!(
            predict_dimension(Algebra::Vect, &int(0), &int(0), 2),
            pred(1, 1, "ThMain-i")
        );
        assert_eq!(
            predict_dimension(Algebra::Vect, &int(2), &int(2), 3),
            pred(0, 2, "ThMain-ii")
        );
        assert_eq!(
            predict_dimension(Algebra::Vect, &rat(1, 2), &int(7), 4),
            pred(0, 1, "ThMain-iii")
        );
        assert_eq!(
            predict_dimension(Algebra::Contact, &int(3), &int(5), 3).case,
            "ii-1"
        );
    }

    #[test]
    fn printed_even_example_values() {
        let f = printed_contact_even(&int(2), &int(0), 1);
        assert_eq!(f.len(), 1);
        let s = int(6);
        assert_eq!(f[0].get('e', 0) * &s, int(1));
        assert_eq!(f[0].get('c', 0) * &s, int(1));
        assert_eq!(f[0].get('c', 1) * &s, int(3));
    }

    #[test]
    fn printed_odd_case_one() {
        let f = printed_contact_odd(&int(2), &int(7), 2);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].get('a', 2), int(1));
        assert!(printed_contact_odd(&int(1), &int(7), 2).is_empty());
        let f = printed_contact_odd(&int(0), &int(1), 2);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].label, "case-ii-3-at");
    }

    #[test]
    fn corrected_contact_families_span_kernel() {
        for mu1 in [int(0), int(1), int(2), int(3), rat(1, 2)] {
            for mu2 in [int(0), int(1), int(2), int(3), rat(-2, 3)] {
                for level in 0..9 {
                    let r = compare_closed_vs_kernel(Algebra::Contact, &mu1, &mu2, level).unwrap();
                    let p = if level % 2 == 0 {
                        Parity::Even
                    } else {
                        Parity::Odd
                    };
                    let s = r.sectors.iter().find(|s| s.parity == p).unwrap();
                    assert_eq!(
                        s.corrected_spans,
                        Some(true),
                        "mu=({mu1},{mu2}) level {level}"
                    );
                    assert_eq!(
                        (
                            s.kernel_dim,
                            r.sectors.iter().find(|s| s.parity != p).unwrap().kernel_dim
                        ),
                        if p == Parity::Even {
                            corrected_contact_dimension(&mu1, &mu2, level)
                        } else {
                            let (e, o) = corrected_contact_dimension(&mu1, &mu2, level);
                            (o, e)
                        }
                    );
                }
            }
        }
    }

    #[test]
    fn vect_comparison_matches() {
        assert!(compare_closed_vs_kernel(Algebra::Vect, &int(5), &int(7), 1)
            .unwrap()
            .all_match());
        let r = compare_closed_vs_kernel(Algebra::Vect, &int(0), &int(0), 2).unwrap();
        assert!(r.all_match(), "{r:?}");
        assert_eq!((r.sectors[0].kernel_dim, r.sectors[1].kernel_dim), (1, 1));
    }

    #[test]
    fn formula_ledger() {
        let ledger = action_formula_ledger(8).unwrap();
        let by_name = |s: &str| ledger.iter().find(|c| c.formula.contains(s)).unwrap();
        assert!(ledger[0].matches);
        assert!(!by_name("[Standalone]").matches);
        assert!(!by_name("[Expansion]").matches);
        assert!(by_name("[Derived]").matches);
        assert_eq!(
            by_name("[Standalone]").corrected.as_deref(),
            Some("-mu2 + (n-i-1)")
        );
        assert!(ledger.last().unwrap().matches);
        assert!(ledger[ledger.len() - 2].matches);
    }

    #[test]
    fn contact_kernel_is_closed_under_k_t2theta() {
        for (a, b) in [(rat(1, 3), rat(2, 5)), (int(1), int(1)), (int(0), int(2))] {
            for n in 0..6 {
                let sp = singular_space(Algebra::Contact, &a, &b, n).unwrap();
                assert_eq!(
                    sp.k_t2theta_dims().unwrap(),
                    Some(sp.dims()),
                    "({a}, {b}, {n})"
                );
            }
        }
        let sp = singular_space(Algebra::Vect, &int(0), &int(0), 2).unwrap();
        assert_eq!(sp.k_t2theta_dims().unwrap(), None);
    }
}
