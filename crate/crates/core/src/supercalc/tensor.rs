//! Tensor fields on the (1|1) superstring with values in a finite
//! dimensional `gl(1|1)`-module.
//!
//! The fiber `W` carries matrices for the four linear vector fields
//! `e_{ca} = x_c ∂_a`: `H₁ = x∂`, `H₂ = ξδ`, `X₋ = ξ∂`, `X₊ = xδ`. The
//! Lie derivative is
//!
//! `L_X(f ⊗ w) = X(f) ⊗ w + Σ ± (∂_c X^a) f ⊗ ρ(e_{ca}) w`
//!
//! with sign `(-1)^{p(c)(p(X)+p(a)+1) + (p(a)+p(c))p(f)}`. For the one
//! dimensional fiber of a density this is the `w·Div X` rule, and for the
//! fiber spanned by `∂, δ` it is the bracket of vector fields; both are
//! checked in the tests below.

use serde::{Deserialize, Serialize};

use super::field::{apply_vfield, VField};
use super::poly::{koszul, Parity, SuperPoly};
use crate::error::Result;
use crate::rat::{int, Rat};

/// Index of a `gl(1|1)` basis element `x_c ∂_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gl11Basis {
    /// `x∂`
    H1,
    /// `ξδ`
    H2,
    /// `ξ∂`
    XMinus,
    /// `xδ`
    XPlus,
}

impl Gl11Basis {
    pub const ALL: [Gl11Basis; 4] = [
        Gl11Basis::H1,
        Gl11Basis::H2,
        Gl11Basis::XMinus,
        Gl11Basis::XPlus,
    ];

    /// `(p(c), p(a))` for `x_c ∂_a`.
    fn coord_parities(self) -> (Parity, Parity) {
        match self {
            Gl11Basis::H1 => (Parity::Even, Parity::Even),
            Gl11Basis::H2 => (Parity::Odd, Parity::Odd),
            Gl11Basis::XMinus => (Parity::Odd, Parity::Even),
            Gl11Basis::XPlus => (Parity::Even, Parity::Odd),
        }
    }

    pub fn parity(self) -> Parity {
        let (c, a) = self.coord_parities();
        c.add(a)
    }

    pub fn as_vfield(self) -> VField {
        let x = SuperPoly::t();
        let xi = SuperPoly::th();
        match self {
            Gl11Basis::H1 => VField::new(x, SuperPoly::zero()),
            Gl11Basis::H2 => VField::new(SuperPoly::zero(), xi),
            Gl11Basis::XMinus => VField::new(xi, SuperPoly::zero()),
            Gl11Basis::XPlus => VField::new(SuperPoly::zero(), x),
        }
    }
}

/// A finite-dimensional `gl(1|1)`-module given by its action matrices;
/// `matrix[j][i]` is the coefficient of basis vector `j` in `ρ(e) w_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl11Rep {
    pub parities: Vec<Parity>,
    pub h1: Vec<Vec<Rat>>,
    pub h2: Vec<Vec<Rat>>,
    pub x_minus: Vec<Vec<Rat>>,
    pub x_plus: Vec<Vec<Rat>>,
}

impl Gl11Rep {
    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn matrix(&self, e: Gl11Basis) -> &Vec<Vec<Rat>> {
        match e {
            Gl11Basis::H1 => &self.h1,
            Gl11Basis::H2 => &self.h2,
            Gl11Basis::XMinus => &self.x_minus,
            Gl11Basis::XPlus => &self.x_plus,
        }
    }

    /// The fiber of `vvol^w`: one even vector with `H₁ = w`, `H₂ = -w`.
    pub fn density(w: &Rat) -> Gl11Rep {
        let z = vec![vec![Rat::from_integer(0.into())]];
        Gl11Rep {
            parities: vec![Parity::Even],
            h1: vec![vec![w.clone()]],
            h2: vec![vec![-w.clone()]],
            x_minus: z.clone(),
            x_plus: z,
        }
    }

    /// The fiber `span(∂, δ)` of vector fields, acted on by brackets.
    pub fn vector_fields() -> Gl11Rep {
        use super::field::vfield_bracket;
        use super::poly::Mono;
        let basis = [VField::d_even(), VField::d_odd()];
        let action = |e: Gl11Basis| -> Vec<Vec<Rat>> {
            let mut m = vec![vec![int(0); 2]; 2];
            for (i, b) in basis.iter().enumerate() {
                let br = vfield_bracket(&e.as_vfield(), b);
                m[0][i] = br.even.coeff(Mono::ONE);
                m[1][i] = br.odd.coeff(Mono::ONE);
            }
            m
        };
        Gl11Rep {
            parities: vec![Parity::Even, Parity::Odd],
            h1: action(Gl11Basis::H1),
            h2: action(Gl11Basis::H2),
            x_minus: action(Gl11Basis::XMinus),
            x_plus: action(Gl11Basis::XPlus),
        }
    }

    /// Checks the defining relations of `gl(1|1)` on this module.
    pub fn is_representation(&self) -> bool {
        for a in Gl11Basis::ALL {
            for b in Gl11Basis::ALL {
                let lhs = super_commutator(
                    self.matrix(a),
                    self.matrix(b),
                    &koszul(a.parity(), b.parity()),
                );
                let bracket = super::field::vfield_bracket(&a.as_vfield(), &b.as_vfield());
                let rhs = self.combination(&decompose_linear(&bracket));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    fn combination(&self, coeffs: &[(Gl11Basis, Rat)]) -> Vec<Vec<Rat>> {
        let n = self.dim();
        let mut out = vec![vec![Rat::from_integer(0.into()); n]; n];
        for (e, c) in coeffs {
            let m = self.matrix(*e);
            for j in 0..n {
                for i in 0..n {
                    out[j][i] += &m[j][i] * c;
                }
            }
        }
        out
    }
}

fn super_commutator(a: &[Vec<Rat>], b: &[Vec<Rat>], sign: &Rat) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::from_integer(0.into()); n]; n];
    for j in 0..n {
        for i in 0..n {
            let mut acc = Rat::from_integer(0.into());
            for k in 0..n {
                acc += &a[j][k] * &b[k][i];
                acc -= sign * &b[j][k] * &a[k][i];
            }
            out[j][i] = acc;
        }
    }
    out
}

/// Coordinates of a linear vector field in the basis `H₁, H₂, X₋, X₊`.
pub fn decompose_linear(x: &VField) -> Vec<(Gl11Basis, Rat)> {
    use super::poly::Mono;
    vec![
        (Gl11Basis::H1, x.even.coeff(Mono::new(1, false))),
        (Gl11Basis::XMinus, x.even.coeff(Mono::new(0, true))),
        (Gl11Basis::XPlus, x.odd.coeff(Mono::new(1, false))),
        (Gl11Basis::H2, x.odd.coeff(Mono::new(0, true))),
    ]
}

/// `Σ f_i ⊗ w_i` for a fiber with basis `w_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorField {
    pub components: Vec<SuperPoly>,
}

impl TensorField {
    pub fn zero(dim: usize) -> Self {
        TensorField {
            components: vec![SuperPoly::zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SuperPoly::is_zero)
    }

    pub fn add(&self, other: &TensorField) -> TensorField {
        TensorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> TensorField {
        TensorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

/// Lie derivative of a `W`-valued tensor field along a homogeneous field.
pub fn lie_derivative_tensor(
    x: &VField,
    rep: &Gl11Rep,
    field: &TensorField,
) -> Result<TensorField> {
    let px = x.require_parity()?;
    let n = rep.dim();
    let mut out = TensorField {
        components: field
            .components
            .iter()
            .map(|f| apply_vfield(x, f))
            .collect(),
    };
    for e in Gl11Basis::ALL {
        let (pc, pa) = e.coord_parities();
        let xa = match pa {
            Parity::Even => &x.even,
            Parity::Odd => &x.odd,
        };
        let jac = match pc {
            Parity::Even => xa.d_even(),
            Parity::Odd => xa.d_odd(),
        };
        if jac.is_zero() {
            continue;
        }
        let base_sign = koszul(pc, px.add(pa).flip());
        let m = rep.matrix(e);
        for (i, f) in field.components.iter().enumerate() {
            let (fe, fo) = f.split_parity();
            for (part, pf) in [(fe, Parity::Even), (fo, Parity::Odd)] {
                if part.is_zero() {
                    continue;
                }
                let sign = &base_sign * koszul(pa.add(pc), pf);
                let prod = (&jac * &part).scale(&sign);
                for j in 0..n {
                    if m[j][i] != Rat::from_integer(0.into()) {
                        out.components[j] = &out.components[j] + &prod.scale(&m[j][i]);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::supercalc::density::{lie_derivative, Density};
    use crate::supercalc::field::vfield_bracket;
    use crate::supercalc::poly::monomials_up_to;

    fn sample_fields() -> Vec<VField> {
        let mut out = Vec::new();
        for f in monomials_up_to(2) {
            out.push(VField::new(f.clone(), SuperPoly::zero()));
            out.push(VField::new(SuperPoly::zero(), f));
        }
        out
    }

    #[test]
    fn density_fiber_matches_divergence_rule() {
        for w in [int(0), int(1), rat(-3, 2)] {
            let rep = Gl11Rep::density(&w);
            for x in sample_fields() {
                for f in monomials_up_to(3) {
                    let a = lie_derivative(&x, &Density::new(f.clone(), w.clone())).unwrap();
                    let b = lie_derivative_tensor(
                        &x,
                        &rep,
                        &TensorField {
                            components: vec![f.clone()],
                        },
                    )
                    .unwrap();
                    assert_eq!(a.coefficient, b.components[0], "X = {x:?}, f = {f}");
                }
            }
        }
    }

    #[test]
    fn vector_field_fiber_matches_bracket() {
        let rep = Gl11Rep::vector_fields();
        assert!(rep.is_representation());
        for x in sample_fields() {
            for y in sample_fields() {
                let field = TensorField {
                    components: vec![y.even.clone(), y.odd.clone()],
                };
                let l = lie_derivative_tensor(&x, &rep, &field).unwrap();
                let br = vfield_bracket(&x, &y);
                assert_eq!(l.components, vec![br.even, br.odd], "X = {x:?}, Y = {y:?}");
            }
        }
    }

    #[test]
    fn density_fiber_is_representation() {
        assert!(Gl11Rep::density(&rat(2, 7)).is_representation());
    }
}
