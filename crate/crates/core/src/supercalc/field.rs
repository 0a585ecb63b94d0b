use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{koszul, Coords, Parity, SuperPoly};
use crate::error::{GrcError, Result};
use crate::rat::{int, Rat};

/// `X = f·∂_even + g·∂_odd`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VField {
    pub even: SuperPoly,
    pub odd: SuperPoly,
}

/// Parity of a vector field, `Mixed` for sums of both kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldParity {
    Even,
    Odd,
    Mixed,
}

impl VField {
    pub fn new(even: SuperPoly, odd: SuperPoly) -> Self {
        VField { even, odd }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `∂` along the even coordinate.
    pub fn d_even() -> Self {
        VField::new(SuperPoly::one(), SuperPoly::zero())
    }

    /// `∂` along the odd coordinate.
    pub fn d_odd() -> Self {
        VField::new(SuperPoly::zero(), SuperPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Derived parity: the `∂_odd` coefficient carries the opposite parity.
    pub fn field_parity(&self) -> FieldParity {
        let from_even = if self.even.is_zero() {
            None
        } else {
            match self.even.parity() {
                Some(p) => Some(p),
                None => return FieldParity::Mixed,
            }
        };
        let from_odd = if self.odd.is_zero() {
            None
        } else {
            match self.odd.parity() {
                Some(p) => Some(p.flip()),
                None => return FieldParity::Mixed,
            }
        };
        match (from_even, from_odd) {
            (Some(a), Some(b)) if a != b => FieldParity::Mixed,
            (Some(p), _) | (None, Some(p)) => match p {
                Parity::Even => FieldParity::Even,
                Parity::Odd => FieldParity::Odd,
            },
            (None, None) => FieldParity::Even,
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        match self.field_parity() {
            FieldParity::Even => Some(Parity::Even),
            FieldParity::Odd => Some(Parity::Odd),
            FieldParity::Mixed => None,
        }
    }

    pub fn require_parity(&self) -> Result<Parity> {
        self.parity()
            .ok_or_else(|| GrcError::MixedParity(format!("vector field {self:?}")))
    }

    /// Splits into (even field, odd field).
    pub fn split_parity(&self) -> (VField, VField) {
        let (fe, fo) = self.even.split_parity();
        let (ge, go) = self.odd.split_parity();
        (VField::new(fe, go), VField::new(fo, ge))
    }

    pub fn scale(&self, c: &Rat) -> VField {
        VField::new(self.even.scale(c), self.odd.scale(c))
    }

    pub fn add(&self, other: &VField) -> VField {
        VField::new(&self.even + &other.even, &self.odd + &other.odd)
    }

    pub fn sub(&self, other: &VField) -> VField {
        VField::new(&self.even - &other.even, &self.odd - &other.odd)
    }

    /// Left multiplication of the coefficients by a function.
    pub fn times(&self, f: &SuperPoly) -> VField {
        VField::new(f * &self.even, f * &self.odd)
    }

    pub fn display_with(&self, coords: Coords) -> String {
        let (tn, thn) = coords.names();
        let mut parts = Vec::new();
        if !self.even.is_zero() {
            parts.push(format!("({})*d_{tn}", self.even.display_with(coords)));
        }
        if !self.odd.is_zero() {
            parts.push(format!("({})*d_{thn}", self.odd.display_with(coords)));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VField[{}]", self.display_with(Coords::Contact))
    }
}

/// `X(p)`. Coefficients sit to the left of the derivations, so no
/// reordering sign arises.
pub fn apply_vfield(x: &VField, p: &SuperPoly) -> SuperPoly {
    &(&x.even * &p.d_even()) + &(&x.odd * &p.d_odd())
}

/// Super bracket `[X, Y] = XY - (-1)^{p(X)p(Y)} YX`, extended bilinearly
/// over parity components. A derivation is determined by its values on
/// the two coordinates, which is how the result is assembled.
pub fn vfield_bracket(x: &VField, y: &VField) -> VField {
    let (xe, xo) = x.split_parity();
    let (ye, yo) = y.split_parity();
    let mut out = VField::zero();
    for (a, pa) in [(&xe, Parity::Even), (&xo, Parity::Odd)] {
        if a.is_zero() {
            continue;
        }
        for (b, pb) in [(&ye, Parity::Even), (&yo, Parity::Odd)] {
            if b.is_zero() {
                continue;
            }
            let s = koszul(pa, pb);
            let even = &apply_vfield(a, &b.even) - &apply_vfield(b, &a.even).scale(&s);
            let odd = &apply_vfield(a, &b.odd) - &apply_vfield(b, &a.odd).scale(&s);
            out = out.add(&VField::new(even, odd));
        }
    }
    out
}

/// `(2 - E)(f)` with `E = θ∂_θ`.
fn two_minus_euler(f: &SuperPoly) -> SuperPoly {
    &f.scale(&int(2)) - &f.euler_odd()
}

/// The contact vector field with generating function `f`:
/// `K_f = (2-E)(f)∂_t - (-1)^{p(f)}(∂_θ f - θ∂_t f)∂_θ`.
pub fn contact_field(f: &SuperPoly) -> Result<VField> {
    let p = f.require_parity("generating function")?;
    let sign = -koszul(p, Parity::Odd);
    let odd_part = (&f.d_odd() - &f.d_even().times_th()).scale(&sign);
    Ok(VField::new(two_minus_euler(f), odd_part))
}

/// `{f, g} = (2-E)(f)∂_t g - ∂_t f (2-E)(g) - (-1)^{p(f)} ∂_θ f ∂_θ g`.
pub fn contact_bracket(f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
    let pf = f.require_parity("left argument of the contact bracket")?;
    g.require_parity("right argument of the contact bracket")?;
    let a = &two_minus_euler(f) * &g.d_even();
    let b = &f.d_even() * &two_minus_euler(g);
    let c = (&f.d_odd() * &g.d_odd()).scale(&koszul(pf, Parity::Odd));
    Ok(&(&a - &b) - &c)
}

/// `Div(f∂ + g∂_odd) = ∂f/∂x + (-1)^{p(g)} ∂g/∂ξ`.
pub fn divergence(x: &VField) -> Result<SuperPoly> {
    let p = x.require_parity()?;
    let pg = p.flip();
    Ok(&x.even.d_even() + &x.odd.d_odd().scale(&koszul(pg, Parity::Odd)))
}

/// `D_θ = θ∂_t - ∂_θ`.
pub fn d_theta(p: &SuperPoly) -> SuperPoly {
    &p.d_even().times_th() - &p.d_odd()
}

/// `K_θ = θ∂_t + ∂_θ` as an operator on functions.
pub fn k_theta(p: &SuperPoly) -> SuperPoly {
    &p.d_even().times_th() + &p.d_odd()
}

/// `1` when `p` is the unit polynomial; handy in assertions.
pub fn is_unit(p: &SuperPoly) -> bool {
    *p == SuperPoly::constant(Rat::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn t() -> SuperPoly {
        SuperPoly::t()
    }
    fn th() -> SuperPoly {
        SuperPoly::th()
    }

    #[test]
    fn apply_examples() {
        let dt = VField::d_even();
        assert_eq!(
            apply_vfield(&dt, &SuperPoly::mono(2, false)),
            t().scale(&int(2))
        );
        let kth = VField::new(th(), SuperPoly::one());
        assert_eq!(apply_vfield(&kth, &th()), SuperPoly::one());
        // δ(xξ) = x and the Euler field ξδ fixes xξ.
        let xxi = SuperPoly::mono(1, true);
        assert_eq!(apply_vfield(&VField::d_odd(), &xxi), t());
        let xi_delta = VField::new(SuperPoly::zero(), th());
        assert_eq!(apply_vfield(&xi_delta, &xxi), xxi);
    }

    #[test]
    fn contact_field_examples() {
        assert_eq!(
            contact_field(&th()).unwrap(),
            VField::new(th(), SuperPoly::one())
        );
        assert_eq!(
            contact_field(&t()).unwrap(),
            VField::new(t().scale(&int(2)), th())
        );
        assert_eq!(
            contact_field(&SuperPoly::one()).unwrap(),
            VField::new(SuperPoly::constant(int(2)), SuperPoly::zero())
        );
        assert!(contact_field(&(&t() + &th())).is_err());
    }

    #[test]
    fn contact_bracket_examples() {
        let tth = SuperPoly::mono(1, true);
        assert_eq!(
            contact_bracket(&tth, &SuperPoly::one()).unwrap(),
            th().scale(&int(-2))
        );
        assert_eq!(contact_bracket(&th(), &th()).unwrap(), SuperPoly::one());
        assert_eq!(contact_bracket(&tth, &th()).unwrap(), t());
        assert!(contact_bracket(&t(), &t()).unwrap().is_zero());
        assert_eq!(
            contact_bracket(&t(), &SuperPoly::one()).unwrap(),
            SuperPoly::constant(int(-2))
        );
        assert!(contact_bracket(&(&t() + &th()), &t()).is_err());
    }

    #[test]
    fn divergence_examples() {
        assert!(divergence(&VField::d_even()).unwrap().is_zero());
        let x_d = VField::new(t(), SuperPoly::zero());
        assert_eq!(divergence(&x_d).unwrap(), SuperPoly::one());
        let xi_delta = VField::new(SuperPoly::zero(), th());
        assert_eq!(divergence(&xi_delta).unwrap(), SuperPoly::constant(int(-1)));
        let kt = contact_field(&t()).unwrap();
        assert_eq!(divergence(&kt).unwrap(), SuperPoly::one());
        let mixed = VField::new(th(), th());
        assert!(divergence(&mixed).is_err());
    }

    #[test]
    fn d_theta_examples() {
        assert_eq!(d_theta(&t()), th());
        assert_eq!(d_theta(&d_theta(&t())), SuperPoly::constant(int(-1)));
        assert!(d_theta(&SuperPoly::one()).is_zero());
    }

    #[test]
    fn field_parity_rules() {
        assert_eq!(VField::d_odd().field_parity(), FieldParity::Odd);
        assert_eq!(
            contact_field(&t()).unwrap().field_parity(),
            FieldParity::Even
        );
        assert_eq!(
            VField::new(SuperPoly::one(), SuperPoly::one()).field_parity(),
            FieldParity::Mixed
        );
        let half = VField::d_even().scale(&rat(1, 2));
        assert_eq!(half.parity(), Some(Parity::Even));
    }
}
