use serde::{Deserialize, Serialize};

use super::field::{apply_vfield, divergence, VField};
use super::poly::SuperPoly;
use crate::error::{GrcError, Result};
use crate::rat::{fmt_rat, Rat};

/// How the weight of a density is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityConvention {
    /// `f · vvol^w`.
    VvolPower,
    /// `f · α₁^{μ/2}` on the contact superstring.
    ContactHalfPower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub coefficient: SuperPoly,
    #[serde(with = "crate::rat::serde_rat")]
    pub weight: Rat,
    pub convention: DensityConvention,
}

impl Density {
    pub fn new(coefficient: SuperPoly, weight: Rat) -> Self {
        Density {
            coefficient,
            weight,
            convention: DensityConvention::VvolPower,
        }
    }

    pub fn contact(coefficient: SuperPoly, mu: Rat) -> Self {
        Density {
            coefficient,
            weight: mu,
            convention: DensityConvention::ContactHalfPower,
        }
    }

    /// Rewrites in the `vvol^w` convention. `α₁^{μ/2}` transforms like
    /// `vvol^μ` because `Div K_f = ∂_t f` (checked in the test-suite
    /// against every contact monomial), so the dictionary is `w = μ`.
    pub fn to_vvol(&self) -> Density {
        Density::new(self.coefficient.clone(), self.weight.clone())
    }

    pub fn require_vvol(&self, expected: &Rat) -> Result<()> {
        if self.weight != *expected {
            return Err(GrcError::WeightMismatch {
                expected: fmt_rat(expected),
                got: fmt_rat(&self.weight),
            });
        }
        Ok(())
    }
}

/// `L_X(f vvol^w) = (X(f) + w f Div X) vvol^w`.
pub fn lie_derivative(x: &VField, d: &Density) -> Result<Density> {
    let d = d.to_vvol();
    let div = divergence(x)?;
    let coeff = &apply_vfield(x, &d.coefficient) + &(&d.coefficient * &div).scale(&d.weight);
    Ok(Density::new(coeff, d.weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::supercalc::field::contact_field;

    #[test]
    fn weight_zero_is_plain_action() {
        let x = contact_field(&SuperPoly::mono(1, true)).unwrap();
        let f = SuperPoly::mono(3, false);
        let out = lie_derivative(&x, &Density::new(f.clone(), int(0))).unwrap();
        assert_eq!(out.coefficient, apply_vfield(&x, &f));
    }

    #[test]
    fn euler_field_scales_by_weight() {
        let kt = contact_field(&SuperPoly::t()).unwrap();
        let w = rat(5, 3);
        let out = lie_derivative(&kt, &Density::new(SuperPoly::one(), w.clone())).unwrap();
        assert_eq!(out.coefficient, SuperPoly::constant(w.clone()));
        assert_eq!(out.weight, w);
    }

    #[test]
    fn translation_on_x() {
        let out = lie_derivative(&VField::d_even(), &Density::new(SuperPoly::t(), int(7))).unwrap();
        assert_eq!(out.coefficient, SuperPoly::one());
    }

    #[test]
    fn weight_mismatch_reported() {
        let d = Density::new(SuperPoly::one(), int(1));
        assert!(d.require_vvol(&int(2)).is_err());
        assert!(d.require_vvol(&int(1)).is_ok());
    }
}
