//! Supercommutative calculus on the (1|1) superstring: polynomials in one
//! even and one odd variable, vector fields, contact geometry, divergence
//! and Lie derivatives of densities and tensor fields.

pub mod density;
pub mod field;
pub mod poly;
pub mod tensor;

pub use density::{lie_derivative, Density, DensityConvention};
pub use field::{
    apply_vfield, contact_bracket, contact_field, d_theta, divergence, k_theta, vfield_bracket,
    FieldParity, VField,
};
pub use poly::{koszul, monomials_up_to, spoly_mul, Coords, Mono, Parity, SuperPoly};
pub use tensor::{lie_derivative_tensor, Gl11Basis, Gl11Rep, TensorField};
