//! Affine connections with torsion, the commutator 2-form of a 1-form, and
//! the curvature stack through the Einstein tensor.

mod affine;
mod curvature;
mod tensor;

pub use affine::{
    christoffel, covariant_derivative_1form, evolutionary_commutator, torsion, torsion_witness,
    Connection,
};
pub use curvature::{bianchi_residual, einstein_tensor, ricci_and_scalar, riemann, Curvature};
pub use tensor::{Tensor, Variance};
