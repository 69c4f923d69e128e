//! Degenerate transformations: Legendre transform and its Hessian, Jacobian
//! degeneracy, Poisson brackets, integrating factors and the
//! Poincaré–Cartan form.

mod degeneracy;
mod hamilton;
mod integrating;
mod legendre;

pub use degeneracy::{jacobian_degeneracy, Degeneracy, DegeneracyReport};
pub use hamilton::{
    flow_check_with, hamilton_field, hamilton_flow_check, poincare_cartan, poisson_bracket,
    reversed_force_field, FlowCheck,
};
pub use integrating::{integrating_factor, IntegratingFactor};
pub use legendre::{inverse_legendre, legendre, HamiltonianSystem, PhaseSpace, QuadraticLagrangian};
