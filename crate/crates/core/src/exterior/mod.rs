//! Skew-symmetric differential forms on a single chart.

mod closure;
mod form;
mod ops;

pub use closure::{classify_closure, verify_potential, ClosureReport, ClosureStatus};
pub use form::{increasing_tuples, index_key, sort_with_sign, Form};
pub use ops::{ext_d, interior_product, linear_combine, pullback, wedge, SubmanifoldMap, VectorField};
