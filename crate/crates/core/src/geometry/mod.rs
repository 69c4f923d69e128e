//! Metrics, Hodge duality and the electromagnetic field form.

mod em;
mod hodge;
mod metric;

pub use em::{build_em_form, maxwell_residual};
pub use hodge::{codifferential, double_dual_sign, hodge};
pub use metric::Metric;
