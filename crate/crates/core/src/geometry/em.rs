use crate::error::{Error, Result};
use crate::exterior::{ext_d, Form};
use crate::symbolic::{Chart, Expr};

use super::hodge::hodge;
use super::metric::Metric;

/// Electromagnetic 2-form on a `(t, x, y, z)` chart (units `c = 1`):
/// `F = (E₁dx + E₂dy + E₃dz)∧dt + B₁ dy∧dz + B₂ dz∧dx + B₃ dx∧dy`.
///
/// With this sign choice `dF = 0` is Faraday plus the absence of monopoles,
/// and `d*F = *J` is Gauss plus Ampère for the source 1-form `J`.
pub fn build_em_form(e: &[Expr; 3], b: &[Expr; 3], chart: &Chart) -> Result<Form> {
    if chart.dim() != 4 {
        return Err(Error::Chart(format!(
            "electromagnetic form needs a (t, x, y, z) chart, got {chart}"
        )));
    }
    let [e1, e2, e3] = e.clone();
    let [b1, b2, b3] = b.clone();
    Form::from_components(
        chart,
        2,
        [
            (vec![0, 1], -e1),
            (vec![0, 2], -e2),
            (vec![0, 3], -e3),
            (vec![1, 2], b3),
            (vec![1, 3], -b2),
            (vec![2, 3], b1),
        ],
    )
}

/// `(dF, d*F − *J)`; both vanish exactly when Maxwell's equations hold.
pub fn maxwell_residual(f: &Form, j: &Form, g: &Metric) -> Result<(Form, Form)> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch(format!("F must be a 2-form, got degree {}", f.degree())));
    }
    if j.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("J must be a 1-form, got degree {}", j.degree())));
    }
    if f.chart() != j.chart() {
        return Err(Error::ChartMismatch(format!("F on {} vs J on {}", f.chart(), j.chart())));
    }
    if g.dim() != 4 {
        return Err(Error::Chart(format!("Maxwell residual needs a 4-dimensional chart, got {}", g.chart())));
    }
    let homogeneous = ext_d(f);
    let sourced = ext_d(&hodge(f, g)?).sub(&hodge(j, g)?)?;
    Ok((homogeneous, sourced))
}
