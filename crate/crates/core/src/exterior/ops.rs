use crate::error::{Error, Result};
use crate::symbolic::{diff, matrix, Chart, Expr};

use super::form::{increasing_tuples, scaled, sort_with_sign, Form};

/// Parameterized map `u ↦ x(u)` from a source chart into a target chart.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldMap {
    source: Chart,
    target: Chart,
    map: Vec<Expr>,
}

impl SubmanifoldMap {
    pub fn new(source: Chart, target: Chart, map: Vec<Expr>) -> Result<Self> {
        if map.len() != target.dim() {
            return Err(Error::ChartMismatch(format!(
                "map has {} components, target chart {} has dimension {}",
                map.len(),
                target,
                target.dim()
            )));
        }
        for e in &map {
            for s in e.free_symbols() {
                if target.index_of(&s).is_some() && source.index_of(&s).is_none() {
                    return Err(Error::ChartMismatch(format!(
                        "map component {e} uses target coordinate `{s}`"
                    )));
                }
            }
        }
        Ok(SubmanifoldMap { source, target, map })
    }

    pub fn identity(chart: &Chart) -> Self {
        SubmanifoldMap {
            source: chart.clone(),
            target: chart.clone(),
            map: chart.coords(),
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn map(&self) -> &[Expr] {
        &self.map
    }

    /// `J[i][j] = ∂x^i/∂u^j`.
    pub fn jacobian(&self) -> matrix::Matrix {
        self.map
            .iter()
            .map(|xi| self.source.names().iter().map(|u| diff(xi, u)).collect())
            .collect()
    }

    /// Substitute `x(u)` for the target coordinates of `e`.
    pub fn substitute(&self, e: &Expr) -> Expr {
        let target = &self.target;
        let map = &self.map;
        e.substitute(&|s| target.index_of(s).map(|i| map[i].clone()))
    }
}

/// Vector field `Σ v^i ∂_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    chart: Chart,
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: &Chart, components: Vec<Expr>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::ChartMismatch(format!(
                "vector field with {} components on a {}-dimensional chart",
                components.len(),
                chart.dim()
            )));
        }
        Ok(VectorField {
            chart: chart.clone(),
            components,
        })
    }

    /// Coordinate vector field `∂_i`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let components = (0..chart.dim())
            .map(|j| if i == j { Expr::one() } else { Expr::zero() })
            .collect();
        VectorField {
            chart: chart.clone(),
            components,
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }
}

fn same_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a != b {
        return Err(Error::ChartMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Graded-commutative exterior product.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    same_chart(a.chart(), b.chart())?;
    let mut out = Form::zero(a.chart(), a.degree() + b.degree());
    for (ka, va) in a.components() {
        for (kb, vb) in b.components() {
            let merged: Vec<usize> = ka.iter().chain(kb).copied().collect();
            if let Some((sorted, sign)) = sort_with_sign(&merged) {
                out.accumulate(sorted, scaled(sign, va * vb));
            }
        }
    }
    Ok(out.finalize())
}

/// Exterior derivative. On a top-degree form the result is the empty form of
/// degree `n + 1`.
pub fn ext_d(a: &Form) -> Form {
    let chart = a.chart();
    let mut out = Form::zero(chart, a.degree() + 1);
    for (k, v) in a.components() {
        for j in 0..chart.dim() {
            if k.contains(&j) {
                continue;
            }
            let partial = diff(v, &chart.names()[j]);
            if partial.is_zero_literal() {
                continue;
            }
            let mut idx = Vec::with_capacity(k.len() + 1);
            idx.push(j);
            idx.extend_from_slice(k);
            let (sorted, sign) = sort_with_sign(&idx).expect("distinct indices");
            out.accumulate(sorted, scaled(sign, partial));
        }
    }
    out.finalize()
}

/// `Σ coeffs[i] * forms[i]`.
pub fn linear_combine(coeffs: &[Expr], forms: &[Form]) -> Result<Form> {
    if coeffs.len() != forms.len() {
        return Err(Error::Invalid(format!(
            "{} coefficients for {} forms",
            coeffs.len(),
            forms.len()
        )));
    }
    let Some(first) = forms.first() else {
        return Err(Error::Invalid("linear combination of no forms".into()));
    };
    let mut out = Form::zero(first.chart(), first.degree());
    for (c, f) in coeffs.iter().zip(forms) {
        same_chart(first.chart(), f.chart())?;
        if f.degree() != first.degree() {
            return Err(Error::DegreeMismatch(format!(
                "degree {} vs degree {}",
                first.degree(),
                f.degree()
            )));
        }
        for (k, v) in f.components() {
            out.accumulate(k.clone(), c * v);
        }
    }
    Ok(out.finalize())
}

/// Pull a form on `phi.target` back along `phi` to `phi.source`.
pub fn pullback(phi: &SubmanifoldMap, a: &Form) -> Result<Form> {
    same_chart(phi.target(), a.chart())?;
    let source = phi.source();
    let p = a.degree();
    let mut out = Form::zero(source, p);
    if p > source.dim() {
        return Ok(out);
    }
    let jac = phi.jacobian();
    let targets = increasing_tuples(source.dim(), p);
    for (k, v) in a.components() {
        let value = phi.substitute(v);
        for cols in &targets {
            // Coefficient of du^{cols} in dx^{k1} ∧ ... ∧ dx^{kp} is the minor J[k, cols].
            let m = matrix::minor(&jac, k, cols);
            if m.is_zero_literal() {
                continue;
            }
            out.accumulate(cols.clone(), &value * m);
        }
    }
    Ok(out.finalize())
}

/// Contraction `ι_v a`.
pub fn interior_product(v: &VectorField, a: &Form) -> Result<Form> {
    same_chart(v.chart(), a.chart())?;
    if a.degree() == 0 {
        return Err(Error::Degree("interior product of a 0-form".into()));
    }
    let mut out = Form::zero(a.chart(), a.degree() - 1);
    for (k, value) in a.components() {
        for (r, &i) in k.iter().enumerate() {
            let vi = &v.components()[i];
            if vi.is_zero_literal() {
                continue;
            }
            let mut rest = k.clone();
            rest.remove(r);
            out.accumulate(rest, scaled(if r % 2 == 0 { 1 } else { -1 }, vi * value));
        }
    }
    Ok(out.finalize())
}
