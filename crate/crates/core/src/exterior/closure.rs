use std::fmt;

use crate::symbolic::{
    antiderivative, definite_unit_integral, diff, is_zero, simplify, Expr, SamplingPolicy,
    ZeroTest,
};

use super::form::Form;
use super::ops::{ext_d, interior_product, VectorField};

/// Scaling variable of the homotopy integral; not a valid identifier, so it
/// never collides with user symbols.
const SCALE: &str = "_t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosureStatus {
    Closed,
    Exact,
    NonClosed,
}

impl fmt::Display for ClosureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureStatus::Closed => "Closed",
            ClosureStatus::Exact => "Exact",
            ClosureStatus::NonClosed => "NonClosed",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub status: ClosureStatus,
    /// The differential `dα`.
    pub d_form: Form,
    /// `ψ` with `dψ = α`; present only for `Exact`.
    pub potential: Option<Form>,
    /// Components of `dα` not shown to vanish; present only for `NonClosed`.
    pub commutator: Option<Form>,
    /// Some component of `dα` could be neither proven zero nor nonzero.
    pub uncertain: bool,
}

/// Classify `a` as closed, exact (with a verified potential) or non-closed.
pub fn classify_closure(a: &Form, policy: &SamplingPolicy) -> ClosureReport {
    let d_form = ext_d(a);
    let mut uncertain = false;
    let mut residual = Form::zero(a.chart(), d_form.degree());
    for (k, v) in d_form.components() {
        match is_zero(v, policy) {
            ZeroTest::Zero => {}
            verdict => {
                uncertain |= verdict == ZeroTest::Unknown;
                residual.accumulate(k.clone(), v.clone());
            }
        }
    }
    if !residual.is_zero_form() {
        return ClosureReport {
            status: ClosureStatus::NonClosed,
            d_form,
            potential: None,
            commutator: Some(residual.finalize()),
            uncertain,
        };
    }
    let potential = if a.degree() == 0 {
        None
    } else {
        [homotopy_potential(a), axis_potential(a)]
            .into_iter()
            .flatten()
            .find(|psi| verify_potential(psi, a, policy))
    };
    ClosureReport {
        status: if potential.is_some() {
            ClosureStatus::Exact
        } else {
            ClosureStatus::Closed
        },
        d_form,
        potential,
        commutator: None,
        uncertain: false,
    }
}

/// `dψ − a` vanishes componentwise.
pub fn verify_potential(psi: &Form, a: &Form, policy: &SamplingPolicy) -> bool {
    match ext_d(psi).sub(a) {
        Ok(diff) => diff.zero_test(policy) == ZeroTest::Zero,
        Err(_) => false,
    }
}

/// `ψ = ∫₀¹ t^{p−1} ι_X a(t·x) dt` with `X` the radial field.
fn homotopy_potential(a: &Form) -> Option<Form> {
    let chart = a.chart();
    let t = Expr::sym(SCALE);
    let p = a.degree() as i64;
    let scaled_coords: Vec<Expr> = chart.coords().into_iter().map(|x| &t * x).collect();
    let weight = t.clone().pow(p - 1);
    let scaled = a.map_components(|v| {
        let at_tx = v.substitute(&|s| chart.index_of(s).map(|i| scaled_coords[i].clone()));
        &weight * at_tx
    });
    let radial = VectorField::new(chart, chart.coords()).ok()?;
    let integrand = interior_product(&radial, &scaled).ok()?;
    let mut out = Form::zero(chart, a.degree() - 1);
    for (k, v) in integrand.components() {
        out.accumulate(k.clone(), definite_unit_integral(v, SCALE)?);
    }
    Some(out.finalize())
}

/// Line integral along coordinate axes, one variable at a time: for a closed
/// 1-form `Σ a_i dx^i`, `ψ = Σ_i ∫ (a_i − ∂_i ψ_{<i}) dx^i`. Works where the
/// homotopy from the origin is singular (e.g. `dT/T`).
fn axis_potential(a: &Form) -> Option<Form> {
    if a.degree() != 1 {
        return None;
    }
    let chart = a.chart();
    let mut psi = Expr::zero();
    for (i, name) in chart.names().iter().enumerate() {
        let rest = simplify(&(a.component(&[i]) - diff(&psi, name)));
        if rest.is_zero_literal() {
            continue;
        }
        psi = simplify(&(psi + antiderivative(&rest, name)?));
    }
    Some(Form::scalar(chart, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Chart;

    fn plane() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn policy() -> SamplingPolicy {
        SamplingPolicy::default()
    }

    #[test]
    fn exact_product() {
        let c = plane();
        let a = Form::one_form(&c, vec![Expr::sym("y"), Expr::sym("x")]).unwrap();
        let r = classify_closure(&a, &policy());
        assert_eq!(r.status, ClosureStatus::Exact);
        assert_eq!(r.potential.unwrap().value(), simplify(&(Expr::sym("x") * Expr::sym("y"))));
    }

    #[test]
    fn exact_radial() {
        let c = plane();
        let a = Form::one_form(&c, vec![Expr::sym("x"), Expr::sym("y")]).unwrap();
        let r = classify_closure(&a, &policy());
        assert_eq!(r.status, ClosureStatus::Exact);
        let expected = simplify(&((Expr::sym("x").pow(2) + Expr::sym("y").pow(2)) / Expr::int(2)));
        assert_eq!(r.potential.unwrap().value(), expected);
    }

    #[test]
    fn non_closed() {
        let c = plane();
        let a = Form::one_form(&c, vec![Expr::sym("y"), Expr::zero()]).unwrap();
        let r = classify_closure(&a, &policy());
        assert_eq!(r.status, ClosureStatus::NonClosed);
        assert_eq!(r.commutator.unwrap().component(&[0, 1]), Expr::int(-1));
        assert!(!r.uncertain);
    }

    #[test]
    fn entropy_form_needs_axis_integration() {
        let c = Chart::new(&["T", "V"]).unwrap();
        let a = Form::one_form(
            &c,
            vec![Expr::sym("Cv") / Expr::sym("T"), Expr::sym("R") / Expr::sym("V")],
        )
        .unwrap();
        let r = classify_closure(&a, &policy());
        assert_eq!(r.status, ClosureStatus::Exact);
        let expected =
            simplify(&(Expr::sym("Cv") * Expr::sym("T").ln() + Expr::sym("R") * Expr::sym("V").ln()));
        assert_eq!(r.potential.unwrap().value(), expected);
    }

    #[test]
    fn area_form_has_potential() {
        let c = plane();
        let area = Form::basis(&c, &[0, 1]).unwrap();
        let r = classify_closure(&area, &policy());
        assert_eq!(r.status, ClosureStatus::Exact);
        assert!(verify_potential(&r.potential.unwrap(), &area, &policy()));
    }

    #[test]
    fn closed_without_table_potential() {
        let c = plane();
        // d(sin(x^2 y)) is closed but its homotopy integrand is outside the table
        let f = Form::scalar(&c, (Expr::sym("x").pow(2) * Expr::sym("y")).sin());
        let a = ext_d(&f);
        let r = classify_closure(&a, &policy());
        assert_ne!(r.status, ClosureStatus::NonClosed);
        if let Some(psi) = r.potential {
            assert!(verify_potential(&psi, &a, &policy()));
        }
    }

    #[test]
    fn constant_scalar_is_closed() {
        let c = plane();
        let r = classify_closure(&Form::scalar(&c, Expr::int(3)), &policy());
        assert_eq!(r.status, ClosureStatus::Closed);
        assert!(r.potential.is_none());
    }
}
