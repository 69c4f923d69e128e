use crate::error::{Error, Result};
use crate::exterior::{ext_d, increasing_tuples, sort_with_sign, Form};
use crate::symbolic::{matrix, Expr};

use super::metric::Metric;

fn check_chart(a: &Form, g: &Metric) -> Result<()> {
    if a.chart() != g.chart() {
        return Err(Error::ChartMismatch(format!("form on {} vs metric on {}", a.chart(), g.chart())));
    }
    Ok(())
}

/// Hodge dual: `(*a)_J = sqrt|det g| Σ_I a^I ε_{IJ}` with `a^I` the fully
/// raised components and `J` the complement of `I`. Satisfies
/// `**a = s (−1)^{p(n−p)} a` with `s` the determinant sign.
pub fn hodge(a: &Form, g: &Metric) -> Result<Form> {
    check_chart(a, g)?;
    let n = g.dim();
    let p = a.degree();
    if p > n {
        return Err(Error::Degree(format!("degree {p} form on a {n}-dimensional chart")));
    }
    let ginv = g.inverse();
    let mut out = Form::zero(a.chart(), n - p);
    for upper in increasing_tuples(n, p) {
        // a^K = Σ_I det(g^{-1}[K, I]) a_I over increasing I
        let raised = Expr::sum(
            a.components()
                .iter()
                .map(|(lower, v)| matrix::minor(ginv, &upper, lower) * v.clone())
                .collect(),
        );
        let complement: Vec<usize> = (0..n).filter(|i| !upper.contains(i)).collect();
        let order: Vec<usize> = upper.iter().chain(&complement).copied().collect();
        let (_, sign) = sort_with_sign(&order).expect("permutation");
        out.accumulate(complement, Expr::int(sign) * g.volume_factor().clone() * raised);
    }
    Ok(out.finalize())
}

/// `s (−1)^{p(n−p)}`, the sign of `**` on `p`-forms.
pub fn double_dual_sign(g: &Metric, p: usize) -> i64 {
    let n = g.dim();
    let base = i64::from(g.det_sign());
    if (p * (n - p)) % 2 == 0 {
        base
    } else {
        -base
    }
}

/// Codifferential `δa = s (−1)^{n(p+1)+1} *d*a`; `δ` of a 0-form is the zero
/// 0-form. On Euclidean space `δ(Σ a_i dx^i) = −div a`.
pub fn codifferential(a: &Form, g: &Metric) -> Result<Form> {
    check_chart(a, g)?;
    let p = a.degree();
    if p == 0 {
        return Ok(Form::zero(a.chart(), 0));
    }
    let n = g.dim();
    let exponent = n * (p + 1) + 1;
    let sign = i64::from(g.det_sign()) * if exponent % 2 == 0 { 1 } else { -1 };
    let inner = hodge(&ext_d(&hodge(a, g)?), g)?;
    Ok(inner.scale(&Expr::int(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Chart, SamplingPolicy, ZeroTest};

    fn plane() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn spacetime() -> Chart {
        Chart::new(&["t", "x", "y", "z"]).unwrap()
    }

    #[test]
    fn euclidean_plane_duals() {
        let c = plane();
        let g = Metric::euclidean(&c);
        let dx = Form::basis(&c, &[0]).unwrap();
        let dy = Form::basis(&c, &[1]).unwrap();
        assert_eq!(hodge(&dx, &g).unwrap(), dy);
        assert_eq!(hodge(&dy, &g).unwrap(), dx.neg());
        let f = Form::scalar(&c, Expr::sym("f"));
        let area = Form::monomial(&c, &[0, 1], Expr::sym("f")).unwrap();
        assert_eq!(hodge(&f, &g).unwrap(), area);
    }

    #[test]
    fn minkowski_dual_of_dx_dy() {
        let c = spacetime();
        let g = Metric::minkowski(&c);
        let dxdy = Form::basis(&c, &[1, 2]).unwrap();
        // -dz∧dt = dt∧dz
        assert_eq!(hodge(&dxdy, &g).unwrap(), Form::basis(&c, &[0, 3]).unwrap());
        let back = hodge(&hodge(&dxdy, &g).unwrap(), &g).unwrap();
        assert_eq!(back, dxdy.neg());
        assert_eq!(double_dual_sign(&g, 2), -1);
    }

    #[test]
    fn sphere_involution() {
        let c = Chart::new(&["th", "ph"]).unwrap();
        let g = Metric::diagonal(&c, vec![Expr::one(), Expr::sym("th").sin().pow(2)], 1).unwrap();
        let a = Form::one_form(&c, vec![Expr::sym("ph"), Expr::sym("th").cos()]).unwrap();
        let back = hodge(&hodge(&a, &g).unwrap(), &g).unwrap();
        let diff = back.add(&a).unwrap();
        assert_eq!(diff.zero_test(&SamplingPolicy::default()), ZeroTest::Zero);
    }

    #[test]
    fn codifferential_examples() {
        let c = plane();
        let g = Metric::euclidean(&c);
        let dx = Form::basis(&c, &[0]).unwrap();
        assert!(codifferential(&dx, &g).unwrap().is_zero_form());
        let xdx = Form::monomial(&c, &[0], Expr::sym("x")).unwrap();
        assert_eq!(codifferential(&xdx, &g).unwrap().value(), Expr::int(-1));
        let f = Form::scalar(&c, Expr::sym("x"));
        let d0 = codifferential(&f, &g).unwrap();
        assert_eq!(d0.degree(), 0);
        assert!(d0.is_zero_form());
    }

    #[test]
    fn chart_mismatch() {
        let g = Metric::euclidean(&plane());
        let other = Chart::new(&["u", "v"]).unwrap();
        assert!(matches!(
            hodge(&Form::basis(&other, &[0]).unwrap(), &g),
            Err(Error::ChartMismatch(_))
        ));
    }
}
