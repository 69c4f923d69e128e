use crate::error::{Error, Result};
use crate::exterior::{classify_closure, ClosureStatus, Form};
use crate::symbolic::{antiderivative, diff, is_zero, simplify, Expr, SamplingPolicy, ZeroTest};

/// `μ` with `μ·w = dψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratingFactor {
    pub mu: Expr,
    pub potential: Expr,
}

/// Integrating factor for `w = M dx + N dy` on a 2-dimensional chart.
///
/// Tries `μ = 1`, then `μ(x) = exp ∫ (M_y − N_x)/N dx`, then
/// `μ(y) = exp ∫ (N_x − M_y)/M dy`. `Ok(None)` means neither single-variable
/// ansatz applies; `NotVerifiable` means a candidate was found but `ψ` could
/// not be constructed and checked.
pub fn integrating_factor(w: &Form, policy: &SamplingPolicy) -> Result<Option<IntegratingFactor>> {
    let chart = w.chart();
    if chart.dim() != 2 {
        return Err(Error::Chart(format!("integrating factor needs a 2-dimensional chart, got {chart}")));
    }
    if w.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("expected a 1-form, got degree {}", w.degree())));
    }
    let (x, y) = (&chart.names()[0], &chart.names()[1]);
    let (m, n) = (w.component(&[0]), w.component(&[1]));
    let m_y = diff(&m, y);
    let n_x = diff(&n, x);

    let mut failed = Vec::new();
    let mut attempt = |mu: Expr| -> Option<IntegratingFactor> {
        let report = classify_closure(&w.scale(&mu), policy);
        match (report.status, report.potential) {
            (ClosureStatus::Exact, Some(psi)) => Some(IntegratingFactor {
                mu,
                potential: psi.value(),
            }),
            _ => {
                failed.push(mu);
                None
            }
        }
    };

    if is_zero(&(&m_y - &n_x), policy) == ZeroTest::Zero {
        if let Some(found) = attempt(Expr::one()) {
            return Ok(Some(found));
        }
    } else {
        let routes = [(&n, x, y, simplify(&(&m_y - &n_x))), (&m, y, x, simplify(&(&n_x - &m_y)))];
        for (denominator, var, other, numerator) in routes {
            if is_zero(denominator, policy) == ZeroTest::Zero {
                continue;
            }
            let h = simplify(&(numerator / denominator.clone()));
            if is_zero(&diff(&h, other), policy) != ZeroTest::Zero {
                continue;
            }
            match antiderivative(&h, var) {
                Some(log_mu) => {
                    if let Some(found) = attempt(simplify(&log_mu.exp())) {
                        return Ok(Some(found));
                    }
                }
                None => {
                    return Err(Error::NotVerifiable(format!(
                        "∫ {h} d{var} is outside the antiderivative table"
                    )))
                }
            }
        }
    }
    match failed.first() {
        None => Ok(None),
        Some(mu) => Err(Error::NotVerifiable(format!(
            "candidate μ = {mu} found, but no verified potential for μ·w"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Chart;

    fn policy() -> SamplingPolicy {
        SamplingPolicy::default()
    }

    #[test]
    fn already_exact() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let w = Form::one_form(&c, vec![Expr::sym("x"), Expr::sym("y")]).unwrap();
        let f = integrating_factor(&w, &policy()).unwrap().unwrap();
        assert_eq!(f.mu, Expr::one());
        assert_eq!(
            f.potential,
            simplify(&((Expr::sym("x").pow(2) + Expr::sym("y").pow(2)) / Expr::int(2)))
        );
    }

    #[test]
    fn factor_in_x() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let w = Form::one_form(&c, vec![Expr::int(2) * Expr::sym("y"), Expr::sym("x")]).unwrap();
        let f = integrating_factor(&w, &policy()).unwrap().unwrap();
        assert_eq!(f.mu, Expr::sym("x"));
        assert_eq!(f.potential, simplify(&(Expr::sym("x").pow(2) * Expr::sym("y"))));
    }

    #[test]
    fn first_law() {
        let c = Chart::new(&["T", "V"]).unwrap();
        let (t, v) = (Expr::sym("T"), Expr::sym("V"));
        let w = Form::one_form(&c, vec![Expr::sym("Cv"), Expr::sym("R") * t.clone() / v.clone()]).unwrap();
        let f = integrating_factor(&w, &policy()).unwrap().unwrap();
        assert_eq!(f.mu, simplify(&t.clone().recip()));
        assert_eq!(f.potential, simplify(&(Expr::sym("Cv") * t.ln() + Expr::sym("R") * v.ln())));
    }

    #[test]
    fn factor_in_y() {
        let c = Chart::new(&["x", "y"]).unwrap();
        // μ = y turns y dx + 2x dy into d(x y²)
        let w = Form::one_form(&c, vec![Expr::sym("y"), Expr::int(2) * Expr::sym("x")]).unwrap();
        let f = integrating_factor(&w, &policy()).unwrap().unwrap();
        assert_eq!(f.mu, Expr::sym("y"));
    }

    #[test]
    fn no_single_variable_factor() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let (x, y) = (Expr::sym("x"), Expr::sym("y"));
        let w = Form::one_form(&c, vec![x.clone() * y.clone().pow(2), x.clone() + y.clone().pow(3)]).unwrap();
        assert_eq!(integrating_factor(&w, &policy()).unwrap(), None);
    }

    #[test]
    fn wrong_shape() {
        let c = Chart::new(&["x", "y", "z"]).unwrap();
        let w = Form::basis(&c, &[0]).unwrap();
        assert!(matches!(integrating_factor(&w, &policy()), Err(Error::Chart(_))));
    }
}
