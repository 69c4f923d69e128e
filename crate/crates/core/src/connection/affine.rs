use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::geometry::Metric;
use crate::symbolic::{diff, Chart, Expr};

use super::tensor::{Tensor, Variance};

const UPPER_LOWER_LOWER: [Variance; 3] = [Variance::Upper, Variance::Lower, Variance::Lower];

/// Affine connection `Γ^σ_{αβ}`, not necessarily symmetric. The first lower
/// index `α` is the differentiation slot: `A_{β;α} = ∂_α A_β − Γ^σ_{αβ} A_σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    gamma: Tensor,
}

impl Connection {
    /// `gamma[σ][α][β] = Γ^σ_{αβ}`.
    pub fn new(chart: &Chart, gamma: Vec<Vec<Vec<Expr>>>) -> Result<Connection> {
        let n = chart.dim();
        let shaped = gamma.len() == n
            && gamma
                .iter()
                .all(|rows| rows.len() == n && rows.iter().all(|row| row.len() == n));
        if !shaped {
            return Err(Error::InvalidConnection(format!(
                "connection coefficients must be {n}x{n}x{n} for chart {chart}"
            )));
        }
        let gamma = Tensor::from_fn(chart, &UPPER_LOWER_LOWER, |i| gamma[i[0]][i[1]][i[2]].clone());
        Ok(Connection { gamma })
    }

    pub fn zero(chart: &Chart) -> Connection {
        Connection {
            gamma: Tensor::zero(chart, &UPPER_LOWER_LOWER),
        }
    }

    /// Zero connection except for the listed `(σ, α, β, value)` entries.
    pub fn sparse(chart: &Chart, entries: &[(usize, usize, usize, Expr)]) -> Result<Connection> {
        let n = chart.dim();
        let mut gamma = Tensor::zero(chart, &UPPER_LOWER_LOWER);
        for (s, a, b, v) in entries {
            if *s >= n || *a >= n || *b >= n {
                return Err(Error::InvalidConnection(format!(
                    "index ({s}, {a}, {b}) out of range for chart {chart}"
                )));
            }
            gamma.set(&[*s, *a, *b], v.clone());
        }
        Ok(Connection { gamma })
    }

    pub fn chart(&self) -> &Chart {
        self.gamma.chart()
    }

    pub fn dim(&self) -> usize {
        self.chart().dim()
    }

    /// `Γ^σ_{αβ}`.
    pub fn get(&self, sigma: usize, alpha: usize, beta: usize) -> &Expr {
        self.gamma.get(&[sigma, alpha, beta])
    }

    pub fn coefficients(&self) -> &Tensor {
        &self.gamma
    }
}

fn check_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a != b {
        return Err(Error::ChartMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Levi-Civita connection `Γ^σ_{αβ} = ½ g^{σρ}(∂_α g_{ρβ} + ∂_β g_{ρα} − ∂_ρ g_{αβ})`.
pub fn christoffel(g: &Metric) -> Connection {
    let chart = g.chart();
    let names = chart.names();
    let n = chart.dim();
    // dg[k][i][j] = ∂_k g_{ij}
    let dg: Vec<Vec<Vec<Expr>>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| (0..n).map(|j| diff(g.component(i, j), &names[k])).collect())
                .collect()
        })
        .collect();
    let ginv = g.inverse();
    let half = Expr::rational(1, 2);
    let gamma = Tensor::from_fn(chart, &UPPER_LOWER_LOWER, |idx| {
        let (s, a, b) = (idx[0], idx[1], idx[2]);
        let terms = (0..n)
            .filter(|&r| !ginv[s][r].is_zero_literal())
            .map(|r| {
                let bracket = dg[a][r][b].clone() + dg[b][r][a].clone() - dg[r][a][b].clone();
                ginv[s][r].clone() * bracket
            })
            .collect();
        half.clone() * Expr::sum(terms)
    });
    Connection { gamma }
}

/// `T^σ_{αβ} = Γ^σ_{αβ} − Γ^σ_{βα}`.
pub fn torsion(c: &Connection) -> Tensor {
    Tensor::from_fn(c.chart(), &UPPER_LOWER_LOWER, |i| {
        c.get(i[0], i[1], i[2]).clone() - c.get(i[0], i[2], i[1]).clone()
    })
}

/// Covariant derivative of a 1-form; entry `[β, α]` holds
/// `A_{β;α} = ∂_α A_β − Γ^σ_{αβ} A_σ`.
pub fn covariant_derivative_1form(a: &Form, c: &Connection) -> Result<Tensor> {
    check_chart(a.chart(), c.chart())?;
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("expected a 1-form, got degree {}", a.degree())));
    }
    let n = c.dim();
    let names = c.chart().names();
    let comps: Vec<Expr> = (0..n).map(|i| a.component(&[i])).collect();
    Ok(Tensor::from_fn(c.chart(), &[Variance::Lower, Variance::Lower], |i| {
        let (beta, alpha) = (i[0], i[1]);
        let mut terms = vec![diff(&comps[beta], &names[alpha])];
        for (s, a_s) in comps.iter().enumerate() {
            let gamma = c.get(s, alpha, beta);
            if !gamma.is_zero_literal() && !a_s.is_zero_literal() {
                terms.push(-(gamma.clone() * a_s.clone()));
            }
        }
        Expr::sum(terms)
    }))
}

/// Commutator 2-form of a 1-form under a connection:
/// `K_{αβ} = (∂_α A_β − ∂_β A_α) + (Γ^σ_{βα} − Γ^σ_{αβ}) A_σ`.
/// Reduces to `dA` exactly when the connection is symmetric.
pub fn evolutionary_commutator(a: &Form, c: &Connection) -> Result<Form> {
    check_chart(a.chart(), c.chart())?;
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("expected a 1-form, got degree {}", a.degree())));
    }
    let n = c.dim();
    let names = c.chart().names();
    let comps: Vec<Expr> = (0..n).map(|i| a.component(&[i])).collect();
    let mut entries = Vec::new();
    for alpha in 0..n {
        for beta in alpha + 1..n {
            let mut terms = vec![
                diff(&comps[beta], &names[alpha]),
                -diff(&comps[alpha], &names[beta]),
            ];
            for (s, a_s) in comps.iter().enumerate() {
                if a_s.is_zero_literal() {
                    continue;
                }
                let asym = c.get(s, beta, alpha).clone() - c.get(s, alpha, beta).clone();
                terms.push(asym * a_s.clone());
            }
            entries.push((vec![alpha, beta], Expr::sum(terms)));
        }
    }
    Form::from_components(c.chart(), 2, entries)
}

/// Witness that torsion obstructs closure: for the first nonzero
/// `T^σ_{αβ}` (α < β) the constant form `a = dx^σ` has `da = 0` while its
/// commutator has `K_{αβ} = −T^σ_{αβ}`. `None` for symmetric connections.
pub fn torsion_witness(c: &Connection) -> Option<(Form, Form)> {
    let t = torsion(c);
    let n = c.dim();
    for s in 0..n {
        for alpha in 0..n {
            for beta in alpha + 1..n {
                if !t.get(&[s, alpha, beta]).is_zero_literal() {
                    let a = Form::basis(c.chart(), &[s]).expect("index in range");
                    let k = evolutionary_commutator(&a, c).expect("same chart");
                    return Some((a, k));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::ext_d;
    use crate::symbolic::simplify;

    fn plane() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn twisted(c: &Chart) -> Connection {
        Connection::sparse(c, &[(0, 0, 1, Expr::sym("c"))]).unwrap()
    }

    #[test]
    fn flat_metrics_have_zero_christoffels() {
        let c = Chart::new(&["t", "x", "y", "z"]).unwrap();
        assert!(christoffel(&Metric::minkowski(&c)).coefficients().is_zero_tensor());
        assert!(christoffel(&Metric::euclidean(&c)).coefficients().is_zero_tensor());
    }

    #[test]
    fn sphere_christoffels() {
        let c = Chart::new(&["th", "ph"]).unwrap();
        let th = Expr::sym("th");
        let g = Metric::diagonal(&c, vec![Expr::one(), th.clone().sin().pow(2)], 1).unwrap();
        let gamma = christoffel(&g);
        assert_eq!(gamma.get(0, 1, 1), &simplify(&-(th.clone().sin() * th.clone().cos())));
        let cot = simplify(&(th.clone().cos() / th.clone().sin()));
        assert_eq!(gamma.get(1, 0, 1), &cot);
        assert_eq!(gamma.get(1, 1, 0), &cot);
        assert!(gamma.get(0, 0, 0).is_zero_literal());
        assert!(torsion(&gamma).is_zero_tensor());
    }

    #[test]
    fn frw_christoffels() {
        let c = Chart::new(&["t", "x", "y", "z"]).unwrap();
        let a = Expr::apply("a", Expr::sym("t"));
        let a2 = a.clone().pow(2);
        let g = Metric::diagonal(&c, vec![Expr::int(-1), a2.clone(), a2.clone(), a2], -1).unwrap();
        let gamma = christoffel(&g);
        let da = simplify(&diff(&a, "t"));
        assert_eq!(gamma.get(0, 1, 1), &simplify(&(a.clone() * da.clone())));
        assert_eq!(gamma.get(1, 0, 1), &simplify(&(da / a)));
    }

    #[test]
    fn torsion_of_sparse_connection() {
        let c = plane();
        let t = torsion(&twisted(&c));
        assert_eq!(t.get(&[0, 0, 1]), &Expr::sym("c"));
        assert_eq!(t.get(&[0, 1, 0]), &simplify(&-Expr::sym("c")));
        assert!(torsion(&Connection::zero(&c)).is_zero_tensor());
    }

    #[test]
    fn covariant_derivative_examples() {
        let c = plane();
        let dx = Form::basis(&c, &[0]).unwrap();
        let d = covariant_derivative_1form(&dx, &twisted(&c)).unwrap();
        // A_{2;1} in one-based notation
        assert_eq!(d.get(&[1, 0]), &simplify(&-Expr::sym("c")));
        let plain = covariant_derivative_1form(
            &Form::one_form(&c, vec![Expr::sym("y"), Expr::zero()]).unwrap(),
            &Connection::zero(&c),
        )
        .unwrap();
        assert_eq!(plain.get(&[0, 1]), &Expr::one());
        assert!(covariant_derivative_1form(&dx, &Connection::zero(&c)).unwrap().is_zero_tensor());
    }

    #[test]
    fn commutator_examples() {
        let c = plane();
        let ydx = Form::one_form(&c, vec![Expr::sym("y"), Expr::zero()]).unwrap();
        let k = evolutionary_commutator(&ydx, &Connection::zero(&c)).unwrap();
        assert_eq!(k, ext_d(&ydx));
        assert_eq!(k.component(&[0, 1]), Expr::int(-1));
        let dx = Form::basis(&c, &[0]).unwrap();
        let k = evolutionary_commutator(&dx, &twisted(&c)).unwrap();
        assert_eq!(k.component(&[0, 1]), simplify(&-Expr::sym("c")));
    }

    #[test]
    fn witness() {
        let c = plane();
        let (a, k) = torsion_witness(&twisted(&c)).unwrap();
        assert!(ext_d(&a).is_zero_form());
        assert!(!k.is_zero_form());
        assert!(torsion_witness(&Connection::zero(&c)).is_none());
    }

    #[test]
    fn bad_shape() {
        let c = plane();
        assert!(Connection::new(&c, vec![vec![vec![Expr::zero(); 2]; 2]]).is_err());
    }
}
