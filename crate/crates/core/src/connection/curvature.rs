use rayon::prelude::*;

use crate::geometry::Metric;
use crate::symbolic::{diff, simplify, Expr};

use super::affine::{christoffel, Connection};
use super::tensor::{Tensor, Variance};

/// `R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ} Γ^λ_{νσ} − Γ^ρ_{νλ} Γ^λ_{μσ}`.
///
/// Components are computed in parallel; the result does not depend on
/// scheduling.
pub fn riemann(c: &Connection) -> Tensor {
    let chart = c.chart();
    let names = chart.names();
    let n = chart.dim();
    let variance = [Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower];
    let indices = Tensor::zero(chart, &variance).indices();
    let data: Vec<Expr> = indices
        .par_iter()
        .map(|i| {
            let (rho, sigma, mu, nu) = (i[0], i[1], i[2], i[3]);
            if mu == nu {
                return Expr::zero();
            }
            let mut terms = vec![
                diff(c.get(rho, nu, sigma), &names[mu]),
                -diff(c.get(rho, mu, sigma), &names[nu]),
            ];
            for l in 0..n {
                let a = c.get(rho, mu, l);
                let b = c.get(l, nu, sigma);
                if !a.is_zero_literal() && !b.is_zero_literal() {
                    terms.push(a.clone() * b.clone());
                }
                let a = c.get(rho, nu, l);
                let b = c.get(l, mu, sigma);
                if !a.is_zero_literal() && !b.is_zero_literal() {
                    terms.push(-(a.clone() * b.clone()));
                }
            }
            simplify(&Expr::sum(terms))
        })
        .collect();
    Tensor::from_data(chart, &variance, data)
}

/// `R_{μν} = R^ρ_{μρν}` and `R = g^{μν} R_{μν}`.
pub fn ricci_and_scalar(r4: &Tensor, g: &Metric) -> (Tensor, Expr) {
    let chart = r4.chart();
    let n = chart.dim();
    let ricci = Tensor::from_fn(chart, &[Variance::Lower, Variance::Lower], |i| {
        Expr::sum((0..n).map(|rho| r4.get(&[rho, i[0], rho, i[1]]).clone()).collect())
    });
    let ginv = g.inverse();
    let mut terms = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            if !ginv[mu][nu].is_zero_literal() {
                terms.push(ginv[mu][nu].clone() * ricci.get(&[mu, nu]).clone());
            }
        }
    }
    (ricci, simplify(&Expr::sum(terms)))
}

/// The Levi-Civita curvature pipeline of a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    pub christoffel: Connection,
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub scalar: Expr,
    pub einstein: Tensor,
}

impl Curvature {
    pub fn of(g: &Metric) -> Curvature {
        let christoffel = christoffel(g);
        let riemann = riemann(&christoffel);
        let (ricci, scalar) = ricci_and_scalar(&riemann, g);
        let half_r = Expr::rational(1, 2) * scalar.clone();
        let einstein = Tensor::from_fn(g.chart(), &[Variance::Lower, Variance::Lower], |i| {
            ricci.get(i).clone() - g.component(i[0], i[1]).clone() * half_r.clone()
        });
        Curvature {
            christoffel,
            riemann,
            ricci,
            scalar,
            einstein,
        }
    }

    /// `∇^μ G_{μν} = g^{μρ}(∂_ρ G_{μν} − Γ^λ_{ρμ} G_{λν} − Γ^λ_{ρν} G_{μλ})`.
    pub fn bianchi_residual(&self, g: &Metric) -> Vec<Expr> {
        let chart = g.chart();
        let names = chart.names();
        let n = chart.dim();
        let ginv = g.inverse();
        let gamma = &self.christoffel;
        let gt = &self.einstein;
        (0..n)
            .into_par_iter()
            .map(|nu| {
                let mut terms = Vec::new();
                for mu in 0..n {
                    for rho in 0..n {
                        if ginv[mu][rho].is_zero_literal() {
                            continue;
                        }
                        let mut inner = vec![diff(gt.get(&[mu, nu]), &names[rho])];
                        for l in 0..n {
                            inner.push(-(gamma.get(l, rho, mu).clone() * gt.get(&[l, nu]).clone()));
                            inner.push(-(gamma.get(l, rho, nu).clone() * gt.get(&[mu, l]).clone()));
                        }
                        terms.push(ginv[mu][rho].clone() * Expr::sum(inner));
                    }
                }
                simplify(&Expr::sum(terms))
            })
            .collect()
    }
}

/// `G_{μν} = R_{μν} − ½ g_{μν} R` of the Levi-Civita connection.
pub fn einstein_tensor(g: &Metric) -> Tensor {
    Curvature::of(g).einstein
}

/// Contracted Bianchi residual `∇^μ G_{μν}`, one entry per `ν`.
pub fn bianchi_residual(g: &Metric) -> Vec<Expr> {
    Curvature::of(g).bianchi_residual(g)
}
