use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::SubmanifoldMap;
use crate::symbolic::{is_zero, matrix, Chart, Expr, SamplingPolicy, ZeroTest};

#[derive(Clone, Debug, PartialEq)]
pub enum Degeneracy {
    Nondegenerate,
    DegenerateEverywhere,
    /// Degenerate on the locus where this expression vanishes.
    ConditionallyDegenerate(Expr),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::Nondegenerate => write!(f, "Nondegenerate"),
            Degeneracy::DegenerateEverywhere => write!(f, "DegenerateEverywhere"),
            Degeneracy::ConditionallyDegenerate(e) => write!(f, "ConditionallyDegenerate({e})"),
        }
    }
}

/// Determinant of a Hessian or Jacobian together with where it vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub determinant: Expr,
    pub locus_status: ZeroTest,
    pub classification: Degeneracy,
}

impl DegeneracyReport {
    /// Classify `determinant` against the coordinates of `chart`: identically
    /// zero, free of coordinates (parameters are taken as generic), or
    /// vanishing on a coordinate locus.
    pub fn classify(determinant: Expr, chart: &Chart, policy: &SamplingPolicy) -> DegeneracyReport {
        let locus_status = is_zero(&determinant, policy);
        let classification = match locus_status {
            ZeroTest::Zero => Degeneracy::DegenerateEverywhere,
            _ if determinant
                .free_symbols()
                .iter()
                .all(|s| chart.index_of(s).is_none()) =>
            {
                Degeneracy::Nondegenerate
            }
            _ => Degeneracy::ConditionallyDegenerate(determinant.clone()),
        };
        DegeneracyReport {
            determinant,
            locus_status,
            classification,
        }
    }
}

/// Degeneracy of the Jacobian `∂x^i/∂u^j` of a square map.
pub fn jacobian_degeneracy(phi: &SubmanifoldMap, policy: &SamplingPolicy) -> Result<DegeneracyReport> {
    if phi.source().dim() != phi.target().dim() {
        return Err(Error::ChartMismatch(format!(
            "Jacobian determinant needs a square map, got {} -> {}",
            phi.source(),
            phi.target()
        )));
    }
    let det = matrix::determinant(&phi.jacobian());
    Ok(DegeneracyReport::classify(det, phi.source(), policy))
}
