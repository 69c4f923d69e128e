use crate::error::{Error, Result};
use crate::symbolic::matrix::{self, Matrix};
use crate::symbolic::{is_zero, numeric_sign, simplify, Chart, Expr, SamplingPolicy, ZeroTest};

/// Symmetric nondegenerate metric on a chart, with a declared determinant sign.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    chart: Chart,
    g: Matrix,
    det_sign: i8,
    det: Expr,
    inverse: Matrix,
    volume: Expr,
}

impl Metric {
    pub fn new(chart: &Chart, g: Matrix, det_sign: i8) -> Result<Metric> {
        Metric::with_policy(chart, g, det_sign, &SamplingPolicy::default())
    }

    /// Validate and cache determinant, inverse and `sqrt|det g|`.
    ///
    /// The declared sign is checked numerically at the box center, or at the
    /// first seeded sample point where the determinant is clear of zero.
    pub fn with_policy(chart: &Chart, g: Matrix, det_sign: i8, policy: &SamplingPolicy) -> Result<Metric> {
        let n = chart.dim();
        if g.len() != n || g.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric(format!(
                "metric must be {n}x{n} for chart {chart}"
            )));
        }
        if det_sign != 1 && det_sign != -1 {
            return Err(Error::InvalidMetric(format!("det_sign must be +1 or -1, got {det_sign}")));
        }
        let g: Matrix = g.iter().map(|row| row.iter().map(simplify).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::InvalidMetric(format!(
                        "g[{i}][{j}] = {} but g[{j}][{i}] = {}",
                        g[i][j], g[j][i]
                    )));
                }
            }
        }
        let det = matrix::determinant(&g);
        if is_zero(&det, policy) == ZeroTest::Zero {
            return Err(Error::SingularMetric(format!("det g = {det} vanishes identically")));
        }
        let inverse = matrix::inverse(&g)
            .ok_or_else(|| Error::SingularMetric(format!("det g = {det} has no inverse")))?;
        match numeric_sign(&det, policy) {
            Some(sign) if sign == det_sign => {}
            Some(sign) => {
                return Err(Error::InvalidMetric(format!(
                    "declared det_sign {det_sign} but det g = {det} has sign {sign}"
                )))
            }
            None => {
                return Err(Error::SingularMetric(format!(
                    "det g = {det} could not be evaluated away from zero"
                )))
            }
        }
        let volume = simplify(&(Expr::int(i64::from(det_sign)) * det.clone()).sqrt());
        Ok(Metric {
            chart: chart.clone(),
            g,
            det_sign,
            det,
            inverse,
            volume,
        })
    }

    /// `diag(entries)`.
    pub fn diagonal(chart: &Chart, entries: Vec<Expr>, det_sign: i8) -> Result<Metric> {
        let n = entries.len();
        let mut g = matrix::identity(n);
        for (i, e) in entries.into_iter().enumerate() {
            g[i][i] = e;
        }
        Metric::new(chart, g, det_sign)
    }

    pub fn euclidean(chart: &Chart) -> Metric {
        Metric::diagonal(chart, vec![Expr::one(); chart.dim()], 1).expect("identity metric")
    }

    /// `diag(-1, 1, ..., 1)` with the first coordinate as time.
    pub fn minkowski(chart: &Chart) -> Metric {
        let mut entries = vec![Expr::one(); chart.dim()];
        if let Some(first) = entries.first_mut() {
            *first = Expr::int(-1);
        }
        Metric::diagonal(chart, entries, -1).expect("Minkowski metric")
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    /// `sqrt|det g|`.
    pub fn volume_factor(&self) -> &Expr {
        &self.volume
    }
}
