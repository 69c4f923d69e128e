use std::fmt;

use crate::symbolic::{simplify, Chart, Expr, SamplingPolicy, ZeroTest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Upper,
    Lower,
}

/// Dense component array over a chart, each slot declared upper or lower.
/// Entries are stored row-major and kept simplified.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    chart: Chart,
    variance: Vec<Variance>,
    data: Vec<Expr>,
}

impl Tensor {
    pub fn zero(chart: &Chart, variance: &[Variance]) -> Tensor {
        let len = chart.dim().pow(variance.len() as u32);
        Tensor {
            chart: chart.clone(),
            variance: variance.to_vec(),
            data: vec![Expr::zero(); len],
        }
    }

    /// Fill every slot from `f(indices)`.
    pub fn from_fn(chart: &Chart, variance: &[Variance], f: impl Fn(&[usize]) -> Expr) -> Tensor {
        let mut t = Tensor::zero(chart, variance);
        for (flat, idx) in t.indices().into_iter().enumerate() {
            t.data[flat] = simplify(&f(&idx));
        }
        t
    }

    /// Build from entries already listed in row-major order.
    pub(crate) fn from_data(chart: &Chart, variance: &[Variance], data: Vec<Expr>) -> Tensor {
        debug_assert_eq!(data.len(), chart.dim().pow(variance.len() as u32));
        Tensor {
            chart: chart.clone(),
            variance: variance.to_vec(),
            data,
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "tensor index of wrong length");
        let n = self.chart.dim();
        idx.iter().fold(0, |acc, &i| {
            assert!(i < n, "tensor index {i} out of range");
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Expr) {
        let k = self.flat(idx);
        self.data[k] = simplify(&value);
    }

    /// Every index tuple in row-major order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let n = self.chart.dim();
        let mut out = vec![Vec::new()];
        for _ in 0..self.rank() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..n).map(move |i| {
                        let mut next = prefix.clone();
                        next.push(i);
                        next
                    })
                })
                .collect();
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        self.indices().into_iter().zip(self.data.iter())
    }

    pub fn nonzero(&self) -> Vec<(Vec<usize>, &Expr)> {
        self.entries().filter(|(_, e)| !e.is_zero_literal()).collect()
    }

    pub fn is_zero_tensor(&self) -> bool {
        self.data.iter().all(Expr::is_zero_literal)
    }

    pub fn zero_test(&self, policy: &SamplingPolicy) -> ZeroTest {
        ZeroTest::all(self.data.iter().map(|e| crate::symbolic::is_zero(e, policy)))
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero();
        if nz.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, e)) in nz.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            let key: Vec<String> = idx.iter().map(usize::to_string).collect();
            write!(f, "[{}] = {e}", key.join(","))?;
        }
        Ok(())
    }
}
