use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symbolic::{simplify, Chart, Expr, SamplingPolicy, ZeroTest, is_zero};

/// Sort `indices`, returning the sorted sequence and the permutation sign, or
/// `None` when an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut inversions = 0usize;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            match indices[i].cmp(&indices[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    Some((sorted, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn scaled(sign: i64, e: Expr) -> Expr {
    if sign == 1 {
        e
    } else {
        -e
    }
}

/// A skew-symmetric form of fixed degree on a chart.
///
/// Components are stored only under strictly increasing index tuples and are
/// kept simplified; absent entries are zero. A form whose degree exceeds the
/// chart dimension is necessarily the zero form.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    chart: Chart,
    degree: usize,
    components: BTreeMap<Vec<usize>, Expr>,
}

impl Form {
    pub fn zero(chart: &Chart, degree: usize) -> Form {
        Form {
            chart: chart.clone(),
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: &Chart, value: Expr) -> Form {
        let mut f = Form::zero(chart, 0);
        f.accumulate(Vec::new(), value);
        f.finalize()
    }

    /// `dx^{i1} ∧ ... ∧ dx^{ip}` for arbitrary (possibly unsorted) indices.
    pub fn basis(chart: &Chart, indices: &[usize]) -> Result<Form> {
        Form::monomial(chart, indices, Expr::one())
    }

    /// `coeff dx^{i1} ∧ ... ∧ dx^{ip}`.
    pub fn monomial(chart: &Chart, indices: &[usize], coeff: Expr) -> Result<Form> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= chart.dim()) {
            return Err(Error::Degree(format!(
                "index {bad} out of range for a {}-dimensional chart",
                chart.dim()
            )));
        }
        let mut f = Form::zero(chart, indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            f.accumulate(sorted, scaled(sign, coeff));
        }
        Ok(f.finalize())
    }

    /// `Σ coeffs[i] dx^i`.
    pub fn one_form(chart: &Chart, coeffs: Vec<Expr>) -> Result<Form> {
        if coeffs.len() != chart.dim() {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients for a {}-dimensional chart",
                coeffs.len(),
                chart.dim()
            )));
        }
        let mut f = Form::zero(chart, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            f.accumulate(vec![i], c);
        }
        Ok(f.finalize())
    }

    /// Build from strictly increasing index tuples.
    pub fn from_components<I>(chart: &Chart, degree: usize, components: I) -> Result<Form>
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut f = Form::zero(chart, degree);
        for (key, value) in components {
            if key.len() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "component {key:?} in a form of degree {degree}"
                )));
            }
            if key.windows(2).any(|w| w[0] >= w[1]) || key.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::Degree(format!(
                    "component key {key:?} is not strictly increasing within 0..{}",
                    chart.dim()
                )));
            }
            f.accumulate(key, value);
        }
        Ok(f.finalize())
    }

    pub(crate) fn accumulate(&mut self, key: Vec<usize>, value: Expr) {
        match self.components.get_mut(&key) {
            Some(existing) => {
                let prev = std::mem::replace(existing, Expr::zero());
                *existing = prev + value;
            }
            None => {
                self.components.insert(key, value);
            }
        }
    }

    /// Simplify every component and drop zeros.
    pub(crate) fn finalize(mut self) -> Form {
        self.components = std::mem::take(&mut self.components)
            .into_iter()
            .map(|(k, v)| (k, simplify(&v)))
            .filter(|(_, v)| !v.is_zero_literal())
            .collect();
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, Expr> {
        &self.components
    }

    /// Component under an arbitrary index tuple, with the antisymmetry sign.
    pub fn component(&self, indices: &[usize]) -> Expr {
        match sort_with_sign(indices) {
            None => Expr::zero(),
            Some((sorted, sign)) => match self.components.get(&sorted) {
                None => Expr::zero(),
                Some(v) => simplify(&scaled(sign, v.clone())),
            },
        }
    }

    /// Value of a 0-form.
    pub fn value(&self) -> Expr {
        self.components.get(&Vec::new()).cloned().unwrap_or_else(Expr::zero)
    }

    /// Structurally zero (no nonzero component after simplification).
    pub fn is_zero_form(&self) -> bool {
        self.components.is_empty()
    }

    pub fn zero_test(&self, policy: &SamplingPolicy) -> ZeroTest {
        ZeroTest::all(self.components.values().map(|v| is_zero(v, policy)))
    }

    pub fn map_components(&self, f: impl Fn(&Expr) -> Expr) -> Form {
        Form {
            chart: self.chart.clone(),
            degree: self.degree,
            components: self.components.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
        .finalize()
    }

    pub fn scale(&self, c: &Expr) -> Form {
        self.map_components(|v| c * v)
    }

    pub fn neg(&self) -> Form {
        self.map_components(|v| -v)
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("{} vs {}", self.chart, other.chart)));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "degree {} vs degree {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.components {
            out.accumulate(k.clone(), v.clone());
        }
        Ok(out.finalize())
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    /// Components keyed by comma-separated indices, `"0,1"`.
    pub fn component_strings(&self) -> BTreeMap<String, String> {
        self.components
            .iter()
            .map(|(k, v)| (index_key(k), v.to_string()))
            .collect()
    }
}

pub fn index_key(k: &[usize]) -> String {
    k.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let names = self.chart.names();
        for (n, (k, v)) in self.components.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<String> = k.iter().map(|&i| format!("d{}", names[i])).collect();
            if k.is_empty() {
                write!(f, "{v}")?;
            } else {
                write!(f, "({v}) {}", basis.join("∧"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }

    #[test]
    fn tuples() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
    }

    #[test]
    fn unsorted_basis_carries_sign() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let f = Form::basis(&c, &[1, 0]).unwrap();
        assert_eq!(f.component(&[0, 1]), Expr::int(-1));
        assert_eq!(f.component(&[1, 0]), Expr::int(1));
        assert!(Form::basis(&c, &[0, 0]).unwrap().is_zero_form());
    }

    #[test]
    fn rejects_bad_keys() {
        let c = Chart::new(&["x", "y"]).unwrap();
        assert!(Form::from_components(&c, 2, [(vec![1, 0], Expr::one())]).is_err());
        assert!(Form::from_components(&c, 1, [(vec![0, 1], Expr::one())]).is_err());
        assert!(Form::from_components(&c, 1, [(vec![2], Expr::one())]).is_err());
    }
}
