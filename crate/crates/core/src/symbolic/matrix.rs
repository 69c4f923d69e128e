//! Small dense symbolic matrices (cofactor expansion; dimensions stay at desk scale).

use super::expr::Expr;
use super::normal::simplify;

pub type Matrix = Vec<Vec<Expr>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn is_diagonal(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, e)| i == j || simplify(e).is_zero_literal())
    })
}

/// Determinant by Laplace expansion along the first row, simplified.
pub fn determinant(m: &Matrix) -> Expr {
    simplify(&raw_determinant(m))
}

fn raw_determinant(m: &Matrix) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut terms = Vec::new();
            for j in 0..n {
                if m[0][j].is_zero_literal() {
                    continue;
                }
                let sub = submatrix(m, 0, j);
                let term = &m[0][j] * raw_determinant(&sub);
                terms.push(if j % 2 == 0 { term } else { -term });
            }
            Expr::sum(terms)
        }
    }
}

fn submatrix(m: &Matrix, skip_row: usize, skip_col: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Determinant of the rows `rows` and columns `cols` of `m`.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> Expr {
    let sub: Matrix = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect();
    determinant(&sub)
}

/// Inverse via the adjugate, or `None` when the determinant simplifies to 0.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if is_diagonal(m) {
        let mut out = identity(n);
        for i in 0..n {
            let d = simplify(&m[i][i]);
            if d.is_zero_literal() {
                return None;
            }
            out[i][i] = simplify(&d.recip());
        }
        return Some(out);
    }
    let det = determinant(m);
    if det.is_zero_literal() {
        return None;
    }
    let inv_det = det.recip();
    let mut out = identity(n);
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // adj(m)[i][j] = (-1)^(i+j) det(m without row j, column i)
            let cof = raw_determinant(&submatrix(m, j, i));
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            *entry = simplify(&(signed * inv_det.clone()));
        }
    }
    Some(out)
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| simplify(&Expr::sum((0..k).map(|l| &a[i][l] * &b[l][j]).collect())))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{is_zero, SamplingPolicy, ZeroTest};

    #[test]
    fn polar_jacobian_determinant() {
        let r = Expr::sym("r");
        let th = Expr::sym("th");
        let m = vec![
            vec![th.clone().cos(), -(r.clone() * th.clone().sin())],
            vec![th.clone().sin(), r.clone() * th.cos()],
        ];
        assert_eq!(determinant(&m), r);
    }

    #[test]
    fn inverse_of_general_matrix() {
        let x = Expr::sym("x");
        let y = Expr::sym("y");
        let m = vec![
            vec![Expr::one() + x.clone().pow(2), x.clone() * y.clone()],
            vec![x.clone() * y.clone(), Expr::int(2) + y.pow(2)],
        ];
        let inv = inverse(&m).unwrap();
        let prod = multiply(&m, &inv);
        let policy = SamplingPolicy::default();
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let target = if i == j { Expr::one() } else { Expr::zero() };
                assert_eq!(is_zero(&(e - target), &policy), ZeroTest::Zero);
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let x = Expr::sym("x");
        let m = vec![vec![x.clone(), x.clone()], vec![x.clone(), x]];
        assert!(inverse(&m).is_none());
    }
}
