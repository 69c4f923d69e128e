//! Antiderivatives from a small fixed table.
//!
//! Supported integrands, per term, in the integration variable `x` with
//! everything else constant: `x^n` (including `1/x`), `sin(u)`, `cos(u)`,
//! `exp(u)` and `s^n` for a sum `s`, where `u` and `s` are linear in `x`, and
//! `x^n * sin(u)`, `x^n * cos(u)`, `x^n * exp(u)` for `n >= 1` by parts.
//! Anything else returns `None`.

use super::diff::diff;
use super::expr::{Expr, Func};
use super::normal::{has_singularity, monomials, simplify};

fn linear_slope(u: &Expr, var: &str) -> Option<Expr> {
    let a = diff(u, var);
    (!a.contains_symbol(var) && !a.is_zero_literal()).then_some(a)
}

fn power(atom: &Expr, n: i64) -> Expr {
    atom.clone().pow(n)
}

/// Indefinite integral with respect to `var`, simplified, or `None` when some
/// term falls outside the table.
pub fn antiderivative(e: &Expr, var: &str) -> Option<Expr> {
    let mut pieces = Vec::new();
    for (coeff, atoms) in monomials(e) {
        let (dependent, constant): (Vec<_>, Vec<_>) =
            atoms.into_iter().partition(|(a, _)| a.contains_symbol(var));
        let mut factors = vec![Expr::Num(coeff)];
        factors.extend(constant.iter().map(|(a, n)| power(a, *n)));
        let constant = Expr::product(factors);
        pieces.push(constant * integrate_dependent(&dependent, var)?);
    }
    Some(simplify(&Expr::sum(pieces)))
}

fn integrate_dependent(atoms: &[(Expr, i64)], var: &str) -> Option<Expr> {
    let x = Expr::sym(var);
    match atoms {
        [] => Some(x),
        [(Expr::Sym(s), n)] if s == var => Some(if *n == -1 {
            x.ln()
        } else {
            x.pow(n + 1) / Expr::int(n + 1)
        }),
        [(Expr::Func(f, u), 1)] => elementary(*f, u, var),
        [(s @ Expr::Add(_), n)] => {
            let a = linear_slope(s, var)?;
            Some(if *n == -1 {
                s.clone().ln() / a
            } else {
                s.clone().pow(n + 1) / (Expr::int(n + 1) * a)
            })
        }
        [(Expr::Sym(s), n), (Expr::Func(f, u), 1)] if s == var && *n >= 1 => {
            // ∫ x^n g = x^n G - n ∫ x^(n-1) G
            let g_int = elementary(*f, u, var)?;
            let rest = Expr::int(*n) * x.clone().pow(n - 1) * g_int.clone();
            let rest = antiderivative(&rest, var)?;
            Some(x.pow(*n) * g_int - rest)
        }
        _ => None,
    }
}

fn elementary(f: Func, u: &Expr, var: &str) -> Option<Expr> {
    let a = linear_slope(u, var)?;
    let u = u.clone();
    match f {
        Func::Sin => Some(-u.cos() / a),
        Func::Cos => Some(u.sin() / a),
        Func::Exp => Some(u.exp() / a),
        _ => None,
    }
}

/// `∫_0^1 e d(var)`, or `None` when the antiderivative is outside the table or
/// singular at an endpoint.
pub fn definite_unit_integral(e: &Expr, var: &str) -> Option<Expr> {
    let f = antiderivative(e, var)?;
    let upper = simplify(&f.subs(var, &Expr::one()));
    let lower = simplify(&f.subs(var, &Expr::zero()));
    if has_singularity(&upper) || has_singularity(&lower) {
        return None;
    }
    Some(simplify(&(upper - lower)))
}
