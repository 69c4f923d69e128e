//! Infix printing that the parser reads back to the same tree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::expr::{Expr, Rational};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Top,
    /// First factor of a product.
    Leading,
    /// Later factor of a product, operand of unary minus, or divisor.
    Factor,
    PowerBase,
}

fn is_negation(e: &Expr) -> bool {
    matches!(e, Expr::Mul(xs) if xs.len() >= 2 && matches!(&xs[0], Expr::Num(c) if c.is_negative()))
        || matches!(e, Expr::Num(c) if c.is_negative())
}

/// `-e` for a term that [`is_negation`] accepts.
fn negated(e: &Expr) -> Expr {
    match e {
        Expr::Num(c) => Expr::Num(-c),
        Expr::Mul(xs) => {
            let Expr::Num(c) = &xs[0] else { unreachable!() };
            if c == &-Rational::one() {
                if xs.len() == 2 {
                    xs[1].clone()
                } else {
                    Expr::Mul(xs[1..].to_vec())
                }
            } else {
                let mut ys = xs.clone();
                ys[0] = Expr::Num(-c);
                Expr::Mul(ys)
            }
        }
        _ => unreachable!(),
    }
}

fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    // Terminating decimals print as decimals so the parser reads back the same value.
    let mut d = c.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d.is_one() {
        let digits = twos.max(fives);
        let scale = num_traits::pow::Pow::pow(BigInt::from(10), digits);
        let scaled = (c * Rational::from_integer(scale.clone())).to_integer();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let abs = scaled.abs();
        let (int, frac) = abs.div_rem(&scale);
        let frac = frac.to_string();
        let pad = "0".repeat(digits as usize - frac.len());
        format!("{sign}{int}.{pad}{frac}")
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn write_expr(e: &Expr, slot: Slot, out: &mut String) {
    match e {
        Expr::Num(c) => {
            let text = format_rational(c);
            let compound = c.is_negative() || text.contains('/');
            let wrap = compound && !matches!(slot, Slot::Top | Slot::Leading);
            if wrap {
                out.push('(');
                out.push_str(&text);
                out.push(')');
            } else {
                out.push_str(&text);
            }
        }
        Expr::Sym(s) => out.push_str(s),
        Expr::Add(xs) => {
            let wrap = slot != Slot::Top;
            if wrap {
                out.push('(');
            }
            for (i, x) in xs.iter().enumerate() {
                if i == 0 {
                    write_term(x, true, out);
                } else if is_negation(x) {
                    out.push_str(" - ");
                    write_term(&negated(x), false, out);
                } else {
                    out.push_str(" + ");
                    write_term(x, false, out);
                }
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Mul(xs) => {
            let wrap = slot != Slot::Top;
            if wrap {
                out.push('(');
            }
            write_product(xs, out);
            if wrap {
                out.push(')');
            }
        }
        Expr::Pow(b, n) => {
            if matches!(**b, Expr::Pow(..)) {
                out.push('(');
                write_expr(b, Slot::Top, out);
                out.push(')');
            } else {
                write_expr(b, Slot::PowerBase, out);
            }
            out.push('^');
            out.push_str(&n.to_string());
        }
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, Slot::Top, out);
            out.push(')');
        }
        Expr::Apply { name, order, arg } => {
            out.push_str(name);
            for _ in 0..*order {
                out.push('\'');
            }
            out.push('(');
            write_expr(arg, Slot::Top, out);
            out.push(')');
        }
    }
}

/// A summand: nested sums need parentheses, products do not.
fn write_term(e: &Expr, first: bool, out: &mut String) {
    match e {
        Expr::Add(_) => write_expr(e, Slot::Factor, out),
        Expr::Mul(xs) => write_product(xs, out),
        Expr::Num(c) if c.is_negative() && !first => write_expr(e, Slot::Factor, out),
        _ => write_expr(e, Slot::Top, out),
    }
}

fn write_product(xs: &[Expr], out: &mut String) {
    if let Some(Expr::Num(c)) = xs.first() {
        if c == &-Rational::one() && xs.len() >= 2 {
            out.push('-');
            if xs.len() == 2 {
                let operand = &xs[1];
                match operand {
                    Expr::Num(_) | Expr::Sym(_) | Expr::Func(..) | Expr::Apply { .. } | Expr::Pow(..) => {
                        write_expr(operand, Slot::Factor, out)
                    }
                    _ if is_negation(operand) && !matches!(operand, Expr::Num(_)) => {
                        write_product_operand(operand, out)
                    }
                    _ => write_expr(operand, Slot::Factor, out),
                }
            } else {
                write_product(&xs[1..], out);
            }
            return;
        }
    }
    for (i, x) in xs.iter().enumerate() {
        if i == 0 {
            match x {
                Expr::Mul(inner) if is_negation(x) && inner.len() == 2 => write_product(inner, out),
                _ => write_expr(x, Slot::Leading, out),
            }
            continue;
        }
        match x {
            Expr::Pow(b, -1) => {
                out.push('/');
                write_expr(b, Slot::Factor, out);
            }
            _ => {
                out.push('*');
                write_expr(x, Slot::Factor, out);
            }
        }
    }
}

fn write_product_operand(e: &Expr, out: &mut String) {
    // `--x` is legal: a negation directly under a negation.
    if let Expr::Mul(xs) = e {
        if xs.len() == 2 {
            write_product(xs, out);
            return;
        }
    }
    write_expr(e, Slot::Factor, out);
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_expr(self, Slot::Top, &mut out);
        f.write_str(&out)
    }
}
