use super::expr::{Expr, Func};
use super::normal::simplify;

/// Exact partial derivative with respect to the symbol `s`, simplified.
///
/// Every other symbol is held constant. Opaque functions differentiate to
/// their formal derivative via the chain rule.
pub fn diff(e: &Expr, s: &str) -> Expr {
    simplify(&raw_diff(e, s))
}

fn raw_diff(e: &Expr, s: &str) -> Expr {
    if !e.contains_symbol(s) {
        return Expr::zero();
    }
    match e {
        Expr::Num(_) => Expr::zero(),
        Expr::Sym(name) => {
            if name == s {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Add(xs) => Expr::Add(xs.iter().map(|x| raw_diff(x, s)).collect()),
        Expr::Mul(xs) => {
            let mut terms = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                if !x.contains_symbol(s) {
                    continue;
                }
                let mut factors = xs.clone();
                factors[i] = raw_diff(x, s);
                terms.push(Expr::Mul(factors));
            }
            Expr::sum(terms)
        }
        Expr::Pow(b, n) => Expr::Mul(vec![
            Expr::int(*n),
            Expr::Pow(b.clone(), n - 1),
            raw_diff(b, s),
        ]),
        Expr::Func(f, a) => {
            let inner = raw_diff(a, s);
            let a = (**a).clone();
            let outer = match f {
                Func::Sin => a.cos(),
                Func::Cos => -a.sin(),
                Func::Tan => Expr::one() + a.tan().pow(2),
                Func::Exp => a.exp(),
                Func::Ln => a.recip(),
                Func::Sqrt => Expr::rational(1, 2) * a.sqrt().recip(),
            };
            outer * inner
        }
        Expr::Apply { name, order, arg } => Expr::Mul(vec![
            Expr::Apply {
                name: name.clone(),
                order: order + 1,
                arg: arg.clone(),
            },
            raw_diff(arg, s),
        ]),
    }
}
