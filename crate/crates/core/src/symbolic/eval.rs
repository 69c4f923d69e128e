use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::expr::{Expr, Func};
use crate::error::{Error, Result};

type Profile = Arc<dyn Fn(u32, f64) -> Option<f64> + Send + Sync>;

/// Numeric stand-ins for opaque functions: `(derivative order, argument) -> value`.
#[derive(Clone, Default)]
pub struct FunctionTable {
    entries: HashMap<String, Profile>,
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.entries.keys().collect();
        names.sort();
        f.debug_struct("FunctionTable").field("functions", &names).finish()
    }
}

impl FunctionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a profile. Returning `None` marks an unsupported derivative order.
    pub fn with<F>(mut self, name: &str, profile: F) -> Self
    where
        F: Fn(u32, f64) -> Option<f64> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(profile));
        self
    }

    pub fn insert<F>(&mut self, name: &str, profile: F)
    where
        F: Fn(u32, f64) -> Option<f64> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(profile));
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    fn call(&self, name: &str, order: u32, x: f64) -> Result<f64> {
        let profile = self
            .entries
            .get(name)
            .ok_or_else(|| Error::UnboundFunction(name.to_string()))?;
        profile(order, x).ok_or_else(|| {
            Error::UnboundFunction(format!("{name} (derivative order {order})"))
        })
    }
}

pub type Assignment = BTreeMap<String, f64>;

/// Evaluate `e` at a point in double precision.
pub fn eval_at(e: &Expr, assignment: &Assignment, functions: &FunctionTable) -> Result<f64> {
    Evaluator {
        assignment,
        functions,
        min_denominator: 0.0,
    }
    .eval(e)
}

/// Evaluation that also rejects points where a denominator, `ln` argument or
/// `tan` pole is closer than `min_denominator` to its singularity.
pub(crate) fn eval_guarded(
    e: &Expr,
    assignment: &Assignment,
    functions: &FunctionTable,
    min_denominator: f64,
) -> Result<f64> {
    Evaluator {
        assignment,
        functions,
        min_denominator,
    }
    .eval(e)
}

struct Evaluator<'a> {
    assignment: &'a Assignment,
    functions: &'a FunctionTable,
    min_denominator: f64,
}

impl Evaluator<'_> {
    fn eval(&self, e: &Expr) -> Result<f64> {
        let v = match e {
            Expr::Num(c) => c.to_f64().unwrap_or(f64::NAN),
            Expr::Sym(s) => *self
                .assignment
                .get(s)
                .ok_or_else(|| Error::UnboundSymbol(s.clone()))?,
            Expr::Add(xs) => {
                let mut acc = 0.0;
                for x in xs {
                    acc += self.eval(x)?;
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= self.eval(x)?;
                }
                acc
            }
            Expr::Pow(b, n) => {
                let base = self.eval(b)?;
                if *n < 0 && base.abs() <= self.min_denominator {
                    return Err(Error::Domain(format!("division by zero in {e}")));
                }
                base.powi(*n as i32)
            }
            Expr::Func(f, a) => {
                let x = self.eval(a)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => {
                        if x.cos().abs() <= self.min_denominator {
                            return Err(Error::Domain(format!("tan pole in {e}")));
                        }
                        x.tan()
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= self.min_denominator {
                            return Err(Error::Domain(format!("ln of non-positive value in {e}")));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value in {e}")));
                        }
                        x.sqrt()
                    }
                }
            }
            Expr::Apply { name, order, arg } => {
                let x = self.eval(arg)?;
                self.functions.call(name, *order, x)?
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite value in {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(pairs: &[(&str, f64)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn square() {
        let e = Expr::sym("x").pow(2);
        let v = eval_at(&e, &point(&[("x", 3.0)]), &FunctionTable::new()).unwrap();
        assert_eq!(v, 9.0);
    }

    #[test]
    fn ln_of_negative_is_domain_error() {
        let e = Expr::sym("x").ln();
        let err = eval_at(&e, &point(&[("x", -1.0)]), &FunctionTable::new()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        let e = Expr::sym("x").recip();
        assert!(matches!(
            eval_at(&e, &point(&[("x", 0.0)]), &FunctionTable::new()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pythagorean_value() {
        let t = Expr::sym("t");
        let e = t.clone().sin().pow(2) + t.cos().pow(2);
        let v = eval_at(&e, &point(&[("t", 0.7)]), &FunctionTable::new()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbound_symbol_and_function() {
        let table = FunctionTable::new();
        assert!(matches!(
            eval_at(&Expr::sym("y"), &point(&[]), &table),
            Err(Error::UnboundSymbol(_))
        ));
        let e = Expr::apply("a", Expr::int(1));
        assert!(matches!(eval_at(&e, &point(&[]), &table), Err(Error::UnboundFunction(_))));
        let table = table.with("a", |order, x| (order == 0).then_some(x * x));
        assert_eq!(eval_at(&e, &point(&[]), &table).unwrap(), 1.0);
    }
}
