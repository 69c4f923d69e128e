use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Ordered list of coordinate symbols for a single chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Chart("a chart needs at least one coordinate".into()));
        }
        let mut seen = BTreeSet::new();
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::Chart(format!("`{name}` is not a valid identifier")));
            }
            if !seen.insert(name) {
                return Err(Error::Chart(format!("coordinate `{name}` declared twice")));
            }
        }
        Ok(Chart {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coord(&self, i: usize) -> Expr {
        Expr::sym(&self.names[i])
    }

    pub fn coords(&self) -> Vec<Expr> {
        self.names.iter().map(|n| Expr::sym(n)).collect()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Elementary functions with built-in derivative and evaluation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Ln, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Symbolic scalar expression.
///
/// Subtraction is stored as addition of a `-1` multiple and division as a
/// `-1` power, so sums and products are n-ary. `Apply` is an unspecified
/// univariate function (a profile such as `a(t)`); `order` counts formal
/// derivatives taken of it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(Rational),
    Sym(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Func(Func, Box<Expr>),
    Apply {
        name: String,
        order: u32,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(Rational::from_integer(BigInt::from(n)))
    }

    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::Num(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_string())
    }

    pub fn apply(name: &str, arg: Expr) -> Expr {
        Expr::Apply {
            name: name.to_string(),
            order: 0,
            arg: Box::new(arg),
        }
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn sin(self) -> Expr {
        Expr::func(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::func(Func::Cos, self)
    }

    pub fn tan(self) -> Expr {
        Expr::func(Func::Tan, self)
    }

    pub fn exp(self) -> Expr {
        Expr::func(Func::Exp, self)
    }

    pub fn ln(self) -> Expr {
        Expr::func(Func::Ln, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::func(Func::Sqrt, self)
    }

    pub fn pow(self, n: i64) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn recip(self) -> Expr {
        self.pow(-1)
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Num(c) if c.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        matches!(self, Expr::Num(c) if c.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Expr::Num(c) => Some(c),
            _ => None,
        }
    }

    /// Sum of terms; an empty list is zero.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    /// Product of factors; an empty list is one.
    pub fn product(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::Mul(factors),
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Num(_) | Expr::Sym(_) => Vec::new(),
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().collect(),
            Expr::Pow(b, _) => vec![b],
            Expr::Func(_, a) => vec![a],
            Expr::Apply { arg, .. } => vec![arg],
        }
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        match self {
            Expr::Sym(s) => s == name,
            _ => self.children().into_iter().any(|c| c.contains_symbol(name)),
        }
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        if let Expr::Sym(s) = self {
            out.insert(s.clone());
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    /// Names of opaque functions applied anywhere in the tree.
    pub fn opaque_functions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        if let Expr::Apply { name, .. } = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_functions(out);
        }
    }

    /// Replace symbols by expressions. The result is not simplified.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Sym(s) => map(s).unwrap_or_else(|| self.clone()),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.substitute(map)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| x.substitute(map)).collect()),
            Expr::Pow(b, n) => Expr::Pow(Box::new(b.substitute(map)), *n),
            Expr::Func(f, a) => Expr::Func(*f, Box::new(a.substitute(map))),
            Expr::Apply { name, order, arg } => Expr::Apply {
                name: name.clone(),
                order: *order,
                arg: Box::new(arg.substitute(map)),
            },
        }
    }

    pub fn subs(&self, name: &str, value: &Expr) -> Expr {
        self.substitute(&|s| (s == name).then(|| value.clone()))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::Num(c)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs.recip()])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Mul(vec![Expr::int(-1), self])
    }
}

macro_rules! ref_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.clone().$method(rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.clone().$method(rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.$method(rhs.clone())
            }
        }
    };
}

ref_binop!(Add, add);
ref_binop!(Sub, sub);
ref_binop!(Mul, mul);
ref_binop!(Div, div);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_rejects_duplicates_and_bad_names() {
        assert!(Chart::new(&["x", "x"]).is_err());
        assert!(Chart::new(&["1x"]).is_err());
        assert!(Chart::new::<&str>(&[]).is_err());
        let c = Chart::new(&["t", "x", "y", "z"]).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(c.index_of("y"), Some(2));
    }

    #[test]
    fn free_symbols_and_functions() {
        let e = Expr::apply("a", Expr::sym("t")) * Expr::sym("x").sin();
        assert_eq!(e.free_symbols().into_iter().collect::<Vec<_>>(), vec!["t", "x"]);
        assert!(e.opaque_functions().contains("a"));
    }
}
