//! Exact symbolic scalar expressions over chart coordinates and parameters.

mod diff;
mod eval;
mod expr;
mod integrate;
pub mod matrix;
mod normal;
mod parse;
mod print;
mod zero;

pub use diff::diff;
pub use eval::{eval_at, Assignment, FunctionTable};
pub use expr::{is_identifier, Chart, Expr, Func, Rational};
pub use integrate::{antiderivative, definite_unit_integral};
pub use normal::{difference, simplify};
pub use parse::{parse_expr, parse_with, ParseError, ParseErrorKind, SymbolTable};
pub use zero::{
    is_zero, numeric_sign, synthetic_profile, synthetic_table, SamplingPolicy, ZeroTest, DEFAULT_SEED,
};
