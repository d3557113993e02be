//! Symbolic kernel: variables, monomials, and formal sums of theta /
//! Pochhammer factors with exact rational arithmetic.
//!
//! The submodules build on each other in order: [`variable`] fixes the
//! global variable order, [`monomial`] implements Laurent monomials with
//! rational exponents, [`expr`] the theta-expression ring with its
//! canonical normal form, [`parse`] the text and JSON interchange,
//! [`numeric`] truncated-product evaluation, and [`qlimit`] the `q -> 0`
//! limit into K-theory.

pub mod expr;
pub mod monomial;
pub mod numeric;
pub mod parse;
pub mod qlimit;
pub mod variable;

pub use expr::{FactorKind, Term, ThetaExpr, ThetaFactor};
pub use monomial::Monomial;
pub use numeric::{eval_expr, numeric_equal, EvalContext};
pub use parse::{expr_from_json, expr_to_json, parse_expr, parse_variable};
pub use qlimit::q_limit;
pub use variable::Variable;
