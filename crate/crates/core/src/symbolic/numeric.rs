//! Numerical evaluation of theta expressions.
//!
//! `phi(x)` is evaluated by the truncated product
//! `prod_{i=0}^{trunc} (1 - x*q^i)` and `theta` by its defining
//! combination `(x^(1/2) - x^(-1/2)) * phi(q*x) * phi(q/x)`; for `|q| < 1`
//! the truncation error decays geometrically, so `trunc` around 40 at
//! `q = 1/10` is far below double-precision round-off.
//!
//! Everything is computed in `Complex64` with principal-branch powers. The
//! sampling oracle [`numeric_equal`] draws positive real values, where
//! principal-branch half-integer powers are unambiguous, making it a
//! reliable equality test for expressions too large to compare
//! structurally.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::QRat;
use crate::symbolic::expr::{FactorKind, Term, ThetaExpr};
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

/// Assignment of numeric values to variables, plus the `phi` truncation
/// order. The value of `q` is read from the assignment like any other
/// variable and should satisfy `|q| < 1` for the products to converge.
#[derive(Clone, Debug)]
pub struct EvalContext {
    /// Values for every variable that occurs in the expression.
    pub values: BTreeMap<Variable, Complex64>,
    /// Number of product factors kept when evaluating `phi`.
    pub trunc: u32,
}

impl EvalContext {
    /// Context with the given values and default truncation order 40.
    pub fn new(values: BTreeMap<Variable, Complex64>) -> Self {
        EvalContext { values, trunc: 40 }
    }

    fn lookup(&self, v: &Variable) -> Result<Complex64> {
        self.values
            .get(v)
            .copied()
            .ok_or_else(|| Error::validation(format!("no numeric value assigned to {v}")))
    }

    fn q(&self) -> Result<Complex64> {
        self.lookup(&Variable::Q)
    }
}

fn qrat_to_f64(x: &QRat) -> Result<f64> {
    x.to_f64()
        .ok_or_else(|| Error::internal("rational out of f64 range".to_string()))
}

/// Evaluate a monomial (principal-branch powers).
pub fn eval_monomial(m: &Monomial, ctx: &EvalContext) -> Result<Complex64> {
    let mut acc = Complex64::new(qrat_to_f64(m.coeff())?, 0.0);
    for (v, e) in m.exponents() {
        let base = ctx.lookup(v)?;
        acc *= base.powc(Complex64::new(qrat_to_f64(e)?, 0.0));
    }
    Ok(acc)
}

/// Truncated Pochhammer product `prod_{i=0}^{trunc} (1 - x*q^i)`.
pub fn eval_phi(x: Complex64, q: Complex64, trunc: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qi = Complex64::new(1.0, 0.0);
    for _ in 0..=trunc {
        acc *= Complex64::new(1.0, 0.0) - x * qi;
        qi *= q;
    }
    acc
}

/// `theta(x) = (x^(1/2) - x^(-1/2)) * phi(q*x) * phi(q/x)`.
pub fn eval_theta(x: Complex64, q: Complex64, trunc: u32) -> Complex64 {
    let half = Complex64::new(0.5, 0.0);
    let root = x.powc(half);
    (root - root.inv()) * eval_phi(q * x, q, trunc) * eval_phi(q / x, q, trunc)
}

/// `theta0(c) = c^(1/2) - c^(-1/2)`.
pub fn eval_split(c: Complex64) -> Complex64 {
    let root = c.powc(Complex64::new(0.5, 0.0));
    root - root.inv()
}

/// Evaluate one term.
pub fn eval_term(t: &Term, ctx: &EvalContext) -> Result<Complex64> {
    let mut acc = eval_monomial(&t.prefactor, ctx)?;
    let q = if t.factors.iter().any(|f| f.kind != FactorKind::Split) {
        ctx.q()?
    } else {
        Complex64::new(0.0, 0.0)
    };
    for f in &t.factors {
        let arg = eval_monomial(&f.arg, ctx)?;
        let base = match f.kind {
            FactorKind::Theta => eval_theta(arg, q, ctx.trunc),
            FactorKind::Pochhammer => eval_phi(arg, q, ctx.trunc),
            FactorKind::Split => eval_split(arg),
        };
        acc *= base.powi(f.power as i32);
    }
    Ok(acc)
}

/// Evaluate an expression.
pub fn eval_expr(e: &ThetaExpr, ctx: &EvalContext) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in e.terms() {
        acc += eval_term(t, ctx)?;
    }
    Ok(acc)
}

/// Deterministic sampling equality test. Draws `samples` independent
/// assignments (positive reals in `[1/2, 3/2]`, `q = 1/10`, truncation
/// 40) from a ChaCha stream seeded with `seed` and compares the two
/// expressions within relative-or-absolute tolerance `tol` at each. A
/// draw where either side fails to evaluate or where the evaluations are
/// astronomically large (a near-pole) is redrawn.
pub fn numeric_equal(a: &ThetaExpr, b: &ThetaExpr, seed: u64, samples: u32, tol: f64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars = a.variables();
    for v in b.variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > samples * 20 {
            return Err(Error::internal(
                "numeric equality sampling failed to find stable sample points".to_string(),
            ));
        }
        let mut values = BTreeMap::new();
        for v in &vars {
            if *v == Variable::Q {
                continue;
            }
            let x: f64 = rng.random_range(0.5..1.5);
            values.insert(v.clone(), Complex64::new(x, 0.0));
        }
        values.insert(Variable::Q, Complex64::new(0.1, 0.0));
        let ctx = EvalContext::new(values);
        let va = match eval_expr(a, &ctx) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let vb = match eval_expr(b, &ctx) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if !va.is_finite() || !vb.is_finite() || va.norm() > 1e12 || vb.norm() > 1e12 {
            continue;
        }
        let scale = va.norm().max(vb.norm()).max(1.0);
        if (va - vb).norm() > tol * scale {
            return Ok(false);
        }
        done += 1;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qint, qrat};

    fn ctx_with(entries: &[(Variable, f64)]) -> EvalContext {
        let mut values = BTreeMap::new();
        for (v, x) in entries {
            values.insert(v.clone(), Complex64::new(*x, 0.0));
        }
        values.insert(Variable::Q, Complex64::new(0.1, 0.0));
        EvalContext::new(values)
    }

    #[test]
    fn theta_satisfies_the_shift_law_numerically() {
        // theta(q*x) = -theta(x) / (q^(1/2) * x) at a generic point.
        let q = Complex64::new(0.1, 0.0);
        let x = Complex64::new(0.73, 0.0);
        let lhs = eval_theta(q * x, q, 60);
        let rhs = -eval_theta(x, q, 60) / (q.powc(Complex64::new(0.5, 0.0)) * x);
        assert!((lhs - rhs).norm() < 1e-12, "lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn theta_is_odd_under_inversion() {
        let q = Complex64::new(0.1, 0.0);
        let x = Complex64::new(1.37, 0.0);
        let lhs = eval_theta(x.inv(), q, 60);
        let rhs = -eval_theta(x, q, 60);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn normal_form_preserves_numeric_value() {
        // theta(q^2/a) evaluates identically before and after rewriting.
        let a = Variable::aux("a");
        let arg = Monomial::var_pow(Variable::Q, qint(2))
            * Monomial::var(a.clone()).inverse().unwrap();
        let raw = ThetaExpr::from_terms(vec![Term::new(
            Monomial::one(),
            vec![crate::symbolic::expr::ThetaFactor::new(FactorKind::Theta, arg, 1).unwrap()],
        )]);
        let nf = raw.normal_form().unwrap();
        let ctx = ctx_with(&[(a, 0.81)]);
        let before = eval_expr(&raw, &ctx).unwrap();
        let after = eval_expr(&nf, &ctx).unwrap();
        assert!((before - after).norm() < 1e-12, "before={before} after={after}");
    }

    #[test]
    fn pochhammer_rewrite_preserves_numeric_value() {
        let a = Variable::aux("a");
        let arg = Monomial::var_pow(Variable::Q, qrat(-3, 2)) * Monomial::var(a.clone());
        let raw = ThetaExpr::from_terms(vec![Term::new(
            Monomial::one(),
            vec![
                crate::symbolic::expr::ThetaFactor::new(FactorKind::Pochhammer, arg, 1).unwrap(),
            ],
        )]);
        let nf = raw.normal_form().unwrap();
        let ctx = ctx_with(&[(a, 1.29)]);
        let before = eval_expr(&raw, &ctx).unwrap();
        let after = eval_expr(&nf, &ctx).unwrap();
        assert!(
            (before - after).norm() < 1e-10 * before.norm().max(1.0),
            "before={before} after={after}"
        );
    }

    #[test]
    fn sampling_oracle_separates_distinct_expressions() {
        let a = Monomial::var(Variable::aux("a"));
        let t1 = ThetaExpr::theta(&a).unwrap();
        let t2 = ThetaExpr::theta(&a.powi(2).unwrap()).unwrap();
        assert!(numeric_equal(&t1, &t1, 7, 5, 1e-9).unwrap());
        assert!(!numeric_equal(&t1, &t2, 7, 5, 1e-9).unwrap());
    }
}
