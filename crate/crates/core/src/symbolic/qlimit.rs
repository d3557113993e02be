//! The `q -> 0` limit, taking elliptic expressions to their K-theoretic
//! shadows.
//!
//! After [`ThetaExpr::normal_form`] every theta argument is `q^b * c` with
//! `b` in `[0, 1)` and `c` free of q. As `q -> 0`:
//!
//! * `theta(c)` (with `b = 0`) tends to the split symbol
//!   `theta0(c) = c^(1/2) - c^(-1/2)`;
//! * `theta(q^b c)` with `0 < b < 1` behaves as the monomial
//!   `-c^(-1/2) * q^(-b/2)`, all other factors tending to `1`;
//! * `phi(q^b c)` with `b > 0` tends to `1`;
//! * `theta0(q^g c)` with `g > 0` likewise behaves as
//!   `-c^(-1/2) * q^(-g/2)`.
//!
//! Within each term the fractional q-powers contributed by these leading
//! monomials are summed exactly. A positive total exponent makes the term
//! vanish, zero leaves a q-free limit, and a negative total means the term
//! diverges — reported as [`Error::Divergence`]. Cross-term cancellation
//! of divergences is not attempted: the expressions this library produces
//! have well-defined term-by-term limits.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{qrat, QRat};
use crate::symbolic::expr::{FactorKind, Term, ThetaExpr, ThetaFactor};
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

/// Limit of one canonical term; `None` when the term tends to zero.
fn term_limit(t: &Term) -> Result<Option<Term>> {
    let mut prefactor = t.prefactor.clone();
    let mut factors: Vec<ThetaFactor> = Vec::new();
    for f in &t.factors {
        let beta = f.arg.q_exponent();
        let qfree = (f.arg.clone() * Monomial::var_pow(Variable::Q, -beta.clone())).normalized()?;
        match f.kind {
            FactorKind::Pochhammer => {
                if beta.is_positive() {
                    continue; // phi(q^b c) -> 1
                }
                return Err(Error::validation(format!(
                    "q-limit of {f} is outside scope: the Pochhammer argument \
                     has no positive q-exponent",
                )));
            }
            FactorKind::Theta | FactorKind::Split => {
                if beta.is_zero() {
                    // theta(c) -> theta0(c); theta0(c) stays itself.
                    factors.push(ThetaFactor::new(FactorKind::Split, qfree, f.power)?);
                } else {
                    // Leading monomial (-c^(-1/2) q^(-b/2))^power.
                    let sign = if f.power % 2 == 0 { qrat(1, 1) } else { qrat(-1, 1) };
                    let lead = Monomial::scalar(sign)
                        * qfree.pow(&qrat(-f.power, 2))?
                        * Monomial::var_pow(Variable::Q, -beta * qrat(f.power, 2));
                    prefactor = prefactor * lead;
                }
            }
        }
    }
    let total = prefactor.q_exponent();
    if total.is_positive() {
        return Ok(None);
    }
    if total < QRat::zero() {
        return Err(Error::divergence(format!(
            "term {t} carries total q-exponent {total} and diverges as q -> 0"
        )));
    }
    Ok(Some(Term::new(prefactor, factors)))
}

/// The `q -> 0` limit of an expression. The input is canonicalized first;
/// the output is free of q and of theta/phi factors (only `theta0`
/// symbols survive).
pub fn q_limit(e: &ThetaExpr) -> Result<ThetaExpr> {
    let nf = e.normal_form()?;
    let mut out = Vec::with_capacity(nf.terms().len());
    for t in nf.terms() {
        if let Some(l) = term_limit(t)? {
            out.push(l);
        }
    }
    Ok(ThetaExpr::from_terms(out))
}
