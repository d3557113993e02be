//! Elliptic Thom classes of torus characters.
//!
//! A character is a Laurent polynomial in the torus variables with
//! integer multiplicities; its Thom class replaces each weight `w`
//! occurring with multiplicity `m` by `theta(w)^m`. A trivial summand
//! (weight `1`) at positive multiplicity makes the class vanish, at
//! negative multiplicity it is a genuine pole.

use crate::error::{Error, Result};
use crate::rational::to_i64;
use crate::symbolic::expr::{FactorKind, Term, ThetaFactor};
use crate::symbolic::{Monomial, ThetaExpr};

/// The Thom class of a character: `sum m_w * w` becomes
/// `prod theta(w)^(m_w)`.
pub fn thom_class(character: &ThetaExpr) -> Result<ThetaExpr> {
    if !character.is_laurent() {
        return Err(Error::validation(
            "Thom class needs a bare character (no theta factors in the input)",
        ));
    }
    let mut factors = Vec::with_capacity(character.len());
    for t in character.terms() {
        let mult = to_i64(t.prefactor.coeff()).ok_or_else(|| {
            Error::validation(format!(
                "character multiplicities must be integers, got {}",
                t.prefactor.coeff()
            ))
        })?;
        let weight = t.prefactor.normalized()?;
        factors.push(ThetaFactor::new(FactorKind::Theta, weight, mult)?);
    }
    match Term::new(Monomial::one(), factors).canonicalize()? {
        Some(t) => Ok(ThetaExpr::from_terms(vec![t])),
        None => Ok(ThetaExpr::zero()),
    }
}
