//! The three theta products `S1`, `S2`, `S3` and their combination
//! `S = S1 * S2 / S3`.
//!
//! Each product pairs boxes of the fixed-point tuple according to the
//! chamber's `rho`-order:
//!
//! * `S1` couples boxes on the two endpoints of each cycle edge; the two
//!   comparison regimes `rho_a + 1 < rho_b` and `rho_b < rho_a + 1`
//!   select between a `t_plus`- and a `t_minus`-twisted factor. The pair
//!   range includes `a = b` whenever an edge has both endpoints at the
//!   same residue (the one-vertex cycle), which contributes plain
//!   `theta(t_minus)` factors.
//! * `S2` couples every box with every framing parameter of its residue,
//!   the regime decided against the slot's (virtual) corner key.
//! * `S3` runs over unordered same-residue pairs and forms the
//!   denominator.
//!
//! All three are single products of theta factors, so the worker
//! functions return a single [`Term`]; the public wrappers expose them as
//! expressions.

use crate::error::{Error, Result};
use crate::quiver::root_key;
use crate::symbolic::expr::{FactorKind, Term, ThetaFactor};
use crate::symbolic::{Monomial, ThetaExpr, Variable};

use super::context::StabContext;

/// `theta` factor with the given monomial argument.
fn theta(arg: Monomial) -> Result<ThetaFactor> {
    ThetaFactor::new(FactorKind::Theta, arg, 1)
}

/// The `S1` product as a single term.
pub(crate) fn s1_term(ctx: &StabContext) -> Result<Term> {
    let c = ctx.chamber();
    let d = ctx.data();
    let t_plus = Monomial::var(c.t_plus().var());
    let t_minus = Monomial::var(c.t_minus().var());
    let mut factors = Vec::new();
    for i in 1..=d.r() {
        let tail = c.edge_tail(d, i);
        let head = c.edge_head(d, i);
        for a in ctx.boxes().iter().filter(|b| b.residue == tail) {
            for b in ctx.boxes().iter().filter(|b| b.residue == head) {
                let xa = Monomial::var(a.root.clone());
                let xb = Monomial::var(b.root.clone());
                match a.rho.plus_one().cmp(&b.rho) {
                    std::cmp::Ordering::Less => {
                        factors.push(theta(t_plus.clone() * xa * xb.inverse()?)?);
                    }
                    std::cmp::Ordering::Greater => {
                        factors.push(theta(t_minus.clone() * xb * xa.inverse()?)?);
                    }
                    std::cmp::Ordering::Equal => {
                        return Err(Error::genericity(format!(
                            "boxes {} (component {}) and {} (component {}) sit at \
                             rho-distance exactly 1; the chamber cannot separate them",
                            a.pos, a.comp, b.pos, b.comp
                        )));
                    }
                }
            }
        }
    }
    Ok(Term::new(Monomial::one(), factors))
}

/// The `S2` product as a single term.
pub(crate) fn s2_term(ctx: &StabContext) -> Result<Term> {
    let c = ctx.chamber();
    let d = ctx.data();
    let t1t2 = Monomial::t1t2();
    let mut factors = Vec::new();
    for i in 1..=d.r() {
        for j in 1..=d.w_at(i) {
            let corner = root_key(c, i, j)?;
            let u = Monomial::var(Variable::u(i, j));
            for a in ctx.boxes().iter().filter(|b| b.residue == i) {
                let xa = Monomial::var(a.root.clone());
                if a.rho <= corner {
                    factors.push(theta(xa * u.inverse()?)?);
                } else {
                    factors.push(theta(t1t2.clone() * u.clone() * xa.inverse()?)?);
                }
            }
        }
    }
    Ok(Term::new(Monomial::one(), factors))
}

/// The `S3` product as a single term.
pub(crate) fn s3_term(ctx: &StabContext) -> Result<Term> {
    let t1t2 = Monomial::t1t2();
    let mut factors = Vec::new();
    let boxes = ctx.boxes();
    for (k, a) in boxes.iter().enumerate() {
        for b in &boxes[k + 1..] {
            if a.residue != b.residue {
                continue;
            }
            let (lo, hi) = if a.rho < b.rho { (a, b) } else { (b, a) };
            let ratio = Monomial::var(lo.root.clone())
                * Monomial::var(hi.root.clone()).inverse()?;
            factors.push(theta(ratio.clone())?);
            factors.push(theta(t1t2.clone() * ratio)?);
        }
    }
    Ok(Term::new(Monomial::one(), factors))
}

/// The combined prefactor `S = S1 * S2 / S3` as a single term.
pub(crate) fn s_term(ctx: &StabContext) -> Result<Term> {
    s1_term(ctx)?.mul(&s2_term(ctx)?).div(&s3_term(ctx)?)
}

/// The `S1` product.
pub fn s1(ctx: &StabContext) -> Result<ThetaExpr> {
    Ok(ThetaExpr::from_terms(vec![s1_term(ctx)?]))
}

/// The `S2` product.
pub fn s2(ctx: &StabContext) -> Result<ThetaExpr> {
    Ok(ThetaExpr::from_terms(vec![s2_term(ctx)?]))
}

/// The `S3` product.
pub fn s3(ctx: &StabContext) -> Result<ThetaExpr> {
    Ok(ThetaExpr::from_terms(vec![s3_term(ctx)?]))
}
