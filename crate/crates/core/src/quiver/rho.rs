//! The exact `rho`-order on boxes, the attracting/repelling split of
//! characters, and the chamber ordering of fixed points.
//!
//! A chamber separates torus weights by a three-scale hierarchy: framing
//! directions dominate everything (scale `F >> 1`), the `a`-direction
//! `t1/t2` is next (scale `1`), and the `hbar`-degree is an
//! infinitesimal tie-break (scale `epsilon`). Floating-point epsilon
//! games are avoided entirely: a box weight `t1^(1-y) t2^(1-x) u[i,j]`
//! maps to the exact lexicographic key
//!
//! * `f` — position of `u[i,j]` in the chamber's framing order,
//! * `m` — `sigma_a * (x - y)` with `sigma_a = +1` when `t2` repels,
//! * `h` — `(2 - x - y) / 2`, the `hbar`-degree,
//!
//! and the formula's "`rho + 1`" increments the middle slot. Attraction
//! of a tangent weight is decided by the same hierarchy: the first
//! framing variable (in chamber order) with nonzero exponent decides
//! (negative exponent = attracting), else the sign of `sigma_a` times the
//! `a`-exponent; the `hbar`-degree alone never decides.
//!
//! Fixed points are ordered by the value of the chamber cocharacter on
//! the sum of their box weights. There the framing levels are equally
//! spaced (not scale-separated), which is what makes restriction
//! matrices upper triangular in the reference order; see
//! [`order_fixed_points`].

use std::cmp::Ordering;

use num::Zero;

use crate::combin::partition::{BoxPos, FixedPoint, LabeledPartition};
use crate::error::{Error, Result};
use crate::quiver::data::Chamber;
use crate::rational::{qrat, qsign, QRat};
use crate::symbolic::expr::ThetaExpr;
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

/// Exact lexicographic key realizing the `rho`-order; larger key means
/// larger `rho`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RhoKey {
    /// Framing dominance: position in the chamber's `u`-order.
    pub f: i64,
    /// `sigma_a`-signed `a`-exponent, the middle scale.
    pub m: i64,
    /// `hbar`-degree, the infinitesimal tie-break.
    pub h: QRat,
}

impl RhoKey {
    /// The key of `rho + 1`: the "+1" lives on the middle scale.
    pub fn plus_one(&self) -> RhoKey {
        RhoKey { f: self.f, m: self.m + 1, h: self.h.clone() }
    }
}

/// The `rho`-key of a box in a labeled partition.
pub fn rho_key(c: &Chamber, lp: &LabeledPartition, b: BoxPos) -> Result<RhoKey> {
    Ok(RhoKey {
        f: c.u_position(lp.vertex, lp.framing)?,
        m: c.sigma_a() * (b.x as i64 - b.y as i64),
        h: qrat(2 - b.x as i64 - b.y as i64, 2),
    })
}

/// The `rho`-key of the (virtual) corner of slot `(i, j)` — the key a
/// box at `(1, 1)` of that slot would have, defined even for empty slots.
pub fn root_key(c: &Chamber, i: u32, j: u32) -> Result<RhoKey> {
    Ok(RhoKey { f: c.u_position(i, j)?, m: 0, h: QRat::zero() })
}

/// Classify a monomial torus weight against a chamber: `+1` attracting,
/// `-1` repelling, `0` stationary (zero pairing on the deciding scales).
pub fn attraction_value(m: &Monomial, c: &Chamber) -> Result<i64> {
    for (v, _) in m.exponents() {
        if let Variable::U(i, j) = v {
            // A framing variable outside the chamber cannot be classified.
            c.u_position(*i, *j)?;
        }
    }
    for &(i, j) in c.u_order() {
        let e = m.exponent(&Variable::u(i, j));
        if !e.is_zero() {
            return Ok(-qsign(&e) as i64);
        }
    }
    let a_exp = m.exponent(&Variable::T1) - m.exponent(&Variable::T2);
    Ok(c.sigma_a() * qsign(&a_exp) as i64)
}

/// Split a Laurent character into its attracting and repelling parts. A
/// stationary term violates chamber genericity and is a hard error.
pub fn split_attracting(
    character: &ThetaExpr,
    c: &Chamber,
) -> Result<(ThetaExpr, ThetaExpr)> {
    if !character.is_laurent() {
        return Err(Error::validation(
            "attracting/repelling split applies to factor-free characters".to_string(),
        ));
    }
    let mut attracting = Vec::new();
    let mut repelling = Vec::new();
    for t in character.terms() {
        match attraction_value(&t.prefactor, c)? {
            1 => attracting.push(t.clone()),
            -1 => repelling.push(t.clone()),
            _ => {
                return Err(Error::genericity(format!(
                    "weight {} pairs to zero against the chamber {c}",
                    t.prefactor
                )))
            }
        }
    }
    Ok((
        ThetaExpr::from_terms(attracting),
        ThetaExpr::from_terms(repelling),
    ))
}

/// The chamber sort value of a fixed point: the chamber cocharacter
/// paired with the sum of all box weights. Framing levels are equally
/// spaced along the chamber's `u`-order and the `a`-direction enters at
/// an infinitesimally smaller scale, so the pairing is the exact pair
/// `(sum of u-positions, sigma_a * sum of (x - y))` compared
/// lexicographically.
fn point_key(c: &Chamber, p: &FixedPoint) -> Result<(i64, i64)> {
    let mut pos_sum = 0i64;
    let mut a_sum = 0i64;
    for comp in p.components() {
        let pos = c.u_position(comp.vertex, comp.framing)?;
        for b in comp.partition.boxes() {
            pos_sum += pos;
            a_sum += c.sigma_a() * (b.x as i64 - b.y as i64);
        }
    }
    Ok((pos_sum, a_sum))
}

/// Order fixed points by chamber: descending in the Morse value of the
/// chamber cocharacter (later framing slots sort first), ties broken by
/// the canonical text form. Downstream, restriction matrices of stable
/// envelopes are upper triangular in this order — that triangularity,
/// not the key itself, is the contract.
pub fn order_fixed_points(points: &[FixedPoint], c: &Chamber) -> Result<Vec<FixedPoint>> {
    let mut keyed: Vec<((i64, i64), String, FixedPoint)> = points
        .iter()
        .map(|p| Ok((point_key(c, p)?, p.to_string(), p.clone())))
        .collect::<Result<_>>()?;
    keyed.sort_by(|a, b| match b.0.cmp(&a.0) {
        Ordering::Equal => a.1.cmp(&b.1),
        other => other,
    });
    Ok(keyed.into_iter().map(|(_, _, p)| p).collect())
}
