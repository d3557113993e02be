//! Quasi-period factors of the envelope.
//!
//! Shifting any Chern root, framing parameter or Kähler parameter by `q`
//! multiplies the (off-shell) envelope by a pure monomial. This module
//! computes that monomial for every such variable at once; a non-monomial
//! ratio would mean the assembled expression is not an envelope at all,
//! so it surfaces as an error rather than a value.

use std::collections::BTreeMap;

use crate::combin::FixedPoint;
use crate::error::Result;
use crate::quiver::{Arrows, Chamber, QuiverData};
use crate::symbolic::{Monomial, Variable};

use super::stab::stab;

/// For each variable `x[i,k]`, `u[i,j]` and `z[i]` of the quiver datum,
/// the monomial `Stab|_{v -> q v} / Stab`. Variables absent from the
/// envelope get factor `1`.
pub fn quasiperiods_of_stab(
    d: &QuiverData,
    p: &FixedPoint,
    a: &Arrows,
    c: &Chamber,
) -> Result<BTreeMap<Variable, Monomial>> {
    let e = stab(d, p, a, c)?;
    let mut out = BTreeMap::new();
    for i in 1..=d.r() {
        for k in 1..=d.v_at(i) {
            let v = Variable::x(i, k);
            let f = e.quasi_period_factor(&v)?;
            out.insert(v, f);
        }
        for j in 1..=d.w_at(i) {
            let v = Variable::u(i, j);
            let f = e.quasi_period_factor(&v)?;
            out.insert(v, f);
        }
        let v = Variable::z(i);
        let f = e.quasi_period_factor(&v)?;
        out.insert(v, f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_expr;

    fn monomial(text: &str) -> Monomial {
        parse_expr(text).unwrap().as_monomial().unwrap().clone()
    }

    #[test]
    fn two_vertex_point_reproduces_the_reference_factors() {
        let d = QuiverData::new(vec![1, 1], vec![1, 1]).unwrap();
        let p = FixedPoint::parse("[[[],1,1],[[1,1],2,1]]").unwrap();
        let a = Arrows::example(2);
        let c = Chamber::parse("[t2,t1,u[1,1],u[2,1]]").unwrap();
        let qp = quasiperiods_of_stab(&d, &p, &a, &c).unwrap();
        assert_eq!(
            qp[&Variable::x(2, 1)],
            monomial("-x[1,1]^2*u[2,1]/(q^(3/2)*x[2,1]^3*z[2])"),
        );
        // One factor per Chern root, framing parameter and Kähler
        // parameter of the datum.
        assert_eq!(qp.len(), 6);
    }

    #[test]
    fn single_box_factors() {
        // Stab = theta(t2) * theta(z x/u) / theta(z) has classical
        // quasi-periods in each variable.
        let d = QuiverData::new(vec![1], vec![1]).unwrap();
        let p = FixedPoint::parse("[[[1],1,1]]").unwrap();
        let a = Arrows::example(1);
        let c = Chamber::example(&[1]);
        let qp = quasiperiods_of_stab(&d, &p, &a, &c).unwrap();
        // theta(q c) = -c^(-1) q^(-1/2) theta(c):
        assert_eq!(
            qp[&Variable::x(1, 1)],
            monomial("-u[1,1]/(q^(1/2)*z[1]*x[1,1])"),
        );
        assert_eq!(
            qp[&Variable::u(1, 1)],
            monomial("-q^(-1/2)*z[1]*x[1,1]/u[1,1]"),
        );
        // The z shift hits numerator and denominator; the q-powers and
        // signs cancel, leaving a pure ratio of weights.
        assert_eq!(qp[&Variable::z(1)], monomial("u[1,1]/x[1,1]"));
    }
}
