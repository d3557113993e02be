//! Polarizations (half tangent spaces) and per-box index exponents.
//!
//! The virtual tangent character splits into pairs of summands
//! interchanged by the symplectic duality `m <-> t1*t2/m`. An arrows
//! choice picks one summand from each pair, row by row:
//!
//! * row 1, vertex `i`: `+1` keeps `t2*Hom(V_i, V_{i+1})`, `-1` keeps
//!   `t1*Hom(V_{i+1}, V_i)`;
//! * row 2, vertex `i`: `+1` keeps `Hom(W_i, V_i)`, `-1` keeps
//!   `t1*t2*Hom(V_i, W_i)`;
//! * row 3, vertex `i`: `+1` keeps `-Hom(V_i, V_i)`, `-1` keeps
//!   `-t1*t2*Hom(V_i, V_i)` (these rows enter the tangent space with a
//!   minus sign).
//!
//! The result `T^(1/2)` satisfies `T^(1/2) + t1*t2*(T^(1/2))^dual = T`.
//!
//! The index exponent `d_a` of a box measures how much of the attracting
//! half of `T^(1/2)` is charged to the box's Chern root: every monomial
//! of `T^(1/2)` is restricted to the fixed point and classified by the
//! chamber, and the signed `x`-exponents of the attracting monomials are
//! summed per root. A restriction that pairs to zero against the chamber
//! is classified by its `hbar`-degree — the same infinitesimal tie-break
//! the `rho`-order uses — so a positive pure power of `t1*t2` counts as
//! attracting, while exact scalars belong to neither half and contribute
//! nothing. The tie-break is not optional: without it the symmetrized
//! envelope entries fail to glue (their framing quasi-period factors
//! differ between summands whenever two same-residue roots restrict to
//! different framing slots).

use std::collections::BTreeMap;

use crate::combin::partition::FixedPoint;
use crate::error::{Error, Result};
use crate::quiver::data::{Arrows, Chamber, QuiverData};
use crate::quiver::rho::attraction_value;
use crate::quiver::tangent::{hom_character, restrict_map};
use crate::rational::{qsign, to_i64};
use crate::symbolic::expr::ThetaExpr;
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

fn v_roots(d: &QuiverData, i: u32) -> Vec<Monomial> {
    (1..=d.v_at(i)).map(|k| Monomial::var(Variable::x(i, k))).collect()
}

fn w_roots(d: &QuiverData, i: u32) -> Vec<Monomial> {
    (1..=d.w_at(i)).map(|j| Monomial::var(Variable::u(i, j))).collect()
}

/// The polarization character `T^(1/2)` selected by an arrows choice, in
/// tautological Chern roots.
pub fn polarization(d: &QuiverData, a: &Arrows) -> Result<ThetaExpr> {
    a.validate_for(d)?;
    let t1 = Monomial::var(Variable::T1);
    let t2 = Monomial::var(Variable::T2);
    let t1t2 = Monomial::t1t2();
    let mut acc = ThetaExpr::zero();
    for i in 1..=d.r() {
        let n = d.next(i);
        let vi = v_roots(d, i);
        let vn = v_roots(d, n);
        let wi = w_roots(d, i);
        acc = match a.entry(0, i) {
            1 => acc.add(&hom_character(&vi, &vn)?.mul_monomial(&t2)),
            _ => acc.add(&hom_character(&vn, &vi)?.mul_monomial(&t1)),
        };
        acc = match a.entry(1, i) {
            1 => acc.add(&hom_character(&wi, &vi)?),
            _ => acc.add(&hom_character(&vi, &wi)?.mul_monomial(&t1t2)),
        };
        let vv = hom_character(&vi, &vi)?;
        acc = match a.entry(2, i) {
            1 => acc.sub(&vv),
            _ => acc.sub(&vv.mul_monomial(&t1t2)),
        };
    }
    Ok(acc)
}

/// Whether a restricted polarization weight belongs to the attracting
/// half: either the chamber pairing decides directly, or — for weights
/// the chamber cannot see — a positive `hbar`-degree breaks the tie.
pub fn counts_as_attracting(restricted: &Monomial, c: &Chamber) -> Result<bool> {
    match attraction_value(restricted, c)? {
        1 => Ok(true),
        0 => {
            let hbar_degree =
                restricted.exponent(&Variable::T1) + restricted.exponent(&Variable::T2);
            Ok(qsign(&hbar_degree) > 0)
        }
        _ => Ok(false),
    }
}

/// Per-Chern-root index exponents `d_a` at a fixed point: all roots
/// `x[i,k]` appear as keys, with `0` for roots receiving no attracting
/// contribution.
pub fn index_exponents(
    d: &QuiverData,
    p: &FixedPoint,
    a: &Arrows,
    c: &Chamber,
) -> Result<BTreeMap<Variable, i64>> {
    let pol = polarization(d, a)?;
    let map = restrict_map(d, p)?;
    let mut out: BTreeMap<Variable, i64> = BTreeMap::new();
    for i in 1..=d.r() {
        for k in 1..=d.v_at(i) {
            out.insert(Variable::x(i, k), 0);
        }
    }
    for t in pol.terms() {
        let coeff = to_i64(t.prefactor.coeff()).ok_or_else(|| {
            Error::internal("polarization coefficient out of range".to_string())
        })?;
        let restricted = t.prefactor.substitute(&map)?;
        if !counts_as_attracting(&restricted, c)? {
            continue;
        }
        for (v, e) in t.prefactor.exponents() {
            if matches!(v, Variable::X(_, _)) {
                let exp = to_i64(e).ok_or_else(|| {
                    Error::internal("non-integer Chern-root exponent".to_string())
                })?;
                *out.get_mut(v).expect("all roots pre-seeded") += coeff * exp;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::enumerate::enumerate_fixed_points;
    use crate::symbolic::parse::parse_expr;

    /// Build the expected character for an explicit Hom-summand list.
    fn hom(d: &QuiverData, from_v: Option<u32>, from_w: Option<u32>, to_v: Option<u32>, to_w: Option<u32>) -> ThetaExpr {
        let a = match (from_v, from_w) {
            (Some(i), None) => v_roots(d, i),
            (None, Some(i)) => w_roots(d, i),
            _ => unreachable!(),
        };
        let b = match (to_v, to_w) {
            (Some(i), None) => v_roots(d, i),
            (None, Some(i)) => w_roots(d, i),
            _ => unreachable!(),
        };
        hom_character(&a, &b).unwrap()
    }

    #[test]
    fn worked_three_vertex_polarization() {
        // arrows = [[1,-1,1],[-1,1,1],[-1,-1,1]] selects
        // t2 Hom(V1,V2) + t1 Hom(V3,V2) + t2 Hom(V3,V1)
        // + t1t2 Hom(V1,W1) + Hom(W2,V2) + Hom(W3,V3)
        // - t1t2 Hom(V1,V1) - t1t2 Hom(V2,V2) - Hom(V3,V3).
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        let a = Arrows::parse("[[1,-1,1],[-1,1,1],[-1,-1,1]]").unwrap();
        let t1 = Monomial::var(Variable::T1);
        let t2 = Monomial::var(Variable::T2);
        let t1t2 = Monomial::t1t2();
        let expected = hom(&d, Some(1), None, Some(2), None)
            .mul_monomial(&t2)
            .add(&hom(&d, Some(3), None, Some(2), None).mul_monomial(&t1))
            .add(&hom(&d, Some(3), None, Some(1), None).mul_monomial(&t2))
            .add(&hom(&d, Some(1), None, None, Some(1)).mul_monomial(&t1t2))
            .add(&hom(&d, None, Some(2), Some(2), None))
            .add(&hom(&d, None, Some(3), Some(3), None))
            .sub(&hom(&d, Some(1), None, Some(1), None).mul_monomial(&t1t2))
            .sub(&hom(&d, Some(2), None, Some(2), None).mul_monomial(&t1t2))
            .sub(&hom(&d, Some(3), None, Some(3), None));
        assert_eq!(polarization(&d, &a).unwrap(), expected);
    }

    #[test]
    fn single_box_all_plus_polarization() {
        let d = QuiverData::new(vec![1], vec![1]).unwrap();
        let a = Arrows::example(1);
        let pol = polarization(&d, &a).unwrap();
        assert_eq!(pol, parse_expr("x[1,1]/u[1,1] + t2 - 1").unwrap());
    }

    #[test]
    fn polarization_identity_for_many_arrow_choices() {
        // T^(1/2) + t1*t2 * dual(T^(1/2)) = T, whatever the arrows.
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        let t = crate::quiver::tangent::virtual_tangent_space(&d).unwrap();
        let t1t2 = Monomial::t1t2();
        for mask in (0..512u32).step_by(51) {
            let mut rows: [Vec<i8>; 3] = [vec![], vec![], vec![]];
            for (bit, row) in (0..9).map(|b| (mask >> b & 1, b / 3)) {
                rows[row].push(if bit == 1 { 1 } else { -1 });
            }
            let a = Arrows::new(rows).unwrap();
            let half = polarization(&d, &a).unwrap();
            let rebuilt = half.add(&half.dual_character().unwrap().mul_monomial(&t1t2));
            assert_eq!(rebuilt, t, "arrows {a}");
        }
    }

    #[test]
    fn index_exponents_of_the_column_point() {
        let d = QuiverData::new(vec![2], vec![1]).unwrap();
        let p = FixedPoint::parse("[[[1,1],1,1]]").unwrap();
        let a = Arrows::example(1);
        let c = Chamber::parse("[t2,t1,u[1,1]]").unwrap();
        let idx = index_exponents(&d, &p, &a, &c).unwrap();
        assert_eq!(idx[&Variable::x(1, 1)], 1);
        assert_eq!(idx[&Variable::x(1, 2)], 0);
    }

    #[test]
    fn index_exponents_match_determinant_of_attracting_half() {
        // Independent re-derivation: multiply the x-parts of the
        // attracting monomials (with multiplicity) and compare against
        // prod_a x_a^{d_a}.
        for (v, w) in [
            (vec![2], vec![1]),
            (vec![1, 1], vec![1, 1]),
            (vec![2, 1], vec![1, 1]),
        ] {
            let d = QuiverData::new(v, w).unwrap();
            let a = Arrows::example(d.r());
            let c = Chamber::example(d.w());
            for p in enumerate_fixed_points(d.v(), d.w()).unwrap() {
                let idx = index_exponents(&d, &p, &a, &c).unwrap();
                let map = restrict_map(&d, &p).unwrap();
                let mut det = Monomial::one();
                for t in polarization(&d, &a).unwrap().terms() {
                    let restricted = t.prefactor.substitute(&map).unwrap();
                    if !counts_as_attracting(&restricted, &c).unwrap() {
                        continue;
                    }
                    let mut xpart = Monomial::one();
                    for (var, e) in t.prefactor.exponents() {
                        if matches!(var, Variable::X(_, _)) {
                            xpart.mul_var_pow(var.clone(), e.clone());
                        }
                    }
                    det = det * xpart.powi(to_i64(t.prefactor.coeff()).unwrap()).unwrap();
                }
                let mut expected = Monomial::one();
                for (var, e) in &idx {
                    expected.mul_var_pow(var.clone(), crate::rational::qint(*e));
                }
                assert_eq!(det, expected, "at {p}");
            }
        }
    }

    #[test]
    fn hbar_tie_break_splits_the_index_between_same_residue_roots() {
        // At the top point of v = [2,1], w = [1,1] the polarization term
        // t2*x[2,1]/x[1,1] restricts to t1*t2: invisible to the chamber,
        // but its positive hbar-degree places it in the attracting half.
        // The naive classification would give d = (2, 0, 0); the
        // tie-break moves one unit from x[1,1] to x[2,1], and only the
        // refined split lets the two symmetrized summands of the envelope
        // carry a common framing quasi-period.
        let d = QuiverData::new(vec![2, 1], vec![1, 1]).unwrap();
        let p = FixedPoint::parse("[[[],1,1],[[2,1],2,1]]").unwrap();
        let a = Arrows::example(2);
        let c = Chamber::example(&[1, 1]);
        let idx = index_exponents(&d, &p, &a, &c).unwrap();
        assert_eq!(idx[&Variable::x(1, 1)], 1);
        assert_eq!(idx[&Variable::x(1, 2)], 0);
        assert_eq!(idx[&Variable::x(2, 1)], 1);
    }

    #[test]
    fn zero_dimension_vector_has_empty_index() {
        let d = QuiverData::new(vec![0], vec![1]).unwrap();
        let p = FixedPoint::parse("[[[],1,1]]").unwrap();
        let idx = index_exponents(
            &d,
            &p,
            &Arrows::example(1),
            &Chamber::parse("[t2,t1,u[1,1]]").unwrap(),
        )
        .unwrap();
        assert!(idx.is_empty());
    }
}
