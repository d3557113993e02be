//! Tautological bundles, the virtual tangent space, and fixed-point
//! restriction.
//!
//! Characters live in the theta-expression ring but are factor-free
//! Laurent polynomials: sums of monomials in the Chern roots `x[i,k]`,
//! framing variables `u[i,j]`, and the torus weights `t1, t2`. The
//! virtual tangent space of the cyclic-quiver variety is
//!
//! ```text
//! T = sum_i [ t2*Hom(V_i, V_{i+1}) + t1*Hom(V_{i+1}, V_i) ]
//!   + sum_i [ Hom(W_i, V_i) + t1*t2*Hom(V_i, W_i) ]
//!   - sum_i (1 + t1*t2) * Hom(V_i, V_i)
//! ```
//!
//! with `Hom(A, B)` expanded as the sum of ratios (root of `B`)/(root of
//! `A`) over Chern roots and framing variables. At a fixed point the
//! Chern roots restrict to box weights; equal monomials then cancel
//! exactly, leaving the honest tangent character with positive integer
//! multiplicities summing to the dimension.

use std::collections::BTreeMap;

use num::Signed;

use crate::combin::partition::{BoxPos, FixedPoint};
use crate::error::{Error, Result};
use crate::quiver::data::QuiverData;
use crate::rational::to_i64;
use crate::symbolic::expr::{Term, ThetaExpr};
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

/// The character of the tautological bundle at vertex `i`:
/// `x[i,1] + ... + x[i,v_i]`.
pub fn tautological_bundle(d: &QuiverData, i: u32) -> Result<ThetaExpr> {
    if i < 1 || i > d.r() {
        return Err(Error::validation(format!(
            "vertex {i} out of range 1..={}",
            d.r()
        )));
    }
    let terms = (1..=d.v_at(i))
        .map(|k| Term::from_monomial(Monomial::var(Variable::x(i, k))))
        .collect();
    Ok(ThetaExpr::from_terms(terms))
}

/// Roots of `V_i` as monomials.
fn v_roots(d: &QuiverData, i: u32) -> Vec<Monomial> {
    (1..=d.v_at(i)).map(|k| Monomial::var(Variable::x(i, k))).collect()
}

/// Roots of `W_i` as monomials.
fn w_roots(d: &QuiverData, i: u32) -> Vec<Monomial> {
    (1..=d.w_at(i)).map(|j| Monomial::var(Variable::u(i, j))).collect()
}

/// `Hom(A, B)` as a Laurent character: sum of `b/a` over roots.
pub fn hom_character(a_roots: &[Monomial], b_roots: &[Monomial]) -> Result<ThetaExpr> {
    let mut terms = Vec::with_capacity(a_roots.len() * b_roots.len());
    for a in a_roots {
        let inv = a.inverse()?;
        for b in b_roots {
            terms.push(Term::from_monomial(b.clone() * inv.clone()));
        }
    }
    Ok(ThetaExpr::from_terms(terms))
}

/// The virtual tangent character in tautological Chern roots (equal
/// monomials merge with integer coefficients; cancellation against the
/// negative `Hom(V, V)` rows genuinely happens only after restriction).
pub fn virtual_tangent_space(d: &QuiverData) -> Result<ThetaExpr> {
    let t1 = Monomial::var(Variable::T1);
    let t2 = Monomial::var(Variable::T2);
    let t1t2 = Monomial::t1t2();
    let mut acc = ThetaExpr::zero();
    for i in 1..=d.r() {
        let n = d.next(i);
        let vi = v_roots(d, i);
        let vn = v_roots(d, n);
        let wi = w_roots(d, i);
        acc = acc.add(&hom_character(&vi, &vn)?.mul_monomial(&t2));
        acc = acc.add(&hom_character(&vn, &vi)?.mul_monomial(&t1));
        acc = acc.add(&hom_character(&wi, &vi)?);
        acc = acc.add(&hom_character(&vi, &wi)?.mul_monomial(&t1t2));
        let vv = hom_character(&vi, &vi)?;
        acc = acc.sub(&vv);
        acc = acc.sub(&vv.mul_monomial(&t1t2));
    }
    Ok(acc)
}

/// The canonical assignment of Chern roots to boxes at a fixed point.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Chern root -> box weight.
    pub images: BTreeMap<Variable, Monomial>,
    /// `(vertex, framing, box)` -> the Chern root assigned to that box.
    pub root_of_box: BTreeMap<(u32, u32, BoxPos), Variable>,
}

/// Compute the restriction data at a fixed point: for each vertex residue
/// `i`, the boxes lying over `i` (sorted by slot, then row, then column)
/// are matched with `x[i,1..v_i]` in order, each root restricting to its
/// box weight `t1^(1-y) t2^(1-x) u[i,j]`.
pub fn restriction_data(d: &QuiverData, p: &FixedPoint) -> Result<Restriction> {
    p.validate(d.v(), d.w())?;
    let r = d.r();
    let mut per_residue: BTreeMap<u32, Vec<((u32, u32, BoxPos), Monomial)>> = BTreeMap::new();
    for c in p.components() {
        for b in c.partition.boxes() {
            let res = c.residue(b, r);
            per_residue
                .entry(res)
                .or_default()
                .push(((c.vertex, c.framing, b), c.box_weight(b)));
        }
    }
    let mut images = BTreeMap::new();
    let mut root_of_box = BTreeMap::new();
    for (res, mut boxes) in per_residue {
        boxes.sort_by(|a, b| a.0.cmp(&b.0));
        for (k, (id, weight)) in boxes.into_iter().enumerate() {
            let root = Variable::x(res, k as u32 + 1);
            images.insert(root.clone(), weight);
            root_of_box.insert(id, root);
        }
    }
    Ok(Restriction { images, root_of_box })
}

/// The Chern-root restriction map at a fixed point.
pub fn restrict_map(d: &QuiverData, p: &FixedPoint) -> Result<BTreeMap<Variable, Monomial>> {
    Ok(restriction_data(d, p)?.images)
}

/// The tangent character at a fixed point: the virtual tangent space with
/// Chern roots replaced by box weights and equal monomials cancelled.
///
/// The fixed point is a smooth point, so after cancellation every
/// surviving weight must carry a positive integer multiplicity and the
/// multiplicities must sum to `dim`; either failing is an internal
/// error. Multiplicities above `1` do occur (distinct weight spaces of
/// the same torus weight), so callers counting weights must sum
/// coefficients rather than terms.
pub fn tangent_space_at(d: &QuiverData, p: &FixedPoint) -> Result<ThetaExpr> {
    let map = restrict_map(d, p)?;
    let character = virtual_tangent_space(d)?.substitute(&map)?;
    let dim = d.dim();
    let mut total = 0i64;
    for t in character.terms() {
        let c = to_i64(t.prefactor.coeff()).unwrap_or(-1);
        if c <= 0 {
            return Err(Error::internal(format!(
                "tangent character at {p} has coefficient {} on {}; \
                 fixed-point theory requires positive integers",
                t.prefactor.coeff(),
                t.prefactor
            )));
        }
        total += c;
    }
    if total != dim {
        return Err(Error::internal(format!(
            "tangent character at {p} has total multiplicity {total}, \
             expected dim = {dim}"
        )));
    }
    Ok(character)
}

/// Total signed term count (sum of absolute coefficients) of a Laurent
/// character — the pre-cancellation size used in sanity checks.
pub fn character_weight(e: &ThetaExpr) -> Result<i64> {
    let mut acc = 0i64;
    for t in e.terms() {
        let c = t.prefactor.coeff();
        let n = to_i64(&c.abs())
            .ok_or_else(|| Error::internal("coefficient out of range".to_string()))?;
        acc += n;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse::parse_expr;

    #[test]
    fn tautological_bundle_lists_roots() {
        let d = QuiverData::new(vec![2, 1], vec![1, 1]).unwrap();
        let e = tautological_bundle(&d, 1).unwrap();
        assert_eq!(e, parse_expr("x[1,1]+x[1,2]").unwrap());
        assert!(tautological_bundle(&d, 3).is_err());
    }

    #[test]
    fn virtual_tangent_weight_matches_the_count_formula() {
        // Sum of |coefficients| = 2*sum v_i v_{i+1} + 2*sum v_i w_i
        // + 2*sum v_i^2 (no +/- collisions happen before restriction).
        for (v, w) in [
            (vec![1], vec![1]),
            (vec![2], vec![1]),
            (vec![1, 1], vec![1, 1]),
            (vec![2, 2, 3], vec![2, 1, 0]),
        ] {
            let d = QuiverData::new(v.clone(), w.clone()).unwrap();
            let r = v.len();
            let expected: i64 = (0..r)
                .map(|i| {
                    2 * v[i] as i64 * v[(i + 1) % r] as i64
                        + 2 * v[i] as i64 * w[i] as i64
                        + 2 * v[i] as i64 * v[i] as i64
                })
                .sum();
            let t = virtual_tangent_space(&d).unwrap();
            assert_eq!(character_weight(&t).unwrap(), expected, "v={v:?} w={w:?}");
        }
    }

    #[test]
    fn zero_gauge_dimension_gives_zero_character() {
        let d = QuiverData::new(vec![0, 0], vec![1, 1]).unwrap();
        assert!(virtual_tangent_space(&d).unwrap().is_zero());
    }

    #[test]
    fn restriction_matches_the_reference_example() {
        let d = QuiverData::new(vec![1, 1], vec![1, 1]).unwrap();
        let p = FixedPoint::parse("[[[],1,1],[[1,1],2,1]]").unwrap();
        let map = restrict_map(&d, &p).unwrap();
        assert_eq!(map.len(), 2);
        assert_eq!(
            map[&Variable::x(1, 1)],
            parse_expr("u[2,1]/t2").unwrap().as_monomial().unwrap().clone()
        );
        assert_eq!(
            map[&Variable::x(2, 1)],
            Monomial::var(Variable::u(2, 1))
        );
    }

    #[test]
    fn single_box_restricts_to_its_framing_variable() {
        let d = QuiverData::new(vec![1], vec![1]).unwrap();
        let p = FixedPoint::parse("[[[1],1,1]]").unwrap();
        let map = restrict_map(&d, &p).unwrap();
        assert_eq!(map[&Variable::x(1, 1)], Monomial::var(Variable::u(1, 1)));
    }

    #[test]
    fn tangent_character_of_one_box_is_t1_plus_t2() {
        let d = QuiverData::new(vec![1], vec![1]).unwrap();
        let p = FixedPoint::parse("[[[1],1,1]]").unwrap();
        let t = tangent_space_at(&d, &p).unwrap();
        assert_eq!(t, parse_expr("t1+t2").unwrap());
    }

    #[test]
    fn tangent_character_matches_the_two_vertex_example() {
        let d = QuiverData::new(vec![1, 1], vec![1, 1]).unwrap();
        let p = FixedPoint::parse("[[[],1,1],[[1,1],2,1]]").unwrap();
        let t = tangent_space_at(&d, &p).unwrap();
        let expected =
            parse_expr("t2^2 + u[2,1]/(u[1,1]*t2) + t1/t2 + t1*t2^2*u[1,1]/u[2,1]").unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn tangent_term_count_equals_dim_for_all_points() {
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        let points = crate::combin::enumerate::enumerate_fixed_points(d.v(), d.w()).unwrap();
        assert_eq!(points.len(), 51);
        for p in &points {
            // tangent_space_at itself enforces multiplicity sum == dim.
            let t = tangent_space_at(&d, p).unwrap();
            assert_eq!(character_weight(&t).unwrap(), d.dim(), "at {p}");
        }
    }

    #[test]
    fn tangent_weights_can_have_multiplicity_two() {
        // At this point two torus weights each occur in two independent
        // weight spaces, so the cancelled character has 8 distinct
        // monomials of total multiplicity 10.
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        let p = FixedPoint::parse("[[[1],1,1],[[2,1,1],1,2],[[1,1],2,1]]").unwrap();
        let t = tangent_space_at(&d, &p).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(character_weight(&t).unwrap(), 10);
        let expected = parse_expr(
            "2*u[1,2]/u[1,1] + 2*t1*t2*u[1,1]/u[1,2] + t2*u[2,1]/u[1,1] \
             + t1*u[1,1]/u[2,1] + t2^3*u[1,1]/u[1,2] + t2^2*u[1,1]/u[2,1] \
             + t1*u[1,2]/(t2^2*u[1,1]) + t1*u[2,1]/(t2*u[1,1])",
        )
        .unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn restriction_images_are_distinct_within_each_residue() {
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        let points = crate::combin::enumerate::enumerate_fixed_points(d.v(), d.w()).unwrap();
        for p in &points {
            let map = restrict_map(&d, p).unwrap();
            for i in 1..=d.r() {
                let imgs: Vec<&Monomial> = (1..=d.v_at(i))
                    .map(|k| &map[&Variable::x(i, k)])
                    .collect();
                for a in 0..imgs.len() {
                    for b in a + 1..imgs.len() {
                        assert_ne!(imgs[a], imgs[b], "at {p}, residue {i}");
                    }
                }
            }
        }
    }
}
