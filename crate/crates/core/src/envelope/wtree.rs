//! Tree weights: the Kähler-parameter-carrying part of the envelope
//! formula.
//!
//! For an admissible tree in one partition of the tuple, the weight is a
//! signed product of two-argument factors
//! `phi2(x, z) = theta(x*z) / (theta(x) * theta(z))`:
//!
//! * one root factor whose first argument is the root's Chern root over
//!   its framing weight, and
//! * one factor per tree edge whose first argument is the head/tail
//!   Chern-root ratio twisted by the inverse ratio of box weights.
//!
//! The second argument is always the product, over the subtree hanging
//! from the factor's box, of `z_{residue} * (t1*t2)^{index}`. The sign is
//! `(-1)^kappa` with `kappa` the tree's orientation statistic.

use crate::combin::{BoxPos, Tree};
use crate::error::{Error, Result};
use crate::rational::qint;
use crate::symbolic::expr::Term;
use crate::symbolic::{Monomial, ThetaExpr, Variable};

use super::context::StabContext;

/// The product over `boxes` of `z_{residue} * (t1*t2)^{index}`.
fn z_product(ctx: &StabContext, comp: usize, boxes: &[BoxPos]) -> Result<Monomial> {
    let mut m = Monomial::one();
    for &pos in boxes {
        let b = ctx.box_at(comp, pos)?;
        m.mul_var_pow(Variable::z(b.residue), qint(1));
        m = m * Monomial::t1t2().powi(b.index)?;
    }
    Ok(m)
}

/// A `phi2` factor as a term, with a caller-supplied description used in
/// pole reports.
fn phi2_factor(x: &Monomial, z: &Monomial, what: impl Fn() -> String) -> Result<Term> {
    let e = ThetaExpr::phi2(x, z).map_err(|err| match err {
        Error::Pole(msg) => Error::pole(format!("{}: {msg}", what())),
        other => other,
    })?;
    e.as_single_term()
        .cloned()
        .ok_or_else(|| Error::internal(format!("{} did not reduce to a single term", what())))
}

/// The tree weight of one component as a single (signed) term. An empty
/// component has the empty tree and weight `1`.
pub(crate) fn w_tree_term(ctx: &StabContext, comp: usize, t: &Tree) -> Result<Term> {
    let lp = ctx
        .point()
        .components()
        .get(comp)
        .ok_or_else(|| Error::internal(format!("component {comp} out of range")))?;
    if lp.partition.is_empty() {
        return Ok(Term::one());
    }
    let root_pos = BoxPos::new(1, 1);
    let root = ctx.box_at(comp, root_pos)?;
    let root_arg = Monomial::var(root.root.clone()) * root.weight.inverse()?;
    let root_z = z_product(ctx, comp, &t.subtree(root_pos))?;
    let mut term = phi2_factor(&root_arg, &root_z, || {
        format!("root factor of component {comp}")
    })?;
    for e in t.edges() {
        let head = ctx.box_at(comp, e.head)?;
        let tail = ctx.box_at(comp, e.tail)?;
        let arg = Monomial::var(head.root.clone())
            * tail.weight.clone()
            * (Monomial::var(tail.root.clone()) * head.weight.clone()).inverse()?;
        let z = z_product(ctx, comp, &t.subtree(e.head))?;
        let factor = phi2_factor(&arg, &z, || {
            format!("edge {} -> {} of component {comp}", e.tail, e.head)
        })?;
        term = term.mul(&factor);
    }
    if t.kappa() % 2 == 1 {
        term = term.mul(&Term::from_monomial(-Monomial::one()));
    }
    Ok(term)
}

/// The tree weight of one component of the fixed point.
pub fn w_tree(ctx: &StabContext, comp: usize, t: &Tree) -> Result<ThetaExpr> {
    Ok(ThetaExpr::from_terms(vec![w_tree_term(ctx, comp, t)?]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::{admissible_trees, FixedPoint};
    use crate::quiver::{Arrows, Chamber, QuiverData};
    use crate::symbolic::parse_expr;

    fn ctx(v: &[u32], w: &[u32], point: &str, chamb: &str) -> StabContext {
        let d = QuiverData::new(v.to_vec(), w.to_vec()).unwrap();
        let p = FixedPoint::parse(point).unwrap();
        let a = Arrows::example(d.r());
        let c = Chamber::parse(chamb).unwrap();
        StabContext::new(&d, &p, &a, &c).unwrap()
    }

    fn assert_term_is(t: &Term, expected: &str) {
        let got = ThetaExpr::from_terms(vec![t.clone()]).normal_form().unwrap();
        let want = parse_expr(expected).unwrap().normal_form().unwrap();
        assert_eq!(got, want, "got {got}, want {want}");
    }

    #[test]
    fn single_box_weight_is_one_root_factor() {
        let ctx = ctx(&[1], &[1], "[[[1],1,1]]", "[t2,t1,u[1,1]]");
        let trees = admissible_trees(&ctx.point().components()[0].partition).unwrap();
        assert_eq!(trees.len(), 1);
        // d = 0 for the single box, so the z-argument is plain z[1].
        assert_term_is(
            &w_tree_term(&ctx, 0, &trees[0]).unwrap(),
            "theta(z[1]*x[1,1]/u[1,1])/(theta(x[1,1]/u[1,1])*theta(z[1]))",
        );
    }

    #[test]
    fn column_tree_weight_matches_the_worked_factors() {
        // v=[2] column point: index (1, 0), subtree products z1^2*t1*t2
        // at the root and z1 at the lower box.
        let ctx = ctx(&[2], &[1], "[[[1,1],1,1]]", "[t2,t1,u[1,1]]");
        let trees = admissible_trees(&ctx.point().components()[0].partition).unwrap();
        assert_eq!(trees.len(), 1);
        assert_term_is(
            &w_tree_term(&ctx, 0, &trees[0]).unwrap(),
            "theta(t1*t2*z[1]^2*x[1,1]/u[1,1])*theta(t2*z[1]*x[1,2]/x[1,1])\
             /(theta(x[1,1]/u[1,1])*theta(t1*t2*z[1]^2)\
               *theta(t2*x[1,2]/x[1,1])*theta(z[1]))",
        );
    }

    #[test]
    fn empty_component_has_unit_weight() {
        let ctx = ctx(
            &[1, 1],
            &[1, 1],
            "[[[],1,1],[[1,1],2,1]]",
            "[t2,t1,u[1,1],u[2,1]]",
        );
        let empty = admissible_trees(&ctx.point().components()[0].partition).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(w_tree_term(&ctx, 0, &empty[0]).unwrap(), Term::one());
        // The nonempty component crosses residues: z-products mix z1, z2.
        let trees = admissible_trees(&ctx.point().components()[1].partition).unwrap();
        assert_eq!(trees.len(), 1);
        assert_term_is(
            &w_tree_term(&ctx, 1, &trees[0]).unwrap(),
            "theta(t1*t2*z[1]*z[2]*x[2,1]/u[2,1])*theta(t1*t2^2*z[1]*x[1,1]/x[2,1])\
             /(theta(x[2,1]/u[2,1])*theta(t1*t2*z[1]*z[2])\
               *theta(t2*x[1,1]/x[2,1])*theta(t1*t2*z[1]))",
        );
    }

    #[test]
    fn square_partition_trees_split_by_sign() {
        // The 2x2 square has one L-shape, hence two admissible trees with
        // opposite kappa parity: their weights differ in sign pattern.
        let ctx = ctx(&[4], &[1], "[[[2,2],1,1]]", "[t2,t1,u[1,1]]");
        let trees = admissible_trees(&ctx.point().components()[0].partition).unwrap();
        assert_eq!(trees.len(), 2);
        let signs: Vec<i64> = trees
            .iter()
            .map(|t| if t.kappa() % 2 == 1 { -1 } else { 1 })
            .collect();
        assert_eq!(signs.iter().sum::<i64>(), 0, "one tree of each parity");
        for t in &trees {
            let term = w_tree_term(&ctx, 0, t).unwrap();
            // 3 edges + root: four phi2 factors, each contributing one
            // numerator theta; denominators may merge between factors.
            let numerator: i64 = term
                .factors
                .iter()
                .filter(|f| f.power > 0)
                .map(|f| f.power)
                .sum();
            assert_eq!(numerator, 4);
        }
    }
}
