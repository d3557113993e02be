//! Assembly and symmetrization of the stable envelope, and the matrix of
//! its restrictions to all torus-fixed points.
//!
//! The off-shell envelope of a fixed point is
//!
//! ```text
//! Stab = Sym_1 ... Sym_r ( S * sum over admissible-tree tuples of prod W )
//! ```
//!
//! where `S` is the product of the three theta factors from
//! [`super::sprod`], `W` the tree weights from [`super::wtree`], and
//! `Sym_i` sums over all permutations of the Chern roots `x[i,*]` (plain
//! sums, no `1/n!`). Restricting the row envelope at a column fixed point
//! specializes every Chern root to the column's framing-weight monomial;
//! vanishing summands drop out and any net pole is a formula bug, not a
//! user error.

use std::collections::BTreeMap;

use crate::combin::{admissible_trees, enumerate_fixed_points, FixedPoint};
use crate::error::{Error, Result};
use crate::par::par_try_map;
use crate::quiver::{order_fixed_points, restrict_map, Arrows, Chamber, QuiverData};
use crate::symbolic::expr::Term;
use crate::symbolic::{Monomial, ThetaExpr, Variable};

use super::context::StabContext;
use super::sprod::s_term;
use super::wtree::w_tree_term;

// ====================================================================
// Symmetrization bookkeeping
// ====================================================================

/// All permutations of `1..=n` (each as the list of images), `[[]]` for
/// `n = 0`.
fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for k in 1..=n {
            if !used[(k - 1) as usize] {
                used[(k - 1) as usize] = true;
                cur.push(k);
                rec(n, cur, used, out);
                cur.pop();
                used[(k - 1) as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n as usize], &mut out);
    out
}

/// The symmetrization index set: one permutation per vertex, all
/// combinations (`prod_i v_i!` tuples).
fn perm_tuples(v: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for &n in v {
        let perms = permutations(n);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for prefix in &out {
            for p in &perms {
                let mut tuple = prefix.clone();
                tuple.push(p.clone());
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

/// The renaming `x[i,k] -> x[i, perm_i(k)]` as a substitution map
/// (identity images omitted).
fn perm_subst(d: &QuiverData, perm: &[Vec<u32>]) -> BTreeMap<Variable, Monomial> {
    let mut map = BTreeMap::new();
    for i in 1..=d.r() {
        let pi = &perm[(i - 1) as usize];
        for k in 1..=d.v_at(i) {
            let image = pi[(k - 1) as usize];
            if image != k {
                map.insert(Variable::x(i, k), Monomial::var(Variable::x(i, image)));
            }
        }
    }
    map
}

/// The permutation composed with a restriction: `x[i,k]` goes straight to
/// the column point's weight monomial for `x[i, perm_i(k)]`.
fn perm_restrict(
    d: &QuiverData,
    perm: &[Vec<u32>],
    col: &BTreeMap<Variable, Monomial>,
) -> Result<BTreeMap<Variable, Monomial>> {
    let mut map = BTreeMap::new();
    for i in 1..=d.r() {
        let pi = &perm[(i - 1) as usize];
        for k in 1..=d.v_at(i) {
            let target = Variable::x(i, pi[(k - 1) as usize]);
            let image = col
                .get(&target)
                .ok_or_else(|| Error::internal(format!("restriction map misses {target}")))?;
            map.insert(Variable::x(i, k), image.clone());
        }
    }
    Ok(map)
}

// ====================================================================
// Assembly
// ====================================================================

/// The summands of the envelope before symmetrization: for every tuple of
/// admissible trees (one per partition of the fixed point), the
/// canonicalized product `S * prod_c W_c`. Off shell no summand may
/// vanish or hit a pole, so either outcome is reported as an internal
/// inconsistency.
pub(crate) fn unsymmetrized(ctx: &StabContext) -> Result<Vec<Term>> {
    let s = s_term(ctx)?;
    let mut weights: Vec<Vec<Term>> = Vec::new();
    for (comp, lp) in ctx.point().components().iter().enumerate() {
        let trees = admissible_trees(&lp.partition)?;
        let mut list = Vec::with_capacity(trees.len());
        for t in &trees {
            list.push(w_tree_term(ctx, comp, t)?);
        }
        weights.push(list);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; weights.len()];
    loop {
        let mut term = s.clone();
        for (comp, &i) in idx.iter().enumerate() {
            term = term.mul(&weights[comp][i]);
        }
        let canon = term
            .canonicalize()
            .map_err(|e| Error::internal(format!("envelope summand has an off-shell pole: {e}")))?
            .ok_or_else(|| Error::internal("an envelope summand vanished off shell"))?;
        out.push(canon);
        // Odometer over the tree choices.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < weights[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The elliptic stable envelope of the fixed point `p`, off shell in the
/// Chern roots `x[i,k]`, in normal form.
pub fn stab(d: &QuiverData, p: &FixedPoint, a: &Arrows, c: &Chamber) -> Result<ThetaExpr> {
    let ctx = StabContext::new(d, p, a, c)?;
    let summands = unsymmetrized(&ctx)?;
    let parts = par_try_map(perm_tuples(d.v()), |perm| -> Result<Vec<Term>> {
        let map = perm_subst(d, &perm);
        let mut terms = Vec::with_capacity(summands.len());
        for t in &summands {
            let img = t
                .substitute_raw(&map)?
                .canonicalize()
                .map_err(|e| {
                    Error::internal(format!("permuted summand has an off-shell pole: {e}"))
                })?
                .ok_or_else(|| Error::internal("a permuted summand vanished off shell"))?;
            terms.push(img);
        }
        Ok(terms)
    })?;
    Ok(ThetaExpr::from_terms(parts.into_iter().flatten().collect()))
}

// ====================================================================
// Restriction matrix
// ====================================================================

/// The matrix of envelope restrictions. Row `i` is the envelope of
/// `order[i]`; entry `(i, j)` is its restriction at `order[j]`. With rows
/// and columns in chamber order the matrix is upper triangular, and the
/// diagonal is the theta-product of the repelling tangent weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabMatrix {
    /// Fixed points in chamber order (rows and columns alike).
    pub order: Vec<FixedPoint>,
    /// `entries[i][j]` = envelope of `order[i]` restricted at `order[j]`.
    pub entries: Vec<Vec<ThetaExpr>>,
}

/// Compute the full restriction matrix of elliptic stable envelopes.
pub fn stab_matrix(d: &QuiverData, a: &Arrows, c: &Chamber) -> Result<StabMatrix> {
    let pts = order_fixed_points(&enumerate_fixed_points(d.v(), d.w())?, c)?;
    let col_maps: Vec<BTreeMap<Variable, Monomial>> = pts
        .iter()
        .map(|p| restrict_map(d, p))
        .collect::<Result<_>>()?;
    let tuples = perm_tuples(d.v());
    let rows = par_try_map(
        (0..pts.len()).collect::<Vec<_>>(),
        |row| -> Result<Vec<ThetaExpr>> {
            let ctx = StabContext::new(d, &pts[row], a, c)?;
            let summands = unsymmetrized(&ctx)?;
            let mut entries = Vec::with_capacity(pts.len());
            for col_map in &col_maps {
                let mut terms: Vec<Term> = Vec::new();
                for perm in &tuples {
                    let map = perm_restrict(d, perm, col_map)?;
                    for t in &summands {
                        match t.substitute_raw(&map)?.canonicalize() {
                            Ok(Some(ct)) => terms.push(ct),
                            Ok(None) => {} // this summand vanishes at the point
                            Err(Error::Pole(msg)) => {
                                return Err(Error::internal(format!(
                                    "restriction pole (must not occur): {msg}"
                                )))
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                entries.push(ThetaExpr::from_terms(terms));
            }
            Ok(entries)
        },
    )?;
    Ok(StabMatrix { order: pts, entries: rows })
}
