//! Precomputed per-fixed-point data shared by every piece of the
//! envelope formula.
//!
//! The S-products and tree weights all consume the same derived data: the
//! canonical assignment of Chern roots to boxes, each box's residue
//! (which tautological bundle it feeds), its chamber `rho`-key, its torus
//! weight, and its index exponent. [`StabContext`] computes these once
//! and exposes cheap lookups.

use std::collections::BTreeMap;

use crate::combin::{BoxPos, FixedPoint};
use crate::error::{Error, Result};
use crate::quiver::{index_exponents, restriction_data, rho_key, Arrows, Chamber, QuiverData, RhoKey};
use crate::symbolic::{Monomial, Variable};

/// One box of the fixed-point tuple together with everything the
/// envelope formula needs to know about it.
#[derive(Clone, Debug)]
pub struct BoxData {
    /// Index of the labeled partition (component of the tuple) the box
    /// belongs to.
    pub comp: usize,
    /// Position inside that component's Young diagram.
    pub pos: BoxPos,
    /// The Chern root canonically assigned to the box.
    pub root: Variable,
    /// Content residue in `[1, r]`: the vertex whose tautological bundle
    /// the box contributes a root to (also the Kähler index of the box).
    pub residue: u32,
    /// The chamber `rho`-key.
    pub rho: RhoKey,
    /// The torus weight the Chern root restricts to at this fixed point.
    pub weight: Monomial,
    /// The index exponent `d_a` of the assigned Chern root.
    pub index: i64,
}

/// Derived data of one `(variety, fixed point, chamber, polarization)`
/// quadruple, validated and precomputed at construction.
#[derive(Clone, Debug)]
pub struct StabContext {
    d: QuiverData,
    p: FixedPoint,
    arrows: Arrows,
    chamber: Chamber,
    boxes: Vec<BoxData>,
    by_comp: Vec<BTreeMap<BoxPos, usize>>,
}

impl StabContext {
    /// Validate the quadruple and precompute all per-box data.
    pub fn new(d: &QuiverData, p: &FixedPoint, arrows: &Arrows, chamber: &Chamber) -> Result<Self> {
        p.validate(d.v(), d.w())?;
        arrows.validate_for(d)?;
        chamber.validate_for(d.w())?;
        let restriction = restriction_data(d, p)?;
        let index = index_exponents(d, p, arrows, chamber)?;
        let r = d.r();
        let mut boxes = Vec::new();
        let mut by_comp: Vec<BTreeMap<BoxPos, usize>> = vec![BTreeMap::new(); p.components().len()];
        for (ci, lp) in p.components().iter().enumerate() {
            for pos in lp.partition.boxes() {
                let root = restriction
                    .root_of_box
                    .get(&(lp.vertex, lp.framing, pos))
                    .cloned()
                    .ok_or_else(|| {
                        Error::internal(format!(
                            "no Chern root assigned to box {pos} of component {ci}"
                        ))
                    })?;
                let d_a = index.get(&root).copied().unwrap_or(0);
                by_comp[ci].insert(pos, boxes.len());
                boxes.push(BoxData {
                    comp: ci,
                    pos,
                    root,
                    residue: lp.residue(pos, r),
                    rho: rho_key(chamber, lp, pos)?,
                    weight: lp.box_weight(pos),
                    index: d_a,
                });
            }
        }
        Ok(StabContext {
            d: d.clone(),
            p: p.clone(),
            arrows: arrows.clone(),
            chamber: chamber.clone(),
            boxes,
            by_comp,
        })
    }

    /// The dimension data.
    pub fn data(&self) -> &QuiverData {
        &self.d
    }

    /// The fixed point.
    pub fn point(&self) -> &FixedPoint {
        &self.p
    }

    /// The polarization choice.
    pub fn arrows(&self) -> &Arrows {
        &self.arrows
    }

    /// The chamber.
    pub fn chamber(&self) -> &Chamber {
        &self.chamber
    }

    /// All boxes of the tuple, in component order then diagram order.
    pub fn boxes(&self) -> &[BoxData] {
        &self.boxes
    }

    /// The box of a component at a given diagram position.
    pub fn box_at(&self, comp: usize, pos: BoxPos) -> Result<&BoxData> {
        self.by_comp
            .get(comp)
            .and_then(|m| m.get(&pos))
            .map(|&k| &self.boxes[k])
            .ok_or_else(|| {
                Error::internal(format!("no box at {pos} in component {comp} of {}", self.p))
            })
    }
}
