//! Partitions, labeled partitions, and fixed-point tuples.
//!
//! Torus fixed points of the quiver varieties handled here are indexed by
//! tuples of partitions: one partition per framing slot `(i, j)`, where
//! `i` is a vertex of the cyclic quiver and `j` indexes the framing space
//! at that vertex. A box in row `x`, column `y` of the partition attached
//! to slot `(i, j)` carries the torus weight `t1^(1-y) * t2^(1-x) *
//! u[i,j]` and sits over the quiver vertex `x - y + i (mod r)`; the tuple
//! represents a fixed point of the variety with dimension vector `v` when
//! the boxes over vertex `k` number exactly `v_k`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::qint;
use crate::symbolic::monomial::Monomial;
use crate::symbolic::variable::Variable;

/// A box of a Young diagram, 1-based: `x` is the row (part index), `y`
/// the column within the row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxPos {
    /// Row (part index), starting at 1.
    pub x: u32,
    /// Column within the row, starting at 1.
    pub y: u32,
}

impl BoxPos {
    /// Convenience constructor.
    pub fn new(x: u32, y: u32) -> Self {
        BoxPos { x, y }
    }
}

impl fmt::Display for BoxPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build from parts; trailing zeros are stripped, and the sequence
    /// must be weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::validation(format!(
                "partition parts must be weakly decreasing and positive: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The parts, weakly decreasing.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// True for the empty partition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// True if the box lies in the diagram.
    pub fn contains(&self, b: BoxPos) -> bool {
        b.x >= 1
            && b.y >= 1
            && (b.x as usize) <= self.parts.len()
            && b.y <= self.parts[(b.x - 1) as usize]
    }

    /// All boxes, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = BoxPos> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |y| BoxPos::new(i as u32 + 1, y)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// A partition attached to a framing slot `(i, j)`: vertex `i` of the
/// cyclic quiver, framing index `j` at that vertex. Printed as
/// `[[parts...],i,j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledPartition {
    /// The partition shape.
    pub partition: Partition,
    /// Quiver vertex, `1..=r`.
    pub vertex: u32,
    /// Framing index at that vertex, `1..=w[vertex]`.
    pub framing: u32,
}

impl LabeledPartition {
    /// Convenience constructor.
    pub fn new(partition: Partition, vertex: u32, framing: u32) -> Result<Self> {
        if vertex < 1 || framing < 1 {
            return Err(Error::validation(format!(
                "labeled partition indices must be 1-based: vertex {vertex}, framing {framing}"
            )));
        }
        Ok(LabeledPartition { partition, vertex, framing })
    }

    /// Content of a box, shifted so the corner box has content equal to
    /// the vertex: `x - y + vertex`.
    pub fn content(&self, b: BoxPos) -> i64 {
        b.x as i64 - b.y as i64 + self.vertex as i64
    }

    /// The quiver vertex a box sits over: content reduced mod `r` into
    /// `1..=r`.
    pub fn residue(&self, b: BoxPos, r: u32) -> u32 {
        ((self.content(b) - 1).rem_euclid(r as i64) + 1) as u32
    }

    /// Torus weight of a box: `t1^(1-y) * t2^(1-x) * u[i,j]`.
    pub fn box_weight(&self, b: BoxPos) -> Monomial {
        Monomial::var_pow(Variable::T1, qint(1 - b.y as i64))
            * Monomial::var_pow(Variable::T2, qint(1 - b.x as i64))
            * Monomial::var(Variable::u(self.vertex, self.framing))
    }

    /// Boxes over each vertex `1..=r`.
    pub fn residue_profile(&self, r: u32) -> Vec<u32> {
        let mut counts = vec![0u32; r as usize];
        for b in self.partition.boxes() {
            counts[(self.residue(b, r) - 1) as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for LabeledPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.partition, self.vertex, self.framing)
    }
}

/// A torus fixed point: one labeled partition per framing slot, slots
/// ordered by `(vertex, framing)` with every slot present (possibly
/// empty). Printed as `[[[parts...],i,j],...]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedPoint {
    components: Vec<LabeledPartition>,
}

impl FixedPoint {
    /// Build from components, which must be sorted by `(vertex, framing)`
    /// without duplicates.
    pub fn new(components: Vec<LabeledPartition>) -> Result<Self> {
        for pair in components.windows(2) {
            let a = (pair[0].vertex, pair[0].framing);
            let b = (pair[1].vertex, pair[1].framing);
            if a >= b {
                return Err(Error::validation(format!(
                    "fixed-point components must be sorted by (vertex, framing): \
                     {:?} before {:?}",
                    a, b
                )));
            }
        }
        Ok(FixedPoint { components })
    }

    /// The per-slot components.
    pub fn components(&self) -> &[LabeledPartition] {
        &self.components
    }

    /// Total number of boxes.
    pub fn total_boxes(&self) -> u32 {
        self.components.iter().map(|c| c.partition.size()).sum()
    }

    /// Boxes over each vertex `1..=r` — the dimension vector this point
    /// realizes.
    pub fn residue_counts(&self, r: u32) -> Vec<u32> {
        let mut counts = vec![0u32; r as usize];
        for c in &self.components {
            for (k, n) in c.residue_profile(r).into_iter().enumerate() {
                counts[k] += n;
            }
        }
        counts
    }

    /// All `(component, box)` pairs, slot by slot, rows within each slot.
    pub fn all_boxes(&self) -> impl Iterator<Item = (&LabeledPartition, BoxPos)> + '_ {
        self.components
            .iter()
            .flat_map(|c| c.partition.boxes().map(move |b| (c, b)))
    }

    /// Check the tuple against framing and dimension data: one component
    /// per slot `(i, j)` with `1 <= j <= w[i]`, and residue counts equal
    /// to `v`.
    pub fn validate(&self, v: &[u32], w: &[u32]) -> Result<()> {
        let r = v.len() as u32;
        if w.len() != v.len() {
            return Err(Error::validation(format!(
                "dimension vectors differ in length: v has {}, w has {}",
                v.len(),
                w.len()
            )));
        }
        let mut expected = Vec::new();
        for (i, &wi) in w.iter().enumerate() {
            for j in 1..=wi {
                expected.push((i as u32 + 1, j));
            }
        }
        let got: Vec<(u32, u32)> =
            self.components.iter().map(|c| (c.vertex, c.framing)).collect();
        if got != expected {
            return Err(Error::validation(format!(
                "fixed point has slots {got:?}, expected {expected:?} for w = {w:?}"
            )));
        }
        let counts = self.residue_counts(r);
        if counts != v {
            return Err(Error::validation(format!(
                "fixed point fills vertices as {counts:?}, expected v = {v:?}"
            )));
        }
        Ok(())
    }

    /// JSON form: `[[[3,1],1,1],[[],1,2],...]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.components
                .iter()
                .map(|c| {
                    json!([
                        c.partition.parts().iter().copied().collect::<Vec<u32>>(),
                        c.vertex,
                        c.framing,
                    ])
                })
                .collect(),
        )
    }

    /// Decode the JSON form.
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::validation("fixed point must be an array".to_string()))?;
        let mut components = Vec::with_capacity(arr.len());
        for c in arr {
            let triple = c
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| {
                    Error::validation(format!("fixed-point component must be [[parts],i,j]: {c}"))
                })?;
            let parts = triple[0]
                .as_array()
                .ok_or_else(|| {
                    Error::validation(format!("partition must be an array of parts: {}", triple[0]))
                })?
                .iter()
                .map(|p| {
                    p.as_u64()
                        .filter(|&n| n <= u32::MAX as u64)
                        .map(|n| n as u32)
                        .ok_or_else(|| {
                            Error::validation(format!("partition part out of range: {p}"))
                        })
                })
                .collect::<Result<Vec<u32>>>()?;
            let idx = |k: usize| -> Result<u32> {
                triple[k]
                    .as_u64()
                    .filter(|&n| n >= 1 && n <= u32::MAX as u64)
                    .map(|n| n as u32)
                    .ok_or_else(|| {
                        Error::validation(format!("index must be a positive integer: {}", triple[k]))
                    })
            };
            components.push(LabeledPartition::new(Partition::new(parts)?, idx(1)?, idx(2)?)?);
        }
        FixedPoint::new(components)
    }

    /// Parse the bracket form, e.g. `[[[3,1],1,1],[[],1,2]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::validation(format!("cannot parse fixed point {text:?}: {e}"))
        })?;
        FixedPoint::from_json(&v)
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
