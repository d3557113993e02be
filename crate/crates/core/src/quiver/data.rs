//! Core quiver-variety data: dimension vectors, chambers, and the
//! arrow-choice encoding of polarizations.

use std::fmt;

use serde_json::Value;

use crate::combin::enumerate::check_dimensions;
use crate::error::{Error, Result};
use crate::symbolic::parse::parse_variable;
use crate::symbolic::variable::Variable;

/// Dimension data of a cyclic-quiver variety: `r` vertices in a cycle
/// `i -> i+1 (mod r)`, gauge dimensions `v`, framing dimensions `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverData {
    v: Vec<u32>,
    w: Vec<u32>,
}

impl QuiverData {
    /// Validate and build; `v` and `w` must have equal positive length.
    pub fn new(v: Vec<u32>, w: Vec<u32>) -> Result<Self> {
        check_dimensions(&v, &w)?;
        Ok(QuiverData { v, w })
    }

    /// Number of vertices.
    pub fn r(&self) -> u32 {
        self.v.len() as u32
    }

    /// Gauge dimensions.
    pub fn v(&self) -> &[u32] {
        &self.v
    }

    /// Framing dimensions.
    pub fn w(&self) -> &[u32] {
        &self.w
    }

    /// Gauge dimension at a 1-based vertex.
    pub fn v_at(&self, i: u32) -> u32 {
        self.v[(i - 1) as usize]
    }

    /// Framing dimension at a 1-based vertex.
    pub fn w_at(&self, i: u32) -> u32 {
        self.w[(i - 1) as usize]
    }

    /// Successor vertex on the cycle (1-based, wrapping).
    pub fn next(&self, i: u32) -> u32 {
        i % self.r() + 1
    }

    /// Framing slots `(i, j)`, `1 <= j <= w[i]`, in canonical order.
    pub fn slots(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (idx, &wi) in self.w.iter().enumerate() {
            for j in 1..=wi {
                out.push((idx as u32 + 1, j));
            }
        }
        out
    }

    /// Complex dimension of the variety:
    /// `2 * (sum v_i w_i + sum v_i v_{i+1} - sum v_i^2)`.
    pub fn dim(&self) -> i64 {
        let r = self.v.len();
        let mut acc: i64 = 0;
        for i in 0..r {
            let vi = self.v[i] as i64;
            acc += vi * self.w[i] as i64;
            acc += vi * self.v[(i + 1) % r] as i64;
            acc -= vi * vi;
        }
        2 * acc
    }
}

/// One of the two torus weights acting on the cotangent directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TSign {
    /// The weight `t1`.
    T1,
    /// The weight `t2`.
    T2,
}

impl TSign {
    /// The corresponding variable.
    pub fn var(self) -> Variable {
        match self {
            TSign::T1 => Variable::T1,
            TSign::T2 => Variable::T2,
        }
    }

    /// The other weight.
    pub fn other(self) -> TSign {
        match self {
            TSign::T1 => TSign::T2,
            TSign::T2 => TSign::T1,
        }
    }
}

impl fmt::Display for TSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TSign::T1 => write!(f, "t1"),
            TSign::T2 => write!(f, "t2"),
        }
    }
}

/// A chamber of the torus of equivariant parameters, written
/// `[t_-, t_+, u..., u...]`: the first entry is the repelling weight
/// among `t1, t2`, and the framing variables follow in order of
/// decreasing dominance — a ratio `u_earlier / u_later` is repelling.
/// Framing components dominate the `t`-component (admissibility is built
/// into the type).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    t_order: [TSign; 2],
    u_order: Vec<(u32, u32)>,
}

impl Chamber {
    /// Build from explicit orders; the `u`-slots must be distinct.
    pub fn new(t_order: [TSign; 2], u_order: Vec<(u32, u32)>) -> Result<Self> {
        if t_order[0] == t_order[1] {
            return Err(Error::validation(
                "chamber must list t1 and t2 exactly once each".to_string(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j) in &u_order {
            if i < 1 || j < 1 {
                return Err(Error::validation(format!(
                    "chamber framing indices must be 1-based: u[{i},{j}]"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::validation(format!(
                    "chamber lists u[{i},{j}] more than once"
                )));
            }
        }
        Ok(Chamber { t_order, u_order })
    }

    /// The default chamber for given framing dimensions:
    /// `[t2, t1, u[1,1], u[1,2], ..., u[r,w_r]]`.
    pub fn example(w: &[u32]) -> Self {
        let mut u_order = Vec::new();
        for (idx, &wi) in w.iter().enumerate() {
            for j in 1..=wi {
                u_order.push((idx as u32 + 1, j));
            }
        }
        Chamber { t_order: [TSign::T2, TSign::T1], u_order }
    }

    /// The repelling weight (first of the pair).
    pub fn t_minus(&self) -> TSign {
        self.t_order[0]
    }

    /// The attracting weight (second of the pair).
    pub fn t_plus(&self) -> TSign {
        self.t_order[1]
    }

    /// The sign `sigma_a`: `+1` when `t2` is repelling, `-1` when `t1`
    /// is.
    pub fn sigma_a(&self) -> i64 {
        match self.t_minus() {
            TSign::T2 => 1,
            TSign::T1 => -1,
        }
    }

    /// The framing order.
    pub fn u_order(&self) -> &[(u32, u32)] {
        &self.u_order
    }

    /// 1-based position of `u[i,j]` in the framing order.
    pub fn u_position(&self, i: u32, j: u32) -> Result<i64> {
        self.u_order
            .iter()
            .position(|&s| s == (i, j))
            .map(|p| p as i64 + 1)
            .ok_or_else(|| {
                Error::validation(format!("chamber does not mention u[{i},{j}]"))
            })
    }

    /// Check the chamber covers exactly the slots of `w`.
    pub fn validate_for(&self, w: &[u32]) -> Result<()> {
        let mut expected = Vec::new();
        for (idx, &wi) in w.iter().enumerate() {
            for j in 1..=wi {
                expected.push((idx as u32 + 1, j));
            }
        }
        let mut got = self.u_order.clone();
        got.sort();
        if got != expected {
            return Err(Error::validation(format!(
                "chamber framing variables {:?} do not match the slots of w = {w:?}",
                self.u_order
            )));
        }
        Ok(())
    }

    /// Tail vertex of the cycle edge `i -> i+1` under this chamber's
    /// orientation: `i` itself when `t2` is repelling, `i+1` otherwise.
    pub fn edge_tail(&self, d: &QuiverData, i: u32) -> u32 {
        match self.t_minus() {
            TSign::T2 => i,
            TSign::T1 => d.next(i),
        }
    }

    /// Head vertex of the cycle edge `i -> i+1` (the endpoint that is not
    /// the tail).
    pub fn edge_head(&self, d: &QuiverData, i: u32) -> u32 {
        match self.t_minus() {
            TSign::T2 => d.next(i),
            TSign::T1 => i,
        }
    }

    /// Parse the text form `[t2,t1,u[1,1],u[1,2],u[2,1]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| {
                Error::validation(format!("chamber must be bracketed: {text:?}"))
            })?;
        let mut items = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in inner.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        Error::validation(format!("unbalanced brackets in chamber {text:?}"))
                    })?;
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    items.push(cur.trim().to_string());
                    cur = String::new();
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            items.push(cur.trim().to_string());
        }
        if items.len() < 2 {
            return Err(Error::validation(format!(
                "chamber needs at least the two t-entries: {text:?}"
            )));
        }
        let t_of = |s: &str| -> Result<TSign> {
            match s {
                "t1" => Ok(TSign::T1),
                "t2" => Ok(TSign::T2),
                other => Err(Error::validation(format!(
                    "chamber must start with t1 and t2, found {other:?}"
                ))),
            }
        };
        let t_order = [t_of(&items[0])?, t_of(&items[1])?];
        let mut u_order = Vec::new();
        for item in &items[2..] {
            match parse_variable(item)? {
                Variable::U(i, j) => u_order.push((i, j)),
                other => {
                    return Err(Error::validation(format!(
                        "chamber entries after the t-pair must be framing variables, \
                         found {other}"
                    )))
                }
            }
        }
        Chamber::new(t_order, u_order)
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}", self.t_order[0], self.t_order[1])?;
        for &(i, j) in &self.u_order {
            write!(f, ",u[{i},{j}]")?;
        }
        write!(f, "]")
    }
}

/// The arrow choices selecting a polarization: three rows of `+-1`, one
/// entry per vertex. Row 1 picks the direction of each cycle arrow, row 2
/// the framing arrows, row 3 the scalar `Hom(V, V)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrows {
    rows: [Vec<i8>; 3],
}

impl Arrows {
    /// Validate entries and row lengths.
    pub fn new(rows: [Vec<i8>; 3]) -> Result<Self> {
        let r = rows[0].len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::validation(
                "arrows must be three rows of equal positive length".to_string(),
            ));
        }
        if rows.iter().flatten().any(|&e| e != 1 && e != -1) {
            return Err(Error::validation(
                "arrow entries must be +1 or -1".to_string(),
            ));
        }
        Ok(Arrows { rows })
    }

    /// The all-`+1` choice for `r` vertices.
    pub fn example(r: u32) -> Self {
        let row = vec![1i8; r as usize];
        Arrows { rows: [row.clone(), row.clone(), row] }
    }

    /// Number of vertices covered.
    pub fn r(&self) -> u32 {
        self.rows[0].len() as u32
    }

    /// Entry of `row` (0-based) at 1-based vertex `i`.
    pub fn entry(&self, row: usize, i: u32) -> i8 {
        self.rows[row][(i - 1) as usize]
    }

    /// Check against quiver data.
    pub fn validate_for(&self, d: &QuiverData) -> Result<()> {
        if self.r() != d.r() {
            return Err(Error::validation(format!(
                "arrows cover {} vertices but the quiver has {}",
                self.r(),
                d.r()
            )));
        }
        Ok(())
    }

    /// Parse the text form `[[1,-1,1],[-1,1,1],[-1,-1,1]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::validation(format!("cannot parse arrows {text:?}: {e}"))
        })?;
        let arr = v
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| {
                Error::validation(format!("arrows must be three lists: {text:?}"))
            })?;
        let mut rows: [Vec<i8>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (k, row) in arr.iter().enumerate() {
            let entries = row.as_array().ok_or_else(|| {
                Error::validation(format!("arrows row {} must be a list: {row}", k + 1))
            })?;
            for e in entries {
                let n = e.as_i64().ok_or_else(|| {
                    Error::validation(format!("arrow entries must be integers: {e}"))
                })?;
                rows[k].push(i8::try_from(n).map_err(|_| {
                    Error::validation(format!("arrow entry out of range: {n}"))
                })?);
            }
        }
        Arrows::new(rows)
    }
}

impl fmt::Display for Arrows {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (i, e) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_formula() {
        // Hilbert scheme of 2 points on C^2: r = 1, v = [2], w = [1].
        let d = QuiverData::new(vec![2], vec![1]).unwrap();
        assert_eq!(d.dim(), 4);
        // The three-vertex example.
        let d = QuiverData::new(vec![2, 2, 3], vec![2, 1, 0]).unwrap();
        assert_eq!(d.dim(), 2 * (4 + 2 + 0 + 4 + 6 + 6 - 4 - 4 - 9));
    }

    #[test]
    fn vertex_arithmetic_wraps() {
        let d = QuiverData::new(vec![1, 1, 1], vec![1, 0, 0]).unwrap();
        assert_eq!(d.next(1), 2);
        assert_eq!(d.next(3), 1);
        let d1 = QuiverData::new(vec![2], vec![1]).unwrap();
        assert_eq!(d1.next(1), 1);
    }

    #[test]
    fn chamber_round_trips() {
        let text = "[t2,t1,u[1,1],u[1,2],u[2,1]]";
        let c = Chamber::parse(text).unwrap();
        assert_eq!(c.to_string(), text);
        assert_eq!(c.t_minus(), TSign::T2);
        assert_eq!(c.sigma_a(), 1);
        assert_eq!(c.u_position(1, 2).unwrap(), 2);
        assert_eq!(c.u_position(2, 1).unwrap(), 3);
        c.validate_for(&[2, 1, 0]).unwrap();
        assert!(c.validate_for(&[2, 1, 1]).is_err());
    }

    #[test]
    fn chamber_example_matches_the_reference_order() {
        let c = Chamber::example(&[2, 1, 0]);
        assert_eq!(c.to_string(), "[t2,t1,u[1,1],u[1,2],u[2,1]]");
    }

    #[test]
    fn chamber_rejects_malformed_input() {
        assert!(Chamber::parse("[t2,t2,u[1,1]]").is_err());
        assert!(Chamber::parse("[t2,t1,u[1,1],u[1,1]]").is_err());
        assert!(Chamber::parse("[t2,u[1,1]]").is_err());
        assert!(Chamber::parse("t2,t1").is_err());
    }

    #[test]
    fn orientation_follows_the_repelling_weight() {
        let d = QuiverData::new(vec![1, 1], vec![1, 1]).unwrap();
        let c = Chamber::parse("[t2,t1,u[1,1],u[2,1]]").unwrap();
        assert_eq!(c.edge_tail(&d, 1), 1);
        assert_eq!(c.edge_head(&d, 1), 2);
        assert_eq!(c.edge_tail(&d, 2), 2);
        assert_eq!(c.edge_head(&d, 2), 1);
        let c = Chamber::parse("[t1,t2,u[1,1],u[2,1]]").unwrap();
        assert_eq!(c.edge_tail(&d, 1), 2);
        assert_eq!(c.edge_head(&d, 1), 1);
    }

    #[test]
    fn arrows_round_trip_and_validate() {
        let text = "[[1,-1,1],[-1,1,1],[-1,-1,1]]";
        let a = Arrows::parse(text).unwrap();
        assert_eq!(a.to_string(), text);
        assert_eq!(a.r(), 3);
        assert_eq!(a.entry(0, 2), -1);
        assert!(Arrows::parse("[[1,2],[1,1],[1,1]]").is_err());
        assert!(Arrows::parse("[[1],[1]]").is_err());
        assert_eq!(Arrows::example(3).to_string(), "[[1,1,1],[1,1,1],[1,1,1]]");
    }
}
