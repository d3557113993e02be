//! Enumeration of torus fixed points for given dimension data.
//!
//! A fixed point of the variety with dimension vectors `(v, w)` on the
//! cyclic quiver with `r = len(v)` vertices assigns a partition to each
//! framing slot `(i, j)`, `1 <= j <= w[i]`, such that the boxes lying
//! over vertex `k` (content mod `r`) number exactly `v[k]`. Enumeration
//! proceeds slot by slot: per slot only partitions whose residue profile
//! fits under `v` are candidates, and a depth-first walk accumulates
//! profiles with early pruning.

use crate::combin::partition::{FixedPoint, LabeledPartition, Partition};
use crate::error::{Error, Result};

/// All partitions with at most `n` boxes, ordered by size and then
/// lexicographically by parts.
fn partitions_up_to(n: u32) -> Vec<Partition> {
    fn exact(remaining: u32, max_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(acc.clone()).expect("weakly decreasing by construction"));
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            acc.push(part);
            exact(remaining - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = vec![Partition::empty()];
    let mut acc = Vec::new();
    for size in 1..=n {
        exact(size, size, &mut acc, &mut out);
    }
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.parts().cmp(b.parts())));
    out
}

/// Validate a `(v, w)` pair: equal positive length, entries within `u32`.
pub fn check_dimensions(v: &[u32], w: &[u32]) -> Result<u32> {
    if v.is_empty() || v.len() != w.len() {
        return Err(Error::validation(format!(
            "dimension vectors must have equal positive length: v has {}, w has {}",
            v.len(),
            w.len()
        )));
    }
    Ok(v.len() as u32)
}

/// Enumerate all fixed points for `(v, w)`, in a deterministic slot-major
/// order (within each slot, partitions by size then lexicographically).
pub fn enumerate_fixed_points(v: &[u32], w: &[u32]) -> Result<Vec<FixedPoint>> {
    let r = check_dimensions(v, w)?;
    let total: u32 = v.iter().sum();
    let pool = partitions_up_to(total);

    // Per-slot candidates with their residue profiles.
    let mut slots: Vec<(u32, u32, Vec<(Partition, Vec<u32>)>)> = Vec::new();
    for (idx, &wi) in w.iter().enumerate() {
        let vertex = idx as u32 + 1;
        for j in 1..=wi {
            let candidates: Vec<(Partition, Vec<u32>)> = pool
                .iter()
                .filter_map(|p| {
                    let lp = LabeledPartition::new(p.clone(), vertex, j)
                        .expect("indices are 1-based");
                    let profile = lp.residue_profile(r);
                    if profile.iter().zip(v).all(|(have, cap)| have <= cap) {
                        Some((p.clone(), profile))
                    } else {
                        None
                    }
                })
                .collect();
            slots.push((vertex, j, candidates));
        }
    }

    fn walk(
        slots: &[(u32, u32, Vec<(Partition, Vec<u32>)>)],
        k: usize,
        counts: &mut [u32],
        v: &[u32],
        acc: &mut Vec<LabeledPartition>,
        out: &mut Vec<FixedPoint>,
    ) {
        if k == slots.len() {
            if counts.iter().zip(v).all(|(c, cap)| c == cap) {
                out.push(
                    FixedPoint::new(acc.clone()).expect("slots are generated in order"),
                );
            }
            return;
        }
        let (vertex, j, candidates) = &slots[k];
        for (p, profile) in candidates {
            if counts
                .iter()
                .zip(profile)
                .zip(v)
                .any(|((c, add), cap)| c + add > *cap)
            {
                continue;
            }
            for (c, add) in counts.iter_mut().zip(profile) {
                *c += add;
            }
            acc.push(
                LabeledPartition::new(p.clone(), *vertex, *j).expect("indices are 1-based"),
            );
            walk(slots, k + 1, counts, v, acc, out);
            acc.pop();
            for (c, add) in counts.iter_mut().zip(profile) {
                *c -= add;
            }
        }
    }

    let mut out = Vec::new();
    let mut counts = vec![0u32; r as usize];
    let mut acc = Vec::new();
    walk(&slots, 0, &mut counts, v, &mut acc, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_counts_partitions() {
        // r = 1, w = [1]: fixed points are partitions of v.
        let pts = enumerate_fixed_points(&[2], &[1]).unwrap();
        assert_eq!(pts.len(), 2);
        let display: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert!(display.contains(&"[[[2],1,1]]".to_string()));
        assert!(display.contains(&"[[[1,1],1,1]]".to_string()));
    }

    #[test]
    fn two_vertex_example_has_five_points() {
        let pts = enumerate_fixed_points(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(pts.len(), 5);
        for p in &pts {
            p.validate(&[1, 1], &[1, 1]).unwrap();
        }
    }

    #[test]
    fn empty_framing_allows_only_the_empty_tuple() {
        let pts = enumerate_fixed_points(&[0, 0], &[0, 0]).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].components().len(), 0);
        assert!(enumerate_fixed_points(&[1, 0], &[0, 0]).unwrap().is_empty());
    }

    #[test]
    fn the_large_example_has_51_points() {
        let pts = enumerate_fixed_points(&[2, 2, 3], &[2, 1, 0]).unwrap();
        assert_eq!(pts.len(), 51);
        for p in &pts {
            p.validate(&[2, 2, 3], &[2, 1, 0]).unwrap();
        }
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(enumerate_fixed_points(&[1], &[1, 1]).is_err());
        assert!(enumerate_fixed_points(&[], &[]).is_err());
    }
}
