//! Framed representations: a representation together with one vector per node.

use super::fp::{mat_vec, Echelon};
use super::{check_prime, fold_points, RepvarError};
use crate::quiver::{trace_expand, CompletedQuiver, DimensionVector, Quiver, VarLayout};
use std::collections::BTreeMap;

/// Dimension vector of the subrepresentation generated by `v` (one vector per
/// node, concatenated), closing under every arrow until stable.
pub fn closure_dims(quiver: &Quiver, layout: &VarLayout, point: &[u64], v: &[u64], q: u64) -> DimensionVector {
    let d = &layout.d;
    let mut spaces: Vec<Echelon> = d.iter().map(|&n| Echelon::new(n as usize, q)).collect();
    let mut queue = Vec::new();
    let mut off = 0;
    for (i, &n) in d.iter().enumerate() {
        let vi = &v[off..off + n as usize];
        off += n as usize;
        if spaces[i].insert(vi) {
            queue.push((i, vi.to_vec()));
        }
    }
    while let Some((i, w)) = queue.pop() {
        for (a, arrow) in quiver.arrows.iter().enumerate() {
            if arrow.src != i {
                continue;
            }
            let (rows, cols) = layout.shape(a);
            let image = mat_vec(&point[layout.arrow_vars(a)], rows, cols, &w, q);
            if spaces[arrow.tgt].insert(&image) {
                queue.push((arrow.tgt, image));
            }
        }
    }
    DimensionVector(spaces.iter().map(|s| s.dim() as u32).collect())
}

/// For every `d'`, the number of framed points `(A, v)` with `f_d(A) = level`
/// whose framing generates a subrepresentation of dimension `d'`.
pub fn count_framed_all(
    cq: &CompletedQuiver,
    d: &DimensionVector,
    q: u64,
    level: u64,
    budget: u64,
) -> Result<BTreeMap<DimensionVector, u128>, RepvarError> {
    check_prime(q)?;
    let cs = trace_expand(cq, d)?;
    let f = cs.poly.compile(q)?;
    let n = cs.layout.len();
    let level = level % q;
    let (map, _) = fold_points(
        n + d.total() as usize,
        q,
        budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<DimensionVector, u128>, pt| {
            let (rep, v) = pt.split_at(n);
            if f.eval(rep) == level {
                *acc.entry(closure_dims(&cq.quiver, &cs.layout, rep, v, q)).or_insert(0) += 1;
            }
        },
        |acc, other| {
            for (k, c) in other {
                *acc.entry(k).or_insert(0) += c;
            }
        },
    )?;
    Ok(map)
}

/// `#Y_d^{d'}` for `level = 0`, `#Z_d^{d'}` for `level = 1`.
pub fn count_framed(
    cq: &CompletedQuiver,
    d: &DimensionVector,
    q: u64,
    dprime: &DimensionVector,
    level: u64,
    budget: u64,
) -> Result<u128, RepvarError> {
    Ok(count_framed_all(cq, d, q, level, budget)?.get(dprime).copied().unwrap_or(0))
}
