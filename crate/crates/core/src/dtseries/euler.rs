//! Euler forms on dimension vectors.

use crate::quiver::{CompletedQuiver, QuiverWithRelations};
use serde::Serialize;

/// Which bilinear form an [`EulerForm`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EulerConvention {
    /// `sum_i a_i b_i - sum_{arrows a of the completed quiver} a_{t(a)} b_{s(a)}`.
    CompletedQuiver,
    /// `sum_i a_i b_i - sum_{arrows} a_{t} b_{s} + sum_{relations} a_{t} b_{s}`.
    RelationComplex,
    /// `(chi(a, b) + chi(b, a)) / 2` of the completed-quiver form.
    Symmetrized,
    /// `chi(a, b) - chi(b, a)` of the relation-complex form.
    Antisymmetrized,
}

/// Bilinear form `chi(a, b) = sum_ij a_i M_ij b_j / 2`, stored as the integer
/// matrix `M = 2 chi` so that symmetrizations stay integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerForm {
    pub convention: EulerConvention,
    pub doubled: Vec<Vec<i64>>,
}

impl EulerForm {
    fn identity_minus(n: usize, edges: impl Iterator<Item = (usize, usize, i64)>, convention: EulerConvention) -> Self {
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (t, s, w) in edges {
            m[t][s] -= 2 * w;
        }
        EulerForm { convention, doubled: m }
    }

    /// The convention confirmed by framed and Harder-Narasimhan point counts.
    pub fn completed_quiver(cq: &CompletedQuiver) -> Self {
        let edges = cq.quiver.arrows.iter().map(|a| (a.tgt, a.src, 1));
        Self::identity_minus(cq.quiver.node_count(), edges, EulerConvention::CompletedQuiver)
    }

    pub fn relation_complex(qr: &QuiverWithRelations) -> Self {
        let arrows = qr.quiver.arrows.iter().map(|a| (a.tgt, a.src, 1));
        let rels = qr.relations.iter().map(|r| (r.poly.tgt, r.poly.src, -1));
        Self::identity_minus(qr.quiver.node_count(), arrows.chain(rels), EulerConvention::RelationComplex)
    }

    pub fn symmetrized(&self) -> Self {
        let n = self.doubled.len();
        let m = (0..n).map(|i| (0..n).map(|j| (self.doubled[i][j] + self.doubled[j][i]) / 2).collect()).collect();
        EulerForm { convention: EulerConvention::Symmetrized, doubled: m }
    }

    pub fn antisymmetrized(&self) -> Self {
        let n = self.doubled.len();
        let m = (0..n).map(|i| (0..n).map(|j| self.doubled[i][j] - self.doubled[j][i]).collect()).collect();
        EulerForm { convention: EulerConvention::Antisymmetrized, doubled: m }
    }

    /// `2 chi(a, b)`.
    pub fn doubled_value(&self, a: &[u32], b: &[u32]) -> i64 {
        let mut acc = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc += ai as i64 * self.doubled[i][j] * bj as i64;
            }
        }
        acc
    }

    /// `chi(a, b)`; panics when it is not an integer.
    pub fn value(&self, a: &[u32], b: &[u32]) -> i64 {
        let v = self.doubled_value(a, b);
        assert!(v % 2 == 0, "chi({a:?}, {b:?}) is not an integer");
        v / 2
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.doubled.len();
        (0..n).all(|i| (0..n).all(|j| self.doubled[i][j] == self.doubled[j][i]))
    }
}
