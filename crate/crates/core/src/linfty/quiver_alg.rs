//! The algebra `L_d` of a quiver with relations at a dimension vector.
//!
//! Degree 0 is the gauge algebra `gl(V_i)` per node, degree 1 the arrow
//! matrices, degree 2 one matrix per relation. The gauge acts by
//! commutators and by `g . x = g_t x - x g_s`. Relation terms of path length
//! `k` give `mu_k` with full symmetrization weights: `mu_k(x, ..., x) = k! r_k(x)`,
//! so the curvature is the relation map itself.

use super::{CyclicLInfty, GradedBasis, LInftyError, Q};
use crate::poly::Var;
use crate::quiver::{path_matrix, CompletedQuiver, DimensionVector, QuiverWithRelations, VarLayout};
use num_bigint::BigInt;
use num_traits::One;

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Builds `L_d`; without `gauge` the degree-0 part is omitted.
pub fn quiver_algebra(qr: &QuiverWithRelations, d: &DimensionVector, gauge: bool) -> Result<CyclicLInfty, LInftyError> {
    let q = &qr.quiver;
    let layout = VarLayout::new(q, d)?;
    let mut basis = GradedBasis::new();

    // gauge[i] = first basis index of gl(V_i)
    let mut gauge_offset = Vec::new();
    if gauge {
        for (i, node) in q.nodes.iter().enumerate() {
            gauge_offset.push(basis.len() as u32);
            for r in 0..d[i] {
                for c in 0..d[i] {
                    basis.push(format!("gl{node}[{r},{c}]"), 0, Some((i, i)));
                }
            }
        }
    }
    let arrow_offset = basis.len() as u32;
    for v in 0..layout.len() as Var {
        let (a, _, _) = layout.locate(v);
        let arrow = &q.arrows[a];
        basis.push(layout.name(v).to_string(), 1, Some((arrow.src, arrow.tgt)));
    }
    let mut rel_offset = Vec::new();
    for rel in &qr.relations {
        rel_offset.push(basis.len() as u32);
        for r in 0..d[rel.poly.tgt] {
            for c in 0..d[rel.poly.src] {
                basis.push(format!("{}[{r},{c}]", rel.name), 2, Some((rel.poly.src, rel.poly.tgt)));
            }
        }
    }

    let mut alg = CyclicLInfty::new(basis, qr.k_max as usize);

    for (ri, rel) in qr.relations.iter().enumerate() {
        for (e, entry) in path_matrix(q, &layout, &rel.poly).into_iter().enumerate() {
            let out = rel_offset[ri] + e as u32;
            for (mono, c) in entry.terms() {
                let inputs: Vec<u32> = mono.flat_vars().into_iter().map(|v| arrow_offset + v).collect();
                let weight: BigInt = mono.factors().iter().map(|&(_, m)| factorial(m)).product();
                alg.add_product(&inputs, out, c * Q::from_integer(weight))?;
            }
        }
    }

    if gauge {
        let one = Q::one();
        let g = |i: usize, r: u32, c: u32| gauge_offset[i] + r * d[i] + c;
        // commutators [E_rc, E_r'c'] = delta_{c r'} E_{r c'} - delta_{c' r} E_{r' c}
        for i in 0..q.nodes.len() {
            let n = d[i];
            let elems: Vec<(u32, u32)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
            for (ai, &(r, c)) in elems.iter().enumerate() {
                for &(r2, c2) in &elems[ai + 1..] {
                    let (x, y) = (g(i, r, c), g(i, r2, c2));
                    if c == r2 {
                        alg.add_product(&[x, y], g(i, r, c2), one.clone())?;
                    }
                    if c2 == r {
                        alg.add_product(&[x, y], g(i, r2, c), -one.clone())?;
                    }
                }
            }
        }
        // action on a matrix X: V_s -> V_t of shape d_t x d_s, entries at `base`
        let act = |alg: &mut CyclicLInfty, s: usize, t: usize, base: u32| -> Result<(), LInftyError> {
            let cols = d[s];
            for p in 0..d[t] {
                for qc in 0..cols {
                    let x = base + p * cols + qc;
                    // E_rc at node t: E_rc X has entry (r, qc) from X[c=p]
                    for r in 0..d[t] {
                        alg.add_product(&[g(t, r, p), x], base + r * cols + qc, one.clone())?;
                    }
                    // E_rc at node s: -X E_rc has entry (p, c) from X[.., r=qc]
                    for c in 0..d[s] {
                        alg.add_product(&[g(s, qc, c), x], base + p * cols + c, -one.clone())?;
                    }
                }
            }
            Ok(())
        };
        for (a, arrow) in q.arrows.iter().enumerate() {
            let base = arrow_offset + layout.arrow_vars(a).start as u32;
            act(&mut alg, arrow.src, arrow.tgt, base)?;
        }
        for (ri, rel) in qr.relations.iter().enumerate() {
            act(&mut alg, rel.poly.src, rel.poly.tgt, rel_offset[ri])?;
        }
    }
    Ok(alg)
}

/// For the completion of `quiver_algebra(qr, d, _)`: the trace-polynomial
/// variable of each degree-one coordinate. Arrow entries map to themselves and
/// the dual of relation entry `r[i,j]` maps to entry `[j,i]` of the dual arrow.
pub fn completion_to_trace_vars(qr: &QuiverWithRelations, cq: &CompletedQuiver, d: &DimensionVector) -> Result<Vec<Var>, LInftyError> {
    let base = VarLayout::new(&qr.quiver, d)?;
    let full = VarLayout::new(&cq.quiver, d)?;
    let mut out: Vec<Var> = (0..base.len() as Var)
        .map(|v| {
            let (a, r, c) = base.locate(v);
            full.var(a, r, c)
        })
        .collect();
    for rel in &qr.relations {
        let dual = cq
            .arrow_index(&rel.dual)
            .ok_or_else(|| LInftyError::Invalid(format!("completion lacks dual arrow {}", rel.dual)))?;
        for r in 0..d[rel.poly.tgt] as usize {
            for c in 0..d[rel.poly.src] as usize {
                out.push(full.var(dual, c, r));
            }
        }
    }
    Ok(out)
}
