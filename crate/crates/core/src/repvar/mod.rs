//! Exact point counts over prime fields: relation loci, critical loci, level
//! sets of the CS function, framed loci and Harder-Narasimhan strata.
//!
//! Candidates are enumerated with variables in layout order (arrow-major,
//! row-major). The leading variables form the partition key for parallel
//! enumeration; partial results are merged in partition order, so results do
//! not depend on the thread count.

pub mod fp;
mod framed;
mod hn;

pub use framed::{closure_dims, count_framed, count_framed_all};
pub use hn::{count_hn_strata, hn_types, CentralCharge, FqRepresentation, HnType, Locus, Subrep};

use crate::poly::{CompiledPoly, Poly, PolyError, Var};
use crate::quiver::{
    cyclic_derivative, path_matrix, trace_expand, CompletedQuiver, DimensionVector, QuiverError,
    QuiverWithRelations, VarLayout,
};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_BUDGET: u64 = 1 << 30;

/// Target number of partitions for parallel enumeration.
const PARTITIONS: u64 = 64;

#[derive(Debug, thiserror::Error)]
pub enum RepvarError {
    #[error("search space of {needed} candidates exceeds the budget of {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the CS function has degree above one in the dual variables")]
    NotDualLinear,
    #[error("central charge: {0}")]
    Charge(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Result of one exact count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Count {
    pub value: u128,
    /// Number of enumerated candidates.
    pub candidates: u128,
    pub partitions: usize,
}

/// JSON report emitted per count.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub quiver: String,
    pub d: DimensionVector,
    pub q: u64,
    pub kind: String,
    pub value: u128,
    /// Seconds.
    pub elapsed: f64,
    pub partitions: usize,
}

pub fn check_prime(q: u64) -> Result<(), RepvarError> {
    if fp::is_prime(q) {
        Ok(())
    } else {
        Err(RepvarError::NotPrime(q))
    }
}

fn space_size(q: u64, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

/// Checks `q^n <= budget` and returns `q^n`.
pub fn check_budget(q: u64, n: usize, budget: u64) -> Result<u128, RepvarError> {
    let needed = space_size(q, n);
    if needed > budget as u128 {
        return Err(RepvarError::Budget { needed, budget });
    }
    Ok(needed)
}

/// Folds `step` over every point of `F_q^n`. Each partition fixes the leading
/// variables and starts from `init()`; partition results are merged in order.
pub fn fold_points<T, I, F, M>(n: usize, q: u64, budget: u64, init: I, step: F, merge: M) -> Result<(T, usize), RepvarError>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u64]) + Sync,
    M: Fn(&mut T, T),
{
    check_prime(q)?;
    check_budget(q, n, budget)?;
    let mut k = 0;
    while k < n && space_size(q, k) < PARTITIONS as u128 {
        k += 1;
    }
    let parts = space_size(q, k) as u64;
    let results: Vec<T> = (0..parts)
        .into_par_iter()
        .map(|code| {
            let mut point = vec![0u64; n];
            let mut c = code;
            for i in (0..k).rev() {
                point[i] = c % q;
                c /= q;
            }
            let mut acc = init();
            loop {
                step(&mut acc, &point);
                let mut i = n;
                loop {
                    if i == k {
                        return acc;
                    }
                    i -= 1;
                    point[i] += 1;
                    if point[i] < q {
                        break;
                    }
                    point[i] = 0;
                }
            }
        })
        .collect();
    let mut it = results.into_iter();
    let mut total = it.next().expect("at least one partition");
    for r in it {
        merge(&mut total, r);
    }
    Ok((total, parts as usize))
}

/// Sums `weight(point)` over `F_q^n`.
pub fn sum_points<F>(n: usize, q: u64, budget: u64, weight: F) -> Result<Count, RepvarError>
where
    F: Fn(&[u64]) -> u128 + Sync,
{
    let (value, partitions) = fold_points(n, q, budget, || 0u128, |acc, pt| *acc += weight(pt), |a, b| *a += b)?;
    Ok(Count { value, candidates: space_size(q, n), partitions })
}

fn compile_all(polys: &[Poly], q: u64) -> Result<Vec<CompiledPoly>, RepvarError> {
    polys.iter().filter(|p| !p.is_zero()).map(|p| Ok(p.compile(q)?)).collect()
}

/// Number of common zeros of `polys` in `F_q^n` by evaluating every point.
pub fn count_zeros_brute(polys: &[Poly], n: usize, q: u64, budget: u64) -> Result<Count, RepvarError> {
    check_prime(q)?;
    let compiled = compile_all(polys, q)?;
    sum_points(n, q, budget, |pt| compiled.iter().all(|c| c.eval(pt) == 0) as u128)
}

/// Largest suffix-greedy set of variables in which every polynomial has degree at most one.
fn linear_fiber(polys: &[Poly], n: usize) -> Vec<bool> {
    let mut fiber = vec![false; n];
    for v in (0..n).rev() {
        fiber[v] = true;
        if polys.iter().any(|p| p.degree_in_set(&|w| fiber[w as usize]) > 1) {
            fiber[v] = false;
        }
    }
    fiber
}

/// Splits `p` as `p0(y) + sum_v c_v(y) x_v` over the fiber variables `x`, with
/// everything renamed into the outer variable numbering.
fn split_linear(p: &Poly, fiber: &[bool], fiber_vars: &[Var], outer_index: &[Var]) -> (Poly, Vec<Poly>) {
    let rename = |v: Var| outer_index[v as usize];
    let zero = BigRational::zero();
    let base = p.scale_vars(&|v| fiber[v as usize].then(|| zero.clone())).rename(&rename);
    let coeffs = fiber_vars.iter().map(|&v| p.derivative(v).rename(&rename)).collect();
    (base, coeffs)
}

/// Number of common zeros of `polys` in `F_q^n`. Variables in which the system
/// is linear are solved by elimination instead of enumerated; the budget
/// applies to the remaining variables.
pub fn count_zeros(polys: &[Poly], n: usize, q: u64, budget: u64) -> Result<Count, RepvarError> {
    check_prime(q)?;
    let polys: Vec<Poly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let fiber = linear_fiber(&polys, n);
    let fiber_vars: Vec<Var> = (0..n as Var).filter(|&v| fiber[v as usize]).collect();
    let mut outer_index = vec![0 as Var; n];
    let mut outer = 0;
    for v in 0..n {
        if !fiber[v] {
            outer_index[v] = outer;
            outer += 1;
        }
    }
    let mut systems = Vec::new();
    for p in &polys {
        let (base, coeffs) = split_linear(p, &fiber, &fiber_vars, &outer_index);
        let coeffs: Vec<CompiledPoly> = coeffs.iter().map(|c| c.compile(q)).collect::<Result<_, _>>()?;
        systems.push((base.compile(q)?, coeffs));
    }
    let r = fiber_vars.len();
    let pow: Vec<u128> = (0..=r).map(|k| space_size(q, k)).collect();
    let count = sum_points(outer as usize, q, budget, |pt| {
        let mut rows: Vec<Vec<u64>> = systems
            .iter()
            .map(|(base, coeffs)| {
                let mut row: Vec<u64> = coeffs.iter().map(|c| c.eval(pt)).collect();
                row.push((q - base.eval(pt)) % q);
                row
            })
            .collect();
        match fp::solve_rank(&mut rows, r, q) {
            Some(rank) => pow[r - rank],
            None => 0,
        }
    })?;
    Ok(count)
}

/// Entries of every relation at generic matrices over the arrows of `qr`.
pub fn relation_polys(qr: &QuiverWithRelations, d: &DimensionVector) -> Result<(VarLayout, Vec<Poly>), RepvarError> {
    let layout = VarLayout::new(&qr.quiver, d)?;
    let polys = qr.relations.iter().flat_map(|r| path_matrix(&qr.quiver, &layout, &r.poly)).collect();
    Ok((layout, polys))
}

/// Entries of every cyclic derivative of the potential of `cq`.
pub fn cyclic_derivative_polys(cq: &CompletedQuiver, d: &DimensionVector) -> Result<(VarLayout, Vec<Poly>), RepvarError> {
    let layout = VarLayout::new(&cq.quiver, d)?;
    let polys = (0..cq.quiver.arrows.len())
        .flat_map(|a| path_matrix(&cq.quiver, &layout, &cyclic_derivative(&cq.quiver, &cq.potential, a)))
        .collect();
    Ok((layout, polys))
}

/// Partial derivatives of the CS function in every coordinate.
pub fn gradient_polys(cq: &CompletedQuiver, d: &DimensionVector) -> Result<(VarLayout, Vec<Poly>), RepvarError> {
    let cs = trace_expand(cq, d)?;
    let polys = (0..cs.layout.len() as Var).map(|v| cs.poly.derivative(v)).collect();
    Ok((cs.layout, polys))
}

/// `#MC(L_d)`: representations of the quiver satisfying every relation.
pub fn count_relation_locus(qr: &QuiverWithRelations, d: &DimensionVector, q: u64, budget: u64) -> Result<Count, RepvarError> {
    let (layout, polys) = relation_polys(qr, d)?;
    count_zeros(&polys, layout.len(), q, budget)
}

/// Representations of the completed quiver on which all cyclic derivatives vanish.
pub fn count_mc(cq: &CompletedQuiver, d: &DimensionVector, q: u64, budget: u64) -> Result<Count, RepvarError> {
    let (layout, polys) = cyclic_derivative_polys(cq, d)?;
    count_zeros(&polys, layout.len(), q, budget)
}

/// Points where the gradient of the CS function vanishes.
pub fn count_critical(cq: &CompletedQuiver, d: &DimensionVector, q: u64, budget: u64) -> Result<Count, RepvarError> {
    let (layout, polys) = gradient_polys(cq, d)?;
    count_zeros(&polys, layout.len(), q, budget)
}

/// Pointwise comparison of two zero loci in `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocusComparison {
    pub points: u128,
    pub first: u128,
    pub second: u128,
    /// Points in exactly one of the two loci.
    pub disagreements: u128,
}

pub fn compare_loci(a: &[Poly], b: &[Poly], n: usize, q: u64, budget: u64) -> Result<LocusComparison, RepvarError> {
    check_prime(q)?;
    let (ca, cb) = (compile_all(a, q)?, compile_all(b, q)?);
    let (t, _) = fold_points(
        n,
        q,
        budget,
        || [0u128; 3],
        |acc, pt| {
            let x = ca.iter().all(|c| c.eval(pt) == 0);
            let y = cb.iter().all(|c| c.eval(pt) == 0);
            acc[0] += x as u128;
            acc[1] += y as u128;
            acc[2] += (x != y) as u128;
        },
        |acc, o| (0..3).for_each(|i| acc[i] += o[i]),
    )?;
    Ok(LocusComparison { points: space_size(q, n), first: t[0], second: t[1], disagreements: t[2] })
}

/// `#{f_d = c}` by enumerating every coordinate.
pub fn count_level_set_brute(cq: &CompletedQuiver, d: &DimensionVector, q: u64, c: u64, budget: u64) -> Result<Count, RepvarError> {
    check_prime(q)?;
    let cs = trace_expand(cq, d)?;
    let f = cs.poly.compile(q)?;
    let c = c % q;
    sum_points(cs.layout.len(), q, budget, |pt| (f.eval(pt) == c) as u128)
}

/// `#{f_d = c}` using linearity of `f_d = f_0(y) + sum_i a_i(y) w_i` in the
/// dual coordinates `w`: only `y` is enumerated, and each fiber contributes
/// `q^r` or `0` when all `a_i(y)` vanish, `q^(r-1)` otherwise.
pub fn count_level_set(cq: &CompletedQuiver, d: &DimensionVector, q: u64, c: u64, budget: u64) -> Result<Count, RepvarError> {
    check_prime(q)?;
    let cs = trace_expand(cq, d)?;
    let n = cs.layout.len();
    if cs.poly.degree_in_set(&|v| cs.dual[v as usize]) > 1 {
        return Err(RepvarError::NotDualLinear);
    }
    let duals: Vec<Var> = (0..n as Var).filter(|&v| cs.dual[v as usize]).collect();
    let mut outer_index = vec![0 as Var; n];
    let mut outer = 0;
    for (slot, _) in outer_index.iter_mut().zip(&cs.dual).filter(|(_, &dual)| !dual) {
        *slot = outer;
        outer += 1;
    }
    let (base, coeffs) = split_linear(&cs.poly, &cs.dual, &duals, &outer_index);
    let base = base.compile(q)?;
    let coeffs = compile_all(&coeffs, q)?;
    let r = duals.len();
    let (full, part) = (space_size(q, r), if r > 0 { space_size(q, r - 1) } else { 0 });
    let c = c % q;
    sum_points(outer as usize, q, budget, |pt| {
        if coeffs.iter().all(|a| a.eval(pt) == 0) {
            if base.eval(pt) == c {
                full
            } else {
                0
            }
        } else {
            part
        }
    })
}
