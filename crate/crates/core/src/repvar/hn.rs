//! Central charges, semistability and Harder-Narasimhan types of
//! representations over `F_q`.

use super::fp::{all_subspaces, mat_vec, Echelon};
use super::{check_prime, compile_all, cyclic_derivative_polys, fold_points, RepvarError};
use crate::quiver::{CompletedQuiver, DimensionVector, Quiver, VarLayout};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// One complex number `Z_i = (re, im)` per node with `im > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharge {
    z: Vec<(BigRational, BigRational)>,
}

impl CentralCharge {
    pub fn new(z: Vec<(BigRational, BigRational)>) -> Result<Self, RepvarError> {
        if let Some(i) = z.iter().position(|(_, im)| !im.is_positive()) {
            return Err(RepvarError::Charge(format!("imaginary part of Z_{i} must be positive")));
        }
        Ok(CentralCharge { z })
    }

    pub fn from_ints(z: &[(i64, i64)]) -> Result<Self, RepvarError> {
        Self::new(z.iter().map(|&(a, b)| (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))).collect())
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn charge(&self, d: &[u32]) -> (BigRational, BigRational) {
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for ((a, b), &k) in self.z.iter().zip(d) {
            let k = BigRational::from_integer(k.into());
            re += a * &k;
            im += b * &k;
        }
        (re, im)
    }

    /// Compares `Arg Z(a)` with `Arg Z(b)` for nonzero `a`, `b`.
    pub fn phase_cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let (ar, ai) = self.charge(a);
        let (br, bi) = self.charge(b);
        let cross = ar * bi - ai * br;
        BigRational::zero().cmp(&cross)
    }

    pub fn modulus_cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let (ar, ai) = self.charge(a);
        let (br, bi) = self.charge(b);
        (&ar * &ar + &ai * &ai).cmp(&(&br * &br + &bi * &bi))
    }

    /// Errors when two non-proportional nonzero dimension vectors of total at
    /// most `max_total` have the same phase.
    pub fn check_generic(&self, max_total: u32) -> Result<(), RepvarError> {
        let all: Vec<DimensionVector> =
            DimensionVector::all_up_to(self.z.len(), max_total).into_iter().filter(|d| !d.is_zero()).collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                let proportional = a.iter().zip(b.iter()).all(|(&x, &y)| x * b.total() == y * a.total());
                if !proportional && self.phase_cmp(a, b) == Ordering::Equal {
                    return Err(RepvarError::Charge(format!("not generic: {a} and {b} have the same phase")));
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for CentralCharge {
    type Err = RepvarError;

    /// `re:im,re:im,...` with rational entries such as `-1/2:1`.
    fn from_str(s: &str) -> Result<Self, RepvarError> {
        let bad = |m: String| RepvarError::Charge(m);
        let z = s
            .split(',')
            .map(|part| {
                let (re, im) = part.trim().split_once(':').ok_or_else(|| bad(format!("expected re:im, got {part:?}")))?;
                let parse = |t: &str| t.trim().parse::<BigRational>().map_err(|e| bad(format!("{t:?}: {e}")));
                Ok((parse(re)?, parse(im)?))
            })
            .collect::<Result<Vec<_>, RepvarError>>()?;
        CentralCharge::new(z)
    }
}

/// Ordered decomposition `d_1, ..., d_k` with strictly decreasing phase.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct HnType(pub Vec<DimensionVector>);

impl HnType {
    pub fn parts(&self) -> &[DimensionVector] {
        &self.0
    }
}

impl fmt::Display for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" > "))
    }
}

/// Every HN type of `d`, in lexicographic order of parts.
pub fn hn_types(d: &DimensionVector, z: &CentralCharge) -> Vec<HnType> {
    fn go(rest: &DimensionVector, prev: Option<&DimensionVector>, z: &CentralCharge, acc: &mut Vec<DimensionVector>, out: &mut Vec<HnType>) {
        if rest.is_zero() {
            out.push(HnType(acc.clone()));
            return;
        }
        for part in rest.below() {
            if part.is_zero() || prev.is_some_and(|p| z.phase_cmp(&part, p) != Ordering::Less) {
                continue;
            }
            acc.push(part.clone());
            go(&rest.sub(&part), Some(&part), z, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(d, None, z, &mut Vec::new(), &mut out);
    out
}

/// A representation over `F_q` given by its arrow matrices in layout order.
#[derive(Clone, Debug)]
pub struct FqRepresentation<'a> {
    pub quiver: &'a Quiver,
    pub layout: &'a VarLayout,
    pub q: u64,
    pub point: &'a [u64],
}

/// A subrepresentation: one subspace per node, closed under every arrow.
#[derive(Clone, Debug)]
pub struct Subrep {
    pub spaces: Vec<Echelon>,
    pub dim: DimensionVector,
}

impl Subrep {
    pub fn contains(&self, other: &Subrep) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_space(b))
    }
}

impl FqRepresentation<'_> {
    fn maps_into(&self, a: usize, from: &Echelon, to: &Echelon) -> bool {
        let (rows, cols) = self.layout.shape(a);
        let m = &self.point[self.layout.arrow_vars(a)];
        from.basis().iter().all(|b| to.contains(&mat_vec(m, rows, cols, b, self.q)))
    }

    /// All subrepresentations, given the subspaces of each `F_q^{d_i}`.
    pub fn subrepresentations(&self, subspaces: &[Vec<Echelon>]) -> Vec<Subrep> {
        let n = self.quiver.node_count();
        let mut out = Vec::new();
        let mut chosen: Vec<Echelon> = Vec::with_capacity(n);
        self.extend(subspaces, &mut chosen, &mut out);
        out
    }

    fn extend(&self, subspaces: &[Vec<Echelon>], chosen: &mut Vec<Echelon>, out: &mut Vec<Subrep>) {
        let i = chosen.len();
        if i == subspaces.len() {
            let dim = DimensionVector(chosen.iter().map(|s| s.dim() as u32).collect());
            out.push(Subrep { spaces: chosen.clone(), dim });
            return;
        }
        for u in &subspaces[i] {
            chosen.push(u.clone());
            let ok = self.quiver.arrows.iter().enumerate().all(|(a, arrow)| {
                if arrow.src > i || arrow.tgt > i || (arrow.src != i && arrow.tgt != i) {
                    return true;
                }
                self.maps_into(a, &chosen[arrow.src], &chosen[arrow.tgt])
            });
            if ok {
                self.extend(subspaces, chosen, out);
            }
            chosen.pop();
        }
    }

    /// No nonzero subrepresentation has larger phase than the whole.
    pub fn is_semistable(&self, subs: &[Subrep], z: &CentralCharge) -> bool {
        let d = &self.layout.d;
        subs.iter().all(|s| s.dim.is_zero() || z.phase_cmp(&s.dim, d) != Ordering::Greater)
    }

    /// HN type: repeatedly take the subrepresentation containing the current
    /// step whose quotient by it has maximal phase, then maximal modulus.
    pub fn hn_type(&self, subs: &[Subrep], z: &CentralCharge) -> HnType {
        let d = &self.layout.d;
        let mut parts = Vec::new();
        let mut current = subs.iter().find(|s| s.dim.is_zero()).expect("zero subrepresentation");
        while current.dim != *d {
            let mut best: Option<(&Subrep, DimensionVector)> = None;
            for s in subs {
                if s.dim == current.dim || !s.contains(current) {
                    continue;
                }
                let step = s.dim.sub(&current.dim);
                let better = match &best {
                    None => true,
                    Some((_, b)) => match z.phase_cmp(&step, b) {
                        Ordering::Greater => true,
                        Ordering::Equal => z.modulus_cmp(&step, b) == Ordering::Greater,
                        Ordering::Less => false,
                    },
                };
                if better {
                    best = Some((s, step));
                }
            }
            let (s, step) = best.expect("the whole representation contains every step");
            parts.push(step);
            current = s;
        }
        HnType(parts)
    }
}

/// Which points are stratified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    /// Every representation of the completed quiver.
    All,
    /// Representations on which every cyclic derivative vanishes.
    Critical,
}

/// Number of points of the chosen locus of each HN type.
pub fn count_hn_strata(
    cq: &CompletedQuiver,
    d: &DimensionVector,
    q: u64,
    z: &CentralCharge,
    locus: Locus,
    budget: u64,
) -> Result<BTreeMap<HnType, u128>, RepvarError> {
    check_prime(q)?;
    if z.len() != cq.quiver.node_count() {
        return Err(RepvarError::Charge(format!("{} entries for {} nodes", z.len(), cq.quiver.node_count())));
    }
    let (layout, polys) = cyclic_derivative_polys(cq, d)?;
    let eqs = match locus {
        Locus::All => Vec::new(),
        Locus::Critical => compile_all(&polys, q)?,
    };
    let subspaces: Vec<Vec<Echelon>> = d.iter().map(|&n| all_subspaces(n as usize, q)).collect();
    let (map, _) = fold_points(
        layout.len(),
        q,
        budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<HnType, u128>, pt| {
            if !eqs.iter().all(|e| e.eval(pt) == 0) {
                return;
            }
            let rep = FqRepresentation { quiver: &cq.quiver, layout: &layout, q, point: pt };
            let subs = rep.subrepresentations(&subspaces);
            *acc.entry(rep.hn_type(&subs, z)).or_insert(0) += 1;
        },
        |acc, other| {
            for (k, c) in other {
                *acc.entry(k).or_insert(0) += c;
            }
        },
    )?;
    Ok(map)
}
