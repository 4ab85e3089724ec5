//! Harder-Narasimhan factorization of a series into semistable series, one
//! per ray of the central charge.

use super::{DtError, EulerForm, MotivicSeries, Twist};
use crate::motive::{gl_motive, FieldCardinality, MotivicWeight};
use crate::quiver::{CompletedQuiver, DimensionVector};
use crate::repvar::{count_hn_strata, hn_types, CentralCharge, HnType, Locus};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A ray, represented by its primitive dimension vector.
pub type Ray = DimensionVector;

pub fn ray_of(d: &DimensionVector) -> Ray {
    let g = d.iter().fold(0u32, |g, &x| g.gcd(&x)).max(1);
    DimensionVector(d.iter().map(|&x| x / g).collect())
}

/// Semistable series `Z^ss_ray` such that the product of all of them in order
/// of decreasing phase equals `c`: for each `d`, the contributions of HN types
/// with two or more parts are subtracted from the coefficient of `c`.
pub fn ss_series_factorize(
    c: &MotivicSeries,
    z: &CentralCharge,
    twist: &Twist,
) -> Result<BTreeMap<Ray, MotivicSeries>, DtError> {
    if z.len() != c.nodes() {
        return Err(DtError::Series(format!("central charge has {} entries for {} nodes", z.len(), c.nodes())));
    }
    z.check_generic(c.bound())?;
    let mut ss: BTreeMap<DimensionVector, MotivicWeight> = BTreeMap::new();
    for d in c.degrees().into_iter().filter(|d| !d.is_zero()) {
        let mut acc = c.coeff(&d).expect("degree within bound").clone();
        for t in hn_types(&d, z) {
            let parts = t.parts();
            if parts.len() < 2 {
                continue;
            }
            let mut term = MotivicWeight::one();
            for (j, p) in parts.iter().enumerate() {
                term = &term * &ss[p];
                for later in &parts[j + 1..] {
                    term = &term * &twist.factor(p, later);
                }
            }
            acc = &acc - &term;
        }
        ss.insert(d, acc);
    }
    let mut out = BTreeMap::new();
    for d in c.degrees().into_iter().filter(|d| !d.is_zero()) {
        let ray = ray_of(&d);
        if out.contains_key(&ray) {
            continue;
        }
        let series = MotivicSeries::from_fn(c.nodes(), c.bound(), |e| {
            Ok(if e.is_zero() {
                MotivicWeight::one()
            } else if ray_of(e) == ray {
                ss[e].clone()
            } else {
                MotivicWeight::zero()
            })
        })?;
        out.insert(ray, series);
    }
    Ok(out)
}

/// Product of the ray series in order of decreasing phase.
pub fn ordered_product(rays: &BTreeMap<Ray, MotivicSeries>, z: &CentralCharge, twist: &Twist) -> Result<MotivicSeries, DtError> {
    let mut order: Vec<&Ray> = rays.keys().collect();
    order.sort_by(|a, b| match z.phase_cmp(a, b) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => a.cmp(b),
    });
    let first = rays.values().next().ok_or_else(|| DtError::Series("no rays".into()))?;
    let mut acc = MotivicSeries::one(first.nodes(), first.bound());
    for r in order {
        acc = acc.mul(&rays[r], twist)?;
    }
    Ok(acc)
}

/// One HN type in the stack-count identity at `L = q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumCheck {
    pub hn_type: HnType,
    pub points: u128,
    /// `#stratum / #GL_d`.
    pub lhs: String,
    /// `q^{-sum_{j<j'} chi(d_j, d_j')} prod_j #ss_{d_j} / #GL_{d_j}`.
    pub rhs: String,
    pub holds: bool,
}

/// HN partition of all representations of the completed quiver at `L = q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnPartition {
    pub d: DimensionVector,
    pub q: u64,
    /// Sum of the stratum sizes.
    pub stratified: u128,
    /// `q^{dim}`, the number of points.
    pub total: u128,
    pub strata: Vec<StratumCheck>,
    pub holds: bool,
}

/// Checks that the HN strata partition the representation space and that each
/// stratum satisfies the stack-count identity, with `chi` the pinned form.
pub fn hn_partition_check(cq: &CompletedQuiver, d: &DimensionVector, q: u64, z: &CentralCharge, budget: u64) -> Result<HnPartition, DtError> {
    let euler = EulerForm::completed_quiver(cq);
    let fq = FieldCardinality::new(q)?;
    let strata = count_hn_strata(cq, d, q, z, Locus::All, budget)?;
    let mut ss: BTreeMap<DimensionVector, u128> = BTreeMap::new();
    let mut checks = Vec::new();
    for (t, &n) in &strata {
        let mut rhs = BigRational::one();
        for (j, p) in t.parts().iter().enumerate() {
            let count = match ss.get(p) {
                Some(&c) => c,
                None => {
                    let c = count_hn_strata(cq, p, q, z, Locus::All, budget)?
                        .into_iter()
                        .find(|(t, _)| t.parts().len() == 1)
                        .map_or(0, |(_, c)| c);
                    ss.insert(p.clone(), c);
                    c
                }
            };
            rhs *= BigRational::from_integer(count.into()) / gl_motive(p).eval_at(fq)?;
            for later in &t.parts()[j + 1..] {
                rhs *= MotivicWeight::l_pow(-euler.value(p, later)).eval_at(fq)?;
            }
        }
        let lhs = BigRational::from_integer(n.into()) / gl_motive(d).eval_at(fq)?;
        checks.push(StratumCheck { hn_type: t.clone(), points: n, holds: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    let vars: u32 = cq.quiver.arrows.iter().map(|a| d[a.src] * d[a.tgt]).sum();
    let total = (q as u128).pow(vars);
    let stratified = strata.values().sum();
    let holds = stratified == total && checks.iter().all(|c| c.holds);
    Ok(HnPartition { d: d.clone(), q, stratified, total, strata: checks, holds })
}
