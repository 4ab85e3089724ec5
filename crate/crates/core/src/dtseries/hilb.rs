//! The series `C(t)`, the framed recursion for noncommutative Hilbert schemes
//! and its closed form, and dimension reduction at `L = q`.

use super::{relation_space_dim, DtError, EulerForm, MotiveSource, MotivicSeries, Twist};
use crate::motive::{gl_motive, grassmannian_motive, MotivicWeight};
use crate::quiver::{cyclic_completion, DimensionVector, QuiverWithRelations};
use crate::repvar::{count_level_set, count_relation_locus};
use serde::Serialize;
use std::collections::BTreeMap;

/// `C(t) = sum_d L^{chi(d,d)/2} [(L^2_d)^*] [MC(L_d)] / [GL_d] t^d`.
pub fn c_series(qr: &QuiverWithRelations, src: &MotiveSource, euler: &EulerForm, bound: u32) -> Result<MotivicSeries, DtError> {
    MotivicSeries::from_fn(qr.quiver.node_count(), bound, |d| {
        if d.is_zero() {
            return Ok(MotivicWeight::one());
        }
        let mc = src.mc_motive(qr, d)?;
        let scale = MotivicWeight::v_pow(euler.value(d, d) + 2 * relation_space_dim(qr, d));
        Ok((&scale * &mc).checked_div(&gl_motive(d))?)
    })
}

/// `Z(t) = C(L^{1/2} t) / C(L^{-1/2} t)`, dividing with the given product rule.
pub fn hilb_series_closed(c: &MotivicSeries, twist: &Twist) -> Result<MotivicSeries, DtError> {
    c.substitute_half(1).div(&c.substitute_half(-1), twist)
}

/// `w_d^{d'}` for every `d' <= d`, `|d| <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedTerms {
    pub bound: u32,
    /// `w_d = L^{|d|} [(L^2_d)^*] [MC(L_d)]`.
    pub total: BTreeMap<DimensionVector, MotivicWeight>,
    /// `(d, d') -> w_d^{d'}`.
    pub terms: BTreeMap<(DimensionVector, DimensionVector), MotivicWeight>,
}

impl FramedTerms {
    pub fn cyclic(&self, d: &DimensionVector) -> &MotivicWeight {
        &self.terms[&(d.clone(), d.clone())]
    }
}

/// Solves `w_d = sum_{d' <= d} w_d^{d'}` with
/// `w_d^{d'} = [Gr_{d',d}] L^{sum_i d'_i e_i - chi(d', e)} L^{-|e|} w_{d'}^{d'} w_e`, `e = d - d'`.
pub fn framed_terms(qr: &QuiverWithRelations, src: &MotiveSource, euler: &EulerForm, bound: u32) -> Result<FramedTerms, DtError> {
    let n = qr.quiver.node_count();
    let mut total = BTreeMap::new();
    let mut terms: BTreeMap<(DimensionVector, DimensionVector), MotivicWeight> = BTreeMap::new();
    for d in DimensionVector::all_up_to(n, bound) {
        let w = if d.is_zero() {
            MotivicWeight::one()
        } else {
            let mc = src.mc_motive(qr, &d)?;
            &MotivicWeight::l_pow(d.total() as i64 + relation_space_dim(qr, &d)) * &mc
        };
        total.insert(d.clone(), w.clone());
        let mut rest = w;
        for dp in d.below() {
            if dp == d {
                continue;
            }
            let e = d.sub(&dp);
            let overlap: i64 = dp.iter().zip(e.iter()).map(|(&a, &b)| (a * b) as i64).sum();
            let v_exp = 2 * overlap - euler.doubled_value(&dp, &e) - 2 * e.total() as i64;
            let term = &(&grassmannian_motive(&dp, &d)? * &MotivicWeight::v_pow(v_exp))
                * &(&terms[&(dp.clone(), dp.clone())] * &total[&e]);
            rest = &rest - &term;
            terms.insert((d.clone(), dp), term);
        }
        terms.insert((d.clone(), d.clone()), rest);
    }
    Ok(FramedTerms { bound, total, terms })
}

/// `[Hilb^d]_vir = L^{(chi(d,d) - |d|)/2} w_d^d / [GL_d]`.
pub fn hilb_series_recursive(
    qr: &QuiverWithRelations,
    src: &MotiveSource,
    euler: &EulerForm,
    bound: u32,
) -> Result<MotivicSeries, DtError> {
    let framed = framed_terms(qr, src, euler, bound)?;
    MotivicSeries::from_fn(qr.quiver.node_count(), bound, |d| {
        let scale = MotivicWeight::v_pow(euler.value(d, d) - d.total() as i64);
        Ok((&scale * framed.cyclic(d)).checked_div(&gl_motive(d))?)
    })
}

/// Both sides of `#f^{-1}(1) - #f^{-1}(0) = -q^r #MC(L_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReduction {
    pub d: DimensionVector,
    pub q: u64,
    /// Number of dual coordinates.
    pub r: usize,
    pub level0: u128,
    pub level1: u128,
    pub mc: u128,
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
}

pub fn dimension_reduction_check(qr: &QuiverWithRelations, d: &DimensionVector, q: u64, budget: u64) -> Result<DimensionReduction, DtError> {
    let cq = cyclic_completion(qr);
    let level0 = count_level_set(&cq, d, q, 0, budget)?.value;
    let level1 = count_level_set(&cq, d, q, 1, budget)?.value;
    let mc = count_relation_locus(qr, d, q, budget)?.value;
    let r = relation_space_dim(qr, d) as usize;
    let lhs = level1 as i128 - level0 as i128;
    let rhs = -((q as i128).pow(r as u32) * mc as i128);
    Ok(DimensionReduction { d: d.clone(), q, r, level0, level1, mc, lhs, rhs, holds: lhs == rhs })
}
