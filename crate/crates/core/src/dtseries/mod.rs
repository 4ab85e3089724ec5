//! Motivic generating series: the series `C(t)` of representations with
//! relations, the framed recursion and closed form for noncommutative Hilbert
//! schemes, dimension reduction at `L = q`, and the Harder-Narasimhan
//! factorization into semistable series.

mod euler;
mod hilb;
mod hn;
mod series;

pub use euler::{EulerConvention, EulerForm};
pub use hilb::{c_series, dimension_reduction_check, framed_terms, hilb_series_closed, hilb_series_recursive, DimensionReduction, FramedTerms};
pub use hn::{hn_partition_check, ordered_product, ray_of, ss_series_factorize, HnPartition, Ray, StratumCheck};
pub use series::{MotivicSeries, Twist};

use crate::motive::{LaurentPoly, MotiveError, MotiveRecord, MotivicWeight};
use crate::quiver::{DimensionVector, QuiverError, QuiverWithRelations, VarLayout};
use crate::repvar::{count_relation_locus, RepvarError, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum DtError {
    #[error("no motive available for dimension vector {0}")]
    MissingMotive(DimensionVector),
    #[error("interpolation at {d}: {message}")]
    Interpolation { d: DimensionVector, message: String },
    #[error("series: {0}")]
    Series(String),
    #[error(transparent)]
    Motive(#[from] MotiveError),
    #[error(transparent)]
    Repvar(#[from] RepvarError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Where the classes `[MC(L_d)]` come from.
#[derive(Clone, Debug)]
pub enum MotiveSource {
    /// Given motives per dimension vector.
    Closed(BTreeMap<DimensionVector, MotivicWeight>),
    /// Point counts at the listed primes, interpolated by a polynomial in `L`
    /// of degree at most the number of arrow coordinates.
    Interpolated { primes: Vec<u64>, budget: u64 },
}

/// On-disk list of closed-form motives.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MotiveFile {
    pub quiver: String,
    pub motives: Vec<MotiveEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MotiveEntry {
    pub d: DimensionVector,
    pub motive: MotiveRecord,
}

impl MotiveSource {
    pub fn interpolated(primes: &[u64]) -> Self {
        MotiveSource::Interpolated { primes: primes.to_vec(), budget: DEFAULT_BUDGET }
    }

    pub fn from_file(file: &MotiveFile) -> Result<Self, DtError> {
        let mut map = BTreeMap::new();
        for e in &file.motives {
            map.insert(e.d.clone(), MotivicWeight::try_from(&e.motive)?);
        }
        Ok(MotiveSource::Closed(map))
    }

    /// `[MC(L_d)]`, the class of representations satisfying the relations.
    pub fn mc_motive(&self, qr: &QuiverWithRelations, d: &DimensionVector) -> Result<MotivicWeight, DtError> {
        match self {
            MotiveSource::Closed(map) => map.get(d).cloned().ok_or_else(|| DtError::MissingMotive(d.clone())),
            MotiveSource::Interpolated { primes, budget } => {
                let degree = VarLayout::new(&qr.quiver, d)?.len();
                if primes.len() <= degree {
                    return Err(DtError::Interpolation {
                        d: d.clone(),
                        message: format!("{} primes cannot determine a polynomial of degree {degree}", primes.len()),
                    });
                }
                let mut samples = Vec::new();
                for &q in primes {
                    samples.push((q, count_relation_locus(qr, d, q, *budget)?.value));
                }
                interpolate_counts(d, &samples, degree)
            }
        }
    }
}

/// Integer polynomial in `L` of degree at most `degree` through all samples.
pub fn interpolate_counts(d: &DimensionVector, samples: &[(u64, u128)], degree: usize) -> Result<MotivicWeight, DtError> {
    let err = |message: String| DtError::Interpolation { d: d.clone(), message };
    let pts: Vec<(BigRational, BigRational)> = samples
        .iter()
        .map(|&(q, c)| (BigRational::from_integer(q.into()), BigRational::from_integer(c.into())))
        .collect();
    let used = &pts[..(degree + 1).min(pts.len())];
    // Newton divided differences, then expansion to the monomial basis
    let n = used.len();
    let mut table: Vec<BigRational> = used.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&used[i].0 - &used[i - j].0);
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - x_i) + table[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if !coeffs[k].is_zero() {
                if k + 1 < n {
                    next[k + 1] += &coeffs[k];
                }
                next[k] -= &coeffs[k] * &used[i].0;
            }
        }
        next[0] += &table[i];
        coeffs = next;
    }
    if let Some(c) = coeffs.iter().find(|c| !c.is_integer()) {
        return Err(err(format!("non-integral coefficient {c}")));
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
    for (x, y) in &pts {
        let val = coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        if &val != y {
            return Err(err(format!("polynomial gives {val} at q = {x}, sampled count is {y}")));
        }
    }
    Ok(MotivicWeight::from_laurent(LaurentPoly::from_l_coeffs(&ints)))
}

/// `[(L^2_d)^*] = L^{r_d}` with `r_d` the number of dual coordinates.
pub fn relation_space_dim(qr: &QuiverWithRelations, d: &DimensionVector) -> i64 {
    qr.relations.iter().map(|r| (d[r.poly.src] * d[r.poly.tgt]) as i64).sum()
}
