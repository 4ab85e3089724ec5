//! Truncated multivariate power series with motivic coefficients.

use super::{DtError, EulerForm};
use crate::motive::MotivicWeight;
use crate::quiver::DimensionVector;
use serde::Serialize;
use std::collections::BTreeMap;

/// Product rule for monomials: `t^a * t^b = factor(a, b) t^(a+b)`.
#[derive(Clone, Debug)]
pub enum Twist {
    /// Commutative product.
    Plain,
    /// `factor = L^{(chi(b, a) - chi(a, b)) / 2}`.
    QuantumTorus(EulerForm),
    /// `factor = L^{-chi(a, b)}`.
    Stack(EulerForm),
}

impl Twist {
    /// Exponent of `v = L^{1/2}` in `factor(a, b)`.
    pub fn v_exponent(&self, a: &[u32], b: &[u32]) -> i64 {
        match self {
            Twist::Plain => 0,
            Twist::QuantumTorus(e) => (e.doubled_value(b, a) - e.doubled_value(a, b)) / 2,
            Twist::Stack(e) => -e.doubled_value(a, b),
        }
    }

    pub fn factor(&self, a: &[u32], b: &[u32]) -> MotivicWeight {
        MotivicWeight::v_pow(self.v_exponent(a, b))
    }
}

/// Coefficients for every dimension vector of total degree at most `bound`;
/// terms beyond the bound are absent rather than zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicSeries {
    nodes: usize,
    bound: u32,
    coeffs: BTreeMap<DimensionVector, MotivicWeight>,
}

#[derive(Serialize)]
struct Entry<'a> {
    d: &'a DimensionVector,
    coefficient: &'a MotivicWeight,
}

impl MotivicSeries {
    pub fn from_fn(nodes: usize, bound: u32, mut f: impl FnMut(&DimensionVector) -> Result<MotivicWeight, DtError>) -> Result<Self, DtError> {
        let mut coeffs = BTreeMap::new();
        for d in DimensionVector::all_up_to(nodes, bound) {
            let c = f(&d)?;
            coeffs.insert(d, c);
        }
        Ok(MotivicSeries { nodes, bound, coeffs })
    }

    pub fn one(nodes: usize, bound: u32) -> Self {
        Self::from_fn(nodes, bound, |d| Ok(if d.is_zero() { MotivicWeight::one() } else { MotivicWeight::zero() }))
            .expect("infallible")
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn coeff(&self, d: &DimensionVector) -> Option<&MotivicWeight> {
        self.coeffs.get(d)
    }

    pub fn set(&mut self, d: &DimensionVector, c: MotivicWeight) {
        assert!(d.len() == self.nodes && d.total() <= self.bound, "{d} outside the series");
        self.coeffs.insert(d.clone(), c);
    }

    /// Dimension vectors by total degree, then lexicographically.
    pub fn degrees(&self) -> Vec<DimensionVector> {
        DimensionVector::all_up_to(self.nodes, self.bound)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimensionVector, &MotivicWeight)> {
        self.coeffs.iter()
    }

    fn compatible(&self, other: &Self) -> Result<u32, DtError> {
        if self.nodes != other.nodes {
            return Err(DtError::Series(format!("{} vs {} variables", self.nodes, other.nodes)));
        }
        Ok(self.bound.min(other.bound))
    }

    pub fn add(&self, other: &Self) -> Result<Self, DtError> {
        let bound = self.compatible(other)?;
        Self::from_fn(self.nodes, bound, |d| Ok(&self.coeffs[d] + &other.coeffs[d]))
    }

    pub fn mul(&self, other: &Self, twist: &Twist) -> Result<Self, DtError> {
        let bound = self.compatible(other)?;
        Self::from_fn(self.nodes, bound, |d| {
            let mut acc = MotivicWeight::zero();
            for a in d.below() {
                let b = d.sub(&a);
                let (x, y) = (&self.coeffs[&a], &other.coeffs[&b]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = &acc + &(&(x * y) * &twist.factor(&a, &b));
            }
            Ok(acc)
        })
    }

    /// Right inverse `b` with `self * b = 1`; needs an invertible constant term.
    pub fn inverse(&self, twist: &Twist) -> Result<Self, DtError> {
        let zero = DimensionVector::zero(self.nodes);
        let c0 = self.coeffs[&zero].inverse()?;
        let mut out = Self::one(self.nodes, self.bound);
        out.coeffs.insert(zero.clone(), c0.clone());
        for d in self.degrees().into_iter().skip(1) {
            let mut acc = MotivicWeight::zero();
            for a in d.below() {
                if a.is_zero() {
                    continue;
                }
                let b = d.sub(&a);
                let x = &self.coeffs[&a];
                if x.is_zero() {
                    continue;
                }
                acc = &acc + &(&(x * &out.coeffs[&b]) * &twist.factor(&a, &b));
            }
            out.coeffs.insert(d, -(&c0 * &acc));
        }
        Ok(out)
    }

    /// `self * other^{-1}`.
    pub fn div(&self, other: &Self, twist: &Twist) -> Result<Self, DtError> {
        self.mul(&other.inverse(twist)?, twist)
    }

    /// Substitution `t -> L^{k/2} t`.
    pub fn substitute_half(&self, k: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(d, c)| (d.clone(), c * &MotivicWeight::v_pow(k * d.total() as i64)))
            .collect();
        MotivicSeries { nodes: self.nodes, bound: self.bound, coeffs }
    }

    /// Dimension vectors where the two series differ.
    pub fn differences(&self, other: &Self) -> Vec<DimensionVector> {
        self.coeffs.iter().filter(|(d, c)| other.coeffs.get(*d) != Some(c)).map(|(d, _)| d.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Entry> = self.coeffs.iter().map(|(d, c)| Entry { d, coefficient: c }).collect();
        serde_json::to_value(entries).expect("series serializes")
    }
}
