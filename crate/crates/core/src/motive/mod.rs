//! Exact arithmetic in the ring of motivic weights.
//!
//! Elements are rational functions in `v` (with `v^2 = L`, the class of the
//! affine line) whose denominators are products of powers of `v` and quantum
//! factors `L^n - 1`. Internally every quantum factor is split into cyclotomic
//! pieces `Phi_m(L)`, which makes the reduced form canonical: the numerator is
//! a Laurent polynomial in `v` coprime to every cyclotomic factor that remains
//! in the denominator. Equality is structural.

mod laurent;
mod qanalog;
mod record;

pub use laurent::LaurentPoly;
pub use qanalog::{gl_motive, grassmannian_motive, q_binomial, q_factorial};
pub use record::{DenominatorFactor, MotiveRecord};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotiveError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at L = {q}")]
    Pole { q: u64 },
    #[error("odd power of L^(1/2) cannot be evaluated at non-square q = {q}")]
    Irrational { q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a unit in the ring of motivic weights")]
    NotInvertible(String),
    #[error("malformed motive record: {0}")]
    Malformed(String),
}

/// A finite-field cardinality used to specialise `L` to a number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldCardinality {
    q: u64,
    sqrt: Option<u64>,
}

impl FieldCardinality {
    /// `q >= 2`; the square root is recorded whenever `q` is a perfect square.
    pub fn new(q: u64) -> Result<Self, MotiveError> {
        if q < 2 {
            return Err(MotiveError::Domain(format!("field cardinality {q} < 2")));
        }
        let s = (q as f64).sqrt().round() as u64;
        let sqrt = [s.saturating_sub(1), s, s + 1].into_iter().find(|r| r * r == q);
        Ok(FieldCardinality { q, sqrt })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn sqrt(&self) -> Option<u64> {
        self.sqrt
    }
}

/// `Phi_m(x)` as ascending integer coefficients.
pub(crate) fn cyclotomic(m: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&m) {
        return c.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d of m.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    let mut poly = LaurentPoly::from_coeffs(0, num);
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi = LaurentPoly::from_coeffs(0, cyclotomic(d));
            poly = poly.div_exact_monic(&phi).expect("cyclotomic factorisation");
        }
    }
    let coeffs: Vec<BigInt> = (0..=poly.high()).map(|e| poly.coeff(e)).collect();
    cache.lock().unwrap().insert(m, coeffs.clone());
    coeffs
}

/// `Phi_m(v^2)` as a polynomial in `v`.
fn cyclotomic_in_v(m: u32) -> LaurentPoly {
    LaurentPoly::from_l_coeffs(&cyclotomic(m))
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u32
}

fn divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Exact element of `Z[v, v^-1]` localised at the quantum factors `L^n - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MotivicWeight {
    num: LaurentPoly,
    /// cyclotomic index `m` -> multiplicity of `Phi_m(L)` in the denominator
    den: BTreeMap<u32, u32>,
}

impl MotivicWeight {
    pub fn zero() -> Self {
        MotivicWeight { num: LaurentPoly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        MotivicWeight { num: LaurentPoly::monomial(0, n), den: BTreeMap::new() }
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        MotivicWeight { num, den: BTreeMap::new() }
    }

    /// `L^(k/2) = v^k`.
    pub fn v_pow(k: i64) -> Self {
        Self::from_laurent(LaurentPoly::monomial(k, BigInt::one()))
    }

    /// `L^k`.
    pub fn l_pow(k: i64) -> Self {
        Self::v_pow(2 * k)
    }

    pub fn lefschetz() -> Self {
        Self::l_pow(1)
    }

    /// The quantum factor `L^n - 1` for `n >= 1`.
    pub fn quantum(n: u32) -> Self {
        assert!(n >= 1, "quantum factor needs n >= 1");
        let mut c = vec![BigInt::zero(); n as usize + 1];
        c[0] = -BigInt::one();
        c[n as usize] = BigInt::one();
        Self::from_laurent(LaurentPoly::from_l_coeffs(&c))
    }

    /// `1 / (L^n - 1)`.
    pub fn quantum_inverse(n: u32) -> Self {
        let mut den = BTreeMap::new();
        for d in divisors(n) {
            den.insert(d, 1);
        }
        MotivicWeight { num: LaurentPoly::one(), den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// Cyclotomic denominator factors `m -> multiplicity`.
    pub fn cyclotomic_denominator(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// True when the value lies in `Z[v, v^-1]` (no quantum denominators).
    pub fn is_laurent(&self) -> bool {
        self.den.is_empty()
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<u32> = self.den.keys().copied().collect();
        for m in keys {
            let phi = cyclotomic_in_v(m);
            loop {
                let mult = self.den[&m];
                if mult == 0 {
                    break;
                }
                // shift numerator to an ordinary polynomial before dividing
                let low = self.num.low();
                let shifted = self.num.shift(-low);
                match shifted.div_exact_monic(&phi) {
                    Some(q) => {
                        self.num = q.shift(low);
                        *self.den.get_mut(&m).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, mult| *mult > 0);
        self
    }

    /// Multiply the numerator by `prod Phi_m^mult`.
    fn expand_factors(num: &LaurentPoly, factors: &BTreeMap<u32, u32>) -> LaurentPoly {
        let mut out = num.clone();
        for (&m, &mult) in factors {
            let phi = cyclotomic_in_v(m);
            for _ in 0..mult {
                out = &out * &phi;
            }
        }
        out
    }

    fn common_parts(&self, rhs: &Self) -> (LaurentPoly, LaurentPoly, BTreeMap<u32, u32>) {
        let mut den = self.den.clone();
        for (&m, &k) in &rhs.den {
            let e = den.entry(m).or_insert(0);
            *e = (*e).max(k);
        }
        let missing = |own: &BTreeMap<u32, u32>| -> BTreeMap<u32, u32> {
            den.iter()
                .map(|(&m, &k)| (m, k - own.get(&m).copied().unwrap_or(0)))
                .filter(|(_, k)| *k > 0)
                .collect()
        };
        let a = Self::expand_factors(&self.num, &missing(&self.den));
        let b = Self::expand_factors(&rhs.num, &missing(&rhs.den));
        (a, b, den)
    }

    /// Splits a Laurent polynomial into `sign * v^k * prod Phi_m(L)^e`, if possible.
    fn factor_unit(p: &LaurentPoly) -> Option<(i64, BigInt, BTreeMap<u32, u32>)> {
        if p.is_zero() {
            return None;
        }
        let low = p.low();
        let mut rest = p.shift(-low);
        let mut factors = BTreeMap::new();
        let mut m = 1u32;
        while rest.high() > 0 {
            let h = rest.high();
            // deg Phi_m(v^2) = 2 phi(m) and phi(m) >= sqrt(m / 2)
            if (m as i64) > h * h / 2 + 2 {
                return None;
            }
            if 2 * euler_phi(m) as i64 > h {
                m += 1;
                continue;
            }
            let phi = cyclotomic_in_v(m);
            match rest.div_exact_monic(&phi) {
                Some(q) => {
                    rest = q;
                    *factors.entry(m).or_insert(0) += 1;
                }
                None => m += 1,
            }
        }
        let c = rest.coeff(0);
        if c.abs().is_one() {
            Some((low, c, factors))
        } else {
            None
        }
    }

    /// Exact division by a unit of the ring (a signed monomial in `v` times
    /// quantum factors, possibly over quantum factors).
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, MotiveError> {
        if rhs.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        let (k, sign, factors) =
            Self::factor_unit(&rhs.num).ok_or_else(|| MotiveError::NotInvertible(rhs.to_string()))?;
        let num = Self::expand_factors(&self.num, &rhs.den).shift(-k).scale(&sign);
        let mut den = self.den.clone();
        for (m, e) in factors {
            *den.entry(m).or_insert(0) += e;
        }
        Ok(MotivicWeight { num, den }.normalize())
    }

    pub fn inverse(&self) -> Result<Self, MotiveError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitution `v -> -v`, i.e. `L^(1/2) -> -L^(1/2)`.
    pub fn flip_half(&self) -> Self {
        let num = LaurentPoly::from_coeffs(
            self.num.low(),
            (self.num.low()..=self.num.high())
                .map(|e| if e.rem_euclid(2) == 1 { -self.num.coeff(e) } else { self.num.coeff(e) })
                .collect(),
        );
        MotivicWeight { num, den: self.den.clone() }
    }

    /// Exact value at `L = q`.
    pub fn eval_at(&self, c: FieldCardinality) -> Result<BigRational, MotiveError> {
        let q = BigInt::from(c.q());
        let mut den = BigInt::one();
        for (&m, &mult) in &self.den {
            let val = cyclotomic(m).iter().rev().fold(BigInt::zero(), |acc, k| acc * &q + k);
            if val.is_zero() {
                return Err(MotiveError::Pole { q: c.q() });
            }
            den *= num_traits::pow(val, mult as usize);
        }
        let mut num = BigRational::zero();
        for (e, coeff) in self.num.terms() {
            let base = if e.rem_euclid(2) == 0 {
                BigRational::from_integer(q.clone())
            } else {
                match c.sqrt() {
                    Some(s) => BigRational::from_integer(BigInt::from(s)),
                    None => return Err(MotiveError::Irrational { q: c.q() }),
                }
            };
            let exp = if e.rem_euclid(2) == 0 { e / 2 } else { e };
            let pw = num_traits::pow(base, exp.unsigned_abs() as usize);
            let pw = if exp < 0 { pw.recip() } else { pw };
            num += pw * BigRational::from_integer(coeff.clone());
        }
        Ok(num / BigRational::from_integer(den))
    }

    /// Value at `L = q` as an integer, when it is one.
    pub fn eval_int(&self, q: u64) -> Result<BigInt, MotiveError> {
        let r = self.eval_at(FieldCardinality::new(q)?)?;
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(MotiveError::Domain(format!("value {r} at L = {q} is not an integer")))
        }
    }

    /// Degree in `v` of the numerator minus that of the denominator.
    pub fn v_degree(&self) -> i64 {
        let den_deg: i64 = self
            .den
            .iter()
            .map(|(&m, &k)| 2 * (cyclotomic(m).len() as i64 - 1) * k as i64)
            .sum();
        self.num.high() - den_deg
    }

    /// Laurent coefficients in `L` when this is an even Laurent polynomial.
    pub fn as_small_ints(&self) -> Option<Vec<(i64, i64)>> {
        if !self.is_laurent() {
            return None;
        }
        self.num.terms().map(|(e, c)| c.to_i64().map(|c| (e, c))).collect()
    }

    pub fn to_latex(&self) -> String {
        record::latex(self)
    }
}

impl Add for &MotivicWeight {
    type Output = MotivicWeight;
    fn add(self, rhs: &MotivicWeight) -> MotivicWeight {
        if self.den == rhs.den {
            return MotivicWeight { num: &self.num + &rhs.num, den: self.den.clone() }.normalize();
        }
        let (a, b, den) = self.common_parts(rhs);
        MotivicWeight { num: &a + &b, den }.normalize()
    }
}

impl Sub for &MotivicWeight {
    type Output = MotivicWeight;
    fn sub(self, rhs: &MotivicWeight) -> MotivicWeight {
        self + &(-rhs)
    }
}

impl Neg for &MotivicWeight {
    type Output = MotivicWeight;
    fn neg(self) -> MotivicWeight {
        MotivicWeight { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &MotivicWeight {
    type Output = MotivicWeight;
    fn mul(self, rhs: &MotivicWeight) -> MotivicWeight {
        let mut den = self.den.clone();
        for (&m, &k) in &rhs.den {
            *den.entry(m).or_insert(0) += k;
        }
        MotivicWeight { num: &self.num * &rhs.num, den }.normalize()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MotivicWeight {
            type Output = MotivicWeight;
            fn $f(self, rhs: MotivicWeight) -> MotivicWeight {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MotivicWeight> for MotivicWeight {
            type Output = MotivicWeight;
            fn $f(self, rhs: &MotivicWeight) -> MotivicWeight {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MotivicWeight {
    type Output = MotivicWeight;
    fn neg(self) -> MotivicWeight {
        -&self
    }
}

impl std::iter::Sum for MotivicWeight {
    fn sum<I: Iterator<Item = MotivicWeight>>(iter: I) -> Self {
        iter.fold(MotivicWeight::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for MotivicWeight {
    fn product<I: Iterator<Item = MotivicWeight>>(iter: I) -> Self {
        iter.fold(MotivicWeight::one(), |a, b| a * b)
    }
}

impl fmt::Display for MotivicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        record::display(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> MotivicWeight {
        MotivicWeight::lefschetz()
    }

    #[test]
    fn cyclotomics() {
        let ints = |m| cyclotomic(m).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(1), vec![-1, 1]);
        assert_eq!(ints(2), vec![1, 1]);
        assert_eq!(ints(4), vec![1, 0, 1]);
        assert_eq!(ints(6), vec![1, -1, 1]);
    }

    #[test]
    fn reduction_is_canonical() {
        // (L + 1) / (L^2 - 1) == 1 / (L - 1)
        let a = (&l() + &MotivicWeight::one()).checked_div(&MotivicWeight::quantum(2)).unwrap();
        assert_eq!(a, MotivicWeight::quantum_inverse(1));
        let b = &MotivicWeight::quantum(3) * &MotivicWeight::quantum_inverse(3);
        assert!(b.is_one());
    }

    #[test]
    fn non_units_are_rejected() {
        let two_plus_l = &l() + &MotivicWeight::from_int(2);
        assert!(matches!(MotivicWeight::one().checked_div(&two_plus_l), Err(MotiveError::NotInvertible(_))));
        assert_eq!(MotivicWeight::one().checked_div(&MotivicWeight::zero()), Err(MotiveError::DivisionByZero));
        // -L^(3/2)(L^2-1) is a unit
        let u = -(&MotivicWeight::v_pow(3) * &MotivicWeight::quantum(2));
        assert_eq!(&u.inverse().unwrap() * &u, MotivicWeight::one());
    }

    #[test]
    fn evaluation() {
        let three = FieldCardinality::new(3).unwrap();
        assert_eq!((&l() + &MotivicWeight::one()).eval_at(three).unwrap(), BigRational::from_integer(4.into()));
        let four = FieldCardinality::new(4).unwrap();
        assert_eq!(four.sqrt(), Some(2));
        assert_eq!(MotivicWeight::v_pow(1).eval_at(four).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(MotivicWeight::v_pow(1).eval_at(three), Err(MotiveError::Irrational { q: 3 }));
        let two = FieldCardinality::new(2).unwrap();
        assert_eq!(MotivicWeight::quantum_inverse(1).eval_at(two).unwrap(), BigRational::one());
        assert_eq!(
            MotivicWeight::quantum_inverse(1).eval_at(FieldCardinality { q: 1, sqrt: Some(1) }),
            Err(MotiveError::Pole { q: 1 })
        );
        assert!(FieldCardinality::new(1).is_err());
    }

    #[test]
    fn flip_half_is_involution() {
        let w = &MotivicWeight::v_pow(3) + &MotivicWeight::v_pow(2);
        assert_eq!(w.flip_half().flip_half(), w);
        assert_eq!(w.flip_half(), &MotivicWeight::v_pow(2) - &MotivicWeight::v_pow(3));
    }
}
