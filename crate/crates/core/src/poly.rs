//! Sparse commutative polynomials with rational coefficients over indexed
//! variables, plus a compiled form for fast evaluation over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

pub type Var = u32;

/// Exponent vector stored sparsely, sorted by variable, all exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_vars(vars: &[Var]) -> Self {
        let mut m = Monomial::one();
        for &v in vars {
            m = m.mul(&Monomial::var(v));
        }
        m
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < rhs.0.len() {
            match (self.0.get(i), rhs.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// Variables with multiplicity, ascending.
    pub fn flat_vars(&self) -> Vec<Var> {
        self.0.iter().flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize)).collect()
    }
}

/// Polynomial in indexed variables with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Largest total degree in the given set of variables over all monomials.
    pub fn degree_in_set(&self, vars: &dyn Fn(Var) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| m.factors().iter().filter(|(v, _)| vars(*v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.factors().iter().map(|(v, _)| *v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e == 0 {
                continue;
            }
            let factors = m
                .factors()
                .iter()
                .filter_map(|&(w, k)| if w == v { (k > 1).then_some((w, k - 1)) } else { Some((w, k)) })
                .collect();
            out.add_term(Monomial(factors), c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Replaces every variable `v` for which `factor(v)` is `Some(c)` by `c * v`.
    pub fn scale_vars(&self, factor: &dyn Fn(Var) -> Option<BigRational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut k = c.clone();
            for &(v, e) in m.factors() {
                if let Some(f) = factor(v) {
                    k *= num_traits::pow(f, e as usize);
                }
            }
            out.add_term(m.clone(), k);
        }
        out
    }

    /// Renames variables through `map`; the map must be injective on the variables used.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut mono = Monomial::one();
            for &(v, e) in m.factors() {
                for _ in 0..e {
                    mono = mono.mul(&Monomial::var(map(v)));
                }
            }
            out.add_term(mono, c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t *= num_traits::pow(point[v as usize].clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn compile(&self, p: u64) -> Result<CompiledPoly, PolyError> {
        CompiledPoly::new(self, p)
    }

    /// Canonical text: terms in descending monomial order, variables named by `names`.
    pub fn render(&self, names: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| if e == 1 { names(v) } else { format!("{}^{}", names(v), e) })
                .collect();
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                let _ = write!(out, "{abs}*{}", mono.join("*"));
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient denominator divisible by p = {0}")]
    BadDenominator(u64),
}

/// A polynomial reduced modulo a prime `p`, laid out for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    p: u64,
    terms: Vec<(u64, Vec<Var>)>,
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(p as i128) as u64
}

pub(crate) fn reduce_mod(c: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = c.numer().mod_floor(&pb).to_u64()?;
    let d = c.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some((n as u128 * mod_inverse(d, p) as u128 % p as u128) as u64)
}

impl CompiledPoly {
    pub fn new(poly: &Poly, p: u64) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (m, c) in poly.terms() {
            let k = reduce_mod(c, p).ok_or(PolyError::BadDenominator(p))?;
            if k != 0 {
                terms.push((k, m.flat_vars()));
            }
        }
        Ok(CompiledPoly { p, terms })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &v in vars {
                t = t * point[v as usize] % p;
                if t == 0 {
                    break;
                }
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.iter().flat_map(|(_, v)| v.iter().copied()).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_and_derivative() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let f = &(&x * &x) * &y; // x^2 y
        assert_eq!(f.derivative(0), (&x * &y).scale(&q(2)));
        assert_eq!(f.derivative(1), &x * &x);
        assert!((&f - &f).is_zero());
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.degree_in(0), 2);
    }

    #[test]
    fn compiled_matches_rational_eval() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let f = &(&(&x * &y).scale(&q(3)) - &y) + &Poly::constant(BigRational::new(1.into(), 2.into()));
        let c = f.compile(7).unwrap();
        for a in 0..7u64 {
            for b in 0..7u64 {
                let exact = f.eval(&[q(a as i64), q(b as i64)]);
                assert_eq!(reduce_mod(&exact, 7).unwrap(), c.eval(&[a, b]));
            }
        }
        assert!(f.compile(2).is_err());
    }

    #[test]
    fn render_is_canonical() {
        let names = |v: Var| ["a", "b"][v as usize].to_string();
        let f = &Poly::var(0) - &(&Poly::var(1) * &Poly::var(1));
        assert_eq!(f.render(&names), "-b^2 + a");
    }
}
