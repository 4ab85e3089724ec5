//! Finite-dimensional cyclic L-infinity algebras with bounded products.
//!
//! Products are stored by structure constants on sorted basis tuples. Graded
//! antisymmetry uses the unshifted Koszul rule: permuting the inputs of
//! `mu_k` multiplies by the sign of the permutation times the Koszul sign,
//! both computed by [`koszul_antisym_sign`]. The pairing `kappa` has degree
//! `-3` and `kappa(mu_k(a_1..a_k), a_{k+1})` is graded antisymmetric in all
//! `k + 1` slots under the same rule.
//!
//! The Chern-Simons function is normalized as
//! `f(z) = sum_k 1/(k+1)! kappa(mu_k(z..z), z)`, so that
//! `df/dz_i = kappa(Q(z), e_i)` with `Q(z) = sum_k 1/k! mu_k(z..z)`.

mod checks;
mod completion;
mod quiver_alg;

pub use checks::{check_completion_rules, AxiomReport, JacobiConfig, RotationSign};
pub use completion::cyclic_completion;
pub use quiver_alg::{completion_to_trace_vars, quiver_algebra};

use crate::poly::{reduce_mod, Monomial, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub type Q = BigRational;
pub type SparseVec = BTreeMap<u32, Q>;
type CsTerm = (usize, Vec<u32>, Q, u32);

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LInftyError {
    #[error("invalid structure constant: {0}")]
    Invalid(String),
    #[error("product arity {k} exceeds the bound k_max = {k_max}")]
    Unbounded { k: usize, k_max: usize },
    #[error("algebra has no cyclic pairing")]
    NoPairing,
    #[error("cyclic completion needs an algebra in degrees 0..2 without pairing")]
    NotCompletable,
    #[error("element is not Maurer-Cartan: curvature has {0} nonzero components")]
    NotMaurerCartan(usize),
    #[error("prime {p} must exceed k_max = {k_max}")]
    SmallPrime { p: u64, k_max: usize },
    #[error("element has {got} coordinates, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Quiver(#[from] crate::quiver::QuiverError),
}

/// Sign of rearranging `(x_0, ..., x_{n-1})` into `(x_{perm[0]}, ..., x_{perm[n-1]})`:
/// the permutation sign times the Koszul sign, i.e. every inverted pair of
/// elements of degrees `p`, `q` contributes `(-1)^(1 + p q)`.
pub fn koszul_antisym_sign(degrees: &[u8], perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && (degrees[perm[i]] as u32 * degrees[perm[j]] as u32).is_multiple_of(2) {
                sign = -sign;
            }
        }
    }
    sign
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub labels: Vec<String>,
    pub degrees: Vec<u8>,
    /// `(source node, target node)` for quiver-derived elements.
    pub bigrading: Vec<Option<(usize, usize)>>,
}

impl GradedBasis {
    pub fn new() -> Self {
        GradedBasis { labels: Vec::new(), degrees: Vec::new(), bigrading: Vec::new() }
    }

    pub fn push(&mut self, label: String, degree: u8, bigrading: Option<(usize, usize)>) -> u32 {
        self.labels.push(label);
        self.degrees.push(degree);
        self.bigrading.push(bigrading);
        (self.labels.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn degree(&self, i: u32) -> u8 {
        self.degrees[i as usize]
    }

    pub fn of_degree(&self, p: u8) -> Vec<u32> {
        (0..self.len() as u32).filter(|&i| self.degree(i) == p).collect()
    }
}

impl Default for GradedBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// Sorts a basis tuple, returning the sorted tuple and the sign relating
/// `mu(tuple) = sign * mu(sorted)`; `None` when the product vanishes by
/// antisymmetry (a repeated even element).
pub fn sort_with_sign(basis: &GradedBasis, tuple: &[u32]) -> Option<(Vec<u32>, i32)> {
    let mut perm: Vec<usize> = (0..tuple.len()).collect();
    perm.sort_by_key(|&i| tuple[i]);
    let sorted: Vec<u32> = perm.iter().map(|&i| tuple[i]).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && basis.degree(w[0]).is_multiple_of(2) {
            return None;
        }
    }
    let degrees: Vec<u8> = tuple.iter().map(|&b| basis.degree(b)).collect();
    Some((sorted, koszul_antisym_sign(&degrees, &perm)))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `prod_i m_i!` over the multiplicities of a sorted tuple.
fn multiplicity_factorial(sorted: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut run = 1;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            acc *= factorial(run);
            run = 1;
        }
    }
    acc
}

pub(crate) fn add_into(target: &mut SparseVec, key: u32, value: Q) {
    if value.is_zero() {
        return;
    }
    let e = target.entry(key).or_insert_with(Q::zero);
    *e += value;
    if e.is_zero() {
        target.remove(&key);
    }
}

#[derive(Clone, Debug)]
pub struct CyclicLInfty {
    pub basis: GradedBasis,
    /// `products[k]` holds the structure constants of `mu_k` on sorted tuples.
    products: Vec<HashMap<Vec<u32>, SparseVec>>,
    pairing: Option<BTreeMap<(u32, u32), Q>>,
    k_max: usize,
}

impl CyclicLInfty {
    pub fn new(basis: GradedBasis, k_max: usize) -> Self {
        CyclicLInfty { basis, products: vec![HashMap::new(); k_max + 1], pairing: None, k_max }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn has_pairing(&self) -> bool {
        self.pairing.is_some()
    }

    pub fn max_degree(&self) -> u8 {
        self.basis.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Adds `value * output` to `mu_k(tuple)`, with `k = tuple.len()`.
    pub fn add_product(&mut self, tuple: &[u32], output: u32, value: Q) -> Result<(), LInftyError> {
        let k = tuple.len();
        if k == 0 {
            return Err(LInftyError::Invalid("mu_0 is not supported".into()));
        }
        if k > self.k_max {
            return Err(LInftyError::Unbounded { k, k_max: self.k_max });
        }
        let in_deg: i32 = tuple.iter().map(|&b| self.basis.degree(b) as i32).sum();
        let out_deg = self.basis.degree(output) as i32;
        if out_deg != in_deg + 2 - k as i32 {
            return Err(LInftyError::Invalid(format!(
                "mu_{k}({}) -> {} has wrong degree",
                tuple.iter().map(|&b| self.basis.labels[b as usize].as_str()).collect::<Vec<_>>().join(", "),
                self.basis.labels[output as usize]
            )));
        }
        let Some((sorted, sign)) = sort_with_sign(&self.basis, tuple) else {
            return Err(LInftyError::Invalid("repeated even-degree input".into()));
        };
        let entry = self.products[k].entry(sorted.clone()).or_default();
        add_into(entry, output, value * Q::from_integer(sign.into()));
        if entry.is_empty() {
            self.products[k].remove(&sorted);
        }
        Ok(())
    }

    /// Structure constants of `mu_k` on sorted tuples.
    pub fn products(&self, k: usize) -> impl Iterator<Item = (&Vec<u32>, &SparseVec)> {
        self.products.get(k).into_iter().flat_map(|m| m.iter())
    }

    pub fn product_count(&self) -> usize {
        self.products.iter().map(HashMap::len).sum()
    }

    /// Largest `k` with a nonzero `mu_k`.
    pub fn top_arity(&self) -> usize {
        (1..self.products.len()).rev().find(|&k| !self.products[k].is_empty()).unwrap_or(0)
    }

    /// `mu_k` on basis elements in any order.
    pub fn mu_basis(&self, tuple: &[u32]) -> SparseVec {
        let k = tuple.len();
        if k == 0 || k >= self.products.len() {
            return SparseVec::new();
        }
        let Some((sorted, sign)) = sort_with_sign(&self.basis, tuple) else {
            return SparseVec::new();
        };
        match self.products[k].get(&sorted) {
            None => SparseVec::new(),
            Some(v) if sign == 1 => v.clone(),
            Some(v) => v.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }

    /// `mu_k(v, b_1, ..., b_{k-1})` for a vector `v` and basis elements `rest`.
    pub fn mu_vec_first(&self, v: &SparseVec, rest: &[u32]) -> SparseVec {
        let mut out = SparseVec::new();
        let mut tuple = Vec::with_capacity(rest.len() + 1);
        for (&c, coeff) in v {
            tuple.clear();
            tuple.push(c);
            tuple.extend_from_slice(rest);
            for (i, x) in self.mu_basis(&tuple) {
                add_into(&mut out, i, coeff * x);
            }
        }
        out
    }

    pub fn set_pairing(&mut self, entries: BTreeMap<(u32, u32), Q>) {
        self.pairing = Some(entries);
    }

    pub fn pairing_entries(&self) -> Option<&BTreeMap<(u32, u32), Q>> {
        self.pairing.as_ref()
    }

    pub fn kappa_basis(&self, a: u32, b: u32) -> Q {
        self.pairing.as_ref().and_then(|p| p.get(&(a, b)).cloned()).unwrap_or_else(Q::zero)
    }

    pub fn kappa(&self, v: &SparseVec, w: &SparseVec) -> Q {
        let mut acc = Q::zero();
        for (&a, x) in v {
            for (&b, y) in w {
                let k = self.kappa_basis(a, b);
                if !k.is_zero() {
                    acc += x * y * k;
                }
            }
        }
        acc
    }

    /// Nonzero pairing partners `(b, kappa(a, b))` of a basis element.
    pub fn partners(&self, a: u32) -> Vec<(u32, Q)> {
        match &self.pairing {
            None => Vec::new(),
            Some(p) => p.range((a, 0)..=(a, u32::MAX)).map(|(&(_, b), c)| (b, c.clone())).collect(),
        }
    }

    /// Basis indices of degree 1; coordinate `i` of a degree-one element refers to `degree_one()[i]`.
    pub fn degree_one(&self) -> Vec<u32> {
        self.basis.of_degree(1)
    }

    fn check_len(&self, x: &[Q]) -> Result<Vec<u32>, LInftyError> {
        let d1 = self.degree_one();
        if x.len() != d1.len() {
            return Err(LInftyError::Length { expected: d1.len(), got: x.len() });
        }
        Ok(d1)
    }

    /// Sorted tuples of degree-one inputs carrying a nonzero product, with `1/prod m_i!`.
    fn degree_one_terms(&self) -> Vec<(usize, &Vec<u32>, &SparseVec, Q)> {
        let mut out = Vec::new();
        for k in 1..self.products.len() {
            for (key, val) in &self.products[k] {
                if key.iter().all(|&b| self.basis.degree(b) == 1) {
                    out.push((k, key, val, Q::new(BigInt::one(), multiplicity_factorial(key))));
                }
            }
        }
        out
    }

    /// `Q(x) = sum_k 1/k! mu_k(x, ..., x)` for a degree-one element given by coordinates.
    pub fn curvature(&self, x: &[Q]) -> Result<SparseVec, LInftyError> {
        let d1 = self.check_len(x)?;
        let pos: HashMap<u32, usize> = d1.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut out = SparseVec::new();
        for (_, key, val, weight) in self.degree_one_terms() {
            let mut m = weight;
            for b in key {
                m *= &x[pos[b]];
                if m.is_zero() {
                    break;
                }
            }
            if m.is_zero() {
                continue;
            }
            for (&c, v) in val {
                add_into(&mut out, c, &m * v);
            }
        }
        Ok(out)
    }

    /// Curvature components as polynomials in the degree-one coordinates.
    pub fn curvature_symbolic(&self) -> BTreeMap<u32, Poly> {
        let d1 = self.degree_one();
        let pos: HashMap<u32, u32> = d1.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (_, key, val, weight) in self.degree_one_terms() {
            let vars: Vec<u32> = key.iter().map(|b| pos[b]).collect();
            let mono = Monomial::from_vars(&vars);
            for (&c, v) in val {
                out.entry(c).or_default().add_term(mono.clone(), &weight * v);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Curvature over `F_p`; requires `p > k_max` so that every `1/k!` exists.
    pub fn curvature_fp(&self, x: &[u64], p: u64) -> Result<BTreeMap<u32, u64>, LInftyError> {
        if p <= self.k_max as u64 {
            return Err(LInftyError::SmallPrime { p, k_max: self.k_max });
        }
        let d1 = self.degree_one();
        if x.len() != d1.len() {
            return Err(LInftyError::Length { expected: d1.len(), got: x.len() });
        }
        let pos: HashMap<u32, usize> = d1.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut out: BTreeMap<u32, u64> = BTreeMap::new();
        for (_, key, val, weight) in self.degree_one_terms() {
            let mut m = reduce_mod(&weight, p).expect("p > k_max");
            for b in key {
                m = (m as u128 * (x[pos[b]] % p) as u128 % p as u128) as u64;
            }
            if m == 0 {
                continue;
            }
            for (&c, v) in val {
                let v = reduce_mod(v, p).ok_or(LInftyError::SmallPrime { p, k_max: self.k_max })?;
                let e = out.entry(c).or_insert(0);
                *e = ((*e as u128 + m as u128 * v as u128) % p as u128) as u64;
            }
        }
        out.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// `delta^x(y) = mu_1(y) + sum_{k>=2} 1/(k-1)! mu_k(x, ..., x, y)` for a Maurer-Cartan `x`.
    pub fn twisted_differential(&self, x: &[Q], y: &SparseVec) -> Result<SparseVec, LInftyError> {
        let curv = self.curvature(x)?;
        if !curv.is_empty() {
            return Err(LInftyError::NotMaurerCartan(curv.len()));
        }
        Ok(self.twisted_differential_unchecked(x, y))
    }

    pub(crate) fn twisted_differential_unchecked(&self, x: &[Q], y: &SparseVec) -> SparseVec {
        let d1 = self.degree_one();
        let support: Vec<(u32, &Q)> = d1.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(&b, c)| (b, c)).collect();
        let mut out = SparseVec::new();
        for k in 1..self.products.len() {
            // multisets of size k-1 from the support, weighted by 1/prod m_i!
            let mut stack: Vec<(usize, Vec<u32>, Q)> = vec![(0, Vec::new(), Q::one())];
            let mut multisets = Vec::new();
            while let Some((start, acc, w)) = stack.pop() {
                if acc.len() == k - 1 {
                    multisets.push((acc, w));
                    continue;
                }
                for (i, (b, c)) in support.iter().enumerate().skip(start) {
                    let mut next = acc.clone();
                    next.push(*b);
                    let run = next.iter().filter(|&&e| e == *b).count();
                    let w2 = &w * *c / Q::from_integer(run.into());
                    stack.push((i, next, w2));
                }
            }
            for (ms, w) in multisets {
                for (&yb, yc) in y {
                    let mut tuple = ms.clone();
                    tuple.push(yb);
                    for (o, v) in self.mu_basis(&tuple) {
                        add_into(&mut out, o, &w * yc * v);
                    }
                }
            }
        }
        out
    }

    /// Per degree-one tuple: `(k, sorted inputs, sum_c mu_c kappa(c, e_j) for each coordinate j)`.
    fn cs_terms(&self) -> Result<Vec<CsTerm>, LInftyError> {
        if self.pairing.is_none() {
            return Err(LInftyError::NoPairing);
        }
        let d1 = self.degree_one();
        let pos: HashMap<u32, u32> = d1.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        let mut out = Vec::new();
        for (k, key, val, weight) in self.degree_one_terms() {
            let vars: Vec<u32> = key.iter().map(|b| pos[b]).collect();
            for (&c, v) in val {
                for (j, kap) in self.partners(c) {
                    if let Some(&jv) = pos.get(&j) {
                        let coeff = &weight * v * kap / Q::from_integer((k + 1).into());
                        out.push((k, vars.clone(), coeff, jv));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `f(z) = sum_k 1/(k+1)! kappa(mu_k(z, ..., z), z)` at a point.
    pub fn cs_function(&self, z: &[Q]) -> Result<Q, LInftyError> {
        self.check_len(z)?;
        let mut acc = Q::zero();
        for (_, vars, coeff, j) in self.cs_terms()? {
            let mut t = coeff * &z[j as usize];
            for v in vars {
                t *= &z[v as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// The CS function as a polynomial in the degree-one coordinates.
    pub fn cs_function_symbolic(&self) -> Result<Poly, LInftyError> {
        let mut f = Poly::zero();
        for (_, mut vars, coeff, j) in self.cs_terms()? {
            vars.push(j);
            f.add_term(Monomial::from_vars(&vars), coeff);
        }
        Ok(f)
    }

    /// Verifies `df/dz_i = kappa(Q(z), e_i)` for every degree-one coordinate.
    pub fn gradient_check(&self) -> Result<GradientReport, LInftyError> {
        let f = self.cs_function_symbolic()?;
        let q = self.curvature_symbolic();
        let d1 = self.degree_one();
        let mut failures = Vec::new();
        for (i, &e) in d1.iter().enumerate() {
            let mut rhs = Poly::zero();
            for (c, qc) in &q {
                let k = self.kappa_basis(*c, e);
                if !k.is_zero() {
                    rhs = &rhs + &qc.scale(&k);
                }
            }
            if f.derivative(i as u32) != rhs {
                failures.push(self.basis.labels[e as usize].clone());
            }
        }
        Ok(GradientReport { checked: d1.len(), failures })
    }

    /// JSON snapshot of basis, products and pairing.
    pub fn to_json(&self) -> serde_json::Value {
        let mut products: Vec<serde_json::Value> = Vec::new();
        for k in 1..self.products.len() {
            let mut keys: Vec<_> = self.products[k].iter().collect();
            keys.sort();
            for (key, val) in keys {
                products.push(serde_json::json!({
                    "k": k,
                    "inputs": key,
                    "output": val.iter().map(|(i, c)| serde_json::json!([i, c.to_string()])).collect::<Vec<_>>(),
                }));
            }
        }
        let pairing = self.pairing.as_ref().map(|p| {
            p.iter().map(|((a, b), c)| serde_json::json!([a, b, c.to_string()])).collect::<Vec<_>>()
        });
        serde_json::json!({
            "k_max": self.k_max,
            "basis": self.basis.labels.iter().zip(&self.basis.degrees)
                .map(|(l, d)| serde_json::json!({"label": l, "degree": d})).collect::<Vec<_>>(),
            "products": products,
            "pairing": pairing,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradientReport {
    pub checked: usize,
    /// Labels of degree-one coordinates where the identity fails.
    pub failures: Vec<String>,
}

impl GradientReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}
