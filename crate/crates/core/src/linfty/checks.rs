//! Verification of the algebraic axioms on basis tuples.

use super::{add_into, koszul_antisym_sign, CyclicLInfty, SparseVec, Q};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct JacobiConfig {
    /// Largest `n` for the `n`-Jacobi rule.
    pub max_n: usize,
    /// Random tuples per `n` when exhaustive enumeration is too large.
    pub samples: usize,
    /// Enumerate all sorted tuples when there are at most this many.
    pub exhaustive_limit: usize,
    pub seed: u64,
}

impl JacobiConfig {
    pub fn for_algebra(alg: &CyclicLInfty) -> Self {
        JacobiConfig { max_n: alg.k_max() + 2, samples: 400, exhaustive_limit: 4000, seed: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    fn new(name: &str) -> Self {
        AxiomReport { name: name.into(), checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// Which sign to use in the cyclic rotation identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationSign {
    /// Permutation sign times Koszul sign (total graded antisymmetry).
    Antisymmetric,
    /// Koszul sign only, `(-1)^{|a_1|(|a_2| + ... + |a_{k+1}|)}`.
    KoszulOnly,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All nondecreasing tuples of length `n` over `0..dim` without repeated even elements.
fn sorted_tuples(alg: &CyclicLInfty, n: usize) -> Vec<Vec<u32>> {
    let dim = alg.dim() as u32;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(alg: &CyclicLInfty, dim: u32, n: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in start..dim {
            if cur.last() == Some(&b) && alg.basis.degree(b).is_multiple_of(2) {
                continue;
            }
            cur.push(b);
            go(alg, dim, n, b, cur, out);
            cur.pop();
        }
    }
    go(alg, dim, n, 0, &mut cur, &mut out);
    out
}

impl CyclicLInfty {
    /// `sum_k (-1)^k sum_{unshuffles} eps mu_{n-k+1}(mu_k(x_I), x_J)` on basis elements.
    pub fn jacobi_expression(&self, xs: &[u32]) -> SparseVec {
        let n = xs.len();
        let degrees: Vec<u8> = xs.iter().map(|&b| self.basis.degree(b)).collect();
        let mut total = SparseVec::new();
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize;
            if n - k + 1 > self.k_max() {
                continue;
            }
            let inner: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let outer: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).collect();
            let first = self.mu_basis(&inner.iter().map(|&i| xs[i]).collect::<Vec<_>>());
            if first.is_empty() {
                continue;
            }
            let rest: Vec<u32> = outer.iter().map(|&i| xs[i]).collect();
            let perm: Vec<usize> = inner.iter().chain(&outer).copied().collect();
            let mut sign = koszul_antisym_sign(&degrees, &perm);
            if k % 2 == 1 {
                sign = -sign;
            }
            for (o, c) in self.mu_vec_first(&first, &rest) {
                add_into(&mut total, o, c * Q::from_integer(sign.into()));
            }
        }
        total
    }

    fn random_tuple(&self, rng: &mut ChaCha8Rng, n: usize, by_degree: &[Vec<u32>; 4]) -> Vec<u32> {
        (0..n)
            .map(|_| {
                let roll: f64 = rng.gen();
                let pool = if roll < 0.3 && !by_degree[0].is_empty() {
                    &by_degree[0]
                } else if roll < 0.85 && !by_degree[1].is_empty() {
                    &by_degree[1]
                } else {
                    let p = rng.gen_range(0..4);
                    if by_degree[p].is_empty() {
                        &by_degree[1]
                    } else {
                        &by_degree[p]
                    }
                };
                *pool.choose(rng).unwrap_or(&0)
            })
            .collect()
    }

    fn by_degree(&self) -> [Vec<u32>; 4] {
        [self.basis.of_degree(0), self.basis.of_degree(1), self.basis.of_degree(2), self.basis.of_degree(3)]
    }

    /// The `n`-Jacobi rule for `n <= cfg.max_n` on all or sampled basis tuples.
    pub fn check_jacobi(&self, cfg: &JacobiConfig) -> AxiomReport {
        let mut report = AxiomReport::new("n-Jacobi");
        if self.dim() == 0 {
            return report;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pools = self.by_degree();
        for n in 1..=cfg.max_n {
            let tuples = if binomial(self.dim() + n - 1, n) <= cfg.exhaustive_limit as f64 {
                sorted_tuples(self, n)
            } else {
                (0..cfg.samples).map(|_| self.random_tuple(&mut rng, n, &pools)).collect()
            };
            for t in tuples {
                report.checked += 1;
                let j = self.jacobi_expression(&t);
                if !j.is_empty() {
                    report.fail(format!("{n}-Jacobi fails on ({})", self.labels(&t)));
                }
            }
        }
        report
    }

    fn labels(&self, t: &[u32]) -> String {
        t.iter().map(|&b| self.basis.labels[b as usize].as_str()).collect::<Vec<_>>().join(", ")
    }

    /// `kappa(a, b) = (-1)^{|a||b|} kappa(b, a)` and degree `-3`.
    pub fn check_pairing_symmetry(&self) -> AxiomReport {
        let mut report = AxiomReport::new("pairing symmetry");
        let Some(p) = self.pairing_entries() else {
            report.fail("no pairing".into());
            return report;
        };
        for (&(a, b), c) in p {
            report.checked += 1;
            let (da, db) = (self.basis.degree(a) as u32, self.basis.degree(b) as u32);
            let sign = if (da * db).is_multiple_of(2) { c.clone() } else { -c.clone() };
            if self.kappa_basis(b, a) != sign {
                report.fail(format!("kappa({}, {}) not graded symmetric", self.labels(&[a]), self.labels(&[b])));
            }
            if da + db != 3 {
                report.fail(format!("kappa({}, {}) has degree {}", self.labels(&[a]), self.labels(&[b]), da + db));
            }
        }
        report
    }

    /// `kappa` is nondegenerate on the full graded space.
    pub fn check_nondegenerate(&self) -> AxiomReport {
        let mut report = AxiomReport::new("pairing nondegenerate");
        let n = self.dim();
        let Some(p) = self.pairing_entries() else {
            report.fail("no pairing".into());
            return report;
        };
        let mut rows: Vec<SparseVec> = vec![SparseVec::new(); n];
        for (&(a, b), c) in p {
            rows[a as usize].insert(b, c.clone());
        }
        // sparse Gaussian elimination over Q
        let mut pivots: Vec<(u32, SparseVec)> = Vec::new();
        let mut rank = 0;
        for mut row in rows {
            for (col, prow) in &pivots {
                if let Some(f) = row.get(col).cloned() {
                    let lead = prow[col].clone();
                    for (&j, v) in prow {
                        add_into(&mut row, j, -(&f * v / &lead));
                    }
                }
            }
            if let Some((&col, _)) = row.iter().next() {
                pivots.push((col, row));
                rank += 1;
            }
        }
        report.checked = n;
        if rank != n {
            report.fail(format!("pairing has rank {rank} on a space of dimension {n}"));
        }
        report
    }

    /// `T(a_1..a_{k+1}) = kappa(mu_k(a_1..a_k), a_{k+1})` on basis elements.
    pub fn cyclic_value(&self, t: &[u32]) -> Q {
        let (last, first) = t.split_last().expect("nonempty tuple");
        let out = self.mu_basis(first);
        let mut acc = Q::zero();
        for (c, v) in out {
            let k = self.kappa_basis(c, *last);
            if !k.is_zero() {
                acc += v * k;
            }
        }
        acc
    }

    /// The rotation identity `T(a_1..a_{k+1}) = sign T(a_2..a_{k+1}, a_1)` on
    /// every rotation of every tuple with a nonzero value.
    pub fn check_cyclic(&self, sign_rule: RotationSign) -> AxiomReport {
        let mut report = AxiomReport::new(match sign_rule {
            RotationSign::Antisymmetric => "cyclic rotation",
            RotationSign::KoszulOnly => "cyclic rotation (Koszul sign only)",
        });
        if !self.has_pairing() {
            report.fail("no pairing".into());
            return report;
        }
        for k in 1..=self.k_max() {
            let mut keys: Vec<_> = self.products(k).collect();
            keys.sort();
            for (key, val) in keys {
                for &c in val.keys() {
                    for (a, _) in self.partners(c) {
                        let mut t: Vec<u32> = key.clone();
                        t.push(a);
                        for _ in 0..=k {
                            report.checked += 1;
                            let degrees: Vec<u8> = t.iter().map(|&b| self.basis.degree(b)).collect();
                            let rotated: Vec<u32> = t[1..].iter().chain(&t[..1]).copied().collect();
                            let s = match sign_rule {
                                RotationSign::Antisymmetric => {
                                    let perm: Vec<usize> = (1..=k).chain(std::iter::once(0)).collect();
                                    koszul_antisym_sign(&degrees, &perm)
                                }
                                RotationSign::KoszulOnly => {
                                    let rest: u32 = degrees[1..].iter().map(|&d| d as u32).sum();
                                    if (degrees[0] as u32 * rest).is_multiple_of(2) {
                                        1
                                    } else {
                                        -1
                                    }
                                }
                            };
                            let lhs = self.cyclic_value(&t);
                            let rhs = self.cyclic_value(&rotated) * Q::from_integer(s.into());
                            if lhs != rhs {
                                report.fail(format!("k = {k}: ({}) gives {lhs} vs {rhs}", self.labels(&t)));
                            }
                            t = rotated;
                        }
                    }
                }
            }
        }
        report
    }
}

/// Rules for the completion `lbar` of `l`: products on `L`-inputs agree with
/// `l` (rule 2), vanish on two or more dual inputs (rule 3), and with one dual
/// input satisfy the adjunction formula (rule 4) with the antisymmetric
/// rotation sign. Outputs with one dual input must lie in the dual summand.
pub fn check_completion_rules(l: &CyclicLInfty, lbar: &CyclicLInfty, samples: usize, seed: u64) -> AxiomReport {
    let mut report = AxiomReport::new("completion rules");
    let n = l.dim() as u32;
    let is_dual = |b: u32| b >= n;
    for k in 1..=l.k_max() {
        for (key, val) in l.products(k) {
            report.checked += 1;
            if &lbar.mu_basis(key) != val {
                report.fail(format!("rule 2 fails on ({})", l.labels(key)));
            }
        }
        for (key, val) in lbar.products(k) {
            report.checked += 1;
            let duals = key.iter().filter(|&&b| is_dual(b)).count();
            match duals {
                0 => {
                    if &l.mu_basis(key) != val {
                        report.fail(format!("rule 2 fails on ({})", lbar.labels(key)));
                    }
                }
                1 => {
                    if val.keys().any(|&o| !is_dual(o)) {
                        report.fail(format!("output of ({}) leaves the dual summand", lbar.labels(key)));
                    }
                }
                _ => report.fail(format!("rule 3 fails on ({})", lbar.labels(key))),
            }
        }
    }

    // rule 4 on orderings of stored keys and on random tuples with one dual input
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for k in 1..=l.k_max() {
        for (key, _) in lbar.products(k) {
            if key.iter().filter(|&&b| is_dual(b)).count() == 1 {
                let mut t = key.clone();
                t.shuffle(&mut rng);
                tuples.push(t);
            }
        }
    }
    let l_basis: Vec<u32> = (0..n).collect();
    for _ in 0..samples {
        if n == 0 {
            break;
        }
        let k = rng.gen_range(1..=l.k_max());
        let mut t: Vec<u32> = (0..k).map(|_| *l_basis.choose(&mut rng).expect("nonempty")).collect();
        let i = rng.gen_range(0..k);
        t[i] += n;
        tuples.push(t);
    }
    tuples.sort();
    for t in tuples {
        let i = t.iter().position(|&b| is_dual(b)).expect("one dual");
        let k = t.len();
        for b in 0..n {
            report.checked += 1;
            // lhs = kappa(mu(a_1..a_i*..a_k), b)
            let mut lhs = Q::zero();
            for (o, v) in lbar.mu_basis(&t) {
                let kap = lbar.kappa_basis(o, b);
                if !kap.is_zero() {
                    lhs += v * kap;
                }
            }
            // rhs = sign kappa(mu_k(a_{i+1}..a_k, b, a_1..a_{i-1}), a_i*), evaluated in L
            let full: Vec<u32> = t.iter().copied().chain(std::iter::once(b)).collect();
            let degrees: Vec<u8> = full.iter().map(|&x| lbar.basis.degree(x)).collect();
            let perm: Vec<usize> = (i + 1..=k).chain(0..i).chain(std::iter::once(i)).collect();
            let sign = koszul_antisym_sign(&degrees, &perm);
            let inputs: Vec<u32> = perm[..k].iter().map(|&j| full[j]).collect();
            let target = t[i] - n;
            let rhs = l.mu_basis(&inputs).get(&target).cloned().unwrap_or_else(Q::zero) * Q::from_integer(sign.into());
            if lhs != rhs {
                report.fail(format!("rule 4 fails on ({}; {})", lbar.labels(&t), l.labels(&[b])));
            }
        }
    }
    report
}
