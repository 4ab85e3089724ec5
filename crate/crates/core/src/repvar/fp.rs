//! Linear algebra over a prime field `F_p`.

use crate::poly::mod_inverse;

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|i| i * i <= q).all(|i| !q.is_multiple_of(i))
}

/// Subspace of `F_p^n` kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    p: u64,
    n: usize,
    /// Rows with a leading 1 at `pivots[i]`, zero in every other pivot column.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize, p: u64) -> Self {
        Echelon { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize, p: u64) -> Self {
        let mut e = Echelon::new(n, p);
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            e.insert(&v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inverse(v[pc], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for row in &mut self.rows {
            let f = row[pc];
            if f != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&c| c < pc);
        self.rows.insert(at, v);
        self.pivots.insert(at, pc);
        true
    }

    pub fn contains_space(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// All subspaces of `F_p^n`, one per reduced row echelon form.
pub fn all_subspaces(n: usize, p: u64) -> Vec<Echelon> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let pivots: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        // free entries: row i, column c > pivots[i], c not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let total = p.pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<Vec<u64>> = pivots
                .iter()
                .map(|&pc| {
                    let mut r = vec![0; n];
                    r[pc] = 1;
                    r
                })
                .collect();
            let mut k = code;
            for &(i, c) in &free {
                rows[i][c] = k % p;
                k /= p;
            }
            out.push(Echelon { p, n, rows, pivots: pivots.clone() });
        }
    }
    out
}

/// Rank of the homogeneous part and consistency of `A y = b`, given rows `[A | b]`.
/// Returns the rank when consistent.
pub fn solve_rank(rows: &mut [Vec<u64>], cols: usize, p: u64) -> Option<usize> {
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = mod_inverse(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|r| r[cols] == 0).then_some(rank)
}

/// `M v` for a row-major `rows x cols` matrix.
pub fn mat_vec(m: &[u64], rows: usize, cols: usize, v: &[u64], p: u64) -> Vec<u64> {
    (0..rows).map(|r| (0..cols).map(|c| m[r * cols + c] * v[c] % p).sum::<u64>() % p).collect()
}
