#![allow(dead_code)]

use qcs_core::quiver::{parse_quiver, DimensionVector, QuiverWithRelations};
use std::path::PathBuf;

pub const FIXTURES: [&str; 5] = ["c3", "p2", "p131", "p212", "dp1"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load(name: &str) -> QuiverWithRelations {
    let path = fixture_dir().join(format!("{name}.quiver"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_quiver(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn dim(v: &[u32]) -> DimensionVector {
    DimensionVector(v.to_vec())
}

pub fn ones(n: usize) -> DimensionVector {
    DimensionVector(vec![1; n])
}

/// Random quiver with 1..=3 nodes, 1..=4 arrows and up to 2 homogeneous
/// relations built from paths of length 2 or 3, plus a dimension vector of
/// total at most 3 with every entry positive.
pub fn random_quiver(seed: u64) -> (QuiverWithRelations, DimensionVector) {
    use num_bigint::BigInt;
    use qcs_core::quiver::{Arrow, PathPolynomial, Quiver, Relation};
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(1..=3usize);
        let arrows: Vec<Arrow> = (0..rng.gen_range(1..=4))
            .map(|i| Arrow { name: format!("a{i}"), src: rng.gen_range(0..n), tgt: rng.gen_range(0..n) })
            .collect();
        let quiver = Quiver { nodes: (0..n).map(|i| i.to_string()).collect(), arrows };
        let mut words: Vec<Vec<usize>> = Vec::new();
        let m = quiver.arrows.len();
        for len in 2..=3usize {
            for code in 0..m.pow(len as u32) {
                let w: Vec<usize> = (0..len).map(|i| code / m.pow(i as u32) % m).collect();
                if quiver.word_endpoints(&w).is_ok() {
                    words.push(w);
                }
            }
        }
        if words.is_empty() {
            continue;
        }
        let mut relations = Vec::new();
        for r in 0..rng.gen_range(1..=2) {
            let first = words[rng.gen_range(0..words.len())].clone();
            let (s, t) = quiver.word_endpoints(&first).unwrap();
            let same: Vec<&Vec<usize>> =
                words.iter().filter(|w| quiver.word_endpoints(w).unwrap() == (s, t)).collect();
            let mut terms = vec![(BigInt::from(rng.gen_range(1..=2)), first)];
            let other = same[rng.gen_range(0..same.len())].clone();
            if other != terms[0].1 {
                terms.push((BigInt::from(-rng.gen_range(1..=2)), other));
            }
            let poly = PathPolynomial::from_terms(&quiver, &terms).unwrap();
            relations.push(Relation { name: format!("r{r}"), poly, dual: format!("r{r}*"), line: 0 });
        }
        let qr = QuiverWithRelations::new("random", quiver, relations, 3).unwrap();
        let mut d = vec![1u32; n];
        for _ in 0..rng.gen_range(0..=(3 - n)) {
            d[rng.gen_range(0..n)] += 1;
        }
        return (qr, DimensionVector(d));
    }
}
