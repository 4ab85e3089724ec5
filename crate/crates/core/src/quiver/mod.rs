//! Quivers with relations and potentials, quiver-level cyclic completion and
//! expansion of potentials into trace polynomials.
//!
//! Words are stored in written order: the word `w[0] w[1] ... w[k-1]` applies
//! `w[k-1]` first, so it corresponds to the matrix product
//! `M(w[0]) M(w[1]) ... M(w[k-1])`.

mod expand;
mod parse;
mod trace;

pub use expand::{path_matrix, trace_expand, trace_expand_potential, CsFunction, VarLayout};
pub use parse::parse_quiver;
pub use trace::{parse_trace_formula, render_trace, TraceGolden};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("relation {relation} (line {line}): {message}")]
    Composability { relation: String, line: usize, message: String },
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("dimension vector has {got} entries, quiver has {expected} nodes")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub nodes: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    /// Source and target of a word, or a description of the first break.
    pub fn word_endpoints(&self, word: &[usize]) -> Result<(usize, usize), String> {
        let (first, last) = match (word.first(), word.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err("empty word".into()),
        };
        for pair in word.windows(2) {
            let (outer, inner) = (&self.arrows[pair[0]], &self.arrows[pair[1]]);
            if inner.tgt != outer.src {
                return Err(format!(
                    "{} ends at node {} but {} starts at node {}",
                    inner.name, self.nodes[inner.tgt], outer.name, self.nodes[outer.src]
                ));
            }
        }
        Ok((self.arrows[last].src, self.arrows[first].tgt))
    }

    pub fn word_names(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&i| self.arrows[i].name.clone()).collect()
    }

    pub fn check_dim(&self, d: &DimensionVector) -> Result<(), QuiverError> {
        if d.len() != self.node_count() {
            return Err(QuiverError::DimensionMismatch { expected: self.node_count(), got: d.len() });
        }
        Ok(())
    }
}

/// Nonnegative integer per node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<u32>);

impl DimensionVector {
    pub fn zero(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimensionVector(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        DimensionVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; caller guarantees `other <= self`.
    pub fn sub(&self, other: &Self) -> Self {
        DimensionVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// All `e` with `0 <= e <= self` componentwise, in lexicographic order.
    pub fn below(&self) -> Vec<DimensionVector> {
        let mut out = vec![Vec::new()];
        for &di in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=di).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(DimensionVector).collect()
    }

    /// All dimension vectors with `n` entries and total degree at most `max_total`,
    /// ordered by total degree, then lexicographically.
    pub fn all_up_to(n: usize, max_total: u32) -> Vec<DimensionVector> {
        let mut out = DimensionVector(vec![max_total; n]).below();
        out.retain(|d| d.total() <= max_total);
        out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        out
    }
}

impl std::ops::Deref for DimensionVector {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for DimensionVector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        t.split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad dimension vector {s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(DimensionVector)
    }
}

/// Integer combination of paths sharing one source and one target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathPolynomial {
    pub src: usize,
    pub tgt: usize,
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl PathPolynomial {
    pub fn new(src: usize, tgt: usize) -> Self {
        PathPolynomial { src, tgt, terms: BTreeMap::new() }
    }

    /// Builds a polynomial from signed words, checking composability and homogeneity.
    pub fn from_terms(q: &Quiver, terms: &[(BigInt, Vec<usize>)]) -> Result<Self, String> {
        let mut ends = None;
        let mut out: Option<PathPolynomial> = None;
        for (c, w) in terms {
            let e = q.word_endpoints(w)?;
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(format!(
                        "inhomogeneous: path {} runs {}->{} but an earlier path runs {}->{}",
                        q.word_names(w).join(" "),
                        q.nodes[e.0],
                        q.nodes[e.1],
                        q.nodes[prev.0],
                        q.nodes[prev.1]
                    ))
                }
                _ => {}
            }
            out.get_or_insert_with(|| PathPolynomial::new(e.0, e.1)).add_term(w.clone(), c.clone());
        }
        out.ok_or_else(|| "no terms".into())
    }

    pub fn add_term(&mut self, word: Vec<usize>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn render(&self, q: &Quiver) -> String {
        render_signed(self.terms.iter(), |w| q.word_names(w).join(" "))
    }
}

pub(crate) fn render_signed<'a>(terms: impl Iterator<Item = (&'a Vec<usize>, &'a BigInt)>, word: impl Fn(&[usize]) -> String) -> String {
    let mut out = String::new();
    for (i, (w, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&word(w));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Smallest rotation of a cyclic word.
pub fn canonical_rotation(word: &[usize]) -> Vec<usize> {
    (0..word.len()).map(|r| [&word[r..], &word[..r]].concat()).min().unwrap_or_default()
}

/// Integer combination of closed paths modulo rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Potential {
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    pub fn add_cycle(&mut self, q: &Quiver, word: &[usize], c: BigInt) -> Result<(), String> {
        let (s, t) = q.word_endpoints(word)?;
        if s != t {
            return Err(format!("word {} is not closed", q.word_names(word).join(" ")));
        }
        if c.is_zero() {
            return Ok(());
        }
        let key = canonical_rotation(word);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, q: &Quiver) -> String {
        render_signed(self.terms.iter(), |w| q.word_names(w).join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub poly: PathPolynomial,
    /// Name of the arrow added for this relation by cyclic completion.
    pub dual: String,
    /// Line of the relation in its source document, 0 when built in code.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithRelations {
    pub name: String,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub k_max: u32,
    /// Explicit potential over the arrows of `quiver`, bypassing completion.
    pub potential: Option<Potential>,
}

impl QuiverWithRelations {
    /// Validates relation shapes and the product-degree bound.
    pub fn new(name: &str, quiver: Quiver, relations: Vec<Relation>, k_max: u32) -> Result<Self, QuiverError> {
        if k_max < 2 {
            return Err(QuiverError::Other(format!("k_max must be at least 2, got {k_max}")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for r in &relations {
            if !seen.insert(r.name.clone()) {
                return Err(QuiverError::Invalid { line: r.line, message: format!("duplicate relation {}", r.name) });
            }
            if r.poly.max_len() > k_max as usize {
                return Err(QuiverError::Invalid {
                    line: r.line,
                    message: format!("relation {} has a path of length {} > k_max = {k_max}", r.name, r.poly.max_len()),
                });
            }
            if quiver.arrow_index(&r.dual).is_some() {
                return Err(QuiverError::Invalid {
                    line: r.line,
                    message: format!("dual arrow name {} of relation {} collides with an arrow", r.dual, r.name),
                });
            }
        }
        Ok(QuiverWithRelations { name: name.into(), quiver, relations, k_max, potential: None })
    }

    /// Largest path length among relation terms.
    pub fn max_relation_length(&self) -> usize {
        self.relations.iter().map(|r| r.poly.max_len()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletedQuiver {
    pub name: String,
    pub quiver: Quiver,
    pub potential: Potential,
    /// Relation name paired with the index of its dual arrow in `quiver`.
    pub dual_arrow_map: Vec<(String, usize)>,
    /// Arrows with index below this come from the original quiver.
    pub base_arrows: usize,
}

impl CompletedQuiver {
    pub fn is_dual_arrow(&self, a: usize) -> bool {
        a >= self.base_arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.quiver.arrow_index(name)
    }

    /// `sum over occurrences of arrow a` of the word following the occurrence cyclically.
    pub fn cyclic_derivative(&self, arrow: &str) -> Result<PathPolynomial, QuiverError> {
        let a = self.arrow_index(arrow).ok_or_else(|| QuiverError::UnknownArrow(arrow.into()))?;
        Ok(cyclic_derivative(&self.quiver, &self.potential, a))
    }
}

/// Cyclic derivative of `w` with respect to arrow index `a`; runs from `tgt(a)` to `src(a)`.
pub fn cyclic_derivative(q: &Quiver, w: &Potential, a: usize) -> PathPolynomial {
    let arrow = &q.arrows[a];
    let mut out = PathPolynomial::new(arrow.tgt, arrow.src);
    for (word, c) in w.terms() {
        for (i, &x) in word.iter().enumerate() {
            if x == a {
                let rotated: Vec<usize> = word[i + 1..].iter().chain(&word[..i]).copied().collect();
                if rotated.is_empty() {
                    continue;
                }
                out.add_term(rotated, c.clone());
            }
        }
    }
    out
}

/// Adds one reversed arrow per relation and forms `W = sum_r r* r`.
/// When the input carries an explicit potential it is used unchanged.
pub fn cyclic_completion(qr: &QuiverWithRelations) -> CompletedQuiver {
    let mut quiver = qr.quiver.clone();
    let base_arrows = quiver.arrows.len();
    if let Some(w) = &qr.potential {
        return CompletedQuiver {
            name: qr.name.clone(),
            quiver,
            potential: w.clone(),
            dual_arrow_map: Vec::new(),
            base_arrows,
        };
    }
    let mut dual_arrow_map = Vec::new();
    for r in &qr.relations {
        quiver.arrows.push(Arrow { name: r.dual.clone(), src: r.poly.tgt, tgt: r.poly.src });
        dual_arrow_map.push((r.name.clone(), quiver.arrows.len() - 1));
    }
    let mut potential = Potential::zero();
    for (r, (_, dual)) in qr.relations.iter().zip(&dual_arrow_map) {
        for (word, c) in r.poly.terms() {
            let mut cyc = vec![*dual];
            cyc.extend_from_slice(word);
            potential.add_cycle(&quiver, &cyc, c.clone()).expect("r* r is a closed path");
        }
    }
    CompletedQuiver { name: qr.name.clone(), quiver, potential, dual_arrow_map, base_arrows }
}
