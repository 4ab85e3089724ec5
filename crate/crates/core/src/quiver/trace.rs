//! Trace formulas such as `tr((AB-BA)C)`: matrix names are an uppercase
//! letter followed by digits or primes, juxtaposition is matrix product and
//! `+`, `-` and integer coefficients combine products.

use super::{trace_expand, trace_expand_potential, CompletedQuiver, DimensionVector, Potential, Quiver, QuiverError, VarLayout};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Noncommutative polynomial in arrow indices.
type Words = BTreeMap<Vec<usize>, BigInt>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

fn err(col: usize, message: impl Into<String>) -> QuiverError {
    QuiverError::Parse { line: 1, col: col + 1, message: message.into() }
}

fn mul(a: &Words, b: &Words) -> Words {
    let mut out = Words::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let w = [wa.as_slice(), wb.as_slice()].concat();
            *out.entry(w).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), QuiverError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.pos, format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Words, QuiverError> {
        let mut out = Words::new();
        let mut sign = BigInt::one();
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            for (w, c) in self.product()? {
                *out.entry(w).or_insert_with(BigInt::zero) += &sign * c;
            }
            match self.peek() {
                Some('+') => sign = BigInt::one(),
                Some('-') => sign = -BigInt::one(),
                _ => break,
            }
            self.pos += 1;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    fn product(&mut self) -> Result<Words, QuiverError> {
        let mut acc: Words = [(Vec::new(), BigInt::one())].into();
        let start = self.pos;
        while let Some(c) = self.peek() {
            let factor = if c.is_ascii_digit() {
                let begin = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.chars[begin..self.pos].iter().collect::<String>().parse().expect("digits");
                [(Vec::new(), n)].into()
            } else if c.is_ascii_uppercase() {
                let begin = self.pos;
                self.pos += 1;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '\'') {
                    self.pos += 1;
                }
                let name: String = self.chars[begin..self.pos].iter().collect();
                let a = (self.resolve)(&name).ok_or_else(|| err(begin, format!("unknown matrix {name}")))?;
                [(vec![a], BigInt::one())].into()
            } else if c == '(' {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                inner
            } else {
                break;
            };
            acc = mul(&acc, &factor);
        }
        if self.pos == start {
            return Err(err(self.pos, "expected a product"));
        }
        Ok(acc)
    }
}

/// Parses `tr(...)` into a potential; `resolve` maps matrix names to arrows.
pub fn parse_trace_formula(text: &str, quiver: &Quiver, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<Potential, QuiverError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, resolve };
    for c in "tr".chars() {
        if p.peek() != Some(c) {
            return Err(err(p.pos, "expected tr("));
        }
        p.pos += 1;
    }
    p.expect('(')?;
    let words = p.expr()?;
    p.expect(')')?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    let mut w = Potential::zero();
    for (word, c) in words {
        w.add_cycle(quiver, &word, c).map_err(|m| err(0, m))?;
    }
    Ok(w)
}

/// Renders a potential as a trace of matrix products in arrow names.
pub fn render_trace(quiver: &Quiver, w: &Potential, latex: bool) -> String {
    let body = super::render_signed(w.terms(), |word| {
        let names = quiver.word_names(word);
        if latex {
            names.iter().map(|n| latex_name(n)).collect::<Vec<_>>().join(" ")
        } else {
            names.join(" ")
        }
    });
    if latex {
        format!("\\operatorname{{tr}}\\left({body}\\right)")
    } else {
        format!("tr({body})")
    }
}

fn latex_name(name: &str) -> String {
    let primes = name.chars().rev().take_while(|&c| c == '\'').count();
    let base = &name[..name.len() - primes];
    let split = base.find(|c: char| c.is_ascii_digit()).unwrap_or(base.len());
    let (head, digits) = base.split_at(split);
    let mut out = head.to_string();
    if !digits.is_empty() {
        out.push_str(&format!("_{{{digits}}}"));
    }
    out.push_str(&"'".repeat(primes));
    out
}

/// A stored trace formula: a matrix-to-arrow map (`identity` when matrix
/// names are arrow names), a dimension vector and the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceGolden {
    pub map: Option<BTreeMap<String, String>>,
    pub dim: DimensionVector,
    pub formula: String,
}

impl TraceGolden {
    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        let (mut map, mut dim, mut formula) = (None, None, None);
        for (i, line) in text.lines().enumerate() {
            let bad = |message: String| QuiverError::Invalid { line: i + 1, message };
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("map:") {
                let rest = rest.trim();
                map = Some(if rest == "identity" {
                    None
                } else {
                    let mut m = BTreeMap::new();
                    for pair in rest.split_whitespace() {
                        let (k, v) = pair.split_once('=').ok_or_else(|| bad(format!("bad map entry {pair}")))?;
                        m.insert(k.to_string(), v.to_string());
                    }
                    Some(m)
                });
            } else if let Some(rest) = line.strip_prefix("dim:") {
                let v: Result<Vec<u32>, _> = rest.trim().split(',').map(|x| x.trim().parse()).collect();
                dim = Some(DimensionVector(v.map_err(|e| bad(format!("bad dimension vector: {e}")))?));
            } else if !line.is_empty() {
                formula = Some(line.to_string());
            }
        }
        let missing = |what: &str| QuiverError::Invalid { line: 0, message: format!("missing {what}") };
        Ok(TraceGolden {
            map: map.ok_or_else(|| missing("map"))?,
            dim: dim.ok_or_else(|| missing("dim"))?,
            formula: formula.ok_or_else(|| missing("formula"))?,
        })
    }

    /// Potential of the formula on the completed quiver.
    pub fn potential(&self, cq: &CompletedQuiver) -> Result<Potential, QuiverError> {
        let resolve = |name: &str| match &self.map {
            None => cq.quiver.arrow_index(name),
            Some(m) => m.get(name).and_then(|a| cq.quiver.arrow_index(a)),
        };
        parse_trace_formula(&self.formula, &cq.quiver, &resolve)
    }

    /// Whether the formula and the CS function agree as polynomials at `dim`.
    pub fn matches(&self, cq: &CompletedQuiver) -> Result<bool, QuiverError> {
        let layout = VarLayout::new(&cq.quiver, &self.dim)?;
        let want = trace_expand_potential(&cq.quiver, &layout, &self.potential(cq)?);
        Ok(want == trace_expand(cq, &self.dim)?.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;

    fn loops(names: &[&str]) -> Quiver {
        Quiver {
            nodes: vec!["0".into()],
            arrows: names.iter().map(|n| Arrow { name: n.to_string(), src: 0, tgt: 0 }).collect(),
        }
    }

    #[test]
    fn commutator_expands_to_two_cycles() {
        let q = loops(&["A", "B", "C"]);
        let w = parse_trace_formula("tr((AB-BA)C)", &q, &|n| q.arrow_index(n)).unwrap();
        let terms: Vec<_> = w.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
        assert_eq!(terms, vec![(vec![0, 1, 2], BigInt::one()), (vec![0, 2, 1], -BigInt::one())]);
        assert_eq!(render_trace(&q, &w, false), "tr(A B C - A C B)");
    }

    #[test]
    fn coefficients_primes_and_errors() {
        let q = loops(&["A", "A'", "B12"]);
        let w = parse_trace_formula("tr(2A' B12 + - 0A)", &q, &|n| q.arrow_index(n));
        assert!(w.is_err());
        let w = parse_trace_formula("tr(2A'B12 - B12A')", &q, &|n| q.arrow_index(n)).unwrap();
        assert_eq!(w.terms().next().map(|(_, c)| c.clone()), Some(BigInt::one()));
        assert!(parse_trace_formula("tr(AX)", &q, &|n| q.arrow_index(n)).is_err());
        assert_eq!(latex_name("B12'"), "B_{12}'");
    }
}
