//! TOML quiver documents.
//!
//! ```toml
//! name = "c3"
//! k_max = 2
//! nodes = ["0"]
//! arrows = [{ name = "x", src = 0, tgt = 0 }, { name = "y", src = 0, tgt = 0 }]
//!
//! [[relations]]
//! name = "r"
//! dual = "z"                      # optional, defaults to "r*"
//! terms = [{ coeff = 1, path = ["x", "y"] }, { coeff = -1, path = ["y", "x"] }]
//!
//! [[higher_products]]             # optional extra relation terms
//! relation = "r"
//! inputs = ["x", "y"]
//! coeff = 1
//! ```
//!
//! `src`/`tgt` accept a node label or a 0-based node index. An optional
//! `potential = [{ coeff, path }]` list of closed words bypasses completion.

use super::{Arrow, Potential, PathPolynomial, Quiver, QuiverError, QuiverWithRelations, Relation};
use num_bigint::BigInt;
use serde::Deserialize;
use toml::Spanned;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    k_max: u32,
    nodes: Vec<String>,
    #[serde(default)]
    arrows: Vec<Spanned<RawArrow>>,
    #[serde(default)]
    relations: Vec<Spanned<RawRelation>>,
    #[serde(default)]
    higher_products: Vec<Spanned<RawHigher>>,
    #[serde(default)]
    potential: Option<Spanned<Vec<RawTerm>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeRef {
    Index(usize),
    Label(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    src: NodeRef,
    tgt: NodeRef,
}

fn one() -> i64 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(default = "one")]
    coeff: i64,
    path: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    name: String,
    #[serde(default)]
    dual: Option<String>,
    #[serde(default)]
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHigher {
    relation: String,
    inputs: Vec<String>,
    #[serde(default = "one")]
    coeff: i64,
}

/// Name, dual name, source line and `(coeff, word)` terms.
type ParsedRelation = (String, Option<String>, usize, Vec<(BigInt, Vec<usize>)>);

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn resolve_node(nodes: &[String], r: &NodeRef, line: usize) -> Result<usize, QuiverError> {
    let idx = match r {
        NodeRef::Index(i) => (*i < nodes.len()).then_some(*i),
        NodeRef::Label(s) => nodes.iter().position(|n| n == s),
    };
    idx.ok_or_else(|| QuiverError::Invalid {
        line,
        message: match r {
            NodeRef::Index(i) => format!("node index {i} out of range"),
            NodeRef::Label(s) => format!("unknown node {s:?}"),
        },
    })
}

fn resolve_word(q: &Quiver, names: &[String], relation: &str, line: usize) -> Result<Vec<usize>, QuiverError> {
    names
        .iter()
        .map(|n| {
            q.arrow_index(n).ok_or_else(|| QuiverError::Composability {
                relation: relation.into(),
                line,
                message: format!("unknown arrow {n:?}"),
            })
        })
        .collect()
}

/// Parses and validates a quiver document.
pub fn parse_quiver(text: &str) -> Result<QuiverWithRelations, QuiverError> {
    let doc: RawDoc = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        QuiverError::Parse { line, col, message: e.message().trim().to_string() }
    })?;
    let _ = doc.description;
    if doc.nodes.is_empty() {
        return Err(QuiverError::Invalid { line: 0, message: "quiver has no nodes".into() });
    }
    for (i, n) in doc.nodes.iter().enumerate() {
        if doc.nodes[..i].contains(n) {
            return Err(QuiverError::Invalid { line: 0, message: format!("duplicate node label {n:?}") });
        }
    }

    let mut quiver = Quiver { nodes: doc.nodes.clone(), arrows: Vec::new() };
    for a in &doc.arrows {
        let line = line_col(text, a.span().start).0;
        let raw = a.get_ref();
        if quiver.arrow_index(&raw.name).is_some() {
            return Err(QuiverError::Invalid { line, message: format!("duplicate arrow {:?}", raw.name) });
        }
        let src = resolve_node(&quiver.nodes, &raw.src, line)?;
        let tgt = resolve_node(&quiver.nodes, &raw.tgt, line)?;
        quiver.arrows.push(Arrow { name: raw.name.clone(), src, tgt });
    }

    let mut raw_terms: Vec<ParsedRelation> = Vec::new();
    for r in &doc.relations {
        let line = line_col(text, r.span().start).0;
        let raw = r.get_ref();
        let mut terms = Vec::new();
        for t in &raw.terms {
            terms.push((BigInt::from(t.coeff), resolve_word(&quiver, &t.path, &raw.name, line)?));
        }
        raw_terms.push((raw.name.clone(), raw.dual.clone(), line, terms));
    }
    for h in &doc.higher_products {
        let line = line_col(text, h.span().start).0;
        let raw = h.get_ref();
        let slot = raw_terms.iter_mut().find(|(n, ..)| *n == raw.relation).ok_or_else(|| QuiverError::Invalid {
            line,
            message: format!("higher product refers to unknown relation {:?}", raw.relation),
        })?;
        let word = resolve_word(&quiver, &raw.inputs, &raw.relation, line)?;
        slot.3.push((BigInt::from(raw.coeff), word));
    }

    let mut relations = Vec::new();
    for (name, dual, line, terms) in raw_terms {
        let poly = PathPolynomial::from_terms(&quiver, &terms)
            .map_err(|message| QuiverError::Composability { relation: name.clone(), line, message })?;
        if poly.is_zero() {
            return Err(QuiverError::Composability { relation: name, line, message: "relation is zero".into() });
        }
        let dual = dual.unwrap_or_else(|| format!("{name}*"));
        relations.push(Relation { name, poly, dual, line });
    }
    let name = doc.name.unwrap_or_else(|| "quiver".into());
    let mut qr = QuiverWithRelations::new(&name, quiver, relations, doc.k_max)?;

    if let Some(p) = &doc.potential {
        let line = line_col(text, p.span().start).0;
        let mut w = Potential::zero();
        for t in p.get_ref() {
            let word = resolve_word(&qr.quiver, &t.path, "potential", line)?;
            w.add_cycle(&qr.quiver, &word, BigInt::from(t.coeff))
                .map_err(|message| QuiverError::Invalid { line, message })?;
        }
        qr.potential = Some(w);
    }
    Ok(qr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_lines() {
        let err = parse_quiver("k_max = 2\nnodes = [\"0\"\narrows = []\n").unwrap_err();
        match err {
            QuiverError::Parse { line, .. } => assert!(line >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inhomogeneous_relation_is_named() {
        let doc = r#"
k_max = 2
nodes = ["0", "1", "2"]
arrows = [
  { name = "a", src = 0, tgt = 2 },
  { name = "b", src = 1, tgt = 2 },
]
[[relations]]
name = "bad"
terms = [{ coeff = 1, path = ["a"] }, { coeff = -1, path = ["b"] }]
"#;
        match parse_quiver(doc).unwrap_err() {
            QuiverError::Composability { relation, line, .. } => {
                assert_eq!(relation, "bad");
                assert_eq!(line, 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_composable_path_rejected() {
        let doc = r#"
k_max = 2
nodes = ["0", "1"]
arrows = [{ name = "a", src = "0", tgt = "1" }]
[[relations]]
name = "aa"
terms = [{ path = ["a", "a"] }]
"#;
        assert!(matches!(parse_quiver(doc), Err(QuiverError::Composability { .. })));
    }

    #[test]
    fn k_max_bound_enforced() {
        let doc = r#"
k_max = 2
nodes = ["0"]
arrows = [{ name = "x", src = 0, tgt = 0 }]
[[relations]]
name = "cube"
terms = [{ path = ["x", "x", "x"] }]
"#;
        assert!(matches!(parse_quiver(doc), Err(QuiverError::Invalid { .. })));
    }

    #[test]
    fn higher_products_merge_into_relations() {
        let doc = r#"
k_max = 3
nodes = ["0"]
arrows = [{ name = "x", src = 0, tgt = 0 }, { name = "y", src = 0, tgt = 0 }]
[[relations]]
name = "r"
terms = [{ path = ["x", "y"] }]
[[higher_products]]
relation = "r"
inputs = ["x", "x", "y"]
coeff = -2
"#;
        let qr = parse_quiver(doc).unwrap();
        assert_eq!(qr.relations[0].poly.render(&qr.quiver), "-2*x x y + x y");
        assert_eq!(qr.relations[0].dual, "r*");
    }
}
