//! JSON-compatible records and rendering of motivic weights.
//!
//! The record form writes the denominator as a product of `v^n` and quantum
//! factors `L^n - 1`. The internal cyclotomic denominator is regrouped
//! greedily: the largest index `m` opens a factor `L^m - 1`, and every
//! cyclotomic piece of it that the value does not actually carry is
//! multiplied into the numerator.

use super::{cyclotomic_in_v, divisors, LaurentPoly, MotiveError, MotivicWeight};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorFactor {
    /// `"v"` for `v^n`, `"Ln-1"` for `L^n - 1`.
    pub kind: String,
    pub n: u32,
}

/// Exact, order-normalized record of a [`MotivicWeight`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveRecord {
    /// `[v_exponent, coefficient]`, ascending in the exponent; coefficients are
    /// JSON integers when they fit in 64 bits and decimal strings otherwise.
    pub numerator: Vec<(i64, Value)>,
    pub denominator: Vec<DenominatorFactor>,
}

fn coeff_value(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(c.to_string()),
    }
}

fn parse_coeff(v: &Value) -> Result<BigInt, MotiveError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| MotiveError::Malformed(format!("non-integer coefficient {n}"))),
        Value::String(s) => s.parse().map_err(|_| MotiveError::Malformed(format!("bad coefficient {s:?}"))),
        other => Err(MotiveError::Malformed(format!("bad coefficient {other}"))),
    }
}

/// Numerator with nonnegative exponents, the `v`-power it was shifted by, and
/// the list of quantum factors `L^n - 1` in the denominator (descending `n`).
fn quantum_form(w: &MotivicWeight) -> (LaurentPoly, u32, Vec<u32>) {
    let mut remaining: BTreeMap<u32, u32> = w.den.clone();
    let mut num = w.num.clone();
    let mut quantum = Vec::new();
    while let Some((&m, _)) = remaining.iter().next_back() {
        for d in divisors(m) {
            match remaining.get_mut(&d) {
                Some(k) if *k > 0 => {
                    *k -= 1;
                    if *k == 0 {
                        remaining.remove(&d);
                    }
                }
                _ => num = &num * &cyclotomic_in_v(d),
            }
        }
        quantum.push(m);
    }
    let shift = if num.low() < 0 { (-num.low()) as u32 } else { 0 };
    (num.shift(shift as i64), shift, quantum)
}

impl From<&MotivicWeight> for MotiveRecord {
    fn from(w: &MotivicWeight) -> Self {
        let (num, vshift, quantum) = quantum_form(w);
        let mut denominator = Vec::new();
        if vshift > 0 {
            denominator.push(DenominatorFactor { kind: "v".into(), n: vshift });
        }
        let mut quantum = quantum;
        quantum.sort_unstable();
        denominator.extend(quantum.into_iter().map(|n| DenominatorFactor { kind: "Ln-1".into(), n }));
        MotiveRecord {
            numerator: num.terms().map(|(e, c)| (e, coeff_value(c))).collect(),
            denominator,
        }
    }
}

impl TryFrom<&MotiveRecord> for MotivicWeight {
    type Error = MotiveError;
    fn try_from(r: &MotiveRecord) -> Result<Self, MotiveError> {
        let mut num = LaurentPoly::zero();
        for (e, c) in &r.numerator {
            num = &num + &LaurentPoly::monomial(*e, parse_coeff(c)?);
        }
        let mut w = MotivicWeight::from_laurent(num);
        for f in &r.denominator {
            let factor = match f.kind.as_str() {
                "v" => MotivicWeight::v_pow(f.n as i64),
                "Ln-1" if f.n >= 1 => MotivicWeight::quantum(f.n),
                other => return Err(MotiveError::Malformed(format!("denominator factor {other}:{}", f.n))),
            };
            w = w.checked_div(&factor)?;
        }
        Ok(w)
    }
}

impl Serialize for MotivicWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MotiveRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MotivicWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MotiveRecord::deserialize(d)?;
        MotivicWeight::try_from(&r).map_err(serde::de::Error::custom)
    }
}

fn quantum_factors_text(quantum: &[u32], latex: bool) -> String {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &n in quantum {
        *counts.entry(n).or_insert(0) += 1;
    }
    let l = if latex { "\\mathbb{L}" } else { "L" };
    counts
        .iter()
        .map(|(&n, &k)| {
            let base = if n == 1 {
                format!("({l} - 1)")
            } else if latex {
                format!("({l}^{{{n}}} - 1)")
            } else {
                format!("({l}^{n} - 1)")
            };
            match (k, latex) {
                (1, _) => base,
                (_, true) => format!("{base}^{{{k}}}"),
                (_, false) => format!("{base}^{k}"),
            }
        })
        .collect::<Vec<_>>()
        .join(if latex { "" } else { "*" })
}

pub(super) fn display(w: &MotivicWeight, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if w.is_laurent() {
        return write!(f, "{}", w.num);
    }
    let (num, vshift, quantum) = quantum_form(w);
    let num = num.shift(-(vshift as i64));
    let single = num.terms().count() == 1;
    if single {
        write!(f, "{num}")?;
    } else {
        write!(f, "({num})")?;
    }
    let den = quantum_factors_text(&quantum, false);
    if den.contains(")*(") {
        write!(f, "/({den})")
    } else {
        write!(f, "/{den}")
    }
}

fn latex_l_power(exp: i64) -> String {
    if exp % 2 == 0 {
        match exp / 2 {
            0 => String::new(),
            1 => "\\mathbb{L}".into(),
            k => format!("\\mathbb{{L}}^{{{k}}}"),
        }
    } else {
        format!("\\mathbb{{L}}^{{{exp}/2}}")
    }
}

fn latex_laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let pw = latex_l_power(e);
        if pw.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&pw);
        } else {
            out.push_str(&format!("{abs}{pw}"));
        }
    }
    out
}

pub(super) fn latex(w: &MotivicWeight) -> String {
    if w.is_laurent() {
        return latex_laurent(&w.num);
    }
    let (num, vshift, quantum) = quantum_form(w);
    let num = num.shift(-(vshift as i64));
    format!("\\frac{{{}}}{{{}}}", latex_laurent(&num), quantum_factors_text(&quantum, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::{q_factorial, MotivicWeight};

    #[test]
    fn record_shape() {
        // (L + 1) / (L - 1) / v
        let w = (&MotivicWeight::lefschetz() + &MotivicWeight::one())
            .checked_div(&(&MotivicWeight::quantum(1) * &MotivicWeight::v_pow(1)))
            .unwrap();
        let r = MotiveRecord::from(&w);
        assert_eq!(r.numerator, vec![(0, Value::from(1)), (2, Value::from(1))]);
        assert_eq!(
            r.denominator,
            vec![
                DenominatorFactor { kind: "v".into(), n: 1 },
                DenominatorFactor { kind: "Ln-1".into(), n: 1 }
            ]
        );
        assert_eq!(MotivicWeight::try_from(&r).unwrap(), w);
    }

    #[test]
    fn regrouping_multiplies_missing_cyclotomics() {
        // 1/(L + 1) is written (L - 1)/(L^2 - 1)
        let w = MotivicWeight::one().checked_div(&(&MotivicWeight::lefschetz() + &MotivicWeight::one())).unwrap();
        let r = MotiveRecord::from(&w);
        assert_eq!(r.denominator, vec![DenominatorFactor { kind: "Ln-1".into(), n: 2 }]);
        assert_eq!(MotivicWeight::try_from(&r).unwrap(), w);
        assert_eq!(w.to_string(), "(L - 1)/(L^2 - 1)");
    }

    #[test]
    fn json_roundtrip_big_coefficients() {
        let w = q_factorial(30).inverse().unwrap() * MotivicWeight::from_bigint("123456789012345678901234567890".parse().unwrap());
        let s = serde_json::to_string(&w).unwrap();
        let back: MotivicWeight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn malformed_records_fail() {
        let r = MotiveRecord { numerator: vec![(0, Value::from(1))], denominator: vec![DenominatorFactor { kind: "x".into(), n: 1 }] };
        assert!(MotivicWeight::try_from(&r).is_err());
        let r = MotiveRecord { numerator: vec![(0, Value::from(1.5))], denominator: vec![] };
        assert!(MotivicWeight::try_from(&r).is_err());
    }
}
