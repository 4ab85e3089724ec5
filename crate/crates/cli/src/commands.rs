use crate::config::{Format, RunConfig, TwistKind};
use anyhow::{bail, Result};
use clap::ValueEnum;
use qcs_core::dtseries::{
    c_series, dimension_reduction_check, hilb_series_closed, hilb_series_recursive, hn_partition_check, ordered_product,
    ss_series_factorize, MotivicSeries, Twist,
};
use qcs_core::linfty::{check_completion_rules, cyclic_completion as complete_algebra, quiver_algebra, AxiomReport, JacobiConfig, RotationSign};
use qcs_core::quiver::{cyclic_completion, render_trace, trace_expand, DimensionVector};
use qcs_core::repvar::{
    compare_loci, count_critical, count_framed_all, count_hn_strata, count_level_set, count_mc, count_relation_locus,
    cyclic_derivative_polys, gradient_polys, Count, CountReport, Locus,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

/// Rendered output and whether every checked identity held.
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, passed: true }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

#[derive(Serialize)]
struct Check {
    name: String,
    checked: usize,
    failures: Vec<String>,
}

impl From<AxiomReport> for Check {
    fn from(r: AxiomReport) -> Self {
        Check { name: r.name, checked: r.checked, failures: r.failures }
    }
}

pub fn validate(cfg: &RunConfig) -> Result<Outcome> {
    let qr = cfg.quiver()?;
    let dims = if cfg.dims.is_empty() { vec![DimensionVector(vec![1; qr.quiver.node_count()])] } else { cfg.dims(&qr)? };
    let mut checks = Vec::new();
    for d in &dims {
        let l = quiver_algebra(&qr, d, true)?;
        let lbar = complete_algebra(&l)?;
        let tag = |r: AxiomReport, what: &str| {
            let mut c = Check::from(r);
            c.name = format!("{} ({what}, d = {d})", c.name);
            c
        };
        checks.push(tag(l.check_jacobi(&JacobiConfig::for_algebra(&l)), "L"));
        checks.push(tag(lbar.check_jacobi(&JacobiConfig::for_algebra(&lbar)), "completion"));
        checks.push(tag(lbar.check_pairing_symmetry(), "completion"));
        checks.push(tag(lbar.check_nondegenerate(), "completion"));
        checks.push(tag(lbar.check_cyclic(RotationSign::Antisymmetric), "completion"));
        checks.push(tag(check_completion_rules(&l, &lbar, 200, 1), "completion"));
        let g = lbar.gradient_check()?;
        checks.push(Check { name: format!("gradient (completion, d = {d})"), checked: g.checked, failures: g.failures });
    }
    let passed = checks.iter().all(|c| c.failures.is_empty());
    let max_len = qr.max_relation_length();
    let report = json!({
        "quiver": qr.name,
        "nodes": qr.quiver.node_count(),
        "arrows": qr.quiver.arrows.len(),
        "relations": qr.relations.iter().map(|r| &r.name).collect::<Vec<_>>(),
        "k_max": qr.k_max,
        "max_relation_length": max_len,
        "higher_products": max_len > 2,
        "checks": checks,
        "ok": passed,
    });
    let output = match cfg.format {
        Format::Json => to_json(&report),
        _ => {
            let mut s = format!(
                "{}: {} nodes, {} arrows, {} relations, k_max {}\n",
                qr.name,
                qr.quiver.node_count(),
                qr.quiver.arrows.len(),
                qr.relations.len(),
                qr.k_max
            );
            if max_len > 2 {
                let _ = writeln!(s, "relation of length {max_len} present: products mu_k with k > 2 occur");
            }
            for c in &checks {
                let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{status} {} ({} checked)", c.name, c.checked);
                for f in &c.failures {
                    let _ = writeln!(s, "  {f}");
                }
            }
            let _ = write!(s, "{}", if passed { "ok" } else { "failed" });
            s
        }
    };
    Ok(Outcome { output, passed })
}

pub fn cs_function(cfg: &RunConfig) -> Result<Outcome> {
    let qr = cfg.quiver()?;
    let cq = cyclic_completion(&qr);
    let mut parts = Vec::new();
    let mut json_out = Vec::new();
    for d in cfg.dims(&qr)? {
        let f = trace_expand(&cq, &d)?;
        match cfg.format {
            Format::Text => parts.push(f.render()),
            Format::Latex => parts.push(format!("{} \\quad (d = {d})", render_trace(&cq.quiver, &cq.potential, true))),
            Format::Json => json_out.push(json!({
                "quiver": qr.name,
                "d": d,
                "variables": f.layout.names(),
                "dual": f.dual,
                "potential": render_trace(&cq.quiver, &cq.potential, false),
                "polynomial": f.render(),
            })),
        }
    }
    Ok(Outcome::ok(if cfg.format == Format::Json { to_json(&json_out) } else { parts.join("\n") }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    /// Representations of the quiver satisfying the relations.
    Relations,
    /// Representations of the completed quiver with all cyclic derivatives zero.
    Mc,
    /// Zeros of the gradient of the CS function.
    Critical,
    /// The level set f = 0.
    Level0,
    /// The level set f = 1.
    Level1,
    /// Framed points by the dimension of the generated subrepresentation.
    Framed,
    /// Representations of the completed quiver by HN type.
    Hn,
}

impl CountKind {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Serialize)]
struct Breakdown {
    quiver: String,
    d: DimensionVector,
    q: u64,
    kind: String,
    counts: BTreeMap<String, u128>,
    elapsed: f64,
}

pub fn count(cfg: &RunConfig, kind: CountKind) -> Result<Outcome> {
    let qr = cfg.quiver()?;
    let cq = cyclic_completion(&qr);
    let primes = cfg.primes_or(&[2]);
    let mut scalar = Vec::new();
    let mut broken = Vec::new();
    for d in cfg.dims(&qr)? {
        for &q in &primes {
            let start = Instant::now();
            let simple = |c: Count| CountReport {
                quiver: qr.name.clone(),
                d: d.clone(),
                q,
                kind: kind.name(),
                value: c.value,
                elapsed: start.elapsed().as_secs_f64(),
                partitions: c.partitions,
            };
            let breakdown = |counts: BTreeMap<String, u128>| Breakdown {
                quiver: qr.name.clone(),
                d: d.clone(),
                q,
                kind: kind.name(),
                counts,
                elapsed: start.elapsed().as_secs_f64(),
            };
            match kind {
                CountKind::Relations => scalar.push(simple(count_relation_locus(&qr, &d, q, cfg.budget)?)),
                CountKind::Mc => scalar.push(simple(count_mc(&cq, &d, q, cfg.budget)?)),
                CountKind::Critical => scalar.push(simple(count_critical(&cq, &d, q, cfg.budget)?)),
                CountKind::Level0 => scalar.push(simple(count_level_set(&cq, &d, q, 0, cfg.budget)?)),
                CountKind::Level1 => scalar.push(simple(count_level_set(&cq, &d, q, 1, cfg.budget)?)),
                CountKind::Framed => {
                    let mut counts = BTreeMap::new();
                    for (level, tag) in [(0, "Y"), (1, "Z")] {
                        for (dp, n) in count_framed_all(&cq, &d, q, level, cfg.budget)? {
                            counts.insert(format!("{tag} {dp}"), n);
                        }
                    }
                    broken.push(breakdown(counts));
                }
                CountKind::Hn => {
                    let z = cfg.charge(qr.quiver.node_count())?;
                    let strata = count_hn_strata(&cq, &d, q, &z, Locus::All, cfg.budget)?;
                    broken.push(breakdown(strata.into_iter().map(|(t, n)| (t.to_string(), n)).collect()));
                }
            }
        }
    }
    let output = match cfg.format {
        Format::Json if broken.is_empty() => to_json(&scalar),
        Format::Json => to_json(&broken),
        _ => {
            let mut s = String::new();
            for r in &scalar {
                let _ = writeln!(s, "{} {} d = {} q = {}: {}", r.quiver, r.kind, r.d, r.q, r.value);
            }
            for b in &broken {
                let _ = writeln!(s, "{} {} d = {} q = {}:", b.quiver, b.kind, b.d, b.q);
                for (k, n) in &b.counts {
                    let _ = writeln!(s, "  {k}: {n}");
                }
            }
            s.trim_end().to_string()
        }
    };
    Ok(Outcome::ok(output))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Generating series C(t) of representations with relations.
    C,
    /// C(L^{1/2} t) / C(L^{-1/2} t).
    HilbClosed,
    /// Virtual motives of noncommutative Hilbert schemes from the framed recursion.
    HilbRecursive,
    /// Semistable series, one per ray of the central charge.
    Semistable,
}

fn render_series(s: &MotivicSeries, format: Format, label: &str) -> Value {
    match format {
        Format::Json => s.to_json(),
        Format::Text => {
            let mut out = format!("{label}\n");
            for (d, c) in s.iter() {
                let _ = writeln!(out, "  {d}\t{c}");
            }
            Value::String(out.trim_end().to_string())
        }
        Format::Latex => {
            let terms: Vec<String> = s
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| {
                    let mono: String =
                        d.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| format!("t_{{{i}}}^{{{k}}}")).collect();
                    format!("\\left({}\\right){mono}", c.to_latex())
                })
                .collect();
            Value::String(format!("{label} = {}", terms.join(" + ")))
        }
    }
}

pub fn series(cfg: &RunConfig, kind: SeriesKind) -> Result<Outcome> {
    let qr = cfg.quiver()?;
    let src = cfg.motive_source(&qr)?;
    let euler = cfg.euler_form(&qr);
    let n = cfg.degree;
    let c = || c_series(&qr, &src, &euler, n);
    let out: Vec<(String, MotivicSeries)> = match kind {
        SeriesKind::C => vec![("C".into(), c()?)],
        SeriesKind::HilbClosed => vec![("Z".into(), hilb_series_closed(&c()?, &cfg.twist(&euler))?)],
        SeriesKind::HilbRecursive => vec![("Z".into(), hilb_series_recursive(&qr, &src, &euler, n)?)],
        SeriesKind::Semistable => {
            let z = cfg.charge(qr.quiver.node_count())?;
            ss_series_factorize(&c()?, &z, &cfg.twist(&euler))?.into_iter().map(|(ray, s)| (format!("Zss[{ray}]"), s)).collect()
        }
    };
    let output = match cfg.format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = out.iter().map(|(k, s)| (k.clone(), s.to_json())).collect();
            to_json(&json!({ "quiver": qr.name, "degree": n, "euler": euler, "series": map }))
        }
        f => out
            .iter()
            .map(|(k, s)| render_series(s, f, k).as_str().unwrap_or_default().to_string())
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Outcome::ok(output))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// #f^-1(1) - #f^-1(0) = -q^r #MC(L_d).
    Dimred,
    /// Critical locus of f_d equals the locus of vanishing cyclic derivatives.
    CritEqMc,
    /// Closed form and framed recursion of the Hilbert series agree.
    HilbConsistency,
    /// HN strata partition the representation space and satisfy the stack identity.
    HnPartition,
    /// The ordered product of semistable series reproduces C(t).
    OrderedProduct,
}

#[derive(Serialize)]
struct SuiteCheck {
    name: String,
    passed: bool,
    detail: Value,
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<Outcome> {
    let qr = cfg.quiver()?;
    let cq = cyclic_completion(&qr);
    let mut checks = Vec::new();
    match suite {
        Suite::Dimred => {
            for d in cfg.dims(&qr)? {
                for q in cfg.primes_or(&[2, 3]) {
                    let r = dimension_reduction_check(&qr, &d, q, cfg.budget)?;
                    checks.push(SuiteCheck {
                        name: format!("d = {d}, q = {q}: lhs {} rhs {}", r.lhs, r.rhs),
                        passed: r.holds,
                        detail: serde_json::to_value(&r)?,
                    });
                }
            }
        }
        Suite::CritEqMc => {
            for d in cfg.dims(&qr)? {
                let lbar = complete_algebra(&quiver_algebra(&qr, &d, false)?)?;
                let g = lbar.gradient_check()?;
                checks.push(SuiteCheck {
                    name: format!("d = {d}: symbolic gradient, {} coordinates", g.checked),
                    passed: g.passed(),
                    detail: serde_json::to_value(&g)?,
                });
                let (layout, grad) = gradient_polys(&cq, &d)?;
                let (_, cyc) = cyclic_derivative_polys(&cq, &d)?;
                for q in cfg.primes_or(&[2, 3]) {
                    let r = compare_loci(&grad, &cyc, layout.len(), q, cfg.budget)?;
                    checks.push(SuiteCheck {
                        name: format!("d = {d}, q = {q}: {} critical, {} MC, {} disagreements", r.first, r.second, r.disagreements),
                        passed: r.disagreements == 0,
                        detail: serde_json::to_value(&r)?,
                    });
                }
            }
        }
        Suite::HilbConsistency => {
            let src = cfg.motive_source(&qr)?;
            let euler = cfg.euler_form(&qr);
            let c = c_series(&qr, &src, &euler, cfg.degree)?;
            let rec = hilb_series_recursive(&qr, &src, &euler, cfg.degree)?;
            let closed = hilb_series_closed(&c, &cfg.twist(&euler))?;
            let diff = rec.differences(&closed);
            let mut detail = json!({
                "euler": euler,
                "twist": format!("{:?}", cfg.twist).to_lowercase(),
                "differences": diff,
                "recursive": rec.to_json(),
                "closed": closed.to_json(),
            });
            if !diff.is_empty() && cfg.twist == TwistKind::Plain {
                let torus = hilb_series_closed(&c, &Twist::QuantumTorus(euler.clone()))?;
                detail["quantum_torus_differences"] = serde_json::to_value(rec.differences(&torus))?;
            }
            checks.push(SuiteCheck {
                name: format!("N = {}: {} of {} coefficients differ", cfg.degree, diff.len(), rec.degrees().len()),
                passed: diff.is_empty(),
                detail,
            });
        }
        Suite::HnPartition => {
            let z = cfg.charge(qr.quiver.node_count())?;
            for d in cfg.dims(&qr)? {
                for q in cfg.primes_or(&[2, 3]) {
                    let r = hn_partition_check(&cq, &d, q, &z, cfg.budget)?;
                    checks.push(SuiteCheck {
                        name: format!("d = {d}, q = {q}: {} strata, {} of {} points", r.strata.len(), r.stratified, r.total),
                        passed: r.holds,
                        detail: serde_json::to_value(&r)?,
                    });
                }
            }
        }
        Suite::OrderedProduct => {
            let z = cfg.charge(qr.quiver.node_count())?;
            let src = cfg.motive_source(&qr)?;
            let euler = cfg.euler_form(&qr);
            let twist = cfg.twist(&euler);
            let c = c_series(&qr, &src, &euler, cfg.degree)?;
            let rays = ss_series_factorize(&c, &z, &twist)?;
            let diff = ordered_product(&rays, &z, &twist)?.differences(&c);
            checks.push(SuiteCheck {
                name: format!("N = {}: {} rays, {} coefficients differ", cfg.degree, rays.len(), diff.len()),
                passed: diff.is_empty(),
                detail: json!({ "differences": diff }),
            });
        }
    }
    if checks.is_empty() {
        bail!("nothing to verify");
    }
    let passed = checks.iter().all(|c| c.passed);
    let suite_name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
    let output = match cfg.format {
        Format::Json => to_json(&json!({ "suite": suite_name, "quiver": qr.name, "passed": passed, "checks": checks })),
        _ => checks
            .iter()
            .map(|c| format!("{} {suite_name} {} {}", if c.passed { "PASS" } else { "FAIL" }, qr.name, c.name))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Outcome { output, passed })
}
