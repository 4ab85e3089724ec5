mod common;

use common::{dim, load};
use num_bigint::BigInt;
use qcs_core::dtseries::{
    c_series, dimension_reduction_check, hn_partition_check, framed_terms, hilb_series_closed, hilb_series_recursive, ordered_product, ray_of,
    ss_series_factorize, EulerForm, MotiveFile, MotiveSource, MotivicSeries, Twist,
};
use qcs_core::motive::{gl_motive, FieldCardinality, MotivicWeight};
use qcs_core::quiver::{cyclic_completion, DimensionVector, QuiverWithRelations};
use qcs_core::repvar::{count_framed_all, count_hn_strata, count_relation_locus, CentralCharge, Locus, DEFAULT_BUDGET};
use std::collections::BTreeMap;

fn c3_motives() -> MotiveSource {
    let path = common::fixture_dir().join("c3.motives.json");
    let file: MotiveFile = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    MotiveSource::from_file(&file).unwrap()
}

fn at(w: &MotivicWeight, q: u64) -> BigInt {
    w.eval_int(q).unwrap_or_else(|e| panic!("{w} at {q}: {e}"))
}

fn pinned(qr: &QuiverWithRelations) -> EulerForm {
    EulerForm::completed_quiver(&cyclic_completion(qr))
}

#[test]
fn c3_closed_motives_match_point_counts() {
    let qr = load("c3");
    let src = c3_motives();
    for (n, qs) in [(0u32, &[2u64, 3, 5][..]), (1, &[2, 3, 5]), (2, &[2, 3, 5]), (3, &[2, 3])] {
        let d = dim(&[n]);
        let m = src.mc_motive(&qr, &d).unwrap();
        for &q in qs {
            let count = count_relation_locus(&qr, &d, q, DEFAULT_BUDGET).unwrap().value;
            assert_eq!(at(&m, q), BigInt::from(count), "d = {d}, q = {q}");
        }
    }
    assert_eq!(at(&src.mc_motive(&qr, &dim(&[2])).unwrap(), 2), BigInt::from(88));
}

#[test]
fn interpolated_motives_agree_with_closed_forms() {
    let qr = load("c3");
    let closed = c3_motives();
    let interp = MotiveSource::interpolated(&[2, 3, 5, 7, 11, 13, 17, 19, 23]);
    for n in 0..=2 {
        let d = dim(&[n]);
        assert_eq!(interp.mc_motive(&qr, &d).unwrap(), closed.mc_motive(&qr, &d).unwrap(), "d = {d}");
    }
    let few = MotiveSource::interpolated(&[2, 3]);
    assert!(few.mc_motive(&qr, &dim(&[2])).is_err());
}

#[test]
fn no_relations_gives_affine_space() {
    let qr = load("toy");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7, 11]);
    assert_eq!(src.mc_motive(&qr, &dim(&[2, 2])).unwrap(), MotivicWeight::l_pow(4));
    assert_eq!(src.mc_motive(&qr, &dim(&[1, 0])).unwrap(), MotivicWeight::one());
}

fn check_framed(qr: &QuiverWithRelations, src: &MotiveSource, d: &DimensionVector, q: u64) {
    let cq = cyclic_completion(qr);
    let framed = framed_terms(qr, src, &pinned(qr), d.total()).unwrap();
    let y = count_framed_all(&cq, d, q, 0, DEFAULT_BUDGET).unwrap();
    let z = count_framed_all(&cq, d, q, 1, DEFAULT_BUDGET).unwrap();
    let mut sum = BigInt::from(0);
    for dp in d.below() {
        let want = y.get(&dp).copied().unwrap_or(0) as i128 - z.get(&dp).copied().unwrap_or(0) as i128;
        let got = at(&framed.terms[&(d.clone(), dp.clone())], q);
        assert_eq!(got, BigInt::from(want), "{} d = {d}, d' = {dp}, q = {q}", qr.name);
        sum += got;
    }
    assert_eq!(sum, at(&framed.total[d], q));
}

#[test]
fn framed_recursion_matches_framed_point_counts() {
    let c3 = load("c3");
    let closed = c3_motives();
    check_framed(&c3, &closed, &dim(&[1]), 2);
    check_framed(&c3, &closed, &dim(&[1]), 3);
    check_framed(&c3, &closed, &dim(&[2]), 2);
    let toy = load("toy");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7, 11]);
    for d in [dim(&[1, 1]), dim(&[2, 1]), dim(&[1, 2])] {
        for q in [2, 3] {
            check_framed(&toy, &src, &d, q);
        }
    }
    let p2 = load("p2");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7, 11, 13, 17]);
    for d in [dim(&[1, 1, 0]), dim(&[0, 1, 1]), dim(&[1, 1, 1])] {
        check_framed(&p2, &src, &d, 2);
    }
    check_framed(&p2, &src, &dim(&[1, 1, 1]), 3);
}

#[test]
fn dimension_reduction_holds_on_small_dimension_vectors() {
    for name in common::FIXTURES.iter().copied().chain(["toy", "c3_full"]) {
        let qr = load(name);
        for d in DimensionVector::all_up_to(qr.quiver.node_count(), 2) {
            for q in [2, 3] {
                let r = dimension_reduction_check(&qr, &d, q, 1 << 24).unwrap();
                assert!(r.holds, "{name} {r:?}");
            }
        }
    }
}

#[test]
fn c3_hilbert_series_closed_form_matches_recursion() {
    let qr = load("c3");
    let src = c3_motives();
    let e = pinned(&qr);
    assert!(e.is_symmetric());
    let c = c_series(&qr, &src, &e, 4).unwrap();
    let rec = hilb_series_recursive(&qr, &src, &e, 4).unwrap();
    let closed = hilb_series_closed(&c, &Twist::Plain).unwrap();
    assert!(rec.differences(&closed).is_empty(), "{:?}", rec.differences(&closed));
    // Z_1 = c_1 (v - 1/v)
    let c1 = c.coeff(&dim(&[1])).unwrap();
    let want = c1 * &(&MotivicWeight::v_pow(1) - &MotivicWeight::v_pow(-1));
    assert_eq!(rec.coeff(&dim(&[1])).unwrap(), &want);
    // Hilb^1 is a point, shifted by L^{3/2}
    assert_eq!(rec.coeff(&dim(&[1])).unwrap(), &MotivicWeight::v_pow(3));
}

#[test]
fn p2_closed_form_needs_the_quantum_torus_product() {
    let qr = load("p2");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7]);
    let e = pinned(&qr);
    assert!(!e.is_symmetric());
    let c = c_series(&qr, &src, &e, 2).unwrap();
    let rec = hilb_series_recursive(&qr, &src, &e, 2).unwrap();
    let plain = hilb_series_closed(&c, &Twist::Plain).unwrap();
    let torus = hilb_series_closed(&c, &Twist::QuantumTorus(e.clone())).unwrap();
    assert!(!rec.differences(&plain).is_empty());
    assert!(rec.differences(&torus).is_empty(), "{:?}", rec.differences(&torus));
    let sym = e.symmetrized();
    let c_sym = c_series(&qr, &src, &sym, 2).unwrap();
    let rec_sym = hilb_series_recursive(&qr, &src, &sym, 2).unwrap();
    assert!(rec_sym.differences(&hilb_series_closed(&c_sym, &Twist::Plain).unwrap()).is_empty());
}

fn toy_charge() -> CentralCharge {
    CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap()
}

fn p2_charge() -> CentralCharge {
    CentralCharge::from_ints(&[(-2, 1), (1, 3), (3, 1)]).unwrap()
}

#[test]
fn ordered_product_of_semistable_series_reproduces_c() {
    let toy = load("toy");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7, 11]);
    let e = pinned(&toy);
    let c = c_series(&toy, &src, &e, 3).unwrap();
    let tw = Twist::QuantumTorus(e);
    let rays = ss_series_factorize(&c, &toy_charge(), &tw).unwrap();
    assert_eq!(ordered_product(&rays, &toy_charge(), &tw).unwrap(), c);

    let p2 = load("p2");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7]);
    let e = pinned(&p2);
    let c = c_series(&p2, &src, &e, 2).unwrap();
    let tw = Twist::QuantumTorus(e);
    let rays = ss_series_factorize(&c, &p2_charge(), &tw).unwrap();
    assert_eq!(ordered_product(&rays, &p2_charge(), &tw).unwrap(), c);
}

#[test]
fn toy_semistable_series_matches_semistable_counts() {
    let toy = load("toy");
    let src = MotiveSource::interpolated(&[2, 3, 5, 7, 11]);
    let e = pinned(&toy);
    let c = c_series(&toy, &src, &e, 3).unwrap();
    let rays = ss_series_factorize(&c, &toy_charge(), &Twist::QuantumTorus(e.clone())).unwrap();
    let cq = cyclic_completion(&toy);
    for d in DimensionVector::all_up_to(2, 3).into_iter().filter(|d| !d.is_zero()) {
        let ray = ray_of(&d);
        let coeff = rays[&ray].coeff(&d).unwrap();
        for q in [2, 3] {
            let strata = count_hn_strata(&cq, &d, q, &toy_charge(), Locus::All, DEFAULT_BUDGET).unwrap();
            let ss = strata.iter().find(|(t, _)| t.parts().len() == 1).map(|(_, &n)| n).unwrap_or(0);
            // coefficient = L^{chi(d,d)/2} #ss / #GL_d
            let fq = FieldCardinality::new(q).unwrap();
            let want = MotivicWeight::from_bigint(BigInt::from(ss)).checked_div(&gl_motive(&d)).unwrap().eval_at(fq).unwrap();
            let got = (coeff * &MotivicWeight::v_pow(-e.value(&d, &d))).eval_at(fq).unwrap();
            assert_eq!(got, want, "d = {d}, q = {q}");
        }
    }
}

/// `#R_d / #GL_d = sum over HN types L^{-sum_{j<k} chi(d_j, d_k)} prod #R^ss / #GL`,
/// checked type by type on free representations of the completed quiver.
fn check_stack_identity(qr: &QuiverWithRelations, z: &CentralCharge, d: &DimensionVector, q: u64) {
    let cq = cyclic_completion(qr);
    let e = EulerForm::completed_quiver(&cq);
    let strata = count_hn_strata(&cq, d, q, z, Locus::All, DEFAULT_BUDGET).unwrap();
    let mut ss_cache: BTreeMap<DimensionVector, u128> = BTreeMap::new();
    let fq = FieldCardinality::new(q).unwrap();
    let mut ss_of = |p: &DimensionVector| -> u128 {
        *ss_cache.entry(p.clone()).or_insert_with(|| {
            let s = count_hn_strata(&cq, p, q, z, Locus::All, DEFAULT_BUDGET).unwrap();
            s.iter().find(|(t, _)| t.parts().len() == 1).map(|(_, &n)| n).unwrap_or(0)
        })
    };
    let mut total = 0u128;
    for (t, &n) in &strata {
        total += n;
        let parts = t.parts();
        let mut rhs = MotivicWeight::one();
        for (j, p) in parts.iter().enumerate() {
            let ss = MotivicWeight::from_bigint(BigInt::from(ss_of(p)));
            rhs = &rhs * &ss.checked_div(&gl_motive(p)).unwrap();
            for later in &parts[j + 1..] {
                rhs = &rhs * &MotivicWeight::l_pow(-e.value(p, later));
            }
        }
        let lhs = MotivicWeight::from_bigint(BigInt::from(n)).checked_div(&gl_motive(d)).unwrap();
        assert_eq!(lhs.eval_at(fq).unwrap(), rhs.eval_at(fq).unwrap(), "{} d = {d}, type {t}, q = {q}", qr.name);
    }
    let vars: u32 = cq.quiver.arrows.iter().map(|a| d[a.src] * d[a.tgt]).sum();
    assert_eq!(total, (q as u128).pow(vars));
}

#[test]
fn hn_stratification_of_the_stack() {
    let toy = load("toy");
    for d in DimensionVector::all_up_to(2, 3).into_iter().filter(|d| !d.is_zero()) {
        for q in [2, 3] {
            check_stack_identity(&toy, &toy_charge(), &d, q);
        }
    }
    let p2 = load("p2");
    let cq = cyclic_completion(&p2);
    for d in DimensionVector::all_up_to(3, 2).into_iter().filter(|d| !d.is_zero()) {
        for q in [2, 3] {
            check_stack_identity(&p2, &p2_charge(), &d, q);
            let report = hn_partition_check(&cq, &d, q, &p2_charge(), DEFAULT_BUDGET).unwrap();
            assert!(report.holds, "{report:?}");
        }
    }
    check_stack_identity(&p2, &p2_charge(), &dim(&[1, 1, 1]), 2);
}

#[test]
fn series_json_lists_every_coefficient() {
    let qr = load("c3");
    let c = c_series(&qr, &c3_motives(), &pinned(&qr), 2).unwrap();
    let json = c.to_json();
    assert_eq!(json.as_array().unwrap().len(), 3);
    let one = MotivicSeries::one(1, 2);
    assert_eq!(one.mul(&c, &Twist::Plain).unwrap(), c);
}

#[test]
fn c_series_specializes_to_point_counts() {
    use num_rational::BigRational;
    use qcs_core::quiver::VarLayout;
    for name in common::FIXTURES {
        let qr = load(name);
        let e = pinned(&qr);
        let dims: Vec<_> = DimensionVector::all_up_to(qr.quiver.node_count(), 2).into_iter().filter(|d| !d.is_zero()).collect();
        let needed = dims.iter().map(|d| VarLayout::new(&qr.quiver, d).unwrap().len() + 1).max().unwrap();
        let primes: Vec<u64> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47].into_iter().take(needed).collect();
        assert_eq!(primes.len(), needed, "{name} needs more primes");
        let c = c_series(&qr, &MotiveSource::interpolated(&primes), &e, 2).unwrap();
        for d in &dims {
            let r = qcs_core::dtseries::relation_space_dim(&qr, d);
            let bare = c.coeff(d).unwrap() * &MotivicWeight::v_pow(-(e.value(d, d) + 2 * r));
            for q in [2u64, 3] {
                let gl: BigInt = d.iter().map(|&n| (0..n).map(|i| BigInt::from(q.pow(n) - q.pow(i))).product::<BigInt>()).product();
                let mc = count_relation_locus(&qr, d, q, DEFAULT_BUDGET).unwrap().value;
                let want = BigRational::new(BigInt::from(mc), gl);
                assert_eq!(bare.eval_at(FieldCardinality::new(q).unwrap()).unwrap(), want, "{name} d = {d} q = {q}");
            }
        }
    }
}
