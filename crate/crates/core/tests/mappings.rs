use std::sync::Arc;

use crformal_core::coeff::Coeff;
use crformal_core::context::Coords;
use crformal_core::fixtures::{self, quadric, term};
use crformal_core::generate::{generate_audit_triple, pullback_triple, SeedSpec};
use crformal_core::manifold::Manifold;
use crformal_core::mapping::{implication, AnalysisSettings, CheckStatus};
use crformal_core::series::Series;
use crformal_core::verdict::{Truth, Verdict};

const K: u32 = 8;

use Truth::{CertifiedFalse as F, CertifiedTrue as T};

#[test]
fn power_maps() {
    let s = AnalysisSettings::default();
    for k in 2..=4u16 {
        let pair = fixtures::power_map(k, K).unwrap().pair;
        assert!(pair.verified());
        let p = pair.predicates(&s).unwrap();
        let k = k as usize;
        assert_eq!(p.source_ess_type.exact_value(), Some(k));
        assert_eq!(p.target_ess_type.exact_value(), Some(1));
        assert_eq!(p.mult.exact_value(), Some(k));
        assert_eq!(p.m_h.exact_value(), Some(k));
        assert_eq!(p.cr_transversal.value, T);
        assert_eq!(p.biholomorphism.value, F);
        let audit = pair.theorem_audit(&s).unwrap();
        assert_eq!(audit.violations().count(), 0);
        let mult = audit.check("essential type is multiplicative under mult(H)").unwrap();
        assert_eq!(mult.status, CheckStatus::Passed);
        assert_eq!(mult.detail, format!("{k} = {k}·1"));
    }
}

#[test]
fn degenerate_target() {
    let s = AnalysisSettings::default();
    let pair = fixtures::degenerate_target(K).unwrap().pair;
    assert!(pair.verified());
    let p = pair.predicates(&s).unwrap();
    assert_eq!(p.not_totally_degenerate.value, T);
    assert_eq!(p.cr_transversal.value, F);
    assert_eq!(p.transversally_regular.value, F);
    assert_eq!(p.source_finite_type.value, T);
    assert!(p.target_finite_type.is_unknown());
    assert_eq!(pair.theorem_audit(&s).unwrap().violations().count(), 0);
}

#[test]
fn infinite_type_source() {
    let s = AnalysisSettings::default();
    let pair = fixtures::infinite_type_source(K).unwrap().pair;
    assert!(pair.verified());
    let p = pair.predicates(&s).unwrap();
    assert_eq!(p.jacobian_nonzero.value, T);
    assert!(p.source_finite_type.is_unknown());
    assert_eq!(p.target_finite_type.value, T);
    assert_eq!(pair.theorem_audit(&s).unwrap().violations().count(), 0);
}

#[test]
fn transversal_but_not_cr_transversal() {
    let s = AnalysisSettings::default();
    let pair = fixtures::transversal_not_cr(K).unwrap().pair;
    assert_eq!(pair.transversal().value, T);
    assert_eq!(pair.cr_transversal().unwrap().value, F);
    assert_eq!(pair.maps_into().value, F);
    let p = pair.predicates(&s).unwrap();
    assert_eq!(p.transversal.value, T);
    assert_eq!(p.cr_transversal.value, F);
}

#[test]
fn cr_transversal_but_not_finite() {
    let s = AnalysisSettings::default();
    let pair = fixtures::cr_transversal_not_finite(K).unwrap().pair;
    assert!(pair.verified());
    let p = pair.predicates(&s).unwrap();
    assert_eq!(p.jacobian_nonzero.value, T);
    assert_eq!(p.cr_transversal.value, T);
    assert_eq!(p.finite.value, F);
    assert!(p.finite.evidence.contains("all generators vanish on the z2 axis"), "{}", p.finite.evidence);
    assert_eq!(p.segre_finite.value, F);
    assert!(p.segre_finite.evidence.contains("1 nonzero generators for 2 variables"));
    assert_eq!(pair.theorem_audit(&s).unwrap().violations().count(), 0);
}

#[test]
fn reflection_identities_on_fixtures() {
    for f in fixtures::example_fixtures(K).unwrap() {
        if !f.pair.verified() {
            continue;
        }
        let d = f.pair.source().d();
        for k in 1..=2 * d + 2 {
            let v = f.pair.reflection_identity_residual(k).unwrap();
            assert!(v.is_true(), "{} k={k}: {}", f.name, v.evidence);
        }
    }
}

#[test]
fn pullback_by_identity_returns_target() {
    let c = Coords::new(1, 1);
    let target = Arc::new(Manifold::new(&c, quadric(&c), K).unwrap());
    let z = Series::var(&c.zw, 0);
    let w = Series::var(&c.zw, 1);
    let pair = pullback_triple(target.clone(), &[z.clone()], &[w.clone()], K).unwrap();
    assert_eq!(pair.source().q(), target.q());
    assert_eq!(pair.f(), &[z]);
    assert_eq!(pair.g(), &[w]);
    let p = pair.predicates(&AnalysisSettings::default()).unwrap();
    assert_eq!(p.biholomorphism.value, T);
}

#[test]
fn pullback_by_a_local_biholomorphism() {
    let c = Coords::new(1, 1);
    let target = Arc::new(Manifold::new(&c, quadric(&c), K).unwrap());
    let one = Coeff::from_int(1);
    let f = term(&c.zw, one.clone(), &[("z1", 1)]).add(&term(&c.zw, one.clone(), &[("z1", 2)])).unwrap();
    let g = term(&c.zw, one, &[("w1", 1)]);
    let pair = pullback_triple(target, &[f], &[g], K).unwrap();
    let s = AnalysisSettings::default();
    let p = pair.predicates(&s).unwrap();
    assert_eq!(p.mult.exact_value(), Some(1));
    assert_eq!(p.source_ess_type.exact_value(), Some(1));
    assert_eq!(p.target_ess_type.exact_value(), Some(1));
    let audit = pair.theorem_audit(&s).unwrap();
    assert_eq!(audit.violations().count(), 0);
    assert_eq!(
        audit.check("essential type is multiplicative under mult(H)").unwrap().detail,
        "1 = 1·1"
    );
}

#[test]
fn generator_is_deterministic() {
    let spec = SeedSpec { seed: 4, n: 2, d: 1, truncation: K };
    let a = generate_audit_triple(spec).unwrap();
    let b = generate_audit_triple(spec).unwrap();
    assert_eq!(a.source().q(), b.source().q());
    assert_eq!(a.target().q(), b.target().q());
    assert_eq!(a.h(), b.h());
    assert!(generate_audit_triple(SeedSpec { n: 0, ..spec }).is_err());
}

#[test]
fn generated_triples_pass_the_audit() {
    let s = AnalysisSettings::default();
    for (n, d) in [(1, 1), (2, 1)] {
        for seed in 0..6 {
            let pair = generate_audit_triple(SeedSpec { seed, n, d, truncation: K }).unwrap();
            assert!(pair.verified());
            assert_eq!(pair.cr_transversal().unwrap().value, T);
            let audit = pair.theorem_audit(&s).unwrap();
            let bad: Vec<String> = audit.violations().map(|c| c.to_string()).collect();
            assert!(bad.is_empty(), "({n},{d}) seed {seed}: {bad:?}");
        }
    }
}

#[test]
fn three_valued_implication() {
    let yes = Verdict::yes("y");
    let no = Verdict::no("n");
    let unk = Verdict::unknown("u");
    let st = |a: &Verdict, b: &Verdict| implication("t", &[("a", a)], &[("b", b)]).status;
    assert_eq!(st(&yes, &no), CheckStatus::Violated);
    assert_eq!(st(&yes, &yes), CheckStatus::Passed);
    assert_eq!(st(&no, &no), CheckStatus::Passed);
    assert_eq!(st(&unk, &no), CheckStatus::Skipped);
    assert_eq!(st(&yes, &unk), CheckStatus::Skipped);
    assert_eq!(implication("t", &[("a", &no)], &[("b", &yes)]).detail, "vacuous: a is false");
}
