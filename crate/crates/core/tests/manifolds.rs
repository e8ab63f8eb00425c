use std::sync::{Arc, OnceLock};

use crformal_core::coeff::Coeff;
use crformal_core::context::Coords;
use crformal_core::fixtures::{example_fixtures, quadric, sum, term};
use crformal_core::generate::{generate_audit_triple, SeedSpec};
use crformal_core::local::RankPolicy;
use crformal_core::manifold::{
    graph_solve, identity_change, normalize, power_hypersurface, verify_normal_form, verify_reality, Manifold,
};
use crformal_core::mapping::{AnalysisSettings, FormalMapPair};
use crformal_core::series::{Precision, Series};
use crformal_core::verdict::Truth;

const K: u32 = 8;

fn corpus() -> &'static [Arc<Manifold>] {
    static CORPUS: OnceLock<Vec<Arc<Manifold>>> = OnceLock::new();
    CORPUS.get_or_init(build_corpus)
}

fn build_corpus() -> Vec<Arc<Manifold>> {
    let mut out = Vec::new();
    for f in example_fixtures(K).unwrap() {
        out.push(f.pair.source().clone());
        out.push(f.pair.target().clone());
    }
    for (n, d) in [(1, 1), (2, 1), (1, 2)] {
        for seed in [3, 6] {
            let pair = generate_audit_triple(SeedSpec { seed, n, d, truncation: K }).unwrap();
            out.push(pair.source().clone());
            out.push(pair.target().clone());
        }
    }
    out
}

#[test]
fn finite_type_criteria_agree() {
    let policy = RankPolicy::default();
    for m in corpus() {
        let checks = m.finite_type_checks(&policy).unwrap();
        assert_eq!(checks.segre_rank.value, checks.u_rank.value, "{m:?}");
        assert!(checks.consistent(), "{m:?}: {checks:?}");
        if checks.segre_rank.is_true() {
            assert!(!checks.restricted_minor.is_false());
        }
    }
}

#[test]
fn segre_maps_vanish_on_w() {
    for m in corpus() {
        let u1 = &m.segre(1).unwrap().u;
        assert!(u1.iter().all(|s| s.is_zero()));
        for mm in 1..=m.d() + 1 {
            let v = m.w_vanishing(mm).unwrap();
            assert!(v.is_true(), "{m:?} m={mm}: {}", v.evidence);
        }
    }
}

#[test]
fn corpus_is_real_and_normal() {
    for m in corpus() {
        let c = m.coords();
        assert!(verify_reality(c, m.q()).unwrap().is_true());
        assert!(verify_normal_form(c, m.q()).unwrap().is_true());
        assert!(m.reality().is_true() && m.normality().is_true());
    }
}

#[test]
fn normalize_is_idempotent() {
    for m in corpus() {
        let c = m.coords();
        let (again, change) = normalize(c, m.q(), K).unwrap();
        assert_eq!(again.q(), m.q());
        assert_eq!(change, identity_change(c));
    }
}

#[test]
fn reality_and_normality_examples() {
    let c = Coords::new(1, 1);
    let q = quadric(&c);
    assert!(verify_reality(&c, &q).unwrap().is_true());
    assert!(verify_normal_form(&c, &q).unwrap().is_true());
    let bad = vec![sum(&[
        term(&c.q, Coeff::from_int(1), &[("wb1", 1)]),
        term(&c.q, Coeff::from_int(1), &[("z1", 1), ("wb1", 1)]),
    ])];
    let r = verify_reality(&c, &bad).unwrap();
    assert!(r.is_false(), "{}", r.evidence);
    assert!(Manifold::new(&c, bad, K).is_err());
    let flat = vec![Series::var_named(&c.q, "wb1").unwrap()];
    assert!(verify_reality(&c, &flat).unwrap().is_true());
    assert!(verify_normal_form(&c, &flat).unwrap().is_true());
}

/// The quadric written in coordinates `w = P(z, w′)`, graph-solved and
/// normalized, maps back onto the quadric biholomorphically.
fn pushforward(p: Series) {
    let c = Coords::new(1, 1);
    let nb = vec![2, 3];
    let p_full = p.embed(&c.full).unwrap();
    let p_bar = p.conj().relabel(&c.full, &nb);
    let two_i = Coeff::from_parts(0, 2);
    let rho = p_full
        .sub(&p_bar)
        .unwrap()
        .sub(&term(&c.full, two_i, &[("z1", 1), ("zb1", 1)]))
        .unwrap();
    let q0 = graph_solve(&c, &[rho], &[1], K).unwrap();
    let (m, change) = normalize(&c, &q0, K).unwrap();
    assert!(m.reality().is_true() && m.normality().is_true());
    let (again, _) = normalize(&c, m.q(), K).unwrap();
    assert_eq!(again.q(), m.q());

    let z = Series::var(&c.zw, 0);
    let g = p.compose(&[z.clone(), change[0].clone()]).unwrap();
    let target = Arc::new(Manifold::new(&c, quadric(&c), K).unwrap());
    let pair = FormalMapPair::attach(Arc::new(m), target, vec![z], vec![g]).unwrap();
    assert!(pair.verified(), "{p}: {}", pair.maps_into().evidence);
    let s = AnalysisSettings::default();
    let pr = pair.predicates(&s).unwrap();
    assert_eq!(pr.biholomorphism.value, Truth::CertifiedTrue);
    assert_eq!(pr.source_ess_type.exact_value(), Some(1));
    assert_eq!(pr.target_ess_type.exact_value(), Some(1));
    assert_eq!(pr.source_finite_type.value, Truth::CertifiedTrue);
    let audit = pair.theorem_audit(&s).unwrap();
    assert_eq!(audit.violations().count(), 0);
}

#[test]
fn pushforwards_of_the_quadric() {
    let c = Coords::new(1, 1);
    let one = Coeff::from_int(1);
    let w = term(&c.zw, one.clone(), &[("w1", 1)]);
    pushforward(w.add(&term(&c.zw, one.clone(), &[("w1", 2)])).unwrap());
    pushforward(w.add(&term(&c.zw, one.clone(), &[("z1", 1), ("w1", 1)])).unwrap());
    pushforward(term(&c.zw, Coeff::i(), &[("w1", 1)]));
    pushforward(w.add(&term(&c.zw, Coeff::i(), &[("w1", 2)])).unwrap());
}

#[test]
fn graph_solve_examples() {
    let c = Coords::new(1, 1);
    let two_i = Coeff::from_parts(0, 2);
    let one = Coeff::from_int(1);
    let rho = sum(&[
        term(&c.full, one.clone(), &[("w1", 1)]),
        term(&c.full, -&one, &[("wb1", 1)]),
        term(&c.full, -&two_i, &[("z1", 1), ("zb1", 1)]),
    ]);
    let q = graph_solve(&c, &[rho], &[1], K).unwrap();
    assert_eq!(q, power_hypersurface(&c, 1));
    assert!(q[0].is_exact());

    // w = τ + 2i zχ wτ has no polynomial solution.
    let rho = sum(&[
        term(&c.full, one.clone(), &[("w1", 1)]),
        term(&c.full, -&one, &[("wb1", 1)]),
        term(&c.full, -&two_i, &[("z1", 1), ("zb1", 1), ("w1", 1), ("wb1", 1)]),
    ]);
    let q = graph_solve(&c, &[rho], &[1], 6).unwrap();
    assert_eq!(q[0].precision(), Precision::UpTo(6));
    assert_eq!(q[0].to_string(), "wb1 + 2*i*z1*zb1*wb1^2");

    let singular = term(&c.full, one, &[("z1", 1), ("zb1", 1)]);
    assert!(graph_solve(&c, &[singular], &[1], K).is_err());
}
