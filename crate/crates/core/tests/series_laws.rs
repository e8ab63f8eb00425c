use crformal_core::coeff::Coeff;
use crformal_core::context::{Ctx, VariableContext};
use crformal_core::series::{agree, reverse, Monomial, Precision, Series};
use proptest::prelude::*;

const K: u32 = 6;

fn ctx3() -> Ctx {
    VariableContext::from_names(&["x", "y", "p"])
}

fn coeff() -> impl Strategy<Value = Coeff> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Coeff::from_parts(a, b))
}

fn terms(min_deg: u16, max_deg: u16, len: usize) -> impl Strategy<Value = Vec<(Vec<u16>, Coeff)>> {
    prop::collection::vec(
        (prop::collection::vec(0u16..=max_deg, 3), coeff()),
        0..=len,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .filter(|(e, _)| {
                let d: u16 = e.iter().sum();
                d >= min_deg && d <= max_deg
            })
            .collect()
    })
}

fn build(ts: &[(Vec<u16>, Coeff)], prec: Precision) -> Series {
    Series::from_terms(
        &ctx3(),
        prec,
        ts.iter().map(|(e, c)| (Monomial::new(e.clone()), c.clone())),
    )
}

fn series() -> impl Strategy<Value = Series> {
    (terms(0, 3, 6), any::<bool>()).prop_map(|(ts, exact)| {
        build(&ts, if exact { Precision::Exact } else { Precision::UpTo(K) })
    })
}

/// A substitution without constant term, truncated at `K`.
fn subst() -> impl Strategy<Value = Series> {
    terms(1, 2, 4).prop_map(|ts| build(&ts, Precision::UpTo(K)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        let t = |s: Series| s.truncate(Precision::UpTo(K));
        prop_assert_eq!(t(a.add(&b).unwrap()), t(b.add(&a).unwrap()));
        prop_assert_eq!(t(a.mul(&b).unwrap()), t(b.mul(&a).unwrap()));
        prop_assert_eq!(
            t(a.mul(&b).unwrap().mul(&c).unwrap()),
            t(a.mul(&b.mul(&c).unwrap()).unwrap())
        );
        prop_assert_eq!(
            t(a.mul(&b.add(&c).unwrap()).unwrap()),
            t(a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap())
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn conj_is_an_involutive_homomorphism(a in series(), b in series()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().conj(), a.conj().mul(&b.conj()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().conj(), a.conj().add(&b.conj()).unwrap());
    }

    #[test]
    fn compose_is_associative(
        f in series(),
        s1 in subst(), s2 in subst(), s3 in subst(),
        r1 in subst(), r2 in subst(), r3 in subst(),
    ) {
        let sigma = [s1, s2, s3];
        let rho = [r1, r2, r3];
        let lhs = f.compose(&sigma).unwrap().compose(&rho).unwrap();
        let inner: Vec<Series> = sigma.iter().map(|s| s.compose(&rho).unwrap()).collect();
        let rhs = f.compose(&inner).unwrap();
        prop_assert!(agree(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn invert_unit_inverts(c0 in coeff(), rest in terms(1, 3, 5), exact in any::<bool>()) {
        prop_assume!(c0 != Coeff::from_int(0));
        let prec = if exact { Precision::Exact } else { Precision::UpTo(K) };
        let f = build(&rest, prec).add(&Series::constant(&ctx3(), c0, prec)).unwrap();
        let g = f.invert_unit(K).unwrap();
        let e = f.mul(&g).unwrap().sub(&Series::one(&ctx3())).unwrap();
        prop_assert!(e.truncate(Precision::UpTo(K)).is_zero(), "residual {}", e);
        if f.terms().len() > 1 {
            prop_assert!(!g.is_exact());
        }
    }

    #[test]
    fn reverse_with_parameter(
        a in prop::collection::vec(-2i64..=2, 4),
        hx in terms(2, 3, 4),
        hy in terms(2, 3, 4),
    ) {
        let det = a[0] * a[3] - a[1] * a[2];
        prop_assume!(det != 0);
        let ctx = ctx3();
        let lin = |i: usize, j: usize| Series::var(&ctx, j).scale(&Coeff::from_int(a[2 * i + j]));
        let fx = lin(0, 0).add(&lin(0, 1)).unwrap().add(&build(&hx, Precision::Exact)).unwrap();
        let fy = lin(1, 0).add(&lin(1, 1)).unwrap().add(&build(&hy, Precision::Exact)).unwrap();
        let g = reverse(&[fx.clone(), fy.clone()], &[0, 1], K).unwrap();
        let subs = [g[0].clone(), g[1].clone(), Series::var(&ctx, 2)];
        prop_assert!(agree(&fx.compose(&subs).unwrap(), &Series::var(&ctx, 0)));
        prop_assert!(agree(&fy.compose(&subs).unwrap(), &Series::var(&ctx, 1)));
    }
}

#[test]
fn small_examples() {
    let ctx = VariableContext::from_names(&["x", "y"]);
    let x = Series::var(&ctx, 0);
    let y = Series::var(&ctx, 1);
    let f = x.pow(2).mul(&y).unwrap();
    assert_eq!(f.diff(0), x.mul(&y).unwrap().scale(&Coeff::from_int(2)));
    let g = x.scale(&Coeff::from_parts(2, 3)).mul(&y).unwrap();
    assert_eq!(g.conj(), x.scale(&Coeff::from_parts(2, -3)).mul(&y).unwrap());
    let one_minus_x = Series::one(&ctx).sub(&x).unwrap();
    let inv = one_minus_x.invert_unit(4).unwrap();
    assert_eq!(inv.to_string(), "1 + x + x^2 + x^3 + x^4");
    assert_eq!(inv.precision(), Precision::UpTo(4));
    let two = Series::constant(&ctx, Coeff::from_int(2), Precision::Exact);
    assert!(two.invert_unit(4).unwrap().is_exact());
    assert!(Series::zero(&ctx, Precision::Exact).invert_unit(4).is_err());
}
