use num_rational::BigRational;
use proptest::prelude::*;
use superdeform::cochains::Cochain;
use superdeform::parse::parse_expression;
use superdeform::superfunc::SymplecticContext;
use superdeform::verify::{sample_superfunctions, SampleSpec};
use superdeform::{Ctx, Parity, SuperFunctionQ};

type F = SuperFunctionQ;

fn ctx() -> Ctx {
    SymplecticContext::standard(4, 3, 2, 4).unwrap()
}

fn triple(seed: u64, theta: bool) -> Vec<F> {
    let spec = SampleSpec::default().with_count(3).with_seed(seed).with_theta(theta).with_max_terms(3);
    sample_superfunctions(&spec, &ctx()).unwrap()
}

fn koszul(f: &F, g: &F) -> bool {
    f.parity() == Some(Parity::Odd) && g.parity() == Some(Parity::Odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let c = ctx();
        for f in triple(seed, true) {
            let back = parse_expression::<BigRational>(&f.to_string(), &c).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn product_is_supercommutative_and_associative(seed in any::<u64>()) {
        let t = triple(seed, true);
        let (f, g, h) = (&t[0], &t[1], &t[2]);
        prop_assert_eq!(f.mul_ref(g), g.mul_ref(f).negate_if(koszul(f, g)));
        prop_assert_eq!(f.mul_ref(g).mul_ref(h), f.mul_ref(&g.mul_ref(h)));
    }

    #[test]
    fn poisson_bracket_is_a_graded_derivation(seed in any::<u64>()) {
        let c = ctx();
        let t = triple(seed, false);
        let (f, g, h) = (&t[0], &t[1], &t[2]);
        let pb = |a: &F, b: &F| Cochain::<BigRational>::poisson(&c).eval(&[a.clone(), b.clone()]).unwrap();
        let lhs = pb(f, &g.mul_ref(h));
        let rhs = pb(f, g).mul_ref(h).add_ref(&g.mul_ref(&pb(f, h)).negate_if(koszul(f, g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_is_linear(seed in any::<u64>(), a in -5i64..5, b in -5i64..5) {
        let t = triple(seed, true);
        let combo = t[0].scale_ratio(a, 1).add_ref(&t[1].scale_ratio(b, 1));
        let expect = t[0].integral_bar().unwrap().scale(&BigRational::from_integer(a.into()))
            .add_ref(&t[1].integral_bar().unwrap().scale(&BigRational::from_integer(b.into())));
        prop_assert_eq!(combo.integral_bar().unwrap(), expect);
    }
}
