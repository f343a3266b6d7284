use num_rational::BigRational;
use superdeform::cochains::{BracketKind, Cochain, CochainError, Grading};
use superdeform::deformations::{build_anti_even, build_anti_odd, build_c1, build_c1c, build_c3, Deformation};
use superdeform::parse::parse_expression;
use superdeform::scalars::RadicalNumber;
use superdeform::superfunc::{weight, SuperFuncError, SymplecticContext};
use superdeform::verify::{self, sample_tuples, SampleSpec};
use superdeform::{Ctx, ScalarQ, SuperFunctionQ};

type F = SuperFunctionQ;
type S = ScalarQ;
type C = Cochain<BigRational>;

fn ctx(np: usize, nm: usize, k: usize, hmax: u32) -> Ctx {
    SymplecticContext::standard(np, nm, k, hmax).unwrap()
}

fn e(text: &str, c: &Ctx) -> F {
    parse_expression(text, c).unwrap()
}

fn spec(count: usize, seed: u64) -> SampleSpec {
    SampleSpec::default().with_count(count).with_seed(seed)
}

#[test]
fn odd_parameters_anticommute() {
    let c = ctx(0, 0, 2, 0);
    let sc = c.scalar_ctx();
    let (t1, t2) = (S::theta(sc, 0).unwrap(), S::theta(sc, 1).unwrap());
    assert_eq!(t1.mul_ref(&t2), t2.mul_ref(&t1).neg_ref());
    assert!(t1.mul_ref(&t1).is_zero());
}

#[test]
fn bar_of_single_odd_variable_is_one() {
    let c = ctx(0, 1, 0, 0);
    assert_eq!(F::xi(&c, 0).integral_bar().unwrap(), S::one(c.scalar_ctx()));
}

#[test]
fn odd_block_of_the_metric() {
    for lambda in [1i8, -1] {
        let c = SymplecticContext::new(2, 2, vec![lambda, 1], 0, 0).unwrap();
        let b = C::poisson(&c).eval(&[F::xi(&c, 0), F::xi(&c, 0)]).unwrap();
        assert_eq!(b, F::from_int(&c, lambda as i64));
        let b = C::poisson(&c).eval(&[F::xi(&c, 0), F::xi(&c, 1)]).unwrap();
        assert!(b.is_zero());
    }
}

#[test]
fn m_zeta_gaussian_example() {
    let c = ctx(2, 0, 0, 0);
    let m = C::m_zeta(&F::x(&c, 0)).eval(&[e("gauss(1)", &c), e("x2*gauss(1)", &c)]).unwrap();
    // {x1, g} = d g / d x2 = (1 - x2^2) gauss(1); bar f = 2 pi, bar g = 0
    assert_eq!(m, e("-2*pi*(1 - x2^2)*gauss(1)", &c));
}

#[test]
fn m3_pulls_odd_parameters_with_its_parity() {
    let c = ctx(4, 2, 1, 2);
    let th = S::theta(c.scalar_ctx(), 0).unwrap();
    let m3 = C::m3(&c);
    for (f, g) in [("x1*gauss(1)*xi1*xi2", "gauss(2)"), ("gauss(1)*xi1", "x2*gauss(1)*xi1*xi2")] {
        let (f, g) = (e(f, &c), e(g, &c));
        let pulled = m3.eval(&[f.clone(), g.clone()]).unwrap().scale_left(&th);
        let sign = m3.parity().unwrap().is_odd();
        assert_eq!(m3.eval(&[f.scale_left(&th), g]).unwrap(), pulled.negate_if(sign));
    }
}

#[test]
fn named_forms_are_skew() {
    let p = ctx(4, 2, 1, 6);
    let zeta = e("x1*x3 + xi1*xi2 - x2", &p);
    let s = spec(40, 11);
    for m in [C::m3(&p), C::m_zeta(&zeta), C::j_zeta(&zeta), C::m1(&p)] {
        let r = verify::check_antisymmetry(&m, Grading::Even, &s);
        assert!(r.pass, "{}", r.summary());
    }
    let a = ctx(2, 2, 1, 6);
    let r = verify::check_antisymmetry(&C::m23(&a), Grading::Odd, &s.clone().with_theta(true));
    assert!(r.pass, "{}", r.summary());
    let odd = ctx(4, 3, 0, 6);
    let r = verify::check_antisymmetry(&C::mu(&odd), Grading::Even, &s);
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn mu_needs_integrable_inner_values() {
    // mu(f, g) is a constant, and a constant has no bar when n- = 0
    let c = ctx(2, 0, 0, 6);
    let g = e("gauss(1)", &c);
    let j = C::jacobiator(&C::mu(&c), None, Grading::Even).unwrap();
    assert!(matches!(
        j.eval(&[g.clone(), g.clone(), g]),
        Err(CochainError::SuperFunc(SuperFuncError::NotIntegrable(_)))
    ));
}

#[test]
fn mu_deformation_is_a_negative_control() {
    let sum = |c: &Ctx| {
        let h2 = S::hbar_power(c.scalar_ctx(), 2);
        C::sum(vec![C::poisson(c), C::scaled(&h2, &C::mu(c))]).unwrap()
    };
    let c0 = ctx(4, 0, 0, 6);
    let r = verify::check_jacobi_form(&sum(&c0), Grading::Even, &spec(20, 12));
    assert!(!r.pass);
    let c2 = ctx(4, 2, 0, 6);
    let r = verify::check_antisymmetry(&sum(&c2), Grading::Even, &spec(40, 13));
    assert!(!r.pass);
    assert!(r.failures.iter().all(|f| !f.residual.is_empty()));
}

#[test]
fn mu_cocycle_at_odd_n_minus_is_measured() {
    // recorded, not asserted
    let c = ctx(4, 3, 0, 6);
    let r = verify::check_cocycle(&C::mu(&c), BracketKind::Poisson, &spec(30, 14));
    println!("{}", r.summary());
}

#[test]
fn c1c_without_moyal_terms() {
    let c = ctx(4, 2, 0, 6);
    let sc = c.scalar_ctx();
    let h2 = S::hbar_power(sc, 2);
    let d = build_c1c(&F::zero(&c), &S::zero(sc), &h2).unwrap();
    for pair in sample_tuples::<BigRational>(&spec(20, 15), &c, 2).unwrap() {
        let (f, g) = (&pair[0], &pair[1]);
        let bars = f.integral_bar().unwrap().mul_ref(&g.integral_bar().unwrap());
        let expect = C::poisson(&c)
            .eval(&pair)
            .unwrap()
            .add_ref(&F::constant(&c, bars.mul_ref(&h2)));
        assert_eq!(d.eval(f, g).unwrap(), expect);
    }
}

#[test]
fn moyal_is_not_the_poisson_bracket_at_second_order() {
    let c = ctx(4, 2, 0, 6);
    let sc = c.scalar_ctx();
    let moyal = build_c1(&F::zero(&c), &S::one(sc)).unwrap();
    let plain = build_c3(&F::zero(&c), &S::zero(sc)).unwrap();
    let r = verify::check_equivalence(&moyal, &plain, &C::zero(&c, 1), 2, &spec(20, 16));
    assert!(!r.pass);
    // the difference is exactly hbar^2 m1
    let h2 = S::hbar_power(sc, 2);
    for pair in sample_tuples::<BigRational>(&spec(10, 17), &c, 2).unwrap() {
        let diff = moyal.eval(&pair[0], &pair[1]).unwrap().sub_ref(&plain.eval(&pair[0], &pair[1]).unwrap());
        let m1 = C::m1(&c).eval(&pair).unwrap().scale_left(&h2);
        assert_eq!(diff.truncate_hbar(2), m1);
    }
}

fn hbar_deformations() -> Vec<Deformation<BigRational>> {
    let p = ctx(4, 2, 0, 6);
    let sc = p.scalar_ctx();
    let h2 = S::hbar_power(sc, 2);
    let a = ctx(2, 2, 1, 6);
    vec![
        build_c1(&e("h^2*x1*x2", &p), &S::one(sc)).unwrap(),
        build_c3(&e("h^2*(x1*x2 + gauss(1))", &p), &h2).unwrap(),
        build_c1c(&F::zero(&p), &S::one(sc), &h2).unwrap(),
        build_anti_even(&a, &S::hbar_power(a.scalar_ctx(), 2)).unwrap(),
        build_anti_odd(&a).unwrap(),
    ]
}

#[test]
fn deformations_reduce_to_the_classical_bracket() {
    for d in hbar_deformations() {
        let r = verify::check_classical_limit(&d, &spec(20, 18));
        assert!(r.pass, "{}", r.summary());
        let r = verify::check_grading(&d.bracket, &spec(20, 19));
        assert!(r.pass, "{}", r.summary());
    }
}

#[test]
fn first_order_terms_are_cocycles() {
    for d in hbar_deformations() {
        let r = verify::check_first_order_cocycle(&d, &spec(20, 20));
        assert!(r.pass, "{}", r.summary());
    }
}

#[test]
fn mu_of_gaussians() {
    let c = ctx(2, 0, 0, 0);
    let g = e("gauss(1)", &c);
    let expect = RadicalNumber::pi_half_power(4).scale(&BigRational::from_integer(4.into()));
    assert_eq!(
        C::mu(&c).eval(&[g.clone(), g]).unwrap(),
        F::constant(&c, S::from_radical(c.scalar_ctx(), expect))
    );
    assert_eq!(F::gauss(&c, weight(1)).unwrap(), e("gauss(1)", &c));
}
