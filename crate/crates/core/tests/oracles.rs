//! Library results against small independent implementations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use superdeform::cochains::Cochain;
use superdeform::scalars::{RadicalNumber, Scalar};
use superdeform::superfunc::{weight, Monomial, SuperFunction, SymplecticContext};
use superdeform::Ctx;

type F = SuperFunction<BigRational>;
type S = Scalar<BigRational>;
type Q = BigRational;

/// Polynomial in x1..x4 with rational coefficients.
type Poly = BTreeMap<[u32; 4], Q>;
/// Element of poly (x) poly.
type BiPoly = BTreeMap<([u32; 4], [u32; 4]), Q>;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn random_poly(rng: &mut Pcg32, terms: usize, degree: u32) -> Poly {
    let mut p = Poly::new();
    for _ in 0..terms {
        let mut e = [0u32; 4];
        for _ in 0..rng.gen_range(0..=degree) {
            e[rng.gen_range(0..4)] += 1;
        }
        *p.entry(e).or_insert_with(Q::zero) += q(rng.gen_range(1..=5));
    }
    p
}

/// `d/dx_i` on the left or right tensor factor.
fn partial(b: &BiPoly, i: usize, left: bool) -> BiPoly {
    let mut out = BiPoly::new();
    for ((l, r), c) in b {
        let (mut l, mut r) = (*l, *r);
        let e = if left { &mut l[i] } else { &mut r[i] };
        if *e == 0 {
            continue;
        }
        let c = c * q(*e as i64);
        *e -= 1;
        *out.entry((l, r)).or_insert_with(Q::zero) += c;
    }
    out
}

/// One application of `P = sum_pairs (d_{2k} (x) d_{2k+1} - d_{2k+1} (x) d_{2k})`.
fn apply_p(b: &BiPoly) -> BiPoly {
    let mut out = BiPoly::new();
    for (i, j, sign) in [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)] {
        for (k, c) in partial(&partial(b, i, true), j, false) {
            *out.entry(k).or_insert_with(Q::zero) += c * q(sign);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn multiply_out(b: &BiPoly) -> Poly {
    let mut out = Poly::new();
    for ((l, r), c) in b {
        let e = [l[0] + r[0], l[1] + r[1], l[2] + r[2], l[3] + r[3]];
        *out.entry(e).or_insert_with(Q::zero) += c.clone();
    }
    out
}

fn to_superfunction(ctx: &Ctx, p: &Poly, hbar: u32) -> F {
    let mut f = F::zero(ctx);
    for (e, c) in p {
        let s = S::hbar_power(ctx.scalar_ctx(), hbar).scale(c);
        f.add_assign_ref(&F::term(
            ctx,
            Monomial {
                x: e.to_vec(),
                weight: weight(0),
                xi: 0,
            },
            s,
        ));
    }
    f
}

#[test]
fn moyal_matches_tensor_oracle() {
    let ctx = SymplecticContext::standard(4, 0, 0, 6).unwrap();
    let mut rng = Pcg32::seed_from_u64(17);
    for _ in 0..12 {
        let f = random_poly(&mut rng, 3, 4);
        let g = random_poly(&mut rng, 3, 4);
        let mut b = BiPoly::new();
        for (l, a) in &f {
            for (r, c) in &g {
                *b.entry((*l, *r)).or_insert_with(Q::zero) += a * c;
            }
        }
        // sum over odd p of hbar^{p-1} / p! P^p
        let mut expect = F::zero(&ctx);
        let mut fact = Q::one();
        for p in 1..=7u32 {
            fact *= q(p as i64);
            b = apply_p(&b);
            if p % 2 == 1 {
                let term: Poly = multiply_out(&b).into_iter().map(|(e, c)| (e, c / fact.clone())).collect();
                expect.add_assign_ref(&to_superfunction(&ctx, &term, p - 1));
            }
            if p == 1 {
                let pb = to_superfunction(&ctx, &multiply_out(&b), 0);
                let ff = to_superfunction(&ctx, &f, 0);
                let gg = to_superfunction(&ctx, &g, 0);
                assert_eq!(Cochain::poisson(&ctx).eval(&[ff, gg]).unwrap(), pb);
            }
        }
        let ff = to_superfunction(&ctx, &f, 0);
        let gg = to_superfunction(&ctx, &g, 0);
        let got = Cochain::moyal(&ctx, S::one(ctx.scalar_ctx())).eval(&[ff, gg]).unwrap();
        assert_eq!(got, expect);
    }
}

/// Sign of sorting the index word, or 0 on a repeat.
fn sort_sign(word: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] == word[j] {
                return 0;
            }
            if word[i] > word[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[test]
fn grassmann_products_match_permutation_signs() {
    let ctx = SymplecticContext::standard(0, 5, 0, 0).unwrap();
    let mut rng = Pcg32::seed_from_u64(3);
    for _ in 0..200 {
        let len = rng.gen_range(0..=5);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..5)).collect();
        let mut product = F::one(&ctx);
        for &a in &word {
            product = product.mul_ref(&F::xi(&ctx, a));
        }
        let mut sorted = F::one(&ctx);
        let mut w = word.clone();
        w.sort();
        for &a in &w {
            sorted = sorted.mul_ref(&F::xi(&ctx, a));
        }
        assert_eq!(product, sorted.scale_ratio(sort_sign(&word), 1), "{word:?}");
    }
}

/// `int x^{2a} exp(-c x^2 / 2) dx = (2a-1)!! c^{-a} sqrt(2 pi / c)`.
#[test]
fn gaussian_moments_match_closed_form() {
    let ctx = SymplecticContext::standard(2, 0, 0, 0).unwrap();
    let double_factorial = |a: u32| -> i64 { (1..2 * a as i64).step_by(2).product() };
    for c in [Rational64::new(1, 1), Rational64::new(2, 1), Rational64::new(1, 3), Rational64::new(3, 2)] {
        for (a, b) in [(0u32, 0u32), (1, 0), (1, 1), (2, 1), (0, 3)] {
            let f = F::term(
                &ctx,
                Monomial {
                    x: vec![2 * a, 2 * b],
                    weight: c,
                    xi: 0,
                },
                S::one(ctx.scalar_ctx()),
            );
            // two factors of sqrt(2 pi / c) give 2 pi / c
            let cq = Q::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
            let mut r = q(2 * double_factorial(a) * double_factorial(b)) / cq.clone();
            for _ in 0..a + b {
                r /= cq.clone();
            }
            let expect = S::from_radical(ctx.scalar_ctx(), RadicalNumber::pi_half_power(2).scale(&r));
            assert_eq!(f.integral_bar().unwrap(), expect, "c={c} a={a} b={b}");
        }
    }
}

/// One odd variable: the bar integral reads off the coefficient of `xi1`.
#[test]
fn berezin_integral_of_one_odd_variable() {
    let ctx = SymplecticContext::standard(0, 1, 1, 2).unwrap();
    let sc = ctx.scalar_ctx();
    let th = S::theta(sc, 0).unwrap();
    let f = F::constant(&ctx, S::from_int(sc, 5)).add_ref(&F::xi(&ctx, 0).scale_left(&th).scale_ratio(3, 1));
    // th xi: moving th past the odd measure costs a sign
    assert_eq!(f.integral_bar().unwrap(), th.scale(&q(-3)));
}
