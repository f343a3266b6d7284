//! Poisson superbracket, antibracket and the Moyal-type superbracket.
//!
//! All three are computed termwise from left/right derivatives, so every
//! Koszul sign is fixed by the term being differentiated; there is no need to
//! split inputs into homogeneous parts beforehand.

use crate::scalars::{Coefficient, Scalar};
use crate::superfunc::{SuperFuncError, SuperFunction, Var};

/// `{f, g} = sum_{A,B} (f <-d_A) omega^{AB} (d_B g)`.
pub fn poisson_bracket<Q: Coefficient>(f: &SuperFunction<Q>, g: &SuperFunction<Q>) -> SuperFunction<Q> {
    let ctx = f.context().clone();
    let mut out = SuperFunction::zero(&ctx);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    for (a, b, w) in ctx.omega_entries() {
        let fa = f.right_deriv(a);
        if fa.is_zero() {
            continue;
        }
        let gb = g.left_deriv(b);
        if gb.is_zero() {
            continue;
        }
        out.add_assign_ref(&fa.mul_ref(&gb).scale_ratio(w, 1));
    }
    out
}

/// `[f, g] = sum_i (f <-d_{x_i})(d_{xi_i} g) - (f <-d_{xi_i})(d_{x_i} g)`.
pub fn antibracket<Q: Coefficient>(
    f: &SuperFunction<Q>,
    g: &SuperFunction<Q>,
) -> Result<SuperFunction<Q>, SuperFuncError> {
    let ctx = f.context().clone();
    if !ctx.is_balanced() {
        return Err(SuperFuncError::NotBalanced {
            n_plus: ctx.n_plus,
            n_minus: ctx.n_minus,
        });
    }
    let mut out = SuperFunction::zero(&ctx);
    for i in 0..ctx.n_plus {
        let fx = f.right_deriv(Var::X(i));
        if !fx.is_zero() {
            out.add_assign_ref(&fx.mul_ref(&g.left_deriv(Var::Xi(i))));
        }
        let fxi = f.right_deriv(Var::Xi(i));
        if !fxi.is_zero() {
            out = out.sub_ref(&fxi.mul_ref(&g.left_deriv(Var::X(i))));
        }
    }
    Ok(out)
}

/// The `p`-th power of the Poisson bidifferential operator
/// `<-d_A omega^{AB} d_B`.
///
/// Powers are taken in nested form, `f <-d_{A1} ... <-d_{Ap} omega omega
/// d_{Bp} ... d_{B1} g`. The elementary pair operators commute in this form,
/// so the power expands multinomially over the nonzero metric entries; odd
/// pairs appear at most once since `d_xi^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BidiffPower {
    order: u32,
}

impl BidiffPower {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "bidifferential power must be positive");
        BidiffPower { order }
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn apply<Q: Coefficient>(self, f: &SuperFunction<Q>, g: &SuperFunction<Q>) -> SuperFunction<Q> {
        let ctx = f.context().clone();
        let mut out = SuperFunction::zero(&ctx);
        if f.is_zero() || g.is_zero() {
            return out;
        }
        let entries = ctx.omega_entries();
        let mut mult = vec![0u32; entries.len()];
        expand(
            &entries,
            0,
            self.order,
            f.clone(),
            g.clone(),
            &mut mult,
            self.order,
            &mut out,
        );
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn expand<Q: Coefficient>(
    entries: &[(Var, Var, i64)],
    idx: usize,
    remaining: u32,
    fd: SuperFunction<Q>,
    gd: SuperFunction<Q>,
    mult: &mut Vec<u32>,
    order: u32,
    out: &mut SuperFunction<Q>,
) {
    if remaining == 0 {
        // p! / prod m! * prod w^m
        let mut num: i64 = (1..=order as i64).product();
        let mut den: i64 = 1;
        for (m, (_, _, w)) in mult.iter().zip(entries) {
            den *= (1..=*m as i64).product::<i64>();
            num *= w.pow(*m);
        }
        out.add_assign_ref(&fd.mul_ref(&gd).scale_ratio(num, den));
        return;
    }
    if idx == entries.len() {
        return;
    }
    let (a, b, _) = entries[idx];
    let cap = if a.parity().is_odd() { remaining.min(1) } else { remaining };
    let mut f_cur = fd;
    let mut g_cur = gd;
    for m in 0..=cap {
        if m > 0 {
            f_cur = f_cur.right_deriv(a);
            g_cur = g_cur.left_deriv(b);
            if f_cur.is_zero() || g_cur.is_zero() {
                break;
            }
        }
        mult[idx] = m;
        expand(
            entries,
            idx + 1,
            remaining - m,
            f_cur.clone(),
            g_cur.clone(),
            mult,
            order,
            out,
        );
    }
    mult[idx] = 0;
}

pub fn bidiff_power<Q: Coefficient>(f: &SuperFunction<Q>, g: &SuperFunction<Q>, p: u32) -> SuperFunction<Q> {
    BidiffPower::new(p).apply(f, g)
}

/// Total polynomial degree if no term carries a Gaussian weight.
fn polynomial_degree<Q: Coefficient>(f: &SuperFunction<Q>) -> Option<u32> {
    let mut deg = 0;
    for (m, _) in f.terms() {
        if m.weight != num_rational::Rational64::from_integer(0) {
            return None;
        }
        deg = deg.max(m.x_degree() + m.xi_degree());
    }
    Some(deg)
}

/// `M(f, g) = sum_{p odd} (hbar kappa)^{p-1} / p! * P^p(f, g)`, truncated at
/// the context's hbar order.
pub fn moyal_bracket<Q: Coefficient>(
    f: &SuperFunction<Q>,
    g: &SuperFunction<Q>,
    kappa: &Scalar<Q>,
) -> SuperFunction<Q> {
    let ctx = f.context().clone();
    let sctx = ctx.scalar_ctx();
    let hmax = ctx.hbar_max;
    let mut out = SuperFunction::zero(&ctx);
    let (Some(fmin), Some(gmin)) = (f.min_hbar(), g.min_hbar()) else {
        return out;
    };
    let degree_cap = match (polynomial_degree(f), polynomial_degree(g)) {
        (Some(a), Some(b)) => a.min(b),
        _ => u32::MAX,
    };
    let hk = Scalar::hbar_power(sctx, 1).mul_ref(&kappa.with_context(sctx));
    let mut p = 1u32;
    while p <= degree_cap {
        let mut fact = Q::one();
        for k in 1..=p {
            fact = fact * Q::from_u64_int(k as u64);
        }
        let prefactor = hk.pow(p - 1).scale(&(Q::one() / fact));
        let Some(dmin) = prefactor.min_hbar() else {
            break;
        };
        if dmin + fmin + gmin > hmax {
            break;
        }
        let budget = hmax - dmin;
        let ft = f.truncate_hbar(budget - gmin);
        let gt = g.truncate_hbar(budget - fmin);
        let term = bidiff_power(&ft, &gt, p);
        out.add_assign_ref(&term.scale_left(&prefactor));
        p += 2;
    }
    out
}
