//! Superfunctions on `R^{n+} x G^{n-}` with coefficients in [`Scalar`].
//!
//! Compactly supported test functions are modeled by Gaussian-weighted
//! polynomials: every term is
//!
//! ```text
//! scalar * x^e * exp(-(c/2)|x|^2) * xi_{a1} ... xi_{ar}     (a1 < ... < ar)
//! ```
//!
//! with a nonnegative rational weight `c`. Terms with `c > 0` stand for the
//! class `D` (closed under products and derivatives, exactly integrable,
//! boundary terms vanish); plain polynomials (`c = 0`) stand for `E`. The
//! odd parameters live inside the scalar, to the left of the `xi` monomial.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::scalars::{
    join_signed, wedge_masks, Coefficient, Parity, RadicalNumber, Scalar, ScalarContext,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperFuncError {
    #[error("n_plus must be even for the symplectic form, got {0}")]
    OddNPlus(usize),
    #[error("lambda has length {got}, expected n_minus = {expected}")]
    LambdaLength { got: usize, expected: usize },
    #[error("lambda entries must be +1 or -1")]
    LambdaValue,
    #[error("too many odd variables ({0}, at most 31)")]
    TooManyOdd(usize),
    #[error("not in D: term {0} is not integrable")]
    NotIntegrable(String),
    #[error("operation needs n_plus = n_minus, got {n_plus} and {n_minus}")]
    NotBalanced { n_plus: usize, n_minus: usize },
    #[error("superfunction context mismatch")]
    ContextMismatch,
    #[error("variable {0} out of range")]
    VarOutOfRange(String),
    #[error("Gaussian weight must be nonnegative, got {0}")]
    NegativeWeight(Rational64),
}

/// Dimensions, odd metric signs, odd parameters and truncation order.
///
/// The even block of the metric is the canonical symplectic form on the
/// consecutive pairs `(x1, x2), (x3, x4), ...`, i.e. `omega^{2i-1, 2i} = 1`;
/// the odd block is `diag(lambda)`. An odd `n_plus` is accepted only for
/// antibracket contexts (`n_plus = n_minus`), where the even block is unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticContext {
    pub n_plus: usize,
    pub n_minus: usize,
    pub lambda: Vec<i8>,
    pub theta_count: usize,
    pub hbar_max: u32,
}

pub type Ctx = Arc<SymplecticContext>;

impl SymplecticContext {
    pub fn new(
        n_plus: usize,
        n_minus: usize,
        lambda: Vec<i8>,
        theta_count: usize,
        hbar_max: u32,
    ) -> Result<Ctx, SuperFuncError> {
        if n_plus % 2 != 0 && n_plus != n_minus {
            return Err(SuperFuncError::OddNPlus(n_plus));
        }
        if n_minus > 31 {
            return Err(SuperFuncError::TooManyOdd(n_minus));
        }
        if lambda.len() != n_minus {
            return Err(SuperFuncError::LambdaLength {
                got: lambda.len(),
                expected: n_minus,
            });
        }
        if lambda.iter().any(|l| *l != 1 && *l != -1) {
            return Err(SuperFuncError::LambdaValue);
        }
        Ok(Arc::new(SymplecticContext {
            n_plus,
            n_minus,
            lambda,
            theta_count,
            hbar_max,
        }))
    }

    /// All `lambda = +1`.
    pub fn standard(
        n_plus: usize,
        n_minus: usize,
        theta_count: usize,
        hbar_max: u32,
    ) -> Result<Ctx, SuperFuncError> {
        Self::new(n_plus, n_minus, vec![1; n_minus], theta_count, hbar_max)
    }

    pub fn scalar_ctx(&self) -> ScalarContext {
        ScalarContext::new(self.theta_count, self.hbar_max)
    }

    /// Whether the metric is nondegenerate, i.e. `n_plus` is even.
    pub fn has_symplectic_form(&self) -> bool {
        self.n_plus % 2 == 0
    }

    pub fn is_balanced(&self) -> bool {
        self.n_plus == self.n_minus
    }

    /// Collective variables `z_A` in order: all `x`, then all `xi`.
    pub fn variables(&self) -> impl Iterator<Item = Var> {
        let np = self.n_plus;
        let nm = self.n_minus;
        (0..np).map(Var::X).chain((0..nm).map(Var::Xi))
    }

    /// `omega^{AB}` as an integer.
    pub fn omega(&self, a: Var, b: Var) -> i64 {
        match (a, b) {
            (Var::X(i), Var::X(j)) => {
                if i / 2 != j / 2 || i == j {
                    0
                } else if i % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            (Var::Xi(a), Var::Xi(b)) if a == b => self.lambda[a] as i64,
            _ => 0,
        }
    }

    /// Nonzero entries of the metric.
    pub fn omega_entries(&self) -> Vec<(Var, Var, i64)> {
        let mut out = Vec::new();
        for a in self.variables() {
            for b in self.variables() {
                let w = self.omega(a, b);
                if w != 0 {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    pub fn with_hbar_max(&self, hbar_max: u32) -> Ctx {
        Arc::new(SymplecticContext {
            hbar_max,
            ..self.clone()
        })
    }
}

/// A collective coordinate, 0-based within its kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Xi(usize),
}

impl Var {
    pub fn parity(self) -> Parity {
        match self {
            Var::X(_) => Parity::Even,
            Var::Xi(_) => Parity::Odd,
        }
    }

    fn check(self, ctx: &SymplecticContext) -> Result<(), SuperFuncError> {
        let ok = match self {
            Var::X(i) => i < ctx.n_plus,
            Var::Xi(a) => a < ctx.n_minus,
        };
        if ok {
            Ok(())
        } else {
            Err(SuperFuncError::VarOutOfRange(self.to_string()))
        }
    }
}

impl Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Xi(a) => write!(f, "xi{}", a + 1),
        }
    }
}

/// `x^x * exp(-(weight/2)|x|^2) * xi_mask` with the xi factors ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub weight: Rational64,
    pub xi: u32,
}

impl Monomial {
    pub fn one(n_plus: usize) -> Self {
        Monomial {
            x: vec![0; n_plus],
            weight: Rational64::zero(),
            xi: 0,
        }
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.count_ones()
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.xi == 0 && self.weight.is_zero() && self.x.iter().all(|e| *e == 0)
    }

    fn render(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push(format!("x{}", i + 1)),
                e => out.push(format!("x{}^{}", i + 1, e)),
            }
        }
        if !self.weight.is_zero() {
            out.push(format!("gauss({})", self.weight));
        }
        for a in 0..32 {
            if self.xi & (1 << a) != 0 {
                out.push(format!("xi{}", a + 1));
            }
        }
        out
    }
}

/// Finite sum of `Scalar * Monomial` terms.
#[derive(Clone)]
pub struct SuperFunction<Q> {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Scalar<Q>>,
}

impl<Q: Coefficient> PartialEq for SuperFunction<Q> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx) && self.terms == other.terms
    }
}

impl<Q: Coefficient> SuperFunction<Q> {
    pub fn zero(ctx: &Ctx) -> Self {
        SuperFunction {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, s: Scalar<Q>) -> Self {
        Self::term(ctx, Monomial::one(ctx.n_plus), s)
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Scalar::one(ctx.scalar_ctx()))
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, Scalar::from_int(ctx.scalar_ctx(), n))
    }

    pub fn term(ctx: &Ctx, mono: Monomial, s: Scalar<Q>) -> Self {
        let mut out = Self::zero(ctx);
        out.accumulate(mono, s);
        out
    }

    pub fn var(ctx: &Ctx, v: Var) -> Result<Self, SuperFuncError> {
        v.check(ctx)?;
        let mut mono = Monomial::one(ctx.n_plus);
        match v {
            Var::X(i) => mono.x[i] = 1,
            Var::Xi(a) => mono.xi = 1 << a,
        }
        Ok(Self::term(ctx, mono, Scalar::one(ctx.scalar_ctx())))
    }

    /// `x_{i+1}` (0-based index).
    pub fn x(ctx: &Ctx, i: usize) -> Self {
        Self::var(ctx, Var::X(i)).expect("x index in range")
    }

    /// `xi_{a+1}` (0-based index).
    pub fn xi(ctx: &Ctx, a: usize) -> Self {
        Self::var(ctx, Var::Xi(a)).expect("xi index in range")
    }

    /// `exp(-(c/2)|x|^2)`.
    pub fn gauss(ctx: &Ctx, c: Rational64) -> Result<Self, SuperFuncError> {
        if c < Rational64::zero() {
            return Err(SuperFuncError::NegativeWeight(c));
        }
        let mut mono = Monomial::one(ctx.n_plus);
        if ctx.n_plus > 0 {
            mono.weight = c;
        }
        Ok(Self::term(ctx, mono, Scalar::one(ctx.scalar_ctx())))
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn scalar_ctx(&self) -> ScalarContext {
        self.ctx.scalar_ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar<Q>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, mono: Monomial, s: Scalar<Q>) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c = c.add_ref(&s);
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, s);
            }
        }
    }

    fn same_ctx(&self, other: &Self) -> Result<(), SuperFuncError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(SuperFuncError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SuperFuncError> {
        self.same_ctx(other)?;
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.accumulate(m.clone(), s.clone());
        }
        Ok(out)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.try_add(other).expect("superfunction context mismatch")
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.same_ctx(other).expect("superfunction context mismatch");
        for (m, s) in &other.terms {
            self.accumulate(m.clone(), s.clone());
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        self.map_scalars(|_, s| s.neg_ref())
    }

    pub fn negate_if(&self, negate: bool) -> Self {
        if negate {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    /// Applies `f` to every coefficient, keeping the monomials.
    pub fn map_scalars(&self, mut f: impl FnMut(&Monomial, &Scalar<Q>) -> Scalar<Q>) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, s) in &self.terms {
            out.accumulate(m.clone(), f(m, s));
        }
        out
    }

    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        SuperFunction {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, s)| (m.clone(), s.clone()))
                .collect(),
        }
    }

    /// Supercommutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SuperFuncError> {
        self.same_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (ma, sa) in &self.terms {
            for (mb, sb) in &other.terms {
                let Some((xi, odd)) = wedge_masks(ma.xi, mb.xi) else {
                    continue;
                };
                // move the scalar of b (thetas) across the xi factors of a
                let sb = sb.twist(ma.xi_degree() % 2 == 1);
                let s = sa.mul_ref(&sb).negate_if(odd);
                if s.is_zero() {
                    continue;
                }
                let x = ma.x.iter().zip(&mb.x).map(|(a, b)| a + b).collect();
                out.accumulate(
                    Monomial {
                        x,
                        weight: ma.weight + mb.weight,
                        xi,
                    },
                    s,
                );
            }
        }
        Ok(out)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("superfunction context mismatch")
    }

    /// `s * self`.
    pub fn scale_left(&self, s: &Scalar<Q>) -> Self {
        self.map_scalars(|_, c| s.mul_ref(c))
    }

    /// `self * s`; thetas in `s` cross the xi factors.
    pub fn scale_right(&self, s: &Scalar<Q>) -> Self {
        self.map_scalars(|m, c| c.mul_ref(&s.twist(m.xi_degree() % 2 == 1)))
    }

    pub fn scale(&self, q: &Q) -> Self {
        self.map_scalars(|_, c| c.scale(q))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&Q::from_ratio(num, den))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.ctx);
        for _ in 0..n {
            out = out.mul_ref(self);
        }
        out
    }

    // -- parity --------------------------------------------------------------

    /// Grassmann parity of every component: xi degree plus theta weight.
    /// `None` when mixed; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut found = None;
        for (m, s) in &self.terms {
            for (k, _) in s.terms() {
                let p = Parity::from_bit(m.xi_degree() + k.theta.weight());
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Reversed parity used with the antibracket.
    pub fn anti_parity(&self) -> Option<Parity> {
        self.parity().map(Parity::flip)
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = Self::zero(&self.ctx);
        let mut odd = Self::zero(&self.ctx);
        for (m, s) in &self.terms {
            let (se, so) = s.split_parity();
            let (to_even, to_odd) = if m.xi_degree() % 2 == 0 {
                (se, so)
            } else {
                (so, se)
            };
            even.accumulate(m.clone(), to_even);
            odd.accumulate(m.clone(), to_odd);
        }
        (even, odd)
    }

    /// Parity-homogeneous components with their parity (nonzero ones only).
    pub fn homogeneous_parts(&self) -> Vec<(Parity, Self)> {
        if let Some(p) = self.parity() {
            return vec![(p, self.clone())];
        }
        let (e, o) = self.split_parity();
        let mut out = Vec::new();
        if !e.is_zero() {
            out.push((Parity::Even, e));
        }
        if !o.is_zero() {
            out.push((Parity::Odd, o));
        }
        out
    }

    // -- hbar / theta --------------------------------------------------------

    pub fn truncate_hbar(&self, max: u32) -> Self {
        self.map_scalars(|_, s| s.truncate(max))
    }

    pub fn hbar_coefficient(&self, m: u32) -> Self {
        self.map_scalars(|_, s| s.hbar_coefficient(m))
    }

    pub fn min_hbar(&self) -> Option<u32> {
        self.terms.values().filter_map(|s| s.min_hbar()).min()
    }

    pub fn theta_grade(&self, w: u32) -> Self {
        self.map_scalars(|_, s| s.theta_grade(w))
    }

    pub fn max_theta_weight(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|s| s.terms().map(|(k, _)| k.theta.weight()).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_theta_free(&self) -> bool {
        self.terms.values().all(|s| s.is_theta_free())
    }

    /// Only even hbar exponents `>= min` in every coefficient.
    pub fn in_even_hbar_ideal(&self, min: u32) -> bool {
        self.terms.values().all(|s| s.in_even_hbar_ideal(min))
    }

    /// The scalar, if the function is constant.
    pub fn as_constant(&self) -> Option<Scalar<Q>> {
        match self.terms.len() {
            0 => Some(Scalar::zero(self.scalar_ctx())),
            1 => {
                let (m, s) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| s.clone())
            }
            _ => None,
        }
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(0)
    }

    // -- classes -------------------------------------------------------------

    /// Every term is Gaussian weighted (trivially true when `n_plus = 0`).
    pub fn is_d_class(&self) -> bool {
        self.ctx.n_plus == 0 || self.terms.keys().all(|m| m.weight > Rational64::zero())
    }

    /// The terms with a Gaussian weight.
    pub fn d_part(&self) -> Self {
        if self.ctx.n_plus == 0 {
            return self.clone();
        }
        self.filter_terms(|m| m.weight > Rational64::zero())
    }

    /// The polynomial terms (weight zero).
    pub fn polynomial_part(&self) -> Self {
        if self.ctx.n_plus == 0 {
            return Self::zero(&self.ctx);
        }
        self.filter_terms(|m| m.weight.is_zero())
    }

    /// Constant term (the scalar multiplying the unit monomial).
    pub fn constant_term(&self) -> Scalar<Q> {
        self.terms
            .get(&Monomial::one(self.ctx.n_plus))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.scalar_ctx()))
    }

    /// Canonical representative in `S = E/Z`: drops the Gaussian terms and
    /// the constant term.
    pub fn normalize_mod_z(&self) -> Self {
        self.filter_terms(|m| m.weight.is_zero() && !m.is_constant())
    }

    /// Whether the Berezin integral of every term is defined: terms that
    /// survive the Grassmann integration must carry a Gaussian weight.
    pub fn is_bar_admissible(&self) -> bool {
        let full = self.full_xi_mask();
        self.ctx.n_plus == 0
            || self
                .terms
                .keys()
                .all(|m| m.xi != full || m.weight > Rational64::zero())
    }

    fn full_xi_mask(&self) -> u32 {
        if self.ctx.n_minus == 0 {
            0
        } else {
            (1u32 << self.ctx.n_minus) - 1
        }
    }

    // -- integral ------------------------------------------------------------

    /// `bar f = int dx int dxi f`, normalized by `int dxi xi1...xi_{n-} = 1`
    /// with `dxi` standing to the left of the integrand.
    ///
    /// The Grassmann integral is taken first: only terms carrying the full xi
    /// monomial survive, and those must be Gaussian weighted. Per even
    /// variable, `int x^{2p} exp(-c x^2/2) dx = (2p-1)!! c^{-p} sqrt(2 pi/c)`.
    pub fn integral_bar(&self) -> Result<Scalar<Q>, SuperFuncError> {
        let full = self.full_xi_mask();
        let odd_measure = self.ctx.n_minus % 2 == 1;
        let mut out = Scalar::zero(self.scalar_ctx());
        for (m, s) in &self.terms {
            if m.xi != full {
                continue;
            }
            if self.ctx.n_plus > 0 && m.weight.is_zero() {
                let t = SuperFunction::term(&self.ctx, m.clone(), s.clone());
                return Err(SuperFuncError::NotIntegrable(t.to_string()));
            }
            let mut moment = RadicalNumber::<Q>::one();
            for e in &m.x {
                match gaussian_moment::<Q>(*e, m.weight) {
                    Some(r) => moment = moment.mul_ref(&r),
                    None => {
                        moment = RadicalNumber::zero();
                        break;
                    }
                }
            }
            if moment.is_zero() {
                continue;
            }
            out = out.add_ref(&s.twist(odd_measure).scale_radical(&moment));
        }
        Ok(out)
    }

    // -- derivatives ---------------------------------------------------------

    /// Left derivative `d/dz_A f`.
    pub fn left_deriv(&self, v: Var) -> Self {
        v.check(&self.ctx).expect("variable in range");
        let mut out = Self::zero(&self.ctx);
        match v {
            Var::X(i) => {
                for (m, s) in &self.terms {
                    let e = m.x[i];
                    if e > 0 {
                        let mut mm = m.clone();
                        mm.x[i] -= 1;
                        out.accumulate(mm, s.scale(&Q::from_u64_int(e as u64)));
                    }
                    if !m.weight.is_zero() {
                        let mut mm = m.clone();
                        mm.x[i] += 1;
                        let c = Q::from_ratio(*m.weight.numer(), *m.weight.denom());
                        out.accumulate(mm, s.scale(&(-c)));
                    }
                }
            }
            Var::Xi(a) => {
                let bit = 1u32 << a;
                for (m, s) in &self.terms {
                    if m.xi & bit == 0 {
                        continue;
                    }
                    let before = (m.xi & (bit - 1)).count_ones();
                    let mut mm = m.clone();
                    mm.xi &= !bit;
                    // the derivative passes the thetas, then the lower xi's
                    out.accumulate(mm, s.twist(true).negate_if(before % 2 == 1));
                }
            }
        }
        out
    }

    /// Right derivative `f <-d/dz_A`.
    pub fn right_deriv(&self, v: Var) -> Self {
        match v {
            Var::X(_) => self.left_deriv(v),
            Var::Xi(a) => {
                v.check(&self.ctx).expect("variable in range");
                let bit = 1u32 << a;
                let mut out = Self::zero(&self.ctx);
                for (m, s) in &self.terms {
                    if m.xi & bit == 0 {
                        continue;
                    }
                    let after = (m.xi >> (a + 1)).count_ones();
                    let mut mm = m.clone();
                    mm.xi &= !bit;
                    out.accumulate(mm, s.negate_if(after % 2 == 1));
                }
                out
            }
        }
    }

    /// Repeated left derivative, `vars` applied last-to-first:
    /// `d_{v0} d_{v1} ... d_{vn} f`.
    pub fn left_derivs(&self, vars: &[Var]) -> Self {
        let mut out = self.clone();
        for v in vars.iter().rev() {
            if out.is_zero() {
                break;
            }
            out = out.left_deriv(*v);
        }
        out
    }

    /// Repeated right derivative, applied first-to-last:
    /// `f <-d_{v0} <-d_{v1} ... <-d_{vn}`.
    pub fn right_derivs(&self, vars: &[Var]) -> Self {
        let mut out = self.clone();
        for v in vars {
            if out.is_zero() {
                break;
            }
            out = out.right_deriv(*v);
        }
        out
    }

    // -- differential operators ----------------------------------------------

    /// `N_z f = sum_A z_A d_A f`.
    pub fn number_z(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, s) in &self.terms {
            let deg = m.x_degree() + m.xi_degree();
            out.accumulate(m.clone(), s.scale(&Q::from_u64_int(deg as u64)));
            if !m.weight.is_zero() {
                let c = Q::from_ratio(*m.weight.numer(), *m.weight.denom());
                for i in 0..m.x.len() {
                    let mut mm = m.clone();
                    mm.x[i] += 2;
                    out.accumulate(mm, s.scale(&(-c.clone())));
                }
            }
        }
        out
    }

    /// `N_xi f = sum_a xi_a d/dxi_a f`.
    pub fn number_xi(&self) -> Self {
        self.map_scalars(|m, s| s.scale(&Q::from_u64_int(m.xi_degree() as u64)))
    }

    /// `E_z f = f - (1/2) N_z f`.
    pub fn euler(&self) -> Self {
        self.sub_ref(&self.number_z().scale_ratio(1, 2))
    }

    /// `(1 - N_xi) f`.
    pub fn one_minus_number_xi(&self) -> Self {
        self.map_scalars(|m, s| s.scale(&Q::from_ratio(1 - m.xi_degree() as i64, 1)))
    }

    /// `Delta f = sum_i d/dx_i d/dxi_i f`; needs `n_plus = n_minus`.
    pub fn delta_op(&self) -> Result<Self, SuperFuncError> {
        if !self.ctx.is_balanced() {
            return Err(SuperFuncError::NotBalanced {
                n_plus: self.ctx.n_plus,
                n_minus: self.ctx.n_minus,
            });
        }
        let mut out = Self::zero(&self.ctx);
        for i in 0..self.ctx.n_plus {
            out.add_assign_ref(&self.left_deriv(Var::Xi(i)).left_deriv(Var::X(i)));
        }
        Ok(out)
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, s) in &self.terms {
            let factors = m.render();
            let sc = s.to_string();
            if factors.is_empty() {
                if s.len() == 1 {
                    parts.push(sc);
                } else {
                    parts.push(format!("({sc})"));
                }
                continue;
            }
            let f = factors.join("*");
            if sc == "1" {
                parts.push(f);
            } else if sc == "-1" {
                parts.push(format!("-{f}"));
            } else if s.len() == 1 && !sc.contains(" + ") && !sc.contains(" - ") {
                parts.push(format!("{sc}*{f}"));
            } else {
                parts.push(format!("({sc})*{f}"));
            }
        }
        join_signed(&parts)
    }
}

/// `int x^e exp(-c x^2/2) dx`, or `None` for odd `e`.
fn gaussian_moment<Q: Coefficient>(e: u32, c: Rational64) -> Option<RadicalNumber<Q>> {
    if e % 2 == 1 {
        return None;
    }
    let p = e / 2;
    let a = *c.numer() as u64;
    let b = *c.denom() as u64;
    let double_fact: u64 = (1..e as u64).step_by(2).product();
    // (2p-1)!! (b/a)^p * sqrt(2ab)/a * sqrt(pi)
    let ratio = Q::from_u64_int(double_fact) * Q::from_u64_int(b.pow(p))
        / (Q::from_u64_int(a.pow(p)) * Q::from_u64_int(a));
    Some(
        RadicalNumber::sqrt_int(2 * a * b)
            .mul_ref(&RadicalNumber::pi_half_power(1))
            .scale(&ratio),
    )
}

impl<Q: Coefficient> Debug for SuperFunction<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Rendered in the expression syntax accepted by [`crate::parse`].
impl<Q: Coefficient> Display for SuperFunction<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<Q: Coefficient> Add for &SuperFunction<Q> {
    type Output = SuperFunction<Q>;
    fn add(self, rhs: &SuperFunction<Q>) -> SuperFunction<Q> {
        self.add_ref(rhs)
    }
}

impl<Q: Coefficient> Sub for &SuperFunction<Q> {
    type Output = SuperFunction<Q>;
    fn sub(self, rhs: &SuperFunction<Q>) -> SuperFunction<Q> {
        self.sub_ref(rhs)
    }
}

impl<Q: Coefficient> Mul for &SuperFunction<Q> {
    type Output = SuperFunction<Q>;
    fn mul(self, rhs: &SuperFunction<Q>) -> SuperFunction<Q> {
        self.mul_ref(rhs)
    }
}

impl<Q: Coefficient> Neg for &SuperFunction<Q> {
    type Output = SuperFunction<Q>;
    fn neg(self) -> SuperFunction<Q> {
        self.neg_ref()
    }
}

/// Gaussian weight from an integer.
pub fn weight(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}
