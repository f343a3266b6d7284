//! Exact coefficient ring.
//!
//! A [`Scalar`] is a truncated polynomial in `hbar` whose coefficients live in
//! the exterior algebra on the odd parameters `th1..thk`, each of those in turn
//! carrying a [`RadicalNumber`]: a rational combination of `pi^(j/2) * sqrt(r)`
//! with `r` square-free. That is the smallest ring closed under the products,
//! derivatives and Gaussian integrals used elsewhere in the crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, Signed};
use thiserror::Error;

/// Field of rational coefficients the ring is built over.
///
/// Exact types (`BigRational`, `Rational64`) are what the verification code
/// is meant for. `f64` satisfies the bounds too and is occasionally handy for
/// eyeballing magnitudes, but exact-zero checks are meaningless with it.
pub trait Coefficient:
    Num + Signed + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("numerator representable")
            / Self::from_i64(den).expect("denominator representable")
    }

    fn from_u64_int(n: u64) -> Self {
        Self::from_u64(n).expect("integer representable")
    }
}

impl<T> Coefficient for T where
    T: Num + Signed + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("scalar context mismatch: {left:?} vs {right:?}")]
    ContextMismatch {
        left: ScalarContext,
        right: ScalarContext,
    },
    #[error("theta index {index} out of range (k = {k})")]
    ThetaOutOfRange { index: usize, k: usize },
}

/// Parity in Z/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// `(-1)^(self * other)`, as a boolean "negate?".
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

// ---------------------------------------------------------------------------
// Radicals
// ---------------------------------------------------------------------------

/// Key `pi^(pi_half/2) * sqrt(radicand)`; `radicand` is square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalKey {
    pub pi_half: u32,
    pub radicand: u64,
}

impl RadicalKey {
    pub const ONE: RadicalKey = RadicalKey {
        pi_half: 0,
        radicand: 1,
    };
}

/// Splits `n` into `(outside, square_free)` with `n = outside^2 * square_free`.
pub fn square_free_split(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    inside *= n;
    (outside, inside)
}

/// Rational linear combination of `pi^(j/2) sqrt(r)`.
#[derive(Clone, PartialEq)]
pub struct RadicalNumber<Q> {
    terms: BTreeMap<RadicalKey, Q>,
}

impl<Q: Coefficient> RadicalNumber<Q> {
    pub fn zero() -> Self {
        RadicalNumber {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_coeff(Q::one())
    }

    pub fn from_coeff(q: Q) -> Self {
        Self::monomial(RadicalKey::ONE, q)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_coeff(Q::from_ratio(n, 1))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_coeff(Q::from_ratio(num, den))
    }

    pub fn monomial(key: RadicalKey, q: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(key, q);
        }
        RadicalNumber { terms }
    }

    /// `sqrt(n)` for a positive integer, normalized.
    pub fn sqrt_int(n: u64) -> Self {
        let (outside, inside) = square_free_split(n);
        Self::monomial(
            RadicalKey {
                pi_half: 0,
                radicand: inside,
            },
            Q::from_u64_int(outside),
        )
    }

    /// `sqrt(num/den)` for positive integers: `sqrt(num*den)/den`.
    pub fn sqrt_ratio(num: u64, den: u64) -> Self {
        Self::sqrt_int(num * den).scale(&(Q::one() / Q::from_u64_int(den)))
    }

    /// `pi^(half/2)`.
    pub fn pi_half_power(half: u32) -> Self {
        Self::monomial(
            RadicalKey {
                pi_half: half,
                radicand: 1,
            },
            Q::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadicalKey, &Q)> {
        self.terms.iter()
    }

    /// The plain rational value, if no radical is present.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&RadicalKey::ONE).cloned(),
            _ => None,
        }
    }

    fn accumulate(&mut self, key: RadicalKey, q: Q) {
        if q.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.clone() + q;
                c.is_zero()
            }
            None => {
                self.terms.insert(key, q);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalNumber {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.clone() * q.clone()))
                .collect(),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        RadicalNumber {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, -c.clone()))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let (outside, inside) = square_free_split(ka.radicand * kb.radicand);
                let key = RadicalKey {
                    pi_half: ka.pi_half + kb.pi_half,
                    radicand: inside,
                };
                out.accumulate(key, ca.clone() * cb.clone() * Q::from_u64_int(outside));
            }
        }
        out
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (key, c) in &self.terms {
            let mut factors = Vec::new();
            if key.pi_half / 2 > 0 {
                if key.pi_half / 2 == 1 {
                    factors.push("pi".to_string());
                } else {
                    factors.push(format!("pi^{}", key.pi_half / 2));
                }
            }
            if key.pi_half % 2 == 1 {
                factors.push("sqrt(pi)".to_string());
            }
            if key.radicand != 1 {
                factors.push(format!("sqrt({})", key.radicand));
            }
            let coeff = render_coeff(c);
            if factors.is_empty() {
                parts.push(coeff);
            } else if c.is_one() {
                parts.push(factors.join("*"));
            } else if (-c.clone()).is_one() {
                parts.push(format!("-{}", factors.join("*")));
            } else {
                parts.push(format!("{}*{}", coeff, factors.join("*")));
            }
        }
        join_signed(&parts)
    }
}

fn render_coeff<Q: Coefficient>(c: &Q) -> String {
    c.to_string()
}

/// Joins rendered summands with ` + ` / ` - `.
pub(crate) fn join_signed(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

impl<Q: Coefficient> Debug for RadicalNumber<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<Q: Coefficient> Display for RadicalNumber<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

// ---------------------------------------------------------------------------
// Theta monomials
// ---------------------------------------------------------------------------

/// Subset of the odd parameters, as a bitmask (bit `j` is `th{j+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ThetaMonomial(pub u32);

impl ThetaMonomial {
    pub const ONE: ThetaMonomial = ThetaMonomial(0);

    pub fn generator(j: usize) -> Self {
        ThetaMonomial(1 << j)
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn parity(self) -> Parity {
        Parity::from_bit(self.weight())
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    /// Product `self * other` in the exterior algebra: `None` on a repeated
    /// generator, otherwise the merged monomial and whether the reordering
    /// is odd.
    pub fn wedge(self, other: ThetaMonomial) -> Option<(ThetaMonomial, bool)> {
        wedge_masks(self.0, other.0).map(|(m, s)| (ThetaMonomial(m), s))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |j| self.0 & (1 << j) != 0)
    }
}

/// Lexicographic on the exponent vector `(a_1, ..., a_k)`.
impl Ord for ThetaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let first = diff.trailing_zeros();
        if self.0 & (1 << first) == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for ThetaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exterior product of two sorted generator sets given as bitmasks.
/// Returns the union and the parity of the number of transpositions needed to
/// sort `a ++ b`.
pub(crate) fn wedge_masks(a: u32, b: u32) -> Option<(u32, bool)> {
    if a & b != 0 {
        return None;
    }
    // every generator of b jumps over the generators of a with larger index
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> j).count_ones();
        bb &= bb - 1;
    }
    Some((a | b, swaps % 2 == 1))
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Number of odd parameters and the hbar truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScalarContext {
    pub theta_count: usize,
    pub hbar_max: u32,
}

impl ScalarContext {
    pub const DEFAULT_HBAR_MAX: u32 = 6;

    pub fn new(theta_count: usize, hbar_max: u32) -> Self {
        assert!(theta_count <= 31, "at most 31 odd parameters");
        ScalarContext {
            theta_count,
            hbar_max,
        }
    }
}

/// Key of a scalar component: hbar exponent and theta monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarKey {
    pub hbar: u32,
    pub theta: ThetaMonomial,
}

/// Element of `RadicalNumber[hbar]/(hbar^(H+1)) (x) Lambda(th1..thk)`.
#[derive(Clone, PartialEq)]
pub struct Scalar<Q> {
    ctx: ScalarContext,
    terms: BTreeMap<ScalarKey, RadicalNumber<Q>>,
}

impl<Q: Coefficient> Scalar<Q> {
    pub fn zero(ctx: ScalarContext) -> Self {
        Scalar {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: ScalarContext) -> Self {
        Self::from_radical(ctx, RadicalNumber::one())
    }

    pub fn from_radical(ctx: ScalarContext, r: RadicalNumber<Q>) -> Self {
        Self::monomial(
            ctx,
            ScalarKey {
                hbar: 0,
                theta: ThetaMonomial::ONE,
            },
            r,
        )
    }

    pub fn from_coeff(ctx: ScalarContext, q: Q) -> Self {
        Self::from_radical(ctx, RadicalNumber::from_coeff(q))
    }

    pub fn from_int(ctx: ScalarContext, n: i64) -> Self {
        Self::from_radical(ctx, RadicalNumber::from_int(n))
    }

    pub fn from_ratio(ctx: ScalarContext, num: i64, den: i64) -> Self {
        Self::from_radical(ctx, RadicalNumber::from_ratio(num, den))
    }

    /// `hbar^m` (zero if `m` exceeds the truncation order).
    pub fn hbar_power(ctx: ScalarContext, m: u32) -> Self {
        Self::monomial(
            ctx,
            ScalarKey {
                hbar: m,
                theta: ThetaMonomial::ONE,
            },
            RadicalNumber::one(),
        )
    }

    /// The generator `th{j+1}` (0-based `j`).
    pub fn theta(ctx: ScalarContext, j: usize) -> Result<Self, ScalarError> {
        if j >= ctx.theta_count {
            return Err(ScalarError::ThetaOutOfRange {
                index: j + 1,
                k: ctx.theta_count,
            });
        }
        Ok(Self::monomial(
            ctx,
            ScalarKey {
                hbar: 0,
                theta: ThetaMonomial::generator(j),
            },
            RadicalNumber::one(),
        ))
    }

    pub fn monomial(ctx: ScalarContext, key: ScalarKey, r: RadicalNumber<Q>) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() && key.hbar <= ctx.hbar_max {
            terms.insert(key, r);
        }
        Scalar { ctx, terms }
    }

    pub fn context(&self) -> ScalarContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.ctx)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ScalarKey, &RadicalNumber<Q>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, key: ScalarKey, r: RadicalNumber<Q>) {
        if r.is_zero() || key.hbar > self.ctx.hbar_max {
            return;
        }
        let remove = match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.add_ref(&r);
                c.is_zero()
            }
            None => {
                self.terms.insert(key, r);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.ctx != other.ctx {
            return Err(ScalarError::ContextMismatch {
                left: self.ctx,
                right: other.ctx,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, r) in &other.terms {
            out.accumulate(*k, r.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = Self::zero(self.ctx);
        for (ka, ra) in &self.terms {
            for (kb, rb) in &other.terms {
                let hbar = ka.hbar + kb.hbar;
                if hbar > self.ctx.hbar_max {
                    continue;
                }
                let Some((theta, odd)) = ka.theta.wedge(kb.theta) else {
                    continue;
                };
                let mut prod = ra.mul_ref(rb);
                if odd {
                    prod = prod.neg_ref();
                }
                out.accumulate(ScalarKey { hbar, theta }, prod);
            }
        }
        Ok(out)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.try_add(other).expect("scalar context mismatch")
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.try_sub(other).expect("scalar context mismatch")
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("scalar context mismatch")
    }

    pub fn neg_ref(&self) -> Self {
        Scalar {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(k, r)| (*k, r.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Q) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, r) in &self.terms {
            out.accumulate(*k, r.scale(q));
        }
        out
    }

    pub fn scale_radical(&self, r: &RadicalNumber<Q>) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, c) in &self.terms {
            out.accumulate(*k, c.mul_ref(r));
        }
        out
    }

    pub fn negate_if(&self, negate: bool) -> Self {
        if negate {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.ctx);
        for _ in 0..n {
            out = out.mul_ref(self);
        }
        out
    }

    /// Negates the components of odd theta weight when `odd` is set. This is
    /// the sign picked up when an odd object is moved across the scalar.
    pub fn twist(&self, odd: bool) -> Self {
        if !odd {
            return self.clone();
        }
        Scalar {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(k, r)| {
                    if k.theta.parity().is_odd() {
                        (*k, r.neg_ref())
                    } else {
                        (*k, r.clone())
                    }
                })
                .collect(),
        }
    }

    /// Parity in theta weight, `None` when mixed. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for k in self.terms.keys() {
            let p = k.theta.parity();
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Components grouped by theta parity: `(even, odd)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = Self::zero(self.ctx);
        let mut odd = Self::zero(self.ctx);
        for (k, r) in &self.terms {
            if k.theta.parity().is_odd() {
                odd.terms.insert(*k, r.clone());
            } else {
                even.terms.insert(*k, r.clone());
            }
        }
        (even, odd)
    }

    /// Components whose theta monomial has exactly `weight` generators.
    pub fn theta_grade(&self, weight: u32) -> Self {
        self.filter(|k| k.theta.weight() == weight)
    }

    pub fn filter(&self, mut keep: impl FnMut(&ScalarKey) -> bool) -> Self {
        Scalar {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, r)| (*k, r.clone()))
                .collect(),
        }
    }

    /// Drops every component with hbar exponent above `max`.
    pub fn truncate(&self, max: u32) -> Self {
        self.filter(|k| k.hbar <= max)
    }

    /// The coefficient of `hbar^m`, itself a scalar.
    pub fn hbar_coefficient(&self, m: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, r) in &self.terms {
            if k.hbar == m {
                out.terms.insert(
                    ScalarKey {
                        hbar: 0,
                        theta: k.theta,
                    },
                    r.clone(),
                );
            }
        }
        out
    }

    pub fn min_hbar(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.hbar).min()
    }

    pub fn max_hbar(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.hbar).max()
    }

    pub fn is_theta_free(&self) -> bool {
        self.terms.keys().all(|k| k.theta == ThetaMonomial::ONE)
    }

    /// Only even hbar exponents, each at least `min`.
    pub fn in_even_hbar_ideal(&self, min: u32) -> bool {
        self.terms.keys().all(|k| k.hbar % 2 == 0 && k.hbar >= min)
    }

    /// The hbar^0, theta-free part as a radical.
    pub fn constant_part(&self) -> RadicalNumber<Q> {
        self.terms
            .get(&ScalarKey {
                hbar: 0,
                theta: ThetaMonomial::ONE,
            })
            .cloned()
            .unwrap_or_else(RadicalNumber::zero)
    }

    /// Plain rational value, if the scalar is one.
    pub fn as_rational(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, r) = self.terms.iter().next().unwrap();
        if k.hbar != 0 || k.theta != ThetaMonomial::ONE {
            return None;
        }
        r.as_rational()
    }

    /// Re-homes the scalar into another context (truncating as needed).
    pub fn with_context(&self, ctx: ScalarContext) -> Self {
        let mut out = Self::zero(ctx);
        for (k, r) in &self.terms {
            if k.theta.indices().all(|j| j < ctx.theta_count) {
                out.accumulate(*k, r.clone());
            }
        }
        out
    }

    /// Witness `z` with `self = th_j * z`, when `th_j * self = 0`.
    ///
    /// `th_j * a = 0` in the exterior algebra exactly when every component of
    /// `a` already contains `th_j`; the witness drops `th_j` after moving it to
    /// the front, so `th_j * z` reproduces `a` with the sign convention of
    /// [`ThetaMonomial::wedge`]. Returns `None` when the precondition fails.
    pub fn theta_divisibility(&self, j: usize) -> Option<Self> {
        if j >= self.ctx.theta_count {
            return None;
        }
        let mut out = Self::zero(self.ctx);
        for (k, r) in &self.terms {
            if !k.theta.contains(j) {
                return None;
            }
            let rest = ThetaMonomial(k.theta.0 & !(1 << j));
            // th_j * rest = (-1)^{#generators of rest below j} * theta
            let before = (rest.0 & ((1u32 << j) - 1)).count_ones();
            let r = if before % 2 == 1 { r.neg_ref() } else { r.clone() };
            out.accumulate(
                ScalarKey {
                    hbar: k.hbar,
                    theta: rest,
                },
                r,
            );
        }
        Some(out)
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, r) in &self.terms {
            let mut factors = Vec::new();
            match k.hbar {
                0 => {}
                1 => factors.push("h".to_string()),
                m => factors.push(format!("h^{m}")),
            }
            for j in k.theta.indices() {
                factors.push(format!("th{}", j + 1));
            }
            let rad = r.render();
            if factors.is_empty() {
                parts.push(rad);
                continue;
            }
            let f = factors.join("*");
            if rad == "1" {
                parts.push(f);
            } else if rad == "-1" {
                parts.push(format!("-{f}"));
            } else if r.terms.len() == 1 {
                parts.push(format!("{rad}*{f}"));
            } else {
                parts.push(format!("({rad})*{f}"));
            }
        }
        join_signed(&parts)
    }
}

impl<Q: Coefficient> Debug for Scalar<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `p/q`, `sqrt(r)`, `sqrt(pi)`, `h^m`, `th1*th2`; ordered by `(m, theta, radical)`.
impl<Q: Coefficient> Display for Scalar<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<Q: Coefficient> Add for &Scalar<Q> {
    type Output = Scalar<Q>;
    fn add(self, rhs: &Scalar<Q>) -> Scalar<Q> {
        self.add_ref(rhs)
    }
}

impl<Q: Coefficient> Sub for &Scalar<Q> {
    type Output = Scalar<Q>;
    fn sub(self, rhs: &Scalar<Q>) -> Scalar<Q> {
        self.sub_ref(rhs)
    }
}

impl<Q: Coefficient> Mul for &Scalar<Q> {
    type Output = Scalar<Q>;
    fn mul(self, rhs: &Scalar<Q>) -> Scalar<Q> {
        self.mul_ref(rhs)
    }
}

impl<Q: Coefficient> Neg for &Scalar<Q> {
    type Output = Scalar<Q>;
    fn neg(self) -> Scalar<Q> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = Scalar<BigRational>;
    type R = RadicalNumber<BigRational>;

    fn ctx() -> ScalarContext {
        ScalarContext::new(2, 6)
    }

    fn th(j: usize) -> S {
        S::theta(ctx(), j).unwrap()
    }

    #[test]
    fn halves_sum_to_one() {
        let half = S::from_ratio(ctx(), 1, 2);
        assert_eq!(&half + &half, S::one(ctx()));
    }

    #[test]
    fn theta_adds_termwise() {
        assert_eq!(&th(0) + &th(0), &S::from_int(ctx(), 2) * &th(0));
    }

    /// Brute-force square-free factorization used as the oracle.
    fn factor_oracle(n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut n = n;
        for p in 2..=n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            if n == 1 {
                break;
            }
        }
        out
    }

    #[test]
    fn square_free_split_matches_factorization() {
        for n in 1..500u64 {
            let (o, i) = square_free_split(n);
            let mut oo = 1;
            let mut ii = 1;
            for (p, e) in factor_oracle(n) {
                oo *= p.pow(e / 2);
                if e % 2 == 1 {
                    ii *= p;
                }
            }
            assert_eq!((o, i), (oo, ii), "n = {n}");
        }
    }

    #[test]
    fn sqrt2_plus_sqrt8() {
        let s = R::sqrt_int(2).add_ref(&R::sqrt_int(8));
        assert_eq!(s, R::sqrt_int(2).scale(&BigRational::from_ratio(3, 1)));
        assert_eq!(s.to_string(), "3*sqrt(2)");
    }

    #[test]
    fn theta_squares_vanish_and_anticommute() {
        assert!((&th(0) * &th(0)).is_zero());
        assert_eq!(&th(0) * &th(1), -&(&th(1) * &th(0)));
    }

    #[test]
    fn sqrt_pi_squared_is_pi() {
        let sp = R::pi_half_power(1);
        let p = sp.mul_ref(&sp);
        assert_eq!(p, R::pi_half_power(2));
        assert_eq!(p.to_string(), "pi");
        assert_eq!(R::pi_half_power(3).to_string(), "pi*sqrt(pi)");
    }

    #[test]
    fn parity_cases() {
        let c = ctx();
        let h2 = S::hbar_power(c, 2);
        let a = &S::from_int(c, 3) + &h2.scale(&BigRational::from_ratio(5, 1));
        assert_eq!(a.parity(), Some(Parity::Even));
        assert_eq!((&th(0) * &h2).parity(), Some(Parity::Odd));
        assert_eq!((&S::one(c) + &th(0)).parity(), None);
    }

    #[test]
    fn divisibility_cases() {
        let c = ctx();
        let five = S::from_int(c, 5);
        assert_eq!((&th(0) * &five).theta_divisibility(0), Some(five));
        assert_eq!(S::from_int(c, 7).theta_divisibility(0), None);
        let a = &th(0) * &th(1);
        let w = a.theta_divisibility(0).unwrap();
        assert_eq!(w, th(1));
        assert_eq!(&th(0) * &w, a);
        // th1 th2 = -th2 th1, so dividing by th2 picks up a sign
        let w2 = a.theta_divisibility(1).unwrap();
        assert_eq!(&th(1) * &w2, a);
        assert_eq!(w2, -&th(0));
    }

    #[test]
    fn truncation_drops_high_orders() {
        let c = ScalarContext::new(0, 2);
        let h = S::hbar_power(c, 1);
        assert!(h.pow(3).is_zero());
        assert_eq!(h.pow(2), S::hbar_power(c, 2));
    }

    #[test]
    fn context_mismatch_rejected() {
        let a = S::one(ScalarContext::new(1, 6));
        let b = S::one(ScalarContext::new(2, 6));
        assert!(matches!(
            a.try_add(&b),
            Err(ScalarError::ContextMismatch { .. })
        ));
    }

    #[test]
    fn rendering_is_ordered() {
        let c = ctx();
        let s = &(&S::hbar_power(c, 2) + &th(1)) + &S::from_ratio(c, -1, 2);
        assert_eq!(s.to_string(), "-1/2 + th2 + h^2");
    }
}
