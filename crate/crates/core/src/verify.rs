//! Seeded samples and exact identity checks.
//!
//! Samples come from PCG32 (`rand_pcg::Pcg32`, a 64-bit linear congruential
//! state `s <- s * 6364136223846793005 + inc` with an xorshift-rotate output),
//! seeded with `Pcg32::new(seed, SAMPLE_STREAM)`. Given the same
//! [`SampleSpec`] and context the sample list is identical on every run and
//! platform. Checks evaluate on all samples in parallel and assemble the
//! report in sample order, so reports do not depend on the worker count.

use std::time::Instant;

use rand::Rng;
use rand_pcg::Pcg32;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brackets::poisson_bracket;
use crate::cochains::{BracketKind, Cochain, CochainError, Grading};
use crate::deformations::Deformation;
use crate::scalars::{Coefficient, Parity, Scalar, ScalarKey, ThetaMonomial};
use crate::superfunc::{weight, Ctx, Monomial, SuperFunction, Var};

/// Stream selector passed to PCG32 alongside the seed.
pub const SAMPLE_STREAM: u64 = 0xda3e_39cb_94b9_5bdb;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityFilter {
    Even,
    Odd,
    /// Each sample is homogeneous, its parity drawn at random.
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassFilter {
    /// Every term carries a Gaussian weight, so every bar exists.
    D,
    /// Plain polynomial terms are allowed as well.
    E,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    pub max_x_degree: u32,
    pub max_xi_degree: u32,
    pub weights: Vec<i64>,
    pub coeff_min: i64,
    pub coeff_max: i64,
    pub max_terms: usize,
    pub parity: ParityFilter,
    pub class: ClassFilter,
    /// Allow odd-parameter factors in the coefficients.
    pub theta: bool,
    /// Percentage of terms drawn with full xi degree and even x exponents,
    /// so that their bar is typically nonzero.
    pub integrable_percent: u32,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            seed: DEFAULT_SEED,
            count: 50,
            max_x_degree: 3,
            max_xi_degree: 5,
            weights: vec![1, 2],
            coeff_min: -3,
            coeff_max: 3,
            max_terms: 2,
            parity: ParityFilter::Any,
            class: ClassFilter::D,
            theta: false,
            integrable_percent: 50,
        }
    }
}

impl SampleSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_parity(mut self, parity: ParityFilter) -> Self {
        self.parity = parity;
        self
    }

    pub fn with_class(mut self, class: ClassFilter) -> Self {
        self.class = class;
        self
    }

    pub fn with_max_x_degree(mut self, d: u32) -> Self {
        self.max_x_degree = d;
        self
    }

    pub fn with_max_xi_degree(mut self, d: u32) -> Self {
        self.max_xi_degree = d;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_theta(mut self, theta: bool) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_integrable_percent(mut self, percent: u32) -> Self {
        self.integrable_percent = percent.min(100);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("no odd samples exist with n- = {n_minus}, k = {k} and the given filters")]
    NoOddSamples { n_minus: usize, k: usize },
    #[error("empty coefficient pool [{0}, {1}]")]
    EmptyCoefficients(i64, i64),
    #[error("D-class samples need at least one Gaussian weight")]
    NoWeights,
    #[error("invalid Gaussian weight {0}")]
    BadWeight(i64),
}

/// Draws `spec.count` superfunctions.
pub fn sample_superfunctions<Q: Coefficient>(
    spec: &SampleSpec,
    ctx: &Ctx,
) -> Result<Vec<SuperFunction<Q>>, SampleError> {
    let theta_ok = spec.theta && ctx.theta_count > 0;
    let xi_cap = spec.max_xi_degree.min(ctx.n_minus as u32);
    if spec.parity == ParityFilter::Odd && xi_cap == 0 && !theta_ok {
        return Err(SampleError::NoOddSamples {
            n_minus: ctx.n_minus,
            k: ctx.theta_count,
        });
    }
    if !(spec.coeff_min..=spec.coeff_max).any(|c| c != 0) {
        return Err(SampleError::EmptyCoefficients(spec.coeff_min, spec.coeff_max));
    }
    if let Some(w) = spec.weights.iter().find(|w| **w <= 0) {
        return Err(SampleError::BadWeight(*w));
    }
    if spec.class == ClassFilter::D && ctx.n_plus > 0 && spec.weights.is_empty() {
        return Err(SampleError::NoWeights);
    }
    let odd_possible = xi_cap > 0 || theta_ok;
    let mut rng = Pcg32::new(spec.seed, SAMPLE_STREAM);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let odd = match spec.parity {
            ParityFilter::Even => false,
            ParityFilter::Odd => true,
            ParityFilter::Any => odd_possible && rng.gen_bool(0.5),
        };
        let terms = rng.gen_range(1..=spec.max_terms.max(1));
        let mut f = SuperFunction::zero(ctx);
        for _ in 0..terms {
            f.add_assign_ref(&sample_term(spec, ctx, &mut rng, odd, xi_cap, theta_ok));
        }
        out.push(f);
    }
    Ok(out)
}

fn sample_term<Q: Coefficient>(
    spec: &SampleSpec,
    ctx: &Ctx,
    rng: &mut Pcg32,
    odd: bool,
    xi_cap: u32,
    theta_ok: bool,
) -> SuperFunction<Q> {
    let coeff = loop {
        let c = rng.gen_range(spec.coeff_min..=spec.coeff_max);
        if c != 0 {
            break c;
        }
    };
    let full_xi = xi_cap as usize == ctx.n_minus && rng.gen_ratio(spec.integrable_percent.min(100), 100);
    let mut x = vec![0u32; ctx.n_plus];
    let mut w = weight(0);
    if ctx.n_plus > 0 {
        let degree = rng.gen_range(0..=spec.max_x_degree);
        if full_xi {
            for _ in 0..degree / 2 {
                x[rng.gen_range(0..ctx.n_plus)] += 2;
            }
        } else {
            for _ in 0..degree {
                x[rng.gen_range(0..ctx.n_plus)] += 1;
            }
        }
        let pool: Vec<i64> = match spec.class {
            ClassFilter::D => spec.weights.clone(),
            ClassFilter::E => std::iter::once(0).chain(spec.weights.iter().copied()).collect(),
        };
        w = weight(pool[rng.gen_range(0..pool.len())]);
    }
    // an odd-parameter factor when allowed, forced if the xi part cannot
    // supply the parity on its own
    let mut theta = ThetaMonomial::ONE;
    let top_odd = ctx.n_minus % 2 == 1;
    if theta_ok && (rng.gen_bool(1.0 / 3.0) || (odd && xi_cap == 0) || (full_xi && odd != top_odd)) {
        theta = ThetaMonomial::generator(rng.gen_range(0..ctx.theta_count));
    }
    let need_odd_xi = odd ^ theta.parity().is_odd();
    let mask = if full_xi && need_odd_xi == top_odd {
        (1u32 << ctx.n_minus) - 1
    } else {
        let degrees: Vec<u32> = (0..=xi_cap).filter(|r| (r % 2 == 1) == need_odd_xi).collect();
        let r = degrees[rng.gen_range(0..degrees.len())];
        let mut mask = 0u32;
        while mask.count_ones() < r {
            mask |= 1 << rng.gen_range(0..ctx.n_minus);
        }
        mask
    };
    let sctx = ctx.scalar_ctx();
    let s = Scalar::monomial(
        sctx,
        ScalarKey { hbar: 0, theta },
        crate::scalars::RadicalNumber::from_int(coeff),
    );
    SuperFunction::term(ctx, Monomial { x, weight: w, xi: mask }, s)
}

/// Draws `count` tuples of the given length from one stream.
pub fn sample_tuples<Q: Coefficient>(
    spec: &SampleSpec,
    ctx: &Ctx,
    arity: usize,
) -> Result<Vec<Vec<SuperFunction<Q>>>, SampleError> {
    let flat = sample_superfunctions(&spec.clone().with_count(spec.count * arity), ctx)?;
    Ok(flat.chunks(arity.max(1)).map(|c| c.to_vec()).collect())
}

/// A random even 2-cochain: a constant skew kernel plus rational multiples
/// of `m1`, `m3` and `m_zeta` with a random polynomial `zeta` of degree at
/// most 2. Deterministic in `seed`.
pub fn random_cochain<Q: Coefficient>(ctx: &Ctx, seed: u64) -> Cochain<Q> {
    let mut rng = Pcg32::new(seed, SAMPLE_STREAM ^ 0x2c0c);
    let coeff = |rng: &mut Pcg32| loop {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            break c;
        }
    };
    let vars: Vec<Var> = ctx.variables().collect();
    let mut entries = Vec::new();
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i..] {
            if a.parity() != b.parity() || !rng.gen_bool(0.4) {
                continue;
            }
            // K^{ab} = -(-1)^{|a||b|} K^{ba}: skew on x, symmetric on xi
            let w = coeff(&mut rng);
            if a.parity().is_odd() {
                entries.push((*a, *b, Q::from_ratio(w, 1)));
                if a != b {
                    entries.push((*b, *a, Q::from_ratio(w, 1)));
                }
            } else if a != b {
                entries.push((*a, *b, Q::from_ratio(w, 1)));
                entries.push((*b, *a, Q::from_ratio(-w, 1)));
            }
        }
    }
    let sctx = ctx.scalar_ctx();
    let mut zeta = SuperFunction::zero(ctx);
    for _ in 0..2 {
        let mut term = SuperFunction::from_int(ctx, coeff(&mut rng));
        for _ in 0..rng.gen_range(0..=2) {
            let v = vars[rng.gen_range(0..vars.len())];
            term = term.mul_ref(&SuperFunction::var(ctx, v).expect("variable of the context"));
        }
        zeta.add_assign_ref(&term);
    }
    let parts = vec![
        Cochain::kernel(ctx, entries),
        Cochain::scaled(&Scalar::from_int(sctx, coeff(&mut rng)), &Cochain::m1(ctx)),
        Cochain::scaled(&Scalar::from_int(sctx, coeff(&mut rng)), &Cochain::m3(ctx)),
        Cochain::m_zeta(&zeta.split_parity().0),
    ];
    Cochain::sum(parts)
        .expect("parts share arity and parity")
        .with_name(format!("random_cochain({seed})"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub n_plus: usize,
    pub n_minus: usize,
    pub k: usize,
    pub hbar_max: u32,
}

impl ContextInfo {
    pub fn of(ctx: &Ctx) -> Self {
        ContextInfo {
            n_plus: ctx.n_plus,
            n_minus: ctx.n_minus,
            k: ctx.theta_count,
            hbar_max: ctx.hbar_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub context: ContextInfo,
    pub sample_count: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON form with the timing zeroed; equal across reruns.
    pub fn reproducible_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        r.to_json()
    }

    pub fn summary(&self) -> String {
        let c = &self.context;
        format!(
            "{} {} (n+={}, n-={}, k={}, hmax={}): {} samples, {} failures, {} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            c.n_plus,
            c.n_minus,
            c.k,
            c.hbar_max,
            self.sample_count,
            self.failures.len(),
            self.elapsed_ms
        )
    }

    /// Merges reports of sub-checks into one.
    pub fn combine(check: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let mut failures = Vec::new();
        for p in parts {
            for f in &p.failures {
                let mut f = f.clone();
                f.residual = format!("[{}] {}", p.check, f.residual);
                failures.push(f);
            }
        }
        VerificationReport {
            check: check.into(),
            context: parts.first().map(|p| p.context.clone()).unwrap_or(ContextInfo {
                n_plus: 0,
                n_minus: 0,
                k: 0,
                hbar_max: 0,
            }),
            sample_count: parts.iter().map(|p| p.sample_count).sum(),
            pass: failures.is_empty(),
            failures,
            elapsed_ms: parts.iter().map(|p| p.elapsed_ms).sum(),
        }
    }
}

/// Renders a residual, separated by odd-parameter degree when any appear.
pub fn render_residual<Q: Coefficient>(r: &SuperFunction<Q>) -> String {
    let top = r.max_theta_weight();
    if top == 0 {
        return r.to_string();
    }
    (0..=top)
        .filter_map(|w| {
            let part = r.theta_grade(w);
            (!part.is_zero()).then(|| format!("[theta^{w}] {part}"))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs `residual` on every tuple and collects the nonzero results.
pub fn check_identity<Q, F>(
    check: &str,
    ctx: &Ctx,
    tuples: &[Vec<SuperFunction<Q>>],
    residual: F,
) -> VerificationReport
where
    Q: Coefficient,
    F: Fn(&[SuperFunction<Q>]) -> Result<SuperFunction<Q>, CochainError> + Sync,
{
    let start = Instant::now();
    let failures: Vec<Failure> = tuples
        .par_iter()
        .enumerate()
        .filter_map(|(index, args)| {
            let res = match residual(args) {
                Ok(r) if r.is_zero() => return None,
                Ok(r) => render_residual(&r),
                Err(e) => format!("error: {e}"),
            };
            Some(Failure {
                index,
                inputs: args.iter().map(|a| a.to_string()).collect(),
                residual: res,
            })
        })
        .collect();
    VerificationReport {
        check: check.to_string(),
        context: ContextInfo::of(ctx),
        sample_count: tuples.len(),
        pass: failures.is_empty(),
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn sampling_failure(check: &str, ctx: &Ctx, e: SampleError) -> VerificationReport {
    VerificationReport {
        check: check.to_string(),
        context: ContextInfo::of(ctx),
        sample_count: 0,
        failures: vec![Failure {
            index: 0,
            inputs: vec![],
            residual: format!("error: {e}"),
        }],
        elapsed_ms: 0,
        pass: false,
    }
}

fn run<Q, F>(check: &str, ctx: &Ctx, spec: &SampleSpec, arity: usize, residual: F) -> VerificationReport
where
    Q: Coefficient,
    F: Fn(&[SuperFunction<Q>]) -> Result<SuperFunction<Q>, CochainError> + Sync,
{
    match sample_tuples::<Q>(spec, ctx, arity) {
        Ok(t) => check_identity(check, ctx, &t, residual),
        Err(e) => sampling_failure(check, ctx, e),
    }
}

/// `J(C, C) = 0` on sampled triples.
pub fn check_jacobi_form<Q: Coefficient>(c: &Cochain<Q>, grading: Grading, spec: &SampleSpec) -> VerificationReport {
    let name = format!("jacobi[{}]", c.name());
    let j = match Cochain::jacobiator(c, None, grading) {
        Ok(j) => j,
        Err(e) => return eval_failure(&name, c.context(), e),
    };
    run(&name, c.context(), spec, 3, |a| j.eval(a))
}

fn eval_failure(check: &str, ctx: &Ctx, e: CochainError) -> VerificationReport {
    VerificationReport {
        check: check.to_string(),
        context: ContextInfo::of(ctx),
        sample_count: 0,
        failures: vec![Failure {
            index: 0,
            inputs: vec![],
            residual: format!("error: {e}"),
        }],
        elapsed_ms: 0,
        pass: false,
    }
}

/// `d M = 0` on sampled tuples.
pub fn check_cocycle<Q: Coefficient>(m: &Cochain<Q>, bracket: BracketKind, spec: &SampleSpec) -> VerificationReport {
    let name = format!("cocycle[{}]", m.name());
    let d = match Cochain::differential(m, bracket) {
        Ok(d) => d,
        Err(e) => return eval_failure(&name, m.context(), e),
    };
    run(&name, m.context(), spec, d.arity(), |a| d.eval(a))
}

/// `d d M = 0` on sampled tuples.
pub fn check_d_squared<Q: Coefficient>(m: &Cochain<Q>, bracket: BracketKind, spec: &SampleSpec) -> VerificationReport {
    let name = format!("d_squared[{}]", m.name());
    let dd = match Cochain::differential(m, bracket).and_then(|d| Cochain::differential(&d, bracket)) {
        Ok(d) => d,
        Err(e) => return eval_failure(&name, m.context(), e),
    };
    run(&name, m.context(), spec, dd.arity(), |a| dd.eval(a))
}

/// `-J(p, m0) = d p` on sampled triples, Poisson grading.
pub fn check_cross_identity<Q: Coefficient>(p: &Cochain<Q>, spec: &SampleSpec) -> VerificationReport {
    let name = format!("cross_identity[{}]", p.name());
    let ctx = p.context();
    let parts = Cochain::jacobiator(p, Some(&Cochain::poisson(ctx)), Grading::Even)
        .and_then(|j| Ok((j, Cochain::differential(p, BracketKind::Poisson)?)));
    let (j, d) = match parts {
        Ok(x) => x,
        Err(e) => return eval_failure(&name, ctx, e),
    };
    run(&name, ctx, spec, 3, |a| Ok(j.eval(a)?.add_ref(&d.eval(a)?)))
}

/// `C(f, g) + (-1)^{pf pg} C(g, f) = 0` with parities from the grading.
pub fn check_antisymmetry<Q: Coefficient>(c: &Cochain<Q>, grading: Grading, spec: &SampleSpec) -> VerificationReport {
    let name = format!("antisymmetry[{}]", c.name());
    run(&name, c.context(), spec, 2, |a| {
        let s = match (grading.of(&a[0]), grading.of(&a[1])) {
            (Some(p), Some(q)) => p.koszul(q),
            _ => return Err(CochainError::UndefinedParity("sample".into())),
        };
        let fg = c.eval(a)?;
        let gf = c.eval(&[a[1].clone(), a[0].clone()])?;
        Ok(fg.add_ref(&gf.negate_if(s)))
    })
}

/// `eps(C(f, g)) = eps(C) + eps(f) + eps(g)`; the residual is the part of
/// the output with the wrong parity.
pub fn check_grading<Q: Coefficient>(c: &Cochain<Q>, spec: &SampleSpec) -> VerificationReport {
    let name = format!("grading[{}]", c.name());
    let Some(pc) = c.parity() else {
        return eval_failure(&name, c.context(), CochainError::UndefinedParity(c.name().into()));
    };
    run(&name, c.context(), spec, c.arity(), |a| {
        let mut expected = pc;
        for f in a {
            expected = expected + f.parity().ok_or_else(|| CochainError::UndefinedParity("sample".into()))?;
        }
        let (even, odd) = c.eval(a)?.split_parity();
        Ok(if expected.is_odd() { even } else { odd })
    })
}

/// The odd-parameter factorization rules, for every slot and every `th_j`:
/// `M(th f1, ...) = (-1)^{|M|} th M(f1, ...)` with `|M|` the parity of `M`
/// under `grading`,
/// `M(.., th fi, f_{i+1}, ..) = (-1)^{|fi|} M(.., fi, th f_{i+1}, ..)` and
/// `M(.., th fn) = (-1)^{eps fn} M(.., fn) th`.
pub fn check_signs<Q: Coefficient>(m: &Cochain<Q>, grading: Grading, spec: &SampleSpec) -> VerificationReport {
    let name = format!("signs[{}]", m.name());
    let ctx = m.context().clone();
    let Some(pm) = m.graded_parity(grading) else {
        return eval_failure(&name, &ctx, CochainError::UndefinedParity(m.name().into()));
    };
    if ctx.theta_count == 0 {
        return eval_failure(&name, &ctx, CochainError::NoTheta { index: 1, k: 0 });
    }
    let sctx = ctx.scalar_ctx();
    let thetas: Vec<Scalar<Q>> = (0..ctx.theta_count)
        .map(|j| Scalar::theta(sctx, j).expect("theta index in range"))
        .collect();
    run(&name, &ctx, spec, m.arity(), |a| {
        let n = a.len();
        let mut total = SuperFunction::zero(&ctx);
        for th in &thetas {
            let base = m.eval(a)?;
            let with = |i: usize| {
                let mut b = a.to_vec();
                b[i] = b[i].scale_left(th);
                m.eval(&b)
            };
            let first = with(0)?.sub_ref(&base.scale_left(th).negate_if(pm.is_odd()));
            total.add_assign_ref(&first);
            for i in 0..n.saturating_sub(1) {
                let pi = grading.of(&a[i]).ok_or_else(|| CochainError::UndefinedParity("sample".into()))?;
                total.add_assign_ref(&with(i)?.sub_ref(&with(i + 1)?.negate_if(pi.is_odd())));
            }
            let pl = a[n - 1].parity().ok_or_else(|| CochainError::UndefinedParity("sample".into()))?;
            total.add_assign_ref(&with(n - 1)?.sub_ref(&base.scale_right(th).negate_if(pl.is_odd())));
        }
        Ok(total)
    })
}

/// `bar {f, g} = 0` on D-class pairs.
pub fn check_bar_vanishing<Q: Coefficient>(ctx: &Ctx, spec: &SampleSpec) -> VerificationReport {
    run("bar_vanishing", ctx, spec, 2, |a: &[SuperFunction<Q>]| {
        let s = poisson_bracket(&a[0], &a[1]).integral_bar()?;
        Ok(SuperFunction::constant(ctx, s))
    })
}

/// `J(C, C) = 0` for a deformation, in its own grading. Failing residuals
/// are rendered by odd-parameter degree, which separates `J(C0, C0)` from
/// `J(C0, th C1)`.
pub fn check_jacobi<Q: Coefficient>(d: &Deformation<Q>, spec: &SampleSpec) -> VerificationReport {
    check_jacobi_form(&d.bracket, d.grading(), spec)
}

/// At `hbar = 0` and all odd parameters zero the deformation is the
/// classical bracket.
pub fn check_classical_limit<Q: Coefficient>(d: &Deformation<Q>, spec: &SampleSpec) -> VerificationReport {
    let name = format!("classical_limit[{}]", d.bracket.name());
    let classical = d.classical();
    run(&name, d.context(), spec, 2, |a| {
        let r = d.bracket.eval(a)?.sub_ref(&classical.eval(a)?);
        Ok(r.hbar_coefficient(0).theta_grade(0))
    })
}

/// The `hbar^2` coefficient of the deformation is a cocycle.
pub fn check_first_order_cocycle<Q: Coefficient>(d: &Deformation<Q>, spec: &SampleSpec) -> VerificationReport {
    let mut r = check_cocycle(&d.first_order(), d.bracket_kind(), spec);
    r.check = format!("first_order_cocycle[{}]", d.bracket.name());
    r
}

/// `T C1(f, g) - C2(T f, T g)` with `T = id + hbar^2 T1`, compared through
/// `hbar^order`.
pub fn check_equivalence<Q: Coefficient>(
    c1: &Deformation<Q>,
    c2: &Deformation<Q>,
    t1: &Cochain<Q>,
    order: u32,
    spec: &SampleSpec,
) -> VerificationReport {
    let name = format!("equivalence[{} ~ {} via id + h^2 {}]", c1.bracket.name(), c2.bracket.name(), t1.name());
    let ctx = c1.context().clone();
    if t1.arity() != 1 {
        return eval_failure(
            &name,
            &ctx,
            CochainError::Arity {
                name: t1.name().into(),
                expected: 1,
                got: t1.arity(),
            },
        );
    }
    let h2 = Scalar::hbar_power(ctx.scalar_ctx(), 2);
    let t = |f: &SuperFunction<Q>| -> Result<SuperFunction<Q>, CochainError> {
        Ok(f.add_ref(&t1.eval(std::slice::from_ref(f))?.scale_left(&h2)))
    };
    run(&name, &ctx, spec, 2, |a| {
        let lhs = t(&c1.bracket.eval(a)?)?;
        let rhs = c2.bracket.eval(&[t(&a[0])?, t(&a[1])?])?;
        Ok(lhs.sub_ref(&rhs).truncate_hbar(order))
    })
}

/// Keeps only parity-homogeneous inputs of the given parities; convenience
/// for callers building their own tuples.
pub fn homogeneous_with<Q: Coefficient>(fs: &[SuperFunction<Q>], parity: Parity) -> Vec<SuperFunction<Q>> {
    fs.iter().filter(|f| f.parity() == Some(parity)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superfunc::SymplecticContext;
    use num_rational::BigRational;

    type F = SuperFunction<BigRational>;
    type C = Cochain<BigRational>;

    fn ctx(np: usize, nm: usize, k: usize, h: u32) -> Ctx {
        SymplecticContext::standard(np, nm, k, h).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = ctx(4, 2, 1, 6);
        let spec = SampleSpec::default().with_theta(true).with_count(20);
        let a: Vec<F> = sample_superfunctions(&spec, &c).unwrap();
        let b: Vec<F> = sample_superfunctions(&spec, &c).unwrap();
        assert_eq!(a, b);
        assert!(sample_superfunctions::<BigRational>(&spec.clone().with_count(0), &c).unwrap().is_empty());
        let other: Vec<F> = sample_superfunctions(&spec.with_seed(1), &c).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn filters_are_respected() {
        let c = ctx(4, 2, 1, 6);
        let spec = SampleSpec::default().with_parity(ParityFilter::Odd).with_theta(true);
        for f in sample_superfunctions::<BigRational>(&spec, &c).unwrap() {
            assert_eq!(f.parity(), Some(Parity::Odd));
            assert!(f.integral_bar().is_ok());
        }
        let spec = SampleSpec::default();
        for f in sample_superfunctions::<BigRational>(&spec, &c).unwrap() {
            assert!(f.parity().is_some());
            assert!(f.is_d_class());
        }
    }

    #[test]
    fn unsatisfiable_filter_is_an_error() {
        let c = ctx(4, 0, 0, 6);
        let spec = SampleSpec::default().with_parity(ParityFilter::Odd);
        assert!(matches!(
            sample_superfunctions::<BigRational>(&spec, &c),
            Err(SampleError::NoOddSamples { .. })
        ));
    }

    #[test]
    fn poisson_jacobi_passes() {
        let c = ctx(4, 2, 0, 6);
        let r = check_jacobi_form(&C::poisson(&c), Grading::Even, &SampleSpec::default().with_count(20));
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn report_json_round_trips() {
        let c = ctx(2, 0, 0, 6);
        let r = check_bar_vanishing::<BigRational>(&c, &SampleSpec::default().with_count(5));
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.pass);
    }
}
