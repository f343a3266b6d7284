//! Graded skew multilinear forms on superfunctions.
//!
//! A [`Cochain`] is an evaluation tree: leaves are the built-in forms (the
//! brackets, `m1`, `m3`, `m_zeta`, `m_{2|3}`, `j_zeta`, `mu`, ...) and inner
//! nodes are linear combinations, scalar prefixes, Jacobiators and the
//! adjoint differential. The forms contain the integral `bar f`, so they are
//! nonlocal and cannot be stored as finite coefficient tensors.
//!
//! Evaluation splits each argument into parity-homogeneous parts and sums the
//! results, so every sign below is taken on homogeneous inputs. Odd
//! parameters inside the arguments are handled by the supercommutative
//! calculus itself; [`crate::verify::check_signs`] confirms that this agrees
//! with factoring them out by the usual rules.

use std::fmt::{self, Display};
use std::sync::Arc;

use thiserror::Error;

use crate::brackets::{antibracket, bidiff_power, moyal_bracket, poisson_bracket};
use crate::scalars::{Coefficient, Parity, Scalar};
use crate::superfunc::{Ctx, SuperFuncError, SuperFunction, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("arity mismatch: {name} takes {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("cochain {0} has no definite parity")]
    UndefinedParity(String),
    #[error("odd parameter th{index} not available (k = {k})")]
    NoTheta { index: usize, k: usize },
    #[error(transparent)]
    SuperFunc(#[from] SuperFuncError),
}

/// Which parity the Lie structure is graded by: `Even` is the Grassmann
/// parity used with the Poisson bracket, `Odd` its reversal used with the
/// antibracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grading {
    Even,
    Odd,
}

impl Grading {
    /// Parity of a superfunction under this grading.
    pub fn of<Q: Coefficient>(self, f: &SuperFunction<Q>) -> Option<Parity> {
        f.parity().map(|p| self.shift(p))
    }

    fn shift(self, p: Parity) -> Parity {
        match self {
            Grading::Even => p,
            Grading::Odd => p.flip(),
        }
    }

    /// Parity of a cochain of the given arity and Grassmann parity.
    pub fn of_cochain(self, grassmann: Parity, arity: usize) -> Parity {
        match self {
            Grading::Even => grassmann,
            Grading::Odd => grassmann + Parity::from_bit(arity as u32 + 1),
        }
    }

    pub fn bracket(self) -> BracketKind {
        match self {
            Grading::Even => BracketKind::Poisson,
            Grading::Odd => BracketKind::Anti,
        }
    }
}

/// The Lie bracket a differential or Jacobiator is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketKind {
    Poisson,
    Anti,
}

impl BracketKind {
    pub fn grading(self) -> Grading {
        match self {
            BracketKind::Poisson => Grading::Even,
            BracketKind::Anti => Grading::Odd,
        }
    }

    pub fn apply<Q: Coefficient>(
        self,
        f: &SuperFunction<Q>,
        g: &SuperFunction<Q>,
    ) -> Result<SuperFunction<Q>, CochainError> {
        match self {
            BracketKind::Poisson => Ok(poisson_bracket(f, g)),
            BracketKind::Anti => Ok(antibracket(f, g)?),
        }
    }
}

enum Node<Q> {
    Zero,
    // arity 1
    Identity,
    ZetaBar(SuperFunction<Q>),
    Euler,
    DiffOp(Vec<(SuperFunction<Q>, Var)>),
    // arity 2 leaves
    Poisson,
    Anti,
    Moyal(Scalar<Q>),
    Bidiff(u32),
    M1,
    M3,
    MZeta(SuperFunction<Q>),
    M23,
    JZeta(SuperFunction<Q>),
    Mu,
    BarProduct,
    AntiEvenCorrection(Scalar<Q>),
    Kernel(Vec<(Var, Var, Q)>),
    // combinators
    Shifted(SuperFunction<Q>, Cochain<Q>),
    Scaled(Scalar<Q>, Cochain<Q>),
    LeftMul(SuperFunction<Q>, Cochain<Q>),
    Sum(Vec<Cochain<Q>>),
    Jacobiator(Cochain<Q>, Option<Cochain<Q>>, Grading),
    Differential(Cochain<Q>, BracketKind),
    HbarCoefficient(u32, Cochain<Q>),
}

/// An evaluable graded multilinear form.
#[derive(Clone)]
pub struct Cochain<Q> {
    ctx: Ctx,
    arity: usize,
    parity: Option<Parity>,
    name: String,
    node: Arc<Node<Q>>,
}

impl<Q: Coefficient> fmt::Debug for Cochain<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({}, arity {})", self.name, self.arity)
    }
}

impl<Q: Coefficient> Display for Cochain<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn n_minus_parity(ctx: &Ctx) -> Parity {
    Parity::from_bit(ctx.n_minus as u32)
}

impl<Q: Coefficient> Cochain<Q> {
    fn leaf(ctx: &Ctx, arity: usize, parity: Option<Parity>, name: impl Into<String>, node: Node<Q>) -> Self {
        Cochain {
            ctx: ctx.clone(),
            arity,
            parity,
            name: name.into(),
            node: Arc::new(node),
        }
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Grassmann parity `eps(M)`; `None` when undefined.
    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    /// Parity under the given grading.
    pub fn graded_parity(&self, grading: Grading) -> Option<Parity> {
        self.parity.map(|p| grading.of_cochain(p, self.arity))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_zero_form(&self) -> bool {
        matches!(*self.node, Node::Zero)
    }

    // -- constructors ------------------------------------------------------

    pub fn zero(ctx: &Ctx, arity: usize) -> Self {
        Self::leaf(ctx, arity, Some(Parity::Even), "0", Node::Zero)
    }

    pub fn identity(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 1, Some(Parity::Even), "id", Node::Identity)
    }

    /// `f -> zeta * bar f`.
    pub fn zeta_bar(zeta: &SuperFunction<Q>) -> Self {
        let ctx = zeta.context();
        let parity = zeta.parity().map(|p| p + n_minus_parity(ctx));
        Self::leaf(ctx, 1, parity, format!("({zeta})*bar"), Node::ZetaBar(zeta.clone()))
    }

    /// `f -> E_z f`.
    pub fn euler(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 1, Some(Parity::Even), "E", Node::Euler)
    }

    /// `f -> sum coeff_A * d_A f`.
    pub fn diff_op(ctx: &Ctx, parts: Vec<(SuperFunction<Q>, Var)>) -> Self {
        let mut parity = Some(Parity::Even);
        for (i, (c, v)) in parts.iter().enumerate() {
            let p = c.parity().map(|p| p + v.parity());
            if i == 0 {
                parity = p;
            } else if p != parity {
                parity = None;
            }
        }
        let name = parts
            .iter()
            .map(|(c, v)| format!("({c})*d/d{v}"))
            .collect::<Vec<_>>()
            .join(" + ");
        Self::leaf(ctx, 1, parity, name, Node::DiffOp(parts))
    }

    /// The Poisson superbracket `m0`.
    pub fn poisson(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), "m0", Node::Poisson)
    }

    /// The antibracket; Grassmann-odd, even under the reversed grading.
    pub fn antibracket(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Odd), "anti", Node::Anti)
    }

    pub fn moyal(ctx: &Ctx, kappa: Scalar<Q>) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), format!("moyal({kappa})"), Node::Moyal(kappa))
    }

    pub fn bidiff(ctx: &Ctx, p: u32) -> Self {
        assert!(p >= 1);
        Self::leaf(ctx, 2, Some(Parity::Even), format!("P^{p}"), Node::Bidiff(p))
    }

    /// `m1 = (1/6) P^3`, the first Moyal correction.
    pub fn m1(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), "m1", Node::M1)
    }

    pub fn m3(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(n_minus_parity(ctx)), "m3", Node::M3)
    }

    pub fn m_zeta(zeta: &SuperFunction<Q>) -> Self {
        let ctx = zeta.context();
        let parity = zeta.parity().map(|p| p + n_minus_parity(ctx));
        Self::leaf(ctx, 2, parity, format!("mzeta({zeta})"), Node::MZeta(zeta.clone()))
    }

    /// `m_{2|3}`; Grassmann-even, odd under the reversed grading.
    pub fn m23(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), "m23", Node::M23)
    }

    pub fn j_zeta(zeta: &SuperFunction<Q>) -> Self {
        let ctx = zeta.context();
        let parity = zeta.parity().map(|p| p + n_minus_parity(ctx));
        Self::leaf(ctx, 2, parity, format!("jzeta({zeta})"), Node::JZeta(zeta.clone()))
    }

    pub fn mu(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), "mu", Node::Mu)
    }

    /// `(f, g) -> bar f * bar g`.
    pub fn bar_product(ctx: &Ctx) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Even), "barbar", Node::BarProduct)
    }

    /// The correction terms of the even antibracket deformation,
    /// `(-1)^{eps f} {K Delta f} E g + {E f} K Delta g` with
    /// `K = c / (1 + c N_z / 2)`.
    pub fn anti_even_correction(ctx: &Ctx, c: Scalar<Q>) -> Self {
        Self::leaf(ctx, 2, Some(Parity::Odd), format!("antieven({c})"), Node::AntiEvenCorrection(c))
    }

    /// `sum K^{AB} (f <-d_A)(d_B g)` for a constant metric-like kernel. The
    /// kernel must pair variables of equal parity and satisfy
    /// `K^{AB} = -(-1)^{eps_A eps_B} K^{BA}`, which makes the form skew.
    pub fn kernel(ctx: &Ctx, entries: Vec<(Var, Var, Q)>) -> Self {
        debug_assert!(entries.iter().all(|(a, b, _)| a.parity() == b.parity()));
        Self::leaf(ctx, 2, Some(Parity::Even), "kernel", Node::Kernel(entries))
    }

    /// `M(f1 + zeta bar f1, ..., fn + zeta bar fn)`.
    pub fn shifted(zeta: &SuperFunction<Q>, inner: &Cochain<Q>) -> Self {
        let name = format!("{}[shift {}]", inner.name, zeta);
        Self::leaf(&inner.ctx, inner.arity, inner.parity, name, Node::Shifted(zeta.clone(), inner.clone()))
    }

    /// `s * M`.
    pub fn scaled(s: &Scalar<Q>, m: &Cochain<Q>) -> Self {
        let parity = match (s.parity(), m.parity) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let name = if s.len() > 1 {
            format!("({s})*{}", m.name)
        } else {
            format!("{s}*{}", m.name)
        };
        Self::leaf(&m.ctx, m.arity, parity, name, Node::Scaled(s.clone(), m.clone()))
    }

    /// `th_{j+1} * M`.
    pub fn theta_prefix(j: usize, m: &Cochain<Q>) -> Result<Self, CochainError> {
        let s = Scalar::theta(m.ctx.scalar_ctx(), j).map_err(|_| CochainError::NoTheta {
            index: j + 1,
            k: m.ctx.theta_count,
        })?;
        Ok(Self::scaled(&s, m))
    }

    /// `eta(z) * M(...)`.
    pub fn left_mul(eta: &SuperFunction<Q>, m: &Cochain<Q>) -> Self {
        let parity = match (eta.parity(), m.parity) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Self::leaf(&m.ctx, m.arity, parity, format!("({eta})*{}", m.name), Node::LeftMul(eta.clone(), m.clone()))
    }

    /// Linear combination; all parts must share the arity.
    pub fn sum(parts: Vec<Cochain<Q>>) -> Result<Self, CochainError> {
        let Some(first) = parts.first() else {
            return Err(CochainError::Arity {
                name: "sum".into(),
                expected: 1,
                got: 0,
            });
        };
        let ctx = first.ctx.clone();
        let arity = first.arity;
        let mut parity = first.parity;
        for p in &parts {
            if p.arity != arity {
                return Err(CochainError::Arity {
                    name: p.name.clone(),
                    expected: arity,
                    got: p.arity,
                });
            }
            if p.parity != parity {
                parity = None;
            }
        }
        let parts: Vec<_> = parts.into_iter().filter(|p| !p.is_zero_form()).collect();
        if parts.is_empty() {
            return Ok(Self::zero(&ctx, arity));
        }
        if parts.len() == 1 {
            return Ok(parts.into_iter().next().unwrap());
        }
        let parity = if parts.iter().all(|p| p.parity == parts[0].parity) {
            parts[0].parity
        } else {
            parity
        };
        let name = parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(" + ");
        Ok(Self::leaf(&ctx, arity, parity, name, Node::Sum(parts)))
    }

    pub fn plus(&self, other: &Cochain<Q>) -> Result<Self, CochainError> {
        Self::sum(vec![self.clone(), other.clone()])
    }

    /// `J(p, q)`, or `J(p, p)` when `q` is `None`.
    pub fn jacobiator(p: &Cochain<Q>, q: Option<&Cochain<Q>>, grading: Grading) -> Result<Self, CochainError> {
        for c in std::iter::once(p).chain(q) {
            if c.arity != 2 {
                return Err(CochainError::Arity {
                    name: c.name.clone(),
                    expected: 2,
                    got: c.arity,
                });
            }
        }
        let parity = match q {
            None => p.parity.map(|a| a + a),
            Some(q) => match (p.parity, q.parity) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        };
        let name = match q {
            None => format!("J({}, {})", p.name, p.name),
            Some(q) => format!("J({}, {})", p.name, q.name),
        };
        Ok(Self::leaf(&p.ctx, 3, parity, name, Node::Jacobiator(p.clone(), q.cloned(), grading)))
    }

    /// The adjoint differential `d^ad M` built on the given bracket.
    pub fn differential(m: &Cochain<Q>, bracket: BracketKind) -> Result<Self, CochainError> {
        let Some(parity) = m.parity else {
            return Err(CochainError::UndefinedParity(m.name.clone()));
        };
        // d preserves the parity of the grading it is built for
        let parity = match bracket {
            BracketKind::Poisson => parity,
            BracketKind::Anti => parity.flip(),
        };
        let name = format!("d({})", m.name);
        Ok(Self::leaf(&m.ctx, m.arity + 1, Some(parity), name, Node::Differential(m.clone(), bracket)))
    }

    /// The coefficient of `hbar^m` in `M(args)`.
    pub fn hbar_coefficient(m: &Cochain<Q>, order: u32) -> Self {
        let name = format!("[h^{order}]{}", m.name);
        Self::leaf(&m.ctx, m.arity, m.parity, name, Node::HbarCoefficient(order, m.clone()))
    }

    // -- evaluation --------------------------------------------------------

    /// Evaluates the form; arguments are split into homogeneous parts first.
    pub fn eval(&self, args: &[SuperFunction<Q>]) -> Result<SuperFunction<Q>, CochainError> {
        if args.len() != self.arity {
            return Err(CochainError::Arity {
                name: self.name.clone(),
                expected: self.arity,
                got: args.len(),
            });
        }
        if let Some(parities) = args.iter().map(|a| a.parity()).collect::<Option<Vec<_>>>() {
            return self.eval_homogeneous(args, &parities);
        }
        let parts: Vec<Vec<(Parity, SuperFunction<Q>)>> = args.iter().map(|a| a.homogeneous_parts()).collect();
        let mut out = SuperFunction::zero(&self.ctx);
        let mut idx = vec![0usize; parts.len()];
        if parts.iter().any(|p| p.is_empty()) {
            return Ok(out);
        }
        loop {
            let a: Vec<_> = idx.iter().zip(&parts).map(|(i, p)| p[*i].1.clone()).collect();
            let ps: Vec<_> = idx.iter().zip(&parts).map(|(i, p)| p[*i].0).collect();
            out.add_assign_ref(&self.eval_homogeneous(&a, &ps)?);
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < parts[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn eval_homogeneous(&self, args: &[SuperFunction<Q>], par: &[Parity]) -> Result<SuperFunction<Q>, CochainError> {
        let ctx = &self.ctx;
        let nm = n_minus_parity(ctx);
        let uses_metric = matches!(
            &*self.node,
            Node::Poisson | Node::Moyal(_) | Node::Bidiff(_) | Node::M1 | Node::MZeta(_) | Node::JZeta(_)
        );
        if uses_metric && !ctx.has_symplectic_form() {
            return Err(SuperFuncError::OddNPlus(ctx.n_plus).into());
        }
        let zero = || SuperFunction::zero(ctx);
        let out = match &*self.node {
            Node::Zero => zero(),
            Node::Identity => args[0].clone(),
            Node::ZetaBar(zeta) => zeta.scale_right(&args[0].integral_bar()?),
            Node::Euler => args[0].euler(),
            Node::DiffOp(parts) => {
                let mut out = zero();
                for (c, v) in parts {
                    out.add_assign_ref(&c.mul_ref(&args[0].left_deriv(*v)));
                }
                out
            }
            Node::Poisson => poisson_bracket(&args[0], &args[1]),
            Node::Anti => antibracket(&args[0], &args[1])?,
            Node::Moyal(kappa) => moyal_bracket(&args[0], &args[1], kappa),
            Node::Bidiff(p) => bidiff_power(&args[0], &args[1], *p),
            Node::M1 => m1(&args[0], &args[1]),
            Node::M3 => bar_pairing(&args[0], &args[1], par[0], par[1], nm, |f| Ok(f.euler()))?,
            Node::MZeta(zeta) => bar_pairing(&args[0], &args[1], par[0], par[1], nm, |f| Ok(poisson_bracket(zeta, f)))?,
            Node::JZeta(zeta) => bar_pairing(&args[0], &args[1], par[0], par[1], nm, |f| Ok(m1(zeta, f)))?,
            Node::M23 => {
                let f = args[0].one_minus_number_xi();
                let g = args[1].one_minus_number_xi();
                f.mul_ref(&g).negate_if(par[0].is_odd())
            }
            Node::Mu => {
                let s = args[0].integral_bar()?.mul_ref(&args[1].integral_bar()?);
                SuperFunction::constant(ctx, s.negate_if(par[0].is_odd()))
            }
            Node::BarProduct => {
                let s = args[0].integral_bar()?.mul_ref(&args[1].integral_bar()?);
                SuperFunction::constant(ctx, s)
            }
            Node::AntiEvenCorrection(c) => {
                let kf = resolvent(c, &args[0].delta_op()?);
                let kg = resolvent(c, &args[1].delta_op()?);
                let first = kf.mul_ref(&args[1].euler()).negate_if(par[0].is_odd());
                let second = args[0].euler().mul_ref(&kg);
                first.add_ref(&second)
            }
            Node::Kernel(entries) => {
                let mut out = zero();
                for (a, b, w) in entries {
                    let fa = args[0].right_deriv(*a);
                    if fa.is_zero() {
                        continue;
                    }
                    out.add_assign_ref(&fa.mul_ref(&args[1].left_deriv(*b)).scale(w));
                }
                out
            }
            Node::Shifted(zeta, inner) => {
                let mut shifted = Vec::with_capacity(args.len());
                for a in args {
                    shifted.push(a.add_ref(&zeta.scale_right(&a.integral_bar()?)));
                }
                inner.eval(&shifted)?
            }
            Node::Scaled(s, m) => m.eval_homogeneous(args, par)?.scale_left(s),
            Node::LeftMul(eta, m) => eta.mul_ref(&m.eval_homogeneous(args, par)?),
            Node::Sum(parts) => {
                let mut out = zero();
                for p in parts {
                    out.add_assign_ref(&p.eval_homogeneous(args, par)?);
                }
                out
            }
            Node::Jacobiator(p, q, grading) => jacobiator_eval(p, q.as_ref(), *grading, args, par)?,
            Node::Differential(m, bracket) => differential_eval(m, *bracket, args, par)?,
            Node::HbarCoefficient(order, m) => m.eval_homogeneous(args, par)?.hbar_coefficient(*order),
        };
        Ok(out)
    }
}

/// `m1(f, g) = (1/6) P^3(f, g)`.
pub fn m1<Q: Coefficient>(f: &SuperFunction<Q>, g: &SuperFunction<Q>) -> SuperFunction<Q> {
    bidiff_power(f, g, 3).scale_ratio(1, 6)
}

/// The shape shared by `m3`, `m_zeta` and `j_zeta`:
/// `(-1)^{n- eps f} L(f) bar g - (-1)^{eps f eps g + n- eps g} L(g) bar f`.
fn bar_pairing<Q: Coefficient>(
    f: &SuperFunction<Q>,
    g: &SuperFunction<Q>,
    pf: Parity,
    pg: Parity,
    nm: Parity,
    op: impl Fn(&SuperFunction<Q>) -> Result<SuperFunction<Q>, CochainError>,
) -> Result<SuperFunction<Q>, CochainError> {
    let fbar = f.integral_bar()?;
    let gbar = g.integral_bar()?;
    let mut out = SuperFunction::zero(f.context());
    if !gbar.is_zero() {
        out.add_assign_ref(&op(f)?.scale_right(&gbar).negate_if(nm.koszul(pf)));
    }
    if !fbar.is_zero() {
        let s = pf.koszul(pg) ^ nm.koszul(pg);
        out = out.sub_ref(&op(g)?.scale_right(&fbar).negate_if(s));
    }
    Ok(out)
}

/// `c / (1 + c N_z / 2) h = sum_j c (-c/2)^j N_z^j h`, finite by truncation.
fn resolvent<Q: Coefficient>(c: &Scalar<Q>, h: &SuperFunction<Q>) -> SuperFunction<Q> {
    let mut out = SuperFunction::zero(h.context());
    let step = c.scale(&Q::from_ratio(-1, 2));
    let mut coeff = c.clone();
    let mut cur = h.clone();
    let mut guard = 0;
    while !coeff.is_zero() && !cur.is_zero() {
        out.add_assign_ref(&cur.scale_left(&coeff));
        coeff = coeff.mul_ref(&step);
        cur = cur.number_z();
        guard += 1;
        assert!(guard <= h.context().hbar_max + 2, "resolvent needs c in the hbar ideal");
    }
    out
}

fn jacobiator_eval<Q: Coefficient>(
    p: &Cochain<Q>,
    q: Option<&Cochain<Q>>,
    grading: Grading,
    args: &[SuperFunction<Q>],
    par: &[Parity],
) -> Result<SuperFunction<Q>, CochainError> {
    let ctx = p.context();
    let mut out = SuperFunction::zero(ctx);
    let gp: Vec<Parity> = par.iter().map(|x| grading.shift(*x)).collect();
    for r in 0..3 {
        let (a, b, c) = (r, (r + 1) % 3, (r + 2) % 3);
        let (f, g, h) = (&args[a], &args[b], &args[c]);
        let mut term = p.eval(&[p_or_q(q, p).eval(&[f.clone(), g.clone()])?, h.clone()])?;
        if let Some(q) = q {
            term.add_assign_ref(&q.eval(&[p.eval(&[f.clone(), g.clone()])?, h.clone()])?);
        }
        out.add_assign_ref(&term.negate_if(gp[a].koszul(gp[c])));
    }
    Ok(out)
}

fn p_or_q<'a, Q>(q: Option<&'a Cochain<Q>>, p: &'a Cochain<Q>) -> &'a Cochain<Q> {
    q.unwrap_or(p)
}

fn differential_eval<Q: Coefficient>(
    m: &Cochain<Q>,
    bracket: BracketKind,
    args: &[SuperFunction<Q>],
    par: &[Parity],
) -> Result<SuperFunction<Q>, CochainError> {
    let grading = bracket.grading();
    let ctx = m.context();
    let pm = m
        .graded_parity(grading)
        .ok_or_else(|| CochainError::UndefinedParity(m.name.clone()))?;
    let gp: Vec<Parity> = par.iter().map(|x| grading.shift(*x)).collect();
    let n = args.len();
    let sum_par = |from: usize, to: usize| -> Parity {
        // inclusive 0-based range, empty when from > to
        (from..=to).filter(|_| from <= to).fold(Parity::Even, |acc, l| acc + gp[l])
    };
    let mut out = SuperFunction::zero(ctx);
    for j in 0..n {
        let jj = j as u32 + 1;
        let before = if j == 0 { Parity::Even } else { sum_par(0, j - 1) };
        let neg = (jj % 2 == 1) ^ gp[j].koszul(before) ^ gp[j].koszul(pm);
        let rest: Vec<_> = args
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != j)
            .map(|(_, a)| a.clone())
            .collect();
        let inner = m.eval(&rest)?;
        let term = bracket.apply(&args[j], &inner)?;
        // overall leading minus
        out.add_assign_ref(&term.negate_if(!neg));
    }
    for j in 0..n {
        for i in 0..j {
            let jj = j as u32 + 1;
            let between = if i + 1 <= j.saturating_sub(1) && j >= 1 {
                sum_par(i + 1, j - 1)
            } else {
                Parity::Even
            };
            let neg = (jj % 2 == 1) ^ gp[j].koszul(between);
            let br = bracket.apply(&args[i], &args[j])?;
            let mut rest = Vec::with_capacity(n - 1);
            for (l, a) in args.iter().enumerate() {
                if l == j {
                    continue;
                }
                rest.push(if l == i { br.clone() } else { a.clone() });
            }
            let term = m.eval(&rest)?;
            out.add_assign_ref(&term.negate_if(!neg));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superfunc::{weight, SymplecticContext};
    use num_rational::BigRational;

    type F = SuperFunction<BigRational>;
    type C = Cochain<BigRational>;

    #[test]
    fn m3_constant_example() {
        // n+ = 0, n- = 2: bar(xi1 xi2) = 1, bar(1) = 0, E(1) = 1
        let c = SymplecticContext::standard(0, 2, 0, 6).unwrap();
        let f = &F::xi(&c, 0) * &F::xi(&c, 1);
        let r = C::m3(&c).eval(&[f, F::one(&c)]).unwrap();
        assert_eq!(r, F::from_int(&c, -1));
    }

    #[test]
    fn m23_examples() {
        let c = SymplecticContext::standard(2, 2, 0, 6).unwrap();
        let m = C::m23(&c);
        assert!(m.eval(&[F::xi(&c, 0), F::x(&c, 0)]).unwrap().is_zero());
        assert_eq!(m.eval(&[F::one(&c), F::one(&c)]).unwrap(), F::one(&c));
        assert_eq!(m.eval(&[F::x(&c, 0), F::x(&c, 1)]).unwrap(), &F::x(&c, 0) * &F::x(&c, 1));
    }

    #[test]
    fn mu_examples() {
        let c = SymplecticContext::standard(2, 0, 0, 6).unwrap();
        let g = F::gauss(&c, weight(1)).unwrap();
        let r = C::mu(&c).eval(&[g.clone(), g]).unwrap();
        // (2 pi)^2
        let s = r.as_constant().unwrap();
        assert_eq!(s.to_string(), "4*pi^2");
        let c = SymplecticContext::standard(0, 1, 0, 6).unwrap();
        let r = C::mu(&c).eval(&[F::xi(&c, 0), F::xi(&c, 0)]).unwrap();
        assert_eq!(r, F::from_int(&c, -1));
    }

    #[test]
    fn jzeta_vanishes_for_linear_zeta() {
        let c = SymplecticContext::standard(2, 1, 0, 6).unwrap();
        let g = F::gauss(&c, weight(1)).unwrap();
        let zeta = &F::x(&c, 0) + &F::xi(&c, 0);
        let f = &F::x(&c, 1).pow(3) * &g;
        let h = &(&F::x(&c, 0).pow(2) * &g) * &F::xi(&c, 0);
        assert!(C::j_zeta(&zeta.theta_free_even_part()).eval(&[f.clone(), h.clone()]).unwrap().is_zero());
    }

    impl F {
        fn theta_free_even_part(&self) -> F {
            self.split_parity().0
        }
    }

    #[test]
    fn mzeta_gaussian_example() {
        // n+ = 2: zeta = x1, f = G, g = x2 G. bar f = 2 pi, bar g = 0.
        let c = SymplecticContext::standard(2, 0, 0, 6).unwrap();
        let g1 = F::gauss(&c, weight(1)).unwrap();
        let f = g1.clone();
        let g = &F::x(&c, 1) * &g1;
        let r = C::m_zeta(&F::x(&c, 0)).eval(&[f, g.clone()]).unwrap();
        // - {x1, x2 G} * 2 pi, with {x1, x2 G} = d_{x2}(x2 G) = (1 - x2^2) G
        let br = poisson_bracket(&F::x(&c, 0), &g);
        assert_eq!(br, &g1 - &(&F::x(&c, 1).pow(2) * &g1));
        let two_pi = F::gauss(&c, weight(1)).unwrap().integral_bar().unwrap();
        assert_eq!(r, br.scale_right(&two_pi).neg_ref());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let c = SymplecticContext::standard(2, 0, 0, 6).unwrap();
        assert!(matches!(
            C::poisson(&c).eval(&[F::one(&c)]),
            Err(CochainError::Arity { .. })
        ));
    }

    #[test]
    fn jacobiator_of_zero_vanishes() {
        let c = SymplecticContext::standard(2, 1, 0, 6).unwrap();
        let g = F::gauss(&c, weight(1)).unwrap();
        let j = C::jacobiator(&C::zero(&c, 2), Some(&C::m3(&c)), Grading::Even).unwrap();
        let args = [&F::x(&c, 0) * &g, &F::xi(&c, 0) * &g, g.clone()];
        assert!(j.eval(&args).unwrap().is_zero());
    }
}
