//! The named deformations of the Poisson superbracket and the antibracket,
//! and the constraint system of the odd-parameter theorem.
//!
//! Constructors check the hypotheses of the corresponding theorem and refuse
//! data outside them with an error naming the clause that failed.

use std::fmt;

use thiserror::Error;

use crate::cochains::{BracketKind, Cochain, CochainError, Grading};
use crate::scalars::{Coefficient, Parity, Scalar};
use crate::superfunc::{Ctx, SuperFuncError, SuperFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("hypothesis violated: {0}")]
    Predicate(String),
    #[error("the antibracket needs n+ = n- (got n+ = {n_plus}, n- = {n_minus})")]
    NotBalanced { n_plus: usize, n_minus: usize },
    #[error("an odd parameter is required but k = 0")]
    NoTheta,
    #[error("constraint violated: {}", .0.join("; "))]
    Constraint(Vec<String>),
    #[error("eta cannot be made D-class; obstruction: {0}")]
    Obstruction(String),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    SuperFunc(#[from] SuperFuncError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    C1,
    C1c,
    C3,
    AntiEven,
    AntiOdd,
    GeneralOdd,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::C1 => "C1",
            Flavor::C1c => "C1c",
            Flavor::C3 => "C3",
            Flavor::AntiEven => "ANTI_EVEN",
            Flavor::AntiOdd => "ANTI_ODD",
            Flavor::GeneralOdd => "GENERAL_ODD",
        };
        f.write_str(s)
    }
}

/// The data a deformation was built from; unused slots stay `None`.
#[derive(Debug, Clone)]
pub struct DeformParams<Q: Coefficient> {
    pub zeta: Option<SuperFunction<Q>>,
    pub eta: Option<SuperFunction<Q>>,
    pub kappa: Option<Scalar<Q>>,
    pub c: Option<Scalar<Q>>,
    pub c3: Option<Scalar<Q>>,
    pub h1: Option<Scalar<Q>>,
    pub h2: Option<Scalar<Q>>,
}

impl<Q: Coefficient> Default for DeformParams<Q> {
    fn default() -> Self {
        DeformParams {
            zeta: None,
            eta: None,
            kappa: None,
            c: None,
            c3: None,
            h1: None,
            h2: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Deformation<Q: Coefficient> {
    pub bracket: Cochain<Q>,
    pub flavor: Flavor,
    pub params: DeformParams<Q>,
}

impl<Q: Coefficient> Deformation<Q> {
    pub fn context(&self) -> &Ctx {
        self.bracket.context()
    }

    pub fn hbar_max(&self) -> u32 {
        self.context().hbar_max
    }

    /// Antibracket deformations are graded by the reversed parity.
    pub fn grading(&self) -> Grading {
        match self.flavor {
            Flavor::AntiEven | Flavor::AntiOdd => Grading::Odd,
            _ => Grading::Even,
        }
    }

    /// The undeformed bracket.
    pub fn classical(&self) -> Cochain<Q> {
        match self.grading() {
            Grading::Even => Cochain::poisson(self.context()),
            Grading::Odd => Cochain::antibracket(self.context()),
        }
    }

    pub fn bracket_kind(&self) -> BracketKind {
        self.grading().bracket()
    }

    /// The coefficient of `hbar^2`, the first-order deformation.
    pub fn first_order(&self) -> Cochain<Q> {
        Cochain::hbar_coefficient(&self.bracket, 2)
    }

    pub fn eval(&self, f: &SuperFunction<Q>, g: &SuperFunction<Q>) -> Result<SuperFunction<Q>, CochainError> {
        self.bracket.eval(&[f.clone(), g.clone()])
    }
}

fn require(ok: bool, clause: &str) -> Result<(), DeformError> {
    if ok {
        Ok(())
    } else {
        Err(DeformError::Predicate(clause.to_string()))
    }
}

fn require_balanced(ctx: &Ctx) -> Result<(), DeformError> {
    if ctx.is_balanced() {
        Ok(())
    } else {
        Err(DeformError::NotBalanced {
            n_plus: ctx.n_plus,
            n_minus: ctx.n_minus,
        })
    }
}

fn scalar_in_ideal<Q: Coefficient>(s: &Scalar<Q>) -> bool {
    s.in_even_hbar_ideal(2)
}

/// `kappa` even with `hbar^2 kappa^2 / 6` in `hbar^2 K[[hbar^2]]`.
fn check_kappa<Q: Coefficient>(kappa: &Scalar<Q>) -> Result<(), DeformError> {
    require(kappa.parity() == Some(Parity::Even), "kappa must be even")?;
    let sq = kappa.mul_ref(kappa);
    require(sq.is_zero() || sq.in_even_hbar_ideal(0), "kappa^2 must be a series in hbar^2")
}

fn moyal_shifted<Q: Coefficient>(zeta: &SuperFunction<Q>, kappa: &Scalar<Q>) -> Cochain<Q> {
    let ctx = zeta.context();
    let moyal = Cochain::moyal(ctx, kappa.with_context(ctx.scalar_ctx()));
    if zeta.is_zero() {
        moyal
    } else {
        Cochain::shifted(zeta, &moyal)
    }
}

/// `C(f, g) = M(f + zeta bar f, g + zeta bar g)`, with `zeta` even in
/// `hbar^2 E[[hbar^2]]`.
pub fn build_c1<Q: Coefficient>(zeta: &SuperFunction<Q>, kappa: &Scalar<Q>) -> Result<Deformation<Q>, DeformError> {
    require(zeta.parity() == Some(Parity::Even), "zeta must be even")?;
    require(zeta.in_even_hbar_ideal(2), "zeta must lie in hbar^2 E[[hbar^2]]")?;
    check_kappa(kappa)?;
    let bracket = moyal_shifted(zeta, kappa).with_name(format!("C1(zeta={zeta}, kappa={kappa})"));
    Ok(Deformation {
        bracket,
        flavor: Flavor::C1,
        params: DeformParams {
            zeta: Some(zeta.clone()),
            kappa: Some(kappa.clone()),
            ..Default::default()
        },
    })
}

/// `C(f, g) = M(f + zeta bar f, g + zeta bar g) + c bar f bar g`. The
/// combination `M(zeta, zeta) + c` must admit a bar, which is what makes
/// the `c` term consistent.
pub fn build_c1c<Q: Coefficient>(
    zeta: &SuperFunction<Q>,
    kappa: &Scalar<Q>,
    c: &Scalar<Q>,
) -> Result<Deformation<Q>, DeformError> {
    let ctx = zeta.context();
    require(zeta.parity().is_some(), "zeta must be parity-homogeneous")?;
    require(zeta.in_even_hbar_ideal(2), "zeta must lie in hbar^2 E[[hbar^2]]")?;
    check_kappa(kappa)?;
    require(scalar_in_ideal(c), "c must lie in hbar^2 K[[hbar^2]]")?;
    let kappa_c = kappa.with_context(ctx.scalar_ctx());
    let mzz = crate::brackets::moyal_bracket(zeta, zeta, &kappa_c);
    let combo = mzz.add_ref(&SuperFunction::constant(ctx, c.with_context(ctx.scalar_ctx())));
    require(combo.is_bar_admissible(), "M(zeta, zeta) + c must be integrable")?;
    let extra = Cochain::scaled(&c.with_context(ctx.scalar_ctx()), &Cochain::bar_product(ctx));
    let bracket = moyal_shifted(zeta, kappa)
        .plus(&extra)?
        .with_name(format!("C1c(zeta={zeta}, kappa={kappa}, c={c})"));
    Ok(Deformation {
        bracket,
        flavor: Flavor::C1c,
        params: DeformParams {
            zeta: Some(zeta.clone()),
            kappa: Some(kappa.clone()),
            c: Some(c.clone()),
            ..Default::default()
        },
    })
}

/// `C = m0 + m_zeta + c3 m3`.
pub fn build_c3<Q: Coefficient>(zeta: &SuperFunction<Q>, c3: &Scalar<Q>) -> Result<Deformation<Q>, DeformError> {
    let ctx = zeta.context();
    require(zeta.parity() == Some(Parity::Even), "zeta must be even")?;
    require(zeta.in_even_hbar_ideal(2), "zeta must lie in hbar^2 E[[hbar^2]]")?;
    require(c3.parity() == Some(Parity::Even), "c3 must be even")?;
    require(scalar_in_ideal(c3), "c3 must lie in hbar^2 K[[hbar^2]]")?;
    let c3 = c3.with_context(ctx.scalar_ctx());
    let bracket = Cochain::sum(vec![
        Cochain::poisson(ctx),
        Cochain::m_zeta(zeta),
        Cochain::scaled(&c3, &Cochain::m3(ctx)),
    ])?
    .with_name(format!("C3(zeta={zeta}, c3={c3})"));
    Ok(Deformation {
        bracket,
        flavor: Flavor::C3,
        params: DeformParams {
            zeta: Some(zeta.clone()),
            c3: Some(c3),
            ..Default::default()
        },
    })
}

/// The even deformation of the antibracket,
/// `[f, g] + (-1)^{eps f} (K Delta f) E g + (E f) K Delta g`,
/// `K = c / (1 + c N_z / 2)`.
pub fn build_anti_even<Q: Coefficient>(ctx: &Ctx, c: &Scalar<Q>) -> Result<Deformation<Q>, DeformError> {
    require_balanced(ctx)?;
    require(c.is_theta_free(), "c must be a number series")?;
    require(scalar_in_ideal(c), "c must lie in hbar^2 K[[hbar^2]]")?;
    let c = c.with_context(ctx.scalar_ctx());
    let bracket = if c.is_zero() {
        Cochain::antibracket(ctx)
    } else {
        Cochain::antibracket(ctx).plus(&Cochain::anti_even_correction(ctx, c.clone()))?
    }
    .with_name(format!("antieven(c={c})"));
    Ok(Deformation {
        bracket,
        flavor: Flavor::AntiEven,
        params: DeformParams {
            c: Some(c),
            ..Default::default()
        },
    })
}

/// `[f, g] + th1 m_{2|3}(f, g)`.
pub fn build_anti_odd<Q: Coefficient>(ctx: &Ctx) -> Result<Deformation<Q>, DeformError> {
    require_balanced(ctx)?;
    if ctx.theta_count == 0 {
        return Err(DeformError::NoTheta);
    }
    let odd = Cochain::theta_prefix(0, &Cochain::m23(ctx))?;
    let bracket = Cochain::antibracket(ctx).plus(&odd)?.with_name("antiodd()");
    Ok(Deformation {
        bracket,
        flavor: Flavor::AntiOdd,
        params: DeformParams::default(),
    })
}

/// One relation of the odd-parameter system with its residual.
#[derive(Debug, Clone)]
pub struct RelationResidual<Q: Coefficient> {
    pub name: &'static str,
    pub residual: SuperFunction<Q>,
}

impl<Q: Coefficient> RelationResidual<Q> {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintReport<Q: Coefficient> {
    pub relations: Vec<RelationResidual<Q>>,
    /// Violated parity or class requirements.
    pub hypotheses: Vec<String>,
}

impl<Q: Coefficient> ConstraintReport<Q> {
    pub fn pass(&self) -> bool {
        self.hypotheses.is_empty() && self.relations.iter().all(|r| r.holds())
    }

    pub fn relation(&self, name: &str) -> Option<&RelationResidual<Q>> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Names and residuals of everything that failed.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.hypotheses.clone();
        for r in &self.relations {
            if !r.holds() {
                out.push(format!("relation ({}) residual {}", r.name, r.residual));
            }
        }
        out
    }
}

impl<Q: Coefficient> fmt::Display for ConstraintReport<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            writeln!(
                f,
                "relation ({}): {} (residual {})",
                r.name,
                if r.holds() { "holds" } else { "fails" },
                r.residual
            )?;
        }
        for h in &self.hypotheses {
            writeln!(f, "hypothesis: {h}")?;
        }
        Ok(())
    }
}

fn theta1<Q: Coefficient>(ctx: &Ctx) -> Result<Scalar<Q>, DeformError> {
    Scalar::theta(ctx.scalar_ctx(), 0).map_err(|_| DeformError::NoTheta)
}

/// `theta h1 m1(zeta, zeta) + theta [2E - (2 + n+ - n-)] zeta + {zeta, zeta}`,
/// the part of relation (i) that involves neither `eta` nor `h2`.
fn zeta_terms<Q: Coefficient>(zeta: &SuperFunction<Q>, h1: &Scalar<Q>) -> Result<SuperFunction<Q>, DeformError> {
    let ctx = zeta.context();
    let th = theta1::<Q>(ctx)?;
    let shift = 2 + ctx.n_plus as i64 - ctx.n_minus as i64;
    let euler_part = zeta.euler().scale_ratio(2, 1).sub_ref(&zeta.scale_ratio(shift, 1));
    let mut out = euler_part.scale_left(&th);
    if !h1.is_zero() {
        let m1 = crate::cochains::m1(zeta, zeta);
        out.add_assign_ref(&m1.scale_left(&th.mul_ref(h1)));
    }
    out.add_assign_ref(&crate::brackets::poisson_bracket(zeta, zeta));
    Ok(out)
}

fn hypotheses<Q: Coefficient>(
    zeta: &SuperFunction<Q>,
    eta: Option<&SuperFunction<Q>>,
    h1: &Scalar<Q>,
    h2: &Scalar<Q>,
) -> Vec<String> {
    let mut out = Vec::new();
    if !zeta.is_zero() && zeta.parity() != Some(Parity::Odd) {
        out.push("zeta must be odd".to_string());
    }
    if let Some(eta) = eta {
        if eta.parity() != Some(Parity::Even) {
            out.push("eta must be even".to_string());
        }
        if !eta.is_d_class() {
            out.push(format!("eta must be D-class (non-D part {})", eta.filter_terms(|m| m.weight == 0.into())));
        }
    }
    if !h1.is_zero() && h1.parity() != Some(Parity::Odd) {
        out.push("h1 must be odd".to_string());
    }
    if h2.parity() != Some(Parity::Even) {
        out.push("h2 must be even".to_string());
    }
    out
}

/// Evaluates the three relations of the odd-parameter theorem:
/// (i) `eta + theta h1 m1(zeta,zeta) + theta [2E - (2+n+-n-)] zeta
///      + bar(eta) zeta + {zeta,zeta} - h2`,
/// (ii) `theta bar(eta)`, (iii) `theta (1+n+-n-) h2 - bar(eta) h2`,
/// together with the parity and class requirements.
pub fn check_constraints<Q: Coefficient>(
    zeta: &SuperFunction<Q>,
    eta: &SuperFunction<Q>,
    h1: &Scalar<Q>,
    h2: &Scalar<Q>,
) -> Result<ConstraintReport<Q>, DeformError> {
    let ctx = zeta.context();
    let th = theta1::<Q>(ctx)?;
    let sctx = ctx.scalar_ctx();
    let (h1, h2) = (h1.with_context(sctx), h2.with_context(sctx));
    let mut hyp = hypotheses(zeta, Some(eta), &h1, &h2);
    let eta_bar = match eta.integral_bar() {
        Ok(b) => b,
        Err(e) => {
            hyp.push(format!("bar(eta) does not exist: {e}"));
            Scalar::zero(sctx)
        }
    };
    let rel1 = eta
        .add_ref(&zeta_terms(zeta, &h1)?)
        .add_ref(&zeta.scale_left(&eta_bar))
        .sub_ref(&SuperFunction::constant(ctx, h2.clone()));
    let rel2 = SuperFunction::constant(ctx, th.mul_ref(&eta_bar));
    let k = 1 + ctx.n_plus as i64 - ctx.n_minus as i64;
    let rel3 = th
        .mul_ref(&h2)
        .scale(&Q::from_ratio(k, 1))
        .sub_ref(&eta_bar.mul_ref(&h2));
    Ok(ConstraintReport {
        relations: vec![
            RelationResidual { name: "i", residual: rel1 },
            RelationResidual { name: "ii", residual: rel2 },
            RelationResidual {
                name: "iii",
                residual: SuperFunction::constant(ctx, rel3),
            },
        ],
        hypotheses: hyp,
    })
}

/// Result of solving relation (i) for `eta`.
#[derive(Debug, Clone)]
pub struct EtaSolution<Q: Coefficient> {
    pub eta: SuperFunction<Q>,
    pub eta_bar: Scalar<Q>,
    /// The `h2` used; the canceling choice when none was supplied.
    pub h2: Scalar<Q>,
    pub report: ConstraintReport<Q>,
}

/// Solves relation (i) for `eta`. Without a given `h2` the constant that
/// cancels the non-D constant part is chosen. Fails when `eta` cannot be
/// D-class, listing the obstruction in the sign of the relation residual.
pub fn solve_eta<Q: Coefficient>(
    zeta: &SuperFunction<Q>,
    h1: &Scalar<Q>,
    h2: Option<&Scalar<Q>>,
) -> Result<EtaSolution<Q>, DeformError> {
    let ctx = zeta.context();
    let sctx = ctx.scalar_ctx();
    let h1 = h1.with_context(sctx);
    let r0 = zeta_terms(zeta, &h1)?.neg_ref();
    let h2 = match h2 {
        Some(h) => h.with_context(sctx),
        None => r0.constant_term().neg_ref(),
    };
    let rhs = r0.add_ref(&SuperFunction::constant(ctx, h2.clone()));
    // eta = rhs - bar(eta) zeta, so bar(eta) = bar(rhs) - bar(bar(eta) zeta);
    // iterate, the map is nilpotent whenever bar(zeta) is
    let rhs_bar = rhs.integral_bar().map_err(|_| {
        DeformError::Obstruction(format!("non-integrable terms {}", non_d_part(&rhs).neg_ref()))
    })?;
    let mut eta_bar = rhs_bar.clone();
    let mut converged = false;
    for _ in 0..(ctx.theta_count as u32 + ctx.hbar_max + 3) {
        let next = rhs_bar.sub_ref(&zeta.scale_left(&eta_bar).integral_bar()?);
        if next == eta_bar {
            converged = true;
            break;
        }
        eta_bar = next;
    }
    if !converged {
        return Err(DeformError::Obstruction("bar(eta) has no finite fixed point".into()));
    }
    let eta = rhs.sub_ref(&zeta.scale_left(&eta_bar));
    let obstruction = non_d_part(&eta);
    if !obstruction.is_zero() {
        return Err(DeformError::Obstruction(obstruction.neg_ref().to_string()));
    }
    let report = check_constraints(zeta, &eta, &h1, &h2)?;
    Ok(EtaSolution {
        eta,
        eta_bar,
        h2,
        report,
    })
}

fn non_d_part<Q: Coefficient>(f: &SuperFunction<Q>) -> SuperFunction<Q> {
    f.filter_terms(|m| m.weight == 0.into())
}

/// `C = m0 + theta h1 m1 + theta m3 + m_zeta + theta h1 j_zeta + eta mu`.
pub fn build_general_odd<Q: Coefficient>(
    zeta: &SuperFunction<Q>,
    eta: &SuperFunction<Q>,
    h1: &Scalar<Q>,
    h2: &Scalar<Q>,
) -> Result<Deformation<Q>, DeformError> {
    let ctx = zeta.context();
    let report = check_constraints(zeta, eta, h1, h2)?;
    if !report.pass() {
        return Err(DeformError::Constraint(report.violations()));
    }
    let sctx = ctx.scalar_ctx();
    let th = theta1::<Q>(ctx)?;
    let h1 = h1.with_context(sctx);
    let th_h1 = th.mul_ref(&h1);
    let mut parts = vec![Cochain::poisson(ctx), Cochain::scaled(&th, &Cochain::m3(ctx))];
    if !zeta.is_zero() {
        parts.push(Cochain::m_zeta(zeta));
    }
    if !th_h1.is_zero() {
        parts.push(Cochain::scaled(&th_h1, &Cochain::m1(ctx)));
        if !zeta.is_zero() {
            parts.push(Cochain::scaled(&th_h1, &Cochain::j_zeta(zeta)));
        }
    }
    if !eta.is_zero() {
        parts.push(Cochain::left_mul(eta, &Cochain::mu(ctx)));
    }
    let bracket = Cochain::sum(parts)?.with_name(format!("general(zeta={zeta}, eta={eta}, h1={h1}, h2={h2})"));
    Ok(Deformation {
        bracket,
        flavor: Flavor::GeneralOdd,
        params: DeformParams {
            zeta: Some(zeta.clone()),
            eta: Some(eta.clone()),
            h1: Some(h1),
            h2: Some(h2.with_context(sctx)),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superfunc::{weight, SymplecticContext};
    use num_rational::BigRational;

    type F = SuperFunction<BigRational>;
    type S = Scalar<BigRational>;

    fn hb(ctx: &Ctx, m: u32) -> S {
        S::hbar_power(ctx.scalar_ctx(), m)
    }

    #[test]
    fn c1_trivial_parameters_give_moyal_and_poisson() {
        let c = SymplecticContext::standard(2, 2, 0, 0).unwrap();
        let d = build_c1(&F::zero(&c), &S::one(c.scalar_ctx())).unwrap();
        let g = F::gauss(&c, weight(1)).unwrap();
        let f = &F::x(&c, 0).pow(3) * &g;
        let h = &F::x(&c, 1).pow(3) * &F::xi(&c, 0);
        assert_eq!(d.eval(&f, &h).unwrap(), crate::brackets::poisson_bracket(&f, &h));
    }

    #[test]
    fn c1c_with_only_c_term() {
        let c = SymplecticContext::standard(2, 1, 0, 6).unwrap();
        let d = build_c1c(&F::zero(&c), &S::zero(c.scalar_ctx()), &hb(&c, 2)).unwrap();
        let g = F::gauss(&c, weight(1)).unwrap();
        let f = &g * &F::xi(&c, 0);
        let h = &(&F::x(&c, 0) * &g) * &F::xi(&c, 0);
        let fbar = f.integral_bar().unwrap();
        let hbar = h.integral_bar().unwrap();
        let expect = crate::brackets::poisson_bracket(&f, &h)
            .add_ref(&F::constant(&c, hb(&c, 2).mul_ref(&fbar).mul_ref(&hbar)));
        assert_eq!(d.eval(&f, &h).unwrap(), expect);
    }

    #[test]
    fn predicates_are_enforced() {
        let c = SymplecticContext::standard(4, 2, 0, 6).unwrap();
        let one = S::one(c.scalar_ctx());
        assert!(matches!(build_c1(&F::x(&c, 0), &one), Err(DeformError::Predicate(_))));
        assert!(matches!(build_c3(&F::zero(&c), &one), Err(DeformError::Predicate(_))));
        let odd = F::xi(&c, 0).scale_left(&hb(&c, 2));
        assert!(matches!(build_c1(&odd, &one), Err(DeformError::Predicate(_))));
        assert!(matches!(build_anti_even(&c, &hb(&c, 2)), Err(DeformError::NotBalanced { .. })));
    }

    #[test]
    fn anti_even_example() {
        // n = 1, f = x1 xi1, g = 1: Delta f = 1, E g = 1, eps(f) = 1
        let c = SymplecticContext::standard(1, 1, 0, 2).unwrap();
        let d = build_anti_even(&c, &hb(&c, 2)).unwrap();
        let f = &F::x(&c, 0) * &F::xi(&c, 0);
        let r = d.eval(&f, &F::one(&c)).unwrap();
        assert_eq!(r, F::constant(&c, hb(&c, 2).neg_ref()));
    }

    #[test]
    fn anti_odd_examples() {
        let c = SymplecticContext::standard(2, 2, 1, 6).unwrap();
        let d = build_anti_odd::<BigRational>(&c).unwrap();
        assert_eq!(d.eval(&F::xi(&c, 0), &F::x(&c, 0)).unwrap(), F::from_int(&c, -1));
        let th = S::theta(c.scalar_ctx(), 0).unwrap();
        assert_eq!(d.eval(&F::one(&c), &F::one(&c)).unwrap(), F::constant(&c, th));
        let c0 = SymplecticContext::standard(2, 2, 0, 6).unwrap();
        assert!(matches!(build_anti_odd::<BigRational>(&c0), Err(DeformError::NoTheta)));
    }

    #[test]
    fn witness_constraints() {
        let c = SymplecticContext::standard(4, 5, 2, 6).unwrap();
        let sc = c.scalar_ctx();
        let rep = check_constraints(&F::xi(&c, 0), &F::zero(&c), &S::zero(sc), &S::one(sc)).unwrap();
        assert!(rep.pass(), "{rep}");
        let c = SymplecticContext::standard(4, 3, 2, 6).unwrap();
        let sc = c.scalar_ctx();
        let rep = check_constraints(&F::xi(&c, 0), &F::zero(&c), &S::zero(sc), &S::one(sc)).unwrap();
        assert!(!rep.pass());
        // (n- - n+ - 1) th1 xi1 = -2 th1 xi1
        let th = S::theta(sc, 0).unwrap();
        let expect = F::xi(&c, 0).scale_left(&th).scale_ratio(-2, 1);
        assert_eq!(rep.relation("i").unwrap().residual, expect);
    }

    #[test]
    fn eta_gauss_fails_relation_one() {
        let c = SymplecticContext::standard(4, 5, 1, 6).unwrap();
        let sc = c.scalar_ctx();
        let g = F::gauss(&c, weight(1)).unwrap();
        let rep = check_constraints(&F::zero(&c), &g, &S::zero(sc), &S::zero(sc)).unwrap();
        assert_eq!(rep.relation("i").unwrap().residual, g);
        assert!(rep.relation("iii").unwrap().holds());
    }

    #[test]
    fn solve_eta_examples() {
        let c = SymplecticContext::standard(4, 5, 1, 6).unwrap();
        let sc = c.scalar_ctx();
        let sol = solve_eta(&F::xi(&c, 0), &S::zero(sc), None).unwrap();
        assert!(sol.eta.is_zero());
        assert_eq!(sol.h2, S::one(sc));
        assert!(sol.report.pass());
        // zeta = 0: eta = h2 is D-class only for h2 = 0
        assert!(solve_eta(&F::zero(&c), &S::zero(sc), Some(&S::one(sc))).is_err());
        assert!(solve_eta(&F::zero(&c), &S::zero(sc), None).unwrap().eta.is_zero());
        let c = SymplecticContext::standard(4, 3, 1, 6).unwrap();
        let sc = c.scalar_ctx();
        match solve_eta(&F::xi(&c, 0), &S::zero(sc), None) {
            Err(DeformError::Obstruction(t)) => assert_eq!(t, "-2*th1*xi1"),
            other => panic!("expected obstruction, got {other:?}"),
        }
    }
}
