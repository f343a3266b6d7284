//! Command-line front end: parses a [`CommandConfig`], runs it and reports.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use superdeform::cochains::Cochain;
use superdeform::deformations::{check_constraints, DeformParams, Flavor};
use superdeform::parse::{parse_cochain, parse_deformation, parse_expression, parse_scalar};
use superdeform::verify::{self, ClassFilter, ParityFilter, DEFAULT_SEED};
use superdeform::{BracketKind, CochainQ, Ctx, DeformationQ, Grading, SampleSpec, SymplecticContext, VerificationReport};

pub const SEED_ENV: &str = "SUPERDEFORM_SEED";

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "superdeform", version, about = "Exact checks for super Poisson and antibracket deformations")]
pub struct CommandConfig {
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub sampling: SampleArgs,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct ContextArgs {
    #[arg(long, global = true, default_value_t = 4)]
    pub nplus: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub nminus: usize,
    /// Shorthand for `--nplus n --nminus n`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of odd parameters.
    #[arg(long, global = true, default_value_t = 1)]
    pub k: usize,
    #[arg(long, global = true, default_value_t = 6)]
    pub hmax: u32,
    /// Signs of the odd block, comma separated; a single value applies to all.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct SampleArgs {
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    /// Defaults to $SUPERDEFORM_SEED, then to a built-in seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_x_degree: u32,
    #[arg(long, global = true, default_value_t = 5)]
    pub max_xi_degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = ParityArg::Any)]
    pub parity: ParityArg,
    #[arg(long, global = true, value_enum, default_value_t = ClassArg::D)]
    pub class: ClassArg,
    /// Let samples carry odd-parameter factors.
    #[arg(long, global = true)]
    pub theta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BracketArg {
    Poisson,
    Anti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CocycleCheck {
    /// `d M = 0`
    Cocycle,
    /// `d d M = 0`
    Squared,
    /// `-J(M, m0) = d M`
    Cross,
    Signs,
    Antisymmetry,
    Grading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    C1,
    C1c,
    C3,
    Antieven,
    Antiodd,
    Multi,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print the canonical form of an expression.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply a bracket: `poisson`, `anti` or any cochain spec of arity 2.
    Bracket {
        #[arg(long = "type", default_value = "poisson")]
        kind: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Evaluate a cochain spec on arguments.
    Cochain {
        spec: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Jacobi identity of a deformation, or of a bare 2-cochain.
    Jacobi {
        #[arg(long, conflicts_with = "cochain", required_unless_present = "cochain")]
        deformation: Option<String>,
        #[arg(long)]
        cochain: Option<String>,
        #[arg(long, value_enum, default_value_t = BracketArg::Poisson)]
        bracket: BracketArg,
    },
    /// Cocycle-type identities of a cochain.
    Cocycle {
        spec: String,
        #[arg(long, value_enum, default_value_t = BracketArg::Poisson)]
        bracket: BracketArg,
        #[arg(long, value_enum, default_value_t = CocycleCheck::Cocycle)]
        check: CocycleCheck,
    },
    /// `T C1(f, g) = C2(T f, T g)` through `hbar^order`, `T = id + hbar^2 T1`.
    Equiv {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        /// `bar(E)` for `f -> E bar f`, `euler(a)` for `f -> a E f`, or `zero`.
        #[arg(long)]
        t1: String,
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Build a theorem's bracket and run its checks.
    Theorem {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c3: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h2: Option<String>,
    },
}

impl CommandConfig {
    pub fn context(&self) -> Result<Ctx> {
        let c = &self.context;
        let (np, nm) = match c.n {
            Some(n) => (n, n),
            None => (c.nplus, c.nminus),
        };
        let values: Vec<i8> = c
            .lambda
            .split(',')
            .map(|s| s.trim().trim_start_matches('+').parse::<i8>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("bad --lambda '{}'", c.lambda))?;
        let lambda = match values.as_slice() {
            [one] => vec![*one; nm],
            _ => values,
        };
        Ok(SymplecticContext::new(np, nm, lambda, c.k, c.hmax)?)
    }

    /// Explicit seed, then the environment, then the default.
    pub fn seed(&self) -> Result<u64> {
        if let Some(s) = self.sampling.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().with_context(|| format!("bad {SEED_ENV} '{v}'")),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn sample_spec(&self) -> Result<SampleSpec> {
        let s = &self.sampling;
        Ok(SampleSpec::default()
            .with_seed(self.seed()?)
            .with_count(s.samples)
            .with_max_x_degree(s.max_x_degree)
            .with_max_xi_degree(s.max_xi_degree)
            .with_parity(match s.parity {
                ParityArg::Even => ParityFilter::Even,
                ParityArg::Odd => ParityFilter::Odd,
                ParityArg::Any => ParityFilter::Any,
            })
            .with_class(match s.class {
                ClassArg::D => ClassFilter::D,
                ClassArg::E => ClassFilter::E,
            })
            .with_theta(s.theta))
    }

    /// Command-line arguments that parse back to this config.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = vec!["superdeform".into()];
        let flag = |a: &mut Vec<String>, name: &str, value: String| {
            a.push(format!("--{name}"));
            a.push(value);
        };
        let c = &self.context;
        flag(&mut a, "nplus", c.nplus.to_string());
        flag(&mut a, "nminus", c.nminus.to_string());
        if let Some(n) = c.n {
            flag(&mut a, "n", n.to_string());
        }
        flag(&mut a, "k", c.k.to_string());
        flag(&mut a, "hmax", c.hmax.to_string());
        flag(&mut a, "lambda", c.lambda.clone());
        let s = &self.sampling;
        flag(&mut a, "samples", s.samples.to_string());
        if let Some(seed) = s.seed {
            flag(&mut a, "seed", seed.to_string());
        }
        flag(&mut a, "max-x-degree", s.max_x_degree.to_string());
        flag(&mut a, "max-xi-degree", s.max_xi_degree.to_string());
        flag(&mut a, "parity", value_name(s.parity));
        flag(&mut a, "class", value_name(s.class));
        if s.theta {
            a.push("--theta".into());
        }
        if let Some(o) = &self.output {
            flag(&mut a, "output", o.display().to_string());
        }
        match &self.command {
            Command::Eval { expr } => {
                a.push("eval".into());
                a.push("--".into());
                a.push(expr.clone());
            }
            Command::Bracket { kind, f, g } => {
                a.push("bracket".into());
                flag(&mut a, "type", kind.clone());
                a.extend(["--".into(), f.clone(), g.clone()]);
            }
            Command::Cochain { spec, args } => {
                a.push("cochain".into());
                a.push("--".into());
                a.push(spec.clone());
                a.extend(args.iter().cloned());
            }
            Command::Jacobi {
                deformation,
                cochain,
                bracket,
            } => {
                a.push("jacobi".into());
                if let Some(d) = deformation {
                    flag(&mut a, "deformation", d.clone());
                }
                if let Some(c) = cochain {
                    flag(&mut a, "cochain", c.clone());
                }
                flag(&mut a, "bracket", value_name(*bracket));
            }
            Command::Cocycle { spec, bracket, check } => {
                a.push("cocycle".into());
                flag(&mut a, "bracket", value_name(*bracket));
                flag(&mut a, "check", value_name(*check));
                a.push("--".into());
                a.push(spec.clone());
            }
            Command::Equiv { c1, c2, t1, order } => {
                a.push("equiv".into());
                flag(&mut a, "c1", c1.clone());
                flag(&mut a, "c2", c2.clone());
                flag(&mut a, "t1", t1.clone());
                flag(&mut a, "order", order.to_string());
            }
            Command::Theorem {
                case,
                zeta,
                kappa,
                c,
                c3,
                eta,
                h1,
                h2,
            } => {
                a.push("theorem".into());
                flag(&mut a, "case", value_name(*case));
                for (name, v) in [("zeta", zeta), ("kappa", kappa), ("c", c), ("c3", c3), ("eta", eta), ("h1", h1), ("h2", h2)] {
                    if let Some(v) = v {
                        flag(&mut a, name, v.clone());
                    }
                }
            }
        }
        a
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    /// Human-readable lines.
    pub text: String,
    /// Machine-readable result.
    pub json: serde_json::Value,
}

impl Outcome {
    fn value(text: String) -> Self {
        Outcome {
            pass: true,
            json: serde_json::json!({ "result": text }),
            text,
        }
    }

    fn report(r: VerificationReport, preface: Option<String>) -> Self {
        let mut text = preface.map(|p| p + "\n").unwrap_or_default();
        text.push_str(&r.summary());
        for f in r.failures.iter().take(3) {
            text.push_str(&format!("\n  sample {}: {}", f.index, f.residual));
        }
        Outcome {
            pass: r.pass,
            json: serde_json::to_value(&r).expect("reports serialize"),
            text,
        }
    }
}

fn bracket_kind(b: BracketArg) -> BracketKind {
    match b {
        BracketArg::Poisson => BracketKind::Poisson,
        BracketArg::Anti => BracketKind::Anti,
    }
}

fn cochain_spec(text: &str, ctx: &Ctx) -> Result<CochainQ> {
    Ok(match text.trim() {
        "poisson" => Cochain::poisson(ctx),
        t => parse_cochain(t, ctx)?,
    })
}

/// `bar(E)`, `euler(a)` or `zero`.
fn parse_t1(text: &str, ctx: &Ctx) -> Result<CochainQ> {
    let t = text.trim();
    if t == "zero" {
        return Ok(Cochain::zero(ctx, 1));
    }
    let inner = |name: &str| t.strip_prefix(name).and_then(|r| r.trim().strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
    if let Some(e) = inner("bar") {
        return Ok(Cochain::zeta_bar(&parse_expression(e, ctx)?));
    }
    if let Some(a) = inner("euler") {
        return Ok(Cochain::scaled(&parse_scalar(a, ctx)?, &Cochain::euler(ctx)));
    }
    bail!("unknown T1 '{t}'; expected bar(E), euler(a) or zero")
}

fn deformation_spec(case: Case, args: &[(&str, &Option<String>)]) -> String {
    let name = match case {
        Case::C1 => "c1",
        Case::C1c => "c1c",
        Case::C3 => "c3",
        Case::Antieven => "antieven",
        Case::Antiodd => "antiodd",
        Case::Multi => "general",
    };
    let kv: Vec<String> = args
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k}={v}")))
        .collect();
    format!("{name}({})", kv.join(", "))
}

fn theorem_allowed(case: Case) -> &'static [&'static str] {
    match case {
        Case::C1 => &["zeta", "kappa"],
        Case::C1c => &["zeta", "kappa", "c"],
        Case::C3 => &["zeta", "c3"],
        Case::Antieven => &["c"],
        Case::Antiodd => &[],
        Case::Multi => &["zeta", "eta", "h1", "h2"],
    }
}

/// Jacobi, plus the classical limit and first-order cocycle checks for the
/// hbar-deformations. The odd-parameter family is left out of those: its
/// `zeta` need not vanish at `hbar = th = 0`.
fn deformation_checks(d: &DeformationQ, spec: &SampleSpec) -> VerificationReport {
    let mut parts = vec![verify::check_jacobi(d, spec)];
    if d.flavor != Flavor::GeneralOdd {
        parts.push(verify::check_classical_limit(d, spec));
        parts.push(verify::check_first_order_cocycle(d, spec));
    }
    VerificationReport::combine(format!("theorem[{}]", d.flavor), &parts)
}

fn constraint_text(params: &DeformParams<BigRational>) -> Result<Option<String>> {
    let (Some(zeta), Some(eta), Some(h1), Some(h2)) = (&params.zeta, &params.eta, &params.h1, &params.h2) else {
        return Ok(None);
    };
    let r = check_constraints(zeta, eta, h1, h2)?;
    let verdict = if r.pass() { "PASS" } else { "FAIL" };
    Ok(Some(format!("{verdict} constraints: {}", r.to_string().trim_end())))
}

pub fn run(config: &CommandConfig) -> Result<Outcome> {
    let ctx = config.context()?;
    match &config.command {
        Command::Eval { expr } => Ok(Outcome::value(parse_expression::<BigRational>(expr, &ctx)?.to_string())),
        Command::Bracket { kind, f, g } => {
            let m = cochain_spec(kind, &ctx)?;
            if m.arity() != 2 {
                bail!("'{kind}' has arity {}, not 2", m.arity());
            }
            let args = [parse_expression(f, &ctx)?, parse_expression(g, &ctx)?];
            Ok(Outcome::value(m.eval(&args)?.to_string()))
        }
        Command::Cochain { spec, args } => {
            let m = cochain_spec(spec, &ctx)?;
            let args = args
                .iter()
                .map(|a| parse_expression(a, &ctx))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::value(m.eval(&args)?.to_string()))
        }
        Command::Jacobi {
            deformation,
            cochain,
            bracket,
        } => {
            let spec = config.sample_spec()?;
            let r = match (deformation, cochain) {
                (Some(d), _) => verify::check_jacobi(&parse_deformation::<BigRational>(d, &ctx)?, &spec),
                (None, Some(c)) => {
                    let grading: Grading = bracket_kind(*bracket).grading();
                    verify::check_jacobi_form(&cochain_spec(c, &ctx)?, grading, &spec)
                }
                (None, None) => bail!("give --deformation or --cochain"),
            };
            Ok(Outcome::report(r, None))
        }
        Command::Cocycle { spec: m, bracket, check } => {
            let spec = config.sample_spec()?;
            let m = cochain_spec(m, &ctx)?;
            let b = bracket_kind(*bracket);
            let r = match check {
                CocycleCheck::Cocycle => verify::check_cocycle(&m, b, &spec),
                CocycleCheck::Squared => verify::check_d_squared(&m, b, &spec),
                CocycleCheck::Cross => {
                    if b != BracketKind::Poisson {
                        bail!("the cross identity is stated for the Poisson bracket");
                    }
                    verify::check_cross_identity(&m, &spec)
                }
                CocycleCheck::Signs => verify::check_signs(&m, b.grading(), &spec),
                CocycleCheck::Antisymmetry => verify::check_antisymmetry(&m, b.grading(), &spec),
                CocycleCheck::Grading => verify::check_grading(&m, &spec),
            };
            Ok(Outcome::report(r, None))
        }
        Command::Equiv { c1, c2, t1, order } => {
            let spec = config.sample_spec()?;
            let d1 = parse_deformation(c1, &ctx)?;
            let d2 = parse_deformation(c2, &ctx)?;
            let t1 = parse_t1(t1, &ctx)?;
            Ok(Outcome::report(verify::check_equivalence(&d1, &d2, &t1, *order, &spec), None))
        }
        Command::Theorem {
            case,
            zeta,
            kappa,
            c,
            c3,
            eta,
            h1,
            h2,
        } => {
            let given = [("zeta", zeta), ("kappa", kappa), ("c", c), ("c3", c3), ("eta", eta), ("h1", h1), ("h2", h2)];
            let allowed = theorem_allowed(*case);
            if let Some((k, _)) = given.iter().find(|(k, v)| v.is_some() && !allowed.contains(k)) {
                bail!("--{k} does not apply to --case {}", value_name(*case));
            }
            let text = deformation_spec(*case, &given);
            let d = parse_deformation::<BigRational>(&text, &ctx).map_err(|e| anyhow!("{text}: {e}"))?;
            let preface = if d.flavor == Flavor::GeneralOdd {
                constraint_text(&d.params)?
            } else {
                None
            };
            let spec = config.sample_spec()?;
            Ok(Outcome::report(deformation_checks(&d, &spec), preface))
        }
    }
}
