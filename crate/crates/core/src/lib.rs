//! Exact symbolic checks for deformations of the Poisson superbracket and
//! the antibracket over a ring of even (`hbar`) and odd (`th1..thk`)
//! parameters.
//!
//! Everything is generic over the rational coefficient field `Q`; the
//! aliases below fix `Q = BigRational`, which is what the CLI and tests use.
//!
//! ```
//! use superdeform::{parse, SymplecticContext, SuperFunctionQ};
//!
//! let ctx = SymplecticContext::standard(4, 2, 1, 6).unwrap();
//! let f: SuperFunctionQ = parse::parse_expression("xi2*xi1", &ctx).unwrap();
//! assert_eq!(f.to_string(), "-xi1*xi2");
//! ```

pub mod scalars;
pub mod superfunc;
pub mod brackets;
pub mod cochains;
pub mod deformations;
pub mod parse;
pub mod verify;

use num_rational::BigRational;

pub use cochains::{BracketKind, Grading};
pub use scalars::{Coefficient, Parity};
pub use superfunc::{Ctx, SymplecticContext, Var};
pub use verify::{SampleSpec, VerificationReport};

pub type RadicalNumberQ = scalars::RadicalNumber<BigRational>;
pub type ScalarQ = scalars::Scalar<BigRational>;
pub type SuperFunctionQ = superfunc::SuperFunction<BigRational>;
pub type CochainQ = cochains::Cochain<BigRational>;
pub type DeformationQ = deformations::Deformation<BigRational>;
