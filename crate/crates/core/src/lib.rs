//! Exact verification, minimization and min-max certification of
//! k-submodular functions on star domains.
//!
//! Everything is generic over an exact [`Scalar`]; the aliases below fix it to
//! arbitrary-precision rationals.

pub mod domain;
pub mod dual;
pub mod error;
pub mod format;
pub mod function;
pub mod generate;
pub mod linalg;
pub mod lp;
pub mod minmax;
pub mod multimatroid;
pub mod polyhedron;
pub mod scalar;

pub use domain::{Domain, Label, Labeling};
pub use dual::{SignedVector, TightFamily};
pub use error::{Error, Result};
pub use function::{Backend, Term, ValuedFunction, Verdict, ViolationWitness};
pub use minmax::{Certificate, DualOptimum, MinMaxOutcome};
pub use multimatroid::RankFunction;
pub use polyhedron::{Basis, FullVector, PairRow};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Function = ValuedFunction<Rational>;
pub type RationalSignedVector = SignedVector<Rational>;
pub type RationalFullVector = FullVector<Rational>;
pub type RationalCertificate = Certificate<Rational>;
pub type RationalRank = RankFunction<Rational>;
