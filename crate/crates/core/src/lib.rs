//! Exhaustive, exact-arithmetic checks of No-Free-Lunch style results on
//! search spaces small enough to enumerate.
//!
//! Everything is generic over an exact ordered field ([`scalar::Scalar`]);
//! the aliases below fix it to arbitrary-precision rationals.

pub mod algorithms;
pub mod counterexamples;
pub mod enumeration;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod metrics;
pub mod policy;
pub mod scalar;
pub mod space;
pub mod table;
pub mod trace;
pub mod verifier;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;

pub type SearchSpace = space::SearchSpace<Rational>;
pub type ValueTable = table::ValueTable<Rational>;
pub type FunctionSet = enumeration::FunctionSet<Rational>;
pub type Policy = policy::Policy<Rational>;
pub type TraceRecord = trace::TraceRecord<Rational>;
pub type ProblemDistribution = verifier::ProblemDistribution<Rational>;
pub type VerificationReport = verifier::VerificationReport<Rational>;
pub type TspInstance = counterexamples::TspInstance<Rational>;
