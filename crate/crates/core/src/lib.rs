//! Exact verification, weighting, saturation and certification of
//! Bollobás-type set-pair and subspace-pair systems.

pub mod arith;
pub mod cli;
pub mod construct;
pub mod error;
pub mod io;
pub mod saturation;
pub mod search;
pub mod subspace;
pub mod system;
pub mod verify;
pub mod weight;

pub use arith::{binomial, multinomial, BigRational, Field, PrimeFieldScalar, ProbabilityVector};
pub use construct::{construct, FamilyKind};
pub use error::{Error, Result};
pub use saturation::{certify_full_system, saturate, FullSystemCertificate, SaturationTrace};
pub use search::{search_max, Ground, Objective, SearchProblem, SearchResult};
pub use subspace::{Decomposition, Subspace};
pub use system::{embed, Partition, SetSystem, SetTuple, SubspaceSystem, SubspaceTuple, System, TupleSystem, TypeVector};
pub use verify::{check, verify, Condition, ConditionKind, VerificationReport};
pub use weight::{evaluate_inequality, omega, phi, Flavor, FunctionalKind, InequalityVerdict};
