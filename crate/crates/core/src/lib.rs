//! Exact-rational machinery for deciding whether a convex cone of payoffs on a
//! finite probability space admits an equivalent super-martingale measure, for
//! computing the minimal constants in the associated characterizations, and for
//! constructing the certifying measures.
//!
//! Everything outside the casebook runs in exact rational arithmetic; every
//! negative answer ships a Farkas-style certificate that can be re-checked by
//! independent arithmetic.

pub mod casebook;
pub mod construct;
pub mod criteria;
pub mod marginals;
pub mod rational;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod space;

pub use rational::Rational;
pub use space::{ConeKind, ConeSpec, FiniteProbSpace, Measure, RandomVariable};
