//! Graded string diagrams for imprecise probability.
//!
//! Morphisms carry a grade counting nondeterministic bits. Terms over the
//! circuit generators (`del`, `copy`, `and`, `not`, `state(p)`), the knight
//! (a nondeterministic bit) and conditioning (`cond`) are evaluated to exact
//! block-substochastic matrices, one block per nondeterministic branch.
//!
//! - [`grading`]: the grading prop of injections and its matrix embedding.
//! - [`stoch`]: exact rational matrices on power-of-two dimensions.
//! - [`terms`]: graded terms, profiles and the s-expression syntax.
//! - [`bimp`]: evaluation, exact equality and equality up to regrading.
//! - [`normalform`]: factoring a term as knights followed by a plain circuit.
//! - [`lang`]: a small probabilistic language compiled to graded terms.
//! - [`suites`]: randomized verification of the laws and axioms.

pub mod bimp;
pub mod grading;
pub mod lang;
pub mod normalform;
pub mod stoch;
pub mod suites;
pub mod terms;

pub use bimp::{eval, BimpError, BimpMorphism};
pub use grading::Injection;
pub use stoch::{Rational, StochMatrix};
pub use terms::{Generator, GradedSignature, GradedTerm, Profile};
