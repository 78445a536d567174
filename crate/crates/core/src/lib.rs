//! Propositional quantum logic over the subspace lattice of `ℂ^n`.
//!
//! Formulas over `∧ ∨ ¬ ⊤ ⊥` are evaluated on assignments of subspaces
//! (meet is intersection, join is span, negation is orthogonal
//! complement). On top of that the crate builds formulas whose maximum
//! attainable dimension is known in closed form, and uses them to separate
//! the tautology sets of `ℂ^m` and `ℂ^n` for any `m < n`.
//!
//! ```
//! use qlogic::formula::{mk_alpha, parse};
//! use qlogic::dbar::witness_alpha;
//! use qlogic::subspace::Tolerance;
//!
//! let tol = Tolerance::default();
//! let w = witness_alpha(4, &tol).unwrap();
//! assert_eq!(w.achieved, 2);
//! assert_eq!(parse("(b | !a) & a & !(a & b)").unwrap(), mk_alpha("a", "b"));
//! ```

pub mod dbar;
pub mod error;
pub mod formula;
pub mod subspace;
pub mod valuation;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use formula::Formula;
pub use subspace::{Subspace, Tolerance};
pub use valuation::{evaluate, Environment};
