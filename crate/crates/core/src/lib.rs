//! Exact multivariate Bell polynomials and higher-order derivatives of
//! composed multivariate functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`multiindex`]: multi-index arithmetic and graded enumeration.
//! - [`partition`]: the solution sets `K_n` and `K_{n,k}` of assignments
//!   `j ↦ k_j` that index Bell polynomial terms.
//! - [`bell`]: 1-D and multivariate partial/complete Bell polynomials as
//!   canonical sparse polynomials with exact rational coefficients.
//! - [`series`]: truncated multivariate Taylor series whose stored
//!   coefficients are derivatives at the expansion point, plus a direct
//!   substitution composition used as an independent oracle.
//! - [`fdb`]: the multivariate Faà di Bruno engine and the generating
//!   function checker.
//! - [`verify`]: seeded randomized verification suites.
//!
//! All arithmetic is exact over [`Rational`].
//!
//! ```
//! use mvbell::{bell, MultiIndex};
//!
//! let n = MultiIndex::from(vec![4]);
//! let k = MultiIndex::from(vec![2]);
//! let b42 = bell::bell_partial_mv(&n, &k, 1).unwrap();
//! assert_eq!(b42.to_string(), "4*x[3]*x[1] + 3*x[2]^2");
//! ```

pub mod bell;
pub mod error;
pub mod fdb;
pub mod multiindex;
pub mod partition;
pub mod rational;
pub mod series;
pub mod verify;

pub use bell::{Monomial, SparsePoly, VarId};
pub use error::{Error, Result};
pub use fdb::{DerivTensor, FaaDiBruno, GeneratingReport};
pub use multiindex::MultiIndex;
pub use partition::{SolutionAssignment, SolutionSetSpec};
pub use rational::Rational;
pub use series::TaylorSeries;
