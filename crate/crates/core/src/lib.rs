//! Exact weighted enumeration of generalized Catalan, Schröder and Motzkin
//! lattice paths.
//!
//! A path's weight is the product of `f(l)` over the lengths `l` of its
//! maximal runs of ascent steps. Three independent engines compute the
//! weighted sums:
//!
//! - [`paths`]: exhaustive depth-first generation (the ground truth),
//! - [`closedforms`]: explicit binomial and coefficient-extraction formulas,
//! - [`feq`]: fixed-point series solution of the first-return functional
//!   equation, plus the kernel-method count for even-k Motzkin paths.
//!
//! All arithmetic is over exact rationals ([`num_rational::BigRational`]).
//!
//! ```
//! use pathweight::{closedforms, paths::{self, PathFamily, ProductMode}, weights::WeightSpec};
//!
//! let w = WeightSpec::Linear(pathweight::series::rat(1));
//! let brute = paths::weighted_sum(&PathFamily::Catalan(1), 4, &w, &ProductMode::Full).unwrap();
//! assert_eq!(brute, closedforms::catalan_closed(1, 4, &w).unwrap());
//! ```

pub mod closedforms;
pub mod feq;
pub mod paths;
pub mod series;
pub mod weights;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use closedforms::FormulaId;
pub use feq::MasterSpec;
pub use paths::{AscentVector, LatticePath, PathFamily, ProductMode, Step, StepKind, StepSystem};
pub use series::TruncatedSeries;
pub use weights::WeightSpec;
