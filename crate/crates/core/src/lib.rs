// SPDX-License-Identifier: Apache-2.0

//! Distribution of a random variable `X` defined implicitly through
//! `f(X) = A`, where `f` is strictly monotone and continuously
//! differentiable and the law of `A` is known.
//!
//! ```
//! use impdens::{Bracket, ImplicitDensity, MonotoneMap, SourceDistribution};
//!
//! let map = MonotoneMap::parse("t^5 + t", Bracket::new(-2.0, 2.0).unwrap()).unwrap();
//! let law = ImplicitDensity::new(map, SourceDistribution::uniform(0.0, 1.0).unwrap()).unwrap();
//! // density (0 <= t^5 + t <= 1) * (5 t^4 + 1)
//! assert_eq!(law.pdf_x(0.0), 1.0);
//! assert_eq!(law.pdf_x(-0.1), 0.0);
//! let median = law.quantile_x(0.5).unwrap();
//! assert!((median.powi(5) + median - 0.5).abs() < 1e-12);
//! ```

pub mod distributions;
pub mod expr;
pub mod numerics;
pub mod problem;
pub mod transform;
pub mod verify;

pub use distributions::{DistributionError, DistributionSpec, SourceDistribution};
pub use expr::{Expr, ParseError};
pub use numerics::{Bracket, NumericsError, RngState, Tolerances};
pub use problem::{GridSeries, GridSpec, ProblemError, ProblemSpec};
pub use transform::{Direction, ImplicitDensity, MonotoneMap, TransformError};
pub use verify::{VerificationReport, VerifyError};
