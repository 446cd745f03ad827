//! Exact counting of y-smooth solutions of `a + b = c` together with the
//! analytic machinery that predicts those counts: the saddle point of the
//! smooth-number Perron integral, Euler-product singular series, archimedean
//! densities built from test functions, and the circle-method layer
//! (exponential sums, major arcs, Dirichlet characters).
//!
//! Everything is organised around a [`SmoothContext`], an immutable sieve of
//! primes and largest-prime-factor values that can be shared across threads.
//!
//! ```
//! use friable::{SmoothContext, counting, saddle};
//!
//! let ctx = SmoothContext::new(100, 10_000).unwrap();
//! assert_eq!(ctx.psi_exact(10.0, 2.0).unwrap().count, 4);
//! assert_eq!(counting::count_exact(4.0, 2.0, &ctx).unwrap(), 2);
//!
//! let sd = saddle::solve_alpha(4.0, 2.0, &ctx).unwrap();
//! assert!((sd.alpha - 1.5f64.log2()).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archimedean;
pub mod arith;
pub mod circle;
pub mod counting;
mod error;
pub mod quad;
pub mod saddle;
pub mod series;
pub mod smooth;
pub mod verify;

pub use error::{Error, Result};
pub use smooth::{PsiValue, SmoothContext};

pub use num_complex::Complex64;
