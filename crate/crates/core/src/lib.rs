//! Reconstruction of circle measures from their Fourier coefficients.
//!
//! A Borel probability measure `μ` on the circle `[0, 1)` is described in a
//! small language (see [`dsl`]) and turned into a [`CoefficientProvider`].
//! From the coefficients alone the crate recovers
//!
//! - point masses, by Cesàro averages of `μ̂(n) e(nx)` ([`wiener`]);
//! - arc measures `μ[a, b)` and the distribution function ([`arc`]);
//! - measures of autocorrelation arcs `(μ ∗ μ̄)[a, b)`;
//! - the Cantor function through its Fourier series ([`cantor`]);
//! - local dimensions by log-log regression of ball measures ([`local_dim`]).
//!
//! [`oracle`] computes the same quantities without any Fourier machinery and
//! is what the test suites compare against.

pub mod arc;
pub mod cantor;
pub mod cli;
pub mod coefficients;
pub mod dsl;
pub mod error;
pub mod fejer;
pub mod local_dim;
pub mod oracle;
pub mod phase;
pub mod series;
pub mod sum;
pub mod wiener;

pub use arc::{arc_measure, cdf, ArcOptions, CircleArc, LimitMethod, SeriesResult};
pub use coefficients::{Atom, CoefficientProvider, ComplexValue, MeasureSpec};
pub use dsl::{parse_measure, ParseDiagnostic};
pub use error::{Error, Result};
pub use series::Smoothing;
pub use wiener::{atom_mass, AtomEstimate, Window};
