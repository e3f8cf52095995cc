//! Truncated multivariate formal power series over the rationals, graded by a
//! homogeneity modulus `N`, with the `⊙` product and the E-transform.

pub mod format;
pub mod identities;
mod qseries;
mod registry;
mod series;

pub use qseries::{e_inverse, e_transform, QSeries};
pub use registry::{VariableRegistry, DEFAULT_MODULUS};
pub use series::{ExponentVector, Series};

pub(crate) use registry::same_registry;
pub(crate) use series::{compact_monomial, fmt_rational};
