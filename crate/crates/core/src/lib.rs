//! Exact *-moments of the operator `T = DT(δ₀, 1)`.
//!
//! Renormalized moments `N(k₁,ℓ₁,…,kₙ,ℓₙ) = (m+1)!·τ((T*)^{k₁}T^{ℓ₁}⋯)` are computed
//! two ways: by a memoized recursion ([`moments`]) and as coefficients of the
//! generating functions `Fₙ` ([`genfun`]). `Fₙ` is built from truncated power
//! series under the reweighted product `⊙` ([`fps`]) and, in closed form, from
//! rational expressions over `(1 − u)` factors ([`ratfun`]).
//!
//! All arithmetic is exact.

pub mod cli;
pub mod comb;
pub mod error;
pub mod fps;
pub mod genfun;
pub mod moments;
pub mod ratfun;

pub use error::{Error, Result};
