//! Closed-form rational expressions over degree-`N` forms.

mod expr;
mod forms;
mod kernel;
mod ppoly;
mod sympoly;

pub use expr::{NumeratorTermJson, PrefixJson, RationalExpr, RationalJson, RationalTerm, RationalTermJson};
pub use forms::{permutation_form, FormTable};
pub use ppoly::{p_polynomial, p_polynomial_uncached, q_polynomial};
pub use sympoly::{uv_lookup, uv_name, SymMonomial, SymPoly};
