//! Numerator polynomials of the closed-form ⊙ product.
//!
//! `P^{k,l}_{m,n}(u; v)` is printed with `u1..um` and `v1..vn` as indeterminates.

use dt_moments::ratfun::{p_polynomial, q_polynomial, uv_name};
use dt_moments::Result;

fn main() -> Result<()> {
    for (m, n, k, l) in [
        (1, 1, 0, 0),
        (2, 1, 0, 0),
        (2, 2, 0, 1),
        (2, 2, 1, 1),
        (2, 3, 1, 1),
        (2, 3, 1, 2),
    ] {
        let p = p_polynomial(m, n, k, l)?;
        println!("P^{{{k},{l}}}_{{{m},{n}}} = {}", p.display_with(uv_name(m)));
    }

    let q = q_polynomial(3, 3, 0, 0)?;
    let p = p_polynomial(3, 3, 0, 0)?;
    println!(
        "m = n = 3, k = l = 0: Q has {} terms, P has {} terms of degree at most {}",
        q.len(),
        p.len(),
        p.degree().unwrap_or(0)
    );
    Ok(())
}
