//! The generating functions F_n as truncated series and as closed rational forms.

use dt_moments::genfun::{f_rational, f_recursion_rhs, f_series};
use dt_moments::Result;

fn main() -> Result<()> {
    let f2 = f_series(2, 6)?;
    println!("F2 to degree 6: {f2}");

    // (1 - Σ z_i w_i) F_n equals the ⊙-assembled right-hand side.
    let rhs = f_recursion_rhs(3, 6)?;
    println!(
        "recursion right-hand side for n = 3 has {} terms to degree 6",
        rhs.len()
    );

    for n in 2..=3 {
        let f = f_rational(n)?;
        println!("\nF{n} = {}", f.display_terms());
        print!("{}", f.legend());
        assert_eq!(f.expand_to_series(6)?, *f_series(n, 6)?);
    }

    let f4 = f_rational(4)?;
    println!(
        "\nF4: {} terms, {} distinct forms, at most {} denominator factors",
        f4.len(),
        f4.table().len(),
        f4.max_denominator_len()
    );
    Ok(())
}
