//! Diagonal coefficients, the power-law conjecture and the n = 3 identity.

use dt_moments::genfun::{check_conjecture, check_n3_identity, g_diagonal, h_diagonal};
use dt_moments::Result;

fn main() -> Result<()> {
    let h2 = h_diagonal(2, 6)?;
    let values: Vec<String> = h2.entries.iter().map(|e| e.value.to_string()).collect();
    println!("N(k,k,k,k), k = 0..6: {}", values.join(", "));

    let g2 = g_diagonal(2, 8)?;
    for e in g2.entries.iter().filter(|e| e.index[0] <= 2 && e.index[1] <= 2) {
        println!("N({a},{a},{b},{b}) = {v}", a = e.index[0], b = e.index[1], v = e.value);
    }

    for n in 1..=3 {
        let report = check_conjecture(n, 3)?;
        for row in &report.rows {
            println!("n={} k={}: {} vs n^(nk) = {}", row.n, row.k, row.computed, row.expected);
        }
    }

    for p in 1..=3 {
        println!("identity at p = {p}: {}", check_n3_identity(p)?);
    }
    Ok(())
}
