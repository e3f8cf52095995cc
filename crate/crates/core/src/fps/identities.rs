//! Scalar identities behind the closed form of `E(1/∏(1 − u_i))`.
//!
//! The functions here work over distinct rationals, which is all the identities
//! need: a polynomial identity in `u_1, …, u_r` holds iff it holds on a
//! Zariski-dense set of points.

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// `Σ_{k₁+⋯+k_r = k} ∏ u_iᵏⁱ`, by enumerating compositions.
pub fn complete_homogeneous_sum(us: &[BigRational], k: u32) -> BigRational {
    fn walk(us: &[BigRational], left: u32, acc: &BigRational) -> BigRational {
        match us.split_first() {
            None => {
                if left == 0 {
                    acc.clone()
                } else {
                    BigRational::zero()
                }
            }
            Some((u, rest)) => {
                let mut total = BigRational::zero();
                let mut power = BigRational::one();
                for used in 0..=left {
                    total += walk(rest, left - used, &(acc * &power));
                    power *= u;
                }
                total
            }
        }
    }
    walk(us, k, &BigRational::one())
}

/// `Σ_i u_i^{k+r−1} / ∏_{j≠i}(u_i − u_j)`; the `u_i` must be distinct.
pub fn divided_power_sum(us: &[BigRational], k: u32) -> Result<BigRational> {
    check_distinct(us)?;
    let r = us.len() as u32;
    let mut total = BigRational::zero();
    for (i, ui) in us.iter().enumerate() {
        let denom: BigRational = us
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, uj)| ui - uj)
            .product();
        total += Pow::pow(ui, k + r - 1) / denom;
    }
    Ok(total)
}

/// First-row cofactor expansion of the Vandermonde-type matrix whose first
/// row duplicates its last: `Σ_i (−1)^{i+1} u_i^{r−2} ∏_{k<ℓ; k,ℓ≠i}(u_ℓ − u_k)`.
/// This vanishes for every `r ≥ 2`.
pub fn vandermonde_cofactor_sum(us: &[BigRational]) -> BigRational {
    cofactor_sum(us, true)
}

/// The same sum with every cofactor sign taken positive.
pub fn vandermonde_unsigned_sum(us: &[BigRational]) -> BigRational {
    cofactor_sum(us, false)
}

fn cofactor_sum(us: &[BigRational], signed: bool) -> BigRational {
    let r = us.len();
    if r < 2 {
        return BigRational::zero();
    }
    let mut total = BigRational::zero();
    for i in 0..r {
        let mut term = Pow::pow(&us[i], (r - 2) as u32);
        for a in 0..r {
            for b in a + 1..r {
                if a != i && b != i {
                    term *= &us[b] - &us[a];
                }
            }
        }
        if signed && i % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn check_distinct(us: &[BigRational]) -> Result<()> {
    for (i, a) in us.iter().enumerate() {
        if us[i + 1..].contains(a) {
            return Err(Error::IndexRange(format!("value {a} repeated")));
        }
    }
    Ok(())
}
