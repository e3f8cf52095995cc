//! Truncated series over z1, w1, z2, w2, the reweighted product and the E-transform.

use dt_moments::fps::{e_inverse, e_transform, Series, VariableRegistry};
use dt_moments::Result;
use num_rational::BigRational;

fn main() -> Result<()> {
    let reg = VariableRegistry::zw(2);
    let one = BigRational::from_integer(1.into());
    let u = Series::from_terms(
        &reg,
        8,
        [
            (vec![1, 1, 0, 0].into(), one.clone()),
            (vec![0, 0, 1, 1].into(), one.clone()),
        ],
    )?;
    let v = Series::monomial(&reg, 8, vec![1, 0, 0, 1], one)?;

    let f = u.geometric()?;
    let g = v.geometric()?;
    println!("f = 1/(1-u) = {f}");
    println!("g = 1/(1-v) = {g}");

    // Each homogeneous part pair is weighted by binom(k+l, k).
    let h = f.odot(&g)?;
    println!("f ⊙ g = {h}");

    // The E-transform turns ⊙ into an ordinary product in q.
    let lhs = e_transform(&h);
    let rhs = e_transform(&f).mul(&e_transform(&g))?;
    for (k, part) in lhs.parts() {
        println!("q^{k}/{k}!: {part}");
    }
    assert_eq!(lhs, rhs);
    assert_eq!(e_inverse(&lhs)?, h);
    println!("E(f ⊙ g) = E(f) E(g) holds to degree 8");
    Ok(())
}
