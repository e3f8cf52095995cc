//! The ⊙ product of rational expressions in closed form, checked against series.

use dt_moments::fps::{ExponentVector, Series, VariableRegistry};
use dt_moments::ratfun::{permutation_form, RationalExpr, SymPoly};
use dt_moments::Result;
use num_rational::BigRational;

fn main() -> Result<()> {
    let u1 = permutation_form(&[1, 2])?;
    let u2 = permutation_form(&[2, 1])?;
    let reg = VariableRegistry::zw(2);

    // z1 w2 / ((1 - u1)(1 - u2)) and 1/(1 - u1)
    let mut left = RationalExpr::zero(&reg);
    left.push(
        ExponentVector::new(vec![1, 0, 0, 1]),
        &SymPoly::one(),
        &[],
        &[u1.clone(), u2.clone()],
    )?;
    let right = RationalExpr::geometric(&u1)?;

    let product = left.odot(&right)?;
    println!("{}", product.display_terms());
    print!("{}", product.legend());

    let d = 8;
    let by_series = left.expand_to_series(d)?.odot(&right.expand_to_series(d)?)?;
    assert_eq!(product.expand_to_series(d)?, by_series);
    println!("closed form agrees with the truncated series product to degree {d}");

    // 1 + u + u^2 over a common denominator is still a rational expression
    let mut sum = RationalExpr::one(&reg);
    let half = BigRational::new(1.into(), 2.into());
    sum = sum.add(&right.scale(&half))?;
    let expanded: Series = sum.expand_to_series(4)?;
    println!("1 + (1/2)/(1 - u1) = {expanded}");
    Ok(())
}
