use dt_moments::fps::{ExponentVector, VariableRegistry};
use dt_moments::ratfun::{p_polynomial, permutation_form, RationalExpr, SymMonomial, SymPoly};
use dt_moments::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// One random admissible term over `n` pairs: a prefix of `k` factors `z_a w_b`,
/// numerator `c0 + c1·x` with `x` a permutation form, and `m > k + 1` distinct
/// permutation forms in the denominator.
#[derive(Debug, Clone)]
struct TermSpec {
    prefix: Vec<(usize, usize)>,
    coeffs: (i64, i64),
    numerator_form: Vec<usize>,
    denominator: Vec<Vec<usize>>,
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

fn term(n: usize) -> impl Strategy<Value = TermSpec> {
    // two pairs admit only two permutation forms
    let max_k = if n == 2 { 0 } else { 1 };
    (0usize..=max_k).prop_flat_map(move |k| {
        (
            prop::collection::vec((1..=n, 1..=n), k),
            (-3i64..=3, -2i64..=2),
            permutation(n),
            prop::collection::btree_set(permutation(n), k + 2..=(k + 3).min(if n == 2 { 2 } else { 6 })),
        )
            .prop_map(|(prefix, coeffs, numerator_form, den)| TermSpec {
                prefix,
                coeffs,
                numerator_form,
                denominator: den.into_iter().collect(),
            })
    })
}

fn build(n: usize, spec: &TermSpec) -> RationalExpr {
    let reg = VariableRegistry::zw(n);
    let mut prefix = vec![0; 2 * n];
    for &(a, b) in &spec.prefix {
        prefix[reg.z(a)] += 1;
        prefix[reg.w(b)] += 1;
    }
    let c = |x: i64| BigRational::from_integer(BigInt::from(x));
    let numerator = SymPoly::from_terms([
        (SymMonomial::one(), c(spec.coeffs.0)),
        (SymMonomial::var(0), c(spec.coeffs.1)),
    ]);
    let forms = [permutation_form(&spec.numerator_form).unwrap()];
    let den: Vec<_> = spec.denominator.iter().map(|s| permutation_form(s).unwrap()).collect();
    let mut expr = RationalExpr::zero(&reg);
    expr.push(ExponentVector::new(prefix), &numerator, &forms, &den)
        .unwrap();
    expr
}

fn pair() -> impl Strategy<Value = (usize, TermSpec, TermSpec)> {
    (2usize..=3).prop_flat_map(|n| (Just(n), term(n), term(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closed_form_matches_series((n, s1, s2) in pair()) {
        let (t1, t2) = (build(n, &s1), build(n, &s2));
        let closed = match t1.odot(&t2) {
            Ok(e) => e,
            Err(Error::DistinctnessViolation { .. }) => return Err(TestCaseError::reject("colliding sums")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let d = if n == 3 { 6 } else { 8 };
        let expected = t1.expand_to_series(d).unwrap().odot(&t2.expand_to_series(d).unwrap()).unwrap();
        prop_assert_eq!(closed.expand_to_series(d).unwrap(), expected);
    }
}

/// Degree bound and the `(u; v)` swap symmetry over the full range `m, n ≤ 4`.
#[test]
fn p_degree_and_symmetry_exhaustive() {
    for m in 1..=4u32 {
        for n in 1..=4u32 {
            for k in 0..m {
                for l in 0..n {
                    let p = p_polynomial(m, n, k, l).unwrap();
                    let degree = p.degree().unwrap();
                    assert!(degree < m * n - k - l, "deg P^{k},{l}_{m},{n} = {degree}");
                    let swapped = p_polynomial(n, m, l, k).unwrap();
                    assert_eq!(
                        p.rename(|x| if x < m { x + n } else { x - m }),
                        *swapped,
                        "{m} {n} {k} {l}"
                    );
                }
            }
        }
    }
}
