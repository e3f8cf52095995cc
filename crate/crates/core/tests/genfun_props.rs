use dt_moments::fps::Series;
use dt_moments::genfun::{diagonal_form, f_rational, f_recursion_rhs, f_series, h_diagonal};
use dt_moments::moments::{n_value, MomentKey};
use dt_moments::ratfun::RationalExpr;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn key_of(exps: &[u32]) -> MomentKey {
    MomentKey::new(exps.iter().map(|&e| i64::from(e)).collect()).unwrap()
}

#[test]
fn coefficients_are_moments() {
    for n in 1..=3 {
        let f = f_series(n, 8).unwrap();
        for (e, c) in f.terms() {
            let expected = BigRational::from_integer(BigInt::from(n_value(&key_of(e.as_slice()))));
            assert_eq!(*c, expected, "n={n} exponent {:?}", e.as_slice());
        }
    }
}

#[test]
fn unbalanced_exponents_are_absent() {
    for n in 1..=3 {
        for (e, _) in f_series(n, 8).unwrap().terms() {
            let s = e.as_slice();
            let zs: u32 = s.iter().step_by(2).sum();
            let ws: u32 = s.iter().skip(1).step_by(2).sum();
            assert_eq!(zs, ws);
        }
    }
}

#[test]
fn recursion_residual_vanishes() {
    for n in 2..=3 {
        for d in [2, 4, 6, 8] {
            let f = f_series(n, d).unwrap();
            let one = Series::one(f.registry(), d);
            let lhs = one.sub(&diagonal_form(n, d).unwrap()).unwrap().mul(&f).unwrap();
            let residual = lhs.sub(&f_recursion_rhs(n, d).unwrap()).unwrap();
            assert!(residual.is_zero(), "n={n} D={d}: {residual}");
        }
    }
}

#[test]
fn rational_form_expands_to_series() {
    for (n, d) in [(1, 10), (2, 10), (3, 8), (4, 6)] {
        let r = f_rational(n).unwrap();
        assert_eq!(r.expand_to_series(d).unwrap(), *f_series(n, d).unwrap(), "n={n}");
    }
}

#[test]
fn rational_form_survives_json() {
    let r = f_rational(3).unwrap();
    let back = RationalExpr::from_json(&r.to_json()).unwrap();
    assert_eq!(back.display_terms(), r.display_terms());
    assert_eq!(back.expand_to_series(6).unwrap(), r.expand_to_series(6).unwrap());
}

#[test]
fn uniform_diagonal_edges() {
    for n in 1..=4 {
        assert_eq!(h_diagonal(n, 0).unwrap().entries[0].value, One::one());
    }
    assert!(h_diagonal(1, 12).unwrap().entries.iter().all(|e| e.value == One::one()));
}
