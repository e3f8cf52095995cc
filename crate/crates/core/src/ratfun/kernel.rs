//! Packed integer polynomials for the Q/P computation.
//!
//! Monomials in at most 16 variables are packed into a `u128`, one byte per
//! exponent, with variable 0 in the most significant byte, so integer order is
//! lexicographic order. Coefficients are `i128` with checked arithmetic.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub(crate) const MAX_VARS: usize = 16;
const MAX_DEGREE: u32 = 255;

pub(crate) fn unit(var: usize) -> u128 {
    debug_assert!(var < MAX_VARS);
    1u128 << (8 * (MAX_VARS - 1 - var))
}

pub(crate) fn exponent(mono: u128, var: usize) -> u32 {
    ((mono >> (8 * (MAX_VARS - 1 - var))) & 0xff) as u32
}

pub(crate) fn mono_degree(mono: u128) -> u32 {
    mono.to_be_bytes().iter().map(|&b| u32::from(b)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct IntPoly {
    /// Sorted by monomial, no zero coefficients.
    terms: Vec<(u128, i128)>,
    degree: u32,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i128) -> Self {
        Self::from_map(std::iter::once((0u128, c)).collect())
    }

    pub fn var(v: usize) -> Self {
        Self::from_map(std::iter::once((unit(v), 1i128)).collect())
    }

    /// `Σ coeff · x_var` plus a constant.
    pub fn linear(constant: i128, parts: &[(usize, i128)]) -> Self {
        let mut map = FxHashMap::default();
        if constant != 0 {
            map.insert(0u128, constant);
        }
        for &(v, c) in parts {
            *map.entry(unit(v)).or_insert(0) += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: FxHashMap<u128, i128>) -> Self {
        let mut terms: Vec<(u128, i128)> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by_key(|&(m, _)| m);
        let degree = terms.iter().map(|&(m, _)| mono_degree(m)).max().unwrap_or(0);
        Self { terms, degree }
    }

    pub fn terms(&self) -> &[(u128, i128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut map: FxHashMap<u128, i128> = self.terms.iter().copied().collect();
        for &(m, c) in &other.terms {
            let slot = map.entry(m).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
        }
        Ok(Self::from_map(map))
    }

    pub fn scale(&self, c: i128) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|&(m, x)| x.checked_mul(c).map(|y| (m, y)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_map(terms.into_iter().collect()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut map: FxHashMap<u128, i128> = FxHashMap::default();
        map.reserve(self.terms.len().max(other.terms.len()) * 2);
        self.mul_into(other, 1, &mut map)?;
        Ok(Self::from_map(map))
    }

    /// Adds `sign · self · other` into `acc`.
    pub fn mul_into(&self, other: &Self, sign: i128, acc: &mut FxHashMap<u128, i128>) -> Result<()> {
        if self.is_zero() || other.is_zero() {
            return Ok(());
        }
        if self.degree + other.degree > MAX_DEGREE {
            return Err(Error::Overflow);
        }
        for &(ma, ca) in &self.terms {
            let ca = ca.checked_mul(sign).ok_or(Error::Overflow)?;
            for &(mb, cb) in &other.terms {
                let prod = ca.checked_mul(cb).ok_or(Error::Overflow)?;
                let slot = acc.entry(ma + mb).or_insert(0);
                *slot = slot.checked_add(prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    pub fn from_accumulator(map: FxHashMap<u128, i128>) -> Self {
        Self::from_map(map)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(1);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntPoly>) -> Result<Self> {
        factors.into_iter().try_fold(Self::constant(1), |acc, f| acc.mul(f))
    }

    /// Exact quotient by `x_p − x_q`; a nonzero remainder is reported as `None`.
    pub fn div_difference(&self, p: usize, q: usize) -> Result<Option<Self>> {
        debug_assert_ne!(p, q);
        let max_level = self.terms.iter().map(|&(m, _)| exponent(m, p)).max().unwrap_or(0) as usize;
        let mut levels: Vec<FxHashMap<u128, i128>> = vec![FxHashMap::default(); max_level + 1];
        for &(m, c) in &self.terms {
            levels[exponent(m, p) as usize].insert(m, c);
        }
        let (up, uq) = (unit(p), unit(q));
        let mut quotient: FxHashMap<u128, i128> = FxHashMap::default();
        for d in (1..=max_level).rev() {
            let current = std::mem::take(&mut levels[d]);
            for (m, c) in current {
                if c == 0 {
                    continue;
                }
                let lowered = m - up;
                let slot = quotient.entry(lowered).or_insert(0);
                *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
                if exponent(lowered, q) == MAX_DEGREE {
                    return Err(Error::Overflow);
                }
                let carry = levels[d - 1].entry(lowered + uq).or_insert(0);
                *carry = carry.checked_add(c).ok_or(Error::Overflow)?;
            }
        }
        if levels[0].values().any(|&c| c != 0) {
            return Ok(None);
        }
        Ok(Some(Self::from_map(quotient)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_is_lexicographic() {
        assert!(unit(0) > unit(1));
        assert_eq!(exponent(unit(3) * 5, 3), 5);
        assert_eq!(mono_degree(unit(0) * 2 + unit(7)), 3);
    }

    #[test]
    fn difference_of_squares() {
        let x = IntPoly::var(0);
        let y = IntPoly::var(1);
        let a = x.mul(&x).unwrap().add(&y.mul(&y).unwrap().scale(-1).unwrap()).unwrap();
        let q = a.div_difference(0, 1).unwrap().unwrap();
        assert_eq!(q, x.add(&y).unwrap());
        // x² + y² is not divisible by x − y
        let b = x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap();
        assert!(b.div_difference(0, 1).unwrap().is_none());
    }

    #[test]
    fn overflow_detected() {
        let big = IntPoly::constant(i128::MAX / 2);
        assert_eq!(big.scale(4).unwrap_err(), Error::Overflow);
    }
}
