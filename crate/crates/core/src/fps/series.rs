use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::registry::{same_registry, VariableRegistry};
use crate::comb::{binomial, multinomial};
use crate::error::{Error, Result};

/// Exponents of a monomial, one entry per registered variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// The vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![0; len];
        v[index] = 1;
        Self(v)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Truncated multivariate formal power series with exact rational coefficients.
///
/// Terms of total degree above `truncation` are unknown and never stored. Every
/// stored term has total degree divisible by the registry modulus `N`, and no
/// stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    registry: Arc<VariableRegistry>,
    truncation: u32,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl Series {
    pub fn zero(registry: &Arc<VariableRegistry>, truncation: u32) -> Self {
        Self {
            registry: Arc::clone(registry),
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(registry: &Arc<VariableRegistry>, truncation: u32) -> Self {
        Self::constant(registry, truncation, BigRational::one())
    }

    pub fn constant(registry: &Arc<VariableRegistry>, truncation: u32, c: BigRational) -> Self {
        let mut s = Self::zero(registry, truncation);
        if !c.is_zero() {
            s.terms.insert(ExponentVector::zero(registry.len()), c);
        }
        s
    }

    /// `coeff · x^exponents`, or the zero series when the degree exceeds the truncation.
    pub fn monomial(
        registry: &Arc<VariableRegistry>,
        truncation: u32,
        exponents: impl Into<ExponentVector>,
        coeff: BigRational,
    ) -> Result<Self> {
        Self::from_terms(registry, truncation, [(exponents.into(), coeff)])
    }

    /// Builds a series from raw terms: duplicates are summed, zeros and terms above the
    /// truncation are dropped, and degrees not divisible by `N` are rejected.
    pub fn from_terms(
        registry: &Arc<VariableRegistry>,
        truncation: u32,
        terms: impl IntoIterator<Item = (ExponentVector, BigRational)>,
    ) -> Result<Self> {
        let modulus = registry.modulus();
        let mut map: BTreeMap<ExponentVector, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != registry.len() {
                return Err(Error::ExponentLength {
                    expected: registry.len(),
                    found: exps.len(),
                });
            }
            let degree = exps.total_degree();
            if degree % modulus != 0 {
                return Err(Error::ThetaViolation { degree, modulus });
            }
            if degree > truncation || c.is_zero() {
                continue;
            }
            *map.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self {
            registry: Arc::clone(registry),
            truncation,
            terms: map,
        })
    }

    pub(crate) fn from_map_unchecked(
        registry: &Arc<VariableRegistry>,
        truncation: u32,
        terms: BTreeMap<ExponentVector, BigRational>,
    ) -> Self {
        debug_assert!(terms.iter().all(|(e, c)| {
            let d = e.total_degree();
            !c.is_zero() && d <= truncation && d % registry.modulus() == 0
        }));
        Self {
            registry: Arc::clone(registry),
            truncation,
            terms,
        }
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn modulus(&self) -> u32 {
        self.registry.modulus()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms
            .get(&ExponentVector(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Largest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    /// True when every stored term has total degree exactly `degree`.
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.total_degree() == degree)
    }

    /// The `N·k`-homogeneous part `f^(k)`.
    pub fn homogeneous_part(&self, k: u32) -> Series {
        let degree = self.modulus() * k;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.total_degree() == degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self::from_map_unchecked(&self.registry, self.truncation, terms)
    }

    /// All nonzero homogeneous parts, keyed by `k`.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Series> {
        let modulus = self.modulus();
        let mut parts: BTreeMap<u32, BTreeMap<ExponentVector, BigRational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(e.total_degree() / modulus)
                .or_default()
                .insert(e.clone(), c.clone());
        }
        parts
            .into_iter()
            .map(|(k, terms)| (k, Self::from_map_unchecked(&self.registry, self.truncation, terms)))
            .collect()
    }

    pub fn truncate(&self, truncation: u32) -> Series {
        let truncation = truncation.min(self.truncation);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.total_degree() <= truncation)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self::from_map_unchecked(&self.registry, truncation, terms)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        same_registry(&self.registry, &other.registry)?;
        let truncation = self.truncation.min(other.truncation);
        let mut out = self.truncate(truncation).terms;
        for (e, c) in &other.terms {
            if e.total_degree() > truncation {
                continue;
            }
            let entry = out.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(e);
            }
        }
        Ok(Self::from_map_unchecked(&self.registry, truncation, out))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Self::from_map_unchecked(&self.registry, self.truncation, terms)
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Self::zero(&self.registry, self.truncation);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        Self::from_map_unchecked(&self.registry, self.truncation, terms)
    }

    pub fn scale_int(&self, c: &BigInt) -> Series {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        same_registry(&self.registry, &other.registry)?;
        let truncation = self.truncation.min(other.truncation);
        Ok(self.mul_truncated(other, truncation))
    }

    fn mul_truncated(&self, other: &Series, truncation: u32) -> Series {
        let mut by_degree: Vec<Vec<(&ExponentVector, &BigRational)>> = vec![Vec::new(); truncation as usize + 1];
        for (e, c) in &other.terms {
            let d = e.total_degree();
            if d <= truncation {
                by_degree[d as usize].push((e, c));
            }
        }
        let mut acc: FxHashMap<ExponentVector, BigRational> = FxHashMap::default();
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if da > truncation {
                continue;
            }
            for bucket in &by_degree[..=(truncation - da) as usize] {
                for (eb, cb) in bucket {
                    let prod = ca * *cb;
                    match acc.entry(ea.add(eb)) {
                        std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(prod);
                        }
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self::from_map_unchecked(&self.registry, truncation, terms)
    }

    pub fn pow(&self, exponent: u32) -> Series {
        let mut result = Self::one(&self.registry, self.truncation);
        for _ in 0..exponent {
            result = result.mul_truncated(self, self.truncation);
        }
        result
    }

    /// `1/(1 − self)` expanded as `Σ selfᵏ` up to the truncation.
    pub fn geometric(&self) -> Result<Series> {
        if self.terms.keys().any(|e| e.total_degree() == 0) {
            return Err(Error::NonzeroConstant);
        }
        let mut result = Self::one(&self.registry, self.truncation);
        let mut power = result.clone();
        loop {
            power = power.mul_truncated(self, self.truncation);
            if power.is_zero() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result)
    }

    /// Renames variables: source variable `i` becomes target variable `map[i]`.
    ///
    /// Several source variables may land on the same target; their exponents add.
    pub fn substitute(&self, target: &Arc<VariableRegistry>, map: &[usize]) -> Result<Series> {
        if map.len() != self.registry.len() {
            return Err(Error::IndexRange(format!(
                "substitution map has {} entries for {} variables",
                map.len(),
                self.registry.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::IndexRange(format!("target variable {bad} out of range")));
        }
        if target.modulus() != self.modulus() {
            return Err(Error::RegistryMismatch);
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut exps = vec![0; target.len()];
            for (i, &x) in e.as_slice().iter().enumerate() {
                exps[map[i]] += x;
            }
            (ExponentVector(exps), c.clone())
        });
        Series::from_terms(target, self.truncation, terms)
    }

    /// `f ⊙ g = Σ binom(k+ℓ, k) f^(k) g^(ℓ)`, truncated to the smaller bound.
    pub fn odot(&self, other: &Series) -> Result<Series> {
        same_registry(&self.registry, &other.registry)?;
        let truncation = self.truncation.min(other.truncation);
        let modulus = self.modulus();
        let fparts = self.homogeneous_parts();
        let gparts = other.homogeneous_parts();
        let mut acc = Self::zero(&self.registry, truncation);
        for (&k, fk) in &fparts {
            for (&l, gl) in &gparts {
                if modulus * (k + l) > truncation {
                    break;
                }
                let weight = BigRational::from_integer(binomial(u64::from(k + l), u64::from(k)).into());
                let prod = fk.mul_truncated(gl, truncation).scale(&weight);
                acc = acc.add(&prod)?;
            }
        }
        Ok(acc)
    }

    /// Left fold of [`Series::odot`] over a nonempty list.
    pub fn odot_many(series: &[Series]) -> Result<Series> {
        let (first, rest) = series.split_first().ok_or(Error::EmptyProduct)?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.odot(s))
    }

    /// `Σ multinomial(k₁+⋯+k_p; k₁,…,k_p) ∏ f_i^(k_i)`, evaluated directly.
    pub fn odot_many_multinomial(series: &[Series]) -> Result<Series> {
        let first = series.first().ok_or(Error::EmptyProduct)?;
        for s in series {
            same_registry(&first.registry, &s.registry)?;
        }
        let truncation = series.iter().map(|s| s.truncation).min().unwrap_or(0);
        let max_k = truncation / first.modulus();
        let parts: Vec<BTreeMap<u32, Series>> = series.iter().map(Series::homogeneous_parts).collect();

        let mut acc = Self::zero(&first.registry, truncation);
        let mut ks = Vec::with_capacity(series.len());
        let one = Self::one(&first.registry, truncation);
        multinomial_walk(&parts, 0, max_k, &mut ks, &one, &mut acc)?;
        Ok(acc)
    }
}

fn multinomial_walk(
    parts: &[BTreeMap<u32, Series>],
    index: usize,
    budget: u32,
    ks: &mut Vec<u64>,
    product: &Series,
    acc: &mut Series,
) -> Result<()> {
    if index == parts.len() {
        let weight = BigRational::from_integer(multinomial(ks).into());
        *acc = acc.add(&product.scale(&weight))?;
        return Ok(());
    }
    for (&k, part) in parts[index].range(..=budget) {
        let next = product.mul_truncated(part, product.truncation);
        if next.is_zero() {
            continue;
        }
        ks.push(u64::from(k));
        multinomial_walk(parts, index + 1, budget - k, ks, &next, acc)?;
        ks.pop();
    }
    Ok(())
}

/// Terms in display order: ascending total degree, then descending exponent
/// vectors (so `z1` sorts before `w1` before `z2`).
pub(crate) fn display_order(series: &Series) -> Vec<(&ExponentVector, &BigRational)> {
    let mut terms: Vec<_> = series.terms.iter().collect();
    terms.sort_by(|(a, _), (b, _)| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
    terms
}

/// Variables in registry order, except that on `z/w` registries all `z`'s come
/// before all `w`'s, e.g. `z1z3w2w4`.
pub(crate) fn compact_monomial(registry: &VariableRegistry, exps: &ExponentVector) -> String {
    let order: Vec<usize> = match registry.pairs() {
        Some(n) => (1..=n)
            .map(|i| registry.z(i))
            .chain((1..=n).map(|i| registry.w(i)))
            .collect(),
        None => (0..registry.len()).collect(),
    };
    let mut out = String::new();
    for i in order {
        match exps.as_slice()[i] {
            0 => {}
            1 => out.push_str(registry.name(i)),
            x => out.push_str(&format!("{}^{}", registry.name(i), x)),
        }
    }
    out
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

/// Compact human form, e.g. `1 + z1w1 - 2z1^2w2^2`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in display_order(self).into_iter().enumerate() {
            let mono = compact_monomial(&self.registry, e);
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}{}", fmt_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}
