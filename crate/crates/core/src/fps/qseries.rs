//! The E-transform `E f = Σ qᵏ/k! · f^(k)` and its inverse.
//!
//! Images are stored as a family of x-series indexed by the power of `q`. Part
//! `k` is homogeneous of total degree `N·k`, which is what lets the inverse
//! simply replace `qᵏ` by `k!`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use super::registry::{same_registry, VariableRegistry};
use super::series::Series;
use crate::comb::factorial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    registry: Arc<VariableRegistry>,
    /// Highest power of `q` that is known.
    truncation: u32,
    /// Total x-degree bound carried by every part.
    degree_bound: u32,
    parts: BTreeMap<u32, Series>,
}

impl QSeries {
    /// Validates the homogeneity constraint on every part.
    pub fn new(
        registry: &Arc<VariableRegistry>,
        degree_bound: u32,
        parts: impl IntoIterator<Item = (u32, Series)>,
    ) -> Result<Self> {
        let modulus = registry.modulus();
        let truncation = degree_bound / modulus;
        let mut map = BTreeMap::new();
        for (k, part) in parts {
            same_registry(registry, part.registry())?;
            if k > truncation {
                continue;
            }
            if !part.is_homogeneous_of(modulus * k) {
                return Err(Error::HomogeneityViolation {
                    part: k,
                    expected: modulus * k,
                });
            }
            if !part.is_zero() {
                map.insert(k, part.truncate(degree_bound));
            }
        }
        Ok(Self {
            registry: Arc::clone(registry),
            truncation,
            degree_bound,
            parts: map,
        })
    }

    /// The multiplicative unit: part 0 equal to 1.
    pub fn unit(registry: &Arc<VariableRegistry>, degree_bound: u32) -> Self {
        Self::new(registry, degree_bound, [(0, Series::one(registry, degree_bound))])
            .expect("constant is homogeneous of degree 0")
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Coefficient of `qᵏ` (the zero series when absent).
    pub fn part(&self, k: u32) -> Series {
        self.parts
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Series::zero(&self.registry, self.degree_bound))
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, &Series)> {
        self.parts.iter().map(|(&k, s)| (k, s))
    }

    /// Cauchy product in `q` with series-valued coefficients.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        same_registry(&self.registry, &other.registry)?;
        let degree_bound = self.degree_bound.min(other.degree_bound);
        let truncation = degree_bound / self.registry.modulus();
        let mut out: BTreeMap<u32, Series> = BTreeMap::new();
        for (&i, a) in &self.parts {
            for (&j, b) in other.parts.range(..=truncation.saturating_sub(i)) {
                if i + j > truncation {
                    break;
                }
                let prod = a.mul(b)?.truncate(degree_bound);
                let slot = out
                    .entry(i + j)
                    .or_insert_with(|| Series::zero(&self.registry, degree_bound));
                *slot = slot.add(&prod)?;
            }
        }
        QSeries::new(&self.registry, degree_bound, out)
    }
}

/// `E f = Σ qᵏ/k! · f^(k)`.
pub fn e_transform(f: &Series) -> QSeries {
    let parts = f.homogeneous_parts().into_iter().map(|(k, part)| {
        let inv = BigRational::new(1.into(), factorial(u64::from(k)).into());
        (k, part.scale(&inv))
    });
    QSeries::new(f.registry(), f.truncation(), parts).expect("homogeneous parts satisfy the q-grading")
}

/// Replaces every `qᵏ` by `k!`.
pub fn e_inverse(h: &QSeries) -> Result<Series> {
    let modulus = h.registry.modulus();
    let mut acc = Series::zero(&h.registry, h.degree_bound);
    for (&k, part) in &h.parts {
        if !part.is_homogeneous_of(modulus * k) {
            return Err(Error::HomogeneityViolation {
                part: k,
                expected: modulus * k,
            });
        }
        let weight = BigRational::from_integer(factorial(u64::from(k)).into());
        acc = acc.add(&part.scale(&weight))?;
    }
    Ok(acc)
}
