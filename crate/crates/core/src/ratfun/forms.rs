//! Interned homogeneous degree-`N` forms, the `u`'s of denominator factors `(1 − u)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fps::{same_registry, ExponentVector, Series, VariableRegistry};

/// Ordered, deduplicated list of forms over one registry.
///
/// A form's id is its canonical display string, so two forms share an id iff
/// they are equal term by term. Indices into the table are stable.
#[derive(Debug, Clone)]
pub struct FormTable {
    registry: Arc<VariableRegistry>,
    forms: Vec<Series>,
    ids: Vec<String>,
    index: HashMap<String, u32>,
}

impl FormTable {
    pub fn new(registry: &Arc<VariableRegistry>) -> Self {
        Self {
            registry: Arc::clone(registry),
            forms: Vec::new(),
            ids: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, index: u32) -> &Series {
        &self.forms[index as usize]
    }

    pub fn id(&self, index: u32) -> &str {
        &self.ids[index as usize]
    }

    pub fn lookup(&self, form: &Series) -> Option<u32> {
        self.index.get(&form_id(form)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str, &Series)> {
        self.forms
            .iter()
            .zip(&self.ids)
            .enumerate()
            .map(|(i, (f, id))| (i as u32, id.as_str(), f))
    }

    /// Index of `form`, adding it if new. The form must be nonzero and
    /// homogeneous of degree `N`.
    pub fn intern(&mut self, form: &Series) -> Result<u32> {
        same_registry(&self.registry, form.registry())?;
        let modulus = self.registry.modulus();
        if form.is_zero() || !form.is_homogeneous_of(modulus) {
            return Err(Error::HomogeneityViolation {
                part: 1,
                expected: modulus,
            });
        }
        let id = form_id(form);
        if let Some(&i) = self.index.get(&id) {
            return Ok(i);
        }
        let i = self.forms.len() as u32;
        // stored at its own degree so ids and JSON do not depend on callers' truncation
        self.forms.push(form.truncate(modulus));
        self.ids.push(id.clone());
        self.index.insert(id, i);
        Ok(i)
    }
}

/// Canonical id: the display string with whitespace removed, e.g. `z1w2+z2w1`.
pub(crate) fn form_id(form: &Series) -> String {
    form.to_string().chars().filter(|c| !c.is_whitespace()).collect()
}

/// `Σ_i z_i w_{σ(i)}` over the registry `z1, w1, …, zn, wn` with `n = σ.len()`.
/// `sigma` is one-based.
pub fn permutation_form(sigma: &[usize]) -> Result<Series> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s == 0 || s > n || std::mem::replace(&mut seen[s - 1], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    if n == 0 {
        return Err(Error::InvalidPermutation(0));
    }
    let registry = VariableRegistry::zw(n);
    let terms = sigma.iter().enumerate().map(|(i, &s)| {
        let mut e = vec![0; 2 * n];
        e[registry.z(i + 1)] = 1;
        e[registry.w(s)] = 1;
        (ExponentVector::new(e), BigRational::one())
    });
    Series::from_terms(&registry, 2, terms)
}
