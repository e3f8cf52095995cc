use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Homogeneity modulus used for the moment generating functions.
pub const DEFAULT_MODULUS: u32 = 2;

/// Ordered set of variable names together with the homogeneity modulus `N`.
///
/// Series only hold terms whose total degree is a multiple of `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableRegistry {
    names: Vec<String>,
    pairs: Option<usize>,
    modulus: u32,
}

impl VariableRegistry {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, modulus: u32) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if modulus == 0 {
            return Err(Error::InvalidRegistry("modulus must be at least 1".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidRegistry(format!("bad variable name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRegistry(format!("duplicate variable {name}")));
            }
        }
        let pairs = zw_pairs(&names);
        Ok(Arc::new(Self { names, pairs, modulus }))
    }

    /// The layout `z1, w1, …, zn, wn` with modulus 2.
    pub fn zw(n: usize) -> Arc<Self> {
        assert!(n >= 1, "need at least one z/w pair");
        let names = (1..=n).flat_map(|i| [format!("z{i}"), format!("w{i}")]);
        Self::new(names, DEFAULT_MODULUS).expect("z/w names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of z/w pairs when the registry has the `z1, w1, …` layout.
    pub fn pairs(&self) -> Option<usize> {
        self.pairs
    }

    /// Index of `z_i` (1-based `i`) in the z/w layout.
    pub fn z(&self, i: usize) -> usize {
        2 * (i - 1)
    }

    /// Index of `w_i` (1-based `i`) in the z/w layout.
    pub fn w(&self, i: usize) -> usize {
        2 * (i - 1) + 1
    }
}

impl fmt::Display for VariableRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] (N={})", self.names.join(", "), self.modulus)
    }
}

fn zw_pairs(names: &[String]) -> Option<usize> {
    if names.is_empty() || !names.len().is_multiple_of(2) {
        return None;
    }
    let n = names.len() / 2;
    let matches = (1..=n).all(|i| names[2 * (i - 1)] == format!("z{i}") && names[2 * i - 1] == format!("w{i}"));
    matches.then_some(n)
}

pub(crate) fn same_registry(a: &Arc<VariableRegistry>, b: &Arc<VariableRegistry>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RegistryMismatch)
    }
}
