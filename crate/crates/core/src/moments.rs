//! Renormalized moments `N(k₁,ℓ₁,…,kₙ,ℓₙ) = (m+1)!·M(k₁,ℓ₁,…,kₙ,ℓₙ)` by the
//! multi-index recursion, with memoization on canonical keys.
//!
//! Keys may contain `−1`. Unbalanced keys (`Σkᵢ ≠ Σℓᵢ`) give 0, the one-pair
//! key `(−1,−1)` gives 1, and any other key containing `−1` gives 0.

use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::comb::{factorial, multinomial};
use crate::error::{Error, Result};

/// `(k₁,ℓ₁,…,kₙ,ℓₙ)`: even length ≥ 2, entries ≥ −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentKey(Vec<i64>);

impl MomentKey {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() < 2 || !entries.len().is_multiple_of(2) {
            return Err(Error::InvalidKey(format!(
                "need an even number ≥ 2 of entries, got {}",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e < -1) {
            return Err(Error::InvalidKey(format!("entry {bad} is below -1")));
        }
        Ok(Self(entries))
    }

    /// The all-`k` key with `2n` entries.
    pub fn uniform(n: usize, k: i64) -> Result<Self> {
        Self::new(vec![k; 2 * n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Number of `(k, ℓ)` pairs.
    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn ks(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().step_by(2).copied()
    }

    pub fn ls(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().skip(1).step_by(2).copied()
    }

    pub fn is_balanced(&self) -> bool {
        self.ks().sum::<i64>() == self.ls().sum::<i64>()
    }

    /// `m = Σkᵢ` for balanced keys.
    pub fn m(&self) -> Option<i64> {
        self.is_balanced().then(|| self.ks().sum())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl FromStr for MomentKey {
    type Err = Error;

    /// Comma-separated integers, e.g. `1,1,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidKey(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for MomentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// `binom(ℓ₁+⋯+ℓₙ; b₀, b₁, …, b_{r−1})` with `b₀ = ℓ₁+⋯+ℓ_{j(1)−1} + ℓ_{j(r)}+⋯+ℓₙ`
/// and `b_i = ℓ_{j(i)}+⋯+ℓ_{j(i+1)−1}`. `js` is one-based and strictly increasing.
pub fn nom(ls: &[u64], js: &[usize]) -> Result<BigUint> {
    let n = ls.len();
    if js.is_empty() || js[0] == 0 || js[js.len() - 1] > n || js.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::IndexRange(format!(
            "{js:?} is not an increasing index tuple in 1..={n}"
        )));
    }
    let r = js.len();
    let sum = |a: usize, b: usize| -> u64 { ls[a - 1..b - 1].iter().sum() };
    let mut blocks = Vec::with_capacity(r);
    blocks.push(sum(1, js[0]) + sum(js[r - 1], n + 1));
    for w in js.windows(2) {
        blocks.push(sum(w[0], w[1]));
    }
    Ok(multinomial(&blocks))
}

/// Representative of the orbit of a nonnegative key under cyclic rotation and
/// reversal of `(k₁,ℓ₁,…,kₙ,ℓₙ)`, after contracting away zeros.
///
/// A zero entry with `n ≥ 2` is dropped and its two cyclic neighbours are
/// summed, which lowers `n` by one. The representative is the
/// lexicographically smallest rotation or reflection of the contracted key.
pub fn canonical_key(key: &MomentKey) -> Result<MomentKey> {
    if !key.is_nonnegative() {
        return Err(Error::InvalidKey(format!("{key} has a negative entry")));
    }
    Ok(MomentKey(canonical_entries(key.entries())))
}

fn canonical_entries(entries: &[i64]) -> Vec<i64> {
    let mut v = entries.to_vec();
    while v.len() >= 4 {
        let Some(z) = v.iter().position(|&e| e == 0) else { break };
        let len = v.len();
        let prev = (z + len - 1) % len;
        let next = (z + 1) % len;
        v[prev] += v[next];
        // remove zero and its successor, keeping cyclic order
        let mut out = Vec::with_capacity(len - 2);
        for i in 1..len - 1 {
            let idx = (z + 1 + i) % len;
            out.push(v[idx]);
        }
        v = out;
    }
    let len = v.len();
    let mut best = v.clone();
    let mut reversed = v.clone();
    reversed.reverse();
    for base in [&v, &reversed] {
        for s in 0..len {
            let cand: Vec<i64> = (0..len).map(|i| base[(s + i) % len]).collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// How memo keys are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoMode {
    /// Keys are reduced by [`canonical_key`] before lookup and evaluation.
    Canonical,
    /// Keys are used as given.
    Raw,
}

/// Memoized evaluator of `N`.
///
/// Lookups take a read lock and insertions are insert-if-absent, so the
/// engine can be shared across threads. With a memo limit, insertions stop
/// once the table is full; nothing is evicted.
#[derive(Debug)]
pub struct MomentEngine {
    mode: MemoMode,
    limit: Option<usize>,
    memo: RwLock<FxHashMap<Vec<i64>, BigUint>>,
}

impl MomentEngine {
    pub fn new(mode: MemoMode) -> Self {
        Self::with_limit(mode, None)
    }

    pub fn with_limit(mode: MemoMode, limit: Option<usize>) -> Self {
        Self {
            mode,
            limit,
            memo: RwLock::new(FxHashMap::default()),
        }
    }

    pub fn mode(&self) -> MemoMode {
        self.mode
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("moment memo poisoned").len()
    }

    pub fn n_value(&self, key: &MomentKey) -> BigUint {
        self.value(key.entries())
    }

    /// `M = N/(m+1)!`; zero for unbalanced keys.
    pub fn moment(&self, key: &MomentKey) -> Result<BigRational> {
        if !key.is_nonnegative() {
            return Err(Error::InvalidKey(format!(
                "moment needs nonnegative entries, got {key}"
            )));
        }
        let Some(m) = key.m() else {
            return Ok(BigRational::zero());
        };
        let n = self.n_value(key);
        Ok(BigRational::new(n.into(), factorial(m as u64 + 1).into()))
    }

    fn value(&self, entries: &[i64]) -> BigUint {
        let (ks, ls): (i64, i64) = entries.chunks(2).fold((0, 0), |(a, b), p| (a + p[0], b + p[1]));
        if ks != ls {
            return BigUint::zero();
        }
        if entries.iter().any(|&e| e < 0) {
            // balanced, so a single pair containing −1 is (−1, −1)
            return if entries.len() == 2 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        let key = match self.mode {
            MemoMode::Canonical => canonical_entries(entries),
            MemoMode::Raw => entries.to_vec(),
        };
        if let Some(v) = self.memo.read().expect("moment memo poisoned").get(&key) {
            return v.clone();
        }
        let v = self.recurse(&key);
        let mut memo = self.memo.write().expect("moment memo poisoned");
        if self.limit.is_none_or(|cap| memo.len() < cap) {
            memo.entry(key).or_insert_with(|| v.clone());
        }
        v
    }

    /// Right-hand side of the recursion for a balanced nonnegative key.
    fn recurse(&self, key: &[i64]) -> BigUint {
        let n = key.len() / 2;
        let k = |i: usize| key[2 * (i - 1)];
        let l = |i: usize| key[2 * (i - 1) + 1];
        let ls: Vec<u64> = (1..=n).map(|i| l(i) as u64).collect();
        let mut total = BigUint::zero();
        let mut js: Vec<usize> = Vec::with_capacity(n);
        for mask in 1u64..(1u64 << n) {
            js.clear();
            js.extend((1..=n).filter(|&i| mask & (1 << (i - 1)) != 0));
            let (first, last) = (js[0], js[js.len() - 1]);

            let mut outer = Vec::with_capacity(2 * (first + n - last));
            for i in 1..first {
                outer.extend([k(i), l(i)]);
            }
            outer.extend([k(first) - 1, l(last) - 1]);
            for i in last + 1..=n {
                outer.extend([k(i), l(i)]);
            }
            let mut product = self.value(&outer);
            if product.is_zero() {
                continue;
            }
            for w in js.windows(2) {
                let (a, b) = (w[0], w[1]);
                let mut inner = Vec::with_capacity(2 * (b - a));
                inner.push(l(a) - 1);
                for i in a + 1..b {
                    inner.extend([k(i), l(i)]);
                }
                inner.push(k(b) - 1);
                let f = self.value(&inner);
                if f.is_zero() {
                    product = BigUint::zero();
                    break;
                }
                product *= f;
            }
            if product.is_zero() {
                continue;
            }
            if js.len() > 1 {
                product *= nom(&ls, &js).expect("subset indices are increasing and in range");
            }
            total += product;
        }
        total
    }
}

/// The process-wide canonical-key engine behind [`n_value`] and [`moment`].
pub fn shared_engine() -> &'static MomentEngine {
    static ENGINE: OnceLock<MomentEngine> = OnceLock::new();
    ENGINE.get_or_init(|| MomentEngine::new(MemoMode::Canonical))
}

/// `N(key)` using the shared canonical-key engine.
pub fn n_value(key: &MomentKey) -> BigUint {
    shared_engine().n_value(key)
}

/// `M(key) = N(key)/(m+1)!` using the shared canonical-key engine.
pub fn moment(key: &MomentKey) -> Result<BigRational> {
    shared_engine().moment(key)
}
