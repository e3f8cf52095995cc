//! Generating functions `Fₙ = Σ N(k₁,ℓ₁,…,kₙ,ℓₙ) z₁^{k₁}w₁^{ℓ₁}⋯zₙ^{kₙ}wₙ^{ℓₙ}`.
//!
//! `Fₙ` satisfies `(1 − Σ zᵢwᵢ) Fₙ = Σ_{r≥2} Σ_{j(1)<⋯<j(r)} A_j ⊙ B_{j,1} ⊙ ⋯ ⊙ B_{j,r−1}`
//! where `A_j` and `B_{j,i}` are lower `F`'s with renamed variables and a
//! monomial prefix. Both a truncated series and a closed rational form are
//! built from it.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::comb::multinomial;
use crate::error::{Error, Result};
use crate::fps::{ExponentVector, Series, VariableRegistry};
use crate::moments::{shared_engine, MomentEngine, MomentKey};
use crate::ratfun::{permutation_form, RationalExpr};

/// One factor of the recursion: `prefix · F̃_{n'}` evaluated at renamed variables.
///
/// `vars[2(i−1)]` and `vars[2(i−1)+1]` are the target indices of the `i`-th
/// pair of `F_{n'}`; `prefix` lists the two target variables multiplying it.
struct Factor {
    pairs: usize,
    vars: Vec<usize>,
    prefix: [usize; 2],
}

/// The factors for index set `js` (one-based, increasing, at least two entries).
fn factors(n: usize, js: &[usize]) -> Vec<Factor> {
    let registry = VariableRegistry::zw(n);
    let (z, w) = (|i| registry.z(i), |i| registry.w(i));
    let (first, last) = (js[0], js[js.len() - 1]);

    let mut vars = Vec::new();
    for i in 1..first {
        vars.extend([z(i), w(i)]);
    }
    vars.extend([z(first), w(last)]);
    for i in last + 1..=n {
        vars.extend([z(i), w(i)]);
    }
    let mut out = vec![Factor {
        pairs: first + n - last,
        vars,
        prefix: [z(first), w(last)],
    }];
    for win in js.windows(2) {
        let (a, b) = (win[0], win[1]);
        let mut vars = vec![w(a)];
        for i in a + 1..b {
            vars.extend([z(i), w(i)]);
        }
        vars.push(z(b));
        out.push(Factor {
            pairs: b - a,
            vars,
            prefix: [w(a), z(b)],
        });
    }
    out
}

/// Increasing index tuples of length ≥ 2 in `1..=n`, by size then lexicographically.
fn index_sets(n: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (1u64..(1 << n))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (1..=n).filter(|&i| m & (1 << (i - 1)) != 0).collect())
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets
}

fn prefix_exponents(len: usize, prefix: [usize; 2]) -> ExponentVector {
    let mut e = vec![0; len];
    e[prefix[0]] += 1;
    e[prefix[1]] += 1;
    ExponentVector::new(e)
}

/// `Σ zᵢwᵢ` over `z1, w1, …, zn, wn`.
pub fn diagonal_form(n: usize, truncation: u32) -> Result<Series> {
    let registry = VariableRegistry::zw(n);
    let terms = (1..=n).map(|i| {
        let mut e = vec![0; 2 * n];
        e[registry.z(i)] = 1;
        e[registry.w(i)] = 1;
        (ExponentVector::new(e), BigRational::one())
    });
    Series::from_terms(&registry, truncation, terms)
}

type SeriesCache = RwLock<HashMap<(usize, u32), Arc<Series>>>;

fn series_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Fₙ` truncated at total degree `degree`.
pub fn f_series(n: usize, degree: u32) -> Result<Arc<Series>> {
    if n == 0 {
        return Err(Error::IndexRange("need at least one pair".into()));
    }
    if let Some(s) = series_cache().read().expect("series cache poisoned").get(&(n, degree)) {
        return Ok(Arc::clone(s));
    }
    let geometric = diagonal_form(n, degree)?.geometric()?;
    let series = if n == 1 {
        geometric
    } else {
        f_recursion_rhs(n, degree)?.mul(&geometric)?
    };
    let series = Arc::new(series);
    let mut cache = series_cache().write().expect("series cache poisoned");
    Ok(Arc::clone(cache.entry((n, degree)).or_insert(series)))
}

/// `prefix · F̃_{n'}` as a series; for `n' = 1` this is `F₁` of the prefix variables.
fn factor_series(f: &Factor, target: &Arc<VariableRegistry>, degree: u32) -> Result<Series> {
    let lower = f_series(f.pairs, degree)?.substitute(target, &f.vars)?;
    if f.pairs == 1 {
        return Ok(lower);
    }
    let prefix = Series::monomial(
        target,
        degree,
        prefix_exponents(target.len(), f.prefix),
        BigRational::one(),
    )?;
    lower.mul(&prefix)
}

/// Right-hand side of the `Fₙ` recursion, `n ≥ 2`, assembled with the series `⊙`.
pub fn f_recursion_rhs(n: usize, degree: u32) -> Result<Series> {
    if n < 2 {
        return Err(Error::IndexRange("the recursion needs n ≥ 2".into()));
    }
    let registry = VariableRegistry::zw(n);
    let mut acc = Series::zero(&registry, degree);
    for js in index_sets(n) {
        let parts = factors(n, &js)
            .iter()
            .map(|f| factor_series(f, &registry, degree))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.add(&Series::odot_many(&parts)?)?;
    }
    Ok(acc)
}

type RationalCache = RwLock<HashMap<usize, Arc<RationalExpr>>>;

fn rational_cache() -> &'static RationalCache {
    static CACHE: OnceLock<RationalCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Fₙ` as a sum of terms `z…w… · P(u) / ∏(1 − u)` over permutation forms.
///
/// The forms `Σ zᵢwᵢ` and `Σ zᵢw_{i−1}` (cyclically) are labelled `u1` and `u2`.
/// Fails with [`Error::DistinctnessViolation`] if a closed-form `⊙` meets
/// coinciding sums; [`f_series`] is unaffected.
pub fn f_rational(n: usize) -> Result<Arc<RationalExpr>> {
    if n == 0 {
        return Err(Error::IndexRange("need at least one pair".into()));
    }
    if let Some(e) = rational_cache().read().expect("rational cache poisoned").get(&n) {
        return Ok(Arc::clone(e));
    }
    let identity = diagonal_form(n, 2)?;
    let expr = if n == 1 {
        RationalExpr::geometric(&identity)?
    } else {
        let registry = VariableRegistry::zw(n);
        let mut rhs = RationalExpr::zero(&registry);
        for js in index_sets(n) {
            let mut product: Option<RationalExpr> = None;
            for f in factors(n, &js) {
                let e = factor_rational(&f, &registry)?;
                product = Some(match product {
                    None => e,
                    Some(p) => p.odot(&e)?,
                });
            }
            rhs = rhs.add(&product.expect("index sets have at least two entries"))?;
        }
        let mut cycle: Vec<usize> = (0..n).collect();
        cycle.rotate_right(1);
        let cycle: Vec<usize> = cycle.into_iter().map(|s| s + 1).collect();
        let leading = [identity.clone(), permutation_form(&cycle)?];
        rhs.divide_by_one_minus(&identity)?.reindexed(&leading)?
    };
    let expr = Arc::new(expr);
    let mut cache = rational_cache().write().expect("rational cache poisoned");
    Ok(Arc::clone(cache.entry(n).or_insert(expr)))
}

fn factor_rational(f: &Factor, target: &Arc<VariableRegistry>) -> Result<RationalExpr> {
    let lower = f_rational(f.pairs)?.substitute(target, &f.vars)?;
    if f.pairs == 1 {
        return Ok(lower);
    }
    lower.mul_prefix(&prefix_exponents(target.len(), f.prefix))
}

/// Diagonal coefficients keyed by a multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalSeries {
    pub n: usize,
    pub entries: Vec<DiagonalEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalEntry {
    pub index: Vec<u32>,
    #[serde(serialize_with = "as_decimal")]
    pub value: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `Gₙ`: coefficients `N(k₁,k₁,…,kₙ,kₙ)` read off `f_series(n, degree)`, for
/// every `(k₁,…,kₙ)` with `2Σkᵢ ≤ degree`, in lexicographic order.
pub fn g_diagonal(n: usize, degree: u32) -> Result<DiagonalSeries> {
    let f = f_series(n, degree)?;
    let mut entries = Vec::new();
    let mut index = vec![0u32; n];
    fill_diagonal(&f, degree / 2, 0, &mut index, &mut entries)?;
    Ok(DiagonalSeries { n, entries })
}

fn fill_diagonal(
    f: &Series,
    budget: u32,
    pos: usize,
    index: &mut Vec<u32>,
    out: &mut Vec<DiagonalEntry>,
) -> Result<()> {
    if pos == index.len() {
        let exps: Vec<u32> = index.iter().flat_map(|&k| [k, k]).collect();
        let c = f.coefficient(&exps);
        let value = c
            .is_integer()
            .then(|| c.numer().to_biguint())
            .flatten()
            .ok_or_else(|| Error::Parse(format!("coefficient {c} is not a nonnegative integer")))?;
        out.push(DiagonalEntry {
            index: index.clone(),
            value,
        });
        return Ok(());
    }
    for k in 0..=budget {
        index[pos] = k;
        fill_diagonal(f, budget - k, pos + 1, index, out)?;
    }
    index[pos] = 0;
    Ok(())
}

/// `Hₙ`: `N(k,k,…,k)` (2n entries) for `k = 0..=max_k`, by the moment recursion.
pub fn h_diagonal(n: usize, max_k: u32) -> Result<DiagonalSeries> {
    h_diagonal_with(shared_engine(), n, max_k)
}

pub fn h_diagonal_with(engine: &MomentEngine, n: usize, max_k: u32) -> Result<DiagonalSeries> {
    if n == 0 {
        return Err(Error::IndexRange("need at least one pair".into()));
    }
    let entries = (0..=max_k)
        .map(|k| {
            Ok(DiagonalEntry {
                index: vec![k],
                value: engine.n_value(&MomentKey::uniform(n, i64::from(k))?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagonalSeries { n, entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub k: u32,
    #[serde(serialize_with = "as_decimal")]
    pub expected: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub computed: BigUint,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<ConjectureRow>,
    /// Smallest `k` whose row does not match.
    pub first_divergence: Option<u32>,
}

impl ConjectureReport {
    pub fn all_match(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Compares `N(k,…,k)` with `n^{nk}` for `k = 0..=max_k`. Reports, never asserts.
pub fn check_conjecture(n: usize, max_k: u32) -> Result<ConjectureReport> {
    check_conjecture_with(shared_engine(), n, max_k)
}

pub fn check_conjecture_with(engine: &MomentEngine, n: usize, max_k: u32) -> Result<ConjectureReport> {
    let h = h_diagonal_with(engine, n, max_k)?;
    let rows: Vec<ConjectureRow> = h
        .entries
        .into_iter()
        .map(|e| {
            let k = e.index[0];
            let expected = Pow::pow(BigUint::from(n), n as u64 * u64::from(k));
            ConjectureRow {
                n,
                k,
                matches: expected == e.value,
                expected,
                computed: e.value,
            }
        })
        .collect();
    let first_divergence = rows.iter().find(|r| !r.matches).map(|r| r.k);
    Ok(ConjectureReport { rows, first_divergence })
}

/// Both sides of the multinomial identity that the `n = 3` conjecture predicts:
/// `3^{3p}` and the double sum over `j + k = p` plus three times the constrained
/// triple sum over `j + k + ℓ = p − 1`.
pub fn n3_identity_sides(p: u32) -> Result<(BigUint, BigUint)> {
    if p == 0 {
        return Err(Error::IndexRange("the identity is stated for p ≥ 1".into()));
    }
    let p = u64::from(p);
    let lhs = Pow::pow(BigUint::from(3u32), 3 * p);
    let mut first = BigUint::zero();
    for j in 0..=p {
        let k = p - j;
        first += multinomial(&[j, j, j]) * multinomial(&[k, k, k]);
    }
    let mut second = BigUint::zero();
    for j in 0..p {
        for k in 0..p - j {
            let l = p - 1 - j - k;
            for kp in 0..=k + l + 1 {
                let lp = k + l + 1 - kp;
                for jp in 0..=j + l + 1 {
                    let lpp = j + l + 1 - jp;
                    second += multinomial(&[j, j, jp]) * multinomial(&[k, k, kp]) * multinomial(&[l, lp, lpp]);
                }
            }
        }
    }
    Ok((lhs, first + second * 3u32))
}

/// Whether the `n = 3` identity holds at `p` (`p ≥ 1`).
pub fn check_n3_identity(p: u32) -> Result<bool> {
    let (lhs, rhs) = n3_identity_sides(p)?;
    Ok(lhs == rhs)
}
