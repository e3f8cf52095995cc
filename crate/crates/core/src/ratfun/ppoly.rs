//! The numerator polynomials `P^{k,ℓ}_{m,n}` of the closed-form `⊙` product
//!
//! ```text
//! a₁…a_k / ∏(1−u_i)  ⊙  b₁…b_ℓ / ∏(1−v_j)  =  a₁…a_k b₁…b_ℓ P^{k,ℓ}_{m,n} / ∏(1−u_i−v_j)
//! ```
//!
//! `P` is obtained as `Q / (∏_{p<q}(u_p−u_q) ∏_{r<s}(v_r−v_s))`, where `Q` is a
//! signed sum over `(i, j)` of leave-one-out products. Indeterminates `0..m`
//! stand for `u_1..u_m` and `m..m+n` for `v_1..v_n`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rustc_hash::FxHashMap;

use super::kernel::{IntPoly, MAX_VARS};
use super::sympoly::{uv_name, SymPoly};
use crate::error::{Error, Result};

fn check_indices(m: u32, n: u32, k: u32, l: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::IndexRange(format!("m = {m}, n = {n} must be positive")));
    }
    if (m + n) as usize > MAX_VARS {
        return Err(Error::IndexRange(format!("m + n = {} exceeds {MAX_VARS}", m + n)));
    }
    if k >= m || l >= n {
        return Err(Error::IndexRange(format!(
            "need k < m and l < n, got k = {k}, l = {l}, m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// `∏_{p<q; p,q ∉ skip}(x_p − x_q)` over the listed variables.
fn vandermonde(vars: &[usize], skip: Option<usize>) -> Result<IntPoly> {
    let kept: Vec<usize> = vars.iter().copied().filter(|&v| Some(v) != skip).collect();
    let mut acc = IntPoly::constant(1);
    for (a, &p) in kept.iter().enumerate() {
        for &q in &kept[a + 1..] {
            acc = acc.mul(&IntPoly::linear(0, &[(p, 1), (q, -1)]))?;
        }
    }
    Ok(acc)
}

fn q_kernel(m: u32, n: u32, k: u32, l: u32) -> Result<IntPoly> {
    check_indices(m, n, k, l)?;
    let (m, n) = (m as usize, n as usize);
    let us: Vec<usize> = (0..m).collect();
    let vs: Vec<usize> = (m..m + n).collect();
    let factor = |i: usize, j: usize| IntPoly::linear(1, &[(us[i], -1), (vs[j], -1)]);

    // Row products R_i = ∏_j (1 − u_i − v_j).
    let rows: Vec<IntPoly> = (0..m)
        .map(|i| IntPoly::product((0..n).map(|j| factor(i, j)).collect::<Vec<_>>().iter()))
        .collect::<Result<_>>()?;

    let mut q = FxHashMap::default();
    for i in 0..m {
        // Σ_j (−1)^j v_j^{n−ℓ−1} ∏_{r<s; r,s≠j}(v_r − v_s) ∏_{j'≠j}(1 − u_i − v_j')
        let mut inner = IntPoly::zero();
        for j in 0..n {
            let others: Vec<IntPoly> = (0..n).filter(|&jj| jj != j).map(|jj| factor(i, jj)).collect();
            let mut term = IntPoly::var(vs[j]).pow(n as u32 - l - 1)?;
            term = term.mul(&vandermonde(&vs, Some(vs[j]))?)?;
            term = term.mul(&IntPoly::product(others.iter())?)?;
            // 0-based j, so (−1)^{j+1} in 1-based terms
            let sign = if j % 2 == 0 { -1 } else { 1 };
            inner = inner.add(&term.scale(sign)?)?;
        }
        let mut small = IntPoly::var(us[i]).pow(m as u32 - k - 1)?;
        small = small.mul(&vandermonde(&us, Some(us[i]))?)?.mul(&inner)?;
        let sign = if i % 2 == 0 { -1 } else { 1 };
        let big = IntPoly::product(rows.iter().enumerate().filter(|&(ii, _)| ii != i).map(|(_, r)| r))?;
        big.mul_into(&small, sign, &mut q)?;
    }
    Ok(IntPoly::from_accumulator(q))
}

fn p_kernel(m: u32, n: u32, k: u32, l: u32) -> Result<IntPoly> {
    let mut q = q_kernel(m, n, k, l)?;
    let name = uv_name(m);
    let groups = [
        (0..m as usize).collect::<Vec<_>>(),
        (m as usize..(m + n) as usize).collect(),
    ];
    for vars in &groups {
        for (a, &p) in vars.iter().enumerate() {
            for &r in &vars[a + 1..] {
                q = q.div_difference(p, r)?.ok_or_else(|| Error::NonzeroRemainder {
                    divisor: format!("{} - {}", name(p as u32), name(r as u32)),
                })?;
            }
        }
    }
    Ok(q)
}

/// The polynomial `Q` whose quotient by both Vandermonde products is `P^{k,ℓ}_{m,n}`.
pub fn q_polynomial(m: u32, n: u32, k: u32, l: u32) -> Result<SymPoly> {
    Ok(SymPoly::from_kernel(&q_kernel(m, n, k, l)?))
}

type PCache = RwLock<HashMap<(u32, u32, u32, u32), Arc<SymPoly>>>;

fn cache() -> &'static PCache {
    static CACHE: OnceLock<PCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `P^{k,ℓ}_{m,n}`, computed once per index tuple and shared afterwards.
///
/// Fails with [`Error::NonzeroRemainder`] if a Vandermonde factor does not
/// divide `Q` exactly.
pub fn p_polynomial(m: u32, n: u32, k: u32, l: u32) -> Result<Arc<SymPoly>> {
    let key = (m, n, k, l);
    if let Some(p) = cache().read().expect("P cache poisoned").get(&key) {
        return Ok(Arc::clone(p));
    }
    let p = Arc::new(SymPoly::from_kernel(&p_kernel(m, n, k, l)?));
    let mut guard = cache().write().expect("P cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(p)))
}

/// Same as [`p_polynomial`] but bypassing the cache.
pub fn p_polynomial_uncached(m: u32, n: u32, k: u32, l: u32) -> Result<SymPoly> {
    Ok(SymPoly::from_kernel(&p_kernel(m, n, k, l)?))
}
