use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::kernel::{self, IntPoly};
use crate::error::{Error, Result};
use crate::fps::{fmt_rational, Series};

/// Sparse monomial: `(variable, exponent)` pairs sorted by variable, exponents > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymMonomial(Vec<(u32, u32)>);

impl SymMonomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Self(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(x, _)| x)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(&other.0).copied())
    }

    /// Ordering that compares exponents from the highest variable down.
    fn cmp_reverse(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    let ord = va.cmp(&vb).then(ea.cmp(&eb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

/// Polynomial with exact rational coefficients in abstract indeterminates `0, 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<SymMonomial, BigRational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_terms([(SymMonomial::one(), c)])
    }

    pub fn var(v: u32) -> Self {
        Self::from_terms([(SymMonomial::var(v), BigRational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (SymMonomial, BigRational)>) -> Self {
        let mut map: BTreeMap<SymMonomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub(crate) fn from_kernel(poly: &IntPoly) -> Self {
        let terms = poly.terms().iter().map(|&(mono, c)| {
            let pairs = (0..kernel::MAX_VARS).map(|v| (v as u32, kernel::exponent(mono, v)));
            (SymMonomial::from_pairs(pairs), BigRational::from_integer(c.into()))
        });
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &BigRational)> {
        self.terms.iter()
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

    pub fn coefficient(&self, m: &SymMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(SymMonomial::degree).max()
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        Self::from_terms(
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymPoly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> SymPoly {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut map: BTreeMap<SymMonomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn pow(&self, e: u32) -> SymPoly {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Renames every indeterminate through `f`; colliding images multiply.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> SymPoly {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (SymMonomial::from_pairs(m.0.iter().map(|&(v, e)| (f(v), e))), c.clone())),
        )
    }

    /// Splits into homogeneous components keyed by total degree.
    pub fn graded(&self) -> BTreeMap<u32, SymPoly> {
        let mut out: BTreeMap<u32, BTreeMap<SymMonomial, BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().insert(m.clone(), c.clone());
        }
        out.into_iter().map(|(d, terms)| (d, SymPoly { terms })).collect()
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Substitutes a series for each indeterminate, caching powers.
    pub fn evaluate(&self, value: impl Fn(u32) -> Series, template: &Series) -> Result<Series> {
        let mut powers: BTreeMap<(u32, u32), Series> = BTreeMap::new();
        let mut acc = Series::zero(template.registry(), template.truncation());
        for (m, c) in &self.terms {
            let mut term = Series::constant(template.registry(), template.truncation(), c.clone());
            for &(v, e) in &m.0 {
                powers
                    .entry((v, e))
                    .or_insert_with(|| value(v).truncate(template.truncation()).pow(e));
                term = term.mul(&powers[&(v, e)])?;
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Renders terms ordered by exponents read from the highest variable down,
    /// e.g. `1 - u1u2 - v1 - v2 + v1v2`.
    pub fn display_with(&self, name: impl Fn(u32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| a.cmp_reverse(b));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut mono = String::new();
            for &(v, e) in &m.0 {
                mono.push_str(&name(v));
                if e > 1 {
                    let _ = write!(mono, "^{e}");
                }
            }
            if mono.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_rational(&abs));
                }
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parses the [`SymPoly::display_with`] format. Coefficients are integers or
    /// parenthesised fractions; an optional `*` may separate factors.
    pub fn parse(text: &str, lookup: impl Fn(&str) -> Option<u32>) -> Result<SymPoly> {
        let err = |msg: &str| Error::Parse(format!("{msg} in {text:?}"));
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut terms = Vec::new();
        while pos < chars.len() {
            let mut sign = BigRational::one();
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            } else if !terms.is_empty() {
                return Err(err("expected + or -"));
            }
            let mut coeff = BigRational::one();
            if pos < chars.len() && chars[pos] == '(' {
                let close = chars[pos..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or_else(|| err("unclosed ("))?
                    + pos;
                let body: String = chars[pos + 1..close].iter().collect();
                coeff = crate::fps::format::parse_rational(&body).ok_or_else(|| err("bad fraction"))?;
                pos = close + 1;
            } else {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos > start {
                    let digits: String = chars[start..pos].iter().collect();
                    coeff = BigRational::from_integer(digits.parse().map_err(|_| err("bad integer"))?);
                }
            }
            let mut pairs = Vec::new();
            while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                if chars[pos] == '*' {
                    pos += 1;
                    continue;
                }
                if !chars[pos].is_ascii_alphabetic() {
                    return Err(err("expected a variable"));
                }
                let start = pos;
                pos += 1;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                let var = lookup(&name).ok_or_else(|| err(&format!("unknown variable {name}")))?;
                let mut exp = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let s = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let digits: String = chars[s..pos].iter().collect();
                    exp = digits.parse().map_err(|_| err("bad exponent"))?;
                }
                pairs.push((var, exp));
            }
            terms.push((SymMonomial::from_pairs(pairs), sign * coeff));
        }
        Ok(SymPoly::from_terms(terms))
    }
}

/// Names indeterminates `0..m` as `u1..um` and the rest as `v1, v2, …`.
pub fn uv_name(m: u32) -> impl Fn(u32) -> String {
    move |v| {
        if v < m {
            format!("u{}", v + 1)
        } else {
            format!("v{}", v - m + 1)
        }
    }
}

/// Inverse of [`uv_name`].
pub fn uv_lookup(m: u32) -> impl Fn(&str) -> Option<u32> {
    move |name| {
        let (head, idx) = name.split_at(1);
        let idx: u32 = idx.parse().ok()?;
        if idx == 0 {
            return None;
        }
        match head {
            "u" if idx <= m => Some(idx - 1),
            "v" => Some(m + idx - 1),
            _ => None,
        }
    }
}
