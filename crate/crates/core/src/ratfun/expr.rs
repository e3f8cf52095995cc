//! Sums of terms `prefix · numerator(u) / ∏(1 − u)` and their closed-form `⊙`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::forms::{form_id, FormTable};
use super::ppoly::p_polynomial;
use super::sympoly::{SymMonomial, SymPoly};
use crate::error::{Error, Result};
use crate::fps::format::SeriesJson;
use crate::fps::{compact_monomial, fmt_rational, same_registry, ExponentVector, Series, VariableRegistry};

/// `prefix · numerator / ∏_{f ∈ denominator} (1 − f)`.
///
/// `numerator` is a polynomial in form indices of the owning [`FormTable`];
/// `denominator` is sorted and may repeat an index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTerm {
    prefix: ExponentVector,
    numerator: SymPoly,
    denominator: Vec<u32>,
}

impl RationalTerm {
    pub fn prefix(&self) -> &ExponentVector {
        &self.prefix
    }

    pub fn numerator(&self) -> &SymPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    fn remap(&self, map: &[u32]) -> RationalTerm {
        let mut denominator: Vec<u32> = self.denominator.iter().map(|&f| map[f as usize]).collect();
        denominator.sort_unstable();
        RationalTerm {
            prefix: self.prefix.clone(),
            numerator: self.numerator.rename(|v| map[v as usize]),
            denominator,
        }
    }
}

/// An unmerged sum of [`RationalTerm`]s sharing one [`FormTable`].
#[derive(Debug, Clone)]
pub struct RationalExpr {
    table: FormTable,
    terms: Vec<RationalTerm>,
}

impl RationalExpr {
    pub fn zero(registry: &Arc<VariableRegistry>) -> Self {
        Self {
            table: FormTable::new(registry),
            terms: Vec::new(),
        }
    }

    pub fn one(registry: &Arc<VariableRegistry>) -> Self {
        let mut e = Self::zero(registry);
        e.terms.push(RationalTerm {
            prefix: ExponentVector::zero(registry.len()),
            numerator: SymPoly::one(),
            denominator: Vec::new(),
        });
        e
    }

    /// `1 / (1 − form)`.
    pub fn geometric(form: &Series) -> Result<Self> {
        Self::one(form.registry()).divide_by_one_minus(form)
    }

    /// Appends `prefix · numerator(forms) / ∏(1 − d)` where indeterminate `i` of
    /// `numerator` stands for `forms[i]`.
    pub fn push(
        &mut self,
        prefix: ExponentVector,
        numerator: &SymPoly,
        forms: &[Series],
        denominator: &[Series],
    ) -> Result<()> {
        let registry = Arc::clone(self.table.registry());
        check_prefix(&registry, &prefix)?;
        let mut map = Vec::with_capacity(forms.len());
        for f in forms {
            map.push(self.table.intern(f)?);
        }
        if let Some(&v) = numerator.variables().iter().find(|&&v| v as usize >= map.len()) {
            return Err(Error::IndexRange(format!("numerator indeterminate {v} has no form")));
        }
        let mut den = Vec::with_capacity(denominator.len());
        for d in denominator {
            den.push(self.table.intern(d)?);
        }
        den.sort_unstable();
        if !numerator.is_zero() {
            self.terms.push(RationalTerm {
                prefix,
                numerator: numerator.rename(|v| map[v as usize]),
                denominator: den,
            });
        }
        Ok(())
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        self.table.registry()
    }

    pub fn table(&self) -> &FormTable {
        &self.table
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest number of denominator factors in any term.
    pub fn max_denominator_len(&self) -> usize {
        self.terms.iter().map(|t| t.denominator.len()).max().unwrap_or(0)
    }

    /// Term list concatenation.
    pub fn add(&self, other: &RationalExpr) -> Result<RationalExpr> {
        let mut out = self.clone();
        let map = out.absorb_table(&other.table)?;
        out.terms.extend(other.terms.iter().map(|t| t.remap(&map)));
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> RationalExpr {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
        }
        for t in &mut out.terms {
            t.numerator = t.numerator.scale(c);
        }
        out
    }

    /// Multiplies every prefix by the monomial `x^exponents`.
    pub fn mul_prefix(&self, exponents: &ExponentVector) -> Result<RationalExpr> {
        check_prefix(self.registry(), exponents)?;
        let mut out = self.clone();
        for t in &mut out.terms {
            t.prefix = t.prefix.add(exponents);
        }
        Ok(out)
    }

    /// Adds the factor `1/(1 − form)` to every term.
    pub fn divide_by_one_minus(&self, form: &Series) -> Result<RationalExpr> {
        let mut out = self.clone();
        let f = out.table.intern(form)?;
        for t in &mut out.terms {
            let at = t.denominator.partition_point(|&x| x <= f);
            t.denominator.insert(at, f);
        }
        Ok(out)
    }

    /// Renames variables into `target`: source variable `i` becomes `map[i]`.
    pub fn substitute(&self, target: &Arc<VariableRegistry>, map: &[usize]) -> Result<RationalExpr> {
        let mut table = FormTable::new(target);
        let mut form_map = Vec::with_capacity(self.table.len());
        for (_, _, form) in self.table.iter() {
            form_map.push(table.intern(&form.substitute(target, map)?)?);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &x) in t.prefix.as_slice().iter().enumerate() {
                exps[map[i]] += x;
            }
            let mut mapped = t.remap(&form_map);
            mapped.prefix = ExponentVector::new(exps);
            terms.push(mapped);
        }
        Ok(RationalExpr { table, terms })
    }

    /// Rebuilds the table with `leading` first and the remaining used forms in
    /// order of first appearance; unused forms are dropped.
    pub fn reindexed(&self, leading: &[Series]) -> Result<RationalExpr> {
        let mut table = FormTable::new(self.registry());
        for f in leading {
            table.intern(f)?;
        }
        let mut map: Vec<Option<u32>> = vec![None; self.table.len()];
        let mut visit = |f: u32, table: &mut FormTable| -> Result<()> {
            if map[f as usize].is_none() {
                map[f as usize] = Some(table.intern(self.table.form(f))?);
            }
            Ok(())
        };
        for t in &self.terms {
            for &f in &t.denominator {
                visit(f, &mut table)?;
            }
            for v in t.numerator.variables() {
                visit(v, &mut table)?;
            }
        }
        let map: Vec<u32> = map.into_iter().map(|m| m.unwrap_or(u32::MAX)).collect();
        let terms = self.terms.iter().map(|t| t.remap(&map)).collect();
        Ok(RationalExpr { table, terms })
    }

    /// Closed-form `⊙`, term by term.
    ///
    /// For terms `A/∏(1 − u_i)` and `B/∏(1 − v_j)` whose numerators are
    /// products of `k` and `ℓ` degree-`N` factors, the result is
    /// `A·B·P^{k,ℓ}_{m,n}(u; v) / ∏(1 − u_i − v_j)`. Requires `k < m`, `ℓ < n`
    /// and pairwise distinct sums `u_i + v_j`; a constant term with no
    /// denominator acts as a scalar.
    pub fn odot(&self, other: &RationalExpr) -> Result<RationalExpr> {
        let mut out = RationalExpr {
            table: self.table.clone(),
            terms: Vec::new(),
        };
        let map = out.absorb_table(&other.table)?;
        let right: Vec<RationalTerm> = other.terms.iter().map(|t| t.remap(&map)).collect();
        let modulus = self.registry().modulus();
        let left_parts: Vec<Vec<(u32, SymPoly)>> = self.terms.iter().map(|t| a_count_parts(t, modulus)).collect();
        let right_parts: Vec<Vec<(u32, SymPoly)>> = right.iter().map(|t| a_count_parts(t, modulus)).collect();
        for (t1, p1) in self.terms.iter().zip(&left_parts) {
            for (t2, p2) in right.iter().zip(&right_parts) {
                out.odot_pair(t1, p1, t2, p2)?;
            }
        }
        out.reindexed(&[])
    }

    fn odot_pair(
        &mut self,
        t1: &RationalTerm,
        parts1: &[(u32, SymPoly)],
        t2: &RationalTerm,
        parts2: &[(u32, SymPoly)],
    ) -> Result<()> {
        let (m, n) = (t1.denominator.len() as u32, t2.denominator.len() as u32);
        if let Some(c) = scalar(t1, parts1) {
            let mut t = t2.clone();
            t.numerator = t.numerator.scale(&c);
            self.terms.push(t);
            return Ok(());
        }
        if let Some(c) = scalar(t2, parts2) {
            let mut t = t1.clone();
            t.numerator = t.numerator.scale(&c);
            self.terms.push(t);
            return Ok(());
        }
        for (k, _) in parts1 {
            if *k >= m {
                return Err(Error::Inadmissible {
                    found: *k,
                    max: m.saturating_sub(1),
                });
            }
        }
        for (l, _) in parts2 {
            if *l >= n {
                return Err(Error::Inadmissible {
                    found: *l,
                    max: n.saturating_sub(1),
                });
            }
        }

        // Sums u_i + v_j, row-major, checked pairwise distinct.
        let mut sums: Vec<u32> = Vec::with_capacity((m * n) as usize);
        let mut seen: HashMap<String, (u32, u32)> = HashMap::new();
        for &u in &t1.denominator {
            for &v in &t2.denominator {
                let s = self.table.form(u).add(self.table.form(v))?;
                let id = form_id(&s);
                if let Some(&(pu, pv)) = seen.get(&id) {
                    return Err(Error::DistinctnessViolation {
                        left: format!("({}) + ({})", self.table.id(pu), self.table.id(pv)),
                        right: format!("({}) + ({})", self.table.id(u), self.table.id(v)),
                    });
                }
                seen.insert(id, (u, v));
                sums.push(self.table.intern(&s)?);
            }
        }
        sums.sort_unstable();

        let prefix = t1.prefix.add(&t2.prefix);
        let us = &t1.denominator;
        let vs = &t2.denominator;
        let mut numerator = SymPoly::zero();
        for (k, a) in parts1 {
            for (l, b) in parts2 {
                let p = p_polynomial(m, n, *k, *l)?;
                let p = p.rename(|x| if x < m { us[x as usize] } else { vs[(x - m) as usize] });
                numerator = numerator.add(&a.mul(b).mul(&p));
            }
        }
        if !numerator.is_zero() {
            self.terms.push(RationalTerm {
                prefix,
                numerator,
                denominator: sums,
            });
        }
        Ok(())
    }

    /// Interns `other`'s forms; returns the index map from `other` into `self`.
    fn absorb_table(&mut self, other: &FormTable) -> Result<Vec<u32>> {
        same_registry(self.registry(), other.registry())?;
        other.iter().map(|(_, _, f)| self.table.intern(f)).collect()
    }

    /// Truncated expansion, each `(1 − u)⁻¹` expanded geometrically.
    pub fn expand_to_series(&self, degree: u32) -> Result<Series> {
        let registry = Arc::clone(self.registry());
        let lift = |f: &Series| Series::from_terms(&registry, degree, f.terms().map(|(e, c)| (e.clone(), c.clone())));
        let lifted: Vec<Series> = self.table.iter().map(|(_, _, f)| lift(f)).collect::<Result<_>>()?;
        let mut geometric: Vec<Option<Series>> = vec![None; self.table.len()];
        let template = Series::one(&registry, degree);
        let mut acc = Series::zero(&registry, degree);
        for t in &self.terms {
            if t.prefix.total_degree() > degree {
                continue;
            }
            let prefix = Series::monomial(&registry, degree, t.prefix.clone(), BigRational::one())?;
            let mut term = t
                .numerator
                .evaluate(|v| lifted[v as usize].clone(), &template)?
                .mul(&prefix)?;
            for &f in &t.denominator {
                if term.is_zero() {
                    break;
                }
                let g = match &geometric[f as usize] {
                    Some(g) => g,
                    None => geometric[f as usize].insert(lifted[f as usize].geometric()?),
                };
                term = term.mul(g)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Label used for form `index` in displays: `u1`, `u2`, ….
    pub fn label(index: u32) -> String {
        format!("u{}", index + 1)
    }

    /// One line per term group, e.g. `z1w2/((1-u1)(1-u2)(1-u3))`, joined by `+`.
    pub fn display_terms(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let body = self.display_term(t);
            match (i, body.strip_prefix('-')) {
                (0, _) => out.push_str(&body),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    /// `u1 = z1w1 + z2w2` style lines for every form in the table.
    pub fn legend(&self) -> String {
        let mut out = String::new();
        for (i, _, f) in self.table.iter() {
            let _ = writeln!(out, "{} = {}", Self::label(i), f);
        }
        out
    }

    fn display_term(&self, t: &RationalTerm) -> String {
        let prefix = compact_monomial(self.registry(), &t.prefix);
        let mut out = String::new();
        let constant = (t.numerator.len() == 1).then(|| t.numerator.coefficient(&SymMonomial::one()));
        match constant {
            Some(c) if !c.is_zero() => {
                if c.is_negative() {
                    out.push('-');
                }
                let abs = c.abs();
                if prefix.is_empty() {
                    out.push_str(&fmt_rational(&abs));
                } else {
                    if !abs.is_one() {
                        out.push_str(&fmt_rational(&abs));
                    }
                    out.push_str(&prefix);
                }
            }
            _ => {
                out.push_str(&prefix);
                let _ = write!(out, "({})", t.numerator.display_with(Self::label));
            }
        }
        if !t.denominator.is_empty() {
            let mut factors = String::new();
            let mut runs: Vec<(u32, u32)> = Vec::new();
            for &f in &t.denominator {
                match runs.last_mut() {
                    Some((g, e)) if *g == f => *e += 1,
                    _ => runs.push((f, 1)),
                }
            }
            for &(f, e) in &runs {
                let _ = write!(factors, "(1-{})", Self::label(f));
                if e > 1 {
                    let _ = write!(factors, "^{e}");
                }
            }
            if runs.len() == 1 && runs[0].1 == 1 {
                let _ = write!(out, "/{factors}");
            } else {
                let _ = write!(out, "/({factors})");
            }
        }
        out
    }

    pub fn to_json_value(&self) -> RationalJson {
        RationalJson::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("rational JSON is serializable")
    }

    pub fn from_json(text: &str) -> Result<RationalExpr> {
        let parsed: RationalJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        parsed.into_expr()
    }
}

/// Numerator split by a-count: prefix pairs plus numerator degree.
fn a_count_parts(t: &RationalTerm, modulus: u32) -> Vec<(u32, SymPoly)> {
    let base = t.prefix.total_degree() / modulus;
    t.numerator.graded().into_iter().map(|(d, p)| (base + d, p)).collect()
}

/// The value of a term that is a plain constant, if it is one.
fn scalar(t: &RationalTerm, parts: &[(u32, SymPoly)]) -> Option<BigRational> {
    if !t.denominator.is_empty() || parts.len() != 1 || parts[0].0 != 0 {
        return None;
    }
    Some(t.numerator.coefficient(&SymMonomial::one()))
}

fn check_prefix(registry: &VariableRegistry, prefix: &ExponentVector) -> Result<()> {
    if prefix.len() != registry.len() {
        return Err(Error::ExponentLength {
            expected: registry.len(),
            found: prefix.len(),
        });
    }
    let degree = prefix.total_degree();
    if !degree.is_multiple_of(registry.modulus()) {
        return Err(Error::ThetaViolation {
            degree,
            modulus: registry.modulus(),
        });
    }
    Ok(())
}

/// Serialized form: forms keyed by canonical id, terms referring to ids.
#[derive(Debug, Serialize, Deserialize)]
pub struct RationalJson {
    pub vars: Vec<String>,
    #[serde(rename = "N")]
    pub modulus: u32,
    pub terms: Vec<RationalTermJson>,
    pub forms: BTreeMap<String, SeriesJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RationalTermJson {
    pub prefix: PrefixJson,
    pub numerator: Vec<NumeratorTermJson>,
    pub denominator: Vec<String>,
}

/// `{z: [...], w: [...]}` on `z/w` registries, raw exponents otherwise.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrefixJson {
    Pairs { z: Vec<u32>, w: Vec<u32> },
    Raw { exps: Vec<u32> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NumeratorTermJson {
    pub coeff: String,
    /// `(form id, exponent)` pairs.
    pub forms: Vec<(String, u32)>,
}

impl From<&RationalExpr> for RationalJson {
    fn from(e: &RationalExpr) -> Self {
        let registry = e.registry();
        let prefix = |x: &ExponentVector| match registry.pairs() {
            Some(_) => {
                let s = x.as_slice();
                PrefixJson::Pairs {
                    z: s.iter().step_by(2).copied().collect(),
                    w: s.iter().skip(1).step_by(2).copied().collect(),
                }
            }
            None => PrefixJson::Raw {
                exps: x.as_slice().to_vec(),
            },
        };
        let terms = e
            .terms
            .iter()
            .map(|t| RationalTermJson {
                prefix: prefix(&t.prefix),
                numerator: t
                    .numerator
                    .terms()
                    .map(|(m, c)| NumeratorTermJson {
                        coeff: c.to_string(),
                        forms: m.pairs().iter().map(|&(v, x)| (e.table.id(v).to_owned(), x)).collect(),
                    })
                    .collect(),
                denominator: t.denominator.iter().map(|&f| e.table.id(f).to_owned()).collect(),
            })
            .collect();
        let forms = e
            .table
            .iter()
            .map(|(_, id, f)| (id.to_owned(), SeriesJson::from(f)))
            .collect();
        RationalJson {
            vars: registry.names().to_vec(),
            modulus: registry.modulus(),
            terms,
            forms,
        }
    }
}

impl RationalJson {
    pub fn into_expr(self) -> Result<RationalExpr> {
        let registry = VariableRegistry::new(self.vars.clone(), self.modulus)?;
        let mut forms: HashMap<String, Series> = HashMap::new();
        for (id, s) in self.forms {
            let series = s.into_series_in(&registry)?;
            if form_id(&series) != id {
                return Err(Error::Parse(format!("form id {id} does not match its series")));
            }
            forms.insert(id, series);
        }
        let get = |id: &str| {
            forms
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unknown form {id}")))
        };
        let mut expr = RationalExpr::zero(&registry);
        for t in self.terms {
            let exps = match t.prefix {
                PrefixJson::Pairs { z, w } => {
                    if z.len() != w.len() {
                        return Err(Error::Parse("prefix z and w lengths differ".into()));
                    }
                    z.iter().zip(&w).flat_map(|(&a, &b)| [a, b]).collect()
                }
                PrefixJson::Raw { exps } => exps,
            };
            let denominator = t.denominator.iter().map(|id| get(id)).collect::<Result<Vec<_>>>()?;
            let mut used: Vec<Series> = Vec::new();
            let mut slots: HashMap<String, u32> = HashMap::new();
            let mut numerator_terms = Vec::new();
            for nt in t.numerator {
                let c = crate::fps::format::parse_rational(&nt.coeff)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {}", nt.coeff)))?;
                let mut pairs = Vec::new();
                for (id, x) in nt.forms {
                    let slot = match slots.get(&id) {
                        Some(&s) => s,
                        None => {
                            used.push(get(&id)?);
                            let s = used.len() as u32 - 1;
                            slots.insert(id, s);
                            s
                        }
                    };
                    pairs.push((slot, x));
                }
                numerator_terms.push((SymMonomial::from_pairs(pairs), c));
            }
            let numerator = SymPoly::from_terms(numerator_terms);
            expr.push(ExponentVector::new(exps), &numerator, &used, &denominator)?;
        }
        Ok(expr)
    }
}
