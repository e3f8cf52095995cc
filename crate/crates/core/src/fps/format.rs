//! Text and JSON serialization of [`Series`].
//!
//! Text form: header lines `# vars …`, `# N …`, `# D …`, then one term per
//! line as `num/den z1^a w1^b …` with zero exponents omitted. The constant
//! term has no monomial part. On input a missing coefficient means 1 and a
//! bare name means exponent 1. Terms appear in display order, so output is
//! deterministic and round-trips bit-exactly.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::registry::{VariableRegistry, DEFAULT_MODULUS};
use super::series::{display_order, ExponentVector, Series};
use crate::error::{Error, Result};

pub fn to_text(series: &Series) -> String {
    let reg = series.registry();
    let mut out = String::new();
    out.push_str(&format!("# vars {}\n", reg.names().join(" ")));
    out.push_str(&format!("# N {}\n", reg.modulus()));
    out.push_str(&format!("# D {}\n", series.truncation()));
    for (e, c) in display_order(series) {
        out.push_str(&format!("{}/{}", c.numer(), c.denom()));
        for (i, &x) in e.as_slice().iter().enumerate() {
            if x > 0 {
                out.push_str(&format!(" {}^{}", reg.name(i), x));
            }
        }
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str) -> Result<Series> {
    let mut vars: Option<Vec<String>> = None;
    let mut modulus = DEFAULT_MODULUS;
    let mut degree: Option<u32> = None;
    let mut raw_terms = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let mut parts = header.split_whitespace();
            match parts.next() {
                Some("vars") => vars = Some(parts.map(str::to_owned).collect()),
                Some("N") => modulus = parse_num(parts.next(), lineno)?,
                Some("D") => degree = Some(parse_num(parts.next(), lineno)?),
                _ => {}
            }
            continue;
        }
        raw_terms.push((lineno, line));
    }

    let vars = vars.ok_or_else(|| Error::Parse("missing '# vars' header".into()))?;
    let degree = degree.ok_or_else(|| Error::Parse("missing '# D' header".into()))?;
    let registry = VariableRegistry::new(vars, modulus)?;

    let mut terms = Vec::with_capacity(raw_terms.len());
    for (lineno, line) in raw_terms {
        let mut tokens = line.split_whitespace().peekable();
        let first = tokens.peek().copied().unwrap_or_default();
        let coeff = match parse_rational(first) {
            Some(c) => {
                tokens.next();
                c
            }
            None if registry.index_of(first.split('^').next().unwrap_or_default()).is_some() => {
                BigRational::from_integer(1.into())
            }
            None => return Err(Error::Parse(format!("line {}: bad coefficient", lineno + 1))),
        };
        let mut exps = vec![0u32; registry.len()];
        for tok in tokens {
            let (name, pow) = tok.split_once('^').unwrap_or((tok, "1"));
            let idx = registry
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("line {}: unknown variable {name}", lineno + 1)))?;
            exps[idx] += pow
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("line {}: bad exponent {pow}", lineno + 1)))?;
        }
        terms.push((ExponentVector::new(exps), coeff));
    }
    Series::from_terms(&registry, degree, terms)
}

fn parse_num(tok: Option<&str>, lineno: usize) -> Result<u32> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {}: expected a number", lineno + 1)))
}

pub(crate) fn parse_rational(tok: &str) -> Option<BigRational> {
    let (n, d) = match tok.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (tok.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    #[serde(
        rename = "N",
        default = "default_modulus",
        skip_serializing_if = "is_default_modulus"
    )]
    pub modulus: u32,
    #[serde(rename = "D")]
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
}

fn default_modulus() -> u32 {
    DEFAULT_MODULUS
}

fn is_default_modulus(m: &u32) -> bool {
    *m == DEFAULT_MODULUS
}

impl From<&Series> for SeriesJson {
    fn from(series: &Series) -> Self {
        Self {
            vars: series.registry().names().to_vec(),
            modulus: series.modulus(),
            degree: series.truncation(),
            terms: display_order(series)
                .into_iter()
                .map(|(e, c)| TermJson {
                    exps: e.as_slice().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl SeriesJson {
    pub fn into_series(self) -> Result<Series> {
        let registry = VariableRegistry::new(self.vars.clone(), self.modulus)?;
        self.into_series_in(&registry)
    }

    pub fn into_series_in(self, registry: &Arc<VariableRegistry>) -> Result<Series> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                let c = parse_rational(&format!("{}/{}", t.num, t.den))
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {}/{}", t.num, t.den)))?;
                Ok((ExponentVector::new(t.exps), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Series::from_terms(registry, self.degree, terms)
    }
}

pub fn to_json(series: &Series) -> String {
    serde_json::to_string(&SeriesJson::from(series)).expect("series JSON is serializable")
}

pub fn from_json(text: &str) -> Result<Series> {
    let parsed: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parsed.into_series()
}

/// Accepts either serialization, picking JSON when the input starts with `{`.
pub fn parse_any(text: &str) -> Result<Series> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_text(text)
    }
}
