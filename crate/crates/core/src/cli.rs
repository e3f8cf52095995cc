//! Command-line front end.
//!
//! Standard output carries only the report; diagnostics and progress go to the
//! error stream. Exit status: 0 success, 1 computation error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fps::format::{parse_any, to_text, SeriesJson};
use crate::fps::{e_transform, Series};
use crate::genfun::{check_conjecture_with, f_rational, f_series, g_diagonal, h_diagonal_with, n3_identity_sides};
use crate::moments::{shared_engine, MemoMode, MomentEngine, MomentKey};
use crate::ratfun::{p_polynomial, q_polynomial, uv_name};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "dt-moments",
    version,
    about = "Exact *-moments N(k1,l1,...) of the operator T = DT(δ0,1), series and closed forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    pub output: Output,

    /// Stop memoizing moment values after this many entries (nothing is evicted).
    #[arg(long = "memo-limit", global = true)]
    pub memo_limit: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N and M for one key, e.g. `--key 1,1,1,1`.
    Moment {
        #[arg(long, allow_hyphen_values = true)]
        key: String,
    },
    /// F_n as a truncated series.
    Series {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        degree: DegreeArgs,
    },
    /// F_n in closed rational form.
    Rational {
        #[arg(long)]
        n: usize,
        /// Also print the expansion up to this degree.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// The odot product of two series files (text or JSON).
    Odot {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Homogeneous parts q^k/k! of a series file.
    Etransform {
        #[arg(long)]
        input: PathBuf,
    },
    /// The numerator polynomial P (or Q with `--q`) for indices m, n, k, l.
    Ppoly {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        q: bool,
    },
    /// Diagonal coefficients: H_n up to K, or G_n with `--kind g`.
    Diagonal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Diagonal::H)]
        kind: Diagonal,
        #[command(flatten)]
        degree: DegreeArgs,
    },
    /// Compare N(k,...,k) with n^(nk) for k up to K.
    CheckConjecture {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        max_k: u32,
    },
    /// Evaluate both sides of the n = 3 multinomial identity.
    CheckIdentity {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagonal {
    G,
    H,
}

/// `--degree D` directly, or `--K m` meaning `D = 2m`; default `m = 4`.
#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long, conflicts_with = "max_k")]
    degree: Option<u32>,
    #[arg(long = "K")]
    max_k: Option<u32>,
}

impl DegreeArgs {
    fn order(&self) -> u32 {
        self.max_k.or(self.degree.map(|d| d / 2)).unwrap_or(4)
    }

    fn degree(&self) -> u32 {
        self.degree.unwrap_or(2 * self.order())
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidKey(_) | Error::IndexRange(_) | Error::Parse(_) | Error::InvalidPermutation(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Compute(other),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(report) => {
            let _ = writeln!(out, "{report}");
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn envelope(command: &str, body: Value) -> String {
    let mut root = json!({ "version": VERSION, "command": command });
    if let (Value::Object(r), Value::Object(b)) = (&mut root, body) {
        r.extend(b);
    }
    serde_json::to_string(&root).expect("report JSON is serializable")
}

fn series_value(s: &Series) -> Value {
    serde_json::to_value(SeriesJson::from(s)).expect("series JSON is serializable")
}

fn read_series(path: &PathBuf) -> Result<Series, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_any(&text)?)
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<String, Failure> {
    let json = cli.output == Output::Json;
    let limited;
    let engine: &MomentEngine = match cli.memo_limit {
        Some(cap) => {
            limited = MomentEngine::with_limit(MemoMode::Canonical, Some(cap));
            &limited
        }
        None => shared_engine(),
    };
    match &cli.command {
        Command::Moment { key } => {
            let key: MomentKey = key.parse()?;
            let n = engine.n_value(&key);
            let m = key.is_nonnegative().then(|| engine.moment(&key)).transpose()?;
            if json {
                Ok(envelope(
                    "moment",
                    json!({ "key": key.to_string(), "N": n.to_string(), "M": m.map(|m| m.to_string()) }),
                ))
            } else {
                Ok(match m {
                    Some(m) => format!("N={n} M={m}"),
                    None => format!("N={n}"),
                })
            }
        }
        Command::Series { n, degree } => {
            let d = degree.degree();
            let _ = writeln!(err, "computing F_{n} to degree {d}");
            let f = f_series(*n, d)?;
            if json {
                Ok(envelope("series", json!({ "n": n, "series": series_value(&f) })))
            } else {
                Ok(to_text(&f).trim_end().to_owned())
            }
        }
        Command::Rational { n, degree } => {
            let _ = writeln!(err, "building the rational form of F_{n}");
            let f = f_rational(*n)?;
            let expansion = degree.map(|d| f.expand_to_series(d)).transpose()?;
            if json {
                let mut body = json!({ "n": n, "rational": f.to_json_value() });
                if let Some(s) = &expansion {
                    body["expansion"] = series_value(s);
                }
                Ok(envelope("rational", body))
            } else {
                let mut text = format!("F{n} = {}\nwhere\n{}", f.display_terms(), f.legend());
                if let Some(s) = &expansion {
                    text.push_str(&format!("expansion: {s}\n"));
                }
                Ok(text.trim_end().to_owned())
            }
        }
        Command::Odot { left, right } => {
            let product = read_series(left)?.odot(&read_series(right)?)?;
            if json {
                Ok(envelope("odot", json!({ "series": series_value(&product) })))
            } else {
                Ok(to_text(&product).trim_end().to_owned())
            }
        }
        Command::Etransform { input } => {
            let h = e_transform(&read_series(input)?);
            if json {
                let parts: Vec<Value> = h
                    .parts()
                    .map(|(k, s)| json!({ "k": k, "series": series_value(s) }))
                    .collect();
                Ok(envelope("etransform", json!({ "parts": parts })))
            } else {
                let lines: Vec<String> = h.parts().map(|(k, s)| format!("q^{k}/{k}!: {s}")).collect();
                Ok(lines.join("\n"))
            }
        }
        Command::Ppoly { m, n, k, l, q } => {
            let poly = if *q {
                q_polynomial(*m, *n, *k, *l)?
            } else {
                (*p_polynomial(*m, *n, *k, *l)?).clone()
            };
            let text = poly.display_with(uv_name(*m));
            if json {
                let name = if *q { "Q" } else { "P" };
                Ok(envelope(
                    "ppoly",
                    json!({ "m": m, "n": n, "k": k, "l": l, "polynomial": name, "value": text, "degree": poly.degree() }),
                ))
            } else {
                Ok(text)
            }
        }
        Command::Diagonal { n, kind, degree } => {
            let series = match kind {
                Diagonal::H => h_diagonal_with(engine, *n, degree.order())?,
                Diagonal::G => g_diagonal(*n, degree.degree())?,
            };
            if json {
                let name = if *kind == Diagonal::H { "H" } else { "G" };
                let body = serde_json::to_value(&series).expect("diagonal JSON is serializable");
                Ok(envelope(
                    "diagonal",
                    json!({ "kind": name, "n": n, "entries": body["entries"] }),
                ))
            } else {
                let lines: Vec<String> = series
                    .entries
                    .iter()
                    .map(|e| {
                        let idx: Vec<String> = e.index.iter().map(u32::to_string).collect();
                        format!("{} {}", idx.join(","), e.value)
                    })
                    .collect();
                Ok(lines.join("\n"))
            }
        }
        Command::CheckConjecture { n, max_k } => {
            let report = check_conjecture_with(engine, *n, *max_k)?;
            if json {
                let body = serde_json::to_value(&report).expect("report JSON is serializable");
                Ok(envelope("check-conjecture", body))
            } else {
                let mut lines: Vec<String> = report
                    .rows
                    .iter()
                    .map(|r| {
                        format!(
                            "n={} k={} expected={} computed={} match={}",
                            r.n, r.k, r.expected, r.computed, r.matches
                        )
                    })
                    .collect();
                lines.push(match report.first_divergence {
                    Some(k) => format!("first divergence at k={k}"),
                    None => "all match".to_owned(),
                });
                Ok(lines.join("\n"))
            }
        }
        Command::CheckIdentity { p } => {
            let (lhs, rhs) = n3_identity_sides(*p)?;
            let holds = lhs == rhs;
            if json {
                Ok(envelope(
                    "check-identity",
                    json!({ "p": p, "lhs": lhs.to_string(), "rhs": rhs.to_string(), "holds": holds }),
                ))
            } else {
                Ok(format!("p={p} lhs={lhs} rhs={rhs} holds={holds}"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("dt-moments").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn moment_text() {
        let (code, out, _) = call(&["moment", "--key", "1,1,1,1"]);
        assert_eq!((code, out.as_str()), (0, "N=4 M=2/3\n"));
        let (code, out, _) = call(&["moment", "--key", "-1,-1"]);
        assert_eq!((code, out.as_str()), (0, "N=1\n"));
    }

    #[test]
    fn ppoly_text() {
        let (code, out, _) = call(&["ppoly", "--m", "2", "--n", "2", "--k", "1", "--l", "1"]);
        assert_eq!((code, out.as_str()), (0, "2 - u1 - u2 - v1 - v2\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["moment"]).0, 2);
        assert_eq!(call(&["moment", "--key", "1,1,1"]).0, 2);
        assert_eq!(call(&["ppoly", "--m", "2", "--n", "2", "--k", "2", "--l", "0"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
    }

    #[test]
    fn json_has_version() {
        let (code, out, _) = call(&["--output", "json", "check-conjecture", "--n", "2", "--K", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["version"], VERSION);
        assert!(v["rows"].as_array().unwrap().iter().all(|r| r["match"] == true));
    }
}
