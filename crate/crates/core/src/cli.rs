//! Command-line front end. [`run`] is pure apart from reading generator
//! files and the grid environment variable, so it is exercised directly by
//! the tests.
//!
//! Exit codes: `0` success, `1` domain error (singular matrix, point off a
//! domain, failing selftest), `2` parse error.

use std::fs;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::building::{building_dist, chart, chart_transition, Lattice};
use crate::error::{Error, Result};
use crate::hahn::FieldMatrix;
use crate::metric::{dist, geodesic_eval, segment};
use crate::oracle::Grid;
use crate::props::{run_all, Sizes};
use crate::rational::{format_rational, parse_rational, Q};
use crate::residuation::{in_image, inversion_domain, pseudo_inverse, EpsilonAssignment};
use crate::spectra::{length_spectrum, translation_length, Representation};
use crate::trop::{ProjPoint, TropMatrix, TropVector};

/// Default cap on the number of letters in a `spectrum` word.
pub const DEFAULT_MAX_WORD_LEN: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "tropbuild", version, about = "Exact tropical linear algebra and lattice buildings")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Max-plus matrix product `A ⊙ B`.
    TropMul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Max-plus matrix-vector product.
    Apply {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Greatest `x` with `A ⊙ x ⪯ y`.
    Pinv {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Witness assignment for `y ∈ Im A`, or `none`.
    InImage {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Gram matrix `α ⊙ β` of the inversion domain, or membership of a point.
    InvDomain {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Hilbert projective distance.
    Dist {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Point at parameter `t ∈ [0, 1]` on the geodesic from `x` to `y`.
    Geodesic {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Building distance between lattices given as `;`-separated columns.
    LatticeDist {
        #[arg(allow_hyphen_values = true)]
        l: String,
        #[arg(allow_hyphen_values = true)]
        m: String,
    },
    /// Lattice `φ_E(y)` with basis `t_{yᵢ} eᵢ`. The basis `E` is given as
    /// `;`-separated columns, like a lattice, and the result is printed the
    /// same way.
    Chart {
        #[arg(allow_hyphen_values = true)]
        e: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Coordinates `x` with `φ_F(x) = φ_E(y)`, or `none`. Bases are given as
    /// `;`-separated columns.
    ChartTransition {
        #[arg(allow_hyphen_values = true)]
        e: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Translation length of a matrix over the field.
    Tlen {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Length spectrum of words in the generators of a file of
    /// `name = matrix` lines.
    Spectrum {
        generators: String,
        #[arg(allow_hyphen_values = true)]
        words: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LEN)]
        max_len: usize,
    },
    /// Runs every property suite with a seeded generator.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Sizes::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = Sizes::default().heavy)]
        heavy: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TropMul { .. } => "trop-mul",
            Command::Apply { .. } => "apply",
            Command::Pinv { .. } => "pinv",
            Command::InImage { .. } => "in-image",
            Command::InvDomain { .. } => "inv-domain",
            Command::Dist { .. } => "dist",
            Command::Geodesic { .. } => "geodesic",
            Command::LatticeDist { .. } => "lattice-dist",
            Command::Chart { .. } => "chart",
            Command::ChartTransition { .. } => "chart-transition",
            Command::Tlen { .. } => "tlen",
            Command::Spectrum { .. } => "spectrum",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

/// Text and JSON renderings of a successful result.
struct Rendered {
    text: String,
    value: Value,
    /// `Some` for partial operations.
    defined: Option<bool>,
    /// Nonzero for a failing selftest.
    code: i32,
}

impl Rendered {
    fn total(text: String, value: Value) -> Self {
        Rendered { text, value, defined: None, code: 0 }
    }

    fn partial(text: Option<String>, value: Value) -> Self {
        let defined = text.is_some();
        Rendered { text: text.unwrap_or_else(|| "none".into()), value, defined: Some(defined), code: 0 }
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome::ok(text) } else { Outcome::fail(code, text) };
        }
    };
    let name = cli.command.name();
    match execute(cli.command) {
        Ok(r) => {
            let stdout = if cli.json {
                let mut obj = json!({ "command": name, "result": r.value });
                if let Some(d) = r.defined {
                    obj["defined"] = Value::Bool(d);
                }
                format!("{obj}\n")
            } else {
                format!("{}\n", r.text)
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_parse() { 2 } else { 1 };
            Outcome::fail(code, format!("error: {e}\n"))
        }
    }
}

fn q_json(v: &Q) -> Value {
    Value::String(format_rational(v))
}

fn vector_json(v: &TropVector) -> Value {
    Value::Array(v.coords().iter().map(|c| Value::String(c.to_string())).collect())
}

fn matrix_json(m: &TropMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(&m.row(i))).collect())
}

fn lattice_json(l: &Lattice) -> Value {
    Value::Array(
        l.basis()
            .columns()
            .iter()
            .map(|c| Value::Array(c.iter().map(|z| Value::String(z.to_string())).collect()))
            .collect(),
    )
}

fn eps_text(w: &EpsilonAssignment) -> String {
    w.columns()
        .iter()
        .map(|c| c.map_or_else(|| "-".to_string(), |j| j.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

fn point(s: &str) -> Result<ProjPoint> {
    s.parse()
}

/// Basis matrix from `;`-separated columns.
fn parse_basis(s: &str) -> Result<FieldMatrix> {
    Ok(s.parse::<FieldMatrix>()?.transpose())
}

fn parse_generators(path: &str) -> Result<Representation> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
    let mut gens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, matrix) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected `name = matrix`", lineno + 1)))?;
        let m: FieldMatrix = matrix.trim().parse()?;
        gens.push((name.trim().to_string(), m));
    }
    Representation::new(gens)
}

fn execute(cmd: Command) -> Result<Rendered> {
    Ok(match cmd {
        Command::TropMul { a, b } => {
            let p = a.parse::<TropMatrix>()?.mul(&b.parse()?)?;
            Rendered::total(p.to_string(), matrix_json(&p))
        }
        Command::Apply { a, x } => {
            let v = a.parse::<TropMatrix>()?.apply(&x.parse()?)?;
            Rendered::total(v.to_string(), vector_json(&v))
        }
        Command::Pinv { a, y } => {
            let v = pseudo_inverse(&a.parse()?, &y.parse()?)?;
            Rendered::total(v.to_string(), vector_json(&v))
        }
        Command::InImage { a, y } => {
            let w = in_image(&a.parse()?, &y.parse()?)?;
            let value = w.as_ref().map_or(Value::Null, |w| {
                Value::Array(w.columns().iter().map(|c| c.map_or(Value::Null, |j| json!(j))).collect())
            });
            Rendered::partial(w.as_ref().map(eps_text), value)
        }
        Command::InvDomain { alpha, beta, point } => {
            let d = inversion_domain(&alpha.parse()?, &beta.parse()?)?;
            match point {
                Some(p) => {
                    let inside = d.contains(&p.parse()?)?;
                    Rendered::total(inside.to_string(), Value::Bool(inside))
                }
                None => Rendered::total(d.gram().to_string(), matrix_json(d.gram())),
            }
        }
        Command::Dist { x, y } => {
            let d = dist(&point(&x)?, &point(&y)?)?;
            Rendered::total(d.to_string(), Value::String(d.to_string()))
        }
        Command::Geodesic { x, y, t } => {
            let t = parse_rational(&t)?;
            let s = segment(&x.parse()?, &y.parse()?)?;
            let p = geodesic_eval(&s, &t)?;
            Rendered::total(p.to_string(), vector_json(p.rep()))
        }
        Command::LatticeDist { l, m } => {
            let d = building_dist(&l.parse()?, &m.parse()?)?;
            Rendered::total(format_rational(&d), q_json(&d))
        }
        Command::Chart { e, y } => {
            let l = chart(&parse_basis(&e)?, &y.parse()?)?;
            Rendered::total(l.to_string(), lattice_json(&l))
        }
        Command::ChartTransition { e, f, y } => {
            let x = chart_transition(&parse_basis(&e)?, &parse_basis(&f)?, &y.parse()?)?;
            let value = x.as_ref().map_or(Value::Null, vector_json);
            Rendered::partial(x.as_ref().map(ToString::to_string), value)
        }
        Command::Tlen { a } => {
            let l = translation_length(&a.parse()?)?;
            Rendered::total(format_rational(&l), q_json(&l))
        }
        Command::Spectrum { generators, words, max_len } => {
            let rho = parse_generators(&generators)?;
            for w in &words {
                let len = rho.parse_word(w)?.len();
                if len > max_len {
                    return Err(Error::WordTooLong { len, limit: max_len });
                }
            }
            let refs: Vec<&str> = words.iter().map(String::as_str).collect();
            let spectrum = length_spectrum(&rho, &refs)?;
            let text = spectrum
                .iter()
                .map(|(w, l)| format!("{}\t{}", if w.is_empty() { "1" } else { w }, format_rational(l)))
                .collect::<Vec<_>>()
                .join("\n");
            let value = Value::Array(spectrum.iter().map(|(w, l)| json!({ "word": w, "length": q_json(l) })).collect());
            Rendered::total(text, value)
        }
        Command::Selftest { seed, trials, heavy } => {
            let grid = Grid::from_env()?;
            let reports = run_all(seed, Sizes { trials, heavy }, &grid);
            let passed = reports.iter().filter(|r| r.passed()).count();
            let mut text: Vec<String> = reports.iter().map(ToString::to_string).collect();
            text.push(format!("{passed}/{} suites passed (seed {seed})", reports.len()));
            let value = Value::Array(
                reports
                    .iter()
                    .map(|r| json!({ "suite": r.name, "trials": r.trials, "failures": r.failures, "passed": r.passed() }))
                    .collect(),
            );
            Rendered { text: text.join("\n"), value, defined: None, code: i32::from(passed != reports.len()) }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(args: &[&str]) -> Outcome {
        run(std::iter::once("tropbuild").chain(args.iter().copied()))
    }

    #[test]
    fn basic_commands() {
        assert_eq!(out(&["dist", "0,0,0", "3,1,0"]).stdout, "3\n");
        assert_eq!(out(&["tlen", "t^-1,0;0,t"]).stdout, "2\n");
        assert_eq!(out(&["trop-mul", "0,2;1,0", "0;0"]).stdout, "2;1\n");
        assert_eq!(out(&["apply", "0,2;1,0", "0,0"]).stdout, "2,1\n");
        assert_eq!(out(&["pinv", "0,2;1,0", "0,0"]).stdout, "-1,-2\n");
        assert_eq!(out(&["dist", "0,-inf", "0,0"]).stdout, "inf\n");
    }

    #[test]
    fn partial_results() {
        let o = out(&["chart-transition", "1,0;0,1", "1,0;1,1", "0,2"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "none\n"));
        let o = out(&["--json", "chart-transition", "1,0;0,1", "1,0;1,1", "0,2"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["defined"], Value::Bool(false));
        assert_eq!(v["command"], "chart-transition");
        let o = out(&["--json", "in-image", "0,0;0,0", "0,1"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["defined"], Value::Bool(false));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(out(&["dist", "0,abc", "0,0"]).code, 2);
        assert_eq!(out(&["frobnicate"]).code, 2);
        assert_eq!(out(&["tlen", "1,1;1,1"]).code, 1);
        assert_eq!(out(&["geodesic", "0,0", "1,0", "--t", "2"]).code, 1);
        assert_eq!(out(&["--help"]).code, 0);
    }
}
