//! Acceptance suite: each criterion runs its property suites at full size
//! with a fixed seed and prints one PASS/FAIL line. The process exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tropbuild::building::Lattice;
use tropbuild::cli::{self, Outcome};
use tropbuild::oracle::Grid;
use tropbuild::props::{self, SuiteReport};
use tropbuild::rational::{format_rational, parse_rational};
use tropbuild::trop::{TropMatrix, TropVector};

const SEED: u64 = 20_240_601;

fn rng(criterion: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ (criterion << 32) ^ suite)
}

struct Criterion {
    id: usize,
    title: &'static str,
    reports: Vec<SuiteReport>,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.reports.iter().all(SuiteReport::passed)
    }
}

fn galois() -> Vec<SuiteReport> {
    vec![props::galois_connection(&mut rng(1, 0), 10_000)]
}

fn image() -> Vec<SuiteReport> {
    let grid = Grid::from_env().expect("valid TROPBUILD_GRID");
    vec![props::image_characterization(&mut rng(2, 0), 5, &grid)]
}

fn inversion() -> Vec<SuiteReport> {
    vec![props::inversion_domains(&mut rng(3, 0), 100, 1_000)]
}

fn metric() -> Vec<SuiteReport> {
    vec![
        props::segment_distance(&mut rng(4, 0), 10_000),
        props::triangle_inequality(&mut rng(4, 1), 10_000),
        props::lipschitz(&mut rng(4, 2), 10_000),
        props::contraction(&mut rng(4, 3), 1_000),
    ]
}

fn charts() -> Vec<SuiteReport> {
    vec![props::chart_transitions(&mut rng(5, 0), 50, 20)]
}

fn building() -> Vec<SuiteReport> {
    vec![
        props::building_vs_displacement(&mut rng(6, 0), 200),
        props::isometry(&mut rng(6, 1), 100),
    ]
}

fn translation() -> Vec<SuiteReport> {
    vec![
        props::displacement_lower_bound(&mut rng(7, 0), 50, 20),
        props::attainment(&mut rng(7, 1), 100),
        props::sl2_trace_law(&mut rng(7, 2), 1_000),
    ]
}

fn newton() -> Vec<SuiteReport> {
    vec![props::newton_triangular(&mut rng(8, 0), 1_000)]
}

fn valued_field() -> Vec<SuiteReport> {
    vec![props::valued_field(&mut rng(9, 0), 10_000)]
}

/// How a printed result re-parses.
#[derive(Clone, Copy)]
enum Kind {
    Scalar,
    Vector,
    Matrix,
    Lattice,
    Bool,
    /// Optional vector: `none` or a vector.
    MaybeVector,
    /// `in-image` assignment: `none` or comma-separated indices.
    Assignment,
    /// `word\tlength` lines.
    Table,
}

struct Case {
    args: Vec<String>,
    stdout: &'static str,
    code: i32,
    kind: Kind,
}

fn case(args: &[&str], stdout: &'static str, kind: Kind) -> Case {
    Case { args: args.iter().map(|s| s.to_string()).collect(), stdout, code: 0, kind }
}

fn corpus() -> Vec<Case> {
    let gens = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/sl2.gens");
    vec![
        case(&["trop-mul", "0,2;1,0", "0;0"], "2;1\n", Kind::Matrix),
        case(&["trop-mul", "0,-inf;-inf,0", "3,1;2,-inf"], "3,1;2,-inf\n", Kind::Matrix),
        case(&["apply", "0,2;1,0", "0,0"], "2,1\n", Kind::Vector),
        case(&["apply", "0,-inf;-inf,0", "4,-1"], "4,-1\n", Kind::Vector),
        case(&["apply", "0,2;1,0", "-inf,-inf"], "-inf,-inf\n", Kind::Vector),
        case(&["pinv", "0,2;1,0", "0,0"], "-1,-2\n", Kind::Vector),
        case(&["pinv", "0,-inf;-inf,0", "2,5/2"], "2,5/2\n", Kind::Vector),
        case(&["in-image", "0,-inf;-inf,0", "3,5"], "0,1\n", Kind::Assignment),
        case(&["in-image", "0,2;1,0", "0,0"], "1,0\n", Kind::Assignment),
        case(&["in-image", "0,0;0,0", "0,1"], "none\n", Kind::Assignment),
        case(&["inv-domain", "0,-inf;-inf,0", "0,-inf;-inf,0"], "0,-inf;-inf,0\n", Kind::Matrix),
        case(&["inv-domain", "0,0;-inf,0", "0,0;-inf,0"], "0,0;-inf,0\n", Kind::Matrix),
        case(&["inv-domain", "0,0;-inf,0", "0,0;-inf,0", "--point", "1,0"], "true\n", Kind::Bool),
        case(&["inv-domain", "0,0;-inf,0", "0,0;-inf,0", "--point", "0,1"], "false\n", Kind::Bool),
        case(&["dist", "0,0,0", "0,0,0"], "0\n", Kind::Scalar),
        case(&["dist", "2,0", "0,1"], "3\n", Kind::Scalar),
        case(&["dist", "0,0,0", "3,1,0"], "3\n", Kind::Scalar),
        case(&["dist", "0,0", "3,1"], "2\n", Kind::Scalar),
        case(&["dist", "0,-inf", "0,0"], "inf\n", Kind::Scalar),
        case(&["dist", "0,0,0", "0,-3/2,-3/2"], "3/2\n", Kind::Scalar),
        case(&["dist", "0,-3/2,-3/2", "3,1,0"], "3/2\n", Kind::Scalar),
        case(&["geodesic", "0,0,0", "3,1,0", "--t", "0"], "0,0,0\n", Kind::Vector),
        case(&["geodesic", "0,0,0", "3,1,0", "--t", "1"], "0,-2,-3\n", Kind::Vector),
        case(&["geodesic", "0,0,0", "3,1,0", "--t", "1/2"], "0,-3/2,-3/2\n", Kind::Vector),
        case(&["geodesic", "1,2", "1,2", "--t", "1/3"], "-1,0\n", Kind::Vector),
        case(&["lattice-dist", "1,0;0,1", "1,0;0,1"], "0\n", Kind::Scalar),
        case(&["lattice-dist", "1,0;0,1", "t,0;0,t^-1"], "2\n", Kind::Scalar),
        case(&["chart", "1,0;0,1", "0,0"], "1,0;0,1\n", Kind::Lattice),
        case(&["chart", "1,0;0,1", "1,-1"], "t^-1,0;0,t\n", Kind::Lattice),
        case(&["chart-transition", "1,0;0,1", "1,0;0,1", "2,-1"], "2,-1\n", Kind::MaybeVector),
        case(&["chart-transition", "1,0;0,1", "0,1;1,0", "1,2"], "2,1\n", Kind::MaybeVector),
        case(&["chart-transition", "1,0;0,1", "1,0;1,1", "1,0"], "1,0\n", Kind::MaybeVector),
        case(&["chart-transition", "1,0;0,1", "1,0;1,1", "0,2"], "none\n", Kind::MaybeVector),
        case(&["tlen", "1,0;0,1"], "0\n", Kind::Scalar),
        case(&["tlen", "t^-1,0;0,t"], "2\n", Kind::Scalar),
        case(&["tlen", "1,1;0,1"], "0\n", Kind::Scalar),
        case(&["spectrum", gens, "", "a", "a'", "aa", "bab'"], "1\t0\na\t2\na'\t2\naa\t4\nbab'\t2\n", Kind::Table),
    ]
}

fn run(args: &[String]) -> Outcome {
    cli::run(std::iter::once("tropbuild".to_string()).chain(args.iter().cloned()))
}

/// Re-parses `text` according to `kind` and renders it again.
fn reparse(kind: Kind, text: &str) -> Result<String, String> {
    let err = |e: tropbuild::Error| e.to_string();
    let scalar = |s: &str| -> Result<String, String> {
        if s == "inf" {
            return Ok(s.to_string());
        }
        parse_rational(s).map(|v| format_rational(&v)).map_err(err)
    };
    match kind {
        Kind::Scalar => scalar(text),
        Kind::Vector => text.parse::<TropVector>().map(|v| v.to_string()).map_err(err),
        Kind::Matrix => text.parse::<TropMatrix>().map(|m| m.to_string()).map_err(err),
        Kind::Lattice => text.parse::<Lattice>().map(|l| l.to_string()).map_err(err),
        Kind::Bool => text.parse::<bool>().map(|b| b.to_string()).map_err(|e| e.to_string()),
        Kind::MaybeVector if text == "none" => Ok(text.to_string()),
        Kind::MaybeVector => reparse(Kind::Vector, text),
        Kind::Assignment if text == "none" => Ok(text.to_string()),
        Kind::Assignment => text
            .split(',')
            .map(|s| if s == "-" { Ok(s.to_string()) } else { s.parse::<usize>().map(|k| k.to_string()).map_err(|e| e.to_string()) })
            .collect::<Result<Vec<_>, _>>()
            .map(|v| v.join(",")),
        Kind::Table => text
            .lines()
            .map(|line| {
                let (word, len) = line.split_once('\t').ok_or_else(|| format!("bad row `{line}`"))?;
                Ok(format!("{word}\t{}", scalar(len)?))
            })
            .collect::<Result<Vec<_>, String>>()
            .map(|v| v.join("\n")),
    }
}

fn check_case(c: &Case) -> Result<(), String> {
    let shown = c.args.join(" ");
    let first = run(&c.args);
    let second = run(&c.args);
    if first != second {
        return Err(format!("`{shown}` is not deterministic"));
    }
    if first.code != c.code || first.stdout != c.stdout {
        return Err(format!("`{shown}`: got {:?} (exit {}), want {:?}", first.stdout, first.code, c.stdout));
    }
    let body = first.stdout.trim_end_matches('\n');
    let again = reparse(c.kind, body)?;
    if again != body {
        return Err(format!("`{shown}`: `{body}` re-renders as `{again}`"));
    }
    let mut json_args = vec!["--json".to_string()];
    json_args.extend(c.args.iter().cloned());
    let j1 = run(&json_args);
    if j1 != run(&json_args) || j1.code != c.code {
        return Err(format!("`--json {shown}` is not deterministic or changed exit code"));
    }
    let v: Value = serde_json::from_str(&j1.stdout).map_err(|e| format!("`--json {shown}`: {e}"))?;
    let partial = matches!(c.kind, Kind::MaybeVector | Kind::Assignment);
    let defined_ok = !partial || v.get("defined") == Some(&Value::Bool(body != "none"));
    if v["command"] != c.args[0] || v.get("result").is_none() || !defined_ok {
        return Err(format!("`--json {shown}`: unexpected document {}", j1.stdout.trim_end()));
    }
    Ok(())
}

/// Every corpus invocation twice (text and JSON), plus exit codes for
/// malformed and out-of-domain input.
fn cli_corpus() -> Vec<SuiteReport> {
    let mut cases = corpus();
    let err = |args: &[&str], code| Case { code, ..case(args, "", Kind::Scalar) };
    cases.extend([
        err(&["dist", "0,abc", "0,0"], 2),
        err(&["tlen", "1,1;1,1"], 1),
        err(&["geodesic", "0,0", "1,0", "--t", "2"], 1),
        err(&["pinv", "0,2", "0,0"], 1),
    ]);
    let mut failures = Vec::new();
    for c in &cases {
        let outcome = if c.code == 0 {
            check_case(c)
        } else {
            let (a, b) = (run(&c.args), run(&c.args));
            let single_line = a.stderr.trim_end().lines().count() == 1;
            if a == b && a.code == c.code && a.stdout.is_empty() && single_line {
                Ok(())
            } else {
                Err(format!("`{}`: exit {} stderr {:?}", c.args.join(" "), a.code, a.stderr))
            }
        };
        if let Err(e) = outcome {
            failures.push(e);
        }
    }
    vec![SuiteReport {
        name: "CLI corpus determinism and round-trip",
        trials: cases.len(),
        failures: failures.len(),
        first_failure: failures.into_iter().next(),
        detail: None,
    }]
}

fn main() -> ExitCode {
    type Runner = fn() -> Vec<SuiteReport>;
    let plan: [(&str, Runner); 10] = [
        ("residuation Galois connection", galois),
        ("image characterization", image),
        ("inversion-domain equations", inversion),
        ("metric consistency", metric),
        ("chart transitions", charts),
        ("building metric", building),
        ("translation length", translation),
        ("Newton polygon convention", newton),
        ("valued-field axioms", valued_field),
        ("CLI determinism and round-trip", cli_corpus),
    ];
    let start = Instant::now();
    let criteria: Vec<Criterion> = thread::scope(|s| {
        let handles: Vec<_> = plan
            .iter()
            .enumerate()
            .map(|(i, &(title, f))| (i + 1, title, s.spawn(f)))
            .collect();
        handles
            .into_iter()
            .map(|(id, title, h)| Criterion { id, title, reports: h.join().expect("criterion panicked") })
            .collect()
    });
    let mut all = true;
    for c in &criteria {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {}", c.id, c.title);
        for r in &c.reports {
            println!("    {r}");
        }
        all &= c.passed();
    }
    let passed = criteria.iter().filter(|c| c.passed()).count();
    println!("{passed}/{} acceptance criteria passed in {:.1?}", criteria.len(), start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
