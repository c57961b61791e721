//! Command-line surface. [`run`] parses an argument list, dispatches to the
//! library and returns the exit code with the text destined for standard
//! output and standard error; the binary only prints it.
//!
//! Exit codes: 0 success or every check passed, 1 a check failed or a
//! numerical error occurred, 2 usage or input error, 3 capacity exceeded.
//! Results are JSON on standard output (CSV goes to the `report` file);
//! errors print a message on standard error and `{"error", "message"}` on
//! standard output.
//!
//! Graph arguments are DIMACS files or generator specs (`complete:5`,
//! `cycle:6`, `random:7:seed=3:p=1/2`). Signatures are inline JSON or a path
//! to a JSON file, e.g. `{"ks": [1, 2], "params": ["2", "3/2", "0"]}`; a
//! missing `n` is taken from the graph or matrix, missing `params` from the
//! default parameters.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closedform;
use crate::error::{Error, Result};
use crate::graphs::{self, Graph, GraphFamily};
use crate::manifolds::{self, FlagSignature};
use crate::matrix::Matrix;
use crate::rational;
use crate::reductions::{self, Instance, Theorem, VerificationReport, VerifyOptions};
use crate::riemannian::{self, AscentConfig};
use crate::rng::XorShift64Star;

#[derive(Debug, Parser)]
#[command(name = "manifold-hardness", version, about = "Graph-to-manifold reductions with exact verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Alpha,
    Kappa,
    Omega,
    Ms,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Brute-force graph invariant with a witness.
    Oracle {
        graph: String,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Build a reduction instance and write it as JSON.
    Reduce {
        graph: String,
        #[arg(long)]
        theorem: Theorem,
        /// Stiefel ambient dimension (default: the vertex count).
        #[arg(long)]
        n: Option<usize>,
        /// Grassmann dimension.
        #[arg(long)]
        k: Option<usize>,
        /// Stiefel LP only: add the cut for "α >= r".
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        sig: Option<String>,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance file exactly.
    SolveExact { instance: PathBuf },
    /// Multi-start Riemannian gradient ascent on an instance file.
    SolveRiemannian {
        instance: PathBuf,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 1e-8)]
        grad_tol: f64,
    },
    /// Closed-form maximum of tr(AᵀX) over a flag manifold.
    ClosedForm {
        /// JSON file with the dense rows of A.
        #[arg(long, conflicts_with = "random")]
        matrix: Option<PathBuf>,
        /// Use a seeded Gaussian N x N matrix instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sig: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check a reduction identity on one graph or a family.
    Verify {
        #[arg(required_unless_present = "family", conflicts_with = "family")]
        graph: Option<String>,
        /// `all:M`, `iso:M` or `random:M:count=C:seed=S[:p=P]`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        theorem: Theorem,
        /// Sweep every admissible parameter value.
        #[arg(long)]
        all_k: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        sig: Option<String>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Verify every theorem over a family and write a CSV report.
    Report {
        #[arg(long)]
        family: String,
        /// Restrict to one theorem.
        #[arg(long)]
        theorem: Option<Theorem>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

impl clap::builder::ValueParserFactory for Theorem {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Theorem>().map_err(|e| e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Numerical { .. } | Error::RankDeficient { .. } | Error::Decode(_) | Error::Ambiguous { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Capacity { .. } => "capacity",
        Error::Dimension(_) => "dimension",
        Error::Numerical { .. } => "numerical",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::Domain(_) => "domain",
        Error::Infeasible(_) => "infeasible",
        Error::ParameterRule(_) => "parameter_rule",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Decode(_) => "decode",
        Error::Ambiguous { .. } => "ambiguous",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: pretty(&json!({"error": "usage", "message": e.kind().to_string()})),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: pretty(&json!({"error": error_kind(&e), "message": e.to_string()})),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// A generator spec, or a DIMACS file when one exists at that path.
pub fn load_graph(arg: &str) -> Result<Graph> {
    let path = Path::new(arg);
    if path.is_file() {
        Graph::parse_dimacs(&std::fs::read_to_string(path)?)
    } else {
        graphs::parse_generator_spec(arg)
    }
}

fn read_json_arg(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Parses a signature argument, filling a missing `n` from `default_n` (or
/// the smallest admissible ambient dimension) and missing `params` from the
/// defaults. Parameters may be `[num, den]`
/// pairs, integers or strings such as `"3/2"`.
pub fn parse_signature(arg: &str, default_n: Option<usize>) -> Result<FlagSignature> {
    let mut v = read_json_arg(arg)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Error::InvalidArgument("signature must be a JSON object".into()))?;
    if !obj.contains_key("n") {
        let smallest = obj
            .get("ks")
            .and_then(Value::as_array)
            .and_then(|ks| ks.iter().filter_map(Value::as_u64).max())
            .map(|k| k as usize + 1);
        let n = default_n
            .or(smallest)
            .ok_or_else(|| Error::InvalidArgument("signature needs \"n\"".into()))?;
        obj.insert("n".into(), json!(n));
    }
    match obj.get("params") {
        None => {
            let p = obj
                .get("ks")
                .and_then(Value::as_array)
                .map(Vec::len)
                .ok_or_else(|| Error::InvalidArgument("signature needs \"ks\"".into()))?;
            let params = manifolds::default_parameters(p)?;
            obj.insert("params".into(), json!(params.iter().map(|r| [*r.numer(), *r.denom()]).collect::<Vec<_>>()));
        }
        Some(Value::Array(items)) => {
            let normalized = items
                .iter()
                .map(|item| match item {
                    Value::Array(_) => Ok(item.clone()),
                    Value::Number(n) => n
                        .as_i64()
                        .map(|n| json!([n, 1]))
                        .ok_or_else(|| Error::InvalidArgument(format!("parameter {n} is not an integer; use \"p/q\""))),
                    Value::String(s) => rational::parse(s)
                        .map(|r| json!([*r.numer(), *r.denom()]))
                        .ok_or_else(|| Error::InvalidArgument(format!("bad parameter {s:?}"))),
                    other => Err(Error::InvalidArgument(format!("bad parameter {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            obj.insert("params".into(), Value::Array(normalized));
        }
        Some(other) => return Err(Error::InvalidArgument(format!("bad params {other}"))),
    }
    Ok(serde_json::from_value(v)?)
}

fn read_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&std::fs::read_to_string(path)?)
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    match command {
        Command::Oracle { graph, which } => oracle(&load_graph(&graph)?, which).map(|v| (EXIT_OK, pretty(&v))),
        Command::Reduce {
            graph,
            theorem,
            n,
            k,
            r,
            sig,
            output,
        } => {
            let g = load_graph(&graph)?;
            let sig = sig.map(|s| parse_signature(&s, Some(g.m()))).transpose()?;
            let inst = build_instance(&g, theorem, n, k, r, sig.as_ref())?;
            let text = inst.to_json()? + "\n";
            match output {
                None => Ok((EXIT_OK, text)),
                Some(path) => {
                    std::fs::write(&path, text)?;
                    Ok((
                        EXIT_OK,
                        pretty(&json!({
                            "output": path.display().to_string(),
                            "kind": match inst { Instance::Linear(_) => "linear", Instance::Quadratic(_) => "quadratic" },
                            "manifold": inst.manifold().name(),
                        })),
                    ))
                }
            }
        }
        Command::SolveExact { instance } => {
            let inst = read_instance(&instance)?;
            Ok((EXIT_OK, pretty(&reductions::solve_exact(&inst)?.to_json())))
        }
        Command::SolveRiemannian {
            instance,
            restarts,
            seed,
            max_iters,
            step,
            grad_tol,
        } => {
            let inst = read_instance(&instance)?;
            let cfg = AscentConfig {
                step,
                max_iters,
                grad_tol,
                restarts,
                seed,
            };
            Ok((EXIT_OK, pretty(&riemannian::ascend(&inst, &cfg)?)))
        }
        Command::ClosedForm {
            matrix,
            random,
            seed,
            sig,
            tol,
        } => {
            let a = match (matrix, random) {
                (Some(path), _) => {
                    let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    Matrix::from_rows(rows)?
                }
                (None, Some(n)) => random_matrix(n, seed),
                (None, None) => return Err(Error::InvalidArgument("closed-form needs --matrix or --random".into())),
            };
            let sig = parse_signature(&sig, Some(a.rows()))?;
            Ok((EXIT_OK, pretty(&closedform::solve_flag_lp(&a, &sig, tol)?)))
        }
        Command::Verify {
            graph,
            family,
            theorem,
            all_k,
            n,
            k,
            sig,
            jobs,
        } => {
            let graphs = match (&graph, &family) {
                (Some(spec), _) => vec![(spec.clone(), load_graph(spec)?)],
                (None, Some(f)) => f.parse::<GraphFamily>()?.graphs()?,
                (None, None) => unreachable!("clap requires one"),
            };
            let default_n = graph.as_ref().map(|_| graphs[0].1.m());
            let opts = VerifyOptions {
                n,
                k,
                sig: sig.map(|s| parse_signature(&s, default_n)).transpose()?,
            };
            let explicit = match theorem {
                Theorem::StiefelLp | Theorem::StiefelQp => true,
                Theorem::GrassmannFeas => opts.k.is_some(),
                Theorem::FlagFeas | Theorem::FlagQp => opts.sig.is_some(),
            };
            let reports = if graph.is_some() && explicit && !all_k {
                let (id, g) = &graphs[0];
                vec![reductions::verify_theorem(id, g, theorem, &opts)?]
            } else {
                reductions::verify_sweep(&graphs, theorem, &opts, all_k, jobs)?
            };
            let summary = verify_summary(theorem, &reports);
            let code = if summary["pass"] == Value::Bool(true) { EXIT_OK } else { EXIT_FAIL };
            Ok((code, pretty(&summary)))
        }
        Command::Report {
            family,
            theorem,
            output,
            jobs,
        } => {
            let graphs = family.parse::<GraphFamily>()?.graphs()?;
            let theorems: Vec<Theorem> = theorem.map_or(Theorem::ALL.to_vec(), |t| vec![t]);
            let mut csv = String::from(VerificationReport::CSV_HEADER);
            csv.push('\n');
            let (mut rows, mut failures) = (0usize, 0usize);
            for t in theorems {
                for r in reductions::verify_sweep(&graphs, t, &VerifyOptions::default(), true, jobs)? {
                    csv.push_str(&r.csv_row());
                    csv.push('\n');
                    rows += 1;
                    failures += usize::from(!r.pass);
                }
            }
            std::fs::write(&output, csv)?;
            let code = if failures == 0 { EXIT_OK } else { EXIT_FAIL };
            Ok((
                code,
                pretty(&json!({"output": output.display().to_string(), "rows": rows, "failures": failures})),
            ))
        }
    }
}

fn oracle(g: &Graph, which: Which) -> Result<Value> {
    let (value, cert) = match which {
        Which::Alpha => {
            let (a, c) = graphs::stability_number(g)?;
            (json!(a), c)
        }
        Which::Kappa => {
            let (k, c) = graphs::max_cut(g)?;
            (json!(k), c)
        }
        Which::Omega => {
            let (w, c) = graphs::clique_number(g)?;
            (json!(w), c)
        }
        Which::Ms => {
            let v = graphs::motzkin_straus_value(g)?;
            let (_, c) = graphs::clique_number(g)?;
            (json!([v.numer(), v.denom()]), c)
        }
    };
    Ok(json!({"value": value, "witness": cert.labels()}))
}

/// Seeded `n x n` matrix of standard normal entries, row-major.
pub fn random_matrix(n: usize, seed: u64) -> Matrix {
    let mut rng = XorShift64Star::new(seed);
    Matrix::from_row_major(n, n, (0..n * n).map(|_| rng.next_normal()).collect()).expect("shape matches")
}

fn build_instance(
    g: &Graph,
    theorem: Theorem,
    n: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    sig: Option<&FlagSignature>,
) -> Result<Instance> {
    let need_sig = || sig.ok_or_else(|| Error::InvalidArgument(format!("{theorem} needs --sig")));
    let n = n.unwrap_or(g.m());
    Ok(match theorem {
        Theorem::StiefelLp => match r {
            Some(r) => reductions::build_stiefel_feasibility(g, n, r)?.into(),
            None => reductions::build_stiefel_lp(g, n)?.into(),
        },
        Theorem::GrassmannFeas => {
            let k = k.ok_or_else(|| Error::InvalidArgument("grassmann-feas needs --k".into()))?;
            reductions::build_grassmann_feasibility(g, k)?.into()
        }
        Theorem::FlagFeas => reductions::build_flag_feasibility(g, need_sig()?)?.into(),
        Theorem::StiefelQp => reductions::build_stiefel_qp(g, n)?.into(),
        Theorem::FlagQp => reductions::build_flag_qp(g, need_sig()?)?.into(),
    })
}

fn verify_summary(theorem: Theorem, reports: &[VerificationReport]) -> Value {
    let failures = reports.iter().filter(|r| !r.pass).count();
    json!({
        "theorem": theorem.name(),
        "count": reports.len(),
        "failures": failures,
        "pass": failures == 0,
        "reports": reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("manifold-hardness").chain(args.iter().copied()))
    }

    fn stdout_json(o: &Outcome) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = go(&["oracle", "complete:3", "--which", "kappa"]);
        assert_eq!(o.code, 0);
        assert_eq!(stdout_json(&o), json!({"value": 2, "witness": [1]}));
        let o = go(&["oracle", "cycle:5", "--which", "ms"]);
        assert_eq!(stdout_json(&o)["value"], json!([1, 2]));
    }

    #[test]
    fn verify_example() {
        let o = go(&["verify", "complete:3", "--theorem", "stiefel-qp"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v = stdout_json(&o);
        assert_eq!(v["reports"][0]["predicted"], json!([5, 1]));
        assert_eq!(v["reports"][0]["computed"], json!([5, 1]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["oracle", "complete:3"]).code, EXIT_USAGE);
        assert_eq!(go(&["oracle", "wheel:3", "--which", "alpha"]).code, EXIT_USAGE);
        assert_eq!(go(&["oracle", "complete:30", "--which", "alpha"]).code, EXIT_CAPACITY);
        let o = go(&["verify", "cycle:5", "--theorem", "flag-qp", "--sig", r#"{"ks":[2],"params":[1,0]}"#]);
        assert_eq!(o.code, EXIT_USAGE);
        assert_eq!(stdout_json(&o)["error"], json!("precondition"));
        assert_eq!(go(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn signature_arguments() {
        let s = parse_signature(r#"{"ks":[1,2],"params":["2","3/2",0]}"#, Some(4)).unwrap();
        assert_eq!(s, FlagSignature::new(4, vec![1, 2], vec![rational::int(2), rational::frac(3, 2), rational::int(0)]).unwrap());
        let d = parse_signature(r#"{"n":5,"ks":[1,3]}"#, None).unwrap();
        assert_eq!(d, FlagSignature::with_default_parameters(5, vec![1, 3]).unwrap());
        assert_eq!(parse_signature(r#"{"ks":[1,3]}"#, None).unwrap().n(), 4);
        assert!(parse_signature(r#"{"params":[1,0]}"#, None).is_err());
        assert!(parse_signature("[1]", Some(2)).is_err());
    }

    #[test]
    fn closed_form_random() {
        let o = go(&["closed-form", "--random", "4", "--seed", "2", "--sig", r#"{"ks":[1,2]}"#]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(stdout_json(&o)["residuals"]["objective"].as_f64().unwrap() < 1e-9);
    }
}
