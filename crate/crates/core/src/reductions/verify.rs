//! End-to-end checks of each reduction identity against the brute-force
//! graph oracles.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{self, Certificate, Graph};
use crate::manifolds::{self, FlagSignature};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};

use super::{build, decode, exact, Instance, DEFAULT_DECODE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    StiefelLp,
    GrassmannFeas,
    FlagFeas,
    StiefelQp,
    FlagQp,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::StiefelLp,
        Theorem::GrassmannFeas,
        Theorem::FlagFeas,
        Theorem::StiefelQp,
        Theorem::FlagQp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::StiefelLp => "stiefel-lp",
            Self::GrassmannFeas => "grassmann-feas",
            Self::FlagFeas => "flag-feas",
            Self::StiefelQp => "stiefel-qp",
            Self::FlagQp => "flag-qp",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem {s:?}")))
    }
}

/// Reduction parameters: `n` for the Stiefel families, `k` for Grassmann,
/// `sig` for the flag families.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub sig: Option<FlagSignature>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportValue {
    Number(Rational),
    Bool(bool),
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Self::Number(r) => f.write_str(&rational::display(r)),
            Self::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for ReportValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Number(r) => rational::pair::serialize(r, serializer),
            Self::Bool(b) => serializer.serialize_bool(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub graph_id: String,
    pub m: usize,
    pub edges: usize,
    pub theorem: String,
    /// `α`, `κ` or `ω`.
    pub oracle: usize,
    pub predicted: ReportValue,
    pub computed: ReportValue,
    pub pass: bool,
    pub certificate: Option<Certificate>,
    pub certificate_valid: bool,
    /// Wall time; kept out of JSON so repeated runs print identical output.
    #[serde(skip)]
    pub millis: f64,
}

impl VerificationReport {
    pub const CSV_HEADER: &'static str = "graph_id,m,edges,theorem,oracle,predicted,computed,pass,millis";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.3}",
            self.graph_id, self.m, self.edges, self.theorem, self.oracle, self.predicted, self.computed, self.pass, self.millis
        )
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join("|")
}

fn sig_label(sig: &FlagSignature) -> String {
    format!("ks={} a={}", join(sig.ks()), join(sig.params().iter().map(rational::display)))
}

fn require<T: Clone>(value: &Option<T>, what: &str, theorem: Theorem) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| Error::InvalidArgument(format!("{theorem} needs {what}")))
}

/// The parameter values checked for `g` when none are given: `n ∈ {k, k+2}`
/// for the Stiefel families, every `k ∈ 1..=m` for Grassmann, and every
/// default-parameter signature with `p ∈ {1, 2}` and `k_p <= m − 1` for the
/// flag families (for the clique QP, only those with `ω` above the threshold
/// index).
pub fn parameter_sweep(g: &Graph, theorem: Theorem) -> Result<Vec<VerifyOptions>> {
    let m = g.m();
    let with_sig = |sig| VerifyOptions {
        sig: Some(sig),
        ..Default::default()
    };
    Ok(match theorem {
        Theorem::StiefelLp | Theorem::StiefelQp => [m, m + 2]
            .into_iter()
            .map(|n| VerifyOptions {
                n: Some(n),
                ..Default::default()
            })
            .collect(),
        Theorem::GrassmannFeas => (1..=m)
            .map(|k| VerifyOptions {
                k: Some(k),
                ..Default::default()
            })
            .collect(),
        Theorem::FlagFeas => {
            let mut out = Vec::new();
            for p in [1, 2] {
                out.extend(manifolds::default_signatures(m, p)?.into_iter().map(with_sig));
            }
            out
        }
        Theorem::FlagQp => {
            let (omega, _) = graphs::clique_number(g)?;
            let mut out = Vec::new();
            for p in [1, 2] {
                for sig in manifolds::default_signatures(m, p)? {
                    if omega > manifolds::threshold_k(&sig)? {
                        out.push(with_sig(sig));
                    }
                }
            }
            out
        }
    })
}

struct Outcome {
    label: String,
    oracle: usize,
    predicted: ReportValue,
    computed: ReportValue,
    extra_checks: bool,
    certificate: Option<Certificate>,
    certificate_valid: bool,
}

/// Decodes `x` and checks the certificate size against `expected`.
fn decoded(inst: &Instance, x: Option<&Matrix>, g: &Graph, expected: usize) -> (Option<Certificate>, bool) {
    match x.map(|x| decode::decode_certificate(inst, x, g, DEFAULT_DECODE_TOL)) {
        Some(Ok(cert)) => {
            let ok = cert.size == expected;
            (Some(cert), ok)
        }
        Some(Err(_)) | None => (None, false),
    }
}

fn as_number(r: Rational) -> ReportValue {
    ReportValue::Number(r)
}

fn stiefel_lp(g: &Graph, opts: &VerifyOptions) -> Result<Outcome> {
    let k = g.m();
    let n = opts.n.unwrap_or(k);
    let (alpha, _) = graphs::stability_number(g)?;
    let inst: Instance = build::build_stiefel_lp(g, n)?.into();
    let sol = exact::solve_stiefel_diag_exact(&inst)?;
    let (certificate, certificate_valid) = decoded(&inst, sol.as_ref().map(|s| &s.point), g, alpha);
    let computed = match &sol {
        Some(s) => as_number(s.value),
        None => ReportValue::Bool(false),
    };
    Ok(Outcome {
        label: format!("stiefel-lp n={n}"),
        oracle: alpha,
        predicted: as_number(rational::int(2 * alpha as i64 - k as i64)),
        computed,
        extra_checks: true,
        certificate,
        certificate_valid,
    })
}

fn stiefel_qp(g: &Graph, opts: &VerifyOptions) -> Result<Outcome> {
    let k = g.m();
    let n = opts.n.unwrap_or(k);
    let (kappa, _) = graphs::max_cut(g)?;
    let quad = build::build_stiefel_qp(g, n)?;
    let unit_diagonal = (0..k).all(|i| quad.w.get(i, i) == 1.0);
    let (hypercube, _) = exact::solve_hypercube_qp_exact(&quad.w)?;
    let inst: Instance = quad.into();
    let sol = exact::solve_stiefel_diag_exact(&inst)?.expect("unconstrained QP has an optimum");
    let (certificate, certificate_valid) = decoded(&inst, Some(&sol.point), g, kappa);
    let predicted = rational::int(4 * kappa as i64 - 2 * g.edge_count_undirected() as i64 + k as i64);
    Ok(Outcome {
        label: format!("stiefel-qp n={n}"),
        oracle: kappa,
        predicted: as_number(predicted),
        computed: as_number(sol.value),
        extra_checks: unit_diagonal && hypercube == sol.value,
        certificate,
        certificate_valid,
    })
}

fn grassmann_feas(g: &Graph, opts: &VerifyOptions) -> Result<Outcome> {
    let k = require(&opts.k, "--k", Theorem::GrassmannFeas)?;
    let (alpha, _) = graphs::stability_number(g)?;
    let lin = build::build_grassmann_feasibility(g, k)?;
    let feas = exact::check_feasibility_exact(&lin)?;
    let inst: Instance = lin.into();
    let (certificate, mut certificate_valid) = decoded(&inst, feas.witness.as_ref(), g, k);
    if !feas.feasible {
        certificate_valid = true;
    }
    Ok(Outcome {
        label: format!("grassmann-feas k={k}"),
        oracle: alpha,
        predicted: ReportValue::Bool(alpha >= k),
        computed: ReportValue::Bool(feas.feasible),
        extra_checks: true,
        certificate,
        certificate_valid,
    })
}

fn flag_feas(g: &Graph, opts: &VerifyOptions) -> Result<Outcome> {
    let sig = require(&opts.sig, "--sig", Theorem::FlagFeas)?;
    let (alpha, _) = graphs::stability_number(g)?;
    let rules = sig.check_lp_reduction_rules().is_ok();
    let kp = sig.largest_dim();
    let lin = build::build_flag_feasibility(g, &sig)?;
    let feas = exact::check_feasibility_exact(&lin)?;
    let inst: Instance = lin.into();
    let (certificate, mut certificate_valid) = decoded(&inst, feas.witness.as_ref(), g, kp);
    if !feas.feasible {
        certificate_valid = true;
    }
    Ok(Outcome {
        label: format!("flag-feas {}", sig_label(&sig)),
        oracle: alpha,
        predicted: ReportValue::Bool(alpha >= kp),
        computed: ReportValue::Bool(feas.feasible),
        extra_checks: rules,
        certificate,
        certificate_valid,
    })
}

fn flag_qp(g: &Graph, opts: &VerifyOptions) -> Result<Outcome> {
    let sig = require(&opts.sig, "--sig", Theorem::FlagQp)?;
    let (omega, _) = graphs::clique_number(g)?;
    let bn = manifolds::trace_constant(&sig);
    let predicted = bn * bn * (rational::int(1) - rational::frac(1, omega as i64));
    let quad = build::build_flag_qp(g, &sig)?;
    let witness = decode::flag_qp_witness_exact(g, &sig)?;
    let computed = manifolds::exact_quadratic_form(&quad.w, &witness)
        .ok_or_else(|| Error::Unsupported("weights have no exact rational form".into()))?;
    let vertices_bounded = if sig.n() <= manifolds::MAX_PERMUTOHEDRON_DIM {
        let mut ok = true;
        for v in manifolds::permutohedron_vertices(&sig)? {
            ok &= graphs::directed_pair_sum(g, &v) <= predicted;
        }
        ok
    } else {
        true
    };
    let x = decode::flag_qp_witness(g, &sig)?;
    let inst: Instance = quad.into();
    let (certificate, certificate_valid) = decoded(&inst, Some(&x), g, omega);
    Ok(Outcome {
        label: format!("flag-qp {}", sig_label(&sig)),
        oracle: omega,
        predicted: as_number(predicted),
        computed: as_number(computed),
        extra_checks: vertices_bounded,
        certificate,
        certificate_valid,
    })
}

/// Builds the reduction of `g` for `theorem`, solves it exactly, compares the
/// result with the identity predicted from the oracle value, and decodes the
/// certificate. `pass` requires exact equality, the family-specific side
/// checks, and a valid certificate of the right size.
pub fn verify_theorem(graph_id: &str, g: &Graph, theorem: Theorem, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let out = match theorem {
        Theorem::StiefelLp => stiefel_lp(g, opts),
        Theorem::GrassmannFeas => grassmann_feas(g, opts),
        Theorem::FlagFeas => flag_feas(g, opts),
        Theorem::StiefelQp => stiefel_qp(g, opts),
        Theorem::FlagQp => flag_qp(g, opts),
    }?;
    Ok(VerificationReport {
        graph_id: graph_id.to_string(),
        m: g.m(),
        edges: g.edge_count_undirected(),
        theorem: out.label,
        oracle: out.oracle,
        pass: out.predicted == out.computed && out.extra_checks && out.certificate_valid,
        predicted: out.predicted,
        computed: out.computed,
        certificate: out.certificate,
        certificate_valid: out.certificate_valid,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Options to check for one graph: the full sweep when `sweep` is set or the
/// parameter the theorem needs is missing; otherwise `opts`, adapted to the
/// graph's size and dropped where it does not apply.
fn options_for(g: &Graph, theorem: Theorem, opts: &VerifyOptions, sweep: bool) -> Result<Vec<VerifyOptions>> {
    let missing = match theorem {
        Theorem::StiefelLp | Theorem::StiefelQp => opts.n.is_none(),
        Theorem::GrassmannFeas => opts.k.is_none(),
        Theorem::FlagFeas | Theorem::FlagQp => opts.sig.is_none(),
    };
    if sweep || missing {
        return parameter_sweep(g, theorem);
    }
    let applicable = match theorem {
        Theorem::StiefelLp | Theorem::StiefelQp => opts.n.is_some_and(|n| n >= g.m()),
        Theorem::GrassmannFeas => opts.k.is_some_and(|k| (1..=g.m()).contains(&k)),
        Theorem::FlagFeas | Theorem::FlagQp => {
            let Ok(sig) = opts.sig.as_ref().expect("checked above").with_ambient(g.m()) else {
                return Ok(Vec::new());
            };
            let fits = theorem == Theorem::FlagFeas
                || graphs::clique_number(g)?.0 > manifolds::threshold_k(&sig).unwrap_or(usize::MAX);
            if !fits {
                return Ok(Vec::new());
            }
            return Ok(vec![VerifyOptions {
                sig: Some(sig),
                ..opts.clone()
            }]);
        }
    };
    Ok(if applicable { vec![opts.clone()] } else { Vec::new() })
}

/// Verifies `theorem` on every graph of `family`, in parallel over graphs
/// when `jobs != 1` (`0` uses every core). Reports come back in family order.
pub fn verify_sweep(
    family: &[(String, Graph)],
    theorem: Theorem,
    opts: &VerifyOptions,
    sweep: bool,
    jobs: usize,
) -> Result<Vec<VerificationReport>> {
    let one = |(id, g): &(String, Graph)| -> Result<Vec<VerificationReport>> {
        options_for(g, theorem, opts, sweep)?
            .iter()
            .map(|o| verify_theorem(id, g, theorem, o))
            .collect()
    };
    let nested: Vec<Vec<VerificationReport>> = if jobs == 1 {
        family.iter().map(one).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| family.par_iter().map(one).collect::<Result<_>>())?
    };
    Ok(nested.into_iter().flatten().collect())
}
