//! Acceptance gate: one PASS/FAIL line per criterion, with its wall time
//! against the budget. Run with `cargo test --test acceptance`; pass criterion
//! numbers as arguments (`-- 5 7`) to run a subset.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use manifold_hardness::closedform::{permutation_oracle_flag_lp, solve_flag_lp};
use manifold_hardness::graphs::{self, Graph, GraphFamily};
use manifold_hardness::manifolds::{self, FlagSignature, ManifoldDescriptor};
use manifold_hardness::matrix::{self, Matrix, SymmetricMatrix};
use manifold_hardness::rational::{self, Rational};
use manifold_hardness::reductions::{self, Instance, Theorem, VerifyOptions};
use manifold_hardness::riemannian::{self, AscentConfig, AscentProblem};
use manifold_hardness::rng::XorShift64Star;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const CORPUS_SEED: u64 = 20240601;

/// Every labeled graph on at most 5 vertices plus 50 seeded graphs at each of
/// 6, 7 and 8 vertices.
fn corpus() -> Vec<(String, Graph)> {
    let mut out = GraphFamily::AllLabeled { max_m: 5 }.graphs().unwrap();
    for m in 6..=8 {
        let family = GraphFamily::Seeded {
            m,
            count: 50,
            seed: CORPUS_SEED + m as u64,
            edge_prob: rational::frac(1, 2),
        };
        out.extend(family.graphs().unwrap());
    }
    out
}

fn sweep_identity(theorem: Theorem) -> Outcome {
    let graphs = corpus();
    let reports = reductions::verify_sweep(&graphs, theorem, &VerifyOptions::default(), true, 1)
        .map_err(|e| e.to_string())?;
    let failures: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    let five = graphs.iter().filter(|(_, g)| g.m() == 5).count();
    if five != 1024 {
        return Err(format!("expected 1024 graphs on 5 vertices, found {five}"));
    }
    match failures.first() {
        None => Ok(format!("{} instances on {} graphs, all exact", reports.len(), graphs.len())),
        Some(r) => Err(format!(
            "{} of {} failed; first {} {}: predicted {} computed {}",
            failures.len(),
            reports.len(),
            r.graph_id,
            r.theorem,
            r.predicted,
            r.computed
        )),
    }
}

fn c1_stiefel_lp() -> Outcome {
    sweep_identity(Theorem::StiefelLp)
}

fn c2_grassmann() -> Outcome {
    sweep_identity(Theorem::GrassmannFeas)
}

fn c3_flag_feasibility() -> Outcome {
    let mut sigs = 0;
    for m in 1..=8 {
        for p in [1, 2] {
            for sig in manifolds::default_signatures(m, p).unwrap() {
                sig.check_lp_reduction_rules()
                    .map_err(|e| format!("{sig:?}: {e}"))?;
                let a = sig.params();
                if a[p] != Rational::from_integer(0) || (1..=p).any(|j| a[j - 1] <= a[j]) {
                    return Err(format!("{sig:?}: parameters not strictly descending to 0"));
                }
                if a[0] >= rational::int(2) * a[p - 1] {
                    return Err(format!("{sig:?}: a_1 < 2 a_p fails"));
                }
                sigs += 1;
            }
        }
    }
    sweep_identity(Theorem::FlagFeas).map(|s| format!("{s}; parameter rules hold on {sigs} signatures"))
}

fn c4_stiefel_qp() -> Outcome {
    let graphs = corpus();
    for (id, g) in &graphs {
        for n in [g.m(), g.m() + 2] {
            let q = reductions::build_stiefel_qp(g, n).unwrap();
            if (0..g.m()).any(|i| q.w.get(i, i) != 1.0) {
                return Err(format!("{id}: diagonal of I - A is not all ones"));
            }
        }
    }
    sweep_identity(Theorem::StiefelQp).map(|s| format!("{s}; hypercube maxima agree, diag(I - A) = 1"))
}

const RANDOM_FLAG_POINTS: u64 = 500;

fn c5_flag_qp() -> Outcome {
    let graphs = GraphFamily::NonIsomorphic { max_m: 6 }.graphs().unwrap();
    let cfg = AscentConfig {
        seed: 7,
        ..AscentConfig::default()
    };
    let (mut instances, mut attained, mut worst_excess) = (0usize, 0usize, f64::NEG_INFINITY);
    for (id, g) in &graphs {
        let (omega, _) = graphs::clique_number(g).unwrap();
        for p in [1, 2] {
            for sig in manifolds::default_signatures(g.m(), p).unwrap() {
                if omega <= manifolds::threshold_k(&sig).unwrap() {
                    continue;
                }
                instances += 1;
                let bn = manifolds::trace_constant(&sig);
                let value = bn * bn * (rational::int(1) - rational::frac(1, omega as i64));
                let witness = reductions::flag_qp_witness_exact(g, &sig).map_err(|e| format!("{id}: {e}"))?;
                if graphs::directed_pair_sum(g, &witness) != value {
                    return Err(format!("{id} {sig:?}: witness objective differs from b_n^2 (1 - 1/omega)"));
                }
                if reductions::flag_qp_value(g, &sig).unwrap() != value {
                    return Err(format!("{id} {sig:?}: flag_qp_value disagrees"));
                }
                for v in manifolds::permutohedron_vertices(&sig).unwrap() {
                    if graphs::directed_pair_sum(g, &v) > value {
                        return Err(format!("{id} {sig:?}: permutohedron vertex exceeds the value"));
                    }
                }
                let vf = rational::to_f64(&value);
                let w = g.adjacency_matrix();
                let d = ManifoldDescriptor::flag(sig.clone());
                for s in 0..RANDOM_FLAG_POINTS {
                    let x = manifolds::random_point(&d, 1_000_000 * instances as u64 + s).unwrap();
                    if w.quadratic_form(&matrix::diag_vector(&x)) > vf + 1e-8 {
                        return Err(format!("{id} {sig:?}: random flag point exceeds the value"));
                    }
                }
                let inst: Instance = reductions::build_flag_qp(g, &sig).unwrap().into();
                let trace = riemannian::ascend(&inst, &cfg).map_err(|e| e.to_string())?;
                worst_excess = worst_excess.max(trace.best_value - vf);
                if trace.best_value > vf + 1e-6 {
                    return Err(format!("{id} {sig:?}: ascent reached {} above {vf}", trace.best_value));
                }
                if (trace.best_value - vf).abs() <= 1e-4 {
                    attained += 1;
                }
            }
        }
    }
    let rate = attained as f64 / instances as f64;
    let target = if rate >= 0.9 { "meets" } else { "below" };
    Ok(format!(
        "{instances} instances on {} graphs; never exceeded (max excess {worst_excess:.1e}); \
         ascent attainment {attained}/{instances} = {:.1}%, {target} the 90% target",
        graphs.len(),
        100.0 * rate
    ))
}

fn c6_threshold_invariance() -> Outcome {
    let mut families = 0;
    for kp in 1..=8usize {
        let mut kss: Vec<Vec<usize>> = vec![vec![kp]];
        kss.extend((1..kp).map(|k1| vec![k1, kp]));
        for ks in kss {
            let values: Vec<usize> = (kp + 1..=kp + 10)
                .map(|n| manifolds::threshold_k(&FlagSignature::with_default_parameters(n, ks.clone()).unwrap()).unwrap())
                .collect();
            if values.iter().any(|&t| t != values[0]) {
                return Err(format!("ks {ks:?}: thresholds {values:?} vary with n"));
            }
            families += 1;
        }
    }
    Ok(format!("threshold constant over 10 ambient dimensions for {families} signatures"))
}

fn gaussian(rows: usize, cols: usize, rng: &mut XorShift64Star) -> Matrix {
    Matrix::from_row_major(rows, cols, (0..rows * cols).map(|_| rng.next_normal()).collect()).unwrap()
}

fn lemma_signature(n: usize, p: usize, rng: &mut XorShift64Star) -> FlagSignature {
    let mut sigs = manifolds::default_signatures(n, p).unwrap();
    if sigs.is_empty() {
        sigs = manifolds::default_signatures(n, 1).unwrap();
    }
    sigs.swap_remove((rng.next_u64() % sigs.len() as u64) as usize)
}

fn c7_closed_form() -> Outcome {
    let mut rng = XorShift64Star::new(4300);
    let (mut worst_gap, mut worst_resid, mut worst_skew) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..200usize {
        let n = 2 + i % 6;
        let p = 1 + (i / 6) % 2;
        let sig = lemma_signature(n, p, &mut rng);
        let a = gaussian(n, n, &mut rng);
        let scale = 1.0 + a.frobenius_norm();
        let sol = solve_flag_lp(&a, &sig, 1e-9).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = permutation_oracle_flag_lp(&a, &sig).unwrap();
        let gap = (sol.value - oracle).abs();
        worst_gap = worst_gap.max(gap / scale);
        if gap > 1e-8 * scale {
            return Err(format!("instance {i}: closed form {} vs oracle {oracle}", sol.value));
        }
        let resid = sol.residuals.membership.max(sol.residuals.objective);
        worst_resid = worst_resid.max(resid);
        if resid > 1e-8 {
            return Err(format!("instance {i}: witness residuals {:?}", sol.residuals));
        }
        let d = ManifoldDescriptor::flag(sig.clone());
        for _ in 0..100 {
            let x = manifolds::random_point(&d, rng.next_u64()).unwrap();
            if a.dot(&x) > sol.value + 1e-8 * scale {
                return Err(format!("instance {i}: random flag point beats the closed form"));
            }
        }
        let k = gaussian(n, n, &mut rng);
        let skew = &k - &k.transpose();
        let shifted = solve_flag_lp(&(&a + &skew), &sig, 1e-9).unwrap();
        let moved = (shifted.value - sol.value).abs().max((&shifted.x - &sol.x).max_abs());
        worst_skew = worst_skew.max(moved);
        if moved > 1e-10 {
            return Err(format!("instance {i}: skew perturbation moved the solution by {moved:e}"));
        }
    }
    Ok(format!(
        "200 instances; max oracle gap {worst_gap:.1e}·(1+|A|), max residual {worst_resid:.1e}, max skew shift {worst_skew:.1e}"
    ))
}

fn c8_kernels() -> Outcome {
    let mut rng = XorShift64Star::new(8800);
    let mut worst = 0.0f64;
    for i in 0..200usize {
        let n = 1 + i % 12;
        let s = SymmetricMatrix::symmetrized(&gaussian(n, n, &mut rng));
        let eig = matrix::sym_eig(&s, matrix::DEFAULT_TOL).map_err(|e| e.to_string())?;
        let back = manifolds::conjugate_diagonal(&eig.vectors, &eig.values);
        let recon = (&back - s.as_matrix()).max_abs();
        let orth = matrix::orthogonality_residual(&eig.vectors);
        worst = worst.max(recon).max(orth);
        if recon > 1e-10 || orth > 1e-10 {
            return Err(format!("matrix {i}: reconstruction {recon:e}, orthogonality {orth:e}"));
        }
        if eig.values.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("matrix {i}: eigenvalues not descending"));
        }
    }
    let sig = FlagSignature::with_default_parameters(5, vec![1, 3]).unwrap();
    let c5 = Graph::cycle(5).unwrap();
    let families: Vec<(&str, Instance)> = vec![
        ("stiefel quadratic", reductions::build_stiefel_qp(&c5, 7).unwrap().into()),
        ("flag quadratic", reductions::build_flag_qp(&c5, &sig).unwrap().into()),
        ("flag linear", reductions::build_flag_lp(&gaussian(5, 5, &mut rng), &sig).unwrap().into()),
        (
            "stiefel linear",
            Instance::Linear(reductions::LinearInstance {
                manifold: ManifoldDescriptor::stiefel(3, 5).unwrap(),
                objective: (0..5)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| reductions::Triplet::new(i, j, (i as f64 - j as f64).sin()))
                    .collect(),
                constraints: Vec::new(),
                feasibility_threshold: None,
            }),
        ),
    ];
    let h = 1e-5;
    let mut worst_fd = 0.0f64;
    for (name, inst) in &families {
        let problem = AscentProblem::new(inst).unwrap();
        let y = problem.random_start(&mut rng).unwrap();
        let grad = problem.riemannian_gradient(&y);
        let (rows, cols) = problem.variable_shape();
        for dir in 0..10 {
            let xi = riemannian::stiefel_tangent_project(&y, &gaussian(rows, cols, &mut rng));
            let plus = riemannian::qr_retract(&y, &xi.scale(h)).unwrap();
            let minus = riemannian::qr_retract(&y, &xi.scale(-h)).unwrap();
            let fd = (problem.value(&plus) - problem.value(&minus)) / (2.0 * h);
            let an = grad.dot(&xi);
            let rel = (fd - an).abs() / an.abs().max(1.0);
            worst_fd = worst_fd.max(rel);
            if rel > 1e-5 {
                return Err(format!("{name}, direction {dir}: finite difference {fd} vs gradient {an}"));
            }
        }
    }
    Ok(format!(
        "200 eigendecompositions, worst residual {worst:.1e}; 40 gradient checks, worst relative error {worst_fd:.1e}"
    ))
}

fn c9_rounding() -> Outcome {
    let graphs = GraphFamily::AllLabeled { max_m: 5 }.graphs().unwrap();
    let offsets: Vec<f64> = (-9..=9).map(|t| t as f64 * 0.05).collect();
    let mut checks = 0usize;
    for (id, g) in &graphs {
        let k = g.m() as i64;
        let edges = g.edge_count_undirected() as i64;
        let lp: Instance = reductions::build_stiefel_lp(g, g.m()).unwrap().into();
        let qp: Instance = reductions::build_stiefel_qp(g, g.m()).unwrap().into();
        for (inst, offset, spacing) in [(lp, -k, 2i64), (qp, -2 * edges + k, 4)] {
            let opt = reductions::solve_stiefel_diag_exact(&inst).unwrap().unwrap().value;
            if !opt.is_integer() {
                return Err(format!("{id}: optimum {opt} is not an integer"));
            }
            let exact = opt.to_integer();
            for f in &offsets {
                let v = exact as f64 + f * spacing as f64;
                match reductions::round_to_integer_grid(v, offset, spacing) {
                    Ok(r) if r == exact => checks += 1,
                    other => return Err(format!("{id}: {v} rounded to {other:?}, expected {exact}")),
                }
            }
        }
    }
    Ok(format!("{checks} perturbed values on {} graphs recovered exactly", graphs.len()))
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_manifold-hardness"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn c10_cli() -> Outcome {
    for t in Theorem::ALL {
        let out = binary(&["verify", "--family", "all:5", "--theorem", t.name()]);
        let code = out.status.code();
        if code != Some(0) {
            return Err(format!("verify --family all:5 --theorem {t} exited {code:?}"));
        }
        let summary: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        if summary["pass"] != serde_json::Value::Bool(true) || summary["count"].as_u64().unwrap_or(0) == 0 {
            return Err(format!("{t}: summary does not report a pass"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graphs = GraphFamily::NonIsomorphic { max_m: 5 }.graphs().unwrap();
    let mut round_trips = 0;
    for (id, g) in &graphs {
        let file = dir.path().join(format!("{id}.dimacs"));
        std::fs::write(&file, g.to_dimacs()).unwrap();
        let graph_arg = file.to_str().unwrap();
        let m = g.m();
        let sig = manifolds::default_signatures(m, 1).unwrap().into_iter().next();
        let mut cases: Vec<(Theorem, Vec<String>, Instance)> = vec![
            (Theorem::StiefelLp, vec!["--n".into(), (m + 2).to_string()], reductions::build_stiefel_lp(g, m + 2).unwrap().into()),
            (Theorem::StiefelQp, vec![], reductions::build_stiefel_qp(g, m).unwrap().into()),
        ];
        if m >= 2 {
            let inst = reductions::build_grassmann_feasibility(g, 2).unwrap().into();
            cases.push((Theorem::GrassmannFeas, vec!["--k".into(), "2".into()], inst));
        }
        if let Some(sig) = sig {
            let json = serde_json::to_string(&sig).unwrap();
            cases.push((Theorem::FlagFeas, vec!["--sig".into(), json.clone()], reductions::build_flag_feasibility(g, &sig).unwrap().into()));
            if graphs::clique_number(g).unwrap().0 > manifolds::threshold_k(&sig).unwrap() {
                cases.push((Theorem::FlagQp, vec!["--sig".into(), json], reductions::build_flag_qp(g, &sig).unwrap().into()));
            }
        }
        for (t, extra, inst) in cases {
            let path = dir.path().join(format!("{id}-{t}.json"));
            let mut args = vec!["reduce", graph_arg, "--theorem", t.name(), "-o", path.to_str().unwrap()];
            args.extend(extra.iter().map(String::as_str));
            let out = binary(&args);
            if !out.status.success() {
                return Err(format!("{id} {t}: reduce failed: {}", String::from_utf8_lossy(&out.stderr)));
            }
            let from_file = Instance::from_json(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
            if from_file != inst {
                return Err(format!("{id} {t}: serialized instance differs from the in-process build"));
            }
            let solved = binary(&["solve-exact", path.to_str().unwrap()]);
            let want = serde_json::to_string_pretty(&reductions::solve_exact(&inst).unwrap().to_json()).unwrap() + "\n";
            if solved.stdout != want.as_bytes() {
                return Err(format!("{id} {t}: solve-exact output differs from the in-process solve"));
            }
            round_trips += 1;
        }
    }
    Ok(format!("5 family verifications exit 0; {round_trips} reduce/solve-exact round trips byte-identical"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Stiefel LP optimum = 2α − k", budget: Duration::from_secs(30), run: c1_stiefel_lp },
        Criterion { id: 2, name: "Grassmann feasibility ⇔ α ≥ k", budget: Duration::from_secs(30), run: c2_grassmann },
        Criterion { id: 3, name: "flag feasibility ⇔ α ≥ k_p", budget: Duration::from_secs(60), run: c3_flag_feasibility },
        Criterion { id: 4, name: "Stiefel QP optimum = 4κ − 2|E| + k", budget: Duration::from_secs(30), run: c4_stiefel_qp },
        Criterion { id: 5, name: "flag QP maximum = b_n²(1 − 1/ω)", budget: Duration::from_secs(300), run: c5_flag_qp },
        Criterion { id: 6, name: "threshold index independent of n", budget: Duration::from_secs(1), run: c6_threshold_invariance },
        Criterion { id: 7, name: "closed-form flag LP", budget: Duration::from_secs(60), run: c7_closed_form },
        Criterion { id: 8, name: "eigensolver and gradient kernels", budget: Duration::from_secs(30), run: c8_kernels },
        Criterion { id: 9, name: "integer-grid recovery", budget: Duration::from_secs(10), run: c9_rounding },
        Criterion { id: 10, name: "command line end to end", budget: Duration::from_secs(120), run: c10_cli },
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| selected.is_empty() || selected.contains(&c.id)) {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (status, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {}: {detail} [{:.2} s / {} s]",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
