//! Gradient ascent on the manifolds themselves, compared with the exact
//! optima. Ascent never beats the proved value and usually finds it.

use manifold_hardness::closedform;
use manifold_hardness::cli::random_matrix;
use manifold_hardness::graphs::Graph;
use manifold_hardness::manifolds::FlagSignature;
use manifold_hardness::rational::to_f64;
use manifold_hardness::reductions::{self, Instance};
use manifold_hardness::riemannian::{ascend, AscentConfig};

fn main() -> manifold_hardness::Result<()> {
    let cfg = AscentConfig { seed: 1, ..AscentConfig::default() };

    let c5 = Graph::cycle(5)?;
    let qp: Instance = reductions::build_stiefel_qp(&c5, 7)?.into();
    let exact = reductions::solve_stiefel_diag_exact(&qp)?.unwrap().value;
    let trace = ascend(&qp, &cfg)?;
    println!("max-cut QP, C5 on V(5, 7): exact {exact}, ascent {:.8}", trace.best_value);

    let k4 = Graph::complete(4)?;
    let sig = FlagSignature::with_default_parameters(4, vec![1, 3])?;
    let fq: Instance = reductions::build_flag_qp(&k4, &sig)?.into();
    let value = to_f64(&reductions::flag_qp_value(&k4, &sig)?);
    let trace = ascend(&fq, &cfg)?;
    println!("clique QP, K4: exact {value:.8}, ascent {:.8}", trace.best_value);

    let a = random_matrix(5, 3);
    let sig = FlagSignature::with_default_parameters(5, vec![2, 4])?;
    let lp: Instance = reductions::build_flag_lp(&a, &sig)?.into();
    let closed = closedform::solve_flag_lp(&a, &sig, 1e-9)?.value;
    let trace = ascend(&lp, &cfg)?;
    let iters: usize = trace.restarts.iter().map(|r| r.iterations).sum();
    println!("flag LP: closed form {closed:.8}, ascent {:.8} ({iters} iterations over 50 restarts)", trace.best_value);
    Ok(())
}
