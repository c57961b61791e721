//! Unconstrained LP over a flag manifold in closed form, checked against the
//! permutohedron-vertex oracle and against random flag points.

use manifold_hardness::closedform::{permutation_oracle_flag_lp, solve_flag_lp};
use manifold_hardness::cli::random_matrix;
use manifold_hardness::manifolds::{self, FlagSignature, ManifoldDescriptor};

fn main() -> manifold_hardness::Result<()> {
    let sig = FlagSignature::with_default_parameters(5, vec![1, 3])?;
    let a = random_matrix(5, 42);
    let sol = solve_flag_lp(&a, &sig, 1e-9)?;
    let oracle = permutation_oracle_flag_lp(&a, &sig)?;
    println!("block vector {:?}", sig.block_vector_f64());
    println!("closed form {:.12}, permutation oracle {oracle:.12}", sol.value);
    println!("residuals: membership {:.1e}, objective {:.1e}", sol.residuals.membership, sol.residuals.objective);

    let d = ManifoldDescriptor::flag(sig);
    let best_random = (0..2000)
        .map(|s| manifolds::random_point(&d, s).map(|x| a.dot(&x)))
        .collect::<manifold_hardness::Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    println!("best of 2000 random flag points: {best_random:.6}");
    Ok(())
}
