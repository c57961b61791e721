//! Feasibility over a flag manifold. With parameters `a_1 > … > a_p > 0 = a_{p+1}`
//! and `a_1 < 2 a_p`, every edge constraint `x_ii + x_jj <= a_1` forces a zero
//! at one endpoint, so the system is feasible iff `α >= k_p`.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::manifolds::{self, FlagSignature};
use manifold_hardness::matrix;
use manifold_hardness::rational::{frac, int};
use manifold_hardness::reductions;

fn main() -> manifold_hardness::Result<()> {
    let c4 = Graph::cycle(4)?;
    let sig = FlagSignature::new(4, vec![1, 2], vec![int(2), frac(3, 2), int(0)])?;
    let f = reductions::check_feasibility_exact(&reductions::build_flag_feasibility(&c4, &sig)?)?;
    println!("C4 with params (2, 3/2, 0): feasible {}, diagonal {:?}", f.feasible, f.witness.map(|w| matrix::diag_vector(&w)));

    let boundary = FlagSignature::new(4, vec![1, 2], vec![int(2), int(1), int(0)])?;
    println!("params (2, 1, 0): {}", boundary.check_lp_reduction_rules().unwrap_err());

    let g = graphs::parse_generator_spec("random:7:seed=11:p=1/2")?;
    let (alpha, _) = graphs::stability_number(&g)?;
    println!("\nrandom graph on 7 vertices, alpha = {alpha}");
    for p in [1, 2] {
        for sig in manifolds::default_signatures(7, p)? {
            let f = reductions::check_feasibility_exact(&reductions::build_flag_feasibility(&g, &sig)?)?;
            println!("  ks {:?}: feasible {}", sig.ks(), f.feasible);
        }
    }
    Ok(())
}
