//! Feasibility over a Grassmannian: the reduced system on `Gr(k, n)` is
//! feasible exactly when the graph has a stable set of size `k`.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::matrix;
use manifold_hardness::reductions;

fn main() -> manifold_hardness::Result<()> {
    for (name, g) in [("C4", Graph::cycle(4)?), ("K3", Graph::complete(3)?), ("C6", Graph::cycle(6)?)] {
        let (alpha, _) = graphs::stability_number(&g)?;
        for k in 1..=g.m() {
            let f = reductions::check_feasibility_exact(&reductions::build_grassmann_feasibility(&g, k)?)?;
            let witness = f.witness.as_ref().map(matrix::diag_vector);
            println!("{name} (alpha {alpha}), k = {k}: feasible {:<5} witness diagonal {witness:?}", f.feasible);
        }
    }
    Ok(())
}
