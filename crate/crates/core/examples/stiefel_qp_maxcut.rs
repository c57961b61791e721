//! Max-cut as a quadratic program over a Stiefel manifold: maximizing
//! `diag(X)ᵀ (I − A) diag(X)` gives `4κ − 2|E| + k`.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::reductions::{self, Instance};

fn main() -> manifold_hardness::Result<()> {
    for (name, g) in [("K3", Graph::complete(3)?), ("C5", Graph::cycle(5)?), ("K2,3", Graph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])?)] {
        let (kappa, _) = graphs::max_cut(&g)?;
        let quad = reductions::build_stiefel_qp(&g, g.m())?;
        let (hyper, _) = reductions::solve_hypercube_qp_exact(&quad.w)?;
        let inst: Instance = quad.into();
        let sol = reductions::solve_stiefel_diag_exact(&inst)?.unwrap();
        let cut = reductions::decode_certificate(&inst, &sol.point, &g, 1e-6)?;
        println!(
            "{name}: kappa {kappa}, |E| {}, optimum {} (hypercube {hyper}), cut side {:?} cuts {}",
            g.edge_count_undirected(),
            sol.value,
            cut.labels(),
            cut.size
        );
    }
    Ok(())
}
