//! The stability number as a linear program over a Stiefel manifold: the
//! optimum of the reduced LP is `2α − k`, attained at a sign diagonal whose
//! `+1` entries form a maximum stable set.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::reductions::{self, Instance};

fn main() -> manifold_hardness::Result<()> {
    for (name, g) in [("K3", Graph::complete(3)?), ("P3", Graph::path(3)?), ("C5", Graph::cycle(5)?)] {
        let (alpha, _) = graphs::stability_number(&g)?;
        for n in [g.m(), g.m() + 2] {
            let inst: Instance = reductions::build_stiefel_lp(&g, n)?.into();
            let sol = reductions::solve_stiefel_diag_exact(&inst)?.expect("all -1 is feasible");
            let cert = reductions::decode_certificate(&inst, &sol.point, &g, reductions::DEFAULT_DECODE_TOL)?;
            println!(
                "{name} on V({}, {n}): optimum {} = 2·{alpha} − {}, signs {:?}, stable set {:?}",
                g.m(),
                sol.value,
                g.m(),
                sol.signs,
                cert.labels()
            );
        }
    }

    // The decision form: is α(C5) at least r?
    let c5 = Graph::cycle(5)?;
    for r in 1..=3 {
        let f = reductions::check_feasibility_exact(&reductions::build_stiefel_feasibility(&c5, 5, r)?)?;
        println!("C5, alpha >= {r}: {}", f.feasible);
    }
    Ok(())
}
