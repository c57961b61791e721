//! The reduced optima live on integer grids (`2α − k` has spacing 2 and
//! `4κ − 2|E| + k` spacing 4), so any estimate closer than half a spacing
//! rounds back to the exact value.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::reductions::round_to_integer_grid;

fn main() -> manifold_hardness::Result<()> {
    let g = Graph::cycle(7)?;
    let k = g.m() as i64;
    let edges = g.edge_count_undirected() as i64;
    let (alpha, _) = graphs::stability_number(&g)?;
    let (kappa, _) = graphs::max_cut(&g)?;
    let lp = 2 * alpha as i64 - k;
    let qp = 4 * kappa as i64 - 2 * edges + k;
    for delta in [-0.9, -0.3, 0.0, 0.5, 0.89] {
        println!(
            "LP estimate {:6.2} -> {:3}    QP estimate {:6.2} -> {:3}",
            lp as f64 + delta,
            round_to_integer_grid(lp as f64 + delta, -k, 2)?,
            qp as f64 + 2.0 * delta,
            round_to_integer_grid(qp as f64 + 2.0 * delta, -2 * edges + k, 4)?
        );
    }
    println!("midpoint {}: {}", lp as f64 + 1.0, round_to_integer_grid(lp as f64 + 1.0, -k, 2).unwrap_err());
    Ok(())
}
