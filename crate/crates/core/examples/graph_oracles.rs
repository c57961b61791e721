//! Brute-force invariants of a few small graphs, with their witnesses.

use manifold_hardness::graphs::{self, Graph};

fn main() -> manifold_hardness::Result<()> {
    let graphs = [
        ("K4", Graph::complete(4)?),
        ("C5", Graph::cycle(5)?),
        ("P4", Graph::path(4)?),
        ("random:7:seed=3", graphs::parse_generator_spec("random:7:seed=3:p=1/2")?),
    ];
    println!("{:<16} {:>5} {:>5} {:>5}  {:>6}", "graph", "alpha", "kappa", "omega", "ms");
    for (name, g) in &graphs {
        let (alpha, stable) = graphs::stability_number(g)?;
        let (kappa, _) = graphs::max_cut(g)?;
        let (omega, _) = graphs::clique_number(g)?;
        let ms = graphs::motzkin_straus_value(g)?;
        println!(
            "{name:<16} {alpha:>5} {kappa:>5} {omega:>5}  {:>6}   stable set {:?}",
            manifold_hardness::rational::display(&ms),
            stable.labels()
        );
    }
    println!("\nC5 in DIMACS form:\n{}", Graph::cycle(5)?.to_dimacs());
    Ok(())
}
