//! The clique number through a quadratic program over a flag manifold. When
//! `ω` exceeds the threshold index, the maximum of `Σ_{(i,j) ∈ E} x_ii x_jj`
//! is `b_n² (1 − 1/ω)`, attained by spreading `b_n` evenly over a maximum
//! clique.

use manifold_hardness::graphs::{self, Graph};
use manifold_hardness::manifolds::{self, FlagSignature};
use manifold_hardness::rational::display;
use manifold_hardness::reductions;

fn main() -> manifold_hardness::Result<()> {
    let cases = [
        ("K4", Graph::complete(4)?, FlagSignature::grassmann(2, 4)?),
        ("K3", Graph::complete(3)?, FlagSignature::grassmann(1, 3)?),
        ("wheel W5", Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)])?, FlagSignature::with_default_parameters(6, vec![1, 2])?),
    ];
    for (name, g, sig) in cases {
        let (omega, clique) = graphs::clique_number(&g)?;
        let value = reductions::flag_qp_value(&g, &sig)?;
        let x = reductions::flag_qp_witness_exact(&g, &sig)?;
        println!(
            "{name}: omega {omega}, threshold {}, b_n {}, value {}, witness {:?} on clique {:?}",
            manifolds::threshold_k(&sig)?,
            display(&manifolds::trace_constant(&sig)),
            display(&value),
            x.iter().map(display).collect::<Vec<_>>(),
            clique.labels()
        );
    }
    let c5 = Graph::cycle(5)?;
    println!("C5 on Gr(2, 5): {}", reductions::flag_qp_value(&c5, &FlagSignature::grassmann(2, 5)?).unwrap_err());
    Ok(())
}
