//! Instances serialize to self-contained JSON (1-based indices, rational
//! right-hand sides) that any external solver can read back.

use manifold_hardness::graphs::Graph;
use manifold_hardness::reductions::{self, solve_exact, Instance};

fn main() -> manifold_hardness::Result<()> {
    let inst: Instance = reductions::build_grassmann_feasibility(&Graph::path(3)?, 2)?.into();
    let text = inst.to_json()?;
    println!("{}", text.lines().take(24).collect::<Vec<_>>().join("\n"));
    println!("  ...");

    let back = Instance::from_json(&text)?;
    assert_eq!(back, inst);
    println!("\nsolve-exact on the parsed file:\n{}", serde_json::to_string_pretty(&solve_exact(&back)?.to_json())?);
    Ok(())
}
