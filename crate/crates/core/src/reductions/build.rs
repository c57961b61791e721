use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::manifolds::{FlagSignature, ManifoldDescriptor};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::rational::{self, Rational};

use super::{Constraint, LinearInstance, QuadraticInstance, Triplet};

/// `x_ij = 0` for every off-diagonal position of a `rows x cols` point.
fn off_diagonal_equalities(rows: usize, cols: usize) -> Vec<Constraint> {
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| Constraint::zero_entry(i, j))
        .collect()
}

fn edge_constraints(g: &Graph, rhs: Rational) -> impl Iterator<Item = Constraint> + '_ {
    g.edges().map(move |(i, j)| Constraint::diagonal_pair(i, j, rhs))
}

fn diagonal_objective(k: usize) -> Vec<Triplet> {
    (0..k).map(|i| Triplet::new(i, i, 1.0)).collect()
}

/// Stability-number LP over `V(k, n)` for a graph on `k` vertices:
/// maximize `x_11 + … + x_kk` subject to `x_ij = 0` (`i != j`) and
/// `x_ii + x_jj <= 0` on edges. Its optimum is `2α − k`.
pub fn build_stiefel_lp(g: &Graph, n: usize) -> Result<LinearInstance> {
    let k = g.m();
    if k > n {
        return Err(Error::InvalidArgument(format!("graph has {k} vertices but n = {n}")));
    }
    let mut constraints = off_diagonal_equalities(n, k);
    constraints.extend(edge_constraints(g, rational::int(0)));
    Ok(LinearInstance {
        manifold: ManifoldDescriptor::stiefel(k, n)?,
        objective: diagonal_objective(k),
        constraints,
        feasibility_threshold: None,
    })
}

/// The decision form "α ≥ r": the LP above with the extra cut
/// `x_11 + … + x_kk >= 2r − k`.
pub fn build_stiefel_feasibility(g: &Graph, n: usize, r: usize) -> Result<LinearInstance> {
    if r > g.m() {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds the vertex count {}", g.m())));
    }
    let mut inst = build_stiefel_lp(g, n)?;
    inst.feasibility_threshold = Some(rational::int(2 * r as i64 - g.m() as i64));
    Ok(inst)
}

/// Feasibility over `Gr(k, n)` for a graph on `n` vertices: `x_ij = 0`
/// (`i != j`) and `x_ii + x_jj <= 1` on edges. Feasible iff `α ≥ k`.
pub fn build_grassmann_feasibility(g: &Graph, k: usize) -> Result<LinearInstance> {
    let n = g.m();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={n}")));
    }
    let mut constraints = off_diagonal_equalities(n, n);
    constraints.extend(edge_constraints(g, rational::int(1)));
    Ok(LinearInstance {
        manifold: ManifoldDescriptor::grassmann(k, n)?,
        objective: Vec::new(),
        constraints,
        feasibility_threshold: None,
    })
}

/// Feasibility over a flag manifold: `x_ij = 0` (`i != j`) and
/// `x_ii + x_jj <= a_1` on edges. With the parameter rules in force it is
/// feasible iff `α ≥ k_p`.
pub fn build_flag_feasibility(g: &Graph, sig: &FlagSignature) -> Result<LinearInstance> {
    sig.check_lp_reduction_rules()?;
    if sig.n() != g.m() {
        return Err(Error::Dimension(format!("signature has n = {} but the graph has {} vertices", sig.n(), g.m())));
    }
    let n = sig.n();
    let mut constraints = off_diagonal_equalities(n, n);
    constraints.extend(edge_constraints(g, sig.params()[0]));
    Ok(LinearInstance {
        manifold: ManifoldDescriptor::flag(sig.clone()),
        objective: Vec::new(),
        constraints,
        feasibility_threshold: None,
    })
}

/// Max-cut QP over `V(k, n)`: `W = I_k − A`.
pub fn build_stiefel_qp(g: &Graph, n: usize) -> Result<QuadraticInstance> {
    let k = g.m();
    if k > n {
        return Err(Error::InvalidArgument(format!("graph has {k} vertices but n = {n}")));
    }
    let a = g.adjacency_matrix();
    let mut w = SymmetricMatrix::identity(k);
    for i in 0..k {
        for j in i + 1..k {
            w.set(i, j, -a.get(i, j));
        }
    }
    Ok(QuadraticInstance {
        manifold: ManifoldDescriptor::stiefel(k, n)?,
        w,
    })
}

/// Clique QP over a flag manifold: `W = A`, so the objective is the
/// directed-pair sum `Σ_{(i,j) ∈ E} x_ii x_jj`.
pub fn build_flag_qp(g: &Graph, sig: &FlagSignature) -> Result<QuadraticInstance> {
    if sig.n() != g.m() {
        return Err(Error::Dimension(format!("signature has n = {} but the graph has {} vertices", sig.n(), g.m())));
    }
    Ok(QuadraticInstance {
        manifold: ManifoldDescriptor::flag(sig.clone()),
        w: g.adjacency_matrix(),
    })
}

/// Unconstrained LP `max tr(Aᵀ X)` over a flag manifold.
pub fn build_flag_lp(a: &Matrix, sig: &FlagSignature) -> Result<LinearInstance> {
    let n = sig.n();
    if a.shape() != (n, n) {
        return Err(Error::Dimension(format!("A is {:?}, expected {n}x{n}", a.shape())));
    }
    let objective = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a[(i, j)] != 0.0)
        .map(|(i, j)| Triplet::new(i, j, a[(i, j)]))
        .collect();
    Ok(LinearInstance {
        manifold: ManifoldDescriptor::flag(sig.clone()),
        objective,
        constraints: Vec::new(),
        feasibility_threshold: None,
    })
}
