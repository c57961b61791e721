//! Exact solvers for the reduction families.
//!
//! Once every off-diagonal entry is pinned to zero, a Stiefel point is a sign
//! diagonal, a Grassmann point a 0/1 diagonal with `k` ones, and a flag point a
//! diagonal whose entries are a permutation of the block vector. The solvers
//! enumerate those finitely many points and evaluate every constraint in exact
//! integer arithmetic. Instances outside these families are rejected.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{self, Certificate, Graph};
use crate::manifolds::ManifoldDescriptor;
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::rational::{self, Rational};

use super::{decode, Instance, LinearInstance, QuadraticInstance, Relation};

pub const MAX_EXACT_DIM: usize = 22;

/// Optimum over sign diagonals: `signs[i] = x_ii`, `point` the `n x k` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagSolution {
    pub value: Rational,
    pub signs: Vec<i8>,
    pub point: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Matrix>,
}

/// Result of [`solve_exact`].
#[derive(Clone, Debug, PartialEq)]
pub enum ExactSolution {
    /// Stiefel LP or QP optimum; `None` means no sign diagonal is feasible
    /// (value `-inf`).
    Optimum(Option<DiagSolution>),
    Feasibility(Feasibility),
    /// Flag QP optimum with a maximizing diagonal (the maximizing flag points
    /// are exactly those with this diagonal).
    FlagQp {
        value: Rational,
        diagonal: Vec<Rational>,
        clique: Certificate,
    },
}

impl ExactSolution {
    pub fn to_json(&self) -> Value {
        let pair = |r: &Rational| json!([r.numer(), r.denom()]);
        match self {
            Self::Optimum(None) => json!({"result": "optimum", "value": "-inf", "X": Value::Null}),
            Self::Optimum(Some(s)) => json!({
                "result": "optimum",
                "value": pair(&s.value),
                "signs": s.signs,
                "X": s.point,
            }),
            Self::Feasibility(f) => json!({
                "result": "feasibility",
                "feasible": f.feasible,
                "witness": f.witness,
            }),
            Self::FlagQp { value, diagonal, clique } => json!({
                "result": "optimum",
                "value": pair(value),
                "diagonal": diagonal.iter().map(pair).collect::<Vec<_>>(),
                "clique": clique,
            }),
        }
    }
}

/// A linear form over the diagonal, scaled to integers: `Σ coeffs · x_ii`
/// compared against `rhs`, both multiplied by a common positive factor.
#[derive(Clone, Debug)]
struct DiagRow {
    coeffs: Vec<(usize, i128)>,
    rel: Relation,
    rhs: i128,
    scale: i128,
}

impl DiagRow {
    fn from_rationals(terms: &[(usize, Rational)], rel: Relation, rhs: Rational) -> Result<Self> {
        let overflow = || Error::Unsupported("coefficients too large for exact evaluation".into());
        let mut scale: i128 = *rhs.denom() as i128;
        for (_, c) in terms {
            scale = scale.lcm(&(*c.denom() as i128));
            if scale > i64::MAX as i128 {
                return Err(overflow());
            }
        }
        let scaled = |r: &Rational| -> Result<i128> {
            (*r.numer() as i128)
                .checked_mul(scale / *r.denom() as i128)
                .ok_or_else(overflow)
        };
        Ok(Self {
            coeffs: terms.iter().map(|(i, c)| Ok((*i, scaled(c)?))).collect::<Result<_>>()?,
            rel,
            rhs: scaled(&rhs)?,
            scale,
        })
    }

    /// `Σ coeffs_i · x_i` for a diagonal given as integers over `denom`.
    fn lhs(&self, x: &[i128]) -> i128 {
        self.coeffs.iter().map(|&(i, c)| c * x[i]).sum()
    }

    /// Whether the row holds for `x / denom`.
    fn holds(&self, x: &[i128], denom: i128) -> bool {
        let lhs = self.lhs(x);
        let rhs = self.rhs * denom;
        match self.rel {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

/// Checks that all off-diagonal entries are fixed to zero by single-term
/// equalities, then rewrites the objective and remaining constraints as
/// forms over the diagonal.
fn reduce_to_diagonal(inst: &LinearInstance) -> Result<(DiagRow, Vec<DiagRow>)> {
    inst.validate()?;
    let (rows, cols) = inst.manifold.point_shape();
    let mut pinned = vec![false; rows * cols];
    let mut general = Vec::new();
    for c in &inst.constraints {
        let single_zero = c.rel == Relation::Eq
            && c.rhs.is_zero()
            && c.terms.len() == 1
            && c.terms[0].row != c.terms[0].col
            && c.terms[0].coeff != 0.0;
        if single_zero {
            pinned[c.terms[0].row * cols + c.terms[0].col] = true;
        } else {
            general.push(c);
        }
    }
    let unpinned = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && !pinned[i * cols + j])
        .count();
    if unpinned > 0 {
        return Err(Error::Unsupported(format!(
            "{unpinned} off-diagonal entries are not fixed to zero; exact solvers need diagonal points"
        )));
    }
    let diagonal_terms = |terms: &[super::Triplet]| -> Result<Vec<(usize, Rational)>> {
        let mut acc = vec![Rational::zero(); rows.min(cols)];
        for t in terms.iter().filter(|t| t.row == t.col) {
            let c = rational::from_f64_exact(t.coeff)
                .ok_or_else(|| Error::Unsupported(format!("coefficient {} has no exact rational form", t.coeff)))?;
            acc[t.row] += c;
        }
        Ok(acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
    };
    let objective = DiagRow::from_rationals(&diagonal_terms(&inst.objective)?, Relation::Le, Rational::zero())?;
    let rows = general
        .into_iter()
        .map(|c| DiagRow::from_rationals(&diagonal_terms(&c.terms)?, c.rel, c.rhs))
        .collect::<Result<_>>()?;
    Ok((objective, rows))
}

fn check_exact_capacity(what: &'static str, dim: usize) -> Result<()> {
    if dim > MAX_EXACT_DIM {
        return Err(Error::Capacity {
            what,
            got: dim,
            limit: MAX_EXACT_DIM,
        });
    }
    Ok(())
}

/// Sign vectors in lexicographic order with `+1` before `-1`.
fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1u64 << k).map(move |code| {
        (0..k)
            .map(|i| if code >> (k - 1 - i) & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

fn sign_point(n: usize, signs: &[i8]) -> Matrix {
    let mut x = Matrix::zeros(n, signs.len());
    for (i, &s) in signs.iter().enumerate() {
        x[(i, i)] = s as f64;
    }
    x
}

/// Exact optimum of a Stiefel LP or QP whose feasible points are sign
/// diagonals.
///
/// LP: every off-diagonal entry must be pinned to zero; sign diagonals are
/// filtered by the constraints and the objective maximized. QP: the maximum
/// of `diag(X)ᵀ W diag(X)` over `V(k, n)` equals the maximum over `{±1}^k`
/// when `W` has a nonnegative diagonal, since the form is then convex in each
/// coordinate separately. Ties go to the lexicographically first sign vector
/// (`+1` first). `Ok(None)` means the LP is infeasible.
pub fn solve_stiefel_diag_exact(inst: &Instance) -> Result<Option<DiagSolution>> {
    match inst {
        Instance::Linear(lin) => {
            let ManifoldDescriptor::Stiefel { k, n } = lin.manifold else {
                return Err(Error::Unsupported(format!("{} is not a Stiefel manifold", lin.manifold.name())));
            };
            check_exact_capacity("Stiefel sign enumeration", k)?;
            let (objective, rows) = reduce_to_diagonal(lin)?;
            let mut best: Option<(i128, Vec<i8>)> = None;
            for signs in sign_vectors(k) {
                let x: Vec<i128> = signs.iter().map(|&s| s as i128).collect();
                if !rows.iter().all(|r| r.holds(&x, 1)) {
                    continue;
                }
                let value = objective.lhs(&x);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, signs));
                }
            }
            Ok(best.map(|(value, signs)| DiagSolution {
                value: ratio(value, objective.scale),
                point: sign_point(n, &signs),
                signs,
            }))
        }
        Instance::Quadratic(quad) => {
            let ManifoldDescriptor::Stiefel { n, .. } = quad.manifold else {
                return Err(Error::Unsupported(format!("{} is not a Stiefel manifold", quad.manifold.name())));
            };
            quad.validate()?;
            if let Some(i) = (0..quad.w.n()).find(|&i| quad.w.get(i, i) < 0.0) {
                return Err(Error::Unsupported(format!(
                    "W_{0}{0} < 0: the maximum need not sit on a sign diagonal",
                    i + 1
                )));
            }
            let (value, signs) = solve_hypercube_qp_exact(&quad.w)?;
            Ok(Some(DiagSolution {
                value,
                point: sign_point(n, &signs),
                signs,
            }))
        }
    }
}

fn ratio(numer: i128, denom: i128) -> Rational {
    let g = numer.gcd(&denom).max(1);
    let (n, d) = (numer / g, denom / g);
    Rational::new(
        n.to_i64().expect("exact value fits in i64"),
        d.to_i64().expect("exact value fits in i64"),
    )
}

/// `max xᵀ W x` over `x ∈ {−1, 1}^k`, exactly; ties go to the
/// lexicographically first sign vector (`+1` first).
pub fn solve_hypercube_qp_exact(w: &SymmetricMatrix) -> Result<(Rational, Vec<i8>)> {
    let k = w.n();
    check_exact_capacity("hypercube enumeration", k)?;
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let v = w.get(i, j);
            entries.push(
                rational::from_f64_exact(v)
                    .ok_or_else(|| Error::Unsupported(format!("W entry {v} has no exact rational form")))?,
            );
        }
    }
    let row = DiagRow::from_rationals(
        &entries.iter().enumerate().map(|(idx, c)| (idx, *c)).collect::<Vec<_>>(),
        Relation::Le,
        Rational::zero(),
    )?;
    let mut dense = vec![0i128; k * k];
    for &(idx, c) in &row.coeffs {
        dense[idx] = c;
    }
    let mut best: Option<(i128, Vec<i8>)> = None;
    for signs in sign_vectors(k) {
        let mut value = 0i128;
        for i in 0..k {
            let mut acc = 0i128;
            for j in 0..k {
                acc += dense[i * k + j] * signs[j] as i128;
            }
            value += acc * signs[i] as i128;
        }
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, signs));
        }
    }
    let (value, signs) = best.expect("at least one sign vector");
    Ok((ratio(value, row.scale), signs))
}

/// Subsets of `0..n` of size `k` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(out)
    })
}

/// Exact feasibility of the Stiefel (with threshold), Grassmann and flag
/// feasibility families.
///
/// * Stiefel: some sign diagonal satisfies every constraint and, if set, the
///   objective threshold.
/// * Grassmann `Gr(k, n)`: some 0/1 diagonal with `k` ones is feasible.
/// * Flag: every non-pinning constraint must read `x_ii + x_jj <= a_1` and
///   the parameter rules must hold. A `k_p`-subset is tried by placing
///   `a_1 × n_1, …, a_p × n_p` on it in ascending vertex order and zero
///   elsewhere; nonzero entries pairwise exceed `a_1`, so a feasible diagonal
///   exists iff one of these placements is feasible.
///
/// The first feasible point in enumeration order is returned as the witness.
pub fn check_feasibility_exact(inst: &LinearInstance) -> Result<Feasibility> {
    let (objective, rows) = reduce_to_diagonal(inst)?;
    let found = |witness: Option<Matrix>| Feasibility {
        feasible: witness.is_some(),
        witness,
    };
    match &inst.manifold {
        ManifoldDescriptor::Stiefel { k, n } => {
            check_exact_capacity("Stiefel sign enumeration", *k)?;
            let threshold = inst.feasibility_threshold;
            let witness = sign_vectors(*k).find(|signs| {
                let x: Vec<i128> = signs.iter().map(|&s| s as i128).collect();
                rows.iter().all(|r| r.holds(&x, 1))
                    && threshold.is_none_or(|t| ratio(objective.lhs(&x), objective.scale) >= t)
            });
            Ok(found(witness.map(|signs| sign_point(*n, &signs))))
        }
        ManifoldDescriptor::Grassmann { k, n } => {
            check_exact_capacity("Grassmann subset enumeration", *n)?;
            let witness = combinations(*n, *k).find(|subset| {
                let mut x = vec![0i128; *n];
                subset.iter().for_each(|&i| x[i] = 1);
                rows.iter().all(|r| r.holds(&x, 1))
            });
            Ok(found(witness.map(|subset| {
                let mut d = vec![0.0; *n];
                subset.iter().for_each(|&i| d[i] = 1.0);
                Matrix::from_diag(&d)
            })))
        }
        ManifoldDescriptor::Flag { signature } => {
            let n = signature.n();
            check_exact_capacity("flag subset enumeration", n)?;
            signature
                .check_lp_reduction_rules()
                .map_err(|e| Error::Unsupported(format!("flag feasibility needs the parameter rules: {e}")))?;
            let a1 = signature.params()[0];
            for r in &rows {
                let edge_form = r.rel == Relation::Le
                    && r.coeffs.len() == 2
                    && r.coeffs.iter().all(|&(_, c)| c == r.scale)
                    && ratio(r.rhs, r.scale) == a1;
                if !edge_form {
                    return Err(Error::Unsupported(
                        "flag feasibility supports only constraints x_ii + x_jj <= a_1".into(),
                    ));
                }
            }
            let kp = signature.largest_dim();
            let values: Vec<Rational> = signature.block_vector()[..kp].to_vec();
            let denom = values.iter().fold(1i128, |acc, v| acc.lcm(&(*v.denom() as i128)));
            let witness = combinations(n, kp).find(|subset| {
                let mut x = vec![0i128; n];
                for (&i, v) in subset.iter().zip(&values) {
                    x[i] = *v.numer() as i128 * (denom / *v.denom() as i128);
                }
                rows.iter().all(|r| r.holds(&x, denom))
            });
            Ok(found(witness.map(|subset| {
                let mut d = vec![0.0; n];
                for (&i, v) in subset.iter().zip(&values) {
                    d[i] = rational::to_f64(v);
                }
                Matrix::from_diag(&d)
            })))
        }
    }
}

/// Recovers the graph behind a flag QP: `W` must be a 0/1 adjacency matrix.
fn graph_from_adjacency(w: &SymmetricMatrix) -> Result<Graph> {
    let n = w.n();
    let mut edges = Vec::new();
    for i in 0..n {
        if w.get(i, i) != 0.0 {
            return Err(Error::Unsupported("flag QP weights must have a zero diagonal".into()));
        }
        for j in i + 1..n {
            match w.get(i, j) {
                0.0 => {}
                1.0 => edges.push((i, j)),
                v => return Err(Error::Unsupported(format!("flag QP weight {v} is not an adjacency entry"))),
            }
        }
    }
    Graph::new(n, edges)
}

fn solve_flag_qp_exact(quad: &QuadraticInstance) -> Result<ExactSolution> {
    let sig = quad.manifold.to_flag_signature()?;
    let g = graph_from_adjacency(&quad.w)?;
    let value = decode::flag_qp_value(&g, &sig)?;
    let diagonal = decode::flag_qp_witness_exact(&g, &sig)?;
    let (_, clique) = graphs::clique_number(&g)?;
    Ok(ExactSolution::FlagQp { value, diagonal, clique })
}

/// Dispatches an instance to the exact solver for its family.
pub fn solve_exact(inst: &Instance) -> Result<ExactSolution> {
    inst.validate()?;
    match inst {
        Instance::Linear(lin) => match lin.manifold {
            ManifoldDescriptor::Stiefel { .. } if lin.feasibility_threshold.is_none() && !lin.is_feasibility_problem() => {
                solve_stiefel_diag_exact(inst).map(ExactSolution::Optimum)
            }
            _ if !lin.constraints.is_empty() => check_feasibility_exact(lin).map(ExactSolution::Feasibility),
            _ => Err(Error::Unsupported(
                "unconstrained linear instances are solved by the closed-form flag LP solver".into(),
            )),
        },
        Instance::Quadratic(quad) => match quad.manifold {
            ManifoldDescriptor::Stiefel { .. } => solve_stiefel_diag_exact(inst).map(ExactSolution::Optimum),
            _ => solve_flag_qp_exact(quad),
        },
    }
}
