//! Multi-start Riemannian gradient ascent, used as a structure-free check on
//! the exact optima.
//!
//! Stiefel instances are optimized directly over `V(k, n)`. Grassmann and
//! flag instances are optimized over `Q ∈ O(n)` with `X = Q D Qᵀ`, `D` the
//! block-diagonal model, so every iterate has exactly the right spectrum.
//! Steps use the projected gradient, a QR retraction and backtracking that
//! halves the step until the objective increases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifolds::{self, ManifoldDescriptor};
use crate::matrix::{self, Matrix, SymmetricMatrix};
use crate::reductions::Instance;
use crate::rng::XorShift64Star;

/// Below this backtracking step the ascent is treated as stalled.
const MIN_STEP: f64 = 1e-16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentConfig {
    pub step: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            step: 0.1,
            max_iters: 500,
            grad_tol: 1e-8,
            restarts: 50,
            seed: 0,
        }
    }
}

impl AscentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!("step {} must be positive", self.step)));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(Error::InvalidArgument("max_iters and restarts must be at least 1".into()));
        }
        if self.grad_tol.is_nan() || self.grad_tol < 0.0 {
            return Err(Error::InvalidArgument(format!("grad_tol {} must be nonnegative", self.grad_tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartTrace {
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub feasibility_residual: f64,
    /// Objective after the start and after every accepted step.
    #[serde(skip)]
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AscentTrace {
    pub best_value: f64,
    pub best_restart: usize,
    #[serde(rename = "X")]
    pub best_point: Matrix,
    pub restarts: Vec<RestartTrace>,
}

/// `Ξ = G − X (XᵀG + GᵀX)/2`, the projection onto the tangent space at `X`.
pub fn stiefel_tangent_project(x: &Matrix, g: &Matrix) -> Matrix {
    let xtg = x.tr_matmul(g);
    let sym = SymmetricMatrix::symmetrized(&xtg).into_matrix();
    g - &x.matmul(&sym)
}

/// `qf(X + V)`.
pub fn qr_retract(x: &Matrix, v: &Matrix) -> Result<Matrix> {
    matrix::qr_orthonormalize(&(x + v))
}

#[derive(Clone, Debug)]
enum Objective {
    /// `diag(X)ᵀ W diag(X)`.
    Quadratic(SymmetricMatrix),
    /// `tr(Cᵀ X)`.
    Linear(Matrix),
}

impl Objective {
    fn value(&self, x: &Matrix) -> f64 {
        match self {
            Self::Quadratic(w) => w.quadratic_form(&matrix::diag_vector(x)),
            Self::Linear(c) => c.dot(x),
        }
    }

    /// Euclidean gradient with respect to `X`.
    fn gradient(&self, x: &Matrix) -> Matrix {
        match self {
            Self::Quadratic(w) => {
                let wd = w.apply(&matrix::diag_vector(x));
                let mut g = Matrix::zeros(x.rows(), x.cols());
                for (i, v) in wd.into_iter().enumerate() {
                    g[(i, i)] = 2.0 * v;
                }
                g
            }
            Self::Linear(c) => c.clone(),
        }
    }
}

/// An instance in the coordinates the ascent moves in: `Y ∈ V(k, n)` for
/// Stiefel, `Q ∈ O(n)` for Grassmann and flag instances.
#[derive(Clone, Debug)]
pub struct AscentProblem {
    manifold: ManifoldDescriptor,
    objective: Objective,
    /// Block-diagonal model eigenvalues, for the conjugation parametrization.
    model: Option<Vec<f64>>,
}

impl AscentProblem {
    /// Refuses linear instances with constraints or a threshold cut.
    pub fn new(inst: &Instance) -> Result<Self> {
        inst.validate()?;
        let objective = match inst {
            Instance::Linear(lin) => {
                if !lin.constraints.is_empty() || lin.feasibility_threshold.is_some() {
                    return Err(Error::Unsupported(
                        "gradient ascent handles only unconstrained objectives".into(),
                    ));
                }
                Objective::Linear(lin.objective_matrix())
            }
            Instance::Quadratic(q) => Objective::Quadratic(q.w.clone()),
        };
        let manifold = inst.manifold().clone();
        let model = match &manifold {
            ManifoldDescriptor::Stiefel { .. } => None,
            other => Some(other.to_flag_signature()?.block_vector_f64()),
        };
        Ok(Self {
            manifold,
            objective,
            model,
        })
    }

    /// Shape of the ascent variable.
    pub fn variable_shape(&self) -> (usize, usize) {
        match self.model {
            None => self.manifold.point_shape(),
            Some(_) => {
                let n = self.manifold.ambient_dim();
                (n, n)
            }
        }
    }

    /// The manifold point represented by the variable `y`.
    pub fn point(&self, y: &Matrix) -> Matrix {
        match &self.model {
            None => y.clone(),
            Some(d) => manifolds::conjugate_diagonal(y, d),
        }
    }

    pub fn value(&self, y: &Matrix) -> f64 {
        self.objective.value(&self.point(y))
    }

    /// Euclidean gradient with respect to the variable; for `X = Q D Qᵀ` this
    /// is `(G + Gᵀ) Q D`.
    pub fn euclidean_gradient(&self, y: &Matrix) -> Matrix {
        let g = self.objective.gradient(&self.point(y));
        match &self.model {
            None => g,
            Some(d) => (&g + &g.transpose()).matmul(y).scale_columns(d),
        }
    }

    pub fn riemannian_gradient(&self, y: &Matrix) -> Matrix {
        stiefel_tangent_project(y, &self.euclidean_gradient(y))
    }

    /// Seeded random starting variable.
    pub fn random_start(&self, rng: &mut XorShift64Star) -> Result<Matrix> {
        let (n, k) = self.variable_shape();
        matrix::qr_orthonormalize(&manifolds::gaussian_matrix(n, k, rng))
            .or_else(|_| matrix::qr_orthonormalize(&manifolds::gaussian_matrix(n, k, rng)))
    }

    fn run(&self, cfg: &AscentConfig, index: usize) -> Result<(RestartTrace, Matrix)> {
        let mut rng = XorShift64Star::derived(cfg.seed, index as u64);
        let mut y = self.random_start(&mut rng)?;
        let mut f = self.value(&y);
        let mut history = vec![f];
        let mut iterations = 0;
        let mut grad_norm;
        loop {
            let rg = self.riemannian_gradient(&y);
            grad_norm = rg.frobenius_norm();
            iterations += 1;
            if grad_norm <= cfg.grad_tol {
                break;
            }
            let mut t = cfg.step;
            let mut accepted = None;
            while t >= MIN_STEP {
                let cand = qr_retract(&y, &rg.scale(t))?;
                let fc = self.value(&cand);
                if fc > f {
                    accepted = Some((cand, fc));
                    break;
                }
                t *= 0.5;
            }
            match accepted {
                Some((cand, fc)) => {
                    y = cand;
                    f = fc;
                    history.push(f);
                }
                None => break,
            }
            if iterations >= cfg.max_iters {
                grad_norm = self.riemannian_gradient(&y).frobenius_norm();
                break;
            }
        }
        let x = self.point(&y);
        let feasibility_residual = manifolds::membership_residual(&self.manifold, &x)?;
        Ok((
            RestartTrace {
                value: f,
                iterations,
                grad_norm,
                feasibility_residual,
                history,
            },
            x,
        ))
    }
}

/// Runs `cfg.restarts` independent ascents from seeded random starts (restart
/// `i` draws from the stream derived from `(seed, i)`) and keeps the best.
/// Restarts may run in parallel; the trace does not depend on scheduling.
pub fn ascend(inst: &Instance, cfg: &AscentConfig) -> Result<AscentTrace> {
    cfg.validate()?;
    let problem = AscentProblem::new(inst)?;
    let runs: Vec<(RestartTrace, Matrix)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| problem.run(cfg, i))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, (r, _)) in runs.iter().enumerate() {
        if r.value > runs[best].0.value {
            best = i;
        }
    }
    let best_point = runs[best].1.clone();
    let restarts: Vec<RestartTrace> = runs.into_iter().map(|(r, _)| r).collect();
    Ok(AscentTrace {
        best_value: restarts[best].value,
        best_restart: best,
        best_point,
        restarts,
    })
}
