//! Reduction instances built from graphs, their exact solvers, certificate
//! decoding, and end-to-end verification of each reduction identity.
//!
//! Instances serialize to self-contained JSON with 1-based indices:
//!
//! ```json
//! {"kind": "linear",
//!  "manifold": {"kind": "stiefel", "k": 2, "n": 2},
//!  "objective": [[1, 1, 1.0], [2, 2, 1.0]],
//!  "constraints": [{"terms": [[1, 2, 1.0]], "rel": "=", "rhs": [0, 1]}, …],
//!  "feasibility_threshold": null}
//! ```
//!
//! Quadratic instances carry `"W"` as dense rows instead of an objective and
//! constraints.

mod build;
mod decode;
mod exact;
mod verify;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::manifolds::ManifoldDescriptor;
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::rational::{self, Rational};

pub use build::{
    build_flag_feasibility, build_flag_lp, build_flag_qp, build_grassmann_feasibility, build_stiefel_feasibility,
    build_stiefel_lp, build_stiefel_qp,
};
pub use decode::{
    decode_certificate, flag_qp_value, flag_qp_witness, flag_qp_witness_exact, round_to_integer_grid,
    DEFAULT_DECODE_TOL,
};
pub use exact::{
    check_feasibility_exact, solve_exact, solve_hypercube_qp_exact, solve_stiefel_diag_exact, DiagSolution,
    ExactSolution, Feasibility, MAX_EXACT_DIM,
};
pub use verify::{parameter_sweep, verify_sweep, verify_theorem, ReportValue, Theorem, VerificationReport, VerifyOptions};

/// One coefficient `coeff · x_{row, col}` (0-based in memory, 1-based in JSON).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub coeff: f64,
}

impl Triplet {
    pub fn new(row: usize, col: usize, coeff: f64) -> Self {
        Self { row, col, coeff }
    }
}

impl Serialize for Triplet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        t.serialize_element(&(self.row + 1))?;
        t.serialize_element(&(self.col + 1))?;
        t.serialize_element(&self.coeff)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Triplet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct TripletVisitor;

        impl<'de> Visitor<'de> for TripletVisitor {
            type Value = Triplet;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("[i, j, coeff] with 1-based indices")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Triplet, A::Error> {
                let i: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let j: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let coeff: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                if i == 0 || j == 0 {
                    return Err(de::Error::custom("triplet indices are 1-based"));
                }
                Ok(Triplet::new(i - 1, j - 1, coeff))
            }
        }

        deserializer.deserialize_tuple(3, TripletVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `Σ coeff · x_ij  (<= | =)  rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<Triplet>,
    pub rel: Relation,
    #[serde(with = "rational::pair")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(terms: Vec<Triplet>, rel: Relation, rhs: Rational) -> Self {
        Self { terms, rel, rhs }
    }

    /// `x_ij = 0`.
    pub fn zero_entry(row: usize, col: usize) -> Self {
        Self::new(vec![Triplet::new(row, col, 1.0)], Relation::Eq, rational::int(0))
    }

    /// `x_ii + x_jj <= rhs`.
    pub fn diagonal_pair(i: usize, j: usize, rhs: Rational) -> Self {
        Self::new(vec![Triplet::new(i, i, 1.0), Triplet::new(j, j, 1.0)], Relation::Le, rhs)
    }

    pub fn is_satisfied_by(&self, x: &Matrix, tol: f64) -> bool {
        let lhs: f64 = self.terms.iter().map(|t| t.coeff * x[(t.row, t.col)]).sum();
        let rhs = rational::to_f64(&self.rhs);
        match self.rel {
            Relation::Le => lhs <= rhs + tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

/// Maximize `tr(Cᵀ X)` (with `C` given by `objective`) over the manifold
/// subject to `constraints`. A pure feasibility problem has an empty objective;
/// `feasibility_threshold`, when set, adds the cut `tr(Cᵀ X) >= threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearInstance {
    pub manifold: ManifoldDescriptor,
    pub objective: Vec<Triplet>,
    pub constraints: Vec<Constraint>,
    #[serde(default, with = "rational::opt_pair")]
    pub feasibility_threshold: Option<Rational>,
}

impl LinearInstance {
    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.manifold.point_shape();
        let in_range = |t: &Triplet| t.row < rows && t.col < cols && t.coeff.is_finite();
        let all = self.objective.iter().chain(self.constraints.iter().flat_map(|c| &c.terms));
        for t in all {
            if !in_range(t) {
                return Err(Error::Dimension(format!(
                    "term ({}, {}) outside {rows}x{cols} or non-finite coefficient",
                    t.row + 1,
                    t.col + 1
                )));
            }
        }
        Ok(())
    }

    /// The dense objective matrix `C`.
    pub fn objective_matrix(&self) -> Matrix {
        let (rows, cols) = self.manifold.point_shape();
        let mut c = Matrix::zeros(rows, cols);
        for t in &self.objective {
            c[(t.row, t.col)] += t.coeff;
        }
        c
    }

    pub fn objective_value(&self, x: &Matrix) -> f64 {
        self.objective.iter().map(|t| t.coeff * x[(t.row, t.col)]).sum()
    }

    pub fn is_feasibility_problem(&self) -> bool {
        self.objective.is_empty()
    }
}

/// Maximize `diag(X)ᵀ · W · diag(X)` over the manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticInstance {
    pub manifold: ManifoldDescriptor,
    #[serde(rename = "W")]
    pub w: SymmetricMatrix,
}

impl QuadraticInstance {
    pub fn validate(&self) -> Result<()> {
        if self.w.n() != self.manifold.diag_len() {
            return Err(Error::Dimension(format!(
                "W is {0}x{0} but diag(X) has length {1} on {2}",
                self.w.n(),
                self.manifold.diag_len(),
                self.manifold.name()
            )));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &Matrix) -> f64 {
        self.w.quadratic_form(&crate::matrix::diag_vector(x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Instance {
    Linear(LinearInstance),
    Quadratic(QuadraticInstance),
}

impl Instance {
    pub fn manifold(&self) -> &ManifoldDescriptor {
        match self {
            Self::Linear(l) => &l.manifold,
            Self::Quadratic(q) => &q.manifold,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Linear(l) => l.validate(),
            Self::Quadratic(q) => q.validate(),
        }
    }

    pub fn objective_value(&self, x: &Matrix) -> f64 {
        match self {
            Self::Linear(l) => l.objective_value(x),
            Self::Quadratic(q) => q.objective_value(x),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

impl From<LinearInstance> for Instance {
    fn from(l: LinearInstance) -> Self {
        Self::Linear(l)
    }
}

impl From<QuadraticInstance> for Instance {
    fn from(q: QuadraticInstance) -> Self {
        Self::Quadratic(q)
    }
}
