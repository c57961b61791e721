//! Unconstrained linear optimization over a flag manifold.
//!
//! `tr(Aᵀ X)` only sees the symmetric part `S = (A + Aᵀ)/2`. Writing
//! `X = Q D Qᵀ`, the maximum pairs the eigenvalues of `S` in descending order
//! with the block vector in descending order, so the optimum is
//! `Σ λ_i c_i` and is attained at `V diag(c) Vᵀ` for an eigenbasis `V` of `S`.
//! Within a tied eigenspace the maximizer is not unique; the basis returned by
//! the eigensolver is used.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifolds::{self, FlagSignature, ManifoldDescriptor};
use crate::matrix::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// Membership residual of `X` in the flag manifold.
    pub membership: f64,
    /// `|tr(Aᵀ X) − value|`.
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagLpSolution {
    pub value: f64,
    #[serde(rename = "X")]
    pub x: Matrix,
    pub residuals: Residuals,
}

fn check_input(a: &Matrix, sig: &FlagSignature) -> Result<()> {
    let n = sig.n();
    if a.shape() != (n, n) {
        return Err(Error::Dimension(format!("A is {:?}, expected {n}x{n}", a.shape())));
    }
    if a.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("A has non-finite entries".into()));
    }
    Ok(())
}

/// Maximizes `tr(Aᵀ X)` over the flag manifold of `sig`. The parameters must
/// be descending; the last one need not be zero.
///
/// Fails with a numerical error if the maximizer misses the manifold by more
/// than `tol · n · (1 + max|a_j|)` or its objective misses the value by more
/// than `tol · (1 + ‖A‖_F)`.
pub fn solve_flag_lp(a: &Matrix, sig: &FlagSignature, tol: f64) -> Result<FlagLpSolution> {
    check_input(a, sig)?;
    if !sig.params_descending() {
        return Err(Error::Precondition("flag parameters must be sorted descending".into()));
    }
    let s = a.symmetric_part();
    let eig = matrix::sym_eig(&s, matrix::DEFAULT_TOL)?;
    let c = sig.block_vector_f64();
    let value: f64 = eig.values.iter().zip(&c).map(|(l, c)| l * c).sum();
    let x = manifolds::conjugate_diagonal(&eig.vectors, &c).symmetric_part().into_matrix();

    let membership = manifolds::membership_residual(&ManifoldDescriptor::flag(sig.clone()), &x)?;
    let objective = (a.dot(&x) - value).abs();
    let scale_c = 1.0 + c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if membership > tol * sig.n() as f64 * scale_c {
        return Err(Error::Numerical {
            message: "closed-form maximizer is off the manifold".into(),
            residual: membership,
        });
    }
    if objective > tol * (1.0 + a.frobenius_norm()) {
        return Err(Error::Numerical {
            message: "objective at the maximizer disagrees with the eigenvalue sum".into(),
            residual: objective,
        });
    }
    Ok(FlagLpSolution {
        value,
        x,
        residuals: Residuals { membership, objective },
    })
}

/// `max_σ Σ λ_i c_σ(i)` over every distinct rearrangement of the block
/// vector, with `λ` the eigenvalues of `(A + Aᵀ)/2`.
pub fn permutation_oracle_flag_lp(a: &Matrix, sig: &FlagSignature) -> Result<f64> {
    check_input(a, sig)?;
    let vertices = manifolds::permutohedron_vertices(sig)?;
    let eig = matrix::sym_eig(&a.symmetric_part(), matrix::DEFAULT_TOL)?;
    Ok(vertices
        .map(|v| {
            eig.values
                .iter()
                .zip(&v)
                .map(|(l, c)| l * crate::rational::to_f64(c))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::random_point;
    use crate::rational::{frac, int};
    use crate::rng::XorShift64Star;

    fn gaussian(n: usize, seed: u64) -> Matrix {
        let mut rng = XorShift64Star::new(seed);
        Matrix::from_row_major(n, n, (0..n * n).map(|_| rng.next_normal()).collect()).unwrap()
    }

    #[test]
    fn diagonal_examples() {
        let a = Matrix::from_diag(&[3.0, 1.0, 0.0]);
        let gr = FlagSignature::grassmann(1, 3).unwrap();
        let sol = solve_flag_lp(&a, &gr, 1e-10).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-12);
        let e1 = Matrix::from_diag(&[1.0, 0.0, 0.0]);
        assert!((&sol.x - &e1).max_abs() < 1e-12);
        assert!((permutation_oracle_flag_lp(&a, &gr).unwrap() - 3.0).abs() < 1e-12);

        let sig = FlagSignature::new(3, vec![1, 2], vec![int(2), frac(3, 2), int(0)]).unwrap();
        let sol = solve_flag_lp(&a, &sig, 1e-10).unwrap();
        assert!((sol.value - 7.5).abs() < 1e-12);
        assert!((permutation_oracle_flag_lp(&a, &sig).unwrap() - 7.5).abs() < 1e-12);

        let b = Matrix::from_diag(&[1.0, -1.0]);
        assert!((permutation_oracle_flag_lp(&b, &FlagSignature::grassmann(1, 2).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_identity_objectives() {
        let sig = FlagSignature::new(3, vec![1, 2], vec![int(2), frac(3, 2), int(0)]).unwrap();
        let sol = solve_flag_lp(&Matrix::zeros(3, 3), &sig, 1e-10).unwrap();
        assert_eq!(sol.value, 0.0);
        assert!((&sol.x - &Matrix::from_diag(&[2.0, 1.5, 0.0])).max_abs() < 1e-12);
        let oracle = permutation_oracle_flag_lp(&Matrix::identity(3), &sig).unwrap();
        assert!((oracle - 3.5).abs() < 1e-12);
    }

    #[test]
    fn nonzero_last_parameter_is_allowed() {
        let sig = FlagSignature::new(3, vec![1], vec![int(3), int(1)]).unwrap();
        let a = gaussian(3, 4);
        let sol = solve_flag_lp(&a, &sig, 1e-9).unwrap();
        assert!((sol.value - permutation_oracle_flag_lp(&a, &sig).unwrap()).abs() < 1e-9);
        let ascending = FlagSignature::new(3, vec![1], vec![int(0), int(1)]).unwrap();
        assert!(matches!(solve_flag_lp(&a, &ascending, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_objectives_match_oracle_and_bound_random_points() {
        for seed in 0..20u64 {
            let n = 2 + (seed as usize % 5);
            let sig = FlagSignature::with_default_parameters(n, vec![1]).unwrap();
            let a = gaussian(n, seed);
            let sol = solve_flag_lp(&a, &sig, 1e-9).unwrap();
            let scale = 1.0 + a.frobenius_norm();
            assert!((sol.value - permutation_oracle_flag_lp(&a, &sig).unwrap()).abs() <= 1e-8 * scale);
            let d = ManifoldDescriptor::flag(sig.clone());
            for s in 0..10 {
                let x = random_point(&d, seed * 100 + s).unwrap();
                assert!(a.dot(&x) <= sol.value + 1e-8 * scale);
            }
        }
    }

    #[test]
    fn skew_part_is_ignored() {
        let sig = FlagSignature::with_default_parameters(4, vec![1, 3]).unwrap();
        let a = gaussian(4, 9);
        let skew = {
            let k = gaussian(4, 10);
            &k - &k.transpose()
        };
        let base = solve_flag_lp(&a, &sig, 1e-9).unwrap();
        let shifted = solve_flag_lp(&(&a + &skew), &sig, 1e-9).unwrap();
        assert!((base.value - shifted.value).abs() <= 1e-10);
        assert!((&base.x - &shifted.x).max_abs() <= 1e-10);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let sig = FlagSignature::grassmann(1, 3).unwrap();
        assert!(matches!(solve_flag_lp(&Matrix::zeros(2, 2), &sig, 1e-9), Err(Error::Dimension(_))));
    }
}
