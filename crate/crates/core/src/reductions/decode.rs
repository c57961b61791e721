//! Certificate decoding and the exact clique-QP value.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::{self, Certificate, CertificateKind, Graph};
use crate::manifolds::{self, FlagSignature, ManifoldDescriptor};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};

use super::Instance;

/// Far below the unit gap between admissible diagonal values.
pub const DEFAULT_DECODE_TOL: f64 = 1e-6;

fn near(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

fn structural_check(inst: &Instance, x: &Matrix, tol: f64) -> Result<Vec<f64>> {
    let shape = inst.manifold().point_shape();
    if x.shape() != shape {
        return Err(Error::Decode(format!("point is {:?}, expected {shape:?}", x.shape())));
    }
    let off = x.max_off_diagonal();
    if off > tol {
        return Err(Error::Decode(format!("point is not diagonal: off-diagonal entry {off:e}")));
    }
    let d = crate::matrix::diag_vector(x);
    let admissible: Box<dyn Fn(f64) -> bool> = match (inst, inst.manifold()) {
        (_, ManifoldDescriptor::Stiefel { .. }) => Box::new(|v| near(v.abs(), 1.0, tol)),
        (Instance::Linear(_), ManifoldDescriptor::Grassmann { .. }) => {
            Box::new(|v| near(v, 0.0, tol) || near(v, 1.0, tol))
        }
        (Instance::Linear(_), ManifoldDescriptor::Flag { signature }) => {
            let params = signature.block_vector_f64();
            Box::new(move |v| params.iter().any(|&a| near(v, a, tol)))
        }
        (Instance::Quadratic(_), _) => Box::new(|v| v >= -tol),
    };
    if let Some((i, v)) = d.iter().enumerate().find(|(_, v)| !admissible(**v)) {
        return Err(Error::Decode(format!("x_{0}{0} = {v} is not an admissible diagonal value", i + 1)));
    }
    Ok(d)
}

/// Reads the combinatorial witness off a diagonal point:
///
/// * Stiefel LP: stable set `{i : x_ii >= 1 − tol}`;
/// * Stiefel QP: cut side `{i : x_ii >= 1 − tol}`;
/// * Grassmann feasibility: stable set `{i : x_ii >= tol}`;
/// * flag feasibility: stable set `{i : x_ii >= a_p − tol}`;
/// * flag QP: clique `{i : x_ii >= tol}`.
///
/// The certificate is validated against `g`; a failure means the point did
/// not come from a correct solver.
pub fn decode_certificate(inst: &Instance, x: &Matrix, g: &Graph, tol: f64) -> Result<Certificate> {
    let d = structural_check(inst, x, tol)?;
    if d.len() != g.m() {
        return Err(Error::Decode(format!("diagonal has length {} but the graph has {} vertices", d.len(), g.m())));
    }
    let support = |cut: f64| -> Vec<usize> { (0..d.len()).filter(|&i| d[i] >= cut).collect() };
    let cert = match (inst, inst.manifold()) {
        (Instance::Linear(_), ManifoldDescriptor::Stiefel { .. }) => {
            let s = support(1.0 - tol);
            Certificate::new(CertificateKind::StableSet, s.iter().copied(), s.len())
        }
        (Instance::Quadratic(_), ManifoldDescriptor::Stiefel { .. }) => {
            let s = support(1.0 - tol);
            Certificate::new(CertificateKind::CutPartition, s.iter().copied(), graphs::cut_size(g, &s))
        }
        (Instance::Linear(_), ManifoldDescriptor::Grassmann { .. }) => {
            let s = support(tol);
            Certificate::new(CertificateKind::StableSet, s.iter().copied(), s.len())
        }
        (Instance::Linear(_), ManifoldDescriptor::Flag { signature }) => {
            let ap = rational::to_f64(&signature.params()[signature.p() - 1]);
            let s = support(ap - tol);
            Certificate::new(CertificateKind::StableSet, s.iter().copied(), s.len())
        }
        (Instance::Quadratic(_), _) => {
            let s = support(tol);
            Certificate::new(CertificateKind::Clique, s.iter().copied(), s.len())
        }
    };
    cert.validate(g)?;
    Ok(cert)
}

fn clique_above_threshold(g: &Graph, sig: &FlagSignature) -> Result<(usize, Certificate)> {
    if sig.n() != g.m() {
        return Err(Error::Dimension(format!("signature has n = {} but the graph has {} vertices", sig.n(), g.m())));
    }
    let threshold = manifolds::threshold_k(sig)?;
    let (omega, clique) = graphs::clique_number(g)?;
    if omega <= threshold {
        return Err(Error::Precondition(format!(
            "clique number {omega} does not exceed the threshold {threshold}; the maximum is not characterized there"
        )));
    }
    Ok((omega, clique))
}

/// `b_n² (1 − 1/ω)`, the maximum of `Σ_{(i,j) ∈ E} x_ii x_jj` over the flag
/// manifold when `ω` exceeds the threshold index.
pub fn flag_qp_value(g: &Graph, sig: &FlagSignature) -> Result<Rational> {
    let (omega, _) = clique_above_threshold(g, sig)?;
    let bn = manifolds::trace_constant(sig);
    Ok(bn * bn * (rational::int(1) - rational::frac(1, omega as i64)))
}

/// Maximizing diagonal: `b_n / ω` on a maximum clique, zero elsewhere.
pub fn flag_qp_witness_exact(g: &Graph, sig: &FlagSignature) -> Result<Vec<Rational>> {
    let (omega, clique) = clique_above_threshold(g, sig)?;
    let share = manifolds::trace_constant(sig) / rational::int(omega as i64);
    let mut x = vec![Rational::zero(); g.m()];
    for &v in &clique.vertices {
        x[v] = share;
    }
    if !manifolds::schur_horn_membership_exact(&x, sig) {
        return Err(Error::Numerical {
            message: "clique witness is not majorized by the block vector".into(),
            residual: 0.0,
        });
    }
    Ok(x)
}

pub fn flag_qp_witness(g: &Graph, sig: &FlagSignature) -> Result<Matrix> {
    let x = flag_qp_witness_exact(g, sig)?;
    Ok(Matrix::from_diag(&x.iter().map(rational::to_f64).collect::<Vec<_>>()))
}

/// Nearest point of the grid `offset + spacing · t` to `v`.
pub fn round_to_integer_grid(v: f64, offset: i64, spacing: i64) -> Result<i64> {
    if spacing < 1 {
        return Err(Error::InvalidArgument(format!("grid spacing {spacing} must be at least 1")));
    }
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot round {v}")));
    }
    let t = ((v - offset as f64) / spacing as f64).floor() as i64;
    let below = offset + spacing * t;
    let above = below + spacing;
    let (db, da) = (v - below as f64, above as f64 - v);
    if (db - da).abs() <= 1e-9 {
        return Err(Error::Ambiguous { value: v, below, above });
    }
    Ok(if db < da { below } else { above })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::reductions::build;

    #[test]
    fn decodes_stiefel_witnesses() {
        let p3 = Graph::path(3).unwrap();
        let inst: Instance = build::build_stiefel_lp(&p3, 3).unwrap().into();
        let x = Matrix::from_diag(&[1.0, -1.0, 1.0]);
        let cert = decode_certificate(&inst, &x, &p3, DEFAULT_DECODE_TOL).unwrap();
        assert_eq!((cert.kind, cert.labels(), cert.size), (CertificateKind::StableSet, vec![1, 3], 2));

        let k3 = Graph::complete(3).unwrap();
        let inst: Instance = build::build_stiefel_qp(&k3, 3).unwrap().into();
        let cert = decode_certificate(&inst, &Matrix::from_diag(&[1.0, 1.0, -1.0]), &k3, 1e-6).unwrap();
        assert_eq!((cert.kind, cert.labels(), cert.size), (CertificateKind::CutPartition, vec![1, 2], 2));
    }

    #[test]
    fn rejects_bad_points() {
        let k3 = Graph::complete(3).unwrap();
        let inst: Instance = build::build_stiefel_lp(&k3, 3).unwrap().into();
        let not_stable = Matrix::from_diag(&[1.0, 1.0, -1.0]);
        assert!(matches!(decode_certificate(&inst, &not_stable, &k3, 1e-6), Err(Error::Decode(_))));
        let mut off = Matrix::from_diag(&[1.0, -1.0, -1.0]);
        off[(0, 1)] = 0.1;
        assert!(matches!(decode_certificate(&inst, &off, &k3, 1e-6), Err(Error::Decode(_))));
        let half = Matrix::from_diag(&[0.5, -1.0, -1.0]);
        assert!(matches!(decode_certificate(&inst, &half, &k3, 1e-6), Err(Error::Decode(_))));
    }

    #[test]
    fn decodes_feasibility_and_clique_witnesses() {
        let c4 = Graph::cycle(4).unwrap();
        let inst: Instance = build::build_grassmann_feasibility(&c4, 2).unwrap().into();
        let cert = decode_certificate(&inst, &Matrix::from_diag(&[1.0, 0.0, 1.0, 0.0]), &c4, 1e-6).unwrap();
        assert_eq!(cert.labels(), vec![1, 3]);

        let sig = FlagSignature::new(4, vec![1, 2], vec![int(2), frac(3, 2), int(0)]).unwrap();
        let inst: Instance = build::build_flag_feasibility(&c4, &sig).unwrap().into();
        let cert = decode_certificate(&inst, &Matrix::from_diag(&[2.0, 0.0, 1.5, 0.0]), &c4, 1e-6).unwrap();
        assert_eq!(cert.labels(), vec![1, 3]);

        let k4 = Graph::complete(4).unwrap();
        let gr = FlagSignature::grassmann(2, 4).unwrap();
        let inst: Instance = build::build_flag_qp(&k4, &gr).unwrap().into();
        let x = flag_qp_witness(&k4, &gr).unwrap();
        let cert = decode_certificate(&inst, &x, &k4, 1e-6).unwrap();
        assert_eq!((cert.kind, cert.labels()), (CertificateKind::Clique, vec![1, 2, 3, 4]));
    }

    #[test]
    fn flag_qp_values() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(flag_qp_value(&k4, &FlagSignature::grassmann(2, 4).unwrap()).unwrap(), int(3));
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(flag_qp_value(&k3, &FlagSignature::grassmann(1, 3).unwrap()).unwrap(), frac(2, 3));
        let c5 = Graph::cycle(5).unwrap();
        assert!(matches!(
            flag_qp_value(&c5, &FlagSignature::grassmann(2, 5).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn flag_qp_witnesses_attain_the_value() {
        let cases = [
            (Graph::complete(4).unwrap(), FlagSignature::grassmann(2, 4).unwrap(), frac(1, 2)),
            (Graph::complete(3).unwrap(), FlagSignature::grassmann(1, 3).unwrap(), frac(1, 3)),
            (Graph::complete(2).unwrap(), FlagSignature::grassmann(1, 2).unwrap(), frac(1, 2)),
        ];
        for (g, sig, share) in cases {
            let x = flag_qp_witness_exact(&g, &sig).unwrap();
            assert_eq!(x, vec![share; g.m()]);
            assert_eq!(graphs::directed_pair_sum(&g, &x), flag_qp_value(&g, &sig).unwrap());
        }
        let k3 = Graph::complete(3).unwrap();
        let mut g = Graph::new(4, k3.edges()).unwrap();
        g = Graph::new(4, g.edges().chain([(2, 3)])).unwrap();
        let x = flag_qp_witness_exact(&g, &FlagSignature::grassmann(1, 4).unwrap()).unwrap();
        assert_eq!(x, vec![frac(1, 3), frac(1, 3), frac(1, 3), int(0)]);
    }

    #[test]
    fn grid_rounding() {
        assert_eq!(round_to_integer_grid(0.9, -3, 2).unwrap(), 1);
        assert_eq!(round_to_integer_grid(-1.0, -3, 2).unwrap(), -1);
        assert_eq!(round_to_integer_grid(5.0, 1, 4).unwrap(), 5);
        assert_eq!(round_to_integer_grid(6.7, 1, 4).unwrap(), 5);
        assert_eq!(round_to_integer_grid(7.2, 1, 4).unwrap(), 9);
        assert!(matches!(round_to_integer_grid(0.0, -3, 2), Err(Error::Ambiguous { below: -1, above: 1, .. })));
        assert!(round_to_integer_grid(1.0, 0, 0).is_err());
        assert!(round_to_integer_grid(f64::NAN, 0, 2).is_err());
    }
}
