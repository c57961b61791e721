//! Matrix models of Stiefel, Grassmann and flag manifolds.
//!
//! * Stiefel `V(k, n)`: `n x k` matrices with `XᵀX = I_k`.
//! * Grassmann `Gr(k, n)`: `n x n` projections, `X² = X = Xᵀ`, `tr X = k`.
//! * Flag `Flag(k_1, …, k_p, n)`: `Q · diag(a_1 I_{n_1}, …, a_{p+1} I_{n_{p+1}}) · Qᵀ`
//!   over `Q ∈ O(n)`, where `n_j = k_j − k_{j−1}` (`k_0 = 0`, `k_{p+1} = n`) and
//!   the model parameters `a_j` are distinct rationals.
//!
//! The diagonal of the block matrix above (the "block vector") drives the
//! derived quantities: its total `b_n`, its prefix sums `b_j`, the clique
//! threshold, and the permutohedron whose points are exactly the diagonals of
//! flag points.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::next_permutation;
use crate::matrix::{self, diag_vector, majorization_check, qr_orthonormalize, Matrix, SymmetricMatrix};
use crate::rational::{self, Rational};
use crate::rng::XorShift64Star;

pub const MAX_PERMUTOHEDRON_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct FlagSignature {
    n: usize,
    ks: Vec<usize>,
    params: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawSignature {
    n: usize,
    ks: Vec<usize>,
    params: Vec<(i64, i64)>,
}

impl TryFrom<RawSignature> for FlagSignature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        let params = raw
            .params
            .into_iter()
            .map(|(n, d)| {
                if d == 0 {
                    Err(Error::InvalidArgument("zero denominator in parameter".into()))
                } else {
                    Ok(Rational::new(n, d))
                }
            })
            .collect::<Result<_>>()?;
        FlagSignature::new(raw.n, raw.ks, params)
    }
}

impl From<FlagSignature> for RawSignature {
    fn from(sig: FlagSignature) -> Self {
        RawSignature {
            n: sig.n,
            ks: sig.ks,
            params: sig.params.iter().map(|a| (*a.numer(), *a.denom())).collect(),
        }
    }
}

impl FlagSignature {
    pub fn new(n: usize, ks: Vec<usize>, params: Vec<Rational>) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidArgument("a flag needs at least one proper subspace".into()));
        }
        if ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("dimensions {ks:?} must be positive and strictly increasing")));
        }
        if *ks.last().unwrap() >= n {
            return Err(Error::InvalidArgument(format!("dimensions {ks:?} must stay below n = {n}")));
        }
        if params.len() != ks.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} dimensions need {} parameters, got {}",
                ks.len(),
                ks.len() + 1,
                params.len()
            )));
        }
        for (i, a) in params.iter().enumerate() {
            if params[i + 1..].contains(a) {
                return Err(Error::InvalidArgument(format!(
                    "parameters must be distinct, {} repeats",
                    rational::display(a)
                )));
            }
        }
        Ok(Self { n, ks, params })
    }

    /// A flag with the parameters of [`default_parameters`].
    pub fn with_default_parameters(n: usize, ks: Vec<usize>) -> Result<Self> {
        let params = default_parameters(ks.len())?;
        Self::new(n, ks, params)
    }

    /// `Gr(k, n)` as the one-step flag with parameters `(1, 0)`.
    pub fn grassmann(k: usize, n: usize) -> Result<Self> {
        Self::new(n, vec![k], vec![rational::int(1), rational::int(0)])
    }

    /// Same dimensions and parameters in another ambient dimension.
    pub fn with_ambient(&self, n: usize) -> Result<Self> {
        Self::new(n, self.ks.clone(), self.params.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn p(&self) -> usize {
        self.ks.len()
    }

    pub fn params(&self) -> &[Rational] {
        &self.params
    }

    /// `k_p`, the dimension of the largest proper subspace.
    pub fn largest_dim(&self) -> usize {
        *self.ks.last().unwrap()
    }

    /// `n_j = k_j − k_{j−1}` for `j = 1..=p+1`.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut prev = 0;
        self.ks
            .iter()
            .chain(std::iter::once(&self.n))
            .map(|&k| {
                let size = k - prev;
                prev = k;
                size
            })
            .collect()
    }

    /// `(a_1 × n_1, a_2 × n_2, …, a_{p+1} × n_{p+1})`.
    pub fn block_vector(&self) -> Vec<Rational> {
        self.block_sizes()
            .into_iter()
            .zip(&self.params)
            .flat_map(|(size, a)| std::iter::repeat_n(*a, size))
            .collect()
    }

    pub fn block_vector_f64(&self) -> Vec<f64> {
        self.block_vector().iter().map(rational::to_f64).collect()
    }

    pub fn params_descending(&self) -> bool {
        self.params.windows(2).all(|w| w[0] > w[1])
    }

    /// The parameter rules `a_1 > … > a_p > a_{p+1} = 0` and `a_1 < 2 a_p`
    /// under which the linear feasibility reduction is exact.
    pub fn check_lp_reduction_rules(&self) -> Result<()> {
        let a = &self.params;
        let p = self.p();
        for j in 0..p {
            if a[j] <= a[j + 1] {
                return Err(Error::ParameterRule(format!(
                    "a_{} > a_{} fails ({} <= {})",
                    j + 1,
                    j + 2,
                    rational::display(&a[j]),
                    rational::display(&a[j + 1])
                )));
            }
        }
        if !a[p].is_zero() {
            return Err(Error::ParameterRule(format!(
                "a_{} = 0 fails (a_{} = {})",
                p + 1,
                p + 1,
                rational::display(&a[p])
            )));
        }
        if a[0] >= rational::int(2) * a[p - 1] {
            return Err(Error::ParameterRule(format!(
                "a_1 < 2 a_{p} fails ({} >= {})",
                rational::display(&a[0]),
                rational::display(&(rational::int(2) * a[p - 1]))
            )));
        }
        Ok(())
    }

    pub fn is_lp_reduction_ready(&self) -> bool {
        self.check_lp_reduction_rules().is_ok()
    }
}

/// `a_j = 2 − (j−1)/p` for `j = 1..=p`, and `a_{p+1} = 0`.
pub fn default_parameters(p: usize) -> Result<Vec<Rational>> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let p = p as i64;
    Ok((0..p)
        .map(|j| rational::int(2) - rational::frac(j, p))
        .chain(std::iter::once(rational::int(0)))
        .collect())
}

/// Every signature with `p` proper subspaces of dimension at most `n − 1`,
/// using [`default_parameters`], in lexicographic order of `ks`.
pub fn default_signatures(n: usize, p: usize) -> Result<Vec<FlagSignature>> {
    let mut out = Vec::new();
    let mut ks: Vec<usize> = (1..=p).collect();
    if p == 0 || p >= n {
        return Ok(out);
    }
    loop {
        out.push(FlagSignature::with_default_parameters(n, ks.clone())?);
        // Advance to the next increasing p-tuple from 1..n-1.
        let mut i = p;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if ks[i] < n - (p - i) {
                ks[i] += 1;
                for j in i + 1..p {
                    ks[j] = ks[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `b_n = Σ_j n_j a_j`, the trace shared by every flag point.
pub fn trace_constant(sig: &FlagSignature) -> Rational {
    sig.block_sizes()
        .into_iter()
        .zip(sig.params())
        .map(|(size, a)| rational::int(size as i64) * a)
        .sum()
}

/// Prefix sums `b_1, …, b_n` of the block vector.
pub fn partial_sums(sig: &FlagSignature) -> Vec<Rational> {
    let mut acc = Rational::zero();
    sig.block_vector()
        .into_iter()
        .map(|a| {
            acc += a;
            acc
        })
        .collect()
}

/// Smallest `m` such that `j/m <= b_j/b_n` for every `j = 1..=m`, exactly.
pub fn threshold_k(sig: &FlagSignature) -> Result<usize> {
    let b = partial_sums(sig);
    let bn = *b.last().unwrap();
    if bn <= Rational::zero() {
        return Err(Error::Domain(format!("trace constant {} is not positive", rational::display(&bn))));
    }
    (1..=sig.n())
        .find(|&m| threshold_predicate(&b, m))
        .ok_or_else(|| Error::Infeasible("no m <= n satisfies the threshold predicate".into()))
}

/// `j/m <= b_j/b_n` for all `j <= m`, evaluated as `j·b_n <= m·b_j` (b_n > 0).
pub fn threshold_predicate(prefix: &[Rational], m: usize) -> bool {
    let bn = *prefix.last().unwrap();
    (1..=m).all(|j| rational::int(j as i64) * bn <= rational::int(m as i64) * prefix[j - 1])
}

/// Membership of `x` in the permutohedron of the block vector (equivalently,
/// whether `x` is the diagonal of some flag point).
pub fn schur_horn_membership(x: &[Rational], sig: &FlagSignature, tol: f64) -> bool {
    let xf: Vec<f64> = x.iter().map(rational::to_f64).collect();
    schur_horn_membership_f64(&xf, sig, tol)
}

pub fn schur_horn_membership_f64(x: &[f64], sig: &FlagSignature, tol: f64) -> bool {
    x.len() == sig.n() && majorization_check(x, &sig.block_vector_f64(), tol)
}

/// Exact-arithmetic variant of [`schur_horn_membership`].
pub fn schur_horn_membership_exact(x: &[Rational], sig: &FlagSignature) -> bool {
    if x.len() != sig.n() {
        return false;
    }
    let mut xs = x.to_vec();
    let mut cs = sig.block_vector();
    xs.sort_by(|a, b| b.cmp(a));
    cs.sort_by(|a, b| b.cmp(a));
    let (mut px, mut pc) = (Rational::zero(), Rational::zero());
    for (a, b) in xs.iter().zip(&cs) {
        px += a;
        pc += b;
        if px > pc {
            return false;
        }
    }
    px == pc
}

/// Distinct permutations of the block vector, starting with the block vector
/// itself; each vertex of the permutohedron is produced exactly once.
pub struct PermutohedronVertices {
    labels: Vec<usize>,
    params: Vec<Rational>,
    done: bool,
}

impl Iterator for PermutohedronVertices {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        if self.done {
            return None;
        }
        let vertex = self.labels.iter().map(|&l| self.params[l]).collect();
        self.done = !next_permutation(&mut self.labels);
        Some(vertex)
    }
}

pub fn permutohedron_vertices(sig: &FlagSignature) -> Result<PermutohedronVertices> {
    if sig.n() > MAX_PERMUTOHEDRON_DIM {
        return Err(Error::Capacity {
            what: "permutohedron vertex enumeration",
            got: sig.n(),
            limit: MAX_PERMUTOHEDRON_DIM,
        });
    }
    let labels = sig
        .block_sizes()
        .into_iter()
        .enumerate()
        .flat_map(|(label, size)| std::iter::repeat_n(label, size))
        .collect();
    Ok(PermutohedronVertices {
        labels,
        params: sig.params().to_vec(),
        done: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawDescriptor")]
pub enum ManifoldDescriptor {
    Stiefel { k: usize, n: usize },
    Grassmann { k: usize, n: usize },
    Flag { signature: FlagSignature },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawDescriptor {
    Stiefel { k: usize, n: usize },
    Grassmann { k: usize, n: usize },
    Flag { signature: FlagSignature },
}

impl TryFrom<RawDescriptor> for ManifoldDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        match raw {
            RawDescriptor::Stiefel { k, n } => Self::stiefel(k, n),
            RawDescriptor::Grassmann { k, n } => Self::grassmann(k, n),
            RawDescriptor::Flag { signature } => Ok(Self::Flag { signature }),
        }
    }
}

impl ManifoldDescriptor {
    pub fn stiefel(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("Stiefel({k}, {n}) needs 1 <= k <= n")));
        }
        Ok(Self::Stiefel { k, n })
    }

    pub fn grassmann(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("Grassmann({k}, {n}) needs 1 <= k <= n")));
        }
        Ok(Self::Grassmann { k, n })
    }

    pub fn flag(signature: FlagSignature) -> Self {
        Self::Flag { signature }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Stiefel { n, .. } | Self::Grassmann { n, .. } => *n,
            Self::Flag { signature } => signature.n(),
        }
    }

    /// Shape of the matrices that model points.
    pub fn point_shape(&self) -> (usize, usize) {
        match self {
            Self::Stiefel { k, n } => (*n, *k),
            _ => (self.ambient_dim(), self.ambient_dim()),
        }
    }

    /// Length of `diag(X)` for points `X`.
    pub fn diag_len(&self) -> usize {
        let (r, c) = self.point_shape();
        r.min(c)
    }

    /// The flag signature of a Grassmann or flag descriptor. `Gr(n, n)` is
    /// a single point and has no flag form.
    pub fn to_flag_signature(&self) -> Result<FlagSignature> {
        match self {
            Self::Stiefel { .. } => Err(Error::InvalidArgument("a Stiefel manifold is not a flag manifold".into())),
            Self::Grassmann { k, n } => FlagSignature::grassmann(*k, *n),
            Self::Flag { signature } => Ok(signature.clone()),
        }
    }

    /// Eigenvalues of every point in block order (Grassmann and flag only).
    pub fn model_eigenvalues(&self) -> Option<Vec<f64>> {
        match self {
            Self::Stiefel { .. } => None,
            Self::Grassmann { k, n } => Some((0..*n).map(|i| if i < *k { 1.0 } else { 0.0 }).collect()),
            Self::Flag { signature } => Some(signature.block_vector_f64()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Stiefel { k, n } => format!("Stiefel({k},{n})"),
            Self::Grassmann { k, n } => format!("Grassmann({k},{n})"),
            Self::Flag { signature } => {
                let ks: Vec<String> = signature.ks().iter().map(usize::to_string).collect();
                format!("Flag({},{})", ks.join(","), signature.n())
            }
        }
    }
}

/// Largest defining-equation residual of `x` on the manifold.
///
/// Stiefel: `‖XᵀX − I‖_F`. Grassmann: max of `‖X² − X‖_F`, `‖X − Xᵀ‖_F` and
/// `|tr X − k|`. Flag: max of `‖X − Xᵀ‖_F` and the largest gap between the
/// sorted eigenvalues of `X` and the sorted block vector.
pub fn membership_residual(d: &ManifoldDescriptor, x: &Matrix) -> Result<f64> {
    if x.shape() != d.point_shape() {
        return Err(Error::Dimension(format!(
            "{} points are {:?}, got {:?}",
            d.name(),
            d.point_shape(),
            x.shape()
        )));
    }
    let asym = || (x - &x.transpose()).frobenius_norm();
    Ok(match d {
        ManifoldDescriptor::Stiefel { .. } => matrix::orthogonality_residual(x),
        ManifoldDescriptor::Grassmann { k, .. } => {
            let idem = (&x.matmul(x) - x).frobenius_norm();
            idem.max(asym()).max((x.trace() - *k as f64).abs())
        }
        ManifoldDescriptor::Flag { signature } => {
            let eig = matrix::sym_eig(&SymmetricMatrix::symmetrized(x), 1e-8)?;
            let mut target = signature.block_vector_f64();
            target.sort_by(|a, b| b.total_cmp(a));
            let gap = eig
                .values
                .iter()
                .zip(&target)
                .fold(0.0f64, |acc, (l, t)| acc.max((l - t).abs()));
            asym().max(gap)
        }
    })
}

pub fn membership(d: &ManifoldDescriptor, x: &Matrix, tol: f64) -> Result<bool> {
    membership_residual(d, x).map(|r| r <= tol)
}

/// `Q · diag(values) · Qᵀ`, mirrored to be exactly symmetric.
pub fn conjugate_diagonal(q: &Matrix, values: &[f64]) -> Matrix {
    let x = q.scale_columns(values).matmul(&q.transpose());
    SymmetricMatrix::symmetrized(&x).into_matrix()
}

pub(crate) fn gaussian_matrix(rows: usize, cols: usize, rng: &mut XorShift64Star) -> Matrix {
    Matrix::from_row_major(rows, cols, (0..rows * cols).map(|_| rng.next_normal()).collect())
        .expect("shape matches")
}

/// Haar-like random orthogonal matrix: QR of a Gaussian matrix.
pub fn random_orthogonal(n: usize, rng: &mut XorShift64Star) -> Result<Matrix> {
    qr_orthonormalize(&gaussian_matrix(n, n, rng))
}

/// Seeded random point. Stiefel points orthonormalize a Gaussian `n x k`
/// matrix; Grassmann and flag points conjugate the block-diagonal model by a
/// random orthogonal matrix. A rank-deficient draw is retried once with
/// `seed + 1`.
pub fn random_point(d: &ManifoldDescriptor, seed: u64) -> Result<Matrix> {
    let draw = |seed: u64| -> Result<Matrix> {
        let mut rng = XorShift64Star::new(seed);
        let (n, k) = d.point_shape();
        match d.model_eigenvalues() {
            None => qr_orthonormalize(&gaussian_matrix(n, k, &mut rng)),
            Some(values) => Ok(conjugate_diagonal(&random_orthogonal(n, &mut rng)?, &values)),
        }
    };
    draw(seed).or_else(|_| draw(seed.wrapping_add(1)))
}

/// `xᵀ · W · x` for a rational vector and an integer-valued `W`, exactly;
/// `None` if some entry of `w` is not exactly representable.
pub fn exact_quadratic_form(w: &SymmetricMatrix, x: &[Rational]) -> Option<Rational> {
    let n = w.n();
    let mut sum = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let wij = w.get(i, j);
            if wij != 0.0 {
                sum += rational::from_f64_exact(wij)? * x[i] * x[j];
            }
        }
    }
    Some(sum)
}

/// Largest `|x_ii − round|` style check used by decoders: is `x` diagonal
/// within `tol`?
pub fn is_diagonal_within(x: &Matrix, tol: f64) -> bool {
    x.max_off_diagonal() <= tol
}

pub fn diag_as_rational(x: &Matrix) -> Option<Vec<Rational>> {
    diag_vector(x).into_iter().map(rational::from_f64_exact).collect()
}
