//! Pure and mixed states of a `k`-partite system, partial traces,
//! purification, random states and permutation-contraction invariants.
//!
//! Coefficients are stored row-major with the last subsystem index varying
//! fastest. Density matrices use the same convention for rows and columns.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{Float, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::combinatorics::Permutation;
use crate::subset::SubsetMask;

/// Entrywise tolerance for the Hermitian check on construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Eigenvalues above this count towards the rank of a density matrix.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;
/// Eigenvalues below `-PSD_TOLERANCE` make a matrix non-positive.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Relative singular-value threshold of the invariant rank oracle.
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("local dimensions must be positive")]
    ZeroDimension,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("trace {0} exceeds 1")]
    TraceExceedsOne(f64),
    #[error("trace must be positive, got {0}")]
    NonPositiveTrace(f64),
    #[error("subset over {subset} sites used with a {state}-partite state")]
    SubsetMismatch { subset: usize, state: usize },
    #[error("expected {expected} permutations of one common degree, got {got}")]
    PermutationMismatch { expected: usize, got: usize },
    #[error("rank oracle needs at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("expected {expected} local operators, got {got}")]
    OperatorCount { expected: usize, got: usize },
}

fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Stride of each subsystem in a flat index.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    strides
}

/// Per-subsystem digits of every flat index.
fn digit_table(dims: &[usize]) -> Vec<Vec<usize>> {
    let st = strides(dims);
    (0..total_dim(dims)).map(|i| dims.iter().zip(&st).map(|(&n, &s)| i / s % n).collect()).collect()
}

fn check_dims(dims: &[usize]) -> Result<(), StateError> {
    if dims.contains(&0) {
        return Err(StateError::ZeroDimension);
    }
    Ok(())
}

/// A (not necessarily normalized) vector in `C^{n_1} ⊗ ... ⊗ C^{n_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self, StateError> {
        check_dims(&dims)?;
        let expected = total_dim(&dims);
        if coeffs.len() != expected {
            return Err(StateError::LengthMismatch { expected, got: coeffs.len() });
        }
        Ok(PureState { dims, coeffs })
    }

    /// The basis vector `e_{i_1 ... i_k}` (0-based indices).
    pub fn basis(dims: Vec<usize>, index: &[usize]) -> Result<Self, StateError> {
        check_dims(&dims)?;
        if index.len() != dims.len() || index.iter().zip(&dims).any(|(&i, &n)| i >= n) {
            return Err(StateError::LengthMismatch { expected: dims.len(), got: index.len() });
        }
        let flat = index.iter().zip(strides(&dims)).map(|(&i, s)| i * s).sum::<usize>();
        let mut coeffs = vec![Complex64::zero(); total_dim(&dims)];
        coeffs[flat] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, coeffs })
    }

    /// `(|0...0⟩ + |1...1⟩)/√2` on `k` qubits.
    pub fn ghz(k: usize) -> Self {
        let dims = vec![2; k];
        let n = total_dim(&dims);
        let mut coeffs = vec![Complex64::zero(); n];
        let amp = Complex64::new(0.5.sqrt(), 0.0);
        coeffs[0] = amp;
        coeffs[n - 1] = amp;
        PureState { dims, coeffs }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn scaled(&self, c: Complex64) -> PureState {
        PureState { dims: self.dims.clone(), coeffs: self.coeffs.iter().map(|&x| x * c).collect() }
    }

    pub fn normalized(&self) -> PureState {
        self.scaled(Complex64::new(1.0 / self.norm_sqr().sqrt(), 0.0))
    }

    /// `self ⊗ other`, with the factors of `other` appended.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let coeffs = self.coeffs.iter().flat_map(|&a| other.coeffs.iter().map(move |&b| a * b)).collect();
        PureState { dims, coeffs }
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies `U_1 ⊗ ... ⊗ U_k`.
    pub fn apply_local(&self, ops: &[DMatrix<Complex64>]) -> Result<PureState, StateError> {
        if ops.len() != self.dims.len() {
            return Err(StateError::OperatorCount { expected: self.dims.len(), got: ops.len() });
        }
        let st = strides(&self.dims);
        let mut coeffs = self.coeffs.clone();
        for (s, op) in ops.iter().enumerate() {
            let n = self.dims[s];
            let inner = st[s];
            let block = n * inner;
            let mut next = vec![Complex64::zero(); coeffs.len()];
            for outer in (0..coeffs.len()).step_by(block) {
                for r in 0..n {
                    for c in 0..n {
                        let u = op[(r, c)];
                        if u.is_zero() {
                            continue;
                        }
                        for i in 0..inner {
                            next[outer + r * inner + i] += u * coeffs[outer + c * inner + i];
                        }
                    }
                }
            }
            coeffs = next;
        }
        Ok(PureState { dims: self.dims.clone(), coeffs })
    }
}

/// A Hermitian operator on `C^{n_1} ⊗ ... ⊗ C^{n_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix, checking its size and that it is Hermitian.
    pub fn new(dims: Vec<usize>, entries: DMatrix<Complex64>) -> Result<Self, StateError> {
        check_dims(&dims)?;
        let n = total_dim(&dims);
        if entries.nrows() != n || entries.ncols() != n {
            return Err(StateError::LengthMismatch { expected: n * n, got: entries.nrows() * entries.ncols() });
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut deviation = 0.0f64;
        for r in 0..n {
            for c in r..n {
                deviation = deviation.max((entries[(r, c)] - entries[(c, r)].conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOLERANCE * scale {
            return Err(StateError::NotHermitian(deviation));
        }
        Ok(DensityMatrix { dims, entries })
    }

    /// Row-major entries, row index outer.
    pub fn from_entries(dims: Vec<usize>, entries: &[Complex64]) -> Result<Self, StateError> {
        check_dims(&dims)?;
        let n = total_dim(&dims);
        if entries.len() != n * n {
            return Err(StateError::LengthMismatch { expected: n * n, got: entries.len() });
        }
        Self::new(dims, DMatrix::from_row_slice(n, n, entries))
    }

    /// The maximally mixed state `I/N` on the given dimensions.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self, StateError> {
        check_dims(&dims)?;
        let n = total_dim(&dims);
        Ok(DensityMatrix { dims, entries: DMatrix::identity(n, n) / Complex64::new(n as f64, 0.0) })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_rc|² for Hermitian ρ.
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Checks that the operator is a physical state: positive semidefinite
    /// with trace at most 1.
    pub fn validate_physical(&self) -> Result<(), StateError> {
        self.check_positive()?;
        let tr = self.trace();
        if tr > 1.0 + PSD_TOLERANCE {
            return Err(StateError::TraceExceedsOne(tr));
        }
        Ok(())
    }

    fn check_positive(&self) -> Result<(), StateError> {
        let ev = self.eigenvalues();
        let scale = ev.first().map_or(1.0, |x| x.abs().max(1.0));
        if let Some(&min) = ev.last() {
            if min < -PSD_TOLERANCE * scale {
                return Err(StateError::NotPositive(min));
            }
        }
        Ok(())
    }

    /// `U ρ U*` with `U = U_1 ⊗ ... ⊗ U_k`.
    pub fn apply_local(&self, ops: &[DMatrix<Complex64>]) -> Result<DensityMatrix, StateError> {
        if ops.len() != self.dims.len() {
            return Err(StateError::OperatorCount { expected: self.dims.len(), got: ops.len() });
        }
        let u = ops.iter().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, op| acc.kronecker(op));
        let entries = &u * &self.entries * u.adjoint();
        Ok(DensityMatrix { dims: self.dims.clone(), entries })
    }
}

/// `ψ ↦ ψψ*`.
pub fn projector(psi: &PureState) -> DensityMatrix {
    let v = nalgebra::DVector::from_column_slice(&psi.coeffs);
    DensityMatrix { dims: psi.dims.clone(), entries: &v * v.adjoint() }
}

/// `Tr_A ρ`: traces out the sites in `A`, returning an operator on the
/// remaining factors in their original order.
pub fn partial_trace(rho: &DensityMatrix, traced: &SubsetMask) -> Result<DensityMatrix, StateError> {
    let k = rho.parties();
    if traced.universe() != k {
        return Err(StateError::SubsetMismatch { subset: traced.universe(), state: k });
    }
    let kept_dims: Vec<usize> = (0..k).filter(|&s| !traced.contains_position(s)).map(|s| rho.dims[s]).collect();
    let traced_dims: Vec<usize> = (0..k).filter(|&s| traced.contains_position(s)).map(|s| rho.dims[s]).collect();
    let st = strides(&rho.dims);
    let kept_st: Vec<usize> = (0..k).filter(|&s| !traced.contains_position(s)).map(|s| st[s]).collect();
    let traced_st: Vec<usize> = (0..k).filter(|&s| traced.contains_position(s)).map(|s| st[s]).collect();

    let flat = |digits: &[usize], strides: &[usize]| digits.iter().zip(strides).map(|(d, s)| d * s).sum::<usize>();
    let kept_offsets: Vec<usize> = digit_table(&kept_dims).iter().map(|d| flat(d, &kept_st)).collect();
    let traced_offsets: Vec<usize> = digit_table(&traced_dims).iter().map(|d| flat(d, &traced_st)).collect();

    let nk = kept_offsets.len();
    let mut out = DMatrix::<Complex64>::zeros(nk, nk);
    for &t in &traced_offsets {
        for (a, &ra) in kept_offsets.iter().enumerate() {
            for (b, &rb) in kept_offsets.iter().enumerate() {
                out[(a, b)] += rho.entries[(ra + t, rb + t)];
            }
        }
    }
    Ok(DensityMatrix { dims: kept_dims, entries: out })
}

/// A purification `ψ` of `ρ` with the environment appended as the last
/// factor: `Tr_ENV ψψ* = ρ`.
///
/// Built from the spectral decomposition `ψ = Σ_i √p_i v_i ⊗ e_i`; the
/// environment dimension is the number of eigenvalues above
/// [`EIGENVALUE_CUTOFF`]. Each eigenvector's phase is fixed so its
/// largest-modulus entry is real and positive.
pub fn purify(rho: &DensityMatrix) -> Result<PureState, StateError> {
    let tr = rho.trace();
    if tr <= 0.0 {
        return Err(StateError::NonPositiveTrace(tr));
    }
    rho.check_positive()?;
    let eig = SymmetricEigen::new(rho.entries.clone());
    let mut pairs: Vec<(f64, usize)> =
        eig.eigenvalues.iter().enumerate().filter(|(_, &p)| p > EIGENVALUE_CUTOFF).map(|(i, &p)| (p, i)).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let rank = pairs.len();
    let n = rho.entries.nrows();
    let mut coeffs = vec![Complex64::zero(); n * rank];
    for (slot, &(p, col)) in pairs.iter().enumerate() {
        let v = eig.eigenvectors.column(col);
        let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(Complex64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        let amp = p.sqrt();
        for x in 0..n {
            coeffs[x * rank + slot] = v[x] * phase * amp;
        }
    }
    let mut dims = rho.dims.clone();
    dims.push(rank);
    Ok(PureState { dims, coeffs })
}

fn gaussian_state<R: Rng>(rng: &mut R, dims: &[usize]) -> PureState {
    let n = total_dim(dims);
    let coeffs: Vec<Complex64> = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    PureState { dims: dims.to_vec(), coeffs }.normalized()
}

/// A unit vector with independent standard complex Gaussian coefficients,
/// normalized. Identical `(dims, seed)` give identical states.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<PureState, StateError> {
    check_dims(dims)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(gaussian_state(&mut rng, dims))
}

/// A random mixed state of rank at most `rank`: the reduced state of a
/// random pure state on `dims ⊗ C^rank`.
pub fn random_mixed_state(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix, StateError> {
    check_dims(dims)?;
    if rank == 0 {
        return Err(StateError::ZeroDimension);
    }
    let mut all = dims.to_vec();
    all.push(rank);
    let psi = random_pure_state(&all, seed)?;
    let env = SubsetMask::from_members(all.len(), &[all.len()]).expect("environment site");
    partial_trace(&projector(&psi), &env)
}

/// Random unitaries `U_1, ..., U_k`, one per factor, from the QR
/// decomposition of complex Gaussian matrices.
pub fn random_local_unitaries(dims: &[usize], seed: u64) -> Vec<DMatrix<Complex64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    dims.iter()
        .map(|&n| {
            let g = DMatrix::from_fn(n, n, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            });
            let qr = g.qr();
            let r = qr.r();
            let mut q = qr.q();
            for c in 0..n {
                let d = r[(c, c)];
                let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
                for row in 0..n {
                    q[(row, c)] *= phase;
                }
            }
            q
        })
        .collect()
}

fn check_perms(perms: &[Permutation], k: usize) -> Result<usize, StateError> {
    let m = perms.first().map_or(0, Permutation::degree);
    if perms.len() != k || perms.iter().any(|p| p.degree() != m) {
        return Err(StateError::PermutationMismatch { expected: k, got: perms.len() });
    }
    Ok(m)
}

/// `Σ Π_{j=1}^{m} ψ_{i^{(j)}} · conj(ψ_{i^{(π_1(j))}_1, ..., i^{(π_k(j))}_k})`,
/// summed over all `m`-tuples of multi-indices, with one permutation of
/// `{1, ..., m}` per subsystem.
///
/// Work is `(Π n_i)^m`; intended for small oracle checks.
pub fn permutation_contraction(psi: &PureState, perms: &[Permutation]) -> Result<Complex64, StateError> {
    let m = check_perms(perms, psi.parties())?;
    let n = psi.coeffs.len();
    let digits = digit_table(&psi.dims);
    let st = strides(&psi.dims);
    let mut rows = vec![0usize; m];
    let mut total = Complex64::zero();
    loop {
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..m {
            let partner: usize = perms.iter().enumerate().map(|(s, p)| digits[rows[p.apply(j)]][s] * st[s]).sum();
            term *= psi.coeffs[rows[j]] * psi.coeffs[partner].conj();
        }
        total += term;
        if !odometer(&mut rows, n) {
            break;
        }
    }
    Ok(total)
}

/// `Σ Π_j ρ[x^{(j)}, y^{(j)}]` with `y^{(j)}_s = x^{(π_s(j))}_s`.
///
/// For `ρ = Tr_ENV ψψ*` this equals [`permutation_contraction`] of `ψ` with
/// the identity permutation on the environment.
pub fn density_permutation_contraction(rho: &DensityMatrix, perms: &[Permutation]) -> Result<Complex64, StateError> {
    let m = check_perms(perms, rho.parties())?;
    let n = rho.entries.nrows();
    let digits = digit_table(&rho.dims);
    let st = strides(&rho.dims);
    let mut rows = vec![0usize; m];
    let mut total = Complex64::zero();
    loop {
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..m {
            let partner: usize = perms.iter().enumerate().map(|(s, p)| digits[rows[p.apply(j)]][s] * st[s]).sum();
            term *= rho.entries[(rows[j], partner)];
        }
        total += term;
        if !odometer(&mut rows, n) {
            break;
        }
    }
    Ok(total)
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// `3 · (m!)^k`.
pub fn default_sample_count(k: usize, m: usize) -> usize {
    let fact: usize = (1..=m).product();
    3 * fact.pow(k as u32)
}

/// Numerical dimension of the span of permutation-contraction invariants of
/// degree `m` on `dims`, with an environment of dimension `Π dims` appended.
///
/// Columns are indexed by the `(m!)^k` tuples of permutations on the system
/// factors; the environment permutation is fixed to the identity, which
/// loses nothing because relabelling the conjugated copies maps every tuple
/// to one of that form. Each row evaluates all columns on one random state
/// of the enlarged system. The rank counts singular values above
/// [`RANK_TOLERANCE`] times the largest.
pub fn invariant_space_rank(dims: &[usize], m: usize, sample_count: usize, seed: u64) -> Result<usize, StateError> {
    check_dims(dims)?;
    let k = dims.len();
    let group = Permutation::all(m);
    let columns = group.len().pow(k as u32);
    if sample_count < columns {
        return Err(StateError::InsufficientSamples { needed: columns, got: sample_count });
    }
    let tuples: Vec<Vec<Permutation>> = (0..columns)
        .map(|mut c| {
            let mut tuple = vec![Permutation::identity(m); k];
            for slot in tuple.iter_mut().rev() {
                *slot = group[c % group.len()].clone();
                c /= group.len();
            }
            tuple
        })
        .collect();

    let mut full = dims.to_vec();
    full.push(total_dim(dims));
    let env = SubsetMask::from_members(k + 1, &[k + 1]).expect("environment site");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut matrix = DMatrix::<Complex64>::zeros(sample_count, columns);
    for row in 0..sample_count {
        let psi = gaussian_state(&mut rng, &full);
        let rho = partial_trace(&projector(&psi), &env)?;
        for (col, tuple) in tuples.iter().enumerate() {
            matrix[(row, col)] = density_permutation_contraction(&rho, tuple)?;
        }
    }
    let sv = matrix.singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > RANK_TOLERANCE * largest).count())
}
