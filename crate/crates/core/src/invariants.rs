//! Explicit LU invariants.
//!
//! * `I_A(ψ)`: squared norm of the projection of `ψ ⊗ ψ ∈ S²(H)` onto the
//!   irreducible component `V_A` in which the factors in `A` carry their
//!   alternating square and the rest their symmetric square.
//! * `J_A(ρ) = Tr((Tr_A ρ)²)`.
//! * The two families are related by a subset-parity (Walsh-Hadamard)
//!   transform on vectors indexed by all `2^k` subsets.
//! * `η_A`, the Meyer-Wallach measure `Q`, and the degree-`2m` analogues of
//!   `I_A` built from explicit orthogonal bases of `V_A ⊆ S^m(H)`.
//!
//! Symmetric tensors live inside `H^{⊗m}` with the symmetric product of
//! basis vectors taken as the average over all orderings, which gives
//! `‖ψ^m‖ = ‖ψ‖^m`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_complex::Complex64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::combinatorics::Permutation;
use crate::states::{partial_trace, projector, DensityMatrix, PureState, StateError};
use crate::subset::SubsetMask;

/// Tolerance for normalization preconditions and for the agreement of the
/// two Meyer-Wallach formulas.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Largest degree accepted by [`higher_invariant`].
pub const MAX_HIGHER_DEGREE: usize = 3;
/// Largest total dimension accepted by [`higher_invariant`].
pub const MAX_HIGHER_DIMENSION: usize = 81;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("subset over {subset} sites used with a {state}-partite state")]
    SubsetMismatch { subset: usize, state: usize },
    #[error("subset {0} has an odd number of elements")]
    OddSubset(SubsetMask),
    #[error("inadmissible index data: {0}")]
    Inadmissible(&'static str),
    #[error("η_A needs a proper nonempty subset with nontrivial dimension, got {0}")]
    DegenerateSubset(SubsetMask),
    #[error("state is not normalized (got {0})")]
    NotNormalized(f64),
    #[error("Meyer-Wallach forms disagree: {j_form} vs {i_form}")]
    FormsDisagree { j_form: f64, i_form: f64 },
    #[error("refusing degree {m} on total dimension {total_dim} (limits m <= {MAX_HIGHER_DEGREE}, dim <= {MAX_HIGHER_DIMENSION})")]
    TooLarge { m: usize, total_dim: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

fn check_subset(a: &SubsetMask, k: usize) -> Result<(), InvariantError> {
    if a.universe() != k {
        return Err(InvariantError::SubsetMismatch { subset: a.universe(), state: k });
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut st = vec![1; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        st[s] = st[s + 1] * dims[s + 1];
    }
    st
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Pairs `(i_0, i_1)` with `i_0 <= i_1 < n`.
fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

/// `I_A(ψ) = 2^{-k} Σ 2^{-c} |Σ_B (-1)^{|A∩B|} ψ_{i_B} ψ_{i_{B^c}}|²`.
///
/// The outer sum runs over index pairs `i_{0,j} <= i_{1,j}` for every
/// factor, `c` counts the factors with `i_{0,j} = i_{1,j}`, and `i_B` takes
/// the second index exactly on the factors in `B`. Defined for every `A`;
/// it vanishes when `|A|` is odd.
pub fn invariant_i(psi: &PureState, a: &SubsetMask) -> Result<f64, InvariantError> {
    let k = psi.parties();
    check_subset(a, k)?;
    let dims = psi.dims();
    let st = strides(dims);
    let pairs: Vec<Vec<(usize, usize)>> = dims.iter().map(|&n| ordered_pairs(n)).collect();
    let coeffs = psi.coeffs();
    let signs: Vec<f64> = SubsetMask::all(k).map(|b| parity(a.intersection_size(&b))).collect();

    let mut choice = vec![0usize; k];
    let mut total = 0.0;
    loop {
        let chosen: Vec<(usize, usize)> = choice.iter().enumerate().map(|(j, &c)| pairs[j][c]).collect();
        let coincident = chosen.iter().filter(|(x, y)| x == y).count();
        let mut inner = Complex64::zero();
        for (bits, &sign) in signs.iter().enumerate() {
            let mut x = 0;
            let mut y = 0;
            for (j, &(i0, i1)) in chosen.iter().enumerate() {
                let (p, q) = if bits >> j & 1 == 1 { (i1, i0) } else { (i0, i1) };
                x += p * st[j];
                y += q * st[j];
            }
            inner += coeffs[x] * coeffs[y] * sign;
        }
        total += inner.norm_sqr() / (1u64 << coincident) as f64;
        if !advance(&mut choice, |j| pairs[j].len()) {
            break;
        }
    }
    Ok(total / (1u64 << k) as f64)
}

fn advance<F: Fn(usize) -> usize>(choice: &mut [usize], len: F) -> bool {
    for j in (0..choice.len()).rev() {
        choice[j] += 1;
        if choice[j] < len(j) {
            return true;
        }
        choice[j] = 0;
    }
    false
}

/// `J_A(ρ) = Tr((Tr_A ρ)²)`.
pub fn invariant_j(rho: &DensityMatrix, a: &SubsetMask) -> Result<f64, InvariantError> {
    check_subset(a, rho.parties())?;
    Ok(partial_trace(rho, a)?.purity())
}

/// Real values indexed by all `2^k` subsets in binary order.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVector {
    k: usize,
    values: Vec<f64>,
}

impl InvariantVector {
    pub fn new(k: usize, values: Vec<f64>) -> Result<Self, InvariantError> {
        let expected = 1usize << k;
        if values.len() != expected {
            return Err(InvariantError::LengthMismatch { expected, got: values.len() });
        }
        Ok(InvariantVector { k, values })
    }

    pub fn parties(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: &SubsetMask) -> f64 {
        self.values[a.index()]
    }

    /// `max_S |self_S - other_S|`.
    pub fn max_abs_diff(&self, other: &InvariantVector) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// All `I_A(ψ)`.
pub fn i_vector(psi: &PureState) -> Result<InvariantVector, InvariantError> {
    let k = psi.parties();
    let values = SubsetMask::all(k).map(|a| invariant_i(psi, &a)).collect::<Result<_, _>>()?;
    InvariantVector::new(k, values)
}

/// All `J_A(ρ)`.
pub fn j_vector(rho: &DensityMatrix) -> Result<InvariantVector, InvariantError> {
    let k = rho.parties();
    let values = SubsetMask::all(k).map(|a| invariant_j(rho, &a)).collect::<Result<_, _>>()?;
    InvariantVector::new(k, values)
}

/// In-place `x_S ↦ Σ_A (-1)^{|A∩S|} x_A` over subsets in binary order.
///
/// Applying it twice multiplies by `2^k`. Panics unless the length is a
/// power of two.
pub fn parity_transform<T>(values: &mut [T])
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let n = values.len();
    assert!(n.is_power_of_two(), "length must be 2^k");
    let mut half = 1;
    while half < n {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = x.clone() + y.clone();
                let diff = x.clone() - y.clone();
                *x = sum;
                *y = diff;
            }
        }
        half *= 2;
    }
}

/// `J_S = Σ_A (-1)^{|A∩S|} I_A`.
pub fn j_from_i(i: &InvariantVector) -> InvariantVector {
    let mut values = i.values.clone();
    parity_transform(&mut values);
    InvariantVector { k: i.k, values }
}

/// `I_A = 2^{-k} Σ_B (-1)^{|A∩B|} J_B`.
pub fn i_from_j(j: &InvariantVector) -> InvariantVector {
    let mut values = j.values.clone();
    parity_transform(&mut values);
    let scale = 1.0 / (1u64 << j.k) as f64;
    values.iter_mut().for_each(|v| *v *= scale);
    InvariantVector { k: j.k, values }
}

/// `η_A = D/(D-1) · (1 - J_A)` with `D = Π_{i∈A} n_i`.
pub fn eta(rho: &DensityMatrix, a: &SubsetMask) -> Result<f64, InvariantError> {
    check_subset(a, rho.parties())?;
    let d: usize = a.members().iter().map(|&s| rho.dims()[s - 1]).product();
    if a.is_empty() || a.is_full() || d < 2 {
        return Err(InvariantError::DegenerateSubset(*a));
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(InvariantError::NotNormalized(tr));
    }
    let d = d as f64;
    Ok(d / (d - 1.0) * (1.0 - invariant_j(rho, a)?))
}

/// Both forms of the Meyer-Wallach measure:
/// `(2 - (2/k) Σ_i J_{{i}}, Σ_A (4|A|/k) I_A)`.
pub fn meyer_wallach_forms(psi: &PureState) -> Result<(f64, f64), InvariantError> {
    let k = psi.parties();
    let norm = Float::sqrt(psi.norm_sqr());
    if k == 0 || (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(InvariantError::NotNormalized(norm));
    }
    let rho = projector(psi);
    let kf = k as f64;
    let mut purity_sum = 0.0;
    for site in 1..=k {
        let single = SubsetMask::from_members(k, &[site]).expect("site in range");
        purity_sum += invariant_j(&rho, &single)?;
    }
    let j_form = 2.0 - 2.0 / kf * purity_sum;
    let i_form = SubsetMask::all(k)
        .map(|a| Ok(4.0 * a.len() as f64 / kf * invariant_i(psi, &a)?))
        .sum::<Result<f64, InvariantError>>()?;
    Ok((j_form, i_form))
}

/// Meyer-Wallach measure `Q(ψ)` from single-site purities, after checking
/// it against the `I_A` expansion.
pub fn meyer_wallach(psi: &PureState) -> Result<f64, InvariantError> {
    let (j_form, i_form) = meyer_wallach_forms(psi)?;
    if (j_form - i_form).abs() > NORMALIZATION_TOLERANCE {
        return Err(InvariantError::FormsDisagree { j_form, i_form });
    }
    Ok(j_form)
}

/// An element of `S^m(H)` written as `Σ_M c_M s_M`, where `M` runs over
/// multisets of flat basis indices and `s_M` is the average of the tensor
/// products of the members of `M` over all orderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricTensor {
    dims: Vec<usize>,
    m: usize,
    terms: BTreeMap<Vec<usize>, i64>,
}

impl SymmetricTensor {
    fn new(dims: &[usize], m: usize) -> Self {
        SymmetricTensor { dims: dims.to_vec(), m, terms: BTreeMap::new() }
    }

    fn add_term(&mut self, mut indices: Vec<usize>, coeff: i64) {
        indices.sort_unstable();
        let entry = self.terms.entry(indices.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&indices);
        }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Monomials (sorted flat indices) with their integer coefficients.
    pub fn terms(&self) -> &BTreeMap<Vec<usize>, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `⟨s_M, s_M⟩ = Π_x mult_x! / m!`.
    fn monomial_norm_sqr(&self, indices: &[usize]) -> f64 {
        let mut weight = 1.0;
        let mut run = 1;
        for w in indices.windows(2) {
            if w[0] == w[1] {
                run += 1;
                weight *= run as f64;
            } else {
                run = 1;
            }
        }
        let fact: f64 = (1..=self.m).map(|i| i as f64).product();
        weight / fact
    }

    pub fn inner(&self, other: &SymmetricTensor) -> f64 {
        self.terms
            .iter()
            .filter_map(|(key, &c)| other.terms.get(key).map(|&d| (c * d) as f64 * self.monomial_norm_sqr(key)))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self)
    }

    /// `⟨v, ψ^{⊗m}⟩ = Σ_M c_M Π_{x∈M} ψ_x` (coefficients are real).
    pub fn overlap(&self, psi: &PureState) -> Complex64 {
        let c = psi.coeffs();
        self.terms
            .iter()
            .map(|(key, &coeff)| key.iter().fold(Complex64::new(coeff as f64, 0.0), |acc, &x| acc * c[x]))
            .sum()
    }

    /// Dense coefficients in `H^{⊗m}`, first tensor factor slowest.
    pub fn to_dense(&self) -> Vec<f64> {
        let n: usize = self.dims.iter().product();
        let mut dense = vec![0.0; n.pow(self.m as u32)];
        let fact: f64 = (1..=self.m).map(|i| i as f64).product();
        for (key, &c) in &self.terms {
            // Each distinct ordering of the multiset carries c / m!.
            let mut orderings: Vec<Vec<usize>> = Vec::new();
            for p in Permutation::all(self.m) {
                let ordered: Vec<usize> = (0..self.m).map(|l| key[p.apply(l)]).collect();
                orderings.push(ordered);
            }
            for ordered in orderings {
                let flat = ordered.iter().fold(0, |acc, &x| acc * n + x);
                dense[flat] += c as f64 / fact;
            }
        }
        dense
    }
}

fn check_even(a: &SubsetMask) -> Result<(), InvariantError> {
    if a.len() % 2 == 1 {
        return Err(InvariantError::OddSubset(*a));
    }
    Ok(())
}

/// `v = Σ_B (-1)^{|A∩B|} e_{i_B} e_{i_{B^c}}` for index pairs
/// `(i_{0,j}, i_{1,j})` (0-based), one per factor.
///
/// Requires `i_{0,j} <= i_{1,j} < n_j`, strict inequality on the factors in
/// `A`, and `|A|` even.
pub fn basis_vector_m2(
    dims: &[usize],
    a: &SubsetMask,
    pairs: &[(usize, usize)],
) -> Result<SymmetricTensor, InvariantError> {
    let k = dims.len();
    check_subset(a, k)?;
    check_even(a)?;
    if pairs.len() != k {
        return Err(InvariantError::Inadmissible("one index pair per factor"));
    }
    for (j, &(i0, i1)) in pairs.iter().enumerate() {
        if i0 > i1 || i1 >= dims[j] {
            return Err(InvariantError::Inadmissible("index pairs must satisfy i0 <= i1 < n"));
        }
        if a.contains_position(j) && i0 == i1 {
            return Err(InvariantError::Inadmissible("index pairs must differ on the alternating factors"));
        }
    }
    let st = strides(dims);
    let mut v = SymmetricTensor::new(dims, 2);
    for b in SubsetMask::all(k) {
        let mut x = 0;
        let mut y = 0;
        for (j, &(i0, i1)) in pairs.iter().enumerate() {
            let (p, q) = if b.contains_position(j) { (i1, i0) } else { (i0, i1) };
            x += p * st[j];
            y += q * st[j];
        }
        let sign = if a.intersection_size(&b).is_multiple_of(2) { 1 } else { -1 };
        v.add_term(vec![x, y], sign);
    }
    Ok(v)
}

/// `Σ_{π_1..π_k ∈ S_m} Π_{j∈A} sgn(π_j) · e_{col_1} ··· e_{col_m}` where
/// column `l` picks `table[j][π_j(l)]` in factor `j`.
///
/// Rows of factors outside `A` must be weakly increasing, rows of factors
/// in `A` strictly increasing, all entries below `n_j` (0-based).
pub fn higher_basis_vector(
    dims: &[usize],
    a: &SubsetMask,
    m: usize,
    table: &[Vec<usize>],
) -> Result<SymmetricTensor, InvariantError> {
    let k = dims.len();
    check_subset(a, k)?;
    check_even(a)?;
    if m == 0 {
        return Err(InvariantError::ZeroDegree);
    }
    if table.len() != k || table.iter().any(|row| row.len() != m) {
        return Err(InvariantError::Inadmissible("index table must be k rows of m entries"));
    }
    for (j, row) in table.iter().enumerate() {
        if row.iter().any(|&i| i >= dims[j]) {
            return Err(InvariantError::Inadmissible("index out of range"));
        }
        let strict = a.contains_position(j);
        let ordered = row.windows(2).all(|w| if strict { w[0] < w[1] } else { w[0] <= w[1] });
        if !ordered {
            return Err(InvariantError::Inadmissible("rows must be (strictly on A) increasing"));
        }
    }
    let st = strides(dims);
    let group = Permutation::all(m);
    let signs: Vec<i64> = group.iter().map(Permutation::sign).collect();
    let mut v = SymmetricTensor::new(dims, m);
    let mut choice = vec![0usize; k];
    loop {
        let coeff: i64 = (0..k).filter(|&j| a.contains_position(j)).map(|j| signs[choice[j]]).product();
        let columns: Vec<usize> =
            (0..m).map(|l| (0..k).map(|j| table[j][group[choice[j]].apply(l)] * st[j]).sum()).collect();
        v.add_term(columns, coeff);
        if !advance(&mut choice, |_| group.len()) {
            break;
        }
    }
    Ok(v)
}

fn increasing_rows(n: usize, m: usize, strict: bool) -> Vec<Vec<usize>> {
    fn extend(start: usize, n: usize, m: usize, strict: bool, row: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if row.len() == m {
            out.push(row.clone());
            return;
        }
        for i in start..n {
            row.push(i);
            extend(if strict { i + 1 } else { i }, n, m, strict, row, out);
            row.pop();
        }
    }
    let mut out = Vec::new();
    extend(0, n, m, strict, &mut Vec::new(), &mut out);
    out
}

/// Every admissible index table for `(A, m)`, in lexicographic order.
pub fn admissible_tables(dims: &[usize], a: &SubsetMask, m: usize) -> Vec<Vec<Vec<usize>>> {
    let rows: Vec<Vec<Vec<usize>>> =
        dims.iter().enumerate().map(|(j, &n)| increasing_rows(n, m, a.contains_position(j))).collect();
    if rows.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; dims.len()];
    loop {
        out.push(choice.iter().enumerate().map(|(j, &c)| rows[j][c].clone()).collect());
        if !advance(&mut choice, |j| rows[j].len()) {
            break;
        }
    }
    out
}

/// `⟨ψ^m, P_A ψ^m⟩ = Σ_v |⟨v, ψ^m⟩|² / ‖v‖²` over the orthogonal basis
/// vectors of `V_A` given by admissible index tables.
pub fn higher_invariant(psi: &PureState, a: &SubsetMask, m: usize) -> Result<f64, InvariantError> {
    check_subset(a, psi.parties())?;
    check_even(a)?;
    if m == 0 {
        return Err(InvariantError::ZeroDegree);
    }
    let total_dim: usize = psi.dims().iter().product();
    if m > MAX_HIGHER_DEGREE || total_dim > MAX_HIGHER_DIMENSION {
        return Err(InvariantError::TooLarge { m, total_dim });
    }
    let mut total = 0.0;
    for table in admissible_tables(psi.dims(), a, m) {
        let v = higher_basis_vector(psi.dims(), a, m, &table)?;
        if v.is_zero() {
            continue;
        }
        total += v.overlap(psi).norm_sqr() / v.norm_sqr();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_local_unitaries, random_pure_state};
    use proptest::prelude::*;

    fn set(k: usize, members: &[usize]) -> SubsetMask {
        SubsetMask::from_members(k, members).unwrap()
    }

    fn bell() -> PureState {
        PureState::ghz(2)
    }

    /// `J_S = Σ_A (-1)^{|A∩S|} I_A` by the direct double sum.
    fn direct_transform(x: &[f64], k: usize) -> Vec<f64> {
        SubsetMask::all(k)
            .map(|s| SubsetMask::all(k).map(|a| parity(a.intersection_size(&s)) * x[a.index()]).sum())
            .collect()
    }

    #[test]
    fn bell_state_values() {
        let i = i_vector(&bell()).unwrap();
        let expected_i = [0.75, 0.0, 0.0, 0.25];
        for (got, want) in i.values().iter().zip(expected_i) {
            assert!((got - want).abs() < 1e-12, "{:?}", i.values());
        }
        let j = j_vector(&projector(&bell())).unwrap();
        let expected_j = [1.0, 0.5, 0.5, 1.0];
        for (got, want) in j.values().iter().zip(expected_j) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(j_from_i(&i).max_abs_diff(&j) < 1e-12);
        assert!(i_from_j(&j).max_abs_diff(&i) < 1e-12);
    }

    #[test]
    fn product_states_live_in_the_symmetric_component() {
        let psi = random_pure_state(&[2], 1)
            .unwrap()
            .tensor(&random_pure_state(&[3], 2).unwrap())
            .tensor(&random_pure_state(&[2], 3).unwrap());
        let i = i_vector(&psi).unwrap();
        for a in SubsetMask::all(3) {
            let want = if a.is_empty() { 1.0 } else { 0.0 };
            assert!((i.get(&a) - want).abs() < 1e-12, "{a}: {}", i.get(&a));
        }
        let j = j_vector(&projector(&psi)).unwrap();
        assert!(j.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn odd_subsets_vanish_and_even_ones_sum_to_one() {
        for (dims, seed) in [(vec![2, 2], 1), (vec![2, 3], 2), (vec![3, 3], 3), (vec![2, 2, 2], 4), (vec![2, 3, 2], 5)]
        {
            let psi = random_pure_state(&dims, seed).unwrap();
            let i = i_vector(&psi).unwrap();
            for a in SubsetMask::all(dims.len()) {
                if a.len() % 2 == 1 {
                    assert!(i.get(&a) < 1e-12);
                }
                assert!(i.get(&a) >= 0.0);
            }
            assert!((i.values().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn invariant_i_is_homogeneous_of_degree_four() {
        let psi = random_pure_state(&[2, 3], 8).unwrap();
        let c = Complex64::new(0.6, -1.1);
        let a = set(2, &[1, 2]);
        let scaled = invariant_i(&psi.scaled(c), &a).unwrap();
        assert!((scaled - c.norm().powi(4) * invariant_i(&psi, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn j_examples() {
        let rho = projector(&random_pure_state(&[2, 3], 4).unwrap());
        assert!((invariant_j(&rho, &SubsetMask::empty(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!((invariant_j(&projector(&bell()), &set(2, &[1])).unwrap() - 0.5).abs() < 1e-12);
        let mixed = crate::states::random_mixed_state(&[2, 2], 3, 2).unwrap();
        let scaled = DensityMatrix::new(vec![2, 2], mixed.matrix() * Complex64::new(0.8, 0.0)).unwrap();
        let full = invariant_j(&scaled, &SubsetMask::full(2)).unwrap();
        assert!((full - scaled.trace().powi(2)).abs() < 1e-12);
        assert!(matches!(invariant_j(&rho, &SubsetMask::empty(3)), Err(InvariantError::SubsetMismatch { .. })));
    }

    #[test]
    fn transform_examples() {
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        let j = j_from_i(&InvariantVector::new(3, delta).unwrap());
        assert!(j.values().iter().all(|&v| v == 1.0));
        assert!(InvariantVector::new(2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn parity_transform_is_exact_on_integers() {
        let original: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, -6];
        let mut x = original.clone();
        parity_transform(&mut x);
        let direct = direct_transform(&original.iter().map(|&v| v as f64).collect::<Vec<_>>(), 3);
        assert_eq!(x.iter().map(|&v| v as f64).collect::<Vec<_>>(), direct);
        parity_transform(&mut x);
        assert_eq!(x, original.iter().map(|v| v * 8).collect::<Vec<_>>());
    }

    #[test]
    fn eta_examples() {
        let product = random_pure_state(&[2], 1).unwrap().tensor(&random_pure_state(&[3], 2).unwrap());
        let rho = projector(&product);
        for a in [set(2, &[1]), set(2, &[2])] {
            assert!(eta(&rho, &a).unwrap().abs() < 1e-12);
        }
        assert!((eta(&projector(&bell()), &set(2, &[1])).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!((eta(&mixed, &set(2, &[1])).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(eta(&rho, &SubsetMask::empty(2)), Err(InvariantError::DegenerateSubset(_))));
        assert!(matches!(eta(&rho, &SubsetMask::full(2)), Err(InvariantError::DegenerateSubset(_))));
        let doubled = DensityMatrix::new(vec![2, 3], rho.matrix() * Complex64::new(2.0, 0.0)).unwrap();
        assert!(matches!(eta(&doubled, &set(2, &[1])), Err(InvariantError::NotNormalized(_))));
    }

    #[test]
    fn eta_of_pure_states_stays_in_unit_interval() {
        for seed in 0..20 {
            let rho = projector(&random_pure_state(&[2, 3], seed).unwrap());
            for a in [set(2, &[1]), set(2, &[2])] {
                let value = eta(&rho, &a).unwrap();
                assert!((-1e-12..=1.0 + 1e-9).contains(&value), "{value}");
            }
        }
    }

    #[test]
    fn meyer_wallach_examples() {
        let product = random_pure_state(&[2], 4)
            .unwrap()
            .tensor(&random_pure_state(&[2], 5).unwrap())
            .tensor(&random_pure_state(&[3], 6).unwrap());
        assert!(meyer_wallach(&product).unwrap().abs() < 1e-9);
        for k in 2..=5 {
            assert!((meyer_wallach(&PureState::ghz(k)).unwrap() - 1.0).abs() < 1e-9);
        }
        let unnormalized = bell().scaled(Complex64::new(2.0, 0.0));
        assert!(matches!(meyer_wallach(&unnormalized), Err(InvariantError::NotNormalized(_))));
        for seed in 0..10 {
            let psi = random_pure_state(&[2, 3, 2], seed).unwrap();
            let (j_form, i_form) = meyer_wallach_forms(&psi).unwrap();
            assert!((j_form - i_form).abs() < 1e-9);
            assert!((0.0..=2.0).contains(&j_form));
        }
    }

    #[test]
    fn m2_norms_and_symmetry() {
        let one = |pairs: &[(usize, usize)]| basis_vector_m2(&[3], &SubsetMask::empty(1), pairs).unwrap();
        assert!((one(&[(0, 1)]).norm_sqr() - 2.0).abs() < 1e-12);
        assert!((one(&[(1, 1)]).norm_sqr() - 4.0).abs() < 1e-12);
        let v = basis_vector_m2(&[2, 3], &set(2, &[1, 2]), &[(0, 1), (0, 2)]).unwrap();
        let dense = v.to_dense();
        let n = 6;
        for x in 0..n {
            for y in 0..n {
                assert_eq!(dense[x * n + y], dense[y * n + x]);
            }
        }
        let dense_norm: f64 = dense.iter().map(|c| c * c).sum();
        assert!((dense_norm - v.norm_sqr()).abs() < 1e-12);
        assert!((v.norm_sqr() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn m2_admissibility() {
        let a = set(2, &[1, 2]);
        assert!(matches!(basis_vector_m2(&[2, 2], &a, &[(0, 0), (0, 1)]), Err(InvariantError::Inadmissible(_))));
        assert!(matches!(basis_vector_m2(&[2, 2], &a, &[(1, 0), (0, 1)]), Err(InvariantError::Inadmissible(_))));
        assert!(matches!(basis_vector_m2(&[2, 2], &a, &[(0, 2), (0, 1)]), Err(InvariantError::Inadmissible(_))));
        assert!(matches!(
            basis_vector_m2(&[2, 2], &set(2, &[1]), &[(0, 1), (0, 1)]),
            Err(InvariantError::OddSubset(_))
        ));
    }

    #[test]
    fn distinct_m2_vectors_are_orthogonal() {
        let dims = [2, 3];
        let mut vectors = Vec::new();
        for a in SubsetMask::all(2).filter(|a| a.len() % 2 == 0) {
            for table in admissible_tables(&dims, &a, 2) {
                let pairs: Vec<(usize, usize)> = table.iter().map(|r| (r[0], r[1])).collect();
                vectors.push(basis_vector_m2(&dims, &a, &pairs).unwrap());
            }
        }
        // Dimension of S²(C^6) is 21.
        assert_eq!(vectors.len(), 21);
        for (x, v) in vectors.iter().enumerate() {
            for w in &vectors[x + 1..] {
                assert!(v.inner(w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn higher_vector_reduces_to_m2_vector() {
        let dims = [2, 3, 2];
        for a in SubsetMask::all(3).filter(|a| a.len() % 2 == 0) {
            for table in admissible_tables(&dims, &a, 2) {
                let pairs: Vec<(usize, usize)> = table.iter().map(|r| (r[0], r[1])).collect();
                let low = basis_vector_m2(&dims, &a, &pairs).unwrap();
                let high = higher_basis_vector(&dims, &a, 2, &table).unwrap();
                assert_eq!(low, high);
            }
        }
    }

    #[test]
    fn higher_vector_examples() {
        let v = higher_basis_vector(&[3, 3], &SubsetMask::empty(2), 3, &[vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        assert_eq!(v.terms().len(), 1);
        let (key, coeff) = v.terms().iter().next().unwrap();
        assert_eq!(key, &vec![5, 5, 5]);
        assert!(*coeff != 0);
        assert!(matches!(
            higher_basis_vector(&[3, 3], &set(2, &[1, 2]), 3, &[vec![0, 0, 1], vec![0, 1, 2]]),
            Err(InvariantError::Inadmissible(_))
        ));
        assert!(matches!(
            higher_basis_vector(&[3, 3], &set(2, &[1]), 3, &[vec![0, 1, 2], vec![0, 1, 2]]),
            Err(InvariantError::OddSubset(_))
        ));
    }

    #[test]
    fn higher_invariant_small_cases() {
        let psi = random_pure_state(&[2, 3], 3).unwrap().scaled(Complex64::new(1.2, 0.0));
        let m1 = higher_invariant(&psi, &SubsetMask::empty(2), 1).unwrap();
        assert!((m1 - psi.norm_sqr()).abs() < 1e-12);
        for a in SubsetMask::all(2).filter(|a| a.len() % 2 == 0) {
            let low = invariant_i(&psi, &a).unwrap();
            assert!((higher_invariant(&psi, &a, 2).unwrap() - low).abs() < 1e-9);
        }
        assert!(matches!(higher_invariant(&psi, &SubsetMask::empty(2), 0), Err(InvariantError::ZeroDegree)));
        assert!(matches!(higher_invariant(&psi, &SubsetMask::empty(2), 4), Err(InvariantError::TooLarge { .. })));
        let big = random_pure_state(&[3, 3, 3, 2, 2], 0).unwrap();
        assert!(matches!(higher_invariant(&big, &SubsetMask::empty(5), 2), Err(InvariantError::TooLarge { .. })));
    }

    #[test]
    fn lu_invariance() {
        let dims = [2, 3, 2];
        let psi = random_pure_state(&dims, 21).unwrap();
        let rotated = psi.apply_local(&random_local_unitaries(&dims, 22)).unwrap();
        let rho = projector(&psi);
        let rho_rotated = projector(&rotated);
        for a in SubsetMask::all(3) {
            assert!((invariant_i(&psi, &a).unwrap() - invariant_i(&rotated, &a).unwrap()).abs() < 1e-9);
            assert!((invariant_j(&rho, &a).unwrap() - invariant_j(&rho_rotated, &a).unwrap()).abs() < 1e-9);
            if a.len() % 2 == 0 {
                let h = higher_invariant(&psi, &a, 3).unwrap();
                assert!((h - higher_invariant(&rotated, &a, 3).unwrap()).abs() < 1e-9);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parity_roundtrip(values in proptest::collection::vec(-10.0f64..10.0, 8)) {
            let x = InvariantVector::new(3, values).unwrap();
            prop_assert!(i_from_j(&j_from_i(&x)).max_abs_diff(&x) < 1e-12);
            let direct = direct_transform(x.values(), 3);
            let fast = j_from_i(&x);
            for (a, b) in fast.values().iter().zip(direct) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
