//! Dimensions of spaces of LU-invariant polynomials.
//!
//! Degrees are half-degrees throughout: `m` counts the degree in the state
//! coefficients, so the invariant is a real polynomial of degree `2m`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::characters::CharacterTable;
use crate::combinatorics::{centralizer_order, cycle_types_of, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("number of subsystems must be at least 1")]
    NoSubsystems,
    #[error("expected {expected} local dimensions, got {got}")]
    LocalDimsLength { expected: usize, got: usize },
    #[error("local dimensions must be positive")]
    ZeroLocalDim,
}

/// A request for the dimension of the degree-`m` invariants of a `k`-partite
/// system, optionally with bounded local dimensions (one per subsystem).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionQuery {
    pub k: usize,
    pub m: usize,
    pub local_dims: Option<Vec<usize>>,
}

impl DimensionQuery {
    pub fn new(k: usize, m: usize, local_dims: Option<Vec<usize>>) -> Result<Self, DimensionError> {
        if k == 0 {
            return Err(DimensionError::NoSubsystems);
        }
        if let Some(dims) = &local_dims {
            if dims.len() != k {
                return Err(DimensionError::LocalDimsLength { expected: k, got: dims.len() });
            }
            if dims.contains(&0) {
                return Err(DimensionError::ZeroLocalDim);
            }
        }
        Ok(DimensionQuery { k, m, local_dims })
    }

    pub fn dimension(&self) -> BigUint {
        match &self.local_dims {
            None => stable_dimension(self.k, self.m),
            Some(dims) => {
                // One factor of dimension >= m imposes no constraint and may
                // play the role of the environment.
                match dims.iter().position(|&n| n >= self.m) {
                    Some(env) => {
                        let others: Vec<usize> =
                            dims.iter().enumerate().filter(|&(i, _)| i != env).map(|(_, &n)| n).collect();
                        restricted_dimension(&others, self.m)
                    }
                    None => dimension_from_multiplicities(dims, self.m),
                }
            }
        }
    }
}

/// Stable dimension `d_{k,m} = Σ_{a ⊩ m} z(a)^{k-2}`.
///
/// For `k = 1` the exponent is negative; the sum is taken over exact
/// rationals and equals 1.
pub fn stable_dimension(k: usize, m: usize) -> BigUint {
    assert!(k >= 1, "at least one subsystem");
    let zs = cycle_types_of(m).iter().map(centralizer_order).collect::<Vec<_>>();
    if k >= 2 {
        return zs.iter().map(|z| z.pow(k as u32 - 2)).sum();
    }
    let total =
        zs.into_iter().fold(BigRational::zero(), |acc, z| acc + BigRational::new(BigInt::from(1), BigInt::from(z)));
    assert!(total.is_integer() && !total.is_negative(), "k = 1 stable dimension must be integral");
    total.to_integer().to_biguint().expect("nonnegative")
}

/// `d_{k,m} = (χ_(m), (Σ_λ χ_λ²)^{k-1})`.
pub fn stable_dimension_via_characters(k: usize, m: usize) -> BigUint {
    assert!(k >= 1, "at least one subsystem");
    let table = CharacterTable::new(m);
    let conj = table.sum_of_squares(|_| true);
    to_count(conj.pointwise_power(k as u32 - 1).average())
}

/// Dimension for system factors of dimensions `n_1, ..., n_{k-1}` together
/// with an environment factor of dimension at least `m`:
/// `(χ_(m), Π_i Σ_{ℓ(λ) ≤ n_i} χ_λ²)`.
pub fn restricted_dimension(local_dims: &[usize], m: usize) -> BigUint {
    let table = CharacterTable::new(m);
    let mut product = crate::characters::ClassFunction::constant(m, 1);
    for &n in local_dims {
        let factor = table.sum_of_squares(|lambda| lambda.length() <= n);
        product = product.pointwise_product(&factor).expect("same degree");
    }
    to_count(product.average())
}

/// Qubit systems: `(χ_(m), (Σ_{ℓ(λ) ≤ 2} χ_λ²)^{k-1})` for `k - 1` qubits
/// and an environment.
pub fn qubit_dimension(k: usize, m: usize) -> BigUint {
    assert!(k >= 1, "at least one subsystem");
    let table = CharacterTable::new(m);
    let factor = table.sum_of_squares(|lambda| lambda.length() <= 2);
    to_count(factor.pointwise_power(k as u32 - 1).average())
}

/// Mixed-state invariants of a `k`-partite system: `d_{k+1,m}`.
pub fn mixed_dimension(k: usize, m: usize) -> BigUint {
    stable_dimension(k + 1, m)
}

/// `Σ C_{(m) λ_1 ... λ_k}²` over all `λ_i ⊢ m` with `ℓ(λ_i) ≤ n_i`.
///
/// Valid for arbitrary local dimensions; no factor has to be large. The cost
/// is one class-function product per tuple of admissible shapes.
pub fn dimension_from_multiplicities(local_dims: &[usize], m: usize) -> BigUint {
    let table = CharacterTable::new(m);
    let allowed: Vec<Vec<&Partition>> =
        local_dims.iter().map(|&n| table.partitions().iter().filter(|lambda| lambda.length() <= n).collect()).collect();
    if allowed.iter().any(Vec::is_empty) {
        return BigUint::zero();
    }
    let classes = table.partitions().len();
    let mut total = BigUint::zero();
    let mut choice = alloc::vec![0usize; local_dims.len()];
    loop {
        let mut product = alloc::vec![BigInt::from(1); classes];
        for (slot, &c) in choice.iter().enumerate() {
            let row = table.row(allowed[slot][c]);
            for (p, &v) in product.iter_mut().zip(row) {
                *p *= v;
            }
        }
        let f = crate::characters::ClassFunction::new(m, product.into_iter().map(BigRational::from_integer).collect());
        let c = to_count(f.average());
        total += &c * &c;
        if !advance(&mut choice, &allowed) {
            break;
        }
    }
    total
}

fn advance(choice: &mut [usize], allowed: &[Vec<&Partition>]) -> bool {
    for (slot, c) in choice.iter_mut().enumerate().rev() {
        *c += 1;
        if *c < allowed[slot].len() {
            return true;
        }
        *c = 0;
    }
    false
}

fn to_count(value: BigRational) -> BigUint {
    assert!(value.is_integer() && !value.is_negative(), "dimension {value} is not a count");
    value.to_integer().to_biguint().expect("nonnegative")
}
