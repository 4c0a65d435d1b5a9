//! Partitions, cycle types, permutations and centralizer orders.
//!
//! Conjugacy classes of the symmetric group `S_m` are labelled by cycle
//! types, which are in bijection with partitions of `m`. Everything that
//! indexes classes or irreducibles downstream uses the order returned by
//! [`partitions_of`]: reverse-lexicographic, `(m)` first and `(1, ..., 1)`
//! last.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("partition parts must be positive and weakly decreasing, got {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("cycle type {counts:?} does not describe a permutation of {m} points")]
    InvalidCycleType { counts: Vec<usize>, m: usize },
    #[error("{0:?} is not a permutation of 0..{n}", n = .0.len())]
    InvalidPermutation(Vec<usize>),
}

/// A partition of `m`: positive, weakly decreasing parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, CombinatoricsError> {
        let decreasing = parts.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || parts.contains(&0) {
            return Err(CombinatoricsError::InvalidPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition `(m)`, labelling the trivial representation.
    pub fn row(m: usize) -> Self {
        if m == 0 {
            Partition { parts: Vec::new() }
        } else {
            Partition { parts: vec![m] }
        }
    }

    /// The one-column partition `(1, ..., 1)`, labelling the sign representation.
    pub fn column(m: usize) -> Self {
        Partition { parts: vec![1; m] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows, `ℓ(λ)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn to_cycle_type(&self) -> CycleType {
        let m = self.size();
        let mut counts = vec![0; m];
        for &p in &self.parts {
            counts[p - 1] += 1;
        }
        CycleType { counts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Cycle type `a = (a_1, ..., a_m)` with `a_i` the number of `i`-cycles.
///
/// The count list always has length `m`, trailing zeros included.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    counts: Vec<usize>,
}

impl CycleType {
    pub fn new(counts: Vec<usize>) -> Result<Self, CombinatoricsError> {
        let m = counts.len();
        let total: usize = counts.iter().enumerate().map(|(i, a)| (i + 1) * a).sum();
        if total != m {
            return Err(CombinatoricsError::InvalidCycleType { counts, m });
        }
        Ok(CycleType { counts })
    }

    /// Cycle type of the identity in `S_m`.
    pub fn identity(m: usize) -> Self {
        let mut counts = vec![0; m];
        if m > 0 {
            counts[0] = m;
        }
        CycleType { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn degree(&self) -> usize {
        self.counts.len()
    }

    /// Total number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.cycle_count());
        for (i, &a) in self.counts.iter().enumerate().rev() {
            parts.extend(core::iter::repeat_n(i + 1, a));
        }
        Partition { parts }
    }

    /// Sign of any permutation of this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.degree() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `z(a) = Π i^{a_i} a_i!`, the order of the centralizer of an element of
/// cycle type `a`.
pub fn centralizer_order(cycle_type: &CycleType) -> BigUint {
    cycle_type
        .counts
        .iter()
        .enumerate()
        .fold(BigUint::one(), |acc, (i, &a)| acc * BigUint::from(i + 1).pow(a) * factorial(a))
}

/// `m! / z(a)`.
pub fn class_size(cycle_type: &CycleType) -> BigUint {
    factorial(cycle_type.degree()) / centralizer_order(cycle_type)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// All partitions of `m` in reverse-lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    fn extend(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            extend(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(m, m, &mut Vec::new(), &mut out);
    out
}

/// Cycle types of `S_m` in the canonical class order.
pub fn cycle_types_of(m: usize) -> Vec<CycleType> {
    partitions_of(m).iter().map(Partition::to_cycle_type).collect()
}

/// A permutation of `{0, ..., n-1}` in one-line notation: `images[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self, CombinatoricsError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(CombinatoricsError::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Transposition of `i` and `j` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Permutation { images }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut counts = vec![0; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            counts[len - 1] += 1;
        }
        CycleType { counts }
    }

    pub fn sign(&self) -> i64 {
        self.cycle_type().sign()
    }

    /// All `n!` permutations in lexicographic order of their one-line form.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation { images: current.clone() }];
        while next_permutation(&mut current) {
            out.push(Permutation { images: current.clone() });
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn count_partitions(m: usize, max_part: usize) -> u64 {
        if m == 0 {
            return 1;
        }
        (1..=m.min(max_part)).map(|part| count_partitions(m - part, part)).sum()
    }

    #[test]
    fn small_partition_lists() {
        assert_eq!(partitions_of(0), vec![p(&[])]);
        assert_eq!(partitions_of(1), vec![p(&[1])]);
        assert_eq!(partitions_of(4), vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
    }

    #[test]
    fn partition_counts_match_recursion() {
        for m in 0..=30 {
            assert_eq!(partitions_of(m).len() as u64, count_partitions(m, m), "m = {m}");
        }
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(p(&[1, 1, 1]).to_cycle_type().counts(), &[3, 0, 0]);
        assert_eq!(p(&[3]).to_cycle_type().counts(), &[0, 0, 1]);
        assert_eq!(p(&[2, 1, 1]).to_cycle_type().counts(), &[2, 1, 0, 0]);
        assert_eq!(CycleType::new(vec![2, 1, 0, 0]).unwrap().to_partition(), p(&[2, 1, 1]));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(CycleType::new(vec![1, 1]).is_err());
        assert!(CycleType::new(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn centralizer_examples() {
        for m in 1..=8 {
            assert_eq!(centralizer_order(&CycleType::identity(m)), factorial(m));
            let mut counts = vec![0; m];
            counts[m - 1] = 1;
            assert_eq!(centralizer_order(&CycleType::new(counts).unwrap()), BigUint::from(m));
        }
        for a in cycle_types_of(2) {
            assert_eq!(centralizer_order(&a), BigUint::from(2u32));
        }
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for m in 0..=10 {
            let total = cycle_types_of(m).iter().map(class_size).fold(BigUint::from(0u32), |a, b| a + b);
            assert_eq!(total, factorial(m), "m = {m}");
        }
    }

    #[test]
    fn centralizer_matches_enumeration() {
        // Count commuting elements directly for every class of S_5.
        let all = Permutation::all(5);
        for a in cycle_types_of(5) {
            let g = all.iter().find(|g| g.cycle_type() == a).unwrap();
            let commuting = all.iter().filter(|h| h.compose(g) == g.compose(h)).count();
            assert_eq!(BigUint::from(commuting), centralizer_order(&a));
        }
    }

    #[test]
    fn permutation_basics() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let even = all.iter().filter(|g| g.sign() == 1).count();
        assert_eq!(even, 12);
        for g in &all {
            assert!(g.compose(&g.inverse()).is_identity());
        }
        assert_eq!(Permutation::all(0), vec![Permutation::identity(0)]);
    }

    #[test]
    fn bijection_roundtrip_all_small_degrees() {
        for m in 0..=10 {
            for lambda in partitions_of(m) {
                assert_eq!(lambda.to_cycle_type().to_partition(), lambda);
            }
            for a in cycle_types_of(m) {
                assert_eq!(a.to_partition().to_cycle_type(), a);
            }
        }
    }

    proptest! {
        #[test]
        fn conjugation_preserves_cycle_type(seed in proptest::collection::vec(0usize..6, 6), other in proptest::collection::vec(0usize..6, 6)) {
            // Turn arbitrary vectors into permutations via argsort.
            let perm = |v: &Vec<usize>| {
                let mut idx: Vec<usize> = (0..v.len()).collect();
                idx.sort_by_key(|&i| (v[i], i));
                Permutation::from_images(idx).unwrap()
            };
            let g = perm(&seed);
            let h = perm(&other);
            prop_assert_eq!(g.conjugate_by(&h).cycle_type(), g.cycle_type());
        }
    }
}
