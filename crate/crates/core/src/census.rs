//! Brute-force orbit censuses on tuples of permutations.
//!
//! A homomorphism `F_r → S_d` is an `r`-tuple of permutations. Conjugacy
//! classes of index-`d` subgroups of `F_r` correspond to transitive tuples
//! up to simultaneous conjugation, and the number of simultaneous
//! conjugation orbits on all of `S_m^j` is the stable invariant count
//! `d_{j+1,m}`. Both are computed here by explicit enumeration: every tuple
//! is joined to its conjugates under a generating set of `S_d` in a
//! union-find structure. No character or centralizer formula is used.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Pow;
use thiserror::Error;

use crate::combinatorics::{factorial, Permutation};

/// Largest number of tuples a census will enumerate.
pub const MAX_TUPLES: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("refusing to enumerate {tuples} tuples (limit {limit})")]
    BoundExceeded { tuples: BigUint, limit: u64 },
    #[error("invalid census request: {0}")]
    InvalidQuery(&'static str),
}

/// `r` permutations of the same degree, i.e. a homomorphism `F_r → S_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermTuple {
    degree: usize,
    perms: Vec<Permutation>,
}

impl PermTuple {
    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self, CensusError> {
        if perms.iter().any(|p| p.degree() != degree) {
            return Err(CensusError::InvalidQuery("all permutations must share the tuple degree"));
        }
        Ok(PermTuple { degree, perms })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Simultaneous conjugation by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PermTuple {
        PermTuple { degree: self.degree, perms: self.perms.iter().map(|p| p.conjugate_by(g)).collect() }
    }
}

/// Whether the group generated by the tuple acts transitively on the points.
pub fn is_transitive(tuple: &PermTuple) -> bool {
    let refs: Vec<&[usize]> = tuple.perms.iter().map(Permutation::images).collect();
    transitive_images(tuple.degree, &refs)
}

fn transitive_images(degree: usize, perms: &[&[usize]]) -> bool {
    if degree <= 1 {
        return true;
    }
    let mut seen = vec![false; degree];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p[x];
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                stack.push(y);
            }
        }
    }
    reached == degree
}

/// Number of conjugacy classes of index-`index` subgroups of the free group
/// of rank `rank`.
pub fn count_subgroup_classes(rank: usize, index: usize) -> Result<u64, CensusError> {
    if rank == 0 {
        return Err(CensusError::InvalidQuery("rank must be at least 1"));
    }
    if index == 0 {
        return Err(CensusError::InvalidQuery("index must be at least 1"));
    }
    count_orbits(rank, index, &adjacent_transpositions(index), true)
}

/// Number of orbits of `S_m` acting by simultaneous conjugation on `S_m^j`.
pub fn conjugation_orbit_count(tuple_length: usize, m: usize) -> Result<u64, CensusError> {
    count_orbits(tuple_length, m, &adjacent_transpositions(m), false)
}

/// Lexicographically smallest tuple of each orbit, in increasing order.
pub fn orbit_representatives(
    tuple_length: usize,
    degree: usize,
    transitive_only: bool,
) -> Result<Vec<PermTuple>, CensusError> {
    let census = Census::build(tuple_length, degree, &adjacent_transpositions(degree))?;
    Ok(census
        .roots(transitive_only)
        .map(|t| PermTuple { degree, perms: census.decode(t).into_iter().map(|i| census.perms[i].clone()).collect() })
        .collect())
}

/// Orbit count with an explicit generating set for the conjugating group.
///
/// The result does not depend on which generating set of `S_degree` is
/// supplied; that independence is what makes relabelings harmless.
pub fn count_orbits(
    tuple_length: usize,
    degree: usize,
    generators: &[Permutation],
    transitive_only: bool,
) -> Result<u64, CensusError> {
    let census = Census::build(tuple_length, degree, generators)?;
    Ok(census.roots(transitive_only).count() as u64)
}

fn adjacent_transpositions(n: usize) -> Vec<Permutation> {
    (0..n.saturating_sub(1)).map(|i| Permutation::transposition(n, i, i + 1)).collect()
}

/// Tuples `(p_0, ..., p_{j-1})` encoded as `Σ rank(p_i) · (n!)^{j-1-i}` so
/// that numeric order is lexicographic order on tuples.
struct Census {
    perms: Vec<Permutation>,
    tuple_length: usize,
    parent: Vec<u32>,
}

impl Census {
    fn build(tuple_length: usize, degree: usize, generators: &[Permutation]) -> Result<Self, CensusError> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(CensusError::InvalidQuery("generators must act on the tuple degree"));
        }
        let group_order = factorial(degree);
        let estimate = group_order.pow(tuple_length as u32);
        if estimate > BigUint::from(MAX_TUPLES) {
            return Err(CensusError::BoundExceeded { tuples: estimate, limit: MAX_TUPLES });
        }
        let total = u64::try_from(&estimate).expect("bounded above") as usize;
        let perms = Permutation::all(degree);
        let rank_of = |p: &Permutation| perms.binary_search(p).expect("complete list");
        let conj_tables: Vec<Vec<usize>> =
            generators.iter().map(|g| perms.iter().map(|p| rank_of(&p.conjugate_by(g))).collect()).collect();

        let base = perms.len();
        let mut census = Census { perms, tuple_length, parent: (0..total as u32).collect() };
        let mut digits = vec![0usize; tuple_length];
        for t in 0..total {
            census.decode_into(t, &mut digits);
            for table in &conj_tables {
                let image = digits.iter().fold(0usize, |acc, &d| acc * base + table[d]);
                census.union(t, image);
            }
        }
        Ok(census)
    }

    fn decode_into(&self, mut t: usize, digits: &mut [usize]) {
        let base = self.perms.len();
        for d in digits.iter_mut().rev() {
            *d = t % base;
            t /= base;
        }
    }

    fn decode(&self, t: usize) -> Vec<usize> {
        let mut digits = vec![0; self.tuple_length];
        self.decode_into(t, &mut digits);
        digits
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    fn find_compress(&mut self, x: usize) -> usize {
        let root = self.find(x);
        let mut y = x;
        while self.parent[y] as usize != root {
            let next = self.parent[y] as usize;
            self.parent[y] = root as u32;
            y = next;
        }
        root
    }

    /// Joins the classes of `a` and `b`, keeping the smaller root.
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find_compress(a);
        let rb = self.find_compress(b);
        if ra < rb {
            self.parent[rb] = ra as u32;
        } else if rb < ra {
            self.parent[ra] = rb as u32;
        }
    }

    /// Orbit roots, which are the lexicographically smallest members.
    fn roots(&self, transitive_only: bool) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(move |&t| {
            if self.parent[t] as usize != t {
                return false;
            }
            if !transitive_only {
                return true;
            }
            let digits = self.decode(t);
            let images: Vec<&[usize]> = digits.iter().map(|&i| self.perms[i].images()).collect();
            transitive_images(self.perms[0].degree(), &images)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&PermTuple::new(1, vec![perm(&[0])]).unwrap()));
        assert!(!is_transitive(&PermTuple::new(2, vec![perm(&[0, 1])]).unwrap()));
        assert!(is_transitive(&PermTuple::new(2, vec![perm(&[1, 0])]).unwrap()));
        let split = PermTuple::new(4, vec![perm(&[1, 0, 2, 3]), perm(&[0, 1, 3, 2])]).unwrap();
        assert!(!is_transitive(&split));
        let joined = PermTuple::new(4, vec![perm(&[1, 0, 2, 3]), perm(&[0, 2, 1, 3]), perm(&[0, 1, 3, 2])]).unwrap();
        assert!(is_transitive(&joined));
    }

    #[test]
    fn subgroup_class_examples() {
        for r in 1..=3 {
            assert_eq!(count_subgroup_classes(r, 1).unwrap(), 1);
        }
        for d in 1..=6 {
            assert_eq!(count_subgroup_classes(1, d).unwrap(), 1, "d = {d}");
        }
        assert_eq!(count_subgroup_classes(2, 2).unwrap(), 3);
        assert_eq!(count_subgroup_classes(2, 3).unwrap(), 7);
    }

    #[test]
    fn conjugation_orbit_examples() {
        for m in 0..=6 {
            assert_eq!(conjugation_orbit_count(1, m).unwrap(), partitions_of(m).len() as u64);
            assert_eq!(conjugation_orbit_count(0, m).unwrap(), 1);
        }
        assert_eq!(conjugation_orbit_count(2, 2).unwrap(), 4);
        assert_eq!(conjugation_orbit_count(2, 3).unwrap(), 11);
    }

    #[test]
    fn bounds_are_enforced() {
        let err = conjugation_orbit_count(3, 6).unwrap_err();
        assert_eq!(err, CensusError::BoundExceeded { tuples: BigUint::from(720u32).pow(3u32), limit: MAX_TUPLES });
        assert!(matches!(count_subgroup_classes(3, 6), Err(CensusError::BoundExceeded { .. })));
        assert!(matches!(count_subgroup_classes(0, 2), Err(CensusError::InvalidQuery(_))));
        assert!(matches!(count_subgroup_classes(2, 0), Err(CensusError::InvalidQuery(_))));
    }

    #[test]
    fn counts_do_not_depend_on_generating_set() {
        // All transpositions, and adjacent transpositions relabelled by a
        // fixed shuffle of the points.
        let n = 4;
        let mut all_transpositions = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                all_transpositions.push(Permutation::transposition(n, i, j));
            }
        }
        let shuffle = perm(&[2, 0, 3, 1]);
        let relabelled: Vec<Permutation> =
            adjacent_transpositions(n).iter().map(|g| g.conjugate_by(&shuffle)).collect();
        for transitive in [false, true] {
            let base = count_orbits(2, n, &adjacent_transpositions(n), transitive).unwrap();
            assert_eq!(count_orbits(2, n, &all_transpositions, transitive).unwrap(), base);
            assert_eq!(count_orbits(2, n, &relabelled, transitive).unwrap(), base);
        }
    }

    #[test]
    fn representatives_are_orbit_minima() {
        let reps = orbit_representatives(2, 3, true).unwrap();
        assert_eq!(reps.len(), 7);
        let all = Permutation::all(3);
        for rep in &reps {
            assert!(is_transitive(rep));
            for g in &all {
                assert!(*rep <= rep.conjugate_by(g));
            }
        }
    }
}
