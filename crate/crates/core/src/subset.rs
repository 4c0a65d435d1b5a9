use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("subsystem {site} is outside 1..={k}")]
    OutOfRange { site: usize, k: usize },
    #[error("at most 63 subsystems are supported, got {0}")]
    TooManySubsystems(usize),
}

/// A subset `A ⊆ {1, ..., k}` of subsystems.
///
/// Members are 1-based sites. Site `i` is stored as bit `i - 1`, so the
/// bit pattern doubles as the position of `A` in binary subset order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    k: usize,
    bits: u64,
}

impl SubsetMask {
    pub fn empty(k: usize) -> Self {
        SubsetMask { k, bits: 0 }
    }

    /// `{1, ..., k}`.
    pub fn full(k: usize) -> Self {
        SubsetMask { k, bits: if k == 64 { u64::MAX } else { (1u64 << k) - 1 } }
    }

    pub fn from_bits(k: usize, bits: u64) -> Result<Self, SubsetError> {
        if k > 63 {
            return Err(SubsetError::TooManySubsystems(k));
        }
        if bits >> k != 0 {
            let site = 64 - bits.leading_zeros() as usize;
            return Err(SubsetError::OutOfRange { site, k });
        }
        Ok(SubsetMask { k, bits })
    }

    pub fn from_members(k: usize, members: &[usize]) -> Result<Self, SubsetError> {
        if k > 63 {
            return Err(SubsetError::TooManySubsystems(k));
        }
        let mut bits = 0u64;
        for &site in members {
            if site == 0 || site > k {
                return Err(SubsetError::OutOfRange { site, k });
            }
            bits |= 1 << (site - 1);
        }
        Ok(SubsetMask { k, bits })
    }

    /// All `2^k` subsets in binary order.
    pub fn all(k: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u64 << k).map(move |bits| SubsetMask { k, bits })
    }

    pub fn universe(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn contains(&self, site: usize) -> bool {
        site >= 1 && site <= self.k && self.bits >> (site - 1) & 1 == 1
    }

    /// Membership by 0-based position.
    pub fn contains_position(&self, position: usize) -> bool {
        position < self.k && self.bits >> position & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.k
    }

    pub fn members(&self) -> Vec<usize> {
        (1..=self.k).filter(|&s| self.contains(s)).collect()
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask { k: self.k, bits: !self.bits & SubsetMask::full(self.k).bits }
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask { k: self.k.max(other.k), bits: self.bits | other.bits }
    }

    /// `|A ∩ B|`.
    pub fn intersection_size(&self, other: &SubsetMask) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    /// The same members viewed in a universe of `k` sites.
    pub fn with_universe(&self, k: usize) -> Result<SubsetMask, SubsetError> {
        SubsetMask::from_bits(k, self.bits)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, site) in self.members().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{site}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_order() {
        let a = SubsetMask::from_members(3, &[1, 3]).unwrap();
        assert_eq!(a.bits(), 0b101);
        assert!(a.contains(1) && !a.contains(2) && a.contains(3));
        assert_eq!(a.members(), alloc::vec![1, 3]);
        assert_eq!(a.complement().members(), alloc::vec![2]);
        assert_eq!(alloc::format!("{a}"), "{1,3}");
        assert_eq!(alloc::format!("{}", SubsetMask::empty(2)), "{}");
        let order: Vec<u64> = SubsetMask::all(2).map(|s| s.bits()).collect();
        assert_eq!(order, alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(SubsetMask::from_members(2, &[3]), Err(SubsetError::OutOfRange { site: 3, k: 2 }));
        assert_eq!(SubsetMask::from_members(2, &[0]), Err(SubsetError::OutOfRange { site: 0, k: 2 }));
        assert_eq!(SubsetMask::from_bits(2, 0b100), Err(SubsetError::OutOfRange { site: 3, k: 2 }));
    }
}
