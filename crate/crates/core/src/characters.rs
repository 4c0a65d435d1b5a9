//! Irreducible characters of `S_m` and class-function arithmetic.
//!
//! Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets
//! (first-column hook lengths), memoised on `(shape, remaining cycles)`.
//! All values are exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::combinatorics::{centralizer_order, cycle_types_of, partitions_of, CycleType, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("degree mismatch: S_{left} vs S_{right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("multiplicity {0} is not a nonnegative integer")]
    NotAMultiplicity(BigRational),
}

/// An exact rational-valued class function on `S_m`, indexed by classes in
/// the canonical (reverse-lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    m: usize,
    values: Vec<BigRational>,
}

impl ClassFunction {
    /// Builds a class function from values in canonical class order.
    ///
    /// Panics if the number of values is not the number of classes of `S_m`.
    pub fn new(m: usize, values: Vec<BigRational>) -> Self {
        assert_eq!(values.len(), partitions_of(m).len(), "one value per conjugacy class of S_{m}");
        ClassFunction { m, values }
    }

    pub fn from_integers(m: usize, values: &[i64]) -> Self {
        Self::new(m, values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn constant(m: usize, value: i64) -> Self {
        let classes = partitions_of(m).len();
        ClassFunction { m, values: alloc::vec![BigRational::from_integer(value.into()); classes] }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Value on the class with the given cycle type.
    pub fn value_at(&self, cycle_type: &CycleType) -> &BigRational {
        let idx = cycle_types_of(self.m).iter().position(|a| a == cycle_type).expect("cycle type of the same degree");
        &self.values[idx]
    }

    /// Value on the identity class (the last class in canonical order).
    pub fn at_identity(&self) -> &BigRational {
        self.values.last().expect("S_m has at least one class")
    }

    fn check_degree(&self, other: &ClassFunction) -> Result<(), CharacterError> {
        if self.m != other.m {
            return Err(CharacterError::DegreeMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    pub fn pointwise_product(&self, other: &ClassFunction) -> Result<ClassFunction, CharacterError> {
        self.check_degree(other)?;
        Ok(ClassFunction { m: self.m, values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() })
    }

    pub fn pointwise_power(&self, exponent: u32) -> ClassFunction {
        ClassFunction {
            m: self.m,
            values: self.values.iter().map(|v| num_traits::pow(v.clone(), exponent as usize)).collect(),
        }
    }

    pub fn pointwise_sum(&self, other: &ClassFunction) -> Result<ClassFunction, CharacterError> {
        self.check_degree(other)?;
        Ok(ClassFunction { m: self.m, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }
}

/// `(f, g) = Σ_a f(a) g(a) / z(a)`, the usual inner product of class
/// functions. Characters of `S_m` are real, so no conjugation is applied.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<BigRational, CharacterError> {
    f.check_degree(g)?;
    let total =
        cycle_types_of(f.m).iter().zip(f.values.iter().zip(&g.values)).fold(BigRational::zero(), |acc, (a, (x, y))| {
            let z = BigInt::from(centralizer_order(a));
            acc + x * y / BigRational::from_integer(z)
        });
    Ok(total)
}

/// The irreducible character `χ_λ`.
pub fn irreducible_character(lambda: &Partition) -> ClassFunction {
    let m = lambda.size();
    let mut memo = BTreeMap::new();
    let values = partitions_of(m)
        .iter()
        .map(|cycles| BigRational::from_integer(mn_value(lambda.parts(), cycles.parts(), &mut memo).into()))
        .collect();
    ClassFunction { m, values }
}

/// Multiplicity of `V_ν` in `V_{λ_1} ⊗ ... ⊗ V_{λ_k}`, i.e.
/// `(χ_ν, χ_{λ_1} ··· χ_{λ_k})`.
pub fn kronecker_multiplicity(nu: &Partition, lambdas: &[Partition]) -> Result<BigUint, CharacterError> {
    let m = nu.size();
    let table = CharacterTable::new(m);
    for lambda in lambdas {
        if lambda.size() != m {
            return Err(CharacterError::DegreeMismatch { left: m, right: lambda.size() });
        }
    }
    let mut product = ClassFunction::constant(m, 1);
    for lambda in lambdas {
        product = product.pointwise_product(&table.character(lambda))?;
    }
    let value = inner_product(&table.character(nu), &product)?;
    as_multiplicity(value)
}

fn as_multiplicity(value: BigRational) -> Result<BigUint, CharacterError> {
    if !value.is_integer() || value.is_negative() {
        return Err(CharacterError::NotAMultiplicity(value));
    }
    Ok(value.to_integer().to_biguint().expect("checked nonnegative"))
}

/// The full integer character table of `S_m`.
///
/// Rows are irreducibles and columns are classes, both in canonical order.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    m: usize,
    partitions: Vec<Partition>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(m: usize) -> Self {
        let partitions = partitions_of(m);
        let mut memo = BTreeMap::new();
        let values = partitions
            .iter()
            .map(|lambda| partitions.iter().map(|cycles| mn_value(lambda.parts(), cycles.parts(), &mut memo)).collect())
            .collect();
        CharacterTable { m, partitions, values }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Partitions labelling both rows and columns.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn row(&self, lambda: &Partition) -> &[i64] {
        let idx = self.partitions.iter().position(|p| p == lambda).expect("partition of the table degree");
        &self.values[idx]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Partition, &[i64])> {
        self.partitions.iter().zip(self.values.iter().map(Vec::as_slice))
    }

    pub fn character(&self, lambda: &Partition) -> ClassFunction {
        ClassFunction::from_integers(self.m, self.row(lambda))
    }

    /// `Σ χ_λ²` over the irreducibles accepted by `keep`.
    pub fn sum_of_squares<F>(&self, keep: F) -> ClassFunction
    where
        F: Fn(&Partition) -> bool,
    {
        let classes = self.partitions.len();
        let mut sums = alloc::vec![0i128; classes];
        for (lambda, row) in self.rows() {
            if keep(lambda) {
                for (s, &v) in sums.iter_mut().zip(row) {
                    *s += i128::from(v) * i128::from(v);
                }
            }
        }
        ClassFunction { m: self.m, values: sums.into_iter().map(|s| BigRational::from_integer(s.into())).collect() }
    }
}

type Memo = BTreeMap<(Vec<usize>, Vec<usize>), i64>;

/// `χ_λ` on the class whose cycle lengths are `cycles` (weakly decreasing).
fn mn_value(shape: &[usize], cycles: &[usize], memo: &mut Memo) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else {
        return i64::from(shape.is_empty());
    };
    let key = (shape.to_vec(), cycles.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let len = shape.len();
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p + (len - 1 - i)).collect();
    let mut total = 0i64;
    for (pos, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        // Leg length of the removed rim hook.
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[pos] = target;
        next.sort_unstable_by(|x, y| y.cmp(x));
        let smaller: Vec<usize> = next.iter().enumerate().map(|(i, &x)| x - (len - 1 - i)).filter(|&p| p > 0).collect();
        let v = mn_value(&smaller, rest, memo);
        total += if height % 2 == 0 { v } else { -v };
    }
    memo.insert(key, total);
    total
}

impl ClassFunction {
    /// Sum of all values weighted by class sizes, divided by `m!`: the
    /// multiplicity of the trivial character.
    pub fn average(&self) -> BigRational {
        inner_product(&ClassFunction::constant(self.m, 1), self).expect("same degree")
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }
}

impl From<&Partition> for ClassFunction {
    fn from(lambda: &Partition) -> Self {
        irreducible_character(lambda)
    }
}
