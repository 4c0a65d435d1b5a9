//! Truncated power series with exact rational coefficients, the Hilbert
//! series of the stable invariant algebra and its Euler-product exponents.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dimensions::stable_dimension;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term is {0}, expected 1")]
    NonUnitConstant(BigRational),
    #[error("exponent u_{d} = {value} is not an integer")]
    NonIntegral { d: usize, value: BigRational },
    #[error("exponent u_{d} = {value} is negative")]
    Negative { d: usize, value: BigRational },
    #[error("series is not invertible: zero constant term")]
    NotInvertible,
    #[error("generator counts need k >= 2 and d >= 1, got k = {k}, d = {d}")]
    BadGeneratorQuery { k: usize, d: usize },
}

/// `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    /// Series with the given coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series keeps at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().cloned().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<BigRational> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, BigRational::zero());
        PowerSeries { coeffs }
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs: Vec<BigRational> =
            (1..=n).map(|i| &self.coeffs[i] * BigRational::from_integer(BigInt::from(i))).collect();
        // d/dt loses one order of precision; keep the shape by padding.
        coeffs.push(BigRational::zero());
        PowerSeries { coeffs }
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero()];
        for (i, c) in self.coeffs[..n].iter().enumerate() {
            coeffs.push(c / BigRational::from_integer(BigInt::from(i + 1)));
        }
        PowerSeries { coeffs }
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let mut inv = vec![BigRational::zero(); n + 1];
        inv[0] = c0.recip();
        for i in 1..=n {
            let acc = (1..=i).fold(BigRational::zero(), |acc, j| acc + &self.coeffs[j] * &inv[i - j]);
            inv[i] = -acc / c0;
        }
        Ok(PowerSeries { coeffs: inv })
    }

    /// `log s` for a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.check_unit()?;
        let quotient = &self.derivative() * &self.inverse()?;
        Ok(quotient.integral())
    }

    fn check_unit(&self) -> Result<(), SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstant(self.coeffs[0].clone()));
        }
        Ok(())
    }

    /// `(1 - t^d)^u` to the given order, for any rational exponent `u`.
    pub fn binomial_factor(d: usize, u: &BigRational, order: usize) -> Self {
        assert!(d >= 1);
        let mut s = Self::zero(order);
        let mut term = BigRational::one();
        let mut j = 0usize;
        while j * d <= order {
            s.coeffs[j * d] = term.clone();
            // C(u, j+1)(-1)^{j+1} from C(u, j)(-1)^j.
            let jj = BigRational::from_integer(BigInt::from(j));
            term = -term * (u - &jj) / (jj + BigRational::one());
            j += 1;
        }
        s
    }
}

impl<'a> Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl<'a> Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl<'a> Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// Exponents `u_1, ..., u_N` with `s = Π_d (1 - t^d)^{-u_d}` to order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCounts {
    /// Subsystem count when the series is a Hilbert series.
    pub k: Option<usize>,
    u: Vec<BigUint>,
}

impl GeneratorCounts {
    /// `u_d` for `1 <= d <= N`.
    pub fn get(&self, d: usize) -> &BigUint {
        &self.u[d - 1]
    }

    /// `u_1, ..., u_N`.
    pub fn as_slice(&self) -> &[BigUint] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// `Σ_{m ≤ N} d_{k,m} t^m`.
pub fn hilbert_series(k: usize, order: usize) -> PowerSeries {
    let coeffs: Vec<BigInt> = (0..=order).map(|m| BigInt::from(stable_dimension(k, m))).collect();
    PowerSeries::from_integers(&coeffs)
}

/// Solves `s = Π_d (1 - t^d)^{-u_d}` by stripping one factor at a time:
/// `u_d` is the `t^d` coefficient of `s · Π_{e<d} (1 - t^e)^{u_e}`.
///
/// Exponents are returned as exact rationals without any sign or
/// integrality check.
pub fn strip_euler_factors(s: &PowerSeries) -> Result<Vec<BigRational>, SeriesError> {
    s.check_unit()?;
    let n = s.order();
    let mut current = s.clone();
    let mut exponents = Vec::with_capacity(n);
    for d in 1..=n {
        let u = current.coeffs[d].clone();
        if !u.is_zero() {
            current = &current * &PowerSeries::binomial_factor(d, &u, n);
        }
        exponents.push(u);
    }
    Ok(exponents)
}

/// Same exponents from `log s = Σ_d u_d Σ_j t^{dj}/j`: with
/// `a_n = n [t^n] log s = Σ_{d | n} d u_d` the exponents follow by
/// peeling off proper divisors.
pub fn euler_exponents_via_log(s: &PowerSeries) -> Result<Vec<BigRational>, SeriesError> {
    let log = s.log()?;
    let n = s.order();
    let mut u: Vec<BigRational> = Vec::with_capacity(n);
    for d in 1..=n {
        let big_d = BigRational::from_integer(BigInt::from(d));
        let mut a = &log.coeffs[d] * &big_d;
        for e in 1..d {
            if d % e == 0 {
                a -= &u[e - 1] * BigRational::from_integer(BigInt::from(e));
            }
        }
        u.push(a / big_d);
    }
    Ok(u)
}

/// `Π_{d=1}^{N} (1 - t^d)^{-u_d}` truncated at `order`.
pub fn euler_product(exponents: &[BigRational], order: usize) -> PowerSeries {
    exponents.iter().enumerate().fold(PowerSeries::one(order), |acc, (i, u)| {
        if u.is_zero() {
            acc
        } else {
            &acc * &PowerSeries::binomial_factor(i + 1, &-u.clone(), order)
        }
    })
}

/// Euler-product exponents of `s`, required to be nonnegative integers.
pub fn euler_exponents(s: &PowerSeries) -> Result<GeneratorCounts, SeriesError> {
    let raw = strip_euler_factors(s)?;
    let mut u = Vec::with_capacity(raw.len());
    for (i, value) in raw.into_iter().enumerate() {
        let d = i + 1;
        if !value.is_integer() {
            return Err(SeriesError::NonIntegral { d, value });
        }
        if value.is_negative() {
            return Err(SeriesError::Negative { d, value });
        }
        u.push(value.to_integer().to_biguint().expect("checked nonnegative"));
    }
    Ok(GeneratorCounts { k: None, u })
}

/// `u_d(F_{k-1})` read off from the Hilbert series of `k`-partite invariants.
pub fn free_generator_count(k: usize, d: usize) -> Result<BigUint, SeriesError> {
    if k < 2 || d < 1 {
        return Err(SeriesError::BadGeneratorQuery { k, d });
    }
    let counts = euler_exponents(&hilbert_series(k, d))?;
    Ok(counts.get(d).clone())
}

/// All `u_1(F_{k-1}), ..., u_N(F_{k-1})`.
pub fn generator_counts(k: usize, order: usize) -> Result<GeneratorCounts, SeriesError> {
    if k < 2 {
        return Err(SeriesError::BadGeneratorQuery { k, d: order });
    }
    let mut counts = euler_exponents(&hilbert_series(k, order))?;
    counts.k = Some(k);
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn bipartite_hilbert_series_is_the_partition_function() {
        assert_eq!(hilbert_series(2, 6), PowerSeries::from_integers(&[1, 1, 2, 3, 5, 7, 11]));
        let counts = euler_exponents(&hilbert_series(2, 12)).unwrap();
        assert!(counts.as_slice().iter().all(|u| u.is_one()));
    }

    #[test]
    fn single_system_series_is_geometric() {
        let s = hilbert_series(1, 7);
        assert!(s.coeffs().iter().all(|c| c.is_one()));
        // 1/(1-t): u_1 = 1 and nothing else.
        let u = strip_euler_factors(&s).unwrap();
        assert_eq!(u, ints(&[1, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn quadratic_coefficient() {
        for k in 1..=7 {
            assert_eq!(*hilbert_series(k, 3).coeff(2), q(1 << (k - 1), 1));
        }
    }

    #[test]
    fn constant_series_has_no_generators() {
        let counts = euler_exponents(&PowerSeries::one(6)).unwrap();
        assert!(counts.as_slice().iter().all(Zero::is_zero));
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = PowerSeries::from_integers(&[2, 1, 1]);
        assert!(matches!(euler_exponents(&s), Err(SeriesError::NonUnitConstant(_))));
        let half = PowerSeries::new(alloc::vec![q(1, 1), q(1, 2), q(0, 1)]);
        assert_eq!(euler_exponents(&half), Err(SeriesError::NonIntegral { d: 1, value: q(1, 2) }));
        let neg = PowerSeries::from_integers(&[1, -1, 0]);
        assert_eq!(euler_exponents(&neg), Err(SeriesError::Negative { d: 1, value: q(-1, 1) }));
        assert_eq!(free_generator_count(1, 2), Err(SeriesError::BadGeneratorQuery { k: 1, d: 2 }));
        assert_eq!(PowerSeries::from_integers(&[0, 1]).inverse(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn free_group_generator_examples() {
        for d in 1..=8 {
            assert_eq!(free_generator_count(2, d).unwrap(), BigUint::one());
        }
        assert_eq!(free_generator_count(3, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(free_generator_count(3, 2).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn series_arithmetic() {
        let s = PowerSeries::from_integers(&[1, 2, 3, 4]);
        let inv = s.inverse().unwrap();
        assert_eq!(&s * &inv, PowerSeries::one(3));
        assert_eq!(&(&s + &s) - &s, s);
        // log(1/(1-t)) = Σ t^n/n.
        let geo = PowerSeries::from_integers(&[1, 1, 1, 1, 1]);
        let log = geo.log().unwrap();
        assert_eq!(log.coeffs(), &[q(0, 1), q(1, 1), q(1, 2), q(1, 3), q(1, 4)]);
        assert_eq!(s.derivative().integral().coeffs()[1..3], s.coeffs()[1..3]);
    }

    #[test]
    fn binomial_factor_matches_repeated_products() {
        let one_minus = PowerSeries::from_integers(&[1, 0, -1, 0, 0, 0, 0]);
        let mut cube = PowerSeries::one(6);
        for _ in 0..3 {
            cube = &cube * &one_minus;
        }
        assert_eq!(PowerSeries::binomial_factor(2, &q(3, 1), 6), cube);
        let inverse = one_minus.inverse().unwrap();
        assert_eq!(PowerSeries::binomial_factor(2, &q(-1, 1), 6), inverse);
    }

    #[test]
    fn both_extraction_routes_agree_on_hilbert_series() {
        for k in 1..=5 {
            let s = hilbert_series(k, 7);
            let strip = strip_euler_factors(&s).unwrap();
            assert_eq!(strip, euler_exponents_via_log(&s).unwrap(), "k = {k}");
            assert_eq!(euler_product(&strip, 7), s);
        }
    }

    #[test]
    fn partition_generating_function() {
        let coeffs: Vec<i64> = (0..=15).map(|m| partitions_of(m).len() as i64).collect();
        let s = PowerSeries::from_integers(&coeffs);
        assert_eq!(strip_euler_factors(&s).unwrap(), ints(&[1; 15]));
    }

    proptest! {
        #[test]
        fn roundtrip_from_random_exponents(u in proptest::collection::vec(-4i64..6, 1..8)) {
            let exps = ints(&u);
            let order = exps.len();
            let s = euler_product(&exps, order);
            prop_assert_eq!(strip_euler_factors(&s).unwrap(), exps.clone());
            prop_assert_eq!(euler_exponents_via_log(&s).unwrap(), exps);
        }

        #[test]
        fn roundtrip_from_random_series(tail in proptest::collection::vec((-5i64..5, 1i64..4), 1..7)) {
            let mut coeffs = alloc::vec![q(1, 1)];
            coeffs.extend(tail.iter().map(|&(n, d)| q(n, d)));
            let s = PowerSeries::new(coeffs);
            let strip = strip_euler_factors(&s).unwrap();
            prop_assert_eq!(euler_product(&strip, s.order()), s.clone());
            prop_assert_eq!(euler_exponents_via_log(&s).unwrap(), strip);
        }
    }
}
