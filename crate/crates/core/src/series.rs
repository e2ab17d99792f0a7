//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of `x^0..=x^N`
//! and represents a power series modulo `x^(N+1)`. The order is carried
//! explicitly; binary operations on operands of different orders truncate to
//! the smaller one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("rational power requires constant term 1")]
    ConstantTermNotOne,
    #[error("series order {have} is insufficient, need at least {needed}")]
    InsufficientOrder { needed: usize, have: usize },
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A power series known modulo `x^(order+1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Builds a series of the given order, zero-padding or truncating `coeffs`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(BigRational::one(), 1, order)
    }

    /// `c * x^exponent`, which is zero if `exponent > order`.
    pub fn monomial(c: BigRational, exponent: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exponent <= order {
            s.coeffs[exponent] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `[x^i]` of the series, or `None` beyond the truncation order.
    pub fn coeff(&self, i: usize) -> Option<&BigRational> {
        self.coeffs.get(i)
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops coefficients above `order`. Raising the order is not allowed,
    /// since the new coefficients would be unknown.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise truncation order");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        Self { coeffs }
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    /// Multiplicative inverse modulo `x^(order+1)`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=m {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[m - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `outer(inner)` by Horner's rule. `inner` must have zero constant term,
    /// which makes every coefficient of the result a finite sum.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.constant_term().is_zero() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e` for rational `e`, defined through the binomial series of
    /// `(1 + u)^e` with `u = self - 1`.
    ///
    /// Computed with the power recurrence `n b_n = sum_j ((e+1) j - n) a_j b_(n-j)`
    /// (valid when `a_0 = 1`), which costs O(N^2) and skips zero coefficients.
    pub fn rational_pow(&self, e: &BigRational) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let n = self.order();
        let support: Vec<usize> = (1..=n).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let e1 = e + BigRational::one();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(BigRational::one());
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for &j in support.iter().take_while(|&&j| j <= m) {
                let factor = &e1 * rat(j as i64) - rat(m as i64);
                if !factor.is_zero() && !out[m - j].is_zero() {
                    acc += factor * &self.coeffs[j] * &out[m - j];
                }
            }
            out.push(acc / rat(m as i64));
        }
        Ok(Self { coeffs: out })
    }

    /// Termwise derivative. The result is known one order lower; a series of
    /// order 0 differentiates to the zero series of order 0.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=n).map(|i| &self.coeffs[i] * rat(i as i64)).collect();
        Self { coeffs }
    }
}

fn check_lagrange(phi: &TruncatedSeries, n: usize) -> Result<(), SeriesError> {
    assert!(n >= 1, "Lagrange extraction is defined for n >= 1");
    if phi.constant_term().is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    if phi.order() < n - 1 {
        return Err(SeriesError::InsufficientOrder {
            needed: n - 1,
            have: phi.order(),
        });
    }
    Ok(())
}

/// `[x^n] P` for the unique `P` with `P = x * phi(P)`, via
/// `[x^n] P = (1/n) [x^(n-1)] phi^n`.
pub fn lagrange_coeff(phi: &TruncatedSeries, n: usize) -> Result<BigRational, SeriesError> {
    check_lagrange(phi, n)?;
    let power = phi.truncate(n - 1).pow(n as u64);
    Ok(&power.coeffs[n - 1] / rat(n as i64))
}

/// `[x^n] psi(P)` for the same `P`, via `(1/n) [x^(n-1)] psi'(x) phi(x)^n`.
pub fn lagrange_psi(
    phi: &TruncatedSeries,
    psi: &TruncatedSeries,
    n: usize,
) -> Result<BigRational, SeriesError> {
    check_lagrange(phi, n)?;
    if psi.order() < n {
        return Err(SeriesError::InsufficientOrder {
            needed: n,
            have: psi.order(),
        });
    }
    let dpsi = psi.truncate(n).derivative();
    let power = phi.truncate(n - 1).pow(n as u64);
    let prod = dpsi.mul(&power);
    Ok(&prod.coeffs[n - 1] / rat(n as i64))
}

/// Generalized binomial coefficient `alpha (alpha-1) ... (alpha-j+1) / j!`.
pub fn gen_binom(alpha: &BigRational, j: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc *= alpha - rat(i as i64);
        acc /= rat(i as i64 + 1);
    }
    acc
}

/// Ordinary binomial coefficient; zero when `k < 0` or `k > n`, and `n` must
/// be non-negative.
pub fn binomial(n: i64, k: i64) -> BigInt {
    assert!(n >= 0, "binomial top must be non-negative, got {n}");
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: acc = C(n, i) before this update
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        TruncatedSeries { coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect();
        TruncatedSeries { coeffs }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(c, n)
    }

    /// Iterate P <- x * phi(P) from P = 0; after n+1 rounds [x^0..=x^n] are exact.
    fn fixed_point(phi: &TruncatedSeries, n: usize) -> TruncatedSeries {
        let phi = phi.truncate(phi.order().min(n));
        let mut p = TruncatedSeries::zero(n);
        for _ in 0..=n {
            p = phi.compose(&p).unwrap().shift(1);
        }
        p
    }

    #[test]
    fn add_examples() {
        assert_eq!(&s(&[1, 1], 3) + &s(&[1, -1], 3), s(&[2], 3));
        assert_eq!(&TruncatedSeries::zero(2) + &s(&[4, 5, 6], 2), s(&[4, 5, 6], 2));
        assert_eq!(&s(&[1, 2, 3], 2) + &s(&[0, 0, 1], 2), s(&[1, 2, 4], 2));
    }

    #[test]
    fn mismatched_orders_truncate_to_minimum() {
        let sum = &s(&[1, 1, 1, 1], 3) + &s(&[1, 1], 1);
        assert_eq!(sum.order(), 1);
        assert_eq!(sum, s(&[2, 2], 1));
        assert_eq!(s(&[1, 1, 1], 2).mul(&s(&[1], 5)).order(), 2);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 1], 2).mul(&s(&[1, -1], 2)), s(&[1, 0, -1], 2));
        assert_eq!(s(&[1, -1], 5).mul(&s(&[1; 6], 5)), s(&[1], 5));
        assert_eq!(s(&[1, 1], 3).pow(3), s(&[1, 3, 3, 1], 3));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(s(&[1, -1], 6).reciprocal().unwrap(), s(&[1; 7], 6));
        assert_eq!(
            s(&[2], 3).reciprocal().unwrap(),
            TruncatedSeries::constant(ratio(1, 2), 3)
        );
        assert_eq!(
            s(&[1, 1], 4).reciprocal().unwrap(),
            s(&[1, -1, 1, -1, 1], 4)
        );
        assert_eq!(
            s(&[0, 1], 3).reciprocal(),
            Err(SeriesError::ZeroConstantTerm)
        );
    }

    #[test]
    fn compose_examples() {
        let inner = s(&[0, 3, -1, 7], 3);
        assert_eq!(TruncatedSeries::x(3).compose(&inner).unwrap(), inner);
        let geo = s(&[1; 6], 5);
        assert_eq!(
            geo.compose(&s(&[0, 0, 1], 5)).unwrap(),
            s(&[1, 0, 1, 0, 1, 0], 5)
        );
        assert_eq!(
            s(&[1, 2, 1], 3).compose(&s(&[0, 1, 1], 3)).unwrap(),
            s(&[1, 2, 3, 2], 3)
        );
        assert_eq!(
            geo.compose(&s(&[1, 1], 5)),
            Err(SeriesError::NonzeroInnerConstant)
        );
    }

    #[test]
    fn int_pow_examples() {
        assert_eq!(s(&[3, 1, 4], 4).pow(0), TruncatedSeries::one(4));
        assert_eq!(s(&[1, 1], 4).pow(4), s(&[1, 4, 6, 4, 1], 4));
        let cube = s(&[1, -1], 8).reciprocal().unwrap().pow(3);
        for n in 0..=8 {
            assert_eq!(cube.coeffs()[n], BigRational::from(binomial(n as i64 + 2, 2)));
        }
    }

    #[test]
    fn rational_pow_examples() {
        let a = s(&[1, 2, -3, 5], 3);
        assert_eq!(a.rational_pow(&rat(1)).unwrap(), a);
        assert_eq!(
            s(&[1, 1], 2).rational_pow(&ratio(1, 2)).unwrap(),
            TruncatedSeries::new(vec![rat(1), ratio(1, 2), ratio(-1, 8)], 2)
        );
        let root = a.rational_pow(&ratio(1, 2)).unwrap();
        assert_eq!(root.rational_pow(&rat(2)).unwrap(), a);
        assert_eq!(root.pow(2), a);
        assert_eq!(
            s(&[2, 1], 2).rational_pow(&ratio(1, 2)),
            Err(SeriesError::ConstantTermNotOne)
        );
    }

    #[test]
    fn rational_pow_matches_binomial_series() {
        // independent route: sum_j C(e, j) u^j with u = a - 1
        let a = s(&[1, -2, 0, 3, 1, 0, -1], 6);
        let u = &a - &TruncatedSeries::one(6);
        for e in [ratio(1, 2), ratio(-3, 4), ratio(7, 3), rat(-2)] {
            let mut expected = TruncatedSeries::zero(6);
            let mut upow = TruncatedSeries::one(6);
            for j in 0..=6u64 {
                expected = &expected + &upow.scale(&gen_binom(&e, j));
                upow = upow.mul(&u);
            }
            assert_eq!(a.rational_pow(&e).unwrap(), expected, "e = {e}");
        }
    }

    #[test]
    fn gen_binom_examples() {
        assert_eq!(gen_binom(&ratio(-5, 3), 0), rat(1));
        assert_eq!(gen_binom(&ratio(7, 2), 2), ratio(35, 8));
        assert_eq!(gen_binom(&rat(5), 2), rat(10));
        assert_eq!(gen_binom(&rat(3), 5), rat(0));
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(6, 7), BigInt::from(0));
        assert_eq!(binomial(6, -1), BigInt::from(0));
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn lagrange_coeff_examples() {
        // oracles computed by fixed-point iteration
        let phi = s(&[1, 2, 1], 4);
        assert_eq!(fixed_point(&phi, 3).coeffs()[3], rat(5));
        assert_eq!(lagrange_coeff(&phi, 3).unwrap(), rat(5));

        let one = TruncatedSeries::one(6);
        assert_eq!(lagrange_coeff(&one, 1).unwrap(), rat(1));
        for n in 2..=6 {
            assert_eq!(lagrange_coeff(&one, n).unwrap(), rat(0));
        }

        let geo = s(&[1; 5], 4);
        assert_eq!(fixed_point(&geo, 4).coeffs()[4], rat(5));
        assert_eq!(lagrange_coeff(&geo, 4).unwrap(), rat(5));
    }

    #[test]
    fn lagrange_errors() {
        assert_eq!(
            lagrange_coeff(&s(&[0, 1], 4), 2),
            Err(SeriesError::ZeroConstantTerm)
        );
        assert_eq!(
            lagrange_coeff(&s(&[1, 1], 1), 4),
            Err(SeriesError::InsufficientOrder { needed: 3, have: 1 })
        );
        assert_eq!(
            lagrange_psi(&s(&[1, 1], 5), &s(&[0, 1], 2), 4),
            Err(SeriesError::InsufficientOrder { needed: 4, have: 2 })
        );
    }

    #[test]
    fn lagrange_psi_examples() {
        let phi = s(&[1, 2, 1], 6);
        let x = TruncatedSeries::x(6);
        for n in 1..=6 {
            assert_eq!(
                lagrange_psi(&phi, &x, n).unwrap(),
                lagrange_coeff(&phi, n).unwrap()
            );
        }
        let p = fixed_point(&phi, 3);
        let expected = p.pow(2).coeffs()[3].clone();
        // P = x + 2x^2 + 5x^3 + ..., so P^2 = x^2 + 4x^3 + ...
        assert_eq!(expected, rat(4));
        let psi = s(&[0, 0, 1], 3);
        assert_eq!(lagrange_psi(&phi, &psi, 3).unwrap(), expected);
        let c = s(&[7], 6);
        for n in 1..=6 {
            assert_eq!(lagrange_psi(&phi, &c, n).unwrap(), rat(0));
        }
    }

    #[test]
    fn derivative_is_termwise() {
        let d = s(&[5, 1, 3, 2], 3).derivative();
        assert_eq!(d, s(&[1, 6, 6], 2));
        assert_eq!(s(&[9], 0).derivative(), TruncatedSeries::zero(0));
    }

    #[test]
    fn display_is_readable() {
        let a = TruncatedSeries::new(vec![rat(1), ratio(-1, 2), rat(0), rat(1)], 3);
        assert_eq!(a.to_string(), "1 - 1/2*x + x^3 + O(x^4)");
        assert_eq!(TruncatedSeries::zero(1).to_string(), "0 + O(x^2)");
    }

    fn small_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-5i64..=5, order + 1)
            .prop_map(move |c| TruncatedSeries::from_ints(&c, order))
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-5i64..=5, order).prop_map(move |mut c| {
            c.insert(0, 1);
            TruncatedSeries::from_ints(&c, order)
        })
    }

    fn lowest_terms(q: &BigRational) -> bool {
        use num_integer::Integer;
        q.denom() > &BigInt::zero() && q.numer().gcd(q.denom()).is_one()
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in small_series(6), b in small_series(6), c in small_series(6)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn reciprocal_is_two_sided_inverse(a in small_series(6)) {
            prop_assume!(!a.constant_term().is_zero());
            let inv = a.reciprocal().unwrap();
            prop_assert_eq!(a.mul(&inv), TruncatedSeries::one(6));
            prop_assert_eq!(inv.mul(&a), TruncatedSeries::one(6));
        }

        #[test]
        fn compose_with_x_is_identity(a in small_series(7)) {
            prop_assert_eq!(a.compose(&TruncatedSeries::x(7)).unwrap(), a);
        }

        #[test]
        fn rational_pow_adds_exponents(
            a in unit_series(6),
            (pn, pd) in (-8i64..=8, 1i64..=4),
            (qn, qd) in (-8i64..=8, 1i64..=4),
        ) {
            let p = ratio(pn, pd);
            let q = ratio(qn, qd);
            let lhs = a.rational_pow(&p).unwrap().mul(&a.rational_pow(&q).unwrap());
            prop_assert_eq!(lhs, a.rational_pow(&(p + q)).unwrap());
        }

        #[test]
        fn lagrange_matches_fixed_point(c in prop::collection::vec(-4i64..=4, 13), c0 in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), n in 1usize..=12) {
            let mut coeffs = c;
            coeffs[0] = c0;
            let phi = TruncatedSeries::from_ints(&coeffs, 12);
            let p = fixed_point(&phi, n);
            prop_assert_eq!(lagrange_coeff(&phi, n).unwrap(), p.coeffs()[n].clone());
        }

        #[test]
        fn results_stay_in_lowest_terms(a in unit_series(5), b in small_series(5), pn in -7i64..=7, pd in 1i64..=6) {
            let e = ratio(pn, pd);
            let outs = [
                a.rational_pow(&e).unwrap(),
                a.reciprocal().unwrap(),
                a.mul(&b),
                &a - &b,
                b.scale(&e),
            ];
            for s in &outs {
                prop_assert!(s.coeffs().iter().all(lowest_terms));
            }
        }
    }
}
