//! Explicit enumeration formulas in exact arithmetic.
//!
//! Each family has a generic coefficient-extraction form that accepts any
//! weight, and explicit binomial sums for the weights where one is known.
//! The dispatchers (`catalan_closed` and friends) prefer the binomial sum.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{binomial, gen_binom, rat, SeriesError, TruncatedSeries};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("formula needs odd k, got {0}")]
    EvenK(u32),
    #[error("formula needs even k, got {0}")]
    OddK(u32),
    #[error("no formula for k = {k} with m = {m}")]
    UnsupportedCombination { k: u32, m: BigRational },
}

/// Which formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    GeneralA1,
    GeneralA2,
    CatalanMaster,
    CatalanCount,
    CatalanLinear,
    CatalanAffine,
    CatalanSkipFirstM1,
    CatalanAffineM1Reduced,
    CatalanSkipFirstK1,
    CatalanSkipLastK1,
    SchroederMaster,
    SchroederCount,
    SchroederProduct,
    SchroederAffine1,
    SchroederAffine2,
    MotzkinOddMaster,
    MotzkinOddCount,
    MotzkinOddAffine,
    MotzkinEvenMu,
    MotzkinEvenCount,
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn b(n: i64, k: i64) -> BigRational {
    BigRational::from_integer(binomial(n, k))
}

fn inv(n: i64) -> BigRational {
    rat(n).recip()
}

fn ipow(base: &BigRational, e: u64) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

fn coeff_of_power(f: &TruncatedSeries, i: usize, e: u64) -> Result<BigRational, FormulaError> {
    if f.order() < i {
        return Err(SeriesError::InsufficientOrder {
            needed: i,
            have: f.order(),
        }
        .into());
    }
    Ok(f.truncate(i).pow(e).coeffs()[i].clone())
}

fn nonzero_k(k: u32) -> Result<i64, FormulaError> {
    if k == 0 {
        Err(FormulaError::ZeroK)
    } else {
        Ok(k as i64)
    }
}

/// One ascent step `(1,s)`, level steps `(1, s_i)` of the given heights and
/// a single down-step `(1,-1)`; `n` is the path width.
pub fn general_a1(
    s: u32,
    v_heights: &[u32],
    f: &TruncatedSeries,
    n: u64,
) -> Result<BigRational, FormulaError> {
    let s = s as u64;
    let top = n / (s + 1);
    // 1 + x V(1, x)
    let max_h = v_heights.iter().copied().max().unwrap_or(0) as usize;
    let mut level = vec![BigRational::zero(); max_h + 2];
    level[0] = BigRational::one();
    for &h in v_heights {
        level[h as usize + 1] += BigRational::one();
    }
    let mut sum = BigRational::zero();
    for i in 0..=top {
        let e = n - i + 1;
        let j = (n - (s + 1) * i) as usize;
        let lev = TruncatedSeries::new(level.clone(), j).pow(e).coeffs()[j].clone();
        if lev.is_zero() {
            continue;
        }
        sum += coeff_of_power(f, i as usize, e)? * lev * inv(e as i64);
    }
    Ok(sum)
}

/// Single ascent step `(r1,s1)`, single level step `(r2,s2)` and single
/// down-step `(w,-1)`; `n` is the path width. Zero when no `(i, j)` solves
/// `(w s1 + r1) i + (w s2 + r2) j = n`.
#[allow(clippy::too_many_arguments)]
pub fn general_a2(
    r1: u32,
    s1: u32,
    r2: u32,
    s2: u32,
    w: u32,
    f: &TruncatedSeries,
    n: u64,
) -> Result<BigRational, FormulaError> {
    let a = (w * s1 + r1) as u64;
    let c = (w * s2 + r2) as u64;
    let mut sum = BigRational::zero();
    for i in 0..=n / a {
        let rest = n - a * i;
        if !rest.is_multiple_of(c) {
            continue;
        }
        let j = rest / c;
        let e = s1 as u64 * i + (s2 as u64 + 1) * j + 1;
        sum += coeff_of_power(f, i as usize, e)? * b(e as i64, j as i64) * inv(e as i64);
    }
    Ok(sum)
}

/// `(1/(kn+1)) [x^n] F^(kn+1)` for any weight series `F` of order >= n.
pub fn catalan_master(k: u32, n: u64, f: &TruncatedSeries) -> Result<BigRational, FormulaError> {
    let e = nonzero_k(k)? as u64 * n + 1;
    Ok(coeff_of_power(f, n as usize, e)? * inv(e as i64))
}

/// Fuss-Catalan number `(1/(kn+1)) C((k+1)n, n)`.
pub fn catalan_count(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    Ok(b((k + 1) * n, n) * inv(k * n + 1))
}

/// Weight `f(l) = m l`.
pub fn catalan_linear(k: u32, n: u64, m: &BigRational) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let n = n as i64;
    let sum = (1..=n).fold(BigRational::zero(), |acc, i| {
        acc + b(k * n + 1, i) * b(n + i - 1, n - i) * ipow(m, i as u64)
    });
    Ok(sum * inv(k * n + 1))
}

/// Weight `f(l) = 1 + m l`.
pub fn catalan_affine(k: u32, n: u64, m: &BigRational) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    let m1 = m - BigRational::one();
    let sum = (0..=n).fold(BigRational::zero(), |acc, i| {
        acc + b(k * n + 1, i) * b((2 * k + 1) * n - i + 1, n - i) * ipow(&m1, i as u64)
    });
    Ok(sum * inv(k * n + 1))
}

/// `catalan_affine` at `m = 1`, where only the `i = 0` term survives.
pub fn catalan_affine_m1_reduced(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    Ok(b((2 * k + 1) * n + 1, n) * inv(k * n + 1))
}

/// `sum prod_{i>=2} (1 + u_i)` over k-Catalan paths.
pub fn catalan_skip_first_m1(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    Ok(b((2 * k + 1) * n, n) * inv(2 * k * n + 1))
}

/// `sum prod_{i>=2} (1 + m u_i)` over Dyck paths.
pub fn catalan_skip_first_k1(n: u64, m: &BigRational) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    let n = n as i64;
    let m1 = m - BigRational::one();
    let sum = (0..n).fold(BigRational::zero(), |acc, i| {
        acc + b(n, i) * b(3 * n - i, 2 * n + 1) * ipow(&m1, i as u64)
    });
    sum * inv(n)
}

/// Skip-first product with affine weight `1 + m l`. Only `m = 1` (any `k`)
/// and `k = 1` (any `m`) have formulas.
pub fn catalan_skip_first(k: u32, n: u64, m: &BigRational) -> Result<BigRational, FormulaError> {
    nonzero_k(k)?;
    if m.is_one() {
        catalan_skip_first_m1(k, n)
    } else if k == 1 {
        Ok(catalan_skip_first_k1(n, m))
    } else {
        Err(FormulaError::UnsupportedCombination { k, m: m.clone() })
    }
}

/// `sum prod_{i<|u|} (1 + u_i)` over Dyck paths.
pub fn catalan_skip_last_k1(n: u64) -> BigRational {
    let n = n as i64;
    let head = b(3 * n + 1, n) * inv(n + 1);
    let tail = (0..n).fold(BigRational::zero(), |acc, i| {
        let denom = BigRational::from_integer(BigInt::from(2).pow(i as u32 + 1) * (n - i + 1));
        acc + b(3 * n - 3 * i + 1, n - i) / denom
    });
    head - tail
}

/// Formula used by [`catalan_closed`] for a weight.
pub fn catalan_formula(w: &WeightSpec) -> FormulaId {
    match w {
        WeightSpec::Ones => FormulaId::CatalanCount,
        WeightSpec::Linear(_) => FormulaId::CatalanLinear,
        WeightSpec::AffineOne(_) | WeightSpec::AffineTwo => FormulaId::CatalanAffine,
        _ => FormulaId::CatalanMaster,
    }
}

/// Weighted k-Catalan sum, via the explicit binomial sum when one exists.
pub fn catalan_closed(k: u32, n: u64, w: &WeightSpec) -> Result<BigRational, FormulaError> {
    match w {
        WeightSpec::Ones => catalan_count(k, n),
        WeightSpec::Linear(m) => catalan_linear(k, n, m),
        WeightSpec::AffineOne(m) => catalan_affine(k, n, m),
        WeightSpec::AffineTwo => catalan_affine(k, n, &rat(2)),
        _ => catalan_master(k, n, &w.series(n as usize)),
    }
}

/// `(1/(kn+1)) [x^n] ((1+x) F)^(kn+1)`.
pub fn schroeder_master(k: u32, n: u64, f: &TruncatedSeries) -> Result<BigRational, FormulaError> {
    let e = nonzero_k(k)? as u64 * n + 1;
    let order = n as usize;
    if f.order() < order {
        return Err(SeriesError::InsufficientOrder {
            needed: order,
            have: f.order(),
        }
        .into());
    }
    let g = TruncatedSeries::from_ints(&[1, 1], order).mul(&f.truncate(order));
    Ok(g.pow(e).coeffs()[order].clone() * inv(e as i64))
}

/// Large k-Schroeder numbers.
pub fn schroeder_count(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    let sum = (0..=n).fold(BigRational::zero(), |acc, i| {
        acc + b(k * n + 1, n - i) * b(k * n + i, i)
    });
    Ok(sum * inv(k * n + 1))
}

/// Weight `f(l) = l`.
pub fn schroeder_product(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    let sum = (0..=n / 3).fold(BigRational::zero(), |acc, i| {
        acc + b(k * n + 1, i) * b((2 * k + 1) * n - 3 * i + 1, n - 3 * i)
    });
    Ok(sum * inv(k * n + 1))
}

/// Weight `f(l) = 1 + l`.
pub fn schroeder_affine1(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    let sum = (0..=n).fold(BigRational::zero(), |acc, i| {
        acc + b(k * n + 1, i) * b((2 * k + 1) * n - i + 1, n - i)
    });
    Ok(sum * inv(k * n + 1))
}

/// Weight `f(l) = 1 + 2l`.
pub fn schroeder_affine2(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = nonzero_k(k)?;
    let n = n as i64;
    let sum = (0..=n).fold(BigRational::zero(), |acc, i| {
        acc + b(2 * k * n + 2, i) * b((2 * k + 1) * n - i + 1, n - i)
    });
    Ok(sum * inv(k * n + 1))
}

fn is_int(m: &BigRational, v: i64) -> bool {
    *m == rat(v)
}

pub fn schroeder_formula(w: &WeightSpec) -> FormulaId {
    match w {
        WeightSpec::Ones => FormulaId::SchroederCount,
        WeightSpec::Linear(m) if is_int(m, 1) => FormulaId::SchroederProduct,
        WeightSpec::AffineOne(m) if is_int(m, 1) => FormulaId::SchroederAffine1,
        WeightSpec::AffineOne(m) if is_int(m, 2) => FormulaId::SchroederAffine2,
        WeightSpec::AffineTwo => FormulaId::SchroederAffine2,
        _ => FormulaId::SchroederMaster,
    }
}

pub fn schroeder_closed(k: u32, n: u64, w: &WeightSpec) -> Result<BigRational, FormulaError> {
    match schroeder_formula(w) {
        FormulaId::SchroederCount => schroeder_count(k, n),
        FormulaId::SchroederProduct => schroeder_product(k, n),
        FormulaId::SchroederAffine1 => schroeder_affine1(k, n),
        FormulaId::SchroederAffine2 => schroeder_affine2(k, n),
        _ => schroeder_master(k, n, &w.series(n as usize)),
    }
}

fn odd_half(k: u32) -> Result<i64, FormulaError> {
    nonzero_k(k)?;
    if k.is_multiple_of(2) {
        return Err(FormulaError::EvenK(k));
    }
    Ok((k as i64 + 1) / 2)
}

/// Odd-k Motzkin sum with a per-term factor `g(i, e)` standing in for
/// `[x^i] F^e`.
fn motzkin_odd_sum(
    k: u32,
    n: u64,
    mut g: impl FnMut(i64, i64) -> Result<BigRational, FormulaError>,
) -> Result<BigRational, FormulaError> {
    let h = odd_half(k)?;
    let n = n as i64;
    let mut sum = BigRational::zero();
    for i in 0..=n / 2 {
        let e = h * n - i + 1;
        sum += b(e, n - 2 * i) * g(i, e)? * inv(e);
    }
    Ok(sum)
}

pub fn motzkin_odd_master(k: u32, n: u64, f: &TruncatedSeries) -> Result<BigRational, FormulaError> {
    motzkin_odd_sum(k, n, |i, e| coeff_of_power(f, i as usize, e as u64))
}

pub fn motzkin_odd_count(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let h = odd_half(k)?;
    let n_ = n as i64;
    motzkin_odd_sum(k, n, |i, _| Ok(b(h * n_, i)))
}

/// Weight `f(l) = 1 + l`.
pub fn motzkin_odd_affine(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let n_ = n as i64;
    let k_ = k as i64;
    motzkin_odd_sum(k, n, |i, _| Ok(b((k_ + 1) * n_ - i + 1, i)))
}

pub fn motzkin_odd_formula(w: &WeightSpec) -> FormulaId {
    match w {
        WeightSpec::Ones => FormulaId::MotzkinOddCount,
        WeightSpec::AffineOne(m) if is_int(m, 1) => FormulaId::MotzkinOddAffine,
        _ => FormulaId::MotzkinOddMaster,
    }
}

pub fn motzkin_odd_closed(k: u32, n: u64, w: &WeightSpec) -> Result<BigRational, FormulaError> {
    match motzkin_odd_formula(w) {
        FormulaId::MotzkinOddCount => motzkin_odd_count(k, n),
        FormulaId::MotzkinOddAffine => motzkin_odd_affine(k, n),
        _ => motzkin_odd_master(k, n, &w.series(n as usize / 2)),
    }
}

fn even_k(k: u32) -> Result<i64, FormulaError> {
    nonzero_k(k)?;
    if k % 2 == 1 {
        return Err(FormulaError::OddK(k));
    }
    Ok(k as i64)
}

/// `mu_n = (1/((k+1)n+1)) sum_i C(((k+1)n+1)/2, n-i) C(n-i, i)`, with the
/// half-integer top handled by the generalized binomial coefficient.
pub fn motzkin_even_mu(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let k = even_k(k)?;
    let n = n as i64;
    let top = (k + 1) * n + 1;
    let alpha = BigRational::new(BigInt::from(top), BigInt::from(2));
    let sum = (0..=n / 2).fold(BigRational::zero(), |acc, i| {
        acc + gen_binom(&alpha, (n - i) as u64) * b(n - i, i)
    });
    Ok(sum * inv(top))
}

/// Number of even-k Motzkin paths of size `n`: `sum_i (-1)^i mu_i mu_(2n-i)`.
pub fn motzkin_even_count(k: u32, n: u64) -> Result<BigRational, FormulaError> {
    let mu = (0..=2 * n)
        .map(|i| motzkin_even_mu(k, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(signed_self_convolution(&mu, n as usize))
}

/// `sum_{i=0}^{2n} (-1)^i mu_i mu_(2n-i)`; `mu` needs at least `2n+1` entries.
pub fn signed_self_convolution(mu: &[BigRational], n: usize) -> BigRational {
    (0..=2 * n).fold(BigRational::zero(), |acc, i| {
        let t = &mu[i] * &mu[2 * n - i];
        if i % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}
