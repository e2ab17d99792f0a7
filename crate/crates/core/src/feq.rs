//! Series solutions of the first-return functional equation
//!
//! ```text
//! P = F(U(x, W(x) P)) * (1 + P * V(x, W(x) P))
//! ```
//!
//! and the kernel-method count of even-k Motzkin paths.
//!
//! Every monomial of `U`, `V` and `W` carries at least one factor of `x`, so
//! the right-hand side determines `[x^t]` from `[x^0..t-1]` of its argument.
//! Iterating from `P = 1` therefore fixes one more coefficient per round and
//! `N + 1` rounds give `P` exactly modulo `x^(N+1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::closedforms::signed_self_convolution;
use crate::paths::{PathFamily, StepKind};
use crate::series::{rat, SeriesError, TruncatedSeries};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeqError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("step with zero horizontal size")]
    ZeroWidthStep,
    #[error("weight series must have constant term 1")]
    WeightConstantNotOne,
    #[error("only down-steps of vertical size 1 are supported, got {0}")]
    UnsupportedDownStep(i32),
    #[error("coefficient {coefficient} changed after it should have been fixed")]
    NonContractive { coefficient: usize },
    #[error("kernel method needs even k, got {0}")]
    OddK(u32),
    #[error("{0}")]
    Family(#[from] crate::paths::PathError),
}

/// `U(x,y) = sum x^r y^s`, `V(x,y)` likewise, `W(x) = sum x^r`, and `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterSpec {
    u_terms: Vec<(u32, u32)>,
    v_terms: Vec<(u32, u32)>,
    w_terms: Vec<u32>,
    f: TruncatedSeries,
}

impl MasterSpec {
    pub fn new(
        u_terms: Vec<(u32, u32)>,
        v_terms: Vec<(u32, u32)>,
        w_terms: Vec<u32>,
        f: TruncatedSeries,
    ) -> Result<Self, FeqError> {
        let all_r = u_terms
            .iter()
            .chain(&v_terms)
            .map(|t| t.0)
            .chain(w_terms.iter().copied());
        if all_r.into_iter().any(|r| r == 0) {
            return Err(FeqError::ZeroWidthStep);
        }
        if !f.constant_term().is_one() {
            return Err(FeqError::WeightConstantNotOne);
        }
        Ok(Self {
            u_terms,
            v_terms,
            w_terms,
            f,
        })
    }

    /// Spec for a path family under weight `w`, with `F` truncated at `order`.
    pub fn for_family(family: &PathFamily, w: &WeightSpec, order: usize) -> Result<Self, FeqError> {
        let system = family.step_system()?;
        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut down = Vec::new();
        for s in system.steps() {
            match s.kind {
                StepKind::U => u.push((s.dx, s.dy as u32)),
                StepKind::V => v.push((s.dx, s.dy as u32)),
                StepKind::W if s.dy == -1 => down.push(s.dx),
                StepKind::W => return Err(FeqError::UnsupportedDownStep(s.dy)),
            }
        }
        Self::new(u, v, down, w.series(order))
    }

    /// `sum x^r Y^s` over `terms`, given powers of `Y` indexed by `s`.
    fn bivariate(terms: &[(u32, u32)], y_pows: &[TruncatedSeries], order: usize) -> TruncatedSeries {
        terms.iter().fold(TruncatedSeries::zero(order), |acc, &(r, s)| {
            &acc + &y_pows[s as usize].shift(r as usize)
        })
    }

    /// Right-hand side of the functional equation at `p`.
    pub fn apply(&self, p: &TruncatedSeries) -> Result<TruncatedSeries, FeqError> {
        let order = p.order().min(self.f.order());
        let p = p.truncate(order);
        let w = self.w_terms.iter().fold(TruncatedSeries::zero(order), |acc, &r| {
            &acc + &TruncatedSeries::monomial(BigRational::one(), r as usize, order)
        });
        let y = w.mul(&p);
        let max_s = self
            .u_terms
            .iter()
            .chain(&self.v_terms)
            .map(|t| t.1)
            .max()
            .unwrap_or(0) as usize;
        let mut y_pows = vec![TruncatedSeries::one(order)];
        for i in 1..=max_s {
            let next = y_pows[i - 1].mul(&y);
            y_pows.push(next);
        }
        let u = Self::bivariate(&self.u_terms, &y_pows, order);
        let v = Self::bivariate(&self.v_terms, &y_pows, order);
        let fu = self.f.truncate(order).compose(&u)?;
        let tail = &TruncatedSeries::one(order) + &p.mul(&v);
        Ok(fu.mul(&tail))
    }
}

/// `P` modulo `x^(order+1)`, by fixed-point iteration from `P = 1`.
pub fn solve_master(spec: &MasterSpec, order: usize) -> Result<TruncatedSeries, FeqError> {
    if spec.f.order() < order {
        return Err(SeriesError::InsufficientOrder {
            needed: order,
            have: spec.f.order(),
        }
        .into());
    }
    let first_change = |a: &TruncatedSeries, b: &TruncatedSeries, upto: usize| {
        (0..upto).find(|&i| a.coeffs()[i] != b.coeffs()[i])
    };
    // the i-th iterate is exact through x^i, so consecutive iterates agree
    // below x^round
    let mut p = TruncatedSeries::one(order);
    for round in 1..=order + 1 {
        let next = spec.apply(&p)?;
        if let Some(coefficient) = first_change(&next, &p, round.min(order + 1)) {
            return Err(FeqError::NonContractive { coefficient });
        }
        p = next;
    }
    // the last round compared every coefficient, so p is a fixed point
    Ok(p)
}

/// `P - F(U(x,WP)) (1 + P V(x,WP))`; identically zero exactly for the solution.
pub fn residual(spec: &MasterSpec, p: &TruncatedSeries) -> Result<TruncatedSeries, FeqError> {
    let rhs = spec.apply(p)?;
    Ok(p - &rhs)
}

/// Weighted family sums for sizes `0..=n_max`, read off the series solution
/// at the widths of each size.
pub fn family_sequence(family: &PathFamily, w: &WeightSpec, n_max: u64) -> Result<Vec<BigRational>, FeqError> {
    let order = family.width(n_max) as usize;
    let spec = MasterSpec::for_family(family, w, order)?;
    let p = solve_master(&spec, order)?;
    Ok((0..=n_max)
        .map(|n| p.coeffs()[family.width(n) as usize].clone())
        .collect())
}

fn even(k: u32) -> Result<u64, FeqError> {
    if k == 0 || k % 2 == 1 {
        Err(FeqError::OddK(k))
    } else {
        Ok(k as u64)
    }
}

/// `1 + z^(k+1) + z^(2k+2)` at the given order.
fn kernel_base(k: u64, order: usize) -> TruncatedSeries {
    let mut c = vec![BigRational::zero(); order + 1];
    c[0] = BigRational::one();
    for e in [k + 1, 2 * k + 2] {
        if (e as usize) <= order {
            c[e as usize] = BigRational::one();
        }
    }
    TruncatedSeries::new(c, order)
}

/// `a_m = [z^m] y(z)` for the small root `y = z (1 + y^(k+1) + y^(2k+2))^(1/2)`,
/// computed as `(1/m) [z^(m-1)] (1 + z^(k+1) + z^(2k+2))^(m/2)`.
pub fn kernel_root_coeff(k: u32, m: u64) -> Result<BigRational, FeqError> {
    let k = even(k)?;
    assert!(m >= 1, "root coefficients start at m = 1");
    let order = (m - 1) as usize;
    let power = kernel_base(k, order).rational_pow(&BigRational::new(BigInt::from(m), BigInt::from(2)))?;
    Ok(&power.coeffs()[order] / rat(m as i64))
}

/// Number of even-k Motzkin paths of sizes `0..=n_max`, via the kernel
/// method: the count is `[x^((k+1)n+1)] (-y1 y2)` for the two small roots,
/// which reduces to a signed self-convolution of `mu_j = a_((k+1)j+1)`.
///
/// Only `mu_0..=mu_(2 n_max)` are needed, i.e. root coefficients up to
/// index `(k+1) 2 n_max + 1`.
pub fn kernel_even_motzkin(k: u32, n_max: u64) -> Result<Vec<BigRational>, FeqError> {
    let kk = even(k)?;
    let mu = (0..=2 * n_max)
        .map(|j| kernel_root_coeff(k, (kk + 1) * j + 1))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert_eq!(mu.len() as u64, 2 * n_max + 1);
    Ok((0..=n_max as usize)
        .map(|n| signed_self_convolution(&mu, n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedforms::{catalan_count, motzkin_even_count, motzkin_even_mu};
    use crate::series::ratio;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn catalan_solution_has_catalan_even_coefficients() {
        let spec = MasterSpec::new(vec![(1, 1)], vec![], vec![1], WeightSpec::Ones.series(10)).unwrap();
        let p = solve_master(&spec, 10).unwrap();
        let even: Vec<_> = (0..=5).map(|n| p.coeffs()[2 * n].clone()).collect();
        assert_eq!(even, ints(&[1, 1, 2, 5, 14, 42]));
        assert!((0..5).all(|n| p.coeffs()[2 * n + 1].is_zero()));
    }

    #[test]
    fn schroeder_solution() {
        let fam = PathFamily::Schroeder(1);
        let seq = family_sequence(&fam, &WeightSpec::Ones, 4).unwrap();
        assert_eq!(seq, ints(&[1, 2, 6, 22, 90]));
    }

    #[test]
    fn trivial_weight_gives_only_empty_path() {
        let f = TruncatedSeries::one(6);
        let spec = MasterSpec::new(vec![(1, 1)], vec![], vec![1], f).unwrap();
        assert_eq!(solve_master(&spec, 6).unwrap(), TruncatedSeries::one(6));
    }

    #[test]
    fn residual_examples() {
        let spec = MasterSpec::new(vec![(1, 1)], vec![], vec![1], WeightSpec::Ones.series(12)).unwrap();
        let p = solve_master(&spec, 12).unwrap();
        assert!(residual(&spec, &p).unwrap().is_zero());

        let mut bumped = p.coeffs().to_vec();
        bumped[5] += rat(1);
        let r = residual(&spec, &TruncatedSeries::new(bumped, 12)).unwrap();
        let first = r.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        assert!(first <= 5, "residual first nonzero at {first}");

        // P = C(x^2) from the Fuss-Catalan closed form
        let mut c = vec![BigRational::zero(); 13];
        for n in 0..=6 {
            c[2 * n] = catalan_count(1, n as u64).unwrap();
        }
        assert!(residual(&spec, &TruncatedSeries::new(c, 12)).unwrap().is_zero());
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            MasterSpec::new(vec![(0, 1)], vec![], vec![1], WeightSpec::Ones.series(3)),
            Err(FeqError::ZeroWidthStep)
        );
        assert_eq!(
            MasterSpec::new(vec![(1, 1)], vec![], vec![1], TruncatedSeries::from_ints(&[2, 1], 3)),
            Err(FeqError::WeightConstantNotOne)
        );
        assert_eq!(
            MasterSpec::for_family(&PathFamily::MotzkinEven(2), &WeightSpec::Ones, 4),
            Err(FeqError::UnsupportedDownStep(-2))
        );
    }

    #[test]
    fn kernel_examples() {
        let k2 = kernel_even_motzkin(2, 7).unwrap();
        assert_eq!(k2, ints(&[1, 2, 17, 204, 2848, 43335, 697194, 11663971]));
        assert_eq!(kernel_even_motzkin(6, 1).unwrap()[1], rat(4));
        assert_eq!(kernel_even_motzkin(3, 1), Err(FeqError::OddK(3)));
    }

    #[test]
    fn root_coefficients_vanish_off_progression() {
        for k in [2u32, 4, 6] {
            for m in 1..=40u64 {
                let a = kernel_root_coeff(k, m).unwrap();
                if (m - 1) % (k as u64 + 1) != 0 {
                    assert!(a.is_zero(), "a_{m} = {a} for k = {k}");
                }
            }
        }
        assert_eq!(kernel_root_coeff(2, 4).unwrap(), ratio(1, 2));
    }

    #[test]
    fn mu_routes_agree() {
        for k in [2u32, 4, 6, 8, 10] {
            for j in 0..=6u64 {
                assert_eq!(
                    motzkin_even_mu(k, j).unwrap(),
                    kernel_root_coeff(k, (k as u64 + 1) * j + 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn kernel_matches_mu_formula() {
        for k in [2u32, 4, 6] {
            let kern = kernel_even_motzkin(k, 5).unwrap();
            for (n, v) in kern.iter().enumerate() {
                assert_eq!(*v, motzkin_even_count(k, n as u64).unwrap());
            }
        }
    }
}
