//! Weight functions on ascent lengths and their generating series
//! `F(x) = 1 + sum_{l >= 1} f(l) x^l`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{rat, TruncatedSeries};

/// A weight function `f` applied to each ascent length of a path.
///
/// `Table` weights are zero past the end of the table. That silently changes
/// every sum involving a longer ascent, so finite tables describe
/// finite-support experiments rather than truncations of some other weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeightSpec {
    /// `f(l) = 1`
    Ones,
    /// `f(l) = m l`
    Linear(BigRational),
    /// `f(l) = 1 + m l`
    AffineOne(BigRational),
    /// `f(l) = 1 + 2 l`
    AffineTwo,
    /// `f(l) = l!`
    Factorial,
    /// `f(l) = table[l - 1]`, zero beyond the table
    Table(Vec<BigRational>),
}

/// `numerator / denominator` as coefficient lists in ascending powers of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
}

impl RationalFunction {
    fn from_ints(num: &[i64], den: &[i64]) -> Self {
        Self {
            numerator: num.iter().map(|&c| rat(c)).collect(),
            denominator: den.iter().map(|&c| rat(c)).collect(),
        }
    }

    /// Power series expansion to the given order. The denominator must have a
    /// nonzero constant term.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let num = TruncatedSeries::new(self.numerator.clone(), order);
        let den = TruncatedSeries::new(self.denominator.clone(), order);
        num.mul(&den.reciprocal().expect("denominator constant term is nonzero"))
    }
}

impl WeightSpec {
    /// `f(len)`. By convention `len = 0` gives the constant term of `F`, 1.
    pub fn evaluate(&self, len: usize) -> BigRational {
        if len == 0 {
            return BigRational::one();
        }
        let l = rat(len as i64);
        match self {
            WeightSpec::Ones => BigRational::one(),
            WeightSpec::Linear(m) => m * l,
            WeightSpec::AffineOne(m) => BigRational::one() + m * l,
            WeightSpec::AffineTwo => BigRational::one() + rat(2) * l,
            WeightSpec::Factorial => {
                BigRational::from_integer((1..=len).map(BigInt::from).product())
            }
            WeightSpec::Table(t) => t.get(len - 1).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    /// `F(x)` truncated at `order`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::new((0..=order).map(|l| self.evaluate(l)).collect(), order)
    }

    /// `F(x)` as a rational function when one exists among the known closed
    /// forms. Factorial and table weights have none.
    pub fn closed_form(&self) -> Option<RationalFunction> {
        match self {
            WeightSpec::Ones => Some(RationalFunction::from_ints(&[1], &[1, -1])),
            // 1 + m x / (1-x)^2
            WeightSpec::Linear(m) => Some(RationalFunction {
                numerator: vec![rat(1), m - rat(2), rat(1)],
                denominator: vec![rat(1), rat(-2), rat(1)],
            }),
            // (1 + (m-1) x) / (1-x)^2
            WeightSpec::AffineOne(m) => Some(RationalFunction {
                numerator: vec![rat(1), m - rat(1)],
                denominator: vec![rat(1), rat(-2), rat(1)],
            }),
            WeightSpec::AffineTwo => Some(RationalFunction::from_ints(&[1, 1], &[1, -2, 1])),
            WeightSpec::Factorial | WeightSpec::Table(_) => None,
        }
    }

    /// True when every `f(l)` is an integer.
    pub fn is_integral(&self) -> bool {
        match self {
            WeightSpec::Ones | WeightSpec::AffineTwo | WeightSpec::Factorial => true,
            WeightSpec::Linear(m) | WeightSpec::AffineOne(m) => m.is_integer(),
            WeightSpec::Table(t) => t.iter().all(BigRational::is_integer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseWeightError {
    #[error("unknown weight `{0}` (expected ones, linear:m, affine:m, affine2, factorial or table:a,b,...)")]
    Unknown(String),
    #[error("invalid rational `{0}`")]
    BadRational(String),
}

/// Parses `p`, `p/q` or `-p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseWeightError> {
    let bad = || ParseWeightError::BadRational(s.to_string());
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

impl FromStr for WeightSpec {
    type Err = ParseWeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("ones", None) => Ok(WeightSpec::Ones),
            ("affine2", None) => Ok(WeightSpec::AffineTwo),
            ("factorial", None) => Ok(WeightSpec::Factorial),
            ("linear", Some(m)) => Ok(WeightSpec::Linear(parse_rational(m)?)),
            ("affine", Some(m)) => Ok(WeightSpec::AffineOne(parse_rational(m)?)),
            ("table", Some(entries)) => entries
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map(WeightSpec::Table),
            _ => Err(ParseWeightError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Ones => write!(f, "ones"),
            WeightSpec::Linear(m) => write!(f, "linear:{m}"),
            WeightSpec::AffineOne(m) => write!(f, "affine:{m}"),
            WeightSpec::AffineTwo => write!(f, "affine2"),
            WeightSpec::Factorial => write!(f, "factorial"),
            WeightSpec::Table(t) => {
                write!(f, "table:")?;
                for (i, v) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    fn all_specs() -> Vec<WeightSpec> {
        vec![
            WeightSpec::Ones,
            WeightSpec::Linear(rat(1)),
            WeightSpec::Linear(ratio(-3, 2)),
            WeightSpec::AffineOne(rat(1)),
            WeightSpec::AffineOne(ratio(5, 7)),
            WeightSpec::AffineTwo,
            WeightSpec::Factorial,
            WeightSpec::Table(vec![rat(2), ratio(1, 3)]),
        ]
    }

    #[test]
    fn series_examples() {
        assert_eq!(WeightSpec::Ones.series(3), TruncatedSeries::from_ints(&[1, 1, 1, 1], 3));
        assert_eq!(
            WeightSpec::Linear(rat(1)).series(3),
            TruncatedSeries::from_ints(&[1, 1, 2, 3], 3)
        );
        assert_eq!(
            WeightSpec::AffineOne(rat(1)).series(3),
            TruncatedSeries::from_ints(&[1, 2, 3, 4], 3)
        );
        assert_eq!(
            WeightSpec::Factorial.series(4),
            TruncatedSeries::from_ints(&[1, 1, 2, 6, 24], 4)
        );
        assert_eq!(
            WeightSpec::Table(vec![rat(5), rat(-1)]).series(4),
            TruncatedSeries::from_ints(&[1, 5, -1, 0, 0], 4)
        );
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            WeightSpec::Ones.closed_form(),
            Some(RationalFunction::from_ints(&[1], &[1, -1]))
        );
        assert_eq!(
            WeightSpec::AffineTwo.closed_form(),
            Some(RationalFunction::from_ints(&[1, 1], &[1, -2, 1]))
        );
        assert_eq!(WeightSpec::Factorial.closed_form(), None);
        assert_eq!(WeightSpec::Table(vec![rat(1)]).closed_form(), None);
    }

    #[test]
    fn closed_forms_expand_to_series() {
        for spec in all_specs() {
            if let Some(rf) = spec.closed_form() {
                assert_eq!(rf.expand(40), spec.series(40), "{spec}");
            }
        }
    }

    #[test]
    fn series_coefficients_are_weights() {
        for spec in all_specs() {
            let f = spec.series(12);
            assert!(f.constant_term().is_one());
            for l in 1..=12 {
                assert_eq!(f.coeffs()[l], spec.evaluate(l), "{spec} at {l}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for text in ["ones", "linear:2", "affine:-1/3", "affine2", "factorial", "table:1,2/3,0"] {
            let spec: WeightSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!("linear:4/2".parse::<WeightSpec>().unwrap(), WeightSpec::Linear(rat(2)));
        assert!(matches!("linear".parse::<WeightSpec>(), Err(ParseWeightError::Unknown(_))));
        assert!(matches!("ones:3".parse::<WeightSpec>(), Err(ParseWeightError::Unknown(_))));
        assert!(matches!(
            "linear:1/0".parse::<WeightSpec>(),
            Err(ParseWeightError::BadRational(_))
        ));
        assert!(matches!(
            "table:1,x".parse::<WeightSpec>(),
            Err(ParseWeightError::BadRational(_))
        ));
    }

    #[test]
    fn integrality() {
        assert!(WeightSpec::Linear(rat(4)).is_integral());
        assert!(!WeightSpec::AffineOne(ratio(1, 2)).is_integral());
        assert!(WeightSpec::Factorial.is_integral());
    }
}
