//! The four computation routes behind one interface.

use std::fmt;

use num_traits::One;
use pathweight::closedforms::{self, FormulaError};
use pathweight::feq::{self, FeqError};
use pathweight::paths::{self, PathError};
use pathweight::series::rat;
use pathweight::{BigRational, PathFamily, ProductMode, WeightSpec};
use thiserror::Error;

use crate::sequence::EngineKind;

/// A family, weight and product mode: everything a sequence depends on
/// besides its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqConfig {
    pub family: PathFamily,
    pub weight: WeightSpec,
    pub mode: ProductMode,
}

impl fmt::Display for SeqConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family.label())?;
        if let Some(k) = self.family.k() {
            write!(f, " k={k}")?;
        }
        write!(f, " weight={} mode={}", self.weight, self.mode)
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("engine {engine} does not handle {config}")]
    Unsupported { engine: EngineKind, config: String },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Feq(#[from] FeqError),
}

pub trait Engine {
    fn kind(&self) -> EngineKind;
    fn supports(&self, cfg: &SeqConfig) -> bool;
    /// Terms for sizes `0..=n_max`. Only called when `supports` holds.
    fn compute(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError>;

    fn sequence(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError> {
        if !self.supports(cfg) {
            return Err(EngineError::Unsupported {
                engine: self.kind(),
                config: cfg.to_string(),
            });
        }
        self.compute(cfg, n_max)
    }
}

pub struct BruteForce;
pub struct Formula;
pub struct Feq;
pub struct Kernel;

impl Engine for BruteForce {
    fn kind(&self) -> EngineKind {
        EngineKind::Bruteforce
    }

    fn supports(&self, _: &SeqConfig) -> bool {
        true
    }

    fn compute(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError> {
        (0..=n_max)
            .map(|n| Ok(paths::weighted_sum(&cfg.family, n, &cfg.weight, &cfg.mode)?))
            .collect()
    }
}

/// `m` for weights of the form `1 + m l`.
fn affine_m(w: &WeightSpec) -> Option<BigRational> {
    match w {
        WeightSpec::AffineOne(m) => Some(m.clone()),
        WeightSpec::AffineTwo => Some(rat(2)),
        _ => None,
    }
}

impl Engine for Formula {
    fn kind(&self) -> EngineKind {
        EngineKind::Formula
    }

    fn supports(&self, cfg: &SeqConfig) -> bool {
        use PathFamily::*;
        match (&cfg.mode, &cfg.family) {
            (ProductMode::Full, Catalan(_) | Schroeder(_) | MotzkinOdd(_)) => true,
            (ProductMode::Full, MotzkinEven(_)) => cfg.weight == WeightSpec::Ones,
            (ProductMode::SkipFirst, Catalan(k)) => {
                affine_m(&cfg.weight).is_some_and(|m| m.is_one() || *k == 1)
            }
            (ProductMode::SkipLast, Catalan(1)) => affine_m(&cfg.weight).is_some_and(|m| m.is_one()),
            _ => false,
        }
    }

    fn compute(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError> {
        let term = |n: u64| -> Result<BigRational, FormulaError> {
            match (&cfg.mode, &cfg.family) {
                (ProductMode::Full, PathFamily::Catalan(k)) => closedforms::catalan_closed(*k, n, &cfg.weight),
                (ProductMode::Full, PathFamily::Schroeder(k)) => {
                    closedforms::schroeder_closed(*k, n, &cfg.weight)
                }
                (ProductMode::Full, PathFamily::MotzkinOdd(k)) => {
                    closedforms::motzkin_odd_closed(*k, n, &cfg.weight)
                }
                (ProductMode::Full, PathFamily::MotzkinEven(k)) => closedforms::motzkin_even_count(*k, n),
                (ProductMode::SkipFirst, PathFamily::Catalan(k)) => {
                    closedforms::catalan_skip_first(*k, n, &affine_m(&cfg.weight).unwrap())
                }
                (ProductMode::SkipLast, PathFamily::Catalan(1)) => Ok(closedforms::catalan_skip_last_k1(n)),
                _ => unreachable!("guarded by supports()"),
            }
        };
        (0..=n_max).map(|n| Ok(term(n)?)).collect()
    }
}

impl Engine for Feq {
    fn kind(&self) -> EngineKind {
        EngineKind::Feq
    }

    fn supports(&self, cfg: &SeqConfig) -> bool {
        cfg.mode == ProductMode::Full
            && matches!(
                cfg.family,
                PathFamily::Catalan(_) | PathFamily::Schroeder(_) | PathFamily::MotzkinOdd(_)
            )
    }

    fn compute(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError> {
        Ok(feq::family_sequence(&cfg.family, &cfg.weight, n_max)?)
    }
}

impl Engine for Kernel {
    fn kind(&self) -> EngineKind {
        EngineKind::Kernel
    }

    fn supports(&self, cfg: &SeqConfig) -> bool {
        cfg.mode == ProductMode::Full
            && cfg.weight == WeightSpec::Ones
            && matches!(cfg.family, PathFamily::MotzkinEven(_))
    }

    fn compute(&self, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, EngineError> {
        let k = cfg.family.k().expect("even Motzkin has k");
        Ok(feq::kernel_even_motzkin(k, n_max)?)
    }
}

/// All built-in engines, brute force first (it is the reference).
pub fn standard() -> Vec<Box<dyn Engine>> {
    vec![Box::new(BruteForce), Box::new(Formula), Box::new(Feq), Box::new(Kernel)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: PathFamily, weight: WeightSpec, mode: ProductMode) -> SeqConfig {
        SeqConfig { family, weight, mode }
    }

    #[test]
    fn support_matrix() {
        let even_ones = cfg(PathFamily::MotzkinEven(2), WeightSpec::Ones, ProductMode::Full);
        let even_lin = cfg(PathFamily::MotzkinEven(2), WeightSpec::Linear(rat(1)), ProductMode::Full);
        assert!(Formula.supports(&even_ones) && Kernel.supports(&even_ones) && !Feq.supports(&even_ones));
        assert!(!Formula.supports(&even_lin) && !Kernel.supports(&even_lin));
        assert!(BruteForce.supports(&even_lin));

        let skip2 = cfg(PathFamily::Catalan(2), WeightSpec::AffineOne(rat(2)), ProductMode::SkipFirst);
        assert!(!Formula.supports(&skip2));
        let skip1 = cfg(PathFamily::Catalan(2), WeightSpec::AffineOne(rat(1)), ProductMode::SkipFirst);
        assert!(Formula.supports(&skip1));
        let meta = cfg(PathFamily::Catalan(1), WeightSpec::Ones, ProductMode::Metasylvester(rat(1)));
        assert!(!Formula.supports(&meta) && !Feq.supports(&meta));
        assert!(matches!(
            Formula.sequence(&meta, 3),
            Err(EngineError::Unsupported { .. })
        ));
    }

    #[test]
    fn engines_agree_on_a_small_case() {
        let c = cfg(PathFamily::Schroeder(2), WeightSpec::Factorial, ProductMode::Full);
        let reference = BruteForce.sequence(&c, 4).unwrap();
        assert_eq!(Formula.sequence(&c, 4).unwrap(), reference);
        assert_eq!(Feq.sequence(&c, 4).unwrap(), reference);
    }
}
