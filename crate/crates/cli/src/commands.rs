//! Subcommand arguments and implementations.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathweight::closedforms;
use pathweight::feq;
use pathweight::{BigRational, PathFamily, ProductMode, WeightSpec};
use thiserror::Error;

use crate::engines::{self, Engine, SeqConfig};
use crate::oeis::{self, OeisError, OeisId, Transport};
use crate::sequence::{EngineKind, Format, SequenceResult, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIFF: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pathweight", version, about = "Weighted lattice-path enumeration with cross-checked engines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the weighted sums for n = 0..=n-max.
    Seq(SeqArgs),
    /// Run every applicable engine over a grid and report agreement.
    Verify(VerifyArgs),
    /// Reproduce a built-in table.
    Table(TableArgs),
    /// Compare a computed sequence with an OEIS b-file.
    Oeis(OeisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Catalan,
    Schroeder,
    Motzkin,
}

impl FamilyName {
    pub fn with_k(self, k: u32) -> PathFamily {
        match self {
            FamilyName::Catalan => PathFamily::Catalan(k),
            FamilyName::Schroeder => PathFamily::Schroeder(k),
            FamilyName::Motzkin => PathFamily::motzkin(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Auto,
    Bruteforce,
    Formula,
    Feq,
}

/// Options shared by `seq` and `oeis` that pin down one sequence.
#[derive(Debug, Clone, Args)]
pub struct SequenceArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// ones | linear:m | affine:m | affine2 | factorial | table:a,b,c
    #[arg(long, default_value = "ones")]
    pub weight: WeightSpec,
    /// full | skip-first | skip-last | meta:m
    #[arg(long, default_value = "full")]
    pub mode: ProductMode,
    #[arg(long, value_enum, default_value = "auto")]
    pub engine: EngineChoice,
}

impl SequenceArgs {
    pub fn config(&self) -> SeqConfig {
        SeqConfig {
            family: self.family.with_k(self.k),
            weight: self.weight.clone(),
            mode: self.mode.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[arg(long, default_value_t = 10)]
    pub n_max: u64,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated families.
    #[arg(long, default_value = "catalan,schroeder,motzkin")]
    pub families: String,
    #[arg(long, default_value_t = 2)]
    pub k_max: u32,
    #[arg(long, default_value_t = 5)]
    pub n_max: u64,
    /// Comma-separated weights; `table:` entries absorb the numbers after them.
    #[arg(long, default_value = "ones,linear:1,linear:2,affine:1,affine:2,affine2,factorial")]
    pub weights: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    EvenMotzkin,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub name: TableName,
}

#[derive(Debug, Args)]
pub struct OeisArgs {
    #[arg(long)]
    pub id: String,
    #[command(flatten)]
    pub sequence: SequenceArgs,
    /// OEIS index of the computed n = 0 term.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub offset: i64,
    /// Largest n to compute; also limited by the b-file length.
    #[arg(long, default_value_t = 12)]
    pub n_max: u64,
    /// Use only the cache and bundled fixtures.
    #[arg(long)]
    pub offline: bool,
    #[arg(long, default_value = ".pathweight-cache")]
    pub cache_dir: PathBuf,
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Oeis(#[from] OeisError),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => EXIT_USAGE,
            CommandError::Oeis(_) | CommandError::Io(_) => EXIT_IO,
        }
    }
}

fn usage(e: impl ToString) -> CommandError {
    CommandError::Usage(e.to_string())
}

fn pick_engine(choice: EngineChoice, cfg: &SeqConfig, err: &mut dyn Write) -> Result<Box<dyn Engine>, CommandError> {
    let supported = |e: Box<dyn Engine>| e.supports(cfg).then_some(e);
    let chosen = match choice {
        EngineChoice::Bruteforce => Some(Box::new(engines::BruteForce) as Box<dyn Engine>),
        EngineChoice::Formula => supported(Box::new(engines::Formula)),
        // Even-k Motzkin has no first-return equation; the kernel method is its series route.
        EngineChoice::Feq => supported(Box::new(engines::Feq)).or_else(|| supported(Box::new(engines::Kernel))),
        EngineChoice::Auto => match supported(Box::new(engines::Formula)) {
            Some(e) => Some(e),
            None => {
                writeln!(err, "note: no closed form for {cfg}; using brute force")?;
                Some(Box::new(engines::BruteForce) as Box<dyn Engine>)
            }
        },
    };
    chosen.ok_or_else(|| usage(format!("engine {choice:?} does not handle {cfg}").to_lowercase()))
}

fn validate(cfg: &SeqConfig) -> Result<(), CommandError> {
    cfg.family.step_system().map(|_| ()).map_err(usage)
}

fn compute(engine: &dyn Engine, cfg: &SeqConfig, n_max: u64) -> Result<Vec<BigRational>, CommandError> {
    engine.sequence(cfg, n_max).map_err(usage)
}

pub fn build_result(args: &SequenceArgs, engine: EngineKind, values: Vec<BigRational>) -> SequenceResult {
    let cfg = args.config();
    let n_max = values.len() as u64 - 1;
    SequenceResult {
        family: cfg.family.label().to_string(),
        k: cfg.family.k(),
        weight: cfg.weight.to_string(),
        mode: cfg.mode.to_string(),
        engine,
        n_min: 0,
        n_max,
        terms: values
            .into_iter()
            .enumerate()
            .map(|(n, value)| Term { n: n as u64, value })
            .collect(),
    }
}

pub fn seq(args: &SeqArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CommandError> {
    let cfg = args.sequence.config();
    validate(&cfg)?;
    let engine = pick_engine(args.sequence.engine, &cfg, err)?;
    let values = compute(engine.as_ref(), &cfg, args.n_max)?;
    let result = build_result(&args.sequence, engine.kind(), values);
    out.write_all(result.render(args.format).as_bytes())?;
    Ok(EXIT_OK)
}

/// Splits a comma list of weights, rejoining `table:a,b,c` entries.
pub fn split_weights(list: &str) -> Result<Vec<WeightSpec>, CommandError> {
    let mut specs: Vec<String> = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let continues_table = token.starts_with(|c: char| c.is_ascii_digit() || c == '-')
            && specs.last().is_some_and(|s| s.starts_with("table:"));
        match specs.last_mut() {
            Some(prev) if continues_table => {
                prev.push(',');
                prev.push_str(token);
            }
            _ => specs.push(token.to_string()),
        }
    }
    specs.iter().map(|s| s.parse().map_err(usage)).collect()
}

pub fn split_families(list: &str) -> Result<Vec<FamilyName>, CommandError> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| FamilyName::from_str(t, true).map_err(|_| usage(format!("unknown family `{t}`"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub config: SeqConfig,
    pub n: u64,
    pub engine: EngineKind,
    /// `None` when the engine returned too few terms.
    pub value: Option<BigRational>,
    pub reference_engine: EngineKind,
    pub reference: BigRational,
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    verify_with(args, &engines::standard(), out)
}

/// `verify` over an explicit engine list; the first engine is the reference.
pub fn verify_with(args: &VerifyArgs, engines: &[Box<dyn Engine>], out: &mut dyn Write) -> Result<i32, CommandError> {
    let families = split_families(&args.families)?;
    let weights = split_weights(&args.weights)?;
    if args.k_max == 0 {
        return Err(usage("--k-max must be at least 1"));
    }
    let (reference, others) = engines.split_first().ok_or_else(|| usage("no engines"))?;

    let header: Vec<String> = engines.iter().map(|e| e.kind().to_string()).collect();
    writeln!(out, "{:<12} {:>2}  {:<14} {}", "family", "k", "weight", header.join("  "))?;

    let mut first: Option<Disagreement> = None;
    let mut failures = 0usize;
    let mut errors: Vec<String> = Vec::new();
    for family in &families {
        for k in 1..=args.k_max {
            for weight in &weights {
                let cfg = SeqConfig {
                    family: family.with_k(k),
                    weight: weight.clone(),
                    mode: ProductMode::Full,
                };
                let expected = match reference.sequence(&cfg, args.n_max) {
                    Ok(v) => v,
                    Err(e) => {
                        errors.push(format!("{cfg}: {e}"));
                        continue;
                    }
                };
                let mut cells = vec![cell(&header[0], "ref")];
                for (engine, name) in others.iter().zip(&header[1..]) {
                    if !engine.supports(&cfg) {
                        cells.push(cell(name, "-"));
                        continue;
                    }
                    let status = match engine.sequence(&cfg, args.n_max) {
                        Ok(values) => match diff(&expected, &values) {
                            None => "ok",
                            Some(n) => {
                                failures += 1;
                                first.get_or_insert_with(|| Disagreement {
                                    config: cfg.clone(),
                                    n,
                                    engine: engine.kind(),
                                    value: values.get(n as usize).cloned(),
                                    reference_engine: reference.kind(),
                                    reference: expected[n as usize].clone(),
                                });
                                "DIFF"
                            }
                        },
                        Err(e) => {
                            failures += 1;
                            errors.push(format!("{cfg} [{}]: {e}", engine.kind()));
                            "ERROR"
                        }
                    };
                    cells.push(cell(name, status));
                }
                let k_shown = cfg.family.k().map(|k| k.to_string()).unwrap_or_default();
                let row = format!("{:<12} {:>2}  {:<14} {}", cfg.family.label(), k_shown, weight.to_string(), cells.join("  "));
                writeln!(out, "{}", row.trim_end())?;
            }
        }
    }

    for e in &errors {
        writeln!(out, "error: {e}")?;
    }
    if let Some(d) = &first {
        writeln!(
            out,
            "first disagreement: family={} k={} weight={} n={} engine={} value={} ({}={})",
            d.config.family.label(),
            d.config.family.k().map(|k| k.to_string()).unwrap_or_default(),
            d.config.weight,
            d.n,
            d.engine,
            d.value.as_ref().map_or("<missing>".to_string(), ToString::to_string),
            d.reference_engine,
            d.reference
        )?;
    }
    if failures == 0 && errors.is_empty() {
        writeln!(out, "all engines agree for n <= {}", args.n_max)?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "{failures} configuration(s) disagree")?;
        Ok(EXIT_DIFF)
    }
}

fn cell(header: &str, status: &str) -> String {
    format!("{status:<width$}", width = header.len())
}

fn diff(expected: &[BigRational], got: &[BigRational]) -> Option<u64> {
    (0..expected.len().max(got.len()))
        .find(|&i| expected.get(i) != got.get(i))
        .map(|i| i as u64)
}

pub const EVEN_MOTZKIN_KS: [u32; 5] = [2, 4, 6, 8, 10];
pub const EVEN_MOTZKIN_N_MAX: u64 = 7;

/// Rows of the even-k Motzkin count table, via the kernel method and checked
/// against the closed form for the auxiliary sequence.
pub fn even_motzkin_table() -> Result<Vec<(u32, Vec<BigRational>)>, String> {
    EVEN_MOTZKIN_KS
        .iter()
        .map(|&k| {
            let kernel = feq::kernel_even_motzkin(k, EVEN_MOTZKIN_N_MAX).map_err(|e| e.to_string())?;
            for (n, value) in kernel.iter().enumerate() {
                let formula = closedforms::motzkin_even_count(k, n as u64).map_err(|e| e.to_string())?;
                if &formula != value {
                    return Err(format!("k={k} n={n}: kernel {value} vs formula {formula}"));
                }
            }
            Ok((k, kernel))
        })
        .collect()
}

pub fn table(args: &TableArgs, out: &mut dyn Write) -> Result<i32, CommandError> {
    match args.name {
        TableName::EvenMotzkin => {
            let rows = match even_motzkin_table() {
                Ok(rows) => rows,
                Err(e) => {
                    writeln!(out, "internal disagreement: {e}")?;
                    return Ok(EXIT_DIFF);
                }
            };
            writeln!(out, "k\t|M_n^(k)| for 0 <= n <= {EVEN_MOTZKIN_N_MAX}")?;
            for (k, values) in rows {
                let joined: Vec<String> = values.iter().map(ToString::to_string).collect();
                writeln!(out, "{k}\t{}", joined.join(", "))?;
            }
            Ok(EXIT_OK)
        }
    }
}

pub fn oeis(
    args: &OeisArgs,
    transport: &dyn Transport,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CommandError> {
    let id: OeisId = args.id.parse().map_err(usage)?;
    let cfg = args.sequence.config();
    validate(&cfg)?;
    let engine = pick_engine(args.sequence.engine, &cfg, err)?;

    let reference = oeis::resolve(&id, &args.cache_dir, args.offline, transport)?;
    let last_index = reference.terms.last().map_or(i64::MIN, |(i, _)| *i);
    let n_max = match u64::try_from(last_index.saturating_sub(args.offset)) {
        Ok(limit) => args.n_max.min(limit),
        Err(_) => {
            writeln!(out, "{id} ({}): no terms at or after offset {}", reference.source, args.offset)?;
            return Ok(EXIT_DIFF);
        }
    };
    let values = compute(engine.as_ref(), &cfg, n_max)?;
    let cmp = oeis::compare(&values, &reference, args.offset);

    writeln!(out, "{id} ({}) vs {cfg} [{}], offset {}", reference.source, engine.kind(), args.offset)?;
    match &cmp.first_mismatch {
        None if cmp.overlap > 0 => {
            writeln!(out, "match: {} terms agree", cmp.matched)?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "no overlapping terms")?;
            Ok(EXIT_DIFF)
        }
        Some(m) => {
            writeln!(
                out,
                "mismatch: {} of {} overlapping terms agree before n={} ({id} index {}): computed {}, OEIS {}",
                cmp.matched, cmp.overlap, m.n, m.index, m.computed, m.expected
            )?;
            Ok(EXIT_DIFF)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pathweight::series::rat;

    #[test]
    fn weight_lists_rejoin_tables() {
        let w = split_weights("ones, table:1,2/3,-4 ,linear:2,affine2").unwrap();
        assert_eq!(
            w,
            vec![
                WeightSpec::Ones,
                WeightSpec::Table(vec![rat(1), pathweight::series::ratio(2, 3), rat(-4)]),
                WeightSpec::Linear(rat(2)),
                WeightSpec::AffineTwo,
            ]
        );
        assert!(split_weights("ones,2").is_err());
        assert!(split_weights("bogus").is_err());
    }

    #[test]
    fn family_lists() {
        assert_eq!(
            split_families("motzkin,catalan").unwrap(),
            vec![FamilyName::Motzkin, FamilyName::Catalan]
        );
        assert!(split_families("dyck").is_err());
    }

    #[test]
    fn engine_selection() {
        let mut sink = Vec::new();
        let even = SeqConfig {
            family: PathFamily::motzkin(2),
            weight: WeightSpec::Linear(rat(1)),
            mode: ProductMode::Full,
        };
        assert!(pick_engine(EngineChoice::Formula, &even, &mut sink).is_err());
        assert!(pick_engine(EngineChoice::Feq, &even, &mut sink).is_err());
        let e = pick_engine(EngineChoice::Auto, &even, &mut sink).unwrap();
        assert_eq!(e.kind(), EngineKind::Bruteforce);
        assert!(String::from_utf8(sink).unwrap().contains("brute force"));

        let mut sink = Vec::new();
        let ones = SeqConfig { weight: WeightSpec::Ones, ..even };
        assert_eq!(pick_engine(EngineChoice::Feq, &ones, &mut sink).unwrap().kind(), EngineKind::Kernel);
        assert_eq!(pick_engine(EngineChoice::Auto, &ones, &mut sink).unwrap().kind(), EngineKind::Formula);
        assert!(sink.is_empty());
    }

    #[test]
    fn diff_finds_first_difference() {
        assert_eq!(diff(&[rat(1), rat(2)], &[rat(1), rat(2)]), None);
        assert_eq!(diff(&[rat(1), rat(2)], &[rat(1), rat(3)]), Some(1));
        assert_eq!(diff(&[rat(1), rat(2)], &[rat(1)]), Some(1));
    }
}
