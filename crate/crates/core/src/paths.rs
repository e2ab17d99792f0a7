//! Step systems, exhaustive path generation and brute-force weighted sums.
//!
//! Paths are generated depth first. A branch is abandoned as soon as the
//! remaining width cannot bring the current height back to zero using the
//! steepest available down-step, so no dead end is explored past the point
//! where it becomes hopeless.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::rat;
use crate::weights::{parse_rational, WeightSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("invalid step {0}: {1}")]
    InvalidStep(Step, &'static str),
    #[error("step {0} appears more than once")]
    DuplicateStep(Step),
    #[error("{family} paths need k >= 1")]
    ZeroK { family: &'static str },
    #[error("{family} paths need {parity} k, got {k}")]
    Parity {
        family: &'static str,
        parity: &'static str,
        k: u32,
    },
}

/// Role of a step in the first-return decomposition: ascents (`U`), other
/// non-descending steps (`V`) and down-steps (`W`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    U,
    V,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub dx: u32,
    pub dy: i32,
    pub kind: StepKind,
}

impl Step {
    pub const fn up(dx: u32, dy: i32) -> Self {
        Self { dx, dy, kind: StepKind::U }
    }

    pub const fn level(dx: u32, dy: i32) -> Self {
        Self { dx, dy, kind: StepKind::V }
    }

    pub const fn down(dx: u32, dy: i32) -> Self {
        Self { dx, dy, kind: StepKind::W }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({},{})", self.kind, self.dx, self.dy)
    }
}

/// The `(U, V, W)` step-set triple. Down-steps may have any negative `dy`;
/// the functional-equation engine separately insists on `dy = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepSystem {
    name: String,
    /// Sorted U, then V, then W; listing order kept within a kind. This is
    /// the order in which paths are generated.
    steps: Vec<Step>,
}

impl StepSystem {
    pub fn new(name: impl Into<String>, steps: Vec<Step>) -> Result<Self, PathError> {
        for (i, s) in steps.iter().enumerate() {
            if s.dx == 0 {
                return Err(PathError::InvalidStep(*s, "horizontal size must be positive"));
            }
            match s.kind {
                StepKind::U | StepKind::V if s.dy < 0 => {
                    return Err(PathError::InvalidStep(*s, "U and V steps cannot descend"));
                }
                StepKind::W if s.dy >= 0 => {
                    return Err(PathError::InvalidStep(*s, "W steps must descend"));
                }
                _ => {}
            }
            if steps[..i].contains(s) {
                return Err(PathError::DuplicateStep(*s));
            }
        }
        let mut steps = steps;
        steps.sort_by_key(|s| s.kind);
        Ok(Self { name: name.into(), steps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn of_kind(&self, kind: StepKind) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(move |s| s.kind == kind)
    }

    /// Steepest descent as `(dx, |dy|)`, or `(1, 0)` without down-steps.
    fn steepest_descent(&self) -> (u64, u64) {
        self.of_kind(StepKind::W)
            .map(|s| (s.dx as u64, s.dy.unsigned_abs() as u64))
            .fold((1, 0), |best, cand| {
                // cand.1 / cand.0 > best.1 / best.0
                if cand.1 * best.0 > best.1 * cand.0 {
                    cand
                } else {
                    best
                }
            })
    }
}

/// The path families studied here, plus arbitrary step systems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathFamily {
    /// Steps `(1,k)`, `(1,-1)`; size `n` has width `(k+1)n`.
    Catalan(u32),
    /// Steps `(1,k)`, `(2,k-1)`, `(1,-1)`; width `(k+1)n`.
    Schroeder(u32),
    /// Odd `k`: steps `(1,k)`, `(1,(k-1)/2)`, `(1,-1)`; width `(k+1)n/2`.
    MotzkinOdd(u32),
    /// Even `k`: steps `(1,2k)`, `(1,k-1)`, `(1,-2)`; width `(k+1)n`.
    /// Heights are in doubled units so all coordinates stay integral.
    MotzkinEven(u32),
    /// Size equals width.
    Custom(StepSystem),
}

impl PathFamily {
    /// `MotzkinOdd` or `MotzkinEven` depending on the parity of `k`.
    pub fn motzkin(k: u32) -> Self {
        if k % 2 == 1 {
            PathFamily::MotzkinOdd(k)
        } else {
            PathFamily::MotzkinEven(k)
        }
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            PathFamily::Catalan(k)
            | PathFamily::Schroeder(k)
            | PathFamily::MotzkinOdd(k)
            | PathFamily::MotzkinEven(k) => Some(k),
            PathFamily::Custom(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PathFamily::Catalan(_) => "catalan",
            PathFamily::Schroeder(_) => "schroeder",
            PathFamily::MotzkinOdd(_) | PathFamily::MotzkinEven(_) => "motzkin",
            PathFamily::Custom(_) => "custom",
        }
    }

    fn validate(&self) -> Result<(), PathError> {
        let family = self.label();
        match *self {
            PathFamily::Custom(_) => Ok(()),
            _ if self.k() == Some(0) => Err(PathError::ZeroK { family }),
            PathFamily::MotzkinOdd(k) if k % 2 == 0 => Err(PathError::Parity {
                family,
                parity: "odd",
                k,
            }),
            PathFamily::MotzkinEven(k) if k % 2 == 1 => Err(PathError::Parity {
                family,
                parity: "even",
                k,
            }),
            _ => Ok(()),
        }
    }

    pub fn step_system(&self) -> Result<StepSystem, PathError> {
        self.validate()?;
        let (name, steps) = match *self {
            PathFamily::Catalan(k) => (
                format!("catalan({k})"),
                vec![Step::up(1, k as i32), Step::down(1, -1)],
            ),
            PathFamily::Schroeder(k) => (
                format!("schroeder({k})"),
                vec![
                    Step::up(1, k as i32),
                    Step::level(2, k as i32 - 1),
                    Step::down(1, -1),
                ],
            ),
            PathFamily::MotzkinOdd(k) => (
                format!("motzkin({k})"),
                vec![
                    Step::up(1, k as i32),
                    Step::level(1, (k as i32 - 1) / 2),
                    Step::down(1, -1),
                ],
            ),
            PathFamily::MotzkinEven(k) => (
                format!("motzkin({k})"),
                vec![
                    Step::up(1, 2 * k as i32),
                    Step::level(1, k as i32 - 1),
                    Step::down(1, -2),
                ],
            ),
            PathFamily::Custom(ref sys) => return Ok(sys.clone()),
        };
        StepSystem::new(name, steps)
    }

    /// Horizontal extent of a path of size `n`.
    pub fn width(&self, n: u64) -> u64 {
        match *self {
            PathFamily::Catalan(k) | PathFamily::Schroeder(k) | PathFamily::MotzkinEven(k) => {
                (k as u64 + 1) * n
            }
            PathFamily::MotzkinOdd(k) => (k as u64).div_ceil(2) * n,
            PathFamily::Custom(_) => n,
        }
    }
}

/// Lengths of the maximal runs of consecutive U-steps, in path order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AscentVector(pub Vec<u32>);

impl AscentVector {
    pub fn lengths(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for AscentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub steps: Vec<Step>,
    pub width: u64,
}

impl LatticePath {
    pub fn ascent_vector(&self) -> AscentVector {
        let mut out = Vec::new();
        let mut run = 0u32;
        for s in &self.steps {
            if s.kind == StepKind::U {
                run += 1;
            } else if run > 0 {
                out.push(run);
                run = 0;
            }
        }
        if run > 0 {
            out.push(run);
        }
        AscentVector(out)
    }

    /// Vertices visited, starting at the origin.
    pub fn points(&self) -> Vec<(u64, i64)> {
        let mut pts = Vec::with_capacity(self.steps.len() + 1);
        let (mut x, mut y) = (0u64, 0i64);
        pts.push((x, y));
        for s in &self.steps {
            x += s.dx as u64;
            y += s.dy as i64;
            pts.push((x, y));
        }
        pts
    }

    /// Never below the axis, ends at height 0, spans exactly `width`.
    pub fn is_valid(&self) -> bool {
        let pts = self.points();
        pts.iter().all(|&(_, y)| y >= 0) && pts.last() == Some(&(self.width, 0))
    }

    /// Letter word such as `UUWUW`.
    pub fn word(&self) -> String {
        self.steps
            .iter()
            .map(|s| match s.kind {
                StepKind::U => 'U',
                StepKind::V => 'V',
                StepKind::W => 'W',
            })
            .collect()
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Shared pruning rule for both traversals.
#[derive(Clone, Copy)]
struct Bounds {
    width: u64,
    descent_dx: u64,
    descent_dy: u64,
}

impl Bounds {
    fn new(system: &StepSystem, width: u64) -> Self {
        let (descent_dx, descent_dy) = system.steepest_descent();
        Self {
            width,
            descent_dx,
            descent_dy,
        }
    }

    /// Position after `step`, if the result can still finish at `(width, 0)`.
    #[inline]
    fn advance(&self, x: u64, h: i64, step: &Step) -> Option<(u64, i64)> {
        let nx = x + step.dx as u64;
        let nh = h + step.dy as i64;
        if nx > self.width || nh < 0 {
            return None;
        }
        // nh / (width - nx) <= descent_dy / descent_dx
        if (nh as u64) * self.descent_dx > (self.width - nx) * self.descent_dy {
            return None;
        }
        Some((nx, nh))
    }
}

/// Lazy depth-first stream of every path of the given width, in
/// lexicographic order of step choices.
pub struct PathIter {
    steps: Vec<Step>,
    bounds: Bounds,
    taken: Vec<usize>,
    resume: usize,
    x: u64,
    h: i64,
    state: IterState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    AtLeaf,
    Searching,
    Done,
}

pub fn enumerate_paths(system: &StepSystem, width: u64) -> PathIter {
    PathIter {
        steps: system.steps.clone(),
        bounds: Bounds::new(system, width),
        taken: Vec::new(),
        resume: 0,
        x: 0,
        h: 0,
        state: IterState::Fresh,
    }
}

impl PathIter {
    fn backtrack(&mut self) -> bool {
        match self.taken.pop() {
            Some(i) => {
                self.x -= self.steps[i].dx as u64;
                self.h -= self.steps[i].dy as i64;
                self.resume = i + 1;
                true
            }
            None => false,
        }
    }

    fn current(&self) -> LatticePath {
        let path = LatticePath {
            steps: self.taken.iter().map(|&i| self.steps[i]).collect(),
            width: self.bounds.width,
        };
        debug_assert!(path.is_valid(), "generator produced invalid path {path}");
        path
    }
}

impl Iterator for PathIter {
    type Item = LatticePath;

    fn next(&mut self) -> Option<LatticePath> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                if self.bounds.width == 0 {
                    self.state = IterState::AtLeaf;
                    return Some(self.current());
                }
                self.state = IterState::Searching;
            }
            IterState::AtLeaf => {
                if !self.backtrack() {
                    self.state = IterState::Done;
                    return None;
                }
                self.state = IterState::Searching;
            }
            IterState::Searching => {}
        }
        loop {
            let next = (self.resume..self.steps.len()).find_map(|i| {
                self.bounds
                    .advance(self.x, self.h, &self.steps[i])
                    .map(|pos| (i, pos))
            });
            match next {
                Some((i, (nx, nh))) => {
                    self.taken.push(i);
                    self.x = nx;
                    self.h = nh;
                    self.resume = 0;
                    if nx == self.bounds.width {
                        // pruning guarantees nh == 0 here
                        self.state = IterState::AtLeaf;
                        return Some(self.current());
                    }
                }
                None => {
                    if !self.backtrack() {
                        self.state = IterState::Done;
                        return None;
                    }
                }
            }
        }
    }
}

/// Number of paths per distinct ascent vector over all paths of one width.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AscentHistogram {
    counts: HashMap<Vec<u32>, u64>,
}

/// How the per-ascent factors are combined into a path weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProductMode {
    /// `prod_{i=1}^{|u|} f(u_i)`
    Full,
    /// `prod_{i=2}^{|u|} f(u_i)`
    SkipFirst,
    /// `prod_{i=1}^{|u|-1} f(u_i)`
    SkipLast,
    /// `prod_{i=2}^{|u|} (1 + m * sum_{j>=i} u_j)`; ignores the weight function.
    Metasylvester(BigRational),
}

impl ProductMode {
    /// Weight of a single path with the given ascent vector.
    pub fn weight_of(&self, ascents: &AscentVector, w: &WeightSpec) -> BigRational {
        let longest = ascents.0.iter().copied().max().unwrap_or(0) as usize;
        let f: Vec<BigRational> = (0..=longest).map(|l| w.evaluate(l)).collect();
        self.product(&ascents.0, &f)
    }

    /// Weight of one ascent vector. `f` caches `f(l)` by index.
    fn product(&self, lengths: &[u32], f: &[BigRational]) -> BigRational {
        let n = lengths.len();
        let range = match self {
            ProductMode::Full => 0..n,
            ProductMode::SkipFirst => 1.min(n)..n,
            ProductMode::SkipLast => 0..n.saturating_sub(1),
            ProductMode::Metasylvester(m) => {
                let mut acc = BigRational::one();
                let mut suffix = 0u64;
                for i in (1..n).rev() {
                    suffix += lengths[i] as u64;
                    acc *= BigRational::one() + m * rat(suffix as i64);
                }
                return acc;
            }
        };
        lengths[range]
            .iter()
            .map(|&l| f[l as usize].clone())
            .product()
    }
}

impl fmt::Display for ProductMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductMode::Full => write!(f, "full"),
            ProductMode::SkipFirst => write!(f, "skip-first"),
            ProductMode::SkipLast => write!(f, "skip-last"),
            ProductMode::Metasylvester(m) => write!(f, "meta:{m}"),
        }
    }
}

impl FromStr for ProductMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(ProductMode::Full),
            "skip-first" => Ok(ProductMode::SkipFirst),
            "skip-last" => Ok(ProductMode::SkipLast),
            _ => match s.strip_prefix("meta:") {
                Some(m) => parse_rational(m)
                    .map(ProductMode::Metasylvester)
                    .map_err(|e| e.to_string()),
                None => Err(format!(
                    "unknown mode `{s}` (expected full, skip-first, skip-last or meta:m)"
                )),
            },
        }
    }
}

impl AscentHistogram {
    pub fn total_paths(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn distinct_vectors(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, ascents: &AscentVector) -> u64 {
        self.counts.get(&ascents.0).copied().unwrap_or(0)
    }

    /// `sum over paths of mode.product(u(P))`, grouped by ascent vector.
    pub fn weighted_sum(&self, w: &WeightSpec, mode: &ProductMode) -> BigRational {
        let longest = self
            .counts
            .keys()
            .flat_map(|v| v.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let f: Vec<BigRational> = (0..=longest).map(|l| w.evaluate(l)).collect();
        // sorted keys make the summation order reproducible
        let mut keys: Vec<&Vec<u32>> = self.counts.keys().collect();
        keys.sort();
        keys.into_iter()
            .map(|k| mode.product(k, &f) * BigRational::from_integer(BigInt::from(self.counts[k])))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self
    }
}

/// A partially built path: position plus its ascent blocks so far.
#[derive(Clone)]
struct Frontier {
    x: u64,
    h: i64,
    in_ascent: bool,
    blocks: Vec<u32>,
}

struct Walker<'a> {
    steps: &'a [Step],
    bounds: Bounds,
}

impl Walker<'_> {
    fn walk(&self, x: u64, h: i64, in_ascent: bool, blocks: &mut Vec<u32>, out: &mut AscentHistogram) {
        if x == self.bounds.width {
            debug_assert_eq!(h, 0);
            match out.counts.get_mut(blocks.as_slice()) {
                Some(c) => *c += 1,
                None => {
                    out.counts.insert(blocks.clone(), 1);
                }
            }
            return;
        }
        for step in self.steps {
            let Some((nx, nh)) = self.bounds.advance(x, h, step) else {
                continue;
            };
            if step.kind == StepKind::U {
                if in_ascent {
                    *blocks.last_mut().unwrap() += 1;
                    self.walk(nx, nh, true, blocks, out);
                    *blocks.last_mut().unwrap() -= 1;
                } else {
                    blocks.push(1);
                    self.walk(nx, nh, true, blocks, out);
                    blocks.pop();
                }
            } else {
                self.walk(nx, nh, false, blocks, out);
            }
        }
    }

    fn walk_from(&self, start: &Frontier) -> AscentHistogram {
        let mut out = AscentHistogram::default();
        let mut blocks = start.blocks.clone();
        self.walk(start.x, start.h, start.in_ascent, &mut blocks, &mut out);
        out
    }

    /// Expands the search tree breadth first until there are at least
    /// `target` independent subtrees (or nothing left to expand).
    fn split(&self, target: usize) -> Vec<Frontier> {
        let mut frontier = vec![Frontier {
            x: 0,
            h: 0,
            in_ascent: false,
            blocks: Vec::new(),
        }];
        while frontier.len() < target {
            let mut next = Vec::with_capacity(frontier.len() * self.steps.len());
            let mut grew = false;
            for node in frontier {
                if node.x == self.bounds.width {
                    next.push(node);
                    continue;
                }
                for step in self.steps {
                    let Some((nx, nh)) = self.bounds.advance(node.x, node.h, step) else {
                        continue;
                    };
                    grew = true;
                    let mut child = Frontier {
                        x: nx,
                        h: nh,
                        in_ascent: step.kind == StepKind::U,
                        blocks: node.blocks.clone(),
                    };
                    if step.kind == StepKind::U {
                        if node.in_ascent {
                            *child.blocks.last_mut().unwrap() += 1;
                        } else {
                            child.blocks.push(1);
                        }
                    }
                    next.push(child);
                }
            }
            frontier = next;
            if !grew {
                break;
            }
        }
        frontier
    }
}

/// Visits every path of `width` once and tallies ascent vectors. With the
/// `parallel` feature the search tree is split into independent subtrees
/// that are walked on the rayon pool; the result is identical either way.
pub fn ascent_histogram(system: &StepSystem, width: u64) -> AscentHistogram {
    let walker = Walker {
        steps: &system.steps,
        bounds: Bounds::new(system, width),
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if width >= 12 {
            return walker
                .split(256)
                .par_iter()
                .map(|node| walker.walk_from(node))
                .reduce(AscentHistogram::default, AscentHistogram::merge);
        }
    }
    walker.walk_from(&Frontier {
        x: 0,
        h: 0,
        in_ascent: false,
        blocks: Vec::new(),
    })
}

/// Single-threaded variant of [`ascent_histogram`].
pub fn ascent_histogram_serial(system: &StepSystem, width: u64) -> AscentHistogram {
    let walker = Walker {
        steps: &system.steps,
        bounds: Bounds::new(system, width),
    };
    walker
        .split(1)
        .iter()
        .map(|node| walker.walk_from(node))
        .fold(AscentHistogram::default(), AscentHistogram::merge)
}

/// Brute-force `sum over paths of size n` of the mode-specific product.
pub fn weighted_sum(
    family: &PathFamily,
    n: u64,
    w: &WeightSpec,
    mode: &ProductMode,
) -> Result<BigRational, PathError> {
    let system = family.step_system()?;
    Ok(ascent_histogram(&system, family.width(n)).weighted_sum(w, mode))
}

pub fn count_paths(family: &PathFamily, n: u64) -> Result<BigRational, PathError> {
    weighted_sum(family, n, &WeightSpec::Ones, &ProductMode::Full)
}

/// Path count by dynamic programming over `(x, height)`. Independent of the
/// generator; used to audit it.
pub fn count_paths_dp(system: &StepSystem, width: u64) -> BigInt {
    let w = width as usize;
    let mut table: Vec<HashMap<i64, BigInt>> = vec![HashMap::new(); w + 1];
    table[0].insert(0, BigInt::one());
    for x in 0..w {
        let column = std::mem::take(&mut table[x]);
        for (&h, count) in &column {
            for s in &system.steps {
                let nx = x + s.dx as usize;
                let nh = h + s.dy as i64;
                if nx <= w && nh >= 0 {
                    *table[nx].entry(nh).or_insert_with(BigInt::zero) += count;
                }
            }
        }
        table[x] = column;
    }
    table[w].get(&0).cloned().unwrap_or_else(BigInt::zero)
}
