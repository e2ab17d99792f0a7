//! OEIS b-file retrieval (network, on-disk cache, bundled fixtures) and
//! term-by-term comparison against computed sequences.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use num_traits::One;
use pathweight::{BigInt, BigRational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("`{0}` is not an A-number (expected A followed by 6 digits)")]
    BadId(String),
    #[error("b-file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cannot fetch {id}: {reason}")]
    Unavailable { id: OeisId, reason: String },
    #[error("cache {path}: {source}")]
    Cache { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OeisId(String);

impl OeisId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `b000108.txt` for A000108.
    pub fn bfile_name(&self) -> String {
        format!("b{}.txt", &self.0[1..])
    }

    pub fn bfile_url(&self) -> String {
        format!("https://oeis.org/{}/{}", self.0, self.bfile_name())
    }
}

impl FromStr for OeisId {
    type Err = OeisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('A').ok_or_else(|| OeisError::BadId(s.into()))?;
        if digits.len() == 6 && digits.bytes().all(|b| b.is_ascii_digit()) {
            Ok(OeisId(s.to_string()))
        } else {
            Err(OeisError::BadId(s.into()))
        }
    }
}

impl fmt::Display for OeisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OeisSource {
    Fetched(String),
    Cache(PathBuf),
    Fixture,
}

impl fmt::Display for OeisSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OeisSource::Fetched(url) => write!(f, "fetched {url}"),
            OeisSource::Cache(path) => write!(f, "cache {}", path.display()),
            OeisSource::Fixture => f.write_str("bundled fixture"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OeisRef {
    pub id: OeisId,
    pub source: OeisSource,
    /// `(index, value)` pairs, strictly increasing in index.
    pub terms: Vec<(i64, BigInt)>,
}

impl OeisRef {
    pub fn term(&self, index: i64) -> Option<&BigInt> {
        self.terms
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.terms[pos].1)
    }
}

/// Parses b-file text. Blank lines and `#` comments are ignored; anything
/// else must be `index value` with indices strictly increasing.
pub fn parse_bfile(text: &str) -> Result<Vec<(i64, BigInt)>, OeisError> {
    let mut terms: Vec<(i64, BigInt)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| OeisError::Parse {
            line: lineno + 1,
            reason,
        };
        let mut fields = line.split_whitespace();
        let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `index value`, got `{line}`")));
        };
        let index: i64 = i.parse().map_err(|_| err(format!("bad index `{i}`")))?;
        let value: BigInt = v.parse().map_err(|_| err(format!("bad value `{v}`")))?;
        if let Some((prev, _)) = terms.last() {
            if index <= *prev {
                return Err(err(format!("index {index} does not follow {prev}")));
            }
        }
        terms.push((index, value));
    }
    Ok(terms)
}

#[derive(Debug, Error)]
#[error("{0}")]
pub struct TransportError(pub String);

/// Fetches raw bytes for a URL. Swappable so tests can count or fail requests.
pub trait Transport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
    retries: u32,
}

const MAX_BFILE_BYTES: u64 = 64 * 1024 * 1024;

impl HttpTransport {
    pub fn new(timeout: Duration, retries: u32) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .user_agent(concat!("pathweight/", env!("CARGO_PKG_VERSION")))
            .build()
            .into();
        HttpTransport { agent, retries }
    }

    /// Timeout from `PATHWEIGHT_HTTP_TIMEOUT_MS` (default 10 s), one retry.
    pub fn from_env() -> Self {
        let ms = std::env::var("PATHWEIGHT_HTTP_TIMEOUT_MS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(10_000);
        Self::new(Duration::from_millis(ms), 1)
    }

    fn get_once(&self, url: &str) -> Result<Vec<u8>, ureq::Error> {
        let mut resp = self.agent.get(url).call()?;
        resp.body_mut().with_config().limit(MAX_BFILE_BYTES).read_to_vec()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        let mut attempt = 0;
        loop {
            match self.get_once(url) {
                Ok(body) => return Ok(body),
                // A 404 will not improve on retry.
                Err(e @ ureq::Error::StatusCode(404)) => return Err(TransportError(e.to_string())),
                Err(e) if attempt >= self.retries => return Err(TransportError(e.to_string())),
                Err(_) => {
                    attempt += 1;
                    std::thread::sleep(Duration::from_millis(500 * u64::from(attempt)));
                }
            }
        }
    }
}

/// Fails every request. Used for `--offline` and in tests.
pub struct NoNetwork;

impl Transport for NoNetwork {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        Err(TransportError(format!("network disabled, not fetching {url}")))
    }
}

const FIXTURES: &[(&str, &str)] = &[
    ("A000108", include_str!("../fixtures/b000108.txt")),
    ("A001006", include_str!("../fixtures/b001006.txt")),
    ("A001764", include_str!("../fixtures/b001764.txt")),
    ("A006318", include_str!("../fixtures/b006318.txt")),
    ("A006605", include_str!("../fixtures/b006605.txt")),
    ("A027307", include_str!("../fixtures/b027307.txt")),
    ("A109081", include_str!("../fixtures/b109081.txt")),
];

pub fn fixture(id: &OeisId) -> Option<&'static str> {
    FIXTURES.iter().find(|(name, _)| *name == id.as_str()).map(|(_, text)| *text)
}

pub fn fixture_ids() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(name, _)| *name)
}

/// Looks up b-file terms: cache first, then the network (caching the
/// result), or with `offline` the cache and then the bundled fixtures.
pub fn resolve(
    id: &OeisId,
    cache_dir: &Path,
    offline: bool,
    transport: &dyn Transport,
) -> Result<OeisRef, OeisError> {
    let cache_path = cache_dir.join(id.bfile_name());
    let found = |source, terms| OeisRef {
        id: id.clone(),
        source,
        terms,
    };

    match fs::read_to_string(&cache_path) {
        Ok(text) => return Ok(found(OeisSource::Cache(cache_path), parse_bfile(&text)?)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {}
        Err(source) => return Err(OeisError::Cache { path: cache_path, source }),
    }

    if offline {
        return match fixture(id) {
            Some(text) => Ok(found(OeisSource::Fixture, parse_bfile(text)?)),
            None => Err(OeisError::Unavailable {
                id: id.clone(),
                reason: format!("offline, with no cached copy and no bundled fixture (fixtures: {})",
                    fixture_ids().collect::<Vec<_>>().join(", ")),
            }),
        };
    }

    let url = id.bfile_url();
    let body = transport.get(&url).map_err(|e| OeisError::Unavailable {
        id: id.clone(),
        reason: e.to_string(),
    })?;
    let text = String::from_utf8(body).map_err(|_| OeisError::Parse {
        line: 0,
        reason: "response is not UTF-8".into(),
    })?;
    let terms = parse_bfile(&text)?;
    write_cache(cache_dir, &cache_path, &text)?;
    Ok(found(OeisSource::Fetched(url), terms))
}

fn write_cache(dir: &Path, path: &Path, text: &str) -> Result<(), OeisError> {
    let wrap = |source| OeisError::Cache {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(wrap)?;
    // Write then rename so an interrupted run never leaves a truncated b-file.
    let tmp = path.with_extension("txt.partial");
    fs::write(&tmp, text).map_err(wrap)?;
    fs::rename(&tmp, path).map_err(wrap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub index: i64,
    pub computed: BigRational,
    pub expected: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    /// Number of computed terms that have an OEIS counterpart.
    pub overlap: usize,
    /// Leading run of agreeing terms.
    pub matched: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.overlap > 0 && self.first_mismatch.is_none()
    }
}

/// Compares `computed[n]` with OEIS term `n + offset`.
pub fn compare(computed: &[BigRational], oeis: &OeisRef, offset: i64) -> Comparison {
    let mut overlap = 0;
    let mut first_mismatch = None;
    let mut matched = 0;
    for (n, value) in computed.iter().enumerate() {
        let index = n as i64 + offset;
        let Some(expected) = oeis.term(index) else {
            continue;
        };
        overlap += 1;
        if first_mismatch.is_some() {
            continue;
        }
        if value.denom().is_one() && value.numer() == expected {
            matched += 1;
        } else {
            first_mismatch = Some(Mismatch {
                n: n as u64,
                index,
                computed: value.clone(),
                expected: expected.clone(),
            });
        }
    }
    Comparison {
        overlap,
        matched,
        first_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pathweight::series::{rat, ratio};
    use std::cell::Cell;

    #[test]
    fn ids() {
        let id: OeisId = "A000108".parse().unwrap();
        assert_eq!(id.bfile_url(), "https://oeis.org/A000108/b000108.txt");
        for bad in ["A00010", "A0001089", "B000108", "a000108", "A00010x", ""] {
            assert!(bad.parse::<OeisId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_bfiles() {
        let terms = parse_bfile("# header\n\n0 1\n1 1\n  2   2  \n3 5\n").unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[3], (3, BigInt::from(5)));

        let big = parse_bfile("7 96106360517372000000000000000").unwrap();
        assert_eq!(big[0].1.to_string(), "96106360517372000000000000000");
    }

    #[test]
    fn rejects_malformed_bfiles() {
        for (text, line) in [
            ("0 1\n1 x\n", 2),
            ("0 1\n0 2\n", 2),
            ("1 1\n0 2\n", 2),
            ("0 1 2\n", 1),
            ("0\n", 1),
            ("0 1.5\n", 1),
        ] {
            match parse_bfile(text) {
                Err(OeisError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn fixtures_parse_and_start_at_zero() {
        for name in fixture_ids() {
            let id: OeisId = name.parse().unwrap();
            let terms = parse_bfile(fixture(&id).unwrap()).unwrap();
            assert!(terms.len() >= 10, "{name}");
            assert_eq!(terms[0].0, 0, "{name}");
        }
    }

    fn oeis(terms: &[(i64, i64)]) -> OeisRef {
        OeisRef {
            id: "A000001".parse().unwrap(),
            source: OeisSource::Fixture,
            terms: terms.iter().map(|&(i, v)| (i, BigInt::from(v))).collect(),
        }
    }

    #[test]
    fn compares_with_offsets() {
        let r = oeis(&[(1, 1), (2, 2), (3, 5), (4, 14)]);
        let computed = [rat(1), rat(2), rat(5), rat(14), rat(42)];
        let c = compare(&computed, &r, 1);
        assert_eq!((c.overlap, c.matched), (4, 4));
        assert!(c.is_match());

        let c = compare(&computed, &r, 0);
        assert_eq!(c.overlap, 4);
        let m = c.first_mismatch.unwrap();
        assert_eq!((m.n, m.index), (1, 1));

        // A fraction never equals an integer term.
        let c = compare(&[rat(1), ratio(3, 2)], &r, 0);
        assert_eq!(c.first_mismatch.unwrap().n, 1);

        // No overlap is not a match.
        assert!(!compare(&computed, &r, 100).is_match());
    }

    struct Counting<'a>(&'a Cell<usize>, &'a str);

    impl Transport for Counting<'_> {
        fn get(&self, _: &str) -> Result<Vec<u8>, TransportError> {
            self.0.set(self.0.get() + 1);
            Ok(self.1.as_bytes().to_vec())
        }
    }

    #[test]
    fn cache_is_consulted_before_network() {
        let dir = tempfile::tempdir().unwrap();
        let id: OeisId = "A000108".parse().unwrap();
        let calls = Cell::new(0);
        let t = Counting(&calls, "0 1\n1 1\n2 2\n");

        let first = resolve(&id, dir.path(), false, &t).unwrap();
        assert_eq!(first.source, OeisSource::Fetched(id.bfile_url()));
        assert_eq!(calls.get(), 1);
        for _ in 0..2 {
            let again = resolve(&id, dir.path(), false, &t).unwrap();
            assert!(matches!(again.source, OeisSource::Cache(_)));
            assert_eq!(again.terms, first.terms);
        }
        assert_eq!(calls.get(), 1);
    }

    #[test]
    fn offline_and_failure_paths() {
        let dir = tempfile::tempdir().unwrap();
        let known: OeisId = "A001006".parse().unwrap();
        let unknown: OeisId = "A999999".parse().unwrap();

        let r = resolve(&known, dir.path(), true, &NoNetwork).unwrap();
        assert_eq!(r.source, OeisSource::Fixture);
        assert!(matches!(
            resolve(&unknown, dir.path(), true, &NoNetwork),
            Err(OeisError::Unavailable { .. })
        ));
        // Online with a dead network does not silently use fixtures.
        assert!(matches!(
            resolve(&known, dir.path(), false, &NoNetwork),
            Err(OeisError::Unavailable { .. })
        ));
        // Garbage from the server is a parse error and is not cached.
        let calls = Cell::new(0);
        let junk = Counting(&calls, "<html>oops</html>");
        assert!(matches!(
            resolve(&known, dir.path(), false, &junk),
            Err(OeisError::Parse { .. })
        ));
        assert!(!dir.path().join(known.bfile_name()).exists());
    }
}
