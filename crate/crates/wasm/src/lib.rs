//! WebAssembly bindings behind the static demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! Rationals are serialized as decimal strings. The logic lives in ordinary
//! functions returning `Result<_, String>` so it can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use pathweight::closedforms;
use pathweight::feq;
use pathweight::paths::{self, PathFamily, ProductMode};
use pathweight::{BigRational, WeightSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Brute force beyond this width stalls a browser tab.
pub const MAX_BRUTE_WIDTH: u64 = 20;
pub const MAX_LISTED_PATHS: usize = 500;
pub const MAX_TABLE_N: u64 = 12;

#[derive(Debug, Serialize)]
pub struct SequenceOut {
    pub engine: &'static str,
    pub note: Option<String>,
    pub terms: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PathOut {
    pub word: String,
    pub points: Vec<(u64, i64)>,
    pub ascents: String,
    pub weight: String,
}

#[derive(Debug, Serialize)]
pub struct PathsOut {
    pub width: u64,
    pub total: u64,
    pub sum: String,
    pub paths: Vec<PathOut>,
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub k: u32,
    pub terms: Vec<String>,
}

fn family(name: &str, k: u32) -> Result<PathFamily, String> {
    let fam = match name {
        "catalan" => PathFamily::Catalan(k),
        "schroeder" => PathFamily::Schroeder(k),
        "motzkin" => PathFamily::motzkin(k),
        other => return Err(format!("unknown family `{other}`")),
    };
    fam.step_system().map_err(|e| e.to_string())?;
    Ok(fam)
}

fn strings(values: &[BigRational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn closed_form(fam: &PathFamily, w: &WeightSpec, n_max: u64) -> Option<Result<Vec<BigRational>, String>> {
    let term = |n| match fam {
        PathFamily::Catalan(k) => closedforms::catalan_closed(*k, n, w),
        PathFamily::Schroeder(k) => closedforms::schroeder_closed(*k, n, w),
        PathFamily::MotzkinOdd(k) => closedforms::motzkin_odd_closed(*k, n, w),
        PathFamily::MotzkinEven(k) => closedforms::motzkin_even_count(*k, n),
        PathFamily::Custom(_) => unreachable!("not constructed here"),
    };
    if matches!(fam, PathFamily::MotzkinEven(_)) && *w != WeightSpec::Ones {
        return None;
    }
    Some((0..=n_max).map(|n| term(n).map_err(|e| e.to_string())).collect())
}

fn series(fam: &PathFamily, w: &WeightSpec, n_max: u64) -> Option<Result<Vec<BigRational>, String>> {
    let result = match fam {
        PathFamily::MotzkinEven(k) if *w == WeightSpec::Ones => feq::kernel_even_motzkin(*k, n_max),
        PathFamily::MotzkinEven(_) => return None,
        _ => feq::family_sequence(fam, w, n_max),
    };
    Some(result.map_err(|e| e.to_string()))
}

fn brute_force(fam: &PathFamily, w: &WeightSpec, mode: &ProductMode, n_max: u64) -> Result<Vec<BigRational>, String> {
    if fam.width(n_max) > MAX_BRUTE_WIDTH {
        return Err(format!(
            "brute force is limited to width {MAX_BRUTE_WIDTH} here; n = {n_max} needs width {}",
            fam.width(n_max)
        ));
    }
    (0..=n_max)
        .map(|n| paths::weighted_sum(fam, n, w, mode).map_err(|e| e.to_string()))
        .collect()
}

/// Terms `0..=n_max`. Closed forms and the series solver cover the full
/// product only; other modes go to brute force.
pub fn compute_sequence(
    family_name: &str,
    k: u32,
    weight: &str,
    mode: &str,
    engine: &str,
    n_max: u64,
) -> Result<SequenceOut, String> {
    let fam = family(family_name, k)?;
    let w: WeightSpec = weight.parse().map_err(|e: pathweight::weights::ParseWeightError| e.to_string())?;
    let mode: ProductMode = mode.parse()?;
    let full = mode == ProductMode::Full;
    let unsupported = |what: &str| format!("the {what} engine does not handle {family_name} k={k} weight={w} mode={mode}");

    let (engine, note, values) = match engine {
        "bruteforce" => ("bruteforce", None, brute_force(&fam, &w, &mode, n_max)?),
        "formula" => match closed_form(&fam, &w, n_max).filter(|_| full) {
            Some(v) => ("formula", None, v?),
            None => return Err(unsupported("formula")),
        },
        "feq" => match series(&fam, &w, n_max).filter(|_| full) {
            Some(v) => {
                let kind = if matches!(fam, PathFamily::MotzkinEven(_)) { "kernel" } else { "feq" };
                (kind, None, v?)
            }
            None => return Err(unsupported("feq")),
        },
        "auto" => match closed_form(&fam, &w, n_max).filter(|_| full) {
            Some(v) => ("formula", None, v?),
            None => (
                "bruteforce",
                Some("no closed form for this combination; using brute force".to_string()),
                brute_force(&fam, &w, &mode, n_max)?,
            ),
        },
        other => return Err(format!("unknown engine `{other}`")),
    };
    Ok(SequenceOut {
        engine,
        note,
        terms: strings(&values),
    })
}

/// Every path of size `n` with its weight, up to `limit` of them.
pub fn list_paths(
    family_name: &str,
    k: u32,
    n: u64,
    weight: &str,
    mode: &str,
    limit: usize,
) -> Result<PathsOut, String> {
    let fam = family(family_name, k)?;
    let w: WeightSpec = weight.parse().map_err(|e: pathweight::weights::ParseWeightError| e.to_string())?;
    let mode: ProductMode = mode.parse()?;
    let width = fam.width(n);
    if width > MAX_BRUTE_WIDTH {
        return Err(format!("listing is limited to width {MAX_BRUTE_WIDTH}; n = {n} needs width {width}"));
    }
    let system = fam.step_system().map_err(|e| e.to_string())?;
    let mut total = 0u64;
    let mut sum = BigRational::from_integer(0.into());
    let mut shown = Vec::new();
    for path in paths::enumerate_paths(&system, width) {
        let ascents = path.ascent_vector();
        let weight = mode.weight_of(&ascents, &w);
        total += 1;
        sum += &weight;
        if shown.len() < limit.min(MAX_LISTED_PATHS) {
            shown.push(PathOut {
                word: path.word(),
                points: path.points(),
                ascents: ascents.to_string(),
                weight: weight.to_string(),
            });
        }
    }
    Ok(PathsOut {
        width,
        total,
        sum: sum.to_string(),
        paths: shown,
    })
}

/// Even-k Motzkin counts for k = 2, 4, ..., 10 via the kernel method.
pub fn even_motzkin_rows(n_max: u64) -> Result<Vec<TableRow>, String> {
    if n_max > MAX_TABLE_N {
        return Err(format!("n_max is limited to {MAX_TABLE_N}"));
    }
    (1..=5)
        .map(|i| {
            let k = 2 * i;
            let terms = feq::kernel_even_motzkin(k, n_max).map_err(|e| e.to_string())?;
            Ok(TableRow {
                k,
                terms: strings(&terms),
            })
        })
        .collect()
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsError> {
    let value = result.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn sequence(family: &str, k: u32, weight: &str, mode: &str, engine: &str, n_max: u32) -> Result<String, JsError> {
    to_js(compute_sequence(family, k, weight, mode, engine, n_max.into()))
}

#[wasm_bindgen]
pub fn paths(family: &str, k: u32, n: u32, weight: &str, mode: &str, limit: u32) -> Result<String, JsError> {
    to_js(list_paths(family, k, n.into(), weight, mode, limit as usize))
}

#[wasm_bindgen(js_name = evenMotzkinTable)]
pub fn even_motzkin_table(n_max: u32) -> Result<String, JsError> {
    to_js(even_motzkin_rows(n_max.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        let s = compute_sequence("catalan", 1, "linear:1", "full", "auto", 5).unwrap();
        assert_eq!((s.engine, s.terms.join(" ")), ("formula", "1 1 3 10 37 146".to_string()));
        let s = compute_sequence("motzkin", 2, "ones", "full", "feq", 3).unwrap();
        assert_eq!((s.engine, s.terms.join(" ")), ("kernel", "1 2 17 204".to_string()));
        let s = compute_sequence("catalan", 1, "ones", "skip-first", "auto", 4).unwrap();
        assert_eq!(s.engine, "bruteforce");
        assert!(s.note.is_some());
    }

    #[test]
    fn engines_agree() {
        let terms = |engine| compute_sequence("schroeder", 1, "factorial", "full", engine, 5).unwrap().terms;
        assert_eq!(terms("bruteforce"), terms("formula"));
        assert_eq!(terms("feq"), terms("formula"));
    }

    #[test]
    fn rejections() {
        assert!(compute_sequence("motzkin", 2, "linear:1", "full", "formula", 3).is_err());
        assert!(compute_sequence("catalan", 1, "ones", "meta:1", "feq", 3).is_err());
        assert!(compute_sequence("dyck", 1, "ones", "full", "auto", 3).is_err());
        assert!(compute_sequence("catalan", 0, "ones", "full", "auto", 3).is_err());
        assert!(compute_sequence("catalan", 1, "ones", "full", "bruteforce", 40).is_err());
        assert!(list_paths("catalan", 3, 9, "ones", "full", 10).is_err());
    }

    #[test]
    fn listing() {
        let out = list_paths("catalan", 1, 3, "factorial", "full", 2).unwrap();
        assert_eq!((out.width, out.total, out.paths.len()), (6, 5, 2));
        // 1 + 2 + 2 + 2 + 6 over the five Dyck paths of semilength 3
        assert_eq!(out.sum, "13");
        assert_eq!(out.paths[0].word, "UUUWWW");
        assert_eq!(out.paths[0].ascents, "(3)");
        assert_eq!(out.paths[0].weight, "6");
        assert_eq!(out.paths[0].points.first(), Some(&(0, 0)));
        assert_eq!(out.paths[0].points.last(), Some(&(6, 0)));
    }

    #[test]
    fn table() {
        let rows = even_motzkin_rows(7).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[4].k, 10);
        assert_eq!(rows[4].terms[7], "96106360517372");
        assert!(even_motzkin_rows(MAX_TABLE_N + 1).is_err());
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&list_paths("motzkin", 1, 2, "ones", "full", 10).unwrap()).unwrap();
        assert!(json.contains(r#""points":[[0,0],"#), "{json}");
    }
}
