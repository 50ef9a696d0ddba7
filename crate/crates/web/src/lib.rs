//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; the plain functions are usable (and
//! tested) natively, the `#[wasm_bindgen]` wrappers only convert errors.

use oseq::lexseg::{classify, decompose, sous_escalier, Classification, OrderIdeal};
use oseq::linusson::{CountCache, MemoKey};
use oseq::macaulay::OSequence;
use oseq::Count;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest multiplicity the demo table accepts.
pub const MAX_TABLE_D: u32 = 80;

#[derive(Serialize)]
struct Row {
    d: u32,
    #[serde(rename = "O")]
    o: Count,
    #[serde(rename = "A")]
    a: Count,
    /// `O_d / O_{d-1}` as `[numerator, denominator]`, absent for `d = 1`.
    ratio: Option<[Count; 2]>,
    /// Whether the ratio is strictly below the previous one.
    decreasing: Option<bool>,
}

/// `O_d`, `A_d` and successive ratios for `1 <= d <= max_d`, via the
/// memoized formula (fast enough for interactive use).
pub fn table_json(max_d: u32) -> Result<String, String> {
    if max_d == 0 || max_d > MAX_TABLE_D {
        return Err(format!("max_d must be in 1..={MAX_TABLE_D}, got {max_d}"));
    }
    let cache = CountCache::new();
    let o: Vec<Count> = (1..=max_d)
        .map(|d| cache.o_via_formula(d))
        .collect::<oseq::Result<_>>()
        .map_err(|e| e.to_string())?;
    let at = |d: u32| o[d as usize - 1];
    let rows: Vec<Row> = (1..=max_d)
        .map(|d| Row {
            d,
            o: at(d),
            a: if d == 1 { 0 } else { at(d) - at(d - 1) },
            ratio: (d > 1).then(|| [at(d), at(d - 1)]),
            // r_d < r_{d-1}  <=>  O_d O_{d-2} < O_{d-1}^2
            decreasing: (d > 2)
                .then(|| (at(d) as u128) * (at(d - 2) as u128) < (at(d - 1) as u128).pow(2)),
        })
        .collect();
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

#[derive(Serialize)]
struct TermOut {
    term: String,
    exponents: Vec<u32>,
    degree: u32,
}

#[derive(Serialize)]
struct IdealOut {
    vars: usize,
    terms: Vec<TermOut>,
}

#[derive(Serialize)]
struct Staircase {
    h: String,
    ideal: IdealOut,
    classification: Classification,
    m1: Option<IdealOut>,
    m2: Option<IdealOut>,
}

fn ideal_out(m: &OrderIdeal) -> IdealOut {
    IdealOut {
        vars: m.vars(),
        terms: m
            .iter()
            .map(|t| TermOut {
                term: t.to_string(),
                exponents: t.exponents().to_vec(),
                degree: t.degree(),
            })
            .collect(),
    }
}

/// Lex-segment sous-escalier of `h` in `vars` variables, with its split
/// along the last variable when `vars >= 2`.
pub fn staircase_json(h: &str, vars: usize) -> Result<String, String> {
    let h: OSequence = h.parse().map_err(|e: oseq::Error| format!("h: {e}"))?;
    if vars == 0 || vars > 8 {
        return Err(format!("vars must be in 1..=8, got {vars}"));
    }
    if h.multiplicity() > 200 {
        return Err(format!(
            "multiplicity {} is too large for the demo (limit 200)",
            h.multiplicity()
        ));
    }
    let m = sous_escalier(&h, vars).map_err(|e| format!("vars: {e}"))?;
    let classification = classify(&m, vars).map_err(|e| e.to_string())?;
    let (m1, m2) = if vars >= 2 {
        let (a, b) = decompose(&m, vars).map_err(|e| e.to_string())?;
        (Some(ideal_out(&a)), Some(ideal_out(&b)))
    } else {
        (None, None)
    };
    let out = Staircase {
        h: h.to_string(),
        ideal: ideal_out(&m),
        classification,
        m1,
        m2,
    };
    Ok(serde_json::to_string(&out).expect("staircase serializes"))
}

#[derive(Serialize)]
struct CountOut {
    p: u32,
    n: u32,
    k: u32,
    d: u32,
    count: Count,
    cache_entries: u64,
}

/// `O(p, n, k, d)` by the memoized recursion.
pub fn count_m_json(p: u32, n: u32, k: u32, d: u32) -> Result<String, String> {
    if p == 0 || d == 0 {
        return Err("p and d must be at least 1".into());
    }
    if d > 2 * MAX_TABLE_D {
        return Err(format!("d must be at most {}, got {d}", 2 * MAX_TABLE_D));
    }
    let cache = CountCache::new();
    let count = cache
        .count_m(MemoKey::new(p, n, k, d))
        .map_err(|e| e.to_string())?;
    let out = CountOut {
        p,
        n,
        k,
        d,
        count,
        cache_entries: cache.stats().entries,
    };
    Ok(serde_json::to_string(&out).expect("count serializes"))
}

#[wasm_bindgen]
pub fn table(max_d: u32) -> Result<String, JsValue> {
    table_json(max_d).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn staircase(h: &str, vars: usize) -> Result<String, JsValue> {
    staircase_json(h, vars).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn count_m(p: u32, n: u32, k: u32, d: u32) -> Result<String, JsValue> {
    count_m_json(p, n, k, d).map_err(|e| JsValue::from_str(&e))
}
