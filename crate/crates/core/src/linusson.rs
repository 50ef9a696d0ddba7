//! Memoized evaluation of `O(p, n, k, d)`, the number of sous-escaliers of
//! Artinian lex-segment ideals in at most `p` variables with socle degree at
//! most `n`, maximal growth exactly through degree `k`, and multiplicity `d`.
//!
//! Splitting such a sous-escalier into its `x_p`-free part (over `p - 1`
//! variables) and its quotient by `x_p` gives, for `p > 1` and `k > 0`,
//!
//! ```text
//! O(p,n,k,d) = sum_{j=1}^{d-1} sum_{i=k}^{n} O(p-1,n,i,d-j) * O(p,i-1,k-1,j)
//! ```
//!
//! with base cases `O(1,n,k,d) = [k = d-1 and n >= d-1]` and
//! `O(p,n,0,d) = sum_{k=0}^{d-1} O(p-1,n,k,d)`. Then `O_d = O(d, d-1, 0, d)`.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::Serialize;

use crate::{Count, Error, Result};

pub const CACHE_HEADER: &str = "# oseq-memo v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MemoKey {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    pub d: u32,
}

impl MemoKey {
    pub fn new(p: u32, n: u32, k: u32, d: u32) -> Self {
        MemoKey { p, n, k, d }
    }

    fn validate(self) -> Result<Self> {
        if self.p == 0 || self.d == 0 {
            return Err(Error::invalid(format!(
                "O(p,n,k,d) needs p >= 1 and d >= 1, got {self}"
            )));
        }
        Ok(self)
    }

    /// The socle degree never exceeds `d - 1`, so larger caps are equivalent.
    fn normalized(self) -> Self {
        MemoKey {
            n: self.n.min(self.d - 1),
            ..self
        }
    }
}

impl fmt::Display for MemoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.p, self.n, self.k, self.d)
    }
}

/// Largest `k` with `sum_{i=0}^{k} C(p-1+i, i) <= budget`, i.e. the longest
/// maximal-growth prefix that fits in multiplicity `budget`.
fn max_prefix(p: u32, budget: u32) -> Option<u32> {
    if budget == 0 {
        return None;
    }
    if p == 1 {
        return Some(budget - 1);
    }
    let (p, budget) = (p as u128, budget as u128);
    let mut mass: u128 = 1;
    let mut term: u128 = 1;
    let mut k = 0u32;
    loop {
        let i = k as u128 + 1;
        term = term * (p - 1 + i) / i;
        mass += term;
        if mass > budget {
            return Some(k);
        }
        k += 1;
    }
}

/// Value known without the cache: the emptiness guards and `p = 1`.
fn direct(key: MemoKey) -> Option<Count> {
    if key.k > key.n {
        return Some(0);
    }
    match max_prefix(key.p, key.d) {
        Some(kmax) if key.k <= kmax => {}
        _ => return Some(0),
    }
    if key.p == 1 {
        return Some((key.k == key.d - 1 && key.n >= key.d - 1) as Count);
    }
    None
}

/// Visits the factors of every summand of `key` in summation order; the
/// second factor is `None` for the `k = 0` sum. Summands that the guards
/// make zero for every `i` are skipped.
fn for_each_summand(
    key: MemoKey,
    mut visit: impl FnMut(MemoKey, Option<MemoKey>) -> Result<()>,
) -> Result<()> {
    let MemoKey { p, n, k, d } = key;
    debug_assert!(p >= 2);
    if k == 0 {
        let kmax = (d - 1).min(n).min(max_prefix(p - 1, d).unwrap_or(0));
        for sub_k in 0..=kmax {
            visit(MemoKey::new(p - 1, n, sub_k, d), None)?;
        }
        return Ok(());
    }
    for j in 1..d {
        if max_prefix(p, j).is_none_or(|m| m < k - 1) {
            continue;
        }
        let rest = d - j;
        let Some(imax) = max_prefix(p - 1, rest) else {
            continue;
        };
        let imax = imax.min(n).min(rest - 1);
        for i in k..=imax {
            visit(
                MemoKey::new(p - 1, n, i, rest).normalized(),
                Some(MemoKey::new(p, i - 1, k - 1, j).normalized()),
            )?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: u64,
    pub hits: u64,
    pub expansions: u64,
}

/// Shared `(p, n, k, d) -> O(p, n, k, d)` memo table.
///
/// Safe to use from several threads at once: two threads may compute the
/// same key, and the second insertion must then carry the same count.
#[derive(Debug, Default)]
pub struct CountCache {
    entries: DashMap<MemoKey, Count>,
    hits: AtomicU64,
    expansions: AtomicU64,
}

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &MemoKey) -> Option<Count> {
        self.entries.get(key).map(|v| *v)
    }

    /// Inserts, or checks an existing entry carries the same count.
    pub fn insert(&self, key: MemoKey, count: Count) -> Result<()> {
        if key.d < 64 && count >= 1u64 << key.d {
            return Err(Error::InvalidArgument(format!(
                "count {count} at {key} is not below 2^{}",
                key.d
            )));
        }
        let stored = *self.entries.entry(key).or_insert(count);
        if stored != count {
            return Err(Error::Corruption {
                key,
                stored,
                incoming: count,
            });
        }
        Ok(())
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.entries.len() as u64,
            hits: self.hits.load(Ordering::Relaxed),
            expansions: self.expansions.load(Ordering::Relaxed),
        }
    }

    pub fn reset_stats(&self) {
        self.hits.store(0, Ordering::Relaxed);
        self.expansions.store(0, Ordering::Relaxed);
    }

    /// Entries sorted by `(p, n, k, d)`.
    pub fn sorted_entries(&self) -> Vec<(MemoKey, Count)> {
        let mut all: Vec<_> = self
            .entries
            .iter()
            .map(|e| (*e.key(), *e.value()))
            .collect();
        all.sort_unstable();
        all
    }

    fn lookup(&self, key: MemoKey) -> Option<Count> {
        if let Some(v) = direct(key) {
            return Some(v);
        }
        let v = self.get(&key);
        if v.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        v
    }

    /// `O(p, n, k, d)`.
    pub fn count_m(&self, key: MemoKey) -> Result<Count> {
        let key = key.validate()?.normalized();
        if let Some(v) = self.lookup(key) {
            return Ok(v);
        }
        let mut stack = vec![key];
        let mut missing = Vec::new();
        while let Some(&top) = stack.last() {
            if self.get(&top).is_some() {
                stack.pop();
                continue;
            }
            missing.clear();
            for_each_summand(top, |left, right| {
                for dep in std::iter::once(left).chain(right) {
                    if direct(dep).is_none() && self.get(&dep).is_none() {
                        missing.push(dep);
                    }
                }
                Ok(())
            })?;
            if missing.is_empty() {
                let value = self.evaluate(top)?;
                self.insert(top, value)?;
                self.expansions.fetch_add(1, Ordering::Relaxed);
                stack.pop();
            } else {
                stack.extend_from_slice(&missing);
            }
        }
        Ok(self.get(&key).expect("root key was just computed"))
    }

    /// Sums the summands of `key`, all of whose factors are known.
    fn evaluate(&self, key: MemoKey) -> Result<Count> {
        let mut total: Count = 0;
        for_each_summand(key, |left, right| {
            let known = |k: MemoKey| self.lookup(k).expect("dependency resolved");
            let term = match right {
                None => known(left),
                Some(right) => known(left)
                    .checked_mul(known(right))
                    .ok_or(Error::Overflow("O(p,n,k,d) product"))?,
            };
            total = total
                .checked_add(term)
                .ok_or(Error::Overflow("O(p,n,k,d) sum"))?;
            Ok(())
        })?;
        Ok(total)
    }

    /// `O_d = O(d, d - 1, 0, d)`.
    pub fn o_via_formula(&self, d: u32) -> Result<Count> {
        self.count_m(MemoKey::new(d, d.saturating_sub(1), 0, d))
    }

    /// Number of lex-segment ideals of multiplicity `d` in two variables,
    /// `O(3, d - 1, 0, d)`.
    pub fn two_variable_lex_count(&self, d: u32) -> Result<Count> {
        self.count_m(MemoKey::new(3, d.saturating_sub(1), 0, d))
    }

    /// Writes the `# oseq-memo v1` text format.
    pub fn save(&self, out: impl Write) -> Result<()> {
        let mut out = BufWriter::new(out);
        writeln!(out, "{CACHE_HEADER}")?;
        for (k, v) in self.sorted_entries() {
            writeln!(out, "{},{},{},{},{}", k.p, k.n, k.k, k.d, v)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let tmp = path.with_extension("tmp");
        self.save(fs::File::create(&tmp)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(input: impl Read) -> Result<CountCache> {
        let cache = CountCache::new();
        cache.merge_from(input)?;
        Ok(cache)
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<CountCache> {
        Self::load(fs::File::open(path)?)
    }

    /// Merges a saved cache into this one; a key with a different count is
    /// reported as corruption.
    pub fn merge_from(&self, mut input: impl Read) -> Result<()> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| match e.kind() {
                io::ErrorKind::InvalidData => Error::Format {
                    line: 0,
                    msg: "cache file is not UTF-8".into(),
                },
                _ => Error::Io(e),
            })?;
        for (key, count) in parse_cache(&text)? {
            self.insert(key, count)?;
        }
        Ok(())
    }
}

fn parse_cache(text: &str) -> Result<Vec<(MemoKey, Count)>> {
    let bad = |line: usize, msg: String| Error::Format { line, msg };
    if !text.ends_with('\n') {
        return Err(bad(
            text.lines().count().max(1),
            "missing final line feed".into(),
        ));
    }
    let mut lines = text.split_terminator('\n').enumerate();
    match lines.next() {
        Some((_, CACHE_HEADER)) => {}
        Some((_, other)) => {
            return Err(bad(
                1,
                format!("expected {CACHE_HEADER:?}, found {other:?}"),
            ))
        }
        None => return Err(bad(1, "empty cache file".into())),
    }
    let mut out: Vec<(MemoKey, Count)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad(
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let num = |s: &str| -> Result<u64> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(lineno, format!("not a decimal number: {s:?}")));
            }
            s.parse::<u64>()
                .map_err(|e| bad(lineno, format!("{s:?}: {e}")))
        };
        let small = |s: &str| -> Result<u32> {
            u32::try_from(num(s)?).map_err(|_| bad(lineno, format!("{s:?} out of range")))
        };
        let key = MemoKey::new(
            small(fields[0])?,
            small(fields[1])?,
            small(fields[2])?,
            small(fields[3])?,
        );
        if key.p == 0 || key.d == 0 {
            return Err(bad(lineno, format!("invalid key {key}")));
        }
        if let Some((prev, _)) = out.last() {
            if *prev >= key {
                return Err(bad(lineno, format!("key {key} is not after {prev}")));
            }
        }
        out.push((key, num(fields[4])?));
    }
    Ok(out)
}

/// `O(p, n, k, d)` with a throwaway cache.
pub fn count_m(p: u32, n: u32, k: u32, d: u32) -> Result<Count> {
    CountCache::new().count_m(MemoKey::new(p, n, k, d))
}

pub fn o_via_formula(d: u32) -> Result<Count> {
    CountCache::new().o_via_formula(d)
}

pub fn two_variable_lex_count(d: u32) -> Result<Count> {
    CountCache::new().two_variable_lex_count(d)
}
