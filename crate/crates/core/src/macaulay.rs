//! Binomial conventions, binomial expansions in base `t`, Macaulay's growth
//! bound and O-sequence validation.

use std::fmt;
use std::str::FromStr;

use crate::{Count, Error, Result};

/// `C(n, m)` with the conventions `C(n, m) = 0` when `n < m` or `m < 0`, and
/// `C(n, 0) = 1` for `n >= 0`.
pub fn binomial(n: i64, m: i64) -> Result<Count> {
    if m < 0 || n < m {
        return Ok(0);
    }
    binom_u(n as u64, m as u64)
}

/// `min(C(n, m), ceiling + 1)`: exact below the ceiling, saturated above it.
pub fn binomial_capped(n: i64, m: i64, ceiling: Count) -> Count {
    if m < 0 || n < m {
        return 0;
    }
    binom_capped_u(n as u64, m as u64, ceiling)
}

pub(crate) fn binom_u(n: u64, m: u64) -> Result<Count> {
    if n < m {
        return Ok(0);
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc * (n as u128 - m as u128 + i) / i;
        if acc > Count::MAX as u128 {
            return Err(Error::Overflow("binomial"));
        }
    }
    Ok(acc as Count)
}

pub(crate) fn binom_capped_u(n: u64, m: u64, ceiling: Count) -> Count {
    let cap = ceiling.saturating_add(1);
    if n < m {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    // C(n - m + i, i) is nondecreasing in i, so the first value above the
    // ceiling settles the answer.
    for i in 1..=m as u128 {
        acc = acc * (n as u128 - m as u128 + i) / i;
        if acc > ceiling as u128 {
            return cap;
        }
    }
    (acc as Count).min(cap)
}

/// The greedy representation
/// `a = C(k_t, t) + C(k_{t-1}, t-1) + ... + C(k_j, j)` with
/// `k_t > k_{t-1} > ... > k_j >= j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinomialExpansion {
    base: u32,
    tops: Vec<u64>,
    value: Count,
}

impl BinomialExpansion {
    pub fn base(&self) -> u32 {
        self.base
    }

    /// Upper indices, highest first.
    pub fn tops(&self) -> &[u64] {
        &self.tops
    }

    pub fn value(&self) -> Count {
        self.value
    }

    /// `(top, lower)` pairs; the i-th term has lower index `base - i`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let base = self.base as u64;
        self.tops
            .iter()
            .enumerate()
            .map(move |(i, &top)| (top, base - i as u64))
    }

    /// Sum of the terms with both indices shifted up by one.
    pub fn shifted_sum(&self) -> Result<Count> {
        self.terms().try_fold(0 as Count, |acc, (top, lower)| {
            let c = binom_u(top + 1, lower + 1)?;
            acc.checked_add(c).ok_or(Error::Overflow("growth bound"))
        })
    }
}

impl fmt::Display for BinomialExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.value)?;
        for (i, (top, lower)) in self.terms().enumerate() {
            let sep = if i == 0 { " " } else { " + " };
            write!(f, "{sep}C({top},{lower})")?;
        }
        Ok(())
    }
}

/// Binomial expansion of `a` in base `t`.
pub fn expand(a: Count, t: u32) -> Result<BinomialExpansion> {
    if a == 0 || t == 0 {
        return Err(Error::invalid(format!(
            "binomial expansion needs a >= 1 and t >= 1, got a = {a}, t = {t}"
        )));
    }
    let mut tops = Vec::new();
    let mut remaining = a;
    let mut lower = t as u64;
    while remaining > 0 {
        assert!(
            lower >= 1,
            "greedy expansion of {a} in base {t} ran past j = 1"
        );
        let top = largest_top(remaining, lower);
        tops.push(top);
        remaining -= binom_u(top, lower)?;
        lower -= 1;
    }
    Ok(BinomialExpansion {
        base: t,
        tops,
        value: a,
    })
}

/// Largest `k >= lower` with `C(k, lower) <= budget`; needs `budget >= 1`.
fn largest_top(budget: Count, lower: u64) -> u64 {
    if lower == 1 {
        return budget;
    }
    let fits = |k: u64| binom_capped_u(k, lower, budget) <= budget;
    let mut lo = lower;
    let mut step = 1u64;
    let mut hi = lower + step;
    while fits(hi) {
        lo = hi;
        step *= 2;
        hi = lower + step;
    }
    // fits(lo) and !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `a^<t>`: the largest value a Hilbert function with `a` in degree `t` can
/// take in degree `t + 1`.
pub fn growth_bound(a: Count, t: u32) -> Result<Count> {
    expand(a, t)?.shifted_sum()
}

/// Checks `a_0 = 1`, positivity, and `a_{t+1} <= a_t^<t>` for `t >= 1`.
///
/// The step from degree 0 to degree 1 is unconstrained: `a_1` is just the
/// number of variables.
pub fn is_o_sequence(values: &[Count]) -> bool {
    if values.first() != Some(&1) || values.contains(&0) {
        return false;
    }
    values.windows(2).enumerate().skip(1).all(|(t, pair)| {
        match growth_bound(pair[0], t as u32) {
            Ok(bound) => pair[1] <= bound,
            // the bound itself does not fit in a Count
            Err(_) => true,
        }
    })
}

/// A finite O-sequence `(a_0, ..., a_s)` with `a_s != 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OSequence(Vec<Count>);

impl OSequence {
    pub fn new(values: Vec<Count>) -> Result<Self> {
        if !is_o_sequence(&values) {
            return Err(Error::invalid(format!(
                "({}) is not an O-sequence",
                join(&values)
            )));
        }
        Ok(OSequence(values))
    }

    pub(crate) fn new_unchecked(values: Vec<Count>) -> Self {
        debug_assert!(is_o_sequence(&values), "{values:?}");
        OSequence(values)
    }

    pub fn values(&self) -> &[Count] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Count> {
        self.0
    }

    pub fn socle_degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn multiplicity(&self) -> Count {
        self.0.iter().sum()
    }

    pub fn last(&self) -> Count {
        *self.0.last().expect("O-sequences are nonempty")
    }

    /// `a_1`, or 0 for the sequence `(1)`.
    pub fn embedding_dimension(&self) -> Count {
        self.0.get(1).copied().unwrap_or(0)
    }
}

fn join(values: &[Count]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Comma separated, no spaces: `1,2,2,1`.
impl fmt::Display for OSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

impl FromStr for OSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = trimmed
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<Count>()
                    .map_err(|e| Error::invalid(format!("bad sequence entry {v:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        OSequence::new(values)
    }
}
