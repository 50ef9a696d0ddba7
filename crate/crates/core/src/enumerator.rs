//! Sliding-window construction of all finite O-sequences of a multiplicity.
//!
//! The sequences of multiplicity `d` whose last value exceeds 1 come from two
//! sources: those of multiplicity `d - 2` with a `2` appended, and those of
//! multiplicity `d - 1` whose last value can be raised by one without
//! breaking Macaulay's bound. Sequences ending in 1 are never stored; they
//! are the sequences of multiplicity `d - 1` with a `1` appended.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::mem;

use serde::Serialize;

use crate::macaulay::{growth_bound, OSequence};
use crate::{Count, Error, Result};

/// Largest multiplicity accepted by the enumerator. The window holds about
/// `O_d` sequences, so memory grows by roughly a third per step: `d = 60`
/// peaks near 170 MB, `d = 70` near 3 GB.
pub const MAX_ENUMERATION_D: u32 = 70;

/// `O_d` and `A_d` for `d = 1..=max_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    o: Vec<Count>,
    a: Vec<Count>,
}

impl CountTable {
    /// Wraps raw columns without checking any identity, so that tampered
    /// tables can be fed to the analysis suites.
    pub fn from_parts(o: Vec<Count>, a: Vec<Count>) -> Result<Self> {
        if o.is_empty() || o.len() != a.len() {
            return Err(Error::invalid(format!(
                "count table columns must be nonempty and equally long (O: {}, A: {})",
                o.len(),
                a.len()
            )));
        }
        Ok(CountTable { o, a })
    }

    pub fn max_d(&self) -> u32 {
        self.o.len() as u32
    }

    /// `O_d`, 1-based.
    pub fn o(&self, d: u32) -> Count {
        self.o[d as usize - 1]
    }

    /// `A_d`, 1-based.
    pub fn a(&self, d: u32) -> Count {
        self.a[d as usize - 1]
    }

    pub fn o_values(&self) -> &[Count] {
        &self.o
    }

    pub fn a_values(&self) -> &[Count] {
        &self.a
    }

    pub fn truncated(&self, max_d: u32) -> CountTable {
        let n = (max_d as usize).min(self.o.len());
        CountTable {
            o: self.o[..n].to_vec(),
            a: self.a[..n].to_vec(),
        }
    }
}

/// A set of sequences stored back to back in one buffer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bucket {
    values: Vec<u16>,
    ends: Vec<usize>,
}

impl Bucket {
    fn single(seq: &[u16]) -> Self {
        let mut b = Bucket::default();
        b.push_with(seq, None);
        b
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u16] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] };
        &self.values[start..self.ends[i]]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn sequences(&self) -> impl ExactSizeIterator<Item = OSequence> + '_ {
        self.iter().map(widen)
    }

    fn clear(&mut self) {
        self.values.clear();
        self.ends.clear();
    }

    /// Pushes `seq`, with its last entry replaced by `last` if given.
    fn push_with(&mut self, seq: &[u16], last: Option<u16>) {
        self.values.extend_from_slice(seq);
        if let Some(v) = last {
            *self.values.last_mut().expect("nonempty sequence") = v;
        }
        self.ends.push(self.values.len());
    }

    fn push_appended(&mut self, seq: &[u16], tail: u16) {
        self.values.extend_from_slice(seq);
        self.values.push(tail);
        self.ends.push(self.values.len());
    }

    /// Sorts lexicographically; panics on a duplicate, which the two child
    /// sources can never produce.
    fn sort_unique(&mut self) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by(|&i, &j| self.get(i).cmp(self.get(j)));
        for w in order.windows(2) {
            assert!(
                self.get(w[0]) != self.get(w[1]),
                "duplicate child {:?}",
                self.get(w[0])
            );
        }
        let mut sorted = Bucket {
            values: Vec::with_capacity(self.values.len()),
            ends: Vec::with_capacity(self.ends.len()),
        };
        for i in order {
            sorted.push_with(self.get(i), None);
        }
        *self = sorted;
    }
}

fn widen(seq: &[u16]) -> OSequence {
    OSequence::new_unchecked(seq.iter().map(|&v| v as Count).collect())
}

/// Whether the last value of `seq` can be raised by one.
fn can_increment(seq: &[u16]) -> bool {
    let s = seq.len() - 1;
    if s == 1 {
        // a_1 is unconstrained
        return true;
    }
    let prev = seq[s - 1] as Count;
    match growth_bound(prev, (s - 1) as u32) {
        Ok(bound) => (seq[s] as Count) < bound,
        Err(_) => true,
    }
}

/// Children of a sequence with last value at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Successors {
    /// `(a_0, ..., a_s, 2)`, multiplicity grows by 2.
    pub appended: OSequence,
    /// `(a_0, ..., a_s + 1)` when admissible, multiplicity grows by 1.
    pub incremented: Option<OSequence>,
}

impl Successors {
    /// `(multiplicity delta, child)` pairs.
    pub fn children(&self) -> impl Iterator<Item = (u32, &OSequence)> {
        std::iter::once((2, &self.appended)).chain(self.incremented.iter().map(|s| (1, s)))
    }
}

pub fn successors(seq: &OSequence) -> Result<Successors> {
    if seq.last() < 2 {
        return Err(Error::invalid(format!(
            "successors need a last value >= 2, got ({seq})"
        )));
    }
    let values = seq.values();
    let mut appended = values.to_vec();
    appended.push(2);
    let s = values.len() - 1;
    let admissible = s == 1
        || match growth_bound(values[s - 1], (s - 1) as u32) {
            Ok(bound) => values[s] < bound,
            Err(_) => true,
        };
    let incremented = admissible.then(|| {
        let mut v = values.to_vec();
        v[s] += 1;
        OSequence::new_unchecked(v)
    });
    Ok(Successors {
        appended: OSequence::new_unchecked(appended),
        incremented,
    })
}

/// The three buckets of sequences with last value > 1 at multiplicities
/// `d - 2`, `d - 1` and `d`.
#[derive(Clone, Debug)]
pub struct Window {
    d: u32,
    older: Bucket,
    previous: Bucket,
    current: Bucket,
}

impl Window {
    /// Window positioned at `d = 4`: buckets for multiplicities 2, 3, 4.
    pub fn seeded() -> Self {
        Window {
            d: 4,
            older: Bucket::default(),
            previous: Bucket::single(&[1, 2]),
            current: Bucket::single(&[1, 3]),
        }
    }

    pub fn multiplicity(&self) -> u32 {
        self.d
    }

    /// Bucket for multiplicity `d - 2`.
    pub fn older(&self) -> &Bucket {
        &self.older
    }

    /// Bucket for multiplicity `d - 1`.
    pub fn previous(&self) -> &Bucket {
        &self.previous
    }

    /// Bucket for multiplicity `d`.
    pub fn current(&self) -> &Bucket {
        &self.current
    }

    /// Moves to multiplicity `d + 1`, reusing the storage of the oldest bucket.
    pub fn advance(&mut self) {
        let mut next = mem::take(&mut self.older);
        next.clear();
        for seq in self.previous.iter() {
            next.push_appended(seq, 2);
        }
        for seq in self.current.iter() {
            if can_increment(seq) {
                let last = seq[seq.len() - 1];
                next.push_with(seq, Some(last + 1));
            }
        }
        next.sort_unique();
        self.older = mem::replace(&mut self.previous, mem::replace(&mut self.current, next));
        self.d += 1;
    }
}

fn check_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("multiplicity must be at least 1"));
    }
    if d > MAX_ENUMERATION_D {
        return Err(Error::TooLarge(format!(
            "enumeration is limited to d <= {MAX_ENUMERATION_D}, got {d}; use the formula method"
        )));
    }
    Ok(())
}

/// Bucket of multiplicity `d` sequences with last value > 1.
fn bucket_at(d: u32) -> Bucket {
    match d {
        0..=2 => Bucket::default(),
        3 => Bucket::single(&[1, 2]),
        _ => {
            let mut w = Window::seeded();
            while w.multiplicity() < d {
                w.advance();
            }
            w.current
        }
    }
}

/// All O-sequences of multiplicity `d` with last value > 1, in
/// lexicographic order.
pub fn enumerate_last_gt1(d: u32) -> Result<LastGt1> {
    check_d(d)?;
    Ok(LastGt1 {
        bucket: bucket_at(d),
        pos: 0,
    })
}

pub struct LastGt1 {
    bucket: Bucket,
    pos: usize,
}

impl LastGt1 {
    pub fn bucket(&self) -> &Bucket {
        &self.bucket
    }
}

impl Iterator for LastGt1 {
    type Item = OSequence;

    fn next(&mut self) -> Option<OSequence> {
        if self.pos == self.bucket.len() {
            return None;
        }
        self.pos += 1;
        Some(widen(self.bucket.get(self.pos - 1)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bucket.len() - self.pos;
        (n, Some(n))
    }
}

impl ExactSizeIterator for LastGt1 {}

/// All O-sequences of multiplicity `d`, in lexicographic order.
///
/// Every bucket of multiplicity `3..=d` is kept in memory, about `O_d`
/// sequences in total.
pub fn enumerate_all(d: u32) -> Result<AllSequences> {
    check_d(d)?;
    let mut buckets = Vec::new();
    if d >= 3 {
        buckets.push(Bucket::single(&[1, 2]));
    }
    if d >= 4 {
        let mut w = Window::seeded();
        buckets.push(w.current.clone());
        while w.multiplicity() < d {
            w.advance();
            buckets.push(w.current.clone());
        }
    }
    let mut all = AllSequences {
        d,
        buckets,
        heap: BinaryHeap::new(),
        ones_pending: true,
    };
    for b in 0..all.buckets.len() {
        all.schedule(b, 0);
    }
    Ok(all)
}

/// Ordered merge of the padded buckets plus the all-ones sequence.
pub struct AllSequences {
    d: u32,
    // buckets[i] holds multiplicity i + 3
    buckets: Vec<Bucket>,
    heap: BinaryHeap<Reverse<(Vec<u16>, usize, usize)>>,
    ones_pending: bool,
}

impl AllSequences {
    fn schedule(&mut self, b: usize, pos: usize) {
        if pos >= self.buckets[b].len() {
            return;
        }
        let pad = self.d as usize - (b + 3);
        let mut seq = self.buckets[b].get(pos).to_vec();
        seq.extend(std::iter::repeat_n(1, pad));
        self.heap.push(Reverse((seq, b, pos)));
    }
}

impl Iterator for AllSequences {
    type Item = OSequence;

    fn next(&mut self) -> Option<OSequence> {
        if self.ones_pending {
            // (1, 1, ..., 1) precedes everything else
            self.ones_pending = false;
            return Some(OSequence::new_unchecked(vec![1; self.d as usize]));
        }
        let Reverse((seq, b, pos)) = self.heap.pop()?;
        self.schedule(b, pos + 1);
        Some(widen(&seq))
    }
}

/// `O_d` and `A_d` for `1 <= d <= max_d` by the sliding window.
pub fn o_table(max_d: u32) -> Result<CountTable> {
    o_table_with(max_d, |_| {})
}

/// As [`o_table`], calling `observe` on every window from `d = 4` on.
pub fn o_table_with(max_d: u32, mut observe: impl FnMut(&Window)) -> Result<CountTable> {
    check_d(max_d)?;
    let mut o: Vec<Count> = vec![1, 1, 2, 3];
    let mut a: Vec<Count> = vec![0, 0, 1, 1];
    o.truncate(max_d as usize);
    a.truncate(max_d as usize);
    if max_d >= 4 {
        let mut w = Window::seeded();
        observe(&w);
        while w.multiplicity() < max_d {
            w.advance();
            observe(&w);
            let ad = w.current().len() as Count;
            let od = o
                .last()
                .unwrap()
                .checked_add(ad)
                .ok_or(Error::Overflow("O_d"))?;
            a.push(ad);
            o.push(od);
        }
    }
    CountTable::from_parts(o, a)
}
