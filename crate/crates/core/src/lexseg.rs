//! Terms, lexicographic order, sous-escaliers of lex-segment ideals and the
//! brute-force oracle for `O(p, n, k, d)`.
//!
//! Variables are ordered `x_1 < ... < x_p`. Two terms of the same degree are
//! compared at the largest variable index where their exponents differ, so
//! `x_p` dominates. The sous-escalier of a lex-segment ideal keeps, in every
//! degree, an initial segment of the terms in ascending order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::macaulay::{binom_capped_u, is_o_sequence, OSequence};
use crate::{Count, Error, Result};

/// Largest multiplicity [`oracle_count_m`] will enumerate compositions for.
pub const ORACLE_MAX_D: u32 = 16;

/// A power product `x_1^e_1 ... x_p^e_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    exps: Vec<u32>,
}

impl Term {
    pub fn new(exps: Vec<u32>) -> Self {
        Term { exps }
    }

    pub fn one(p: usize) -> Self {
        Term { exps: vec![0; p] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `self / x_i` for every variable `x_i` (1-based) dividing `self`.
    pub fn divisors_by_variable(&self) -> impl Iterator<Item = Term> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| {
                let mut exps = self.exps.clone();
                exps[i] -= 1;
                Term { exps }
            })
    }
}

/// Graded, then lexicographic with `x_p` dominant.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_cmp(&self.exps, &other.exps))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => continue,
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
            any = true;
        }
        if !any {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Lexicographic comparison of terms over the same ring.
pub fn lex_compare(t1: &Term, t2: &Term) -> Result<Ordering> {
    if t1.vars() != t2.vars() {
        return Err(Error::invalid(format!(
            "terms live in {} and {} variables",
            t1.vars(),
            t2.vars()
        )));
    }
    Ok(lex_cmp(&t1.exps, &t2.exps))
}

/// Smallest (1-based) index of a variable dividing `t`.
pub fn min_var(t: &Term) -> Result<usize> {
    t.exps
        .iter()
        .position(|&e| e > 0)
        .map(|i| i + 1)
        .ok_or(Error::UndefinedMinimum)
}

/// The `count` lex-smallest terms of degree `t` in `p` variables, ascending.
pub fn lex_smallest(p: usize, t: u32, count: usize) -> Vec<Term> {
    fn fill(var: usize, left: u32, exps: &mut Vec<u32>, count: usize, out: &mut Vec<Term>) {
        if out.len() == count {
            return;
        }
        if var == 0 {
            exps[0] = left;
            out.push(Term { exps: exps.clone() });
            exps[0] = 0;
            return;
        }
        // ascending in the dominant variable first
        for e in 0..=left {
            exps[var] = e;
            fill(var - 1, left - e, exps, count, out);
            if out.len() == count {
                break;
            }
        }
        exps[var] = 0;
    }
    let mut out = Vec::with_capacity(count.min(1024));
    if p == 0 {
        if t == 0 && count > 0 {
            out.push(Term::one(0));
        }
        return out;
    }
    fill(p - 1, t, &mut vec![0; p], count, &mut out);
    out
}

/// All terms of degree `t` in `p` variables, ascending.
pub fn degree_terms(p: usize, t: u32) -> Vec<Term> {
    lex_smallest(p, t, usize::MAX)
}

/// A finite set of terms over a common number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderIdeal {
    vars: usize,
    terms: BTreeSet<Term>,
}

impl OrderIdeal {
    /// Collects `terms`; fails if they do not share `vars` variables.
    /// Closure under division is not enforced here, see [`Self::is_closed`].
    pub fn new(vars: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let terms: BTreeSet<Term> = terms.into_iter().collect();
        if let Some(bad) = terms.iter().find(|t| t.vars() != vars) {
            return Err(Error::invalid(format!(
                "term {bad} has {} variables, expected {vars}",
                bad.vars()
            )));
        }
        Ok(OrderIdeal { vars, terms })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    /// Terms by degree, then lex order.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    pub fn is_closed(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.divisors_by_variable().all(|q| self.terms.contains(&q)))
    }

    /// Number of terms in each degree `0..=max degree`.
    pub fn degree_counts(&self) -> Vec<Count> {
        let Some(top) = self.terms.iter().next_back() else {
            return Vec::new();
        };
        let mut counts = vec![0; top.degree() as usize + 1];
        for t in &self.terms {
            counts[t.degree() as usize] += 1;
        }
        counts
    }

    /// Every degree is an initial lex segment of the terms of that degree.
    pub fn is_lex_segment(&self) -> bool {
        let counts = self.degree_counts();
        counts.iter().enumerate().all(|(t, &c)| {
            lex_smallest(self.vars, t as u32, c as usize)
                .iter()
                .all(|term| self.terms.contains(term))
        })
    }
}

/// The sous-escalier of the lex-segment ideal with Hilbert function `h`
/// in `p` variables.
pub fn sous_escalier(h: &OSequence, p: usize) -> Result<OrderIdeal> {
    let a1 = h.embedding_dimension();
    if (p as Count) < a1 || p == 0 {
        return Err(Error::Capacity { a1, vars: p });
    }
    let mut terms = Vec::with_capacity(h.multiplicity() as usize);
    for (t, &count) in h.values().iter().enumerate() {
        let chunk = lex_smallest(p, t as u32, count as usize);
        if chunk.len() != count as usize {
            return Err(Error::Capacity { a1, vars: p });
        }
        terms.extend(chunk);
    }
    OrderIdeal::new(p, terms)
}

/// Splits `m` into the terms free of `x_p` (re-expressed over `p - 1`
/// variables) and the quotients by `x_p` of the remaining terms.
pub fn decompose(m: &OrderIdeal, p: usize) -> Result<(OrderIdeal, OrderIdeal)> {
    if p < 2 {
        return Err(Error::invalid(format!("decompose needs p >= 2, got {p}")));
    }
    if m.vars() != p {
        return Err(Error::invalid(format!(
            "order ideal lives in {} variables, not {p}",
            m.vars()
        )));
    }
    let mut free = Vec::new();
    let mut quotients = Vec::new();
    for t in m.iter() {
        let mut exps = t.exps.clone();
        if exps[p - 1] == 0 {
            exps.pop();
            free.push(Term { exps });
        } else {
            exps[p - 1] -= 1;
            quotients.push(Term { exps });
        }
    }
    Ok((
        OrderIdeal::new(p - 1, free)?,
        OrderIdeal::new(p, quotients)?,
    ))
}

/// Inverse of [`decompose`]: `m1 ∪ x_p · m2`.
pub fn recompose(m1: &OrderIdeal, m2: &OrderIdeal) -> Result<OrderIdeal> {
    let p = m2.vars();
    if m1.vars() + 1 != p {
        return Err(Error::invalid(format!(
            "cannot recompose {} and {} variables",
            m1.vars(),
            p
        )));
    }
    let lifted = m1.iter().map(|t| {
        let mut exps = t.exps.clone();
        exps.push(0);
        Term { exps }
    });
    let multiplied = m2.iter().map(|t| {
        let mut exps = t.exps.clone();
        exps[p - 1] += 1;
        Term { exps }
    });
    OrderIdeal::new(p, lifted.chain(multiplied))
}

/// Socle degree, maximal-growth prefix and multiplicity of an order ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub socle_degree: u32,
    pub max_prefix: u32,
    pub multiplicity: Count,
}

/// Reads off `(s, k, d)` so that `m` lies in `M(p, n, k, d)` for all `n >= s`.
pub fn classify(m: &OrderIdeal, p: usize) -> Result<Classification> {
    if m.is_empty() {
        return Err(Error::invalid("cannot classify the empty order ideal"));
    }
    let counts = m.degree_counts();
    let d = m.len() as Count;
    let k = counts
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c == full_count(p, i as u32, d))
        .count()
        - 1;
    Ok(Classification {
        socle_degree: (counts.len() - 1) as u32,
        max_prefix: k as u32,
        multiplicity: d,
    })
}

/// `C(p - 1 + i, i)`, the number of degree-`i` terms in `p` variables,
/// saturated just above `ceiling`.
fn full_count(p: usize, i: u32, ceiling: Count) -> Count {
    if p == 0 {
        return if i == 0 { 1 } else { 0 };
    }
    binom_capped_u(p as u64 - 1 + i as u64, i as u64, ceiling)
}

/// Number of degree-`t + 1` terms in `p` variables whose divisors all lie
/// among the `a` lex-smallest terms of degree `t`.
pub fn lex_segment_growth(p: usize, t: u32, a: usize) -> Count {
    let kept: BTreeSet<Term> = lex_smallest(p, t, a).into_iter().collect();
    degree_terms(p, t + 1)
        .iter()
        .filter(|u| u.divisors_by_variable().all(|q| kept.contains(&q)))
        .count() as Count
}

/// Every composition of `d` (ordered list of positive parts summing to `d`).
pub fn compositions(d: u32) -> impl Iterator<Item = Vec<Count>> {
    assert!(
        d < 40,
        "refusing to list 2^{} compositions",
        d.saturating_sub(1)
    );
    let masks = if d == 0 { 0u64 } else { 1u64 << (d - 1) };
    (0..masks).map(move |mask| {
        // bit i set: cut after position i + 1
        let mut parts = Vec::new();
        let mut run = 1;
        for i in 0..d - 1 {
            if mask >> i & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        parts
    })
}

/// `|M(p, n, k, d)|` by filtering every composition of `d`.
pub fn oracle_count_m(p: u32, n: u32, k: u32, d: u32) -> Result<Count> {
    if p == 0 || d == 0 {
        return Err(Error::invalid(format!(
            "need p >= 1 and d >= 1, got p = {p}, d = {d}"
        )));
    }
    if d > ORACLE_MAX_D {
        return Err(Error::TooLarge(format!(
            "d = {d} exceeds the oracle limit {ORACLE_MAX_D}"
        )));
    }
    Ok(oracle_members(p, n, k, d).count() as Count)
}

/// The O-sequences counted by [`oracle_count_m`].
pub fn oracle_members(p: u32, n: u32, k: u32, d: u32) -> impl Iterator<Item = Vec<Count>> {
    compositions(d).filter(move |c| {
        let s = c.len() as u32 - 1;
        s <= n
            && is_o_sequence(c)
            && (0..=k.max(s)).all(|i| {
                let a = c.get(i as usize).copied().unwrap_or(0);
                let full = full_count(p as usize, i, d as Count);
                if i <= k {
                    a == full
                } else {
                    a < full
                }
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::enumerate_all;
    use crate::macaulay::growth_bound;
    use proptest::prelude::*;

    fn seq(v: &[Count]) -> OSequence {
        OSequence::new(v.to_vec()).unwrap()
    }

    fn t(v: &[u32]) -> Term {
        Term::new(v.to_vec())
    }

    fn ideal(p: usize, terms: &[&[u32]]) -> OrderIdeal {
        OrderIdeal::new(p, terms.iter().map(|e| t(e))).unwrap()
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(
            lex_compare(&t(&[2, 0]), &t(&[1, 1])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&t(&[0, 2]), &t(&[1, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            lex_compare(&t(&[1, 1]), &t(&[1, 1])).unwrap(),
            Ordering::Equal
        );
        assert!(lex_compare(&t(&[1, 1]), &t(&[1, 1, 0])).is_err());
    }

    #[test]
    fn min_var_examples() {
        assert_eq!(min_var(&t(&[1, 0, 1])).unwrap(), 1);
        assert_eq!(min_var(&t(&[0, 0, 2])).unwrap(), 3);
        assert!(matches!(
            min_var(&t(&[0, 0, 0])),
            Err(Error::UndefinedMinimum)
        ));
    }

    #[test]
    fn degree_terms_are_ascending_and_complete() {
        for p in 1..=4 {
            for deg in 0..=5 {
                let terms = degree_terms(p, deg);
                let n = crate::macaulay::binom_u((p - 1) as u64 + deg as u64, deg as u64).unwrap();
                assert_eq!(terms.len() as u64, n);
                for w in terms.windows(2) {
                    assert_eq!(lex_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
                }
            }
        }
        assert_eq!(degree_terms(2, 2), vec![t(&[2, 0]), t(&[1, 1]), t(&[0, 2])]);
    }

    #[test]
    fn sous_escalier_examples() {
        assert_eq!(
            sous_escalier(&seq(&[1, 2]), 2).unwrap(),
            ideal(2, &[&[0, 0], &[1, 0], &[0, 1]])
        );
        assert_eq!(
            sous_escalier(&seq(&[1, 2, 1]), 2).unwrap(),
            ideal(2, &[&[0, 0], &[1, 0], &[0, 1], &[2, 0]])
        );
        assert_eq!(
            sous_escalier(&seq(&[1, 1, 1]), 1).unwrap(),
            ideal(1, &[&[0], &[1], &[2]])
        );
        assert!(matches!(
            sous_escalier(&seq(&[1, 3]), 2),
            Err(Error::Capacity { a1: 3, vars: 2 })
        ));
    }

    #[test]
    fn decompose_examples() {
        let (m1, m2) = decompose(&sous_escalier(&seq(&[1, 2]), 2).unwrap(), 2).unwrap();
        assert_eq!(m1, ideal(1, &[&[0], &[1]]));
        assert_eq!(m2, ideal(2, &[&[0, 0]]));

        let (m1, m2) = decompose(&sous_escalier(&seq(&[1, 2, 2]), 2).unwrap(), 2).unwrap();
        assert_eq!(m1, ideal(1, &[&[0], &[1], &[2]]));
        assert_eq!(m2, ideal(2, &[&[0, 0], &[1, 0]]));

        let (m1, m2) = decompose(&ideal(2, &[&[0, 0]]), 2).unwrap();
        assert_eq!(m1, ideal(1, &[&[0]]));
        assert!(m2.is_empty());

        assert!(decompose(&ideal(1, &[&[0]]), 1).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&sous_escalier(&seq(&[1, 2, 2]), 2).unwrap(), 2).unwrap();
        assert_eq!((c.socle_degree, c.max_prefix, c.multiplicity), (2, 1, 5));
        let c = classify(&sous_escalier(&seq(&[1, 1, 1]), 1).unwrap(), 1).unwrap();
        assert_eq!((c.socle_degree, c.max_prefix, c.multiplicity), (2, 2, 3));
        let c = classify(&sous_escalier(&seq(&[1, 2, 1]), 2).unwrap(), 2).unwrap();
        assert_eq!((c.socle_degree, c.max_prefix, c.multiplicity), (2, 1, 4));
        assert!(classify(&OrderIdeal::new(2, []).unwrap(), 2).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_count_m(3, 2, 0, 3).unwrap(), 2);
        assert_eq!(oracle_count_m(1, 5, 2, 3).unwrap(), 1);
        // s <= 1 forces (1, 3), and a_1 = 3 is not C(2, 1) = 2
        assert_eq!(oracle_count_m(2, 1, 1, 4).unwrap(), 0);
        assert_eq!(oracle_count_m(2, 2, 1, 3).unwrap(), 1);
        assert!(matches!(
            oracle_count_m(2, 2, 1, 40),
            Err(Error::TooLarge(_))
        ));
        assert!(oracle_count_m(0, 2, 1, 4).is_err());
    }

    #[test]
    fn compositions_count() {
        for d in 1..=12 {
            let all: BTreeSet<Vec<Count>> = compositions(d).collect();
            assert_eq!(all.len(), 1 << (d - 1));
            assert!(all.iter().all(|c| c.iter().sum::<Count>() == d as Count));
        }
    }

    #[test]
    fn growth_bound_agrees_with_lex_segments() {
        for p in 1..=3usize {
            for deg in 1..=5u32 {
                let available = degree_terms(p, deg).len();
                for a in 1..=available {
                    assert_eq!(
                        growth_bound(a as Count, deg).unwrap(),
                        lex_segment_growth(p, deg, a),
                        "p = {p}, t = {deg}, a = {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn sous_escaliers_are_closed_and_round_trip() {
        for d in 1..=10 {
            for h in enumerate_all(d).unwrap() {
                let a1 = h.embedding_dimension().max(1) as usize;
                for p in a1..=a1 + 2 {
                    let m = sous_escalier(&h, p).unwrap();
                    assert!(m.is_closed(), "h = {h}, p = {p}");
                    assert!(m.is_lex_segment());
                    assert_eq!(m.degree_counts(), h.values(), "h = {h}, p = {p}");
                }
            }
        }
    }

    fn term_strategy() -> impl Strategy<Value = Term> {
        (1usize..=4).prop_flat_map(|p| {
            (0u32..=6).prop_flat_map(move |deg| {
                let terms = degree_terms(p, deg);
                (0..terms.len()).prop_map(move |i| terms[i].clone())
            })
        })
    }

    proptest! {
        #[test]
        fn lex_order_is_total(p in 1usize..=4, deg in 0u32..=6, picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
            let terms = degree_terms(p, deg);
            let [a, b, c] = [0, 1, 2].map(|i| &terms[picks[i].index(terms.len())]);
            let ab = lex_compare(a, b).unwrap();
            prop_assert_eq!(ab.reverse(), lex_compare(b, a).unwrap());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && lex_compare(b, c).unwrap() != Ordering::Greater {
                prop_assert_ne!(lex_compare(a, c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn min_var_divides(t in term_strategy()) {
            match min_var(&t) {
                Ok(i) => {
                    prop_assert!(t.exponents()[i - 1] > 0);
                    prop_assert!(t.exponents()[..i - 1].iter().all(|&e| e == 0));
                }
                Err(_) => prop_assert_eq!(t.degree(), 0),
            }
        }
    }
}
