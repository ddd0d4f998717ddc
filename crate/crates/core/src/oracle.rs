//! Brute-force enumerators: every tuple in `A^h` is generated and tested
//! against the defining condition. Deliberately naive; these are the ground
//! truth for the fast counting paths.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::repfn::{self, RepKind, RepTable, Window};
use crate::scalar::Int;

/// Default cap on enumerated tuples.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "REPBASIS_BUDGET";

pub fn budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Which tuples of `A^h` a brute-force count accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleRule {
    Ordered,
    Unordered,
    Restricted,
    /// Ordered tuples of pairwise distinct elements, `R̂_{A,h}`.
    OrderedRestricted,
}

impl From<RepKind> for TupleRule {
    fn from(k: RepKind) -> Self {
        match k {
            RepKind::Ordered => TupleRule::Ordered,
            RepKind::Unordered => TupleRule::Unordered,
            RepKind::Restricted => TupleRule::Restricted,
        }
    }
}

impl TupleRule {
    fn accepts<T: Ord>(self, tuple: &[&T]) -> bool {
        match self {
            TupleRule::Ordered => true,
            TupleRule::Unordered => tuple.windows(2).all(|w| w[0] <= w[1]),
            TupleRule::Restricted => tuple.windows(2).all(|w| w[0] < w[1]),
            TupleRule::OrderedRestricted => {
                (0..tuple.len()).all(|i| (i + 1..tuple.len()).all(|j| tuple[i] != tuple[j]))
            }
        }
    }
}

fn check_budget(n: usize, h: usize) -> Result<()> {
    let budget = budget();
    let needed = (n as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

/// Visits every tuple of `A^h`, lexicographically by index.
fn for_each_tuple<T>(elems: &[T], h: usize, mut f: impl FnMut(&[&T])) {
    if elems.is_empty() {
        return;
    }
    let mut idx = vec![0usize; h];
    let mut tuple: Vec<&T> = vec![&elems[0]; h];
    loop {
        for (slot, &i) in tuple.iter_mut().zip(&idx) {
            *slot = &elems[i];
        }
        f(&tuple);
        let mut pos = h;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Counts of accepted tuples for every reachable sum.
pub fn enum_support<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    rule: TupleRule,
) -> Result<BTreeMap<T, u64>> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    check_budget(set.len(), h)?;
    let mut out: BTreeMap<T, u64> = BTreeMap::new();
    for_each_tuple(set.as_slice(), h, |tuple| {
        if rule.accepts(tuple) {
            let s = tuple.iter().fold(T::zero(), |acc, a| acc + (*a).clone());
            *out.entry(s).or_insert(0) += 1;
        }
    });
    Ok(out)
}

fn enum_table<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
    rule: TupleRule,
) -> Result<RepTable<T>> {
    RepTable::from_sparse(window, &enum_support(set, h, rule)?)
}

pub fn enum_ordered<T: Int>(set: &FiniteIntSet<T>, h: usize, window: &Window<T>) -> Result<RepTable<T>> {
    enum_table(set, h, window, TupleRule::Ordered)
}

pub fn enum_unordered<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    enum_table(set, h, window, TupleRule::Unordered)
}

pub fn enum_restricted<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    enum_table(set, h, window, TupleRule::Restricted)
}

pub fn enum_ordered_restricted<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    enum_table(set, h, window, TupleRule::OrderedRestricted)
}

/// Unordered `h`-multisets of residues summing to each `x mod m`.
pub fn enum_unordered_mod(m: u64, members: &[u64], h: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    check_budget(members.len(), h)?;
    let mut out = vec![0u64; m as usize];
    for_each_tuple(members, h, |tuple| {
        if TupleRule::Unordered.accepts(tuple) {
            let s = tuple.iter().fold(0u64, |acc, &&a| (acc + a) % m);
            out[s as usize] += 1;
        }
    });
    Ok(out)
}

/// `#{(a1, a2) ∈ A1 × A2 : u1 a1 + u2 a2 = n}` for every reachable `n`.
pub fn enum_form<T: Int>(
    u1: &T,
    u2: &T,
    a1: &FiniteIntSet<T>,
    a2: &FiniteIntSet<T>,
) -> Result<BTreeMap<T, u64>> {
    let needed = (a1.len() as u128) * (a2.len() as u128);
    let budget = budget();
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut out = BTreeMap::new();
    for x in a1 {
        for y in a2 {
            let n = u1.clone() * x.clone() + u2.clone() * y.clone();
            *out.entry(n).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// A representation-counting implementation under test.
pub trait RepCounter<T: Int> {
    fn count(
        &self,
        set: &FiniteIntSet<T>,
        h: usize,
        kind: RepKind,
        window: &Window<T>,
    ) -> Result<RepTable<T>>;
}

/// The production counting routines in [`crate::repfn`].
#[derive(Clone, Copy, Debug, Default)]
pub struct FastCounter;

impl<T: Int> RepCounter<T> for FastCounter {
    fn count(
        &self,
        set: &FiniteIntSet<T>,
        h: usize,
        kind: RepKind,
        window: &Window<T>,
    ) -> Result<RepTable<T>> {
        repfn::rep_table(set, h, kind, window)
    }
}

/// First disagreement found by [`equivalence_suite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch<T> {
    /// `"ordered"`, `"unordered"`, `"restricted"` or `"factorial"`.
    pub check: &'static str,
    pub n: T,
    pub expected: u64,
    pub found: u64,
}

fn first_mismatch<T: Int>(
    check: &'static str,
    expected: &RepTable<T>,
    found: &RepTable<T>,
) -> Option<Mismatch<T>> {
    expected
        .iter()
        .zip(found.counts())
        .find(|((_, e), f)| e != *f)
        .map(|((n, e), &f)| Mismatch { check, n, expected: e, found: f })
}

/// Fast paths vs brute force on all counting modes, plus `R̂ = h!·r̂`.
pub fn equivalence_suite<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<Option<Mismatch<T>>> {
    equivalence_suite_with(&FastCounter, set, h, window)
}

pub fn equivalence_suite_with<T: Int, C: RepCounter<T>>(
    counter: &C,
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<Option<Mismatch<T>>> {
    for kind in RepKind::ALL {
        let fast = counter.count(set, h, kind, window)?;
        let slow = enum_table(set, h, window, kind.into())?;
        if let Some(m) = first_mismatch(kind.name(), &slow, &fast) {
            return Ok(Some(m));
        }
    }
    let factorial: u64 = (1..=h as u64).product();
    let restricted = counter.count(set, h, RepKind::Restricted, window)?;
    let hat = enum_ordered_restricted(set, h, window)?;
    let scaled = restricted
        .counts()
        .iter()
        .map(|c| c.checked_mul(factorial).ok_or(Error::CountOverflow))
        .collect::<Result<Vec<_>>>()?;
    let scaled = RepTable::new(window.lo().clone(), window.hi().clone(), scaled)?;
    Ok(first_mismatch("factorial", &hat, &scaled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> FiniteIntSet<i64> {
        v.iter().copied().collect()
    }

    fn w(lo: i64, hi: i64) -> Window<i64> {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn enumerator_examples() {
        assert_eq!(enum_ordered(&set(&[0, 1]), 3, &w(1, 1)).unwrap().counts(), &[3]);
        assert_eq!(enum_restricted(&set(&[0, 1, 2]), 2, &w(2, 2)).unwrap().counts(), &[1]);
        assert!(enum_unordered(&set(&[]), 2, &w(-3, 3)).unwrap().is_all_zero());
        // (0,1),(1,0) for n = 1; (0,2),(2,0) for n = 2
        let hat = enum_ordered_restricted(&set(&[0, 1, 2]), 2, &w(0, 4)).unwrap();
        assert_eq!(hat.counts(), &[0, 2, 2, 2, 0]);
    }

    #[test]
    fn budget_guard_trips() {
        let big = FiniteIntSet::interval(&0i64, &1000);
        assert!(matches!(enum_support(&big, 4, TupleRule::Ordered), Err(Error::Budget { .. })));
    }

    #[test]
    fn suite_is_clean_on_worked_set() {
        let r = equivalence_suite(&set(&[-4, 0, 1, 3]), 2, &w(-10, 10)).unwrap();
        assert_eq!(r, None);
    }

    struct OffByOne;

    impl RepCounter<i64> for OffByOne {
        fn count(
            &self,
            set: &FiniteIntSet<i64>,
            h: usize,
            kind: RepKind,
            window: &Window<i64>,
        ) -> Result<RepTable<i64>> {
            let t = repfn::rep_table(set, h, kind, window)?;
            let mut counts = t.counts().to_vec();
            if kind == RepKind::Unordered {
                counts[3] += 1;
            }
            RepTable::new(*window.lo(), *window.hi(), counts)
        }
    }

    #[test]
    fn suite_locates_injected_fault() {
        let r = equivalence_suite_with(&OffByOne, &set(&[0, 1, 2]), 2, &w(0, 6)).unwrap();
        let m = r.expect("mismatch expected");
        assert_eq!(m.check, "unordered");
        assert_eq!(m.n, 3);
        assert_eq!((m.expected, m.found), (1, 2));
    }

    #[test]
    fn modular_enumeration() {
        // multisets of {0,1,2}: 00 01 02 11 12 22 -> sums 0 1 2 2 3 4
        assert_eq!(enum_unordered_mod(5, &[0, 1, 2], 2).unwrap(), vec![1, 1, 2, 1, 1]);
    }
}
