//! Exact representation functions and sumsets.
//!
//! Counting runs over the sorted elements: a direct pair sweep for `h = 2`
//! and a layered dynamic program (knapsack for the multiset kinds, iterated
//! convolution for ordered tuples) for `h >= 3`. Partial sums that can no
//! longer reach the window are pruned. The brute-force enumerators in
//! [`crate::oracle`] are the independent check on all of this.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intset::{EventuallyPeriodicSet, FiniteIntSet, IntegerSet};
use crate::polyring::Poly;
use crate::scalar::{self, Int};

/// Which `h`-tuples `a_1 + … + a_h = n` are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// All tuples in `A^h`: `R_{A,h}`.
    Ordered,
    /// `a_1 <= … <= a_h`: `r_{A,h}`.
    Unordered,
    /// `a_1 < … < a_h`: `r̂_{A,h}`.
    Restricted,
}

impl RepKind {
    pub const ALL: [RepKind; 3] = [RepKind::Ordered, RepKind::Unordered, RepKind::Restricted];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Ordered => "ordered",
            RepKind::Unordered => "unordered",
            RepKind::Restricted => "restricted",
        }
    }
}

impl std::str::FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordered" => Ok(RepKind::Ordered),
            "unordered" => Ok(RepKind::Unordered),
            "restricted" => Ok(RepKind::Restricted),
            other => Err(Error::invalid(format!("unknown representation kind {other:?}"))),
        }
    }
}

/// A closed interval `[lo, hi]` of integers, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window<T> {
    lo: T,
    hi: T,
}

impl<T: Int> Window<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn len(&self) -> Result<usize> {
        let span = scalar::sub(&self.hi, &self.lo)?;
        scalar::to_index(&span)?.checked_add(1).ok_or(Error::WindowTooLarge)
    }

    pub fn contains(&self, n: &T) -> bool {
        n >= &self.lo && n <= &self.hi
    }
}

/// Representation counts for every `n` in a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTable<T> {
    lo: T,
    hi: T,
    counts: Vec<u64>,
}

impl<T: Int> RepTable<T> {
    pub fn new(lo: T, hi: T, counts: Vec<u64>) -> Result<Self> {
        let w = Window::new(lo, hi)?;
        if w.len()? != counts.len() {
            return Err(Error::invalid("table length does not match its window"));
        }
        Ok(RepTable { lo: w.lo, hi: w.hi, counts })
    }

    pub fn zeros(window: &Window<T>) -> Result<Self> {
        Ok(RepTable {
            lo: window.lo.clone(),
            hi: window.hi.clone(),
            counts: vec![0; window.len()?],
        })
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn window(&self) -> Window<T> {
        Window { lo: self.lo.clone(), hi: self.hi.clone() }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, n: &T) -> Option<u64> {
        if n < &self.lo || n > &self.hi {
            return None;
        }
        let i = (n.clone() - self.lo.clone()).to_usize()?;
        self.counts.get(i).copied()
    }

    /// `(n, count)` for every `n` in the window.
    pub fn iter(&self) -> impl Iterator<Item = (T, u64)> + '_ {
        let mut n = self.lo.clone() - T::one();
        self.counts.iter().map(move |&c| {
            n = n.clone() + T::one();
            (n.clone(), c)
        })
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn is_all_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub(crate) fn from_sparse(window: &Window<T>, sparse: &BTreeMap<T, u64>) -> Result<Self> {
        let mut table = Self::zeros(window)?;
        for (n, &c) in sparse.range(window.lo.clone()..=window.hi.clone()) {
            let i = scalar::to_index(&(n.clone() - window.lo.clone()))?;
            table.counts[i] = c;
        }
        Ok(table)
    }
}

trait Sink<T> {
    fn add(&mut self, n: T, c: u64) -> Result<()>;
}

struct DenseSink<'a, T> {
    lo: &'a T,
    counts: Vec<u64>,
}

impl<T: Int> Sink<T> for DenseSink<'_, T> {
    fn add(&mut self, n: T, c: u64) -> Result<()> {
        let i = scalar::to_index(&(n - self.lo.clone()))?;
        let slot = &mut self.counts[i];
        *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
        Ok(())
    }
}

impl<T: Int> Sink<T> for HashMap<T, u64> {
    fn add(&mut self, n: T, c: u64) -> Result<()> {
        let slot = self.entry(n).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
        Ok(())
    }
}

fn bump<T: Int>(map: &mut HashMap<T, u64>, n: T, c: u64) -> Result<()> {
    Sink::add(map, n, c)
}

/// Index range of elements `a` with `lo <= a <= hi`.
fn slice_range<T: Int>(elems: &[T], lo: &T, hi: &T) -> std::ops::Range<usize> {
    let start = elems.partition_point(|a| a < lo);
    let end = elems.partition_point(|a| a <= hi);
    start..end.max(start)
}

/// Feeds every representation of every `n` in `[lo, hi]` into `sink`.
fn accumulate<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    kind: RepKind,
    lo: &T,
    hi: &T,
    sink: &mut impl Sink<T>,
) -> Result<()> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    let elems = set.as_slice();
    let (Some(min), Some(max)) = (set.min(), set.max()) else {
        return Ok(());
    };
    match h {
        1 => {
            for a in &elems[slice_range(elems, lo, hi)] {
                sink.add(a.clone(), 1)?;
            }
            Ok(())
        }
        2 => {
            for (i, a) in elems.iter().enumerate() {
                let r = slice_range(elems, &scalar::sub(lo, a)?, &scalar::sub(hi, a)?);
                let start = match kind {
                    RepKind::Ordered => r.start,
                    RepKind::Unordered => r.start.max(i),
                    RepKind::Restricted => r.start.max(i + 1),
                };
                for b in elems.iter().take(r.end).skip(start) {
                    sink.add(scalar::add(a, b)?, 1)?;
                }
            }
            Ok(())
        }
        _ if kind == RepKind::Ordered => {
            let mut layer: HashMap<T, u64> = HashMap::from([(T::zero(), 1)]);
            for j in 1..=h {
                let rest = h - j;
                let rest_min = scalar::scale(rest, min)?;
                let rest_max = scalar::scale(rest, max)?;
                let mut next = HashMap::new();
                for (s, &c) in &layer {
                    let a_lo = scalar::sub(&scalar::sub(lo, s)?, &rest_max)?;
                    let a_hi = scalar::sub(&scalar::sub(hi, s)?, &rest_min)?;
                    for a in &elems[slice_range(elems, &a_lo, &a_hi)] {
                        let t = scalar::add(s, a)?;
                        if j == h {
                            sink.add(t, c)?;
                        } else {
                            bump(&mut next, t, c)?;
                        }
                    }
                }
                layer = next;
            }
            Ok(())
        }
        _ => {
            // layers[j]: sums of j chosen elements from those processed so far
            let mut layers: Vec<HashMap<T, u64>> = vec![HashMap::new(); h];
            layers[0].insert(T::zero(), 1);
            let rest_max: Vec<T> = (0..=h)
                .map(|r| scalar::scale(r, max))
                .collect::<Result<_>>()?;
            for a in elems {
                let rest_a: Vec<T> = (0..=h).map(|r| scalar::scale(r, a)).collect::<Result<_>>()?;
                let order: Vec<usize> = match kind {
                    RepKind::Unordered => (1..=h).collect(),
                    _ => (1..=h).rev().collect(),
                };
                for j in order {
                    let (below, above) = layers.split_at_mut(j);
                    let from = &below[j - 1];
                    let mut fresh: Vec<(T, u64)> = Vec::new();
                    for (s, &c) in from {
                        let t = scalar::add(s, a)?;
                        let rest = h - j;
                        if scalar::add(&t, &rest_a[rest])? > *hi
                            || scalar::add(&t, &rest_max[rest])? < *lo
                        {
                            continue;
                        }
                        fresh.push((t, c));
                    }
                    if j == h {
                        for (t, c) in fresh {
                            sink.add(t, c)?;
                        }
                    } else {
                        let to = &mut above[0];
                        for (t, c) in fresh {
                            bump(to, t, c)?;
                        }
                    }
                }
            }
            Ok(())
        }
    }
}

/// Counts on a window, as a dense table.
pub fn rep_table<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    kind: RepKind,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    let mut sink = DenseSink { lo: &window.lo, counts: vec![0; window.len()?] };
    accumulate(set, h, kind, &window.lo, &window.hi, &mut sink)?;
    Ok(RepTable { lo: window.lo.clone(), hi: window.hi.clone(), counts: sink.counts })
}

/// `R_{A,h}` on a window.
pub fn ordered<T: Int>(set: &FiniteIntSet<T>, h: usize, window: &Window<T>) -> Result<RepTable<T>> {
    rep_table(set, h, RepKind::Ordered, window)
}

/// `r_{A,h}` on a window.
pub fn unordered<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    rep_table(set, h, RepKind::Unordered, window)
}

/// `r̂_{A,h}` on a window.
pub fn restricted<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    rep_table(set, h, RepKind::Restricted, window)
}

/// Nonzero counts over the whole (finite) support, for sets whose sumset
/// is too spread out to tabulate densely.
pub fn support_counts<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
    kind: RepKind,
) -> Result<BTreeMap<T, u64>> {
    let (Some(min), Some(max)) = (set.min(), set.max()) else {
        if h == 0 {
            return Err(Error::invalid("order h must be positive"));
        }
        return Ok(BTreeMap::new());
    };
    let lo = scalar::scale(h, min)?;
    let hi = scalar::scale(h, max)?;
    let mut sink: HashMap<T, u64> = HashMap::new();
    accumulate(set, h, kind, &lo, &hi, &mut sink)?;
    Ok(sink.into_iter().collect())
}

/// The `h`-fold sumset `hA`, with `0A = {0}`.
pub fn sumset<T: Int>(h: usize, set: &FiniteIntSet<T>) -> Result<FiniteIntSet<T>> {
    if h == 0 {
        return Ok(std::iter::once(T::zero()).collect());
    }
    let counts = support_counts(set, h, RepKind::Unordered)?;
    FiniteIntSet::from_sorted(counts.into_keys().collect())
}

/// Per-identity verdicts of [`gf_check`]. The unordered and restricted
/// identities only exist for `h = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfCheck {
    pub ordered: bool,
    pub unordered: Option<bool>,
    pub restricted: Option<bool>,
}

impl GfCheck {
    pub fn all_pass(&self) -> bool {
        self.ordered && self.unordered.unwrap_or(true) && self.restricted.unwrap_or(true)
    }
}

/// Compares the counting routines against generating-function coefficients:
/// `Σ R_{A,h}(n) z^n = G_A^h` and, for `h = 2`,
/// `Σ r z^n = (G_A² + G_A(z²))/2`, `Σ r̂ z^n = (G_A² − G_A(z²))/2`.
pub fn gf_check<T: Int>(set: &FiniteIntSet<T>, h: usize, window: &Window<T>) -> Result<GfCheck> {
    let g: Poly<BigInt> = Poly::from_set(set)?;
    let matches = |table: &RepTable<T>, poly: &Poly<BigInt>| -> Result<bool> {
        for (n, c) in table.iter() {
            let k = n.to_i64().ok_or(Error::Overflow)?;
            if poly.coeff(k) != BigInt::from(c) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let power = g.pow(u32::try_from(h).map_err(|_| Error::invalid("order too large"))?);
    let ordered_ok = matches(&ordered(set, h, window)?, &power)?;
    if h != 2 {
        return Ok(GfCheck { ordered: ordered_ok, unordered: None, restricted: None });
    }
    let two = BigInt::from(2);
    let squared = g.substitute_square();
    let plus = (&power + &squared).div_exact(&two)?;
    let minus = (&power - &squared).div_exact(&two)?;
    Ok(GfCheck {
        ordered: ordered_ok,
        unordered: Some(matches(&unordered(set, h, window)?, &plus)?),
        restricted: Some(matches(&restricted(set, h, window)?, &minus)?),
    })
}

/// Recovers `A` from a table of `R_{A,h}` covering its full support.
///
/// The extreme nonzero values of a complete `R_{A,h}` are both 1 (only
/// `(min,…,min)` and `(max,…,max)` reach them), so a nonzero edge entry
/// other than 1 proves the table was cut off.
pub fn reconstruct_ordered<T: Int>(table: &RepTable<T>, h: usize) -> Result<FiniteIntSet<T>> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    if table.is_all_zero() {
        return Ok(FiniteIntSet::new());
    }
    let edges = [(table.counts[0], &table.lo), (*table.counts.last().unwrap(), &table.hi)];
    for (c, edge) in edges {
        if c > 1 {
            return Err(Error::Truncation { edge: edge.to_string() });
        }
    }
    let offset = table.lo.to_i64().ok_or(Error::Overflow)?;
    let poly: Poly<BigInt> =
        Poly::from_coeffs(offset, table.counts.iter().map(|&c| BigInt::from(c)).collect());
    let root = poly.hth_root_01(h)?;
    root.iter()
        .map(|&a| scalar::from_i64::<T>(a))
        .collect::<Result<Vec<_>>>()
        .map(FiniteIntSet::from_iter)
}

/// Input to [`dirac_diagnostic`].
#[derive(Clone, Copy, Debug)]
pub enum DiracInput<'a, T> {
    Finite(&'a FiniteIntSet<T>),
    Periodic(&'a EventuallyPeriodicSet<T>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracReport<T> {
    /// Finite sets are outside the theorem's scope.
    pub finite: bool,
    pub table: RepTable<T>,
    /// Whether `r_{A,2}` is constant on the upper half of the window.
    pub tail_constant: bool,
}

impl<T> DiracReport<T> {
    /// True when an infinite set shows a non-constant tail on the window.
    pub fn fires(&self) -> bool {
        !self.finite && !self.tail_constant
    }
}

/// Window evidence for the non-constancy of `r_{A,2}` on infinite sets.
///
/// Only the window is examined; for infinite sets this is evidence, not proof.
pub fn dirac_diagnostic<T: Int>(input: DiracInput<'_, T>, window: &Window<T>) -> Result<DiracReport<T>> {
    if window.len()? < 3 {
        return Err(Error::invalid("window must contain at least 3 integers"));
    }
    let (finite, material) = match input {
        DiracInput::Finite(set) => (true, set.clone()),
        DiracInput::Periodic(set) => {
            // every summand a of n <= hi satisfies a <= hi - min(A)
            let material = match set.min_element() {
                Some(min) => set.materialize(&min, &scalar::sub(&window.hi, &min)?),
                None => FiniteIntSet::new(),
            };
            (set.is_finite(), material)
        }
    };
    let table = unordered(&material, 2, window)?;
    let tail = &table.counts[table.counts.len() / 2..];
    let tail_constant = tail.windows(2).all(|w| w[0] == w[1]);
    Ok(DiracReport { finite, table, tail_constant })
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
    fn sumset_examples() {
        assert_eq!(sumset(3, &set(&[0, 5])).unwrap(), set(&[0, 5, 10, 15]));
        assert_eq!(sumset(0, &set(&[7, 9])).unwrap(), set(&[0]));
        assert_eq!(
            sumset(2, &set(&[-4, 0, 1, 3])).unwrap(),
            set(&[-8, -4, -3, -1, 0, 1, 2, 3, 4, 6])
        );
        assert_eq!(sumset(2, &set(&[])).unwrap(), set(&[]));
    }

    #[test]
    fn naturals_window_counts() {
        let a = FiniteIntSet::interval(&0i64, &10);
        let win = w(0, 10);
        let r = ordered(&a, 2, &win).unwrap();
        let u = unordered(&a, 2, &win).unwrap();
        for n in 0..=10 {
            assert_eq!(r.get(&n), Some(n as u64 + 1));
            assert_eq!(u.get(&n), Some((n as u64 + 2) / 2));
        }
        assert_eq!(r.get(&5), Some(6));
        assert_eq!(u.get(&5), Some(3));
    }

    #[test]
    fn small_examples() {
        let r = ordered(&set(&[0]), 3, &w(0, 1)).unwrap();
        assert_eq!(r.counts(), &[1, 0]);
        assert_eq!(ordered(&set(&[0, 1]), 3, &w(1, 1)).unwrap().counts(), &[3]);
        assert_eq!(restricted(&set(&[0, 1, 2]), 2, &w(2, 2)).unwrap().counts(), &[1]);
        for kind in RepKind::ALL {
            for h in 1..5 {
                let t = rep_table(&set(&[]), h, kind, &w(-5, 5)).unwrap();
                assert!(t.is_all_zero());
            }
        }
        assert!(ordered(&set(&[1]), 0, &w(0, 1)).is_err());
    }

    #[test]
    fn three_fold_counts() {
        // {0,1,3}: unordered triples summing to 3 are (0,0,3), (0,1,... no) -> (0,0,3),(1,1,1)
        let a = set(&[0, 1, 3]);
        assert_eq!(unordered(&a, 3, &w(3, 3)).unwrap().counts(), &[2]);
        assert_eq!(restricted(&a, 3, &w(4, 4)).unwrap().counts(), &[1]);
        // ordered: (0,0,3) x3 permutations + (1,1,1)
        assert_eq!(ordered(&a, 3, &w(3, 3)).unwrap().counts(), &[4]);
    }

    #[test]
    fn pruning_keeps_far_windows_exact() {
        let a = set(&[-100, -3, 0, 2, 50, 51]);
        let full = support_counts(&a, 4, RepKind::Unordered).unwrap();
        let win = w(90, 110);
        let table = unordered(&a, 4, &win).unwrap();
        for (n, c) in table.iter() {
            assert_eq!(c, full.get(&n).copied().unwrap_or(0), "n = {n}");
        }
    }

    #[test]
    fn gf_examples() {
        for a in [set(&[0, 1, 2]), set(&[]), set(&[-4, 0, 1, 3])] {
            let check = gf_check(&a, 2, &w(-10, 10)).unwrap();
            assert_eq!(check, GfCheck { ordered: true, unordered: Some(true), restricted: Some(true) });
        }
        let check = gf_check(&set(&[0, 2, 3]), 3, &w(-1, 10)).unwrap();
        assert!(check.ordered && check.unordered.is_none());
    }

    #[test]
    fn reconstruct_examples() {
        let t = RepTable::new(0i64, 2, vec![1, 2, 1]).unwrap();
        assert_eq!(reconstruct_ordered(&t, 2).unwrap(), set(&[0, 1]));
        let z = RepTable::new(-3i64, 3, vec![0; 7]).unwrap();
        assert_eq!(reconstruct_ordered(&z, 2).unwrap(), set(&[]));
        let bad = RepTable::new(0i64, 1, vec![1, 1]).unwrap();
        assert!(matches!(reconstruct_ordered(&bad, 2), Err(Error::NoRoot { .. })));
        // R_{{0,1},2} cut at n = 1
        let cut = RepTable::new(-2i64, 1, vec![0, 0, 1, 2]).unwrap();
        assert!(matches!(reconstruct_ordered(&cut, 2), Err(Error::Truncation { .. })));
        // padded table with negative support
        let a = set(&[-5, -2, 4]);
        let table = ordered(&a, 3, &w(-20, 20)).unwrap();
        assert_eq!(reconstruct_ordered(&table, 3).unwrap(), a);
    }

    #[test]
    fn dirac_examples() {
        let naturals = EventuallyPeriodicSet::<i64>::naturals();
        let rep = dirac_diagnostic(DiracInput::Periodic(&naturals), &w(0, 100)).unwrap();
        assert!(rep.fires());
        for (n, c) in rep.table.iter() {
            assert_eq!(c, (n as u64 + 2) / 2);
        }
        let pair = set(&[0, 1]);
        let rep = dirac_diagnostic(DiracInput::Finite(&pair), &w(10, 20)).unwrap();
        assert!(rep.finite && rep.tail_constant && !rep.fires());
        assert_eq!(rep.table.max_count(), 0);
        let evens = EventuallyPeriodicSet::residue_class(2i64, 0).unwrap();
        let rep = dirac_diagnostic(DiracInput::Periodic(&evens), &w(0, 60)).unwrap();
        assert!(rep.fires());
        assert!(dirac_diagnostic(DiracInput::Finite(&pair), &w(0, 1)).is_err());
    }

    #[test]
    fn parity_law_and_conservation() {
        let a = set(&[-6, -1, 0, 4, 5, 9, 13]);
        let win = w(-12, 26);
        let r = ordered(&a, 2, &win).unwrap();
        for (n, c) in r.iter() {
            let odd = c % 2 == 1;
            assert_eq!(odd, n % 2 == 0 && a.contains(&(n / 2)));
        }
        let total: u64 = r.counts().iter().sum();
        assert_eq!(total, 49);
    }

    #[test]
    fn kind_parses() {
        assert_eq!("restricted".parse::<RepKind>().unwrap(), RepKind::Restricted);
        assert!("other".parse::<RepKind>().is_err());
    }
}
