//! Finite and eventually periodic integer sets, counting functions and
//! finite-window density estimates.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Int};

/// Membership and interval counting, shared by finite and infinite sets.
pub trait IntegerSet<T: Int> {
    fn contains(&self, n: &T) -> bool;

    /// `card{a in A : y <= a <= x}`; zero when `y > x`.
    fn count(&self, y: &T, x: &T) -> T;

    fn is_finite(&self) -> bool;
}

/// A finite set of integers stored as a strictly increasing sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteIntSet<T> {
    elems: Vec<T>,
}

impl<T> Default for FiniteIntSet<T> {
    fn default() -> Self {
        FiniteIntSet { elems: Vec::new() }
    }
}

impl<T: Int> FromIterator<T> for FiniteIntSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut elems: Vec<T> = iter.into_iter().collect();
        elems.sort();
        elems.dedup();
        FiniteIntSet { elems }
    }
}

impl<T: Int> FiniteIntSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps an already strictly increasing vector.
    pub fn from_sorted(elems: Vec<T>) -> Result<Self> {
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("set elements must be strictly increasing"));
        }
        Ok(FiniteIntSet { elems })
    }

    /// The interval `{lo, lo+1, ..., hi}`, empty when `lo > hi`.
    pub fn interval(lo: &T, hi: &T) -> Self {
        let mut elems = Vec::new();
        let mut n = lo.clone();
        while &n <= hi {
            elems.push(n.clone());
            n = n + T::one();
        }
        FiniteIntSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elems.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.elems
    }

    pub fn contains(&self, n: &T) -> bool {
        self.elems.binary_search(n).is_ok()
    }

    pub fn min(&self) -> Option<&T> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&T> {
        self.elems.last()
    }

    /// `max{|a| : a in A}`, `None` for the empty set.
    pub fn max_abs(&self) -> Option<T> {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => Some(lo.abs().max(hi.abs())),
            _ => None,
        }
    }

    /// Number of elements in `[y, x]`.
    pub fn count_between(&self, y: &T, x: &T) -> usize {
        if y > x {
            return 0;
        }
        let lo = self.elems.partition_point(|a| a < y);
        let hi = self.elems.partition_point(|a| a <= x);
        hi - lo
    }

    /// The shift `A + x`.
    pub fn shift(&self, x: &T) -> Result<Self> {
        let elems = self
            .elems
            .iter()
            .map(|a| scalar::add(a, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteIntSet { elems })
    }

    /// The dilation `h * A = {h a : a in A}` for `h >= 1`.
    pub fn dilate(&self, h: &T) -> Result<Self> {
        if h < &T::one() {
            return Err(Error::invalid("dilation factor must be positive"));
        }
        let elems = self
            .elems
            .iter()
            .map(|a| scalar::mul(h, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteIntSet { elems })
    }

    pub fn union(&self, other: &Self) -> Self {
        self.elems.iter().chain(other.elems.iter()).cloned().collect()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.elems.len() && j < other.elems.len() {
            match self.elems[i].cmp(&other.elems[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elems.iter().all(|a| other.contains(a))
    }
}

impl<T: Int> IntegerSet<T> for FiniteIntSet<T> {
    fn contains(&self, n: &T) -> bool {
        FiniteIntSet::contains(self, n)
    }

    fn count(&self, y: &T, x: &T) -> T {
        T::from_usize(self.count_between(y, x)).expect("set size fits scalar")
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl<T: fmt::Debug> fmt::Debug for FiniteIntSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a:?}")?;
        }
        write!(f, "}}")
    }
}

impl<'a, T> IntoIterator for &'a FiniteIntSet<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// `A* ∪ {c > n0 : c mod m in T}` with every head element `<= n0`.
///
/// The periodic tail runs to `+∞` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodicSet<T> {
    n0: T,
    m: T,
    residues: Vec<T>,
    head: FiniteIntSet<T>,
}

impl<T: Int> EventuallyPeriodicSet<T> {
    pub fn new(
        n0: T,
        m: T,
        residues: impl IntoIterator<Item = T>,
        head: FiniteIntSet<T>,
    ) -> Result<Self> {
        if m < T::one() {
            return Err(Error::invalid("modulus must be positive"));
        }
        let residues: FiniteIntSet<T> = residues.into_iter().collect();
        if residues.iter().any(|t| t.is_negative() || t >= &m) {
            return Err(Error::invalid("residues must lie in [0, m)"));
        }
        if head.max().is_some_and(|a| a > &n0) {
            return Err(Error::invalid("head elements must not exceed n0"));
        }
        Ok(EventuallyPeriodicSet { n0, m, residues: residues.into_vec(), head })
    }

    /// The nonnegative integers.
    pub fn naturals() -> Self {
        Self::new(-T::one(), T::one(), [T::zero()], FiniteIntSet::new())
            .expect("valid constant parameters")
    }

    /// `{n >= 0 : n ≡ t (mod m)}`.
    pub fn residue_class(m: T, t: T) -> Result<Self> {
        Self::new(-T::one(), m, [t], FiniteIntSet::new())
    }

    pub fn n0(&self) -> &T {
        &self.n0
    }

    pub fn modulus(&self) -> &T {
        &self.m
    }

    pub fn residues(&self) -> &[T] {
        &self.residues
    }

    pub fn head(&self) -> &FiniteIntSet<T> {
        &self.head
    }

    /// Smallest element, `None` for the empty set.
    pub fn min_element(&self) -> Option<T> {
        if let Some(a) = self.head.min() {
            return Some(a.clone());
        }
        let start = self.n0.clone() + T::one();
        let r = start.mod_floor(&self.m);
        self.residues
            .iter()
            .map(|t| start.clone() + (t.clone() - r.clone()).mod_floor(&self.m))
            .min()
    }

    /// The elements lying in `[lo, hi]`.
    pub fn materialize(&self, lo: &T, hi: &T) -> FiniteIntSet<T> {
        let mut out: Vec<T> = self
            .head
            .iter()
            .filter(|a| *a >= lo && *a <= hi)
            .cloned()
            .collect();
        let start = lo.clone().max(self.n0.clone() + T::one());
        let r = start.mod_floor(&self.m);
        for t in &self.residues {
            let mut c = start.clone() + (t.clone() - r.clone()).mod_floor(&self.m);
            while &c <= hi {
                out.push(c.clone());
                c = c + self.m.clone();
            }
        }
        out.into_iter().collect()
    }

    fn count_class(&self, t: &T, lo: &T, hi: &T) -> T {
        // #{c in [lo, hi] : c ≡ t (mod m)}
        let above = (hi.clone() - t.clone()).div_floor(&self.m);
        let below = (lo.clone() - T::one() - t.clone()).div_floor(&self.m);
        above - below
    }
}

impl<T: Int> IntegerSet<T> for EventuallyPeriodicSet<T> {
    fn contains(&self, n: &T) -> bool {
        if n <= &self.n0 {
            self.head.contains(n)
        } else {
            self.residues.binary_search(&n.mod_floor(&self.m)).is_ok()
        }
    }

    fn count(&self, y: &T, x: &T) -> T {
        if y > x {
            return T::zero();
        }
        let head_hi = x.clone().min(self.n0.clone());
        let mut total = T::from_usize(self.head.count_between(y, &head_hi))
            .expect("head size fits scalar");
        let tail_lo = y.clone().max(self.n0.clone() + T::one());
        if &tail_lo <= x {
            for t in &self.residues {
                total = total + self.count_class(t, &tail_lo, x);
            }
        }
        total
    }

    fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }
}

/// One window sample `A(-x, x) / (2x + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySample<T: Clone + num_integer::Integer> {
    pub x: T,
    pub ratio: Ratio<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile<T: Clone + num_integer::Integer> {
    pub samples: Vec<DensitySample<T>>,
}

/// Exact ratios `A(-x, x) / (2x + 1)` at each requested `x`.
///
/// `xs` must be nonempty, positive and strictly increasing.
pub fn density_profile<T: Int, S: IntegerSet<T> + ?Sized>(
    set: &S,
    xs: &[T],
) -> Result<DensityProfile<T>> {
    if xs.is_empty() {
        return Err(Error::invalid("density profile needs at least one x"));
    }
    if xs.iter().any(|x| !x.is_positive()) || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("xs must be positive and strictly increasing"));
    }
    let two = T::one() + T::one();
    let samples = xs
        .iter()
        .map(|x| {
            let width = scalar::add(&scalar::mul(&two, x)?, &T::one())?;
            let c = set.count(&-x.clone(), x);
            Ok(DensitySample { x: x.clone(), ratio: Ratio::new(c, width) })
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(samples
        .iter()
        .all(|s| s.ratio >= Ratio::zero() && s.ratio <= Ratio::one()));
    Ok(DensityProfile { samples })
}
