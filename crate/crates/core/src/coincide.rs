//! Sets whose order-2 representation functions eventually agree: pairs with
//! equal ordered counts built from a congruence `A* + T ≡ B* + T (mod m)`,
//! and partitions of `N0` into two sets with equal unordered counts.

use crate::error::{Error, Result};
use crate::intset::{EventuallyPeriodicSet, FiniteIntSet};
use crate::repfn::{self, Window};
use crate::scalar::{self, Int};

/// `(n0, m, T, A*, B*)` with `A*, B* ⊆ [0, n0]` and `T ⊆ [0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidencePair<T> {
    n0: T,
    m: T,
    residues: FiniteIntSet<T>,
    astar: FiniteIntSet<T>,
    bstar: FiniteIntSet<T>,
}

impl<T: Int> CoincidencePair<T> {
    pub fn new(
        n0: T,
        m: T,
        residues: FiniteIntSet<T>,
        astar: FiniteIntSet<T>,
        bstar: FiniteIntSet<T>,
    ) -> Result<Self> {
        if n0.is_negative() {
            return Err(Error::invalid("n0 must be nonnegative"));
        }
        if m < T::one() {
            return Err(Error::invalid("modulus must be positive"));
        }
        if residues.iter().any(|t| t.is_negative() || t >= &m) {
            return Err(Error::invalid("residues must lie in [0, m)"));
        }
        for (name, s) in [("A*", &astar), ("B*", &bstar)] {
            if s.iter().any(|a| a.is_negative() || a > &n0) {
                return Err(Error::invalid(format!("{name} must lie in [0, n0]")));
            }
        }
        Ok(CoincidencePair { n0, m, residues, astar, bstar })
    }

    pub fn n0(&self) -> &T {
        &self.n0
    }

    pub fn modulus(&self) -> &T {
        &self.m
    }

    pub fn residues(&self) -> &FiniteIntSet<T> {
        &self.residues
    }

    pub fn astar(&self) -> &FiniteIntSet<T> {
        &self.astar
    }

    pub fn bstar(&self) -> &FiniteIntSet<T> {
        &self.bstar
    }
}

/// Multiplicities of `X + T` modulo `m`.
fn residue_counts<T: Int>(x: &FiniteIntSet<T>, t: &FiniteIntSet<T>, m: &T) -> Result<Vec<u64>> {
    let mut out = vec![0u64; scalar::to_index(m)?];
    for a in x {
        for r in t {
            out[scalar::to_index(&(a.clone() + r.clone()).mod_floor(m))?] += 1;
        }
    }
    Ok(out)
}

/// `A* + T ≡ B* + T (mod m)` as multisets of residues.
pub fn check_congruence<T: Int>(p: &CoincidencePair<T>) -> Result<bool> {
    Ok(residue_counts(&p.astar, &p.residues, &p.m)? == residue_counts(&p.bstar, &p.residues, &p.m)?)
}

/// `A = A* ∪ C` and `B = B* ∪ C` with `C = {c > n0 : c mod m ∈ T}`.
pub fn synthesize_pair<T: Int>(
    p: &CoincidencePair<T>,
) -> Result<(EventuallyPeriodicSet<T>, EventuallyPeriodicSet<T>)> {
    if !check_congruence(p)? {
        return Err(Error::Congruence);
    }
    let make = |head: &FiniteIntSet<T>| {
        EventuallyPeriodicSet::new(
            p.n0.clone(),
            p.m.clone(),
            p.residues.iter().cloned(),
            head.clone(),
        )
    };
    Ok((make(&p.astar)?, make(&p.bstar)?))
}

fn first_difference<T: Int>(
    ra: &repfn::RepTable<T>,
    rb: &repfn::RepTable<T>,
) -> Option<Disagreement<T>> {
    ra.iter()
        .zip(rb.counts())
        .find(|((_, x), y)| x != *y)
        .map(|((n, x), &y)| Disagreement { n, left: x, right: y })
}

/// Two counts that differ at `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement<T> {
    pub n: T,
    pub left: u64,
    pub right: u64,
}

/// First `n` in `(2 max(n0_A, n0_B), horizon]` with `R_{A,2}(n) != R_{B,2}(n)`.
///
/// Both sets are materialized on `[μ, horizon - μ]`, `μ` the least element
/// of `A ∪ B`, which holds every summand of every `n <= horizon`.
pub fn verify_pair<T: Int>(
    a: &EventuallyPeriodicSet<T>,
    b: &EventuallyPeriodicSet<T>,
    horizon: &T,
) -> Result<Option<Disagreement<T>>> {
    let n0 = a.n0().clone().max(b.n0().clone());
    let start = scalar::add(&scalar::scale(2, &n0)?, &T::one())?;
    if horizon < &start {
        return Err(Error::invalid(format!("horizon must exceed 2 n0 = {}", start - T::one())));
    }
    let mu = match (a.min_element(), b.min_element()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Ok(None),
    };
    let top = scalar::sub(horizon, &mu)?;
    let window = Window::new(start, horizon.clone())?;
    let ra = repfn::ordered(&a.materialize(&mu, &top), 2, &window)?;
    let rb = repfn::ordered(&b.materialize(&mu, &top), 2, &window)?;
    Ok(first_difference(&ra, &rb))
}

/// The pair `(A ∩ [0, n0], B ∩ [0, n0])` for two sets sharing a tail, with
/// `n0` the larger of their thresholds. For nonnegative sets with the same
/// modulus and residues, the representation functions agree beyond `2 n0`
/// exactly when this pair satisfies the congruence, which
/// [`verify_pair`] decides with any horizon `>= 2 n0 + m`.
pub fn induced_pair<T: Int>(
    a: &EventuallyPeriodicSet<T>,
    b: &EventuallyPeriodicSet<T>,
) -> Result<CoincidencePair<T>> {
    if a.modulus() != b.modulus() || a.residues() != b.residues() {
        return Err(Error::invalid("sets do not share tail parameters"));
    }
    let n0 = a.n0().clone().max(b.n0().clone()).max(T::zero());
    let m = a.modulus().clone();
    let residues: FiniteIntSet<T> = a.residues().iter().cloned().collect();
    let (ha, hb) = (a.materialize(&T::zero(), &n0), b.materialize(&T::zero(), &n0));
    CoincidencePair::new(n0, m, residues, ha, hb)
}

/// Membership of `A` on `[0, horizon]`: the head on `[0, 2N-1]`, then
/// `χ(2a) = 1 - χ(a)` and `χ(2a+1) = χ(a)` for `a >= N`.
pub fn sandor_membership(n: usize, head: &[bool], horizon: usize) -> Result<Vec<bool>> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if head.len() != 2 * n {
        return Err(Error::invalid(format!("head must cover [0, {}]", 2 * n - 1)));
    }
    let found = head.iter().filter(|&&b| b).count();
    if found != n {
        return Err(Error::HeadCount { expected: n, found });
    }
    if horizon < 2 * n - 1 {
        return Err(Error::invalid(format!("horizon must be at least 2N-1 = {}", 2 * n - 1)));
    }
    let mut chi = head.to_vec();
    for x in 2 * n..=horizon {
        let a = x / 2;
        chi.push(if x % 2 == 0 { !chi[a] } else { chi[a] });
    }
    Ok(chi)
}

/// `(A ∩ [0, D], B ∩ [0, D])` with `B = N0 \ A`.
pub fn sandor_generate<T: Int>(
    n: usize,
    head: &[bool],
    horizon: usize,
) -> Result<(FiniteIntSet<T>, FiniteIntSet<T>)> {
    let chi = sandor_membership(n, head, horizon)?;
    split(&chi)
}

fn split<T: Int>(chi: &[bool]) -> Result<(FiniteIntSet<T>, FiniteIntSet<T>)> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (x, &inside) in chi.iter().enumerate() {
        let v = scalar::from_usize(x)?;
        if inside {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    Ok((FiniteIntSet::from_sorted(a)?, FiniteIntSet::from_sorted(b)?))
}

/// First `n` in `[from, len-1]` where the set given by `chi` and its
/// complement in `[0, len-1]` have different unordered pair counts.
pub fn partition_disagreement(chi: &[bool], from: usize) -> Result<Option<Disagreement<i64>>> {
    if chi.is_empty() || from >= chi.len() {
        return Ok(None);
    }
    let (a, b): (FiniteIntSet<i64>, FiniteIntSet<i64>) = split(chi)?;
    let window = Window::new(from as i64, chi.len() as i64 - 1)?;
    let ra = repfn::unordered(&a, 2, &window)?;
    let rb = repfn::unordered(&b, 2, &window)?;
    Ok(first_difference(&ra, &rb))
}

/// First `n` in `[2N-1, D]` with `r_{A,2}(n) != r_{B,2}(n)`.
pub fn sandor_verify(n: usize, head: &[bool], horizon: usize) -> Result<Option<Disagreement<i64>>> {
    let chi = sandor_membership(n, head, horizon)?;
    partition_disagreement(&chi, 2 * n - 1)
}
