use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::oracle::{self, TupleRule};
use crate::repfn::{self, RepKind};
use crate::scalar::{self, Int};

/// Doubling rounds allowed when searching for a spread parameter.
pub const DEFAULT_SEARCH_BUDGET: u32 = 4096;

/// A nondecreasing function with `φ(x) → ∞`, bounding `A(-x, x)`.
pub trait Sparsity<T> {
    fn eval(&self, x: &T) -> Result<T>;
}

impl<T, F: Fn(&T) -> T> Sparsity<T> for F {
    fn eval(&self, x: &T) -> Result<T> {
        Ok(self(x))
    }
}

/// The sparsity functions exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phi {
    /// `⌈log₂ x⌉ + offset`
    Log { offset: u64 },
    /// `⌊x^(num/den)⌋`
    Power { num: u32, den: u32 },
}

impl Phi {
    /// Parses `log`, `log+K`, `poly:p/q` or `poly:0.25`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unrecognized sparsity function {s:?}"));
        if s == "log" {
            return Ok(Phi::Log { offset: 4 });
        }
        if let Some(k) = s.strip_prefix("log+") {
            return Ok(Phi::Log { offset: k.parse().map_err(|_| bad())? });
        }
        let theta = s.strip_prefix("poly:").ok_or_else(bad)?;
        let (num, den) = if let Some((p, q)) = theta.split_once('/') {
            (p.parse::<u32>().map_err(|_| bad())?, q.parse::<u32>().map_err(|_| bad())?)
        } else if let Some((int, frac)) = theta.split_once('.') {
            let den = 10u32.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: u32 = frac.parse().map_err(|_| bad())?;
            (int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?, den)
        } else {
            (theta.parse::<u32>().map_err(|_| bad())?, 1)
        };
        if num == 0 || den == 0 {
            return Err(Error::invalid("exponent must be positive"));
        }
        let g = num_integer::gcd(num, den);
        Ok(Phi::Power { num: num / g, den: den / g })
    }
}

impl<T: Int> Sparsity<T> for Phi {
    fn eval(&self, x: &T) -> Result<T> {
        if !x.is_positive() {
            return Err(Error::invalid("sparsity is evaluated at positive x only"));
        }
        match *self {
            Phi::Log { offset } => {
                let mut bits = 0u64;
                let mut v = x.clone() - T::one();
                let two = T::one() + T::one();
                while v.is_positive() {
                    v = v / two.clone();
                    bits += 1;
                }
                T::from_u64(bits + offset).ok_or(Error::Overflow)
            }
            Phi::Power { num, den } => {
                let mut p = T::one();
                for _ in 0..num {
                    p = scalar::mul(&p, x)?;
                }
                Ok(p.nth_root(den))
            }
        }
    }
}

/// One extension `A_k -> A_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrbStep<T> {
    pub k: usize,
    pub d: T,
    pub b: T,
    pub c: T,
    /// `b ∈ 2A_k`, so `-b` was the integer added to the sumset.
    pub negated: bool,
}

/// `A_k` with `|A_k| = 2k` and `r_{A_k,2} <= 1`.
#[derive(Clone, Debug)]
pub struct UrbState<T> {
    k: usize,
    set: FiniteIntSet<T>,
    history: Vec<UrbStep<T>>,
    sums: HashSet<T>,
}

impl<T: Int> UrbState<T> {
    /// `A_1 = {0, 1}`.
    pub fn initial() -> Self {
        let set: FiniteIntSet<T> = [T::zero(), T::one()].into_iter().collect();
        let two = T::one() + T::one();
        let sums = [T::zero(), T::one(), two].into_iter().collect();
        UrbState { k: 1, set, history: Vec::new(), sums }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&self) -> &FiniteIntSet<T> {
        &self.set
    }

    pub fn into_set(self) -> FiniteIntSet<T> {
        self.set
    }

    /// `d_k = max |a|`.
    pub fn d(&self) -> T {
        self.set.max_abs().expect("A_k is nonempty")
    }

    pub fn history(&self) -> &[UrbStep<T>] {
        &self.history
    }

    /// `c_1`, once the first step has run.
    pub fn first_c(&self) -> Option<&T> {
        self.history.first().map(|s| &s.c)
    }

    /// `min{|b| : b ∉ 2A_k}`.
    pub fn gap(&self) -> T {
        let mut b = T::one();
        while self.sums.contains(&b) && self.sums.contains(&-b.clone()) {
            b = b + T::one();
        }
        b
    }
}

/// Smallest `c >= d` with `φ(c) >= target`, by doubling then bisection.
fn spread_for<T: Int>(d: &T, target: &T, phi: &dyn Sparsity<T>, budget: u32) -> Result<T> {
    if &phi.eval(d)? >= target {
        return Ok(d.clone());
    }
    let two = T::one() + T::one();
    let mut lo = d.clone();
    let mut hi = scalar::mul(&d.clone().max(T::one()), &two)?;
    let mut rounds = 0;
    while &phi.eval(&hi)? < target {
        rounds += 1;
        if rounds > budget {
            return Err(Error::Sparsity(format!(
                "phi stays below {target} up to x = {hi}"
            )));
        }
        lo = hi.clone();
        hi = scalar::mul(&hi, &two)?;
    }
    // phi(lo) < target <= phi(hi)
    while hi.clone() - lo.clone() > T::one() {
        let mid = lo.clone() + (hi.clone() - lo.clone()) / two.clone();
        if &phi.eval(&mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Adjoins `{b + 3c, -3c}` (or its negation when `b ∈ 2A_k`) so that `±b`
/// gains its unique representation.
///
/// Without `phi`, `c = d_k`. With `phi`, `c` is the least value `>= d_k` with
/// `φ(c) >= 2k + 2`. The step checks that the new sums
/// `(A_k + x) ∪ (A_k + y) ∪ {2x, x+y, 2y}` are pairwise distinct and avoid
/// `2A_k`, which is the statement `r_{A_{k+1},2} <= 1`.
pub fn urb_step<T: Int>(
    mut state: UrbState<T>,
    phi: Option<&dyn Sparsity<T>>,
    budget: u32,
) -> Result<UrbState<T>> {
    let k = state.k;
    let d = state.d();
    let b = state.gap();
    let c = match phi {
        None => d.clone(),
        Some(phi) => {
            let target = scalar::from_usize(2 * k + 2)?;
            spread_for(&d, &target, phi, budget)?
        }
    };
    let three_c = scalar::scale(3, &c)?;
    let far = scalar::add(&b, &three_c)?;
    let negated = state.sums.contains(&b);
    let (x, y) = if negated {
        if state.sums.contains(&-b.clone()) {
            return Err(Error::internal(format!("both ±{b} lie in 2A_{k}")));
        }
        (-far.clone(), three_c)
    } else {
        (far.clone(), -three_c)
    };
    if state.set.contains(&x) || state.set.contains(&y) || x.abs() <= d || y.abs() <= d {
        return Err(Error::internal("new elements must lie outside [-d_k, d_k]"));
    }

    let mut fresh: Vec<T> = Vec::with_capacity(2 * state.set.len() + 3);
    for a in state.set.iter() {
        fresh.push(scalar::add(a, &x)?);
        fresh.push(scalar::add(a, &y)?);
    }
    fresh.push(scalar::add(&x, &x)?);
    fresh.push(scalar::add(&x, &y)?);
    fresh.push(scalar::add(&y, &y)?);
    for s in fresh {
        if !state.sums.insert(s.clone()) {
            return Err(Error::internal(format!("sum {s} represented twice in 2A_{}", k + 1)));
        }
    }
    let target = if negated { -b.clone() } else { b.clone() };
    if !state.sums.contains(&target) {
        return Err(Error::internal(format!("{target} still missing from 2A_{}", k + 1)));
    }

    state.set = state.set.union(&[x, y].into_iter().collect());
    state.k = k + 1;
    if state.set.len() != 2 * state.k {
        return Err(Error::internal(format!("|A_{}| = {}", state.k, state.set.len())));
    }
    let d_next = state.d();
    if d_next != far {
        return Err(Error::internal("d_{k+1} must equal b_k + 3c_k"));
    }
    if state.set.contains(&d_next) && state.set.contains(&-d_next.clone()) {
        return Err(Error::internal("A_{k+1} contains both ±d_{k+1}"));
    }
    state.history.push(UrbStep { k, d, b, c, negated });
    Ok(state)
}

/// Runs `k - 1` steps from `A_1`, returning `A_k`. With `phi`, every
/// checkpoint in `[c_1, d_k]` is verified to satisfy `A(-x, x) <= φ(x)`.
pub fn urb_build<T: Int>(k: usize, phi: Option<&dyn Sparsity<T>>) -> Result<UrbState<T>> {
    if k == 0 {
        return Err(Error::invalid("step count must be positive"));
    }
    let mut state = UrbState::initial();
    while state.k < k {
        state = urb_step(state, phi, DEFAULT_SEARCH_BUDGET)?;
    }
    if let Some(phi) = phi {
        if let Some(bad) = sparsity_checkpoints(&state, phi)?.into_iter().find(|c| !c.holds()) {
            return Err(Error::internal(format!(
                "A(-{0}, {0}) = {1} exceeds phi = {2}",
                bad.x, bad.count, bad.phi
            )));
        }
    }
    Ok(state)
}

/// `A(-x, x)` against `φ(x)` at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint<T> {
    pub x: T,
    pub count: usize,
    pub phi: T,
}

impl<T: Int> Checkpoint<T> {
    pub fn holds(&self) -> bool {
        T::from_usize(self.count).is_some_and(|c| c <= self.phi)
    }
}

/// The points where `A(-x, x)` can first exceed a nondecreasing `φ` on
/// `[c_1, d_k]`: `c_1` itself and every `|a| >= c_1`. Between consecutive
/// points the count is constant and `φ` does not decrease.
pub fn sparsity_checkpoints<T: Int>(
    state: &UrbState<T>,
    phi: &dyn Sparsity<T>,
) -> Result<Vec<Checkpoint<T>>> {
    let Some(c1) = state.first_c() else {
        return Ok(Vec::new());
    };
    let mut xs: Vec<T> = state.set.iter().map(|a| a.abs()).filter(|a| a >= c1).collect();
    xs.push(c1.clone());
    xs.sort();
    xs.dedup();
    xs.into_iter()
        .map(|x| {
            let count = state.set.count_between(&-x.clone(), &x);
            let phi = phi.eval(&x)?;
            Ok(Checkpoint { x, count, phi })
        })
        .collect()
}

/// Brute-force audit of a finished construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrbVerification {
    /// Largest `r_{A,2}(n)` over all `n` (must be 1).
    pub max_count: u64,
    /// `j` with `r_{A,2}(n) = 1` checked for all `|n| <= j`.
    pub covered: usize,
    pub covered_ok: bool,
    /// The fast counting path agrees with enumeration on the full support.
    pub fast_path_agrees: bool,
}

impl UrbVerification {
    pub fn passed(&self) -> bool {
        self.max_count <= 1 && self.covered_ok && self.fast_path_agrees
    }
}

/// Enumerates every pair of `A_k`: `r <= 1` everywhere and `r = 1` on
/// `|n| <= k/2`.
pub fn verify_urb<T: Int>(state: &UrbState<T>) -> Result<UrbVerification> {
    let slow = oracle::enum_support(&state.set, 2, TupleRule::Unordered)?;
    let fast = repfn::support_counts(&state.set, 2, RepKind::Unordered)?;
    let covered = state.k / 2;
    let covered_ok = (-(covered as i64)..=covered as i64).all(|n| {
        scalar::from_i64::<T>(n).is_ok_and(|n| slow.get(&n) == Some(&1))
    });
    Ok(UrbVerification {
        max_count: slow.values().copied().max().unwrap_or(0),
        covered,
        covered_ok,
        fast_path_agrees: slow == fast,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn set(v: &[i64]) -> FiniteIntSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn first_step_matches_worked_example() {
        let s1 = UrbState::<i64>::initial();
        assert_eq!(s1.set(), &set(&[0, 1]));
        assert_eq!((s1.d(), s1.gap()), (1, 1));
        let s2 = urb_step(s1, None, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(s2.set(), &set(&[-4, 0, 1, 3]));
        let step = &s2.history()[0];
        assert_eq!((step.d, step.b, step.c, step.negated), (1, 1, 1, true));
        assert_eq!(
            repfn::sumset(2, s2.set()).unwrap(),
            set(&[-8, -4, -3, -1, 0, 1, 2, 3, 4, 6])
        );
        assert_eq!((s2.d(), s2.gap()), (4, 2));
    }

    #[test]
    fn small_builds() {
        assert_eq!(urb_build::<i64>(1, None).unwrap().set(), &set(&[0, 1]));
        let s = urb_build::<i64>(3, None).unwrap();
        assert_eq!(s.set().len(), 6);
        let v = verify_urb(&s).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn every_prefix_is_unique_and_covering() {
        let mut state = UrbState::<i64>::initial();
        for _ in 0..20 {
            state = urb_step(state, None, DEFAULT_SEARCH_BUDGET).unwrap();
            let counts = repfn::support_counts(state.set(), 2, RepKind::Unordered).unwrap();
            assert!(counts.values().all(|&c| c == 1));
            let j = state.k() as i64 / 2;
            assert!((-j..=j).all(|n| counts.get(&n) == Some(&1)));
            assert!(verify_urb(&state).unwrap().passed());
        }
    }

    #[test]
    fn machine_integers_overflow_cleanly() {
        assert_eq!(urb_build::<i64>(60, None).unwrap_err(), Error::Overflow);
        let big = urb_build::<BigInt>(60, None).unwrap();
        assert_eq!(big.set().len(), 120);
    }

    #[test]
    fn sparsity_log_checkpoints() {
        let phi = Phi::Log { offset: 4 };
        let s = urb_build::<BigInt>(50, Some(&phi)).unwrap();
        let cps = sparsity_checkpoints(&s, &phi).unwrap();
        assert!(!cps.is_empty());
        assert!(cps.iter().all(|c| c.holds()));
    }

    #[test]
    fn sparsity_forces_larger_spread() {
        // phi grows slowly enough to bind: floor(x^(1/4))
        let phi = Phi::parse("poly:1/4").unwrap();
        let s = urb_build::<BigInt>(8, Some(&phi)).unwrap();
        let binding = s.history().iter().filter(|st| st.c > st.d).count();
        assert!(binding > 0);
        for st in s.history() {
            assert!(st.c >= st.d);
            let need = BigInt::from(2 * st.k + 2);
            assert!(phi.eval(&st.c).unwrap() >= need);
            // minimality: one less would not do, unless c = d
            if st.c > st.d {
                assert!(phi.eval(&(st.c.clone() - 1)).unwrap() < need);
            }
        }
        assert!(verify_urb(&s).unwrap().passed());
    }

    #[test]
    fn bounded_phi_exhausts_search() {
        let phi = |_: &i64| 3i64;
        let err = urb_build::<i64>(3, Some(&phi)).unwrap_err();
        assert!(matches!(err, Error::Sparsity(_) | Error::Overflow), "{err:?}");
    }

    #[test]
    fn phi_parsing_and_values() {
        assert_eq!(Phi::parse("log").unwrap(), Phi::Log { offset: 4 });
        assert_eq!(Phi::parse("poly:0.5").unwrap(), Phi::Power { num: 1, den: 2 });
        assert_eq!(Phi::parse("poly:2/6").unwrap(), Phi::Power { num: 1, den: 3 });
        assert!(Phi::parse("poly:0").is_err());
        assert!(Phi::parse("exp").is_err());
        let log = Phi::Log { offset: 4 };
        let vals: Vec<i64> = [1i64, 2, 3, 4, 5, 8, 9].iter().map(|x| log.eval(x).unwrap()).collect();
        assert_eq!(vals, vec![4, 5, 6, 6, 7, 7, 8]);
        let root = Phi::Power { num: 1, den: 2 };
        assert_eq!(root.eval(&99i64).unwrap(), 9);
        assert_eq!(root.eval(&100i64).unwrap(), 10);
    }
}
