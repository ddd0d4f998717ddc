use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::oracle::{self, TupleRule};
use crate::repfn::{self, RepKind};
use crate::scalar::{self, Int};
use crate::sidon::{self, GadgetParams};

use super::target::{Schedule, TargetFn};

/// One consumed target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundRepStep<T> {
    pub k: usize,
    pub u: T,
    /// `(d_k, c_k)` when `D_{c_k,u_k}` was adjoined; `None` when `u_k`
    /// already had enough representations.
    pub gadget: Option<(T, T)>,
}

/// `A_k` after `k` scheduled targets, with its unordered `h`-fold counts.
#[derive(Clone, Debug)]
pub struct FundRepState<T> {
    h: usize,
    set: FiniteIntSet<T>,
    schedule: Vec<T>,
    history: Vec<FundRepStep<T>>,
    counts: BTreeMap<T, u64>,
}

impl<T: Int> FundRepState<T> {
    /// `A_0 = ∅`.
    pub fn new(h: usize) -> Result<Self> {
        if h < 2 {
            return Err(Error::invalid(format!("order {h} < 2")));
        }
        Ok(FundRepState {
            h,
            set: FiniteIntSet::new(),
            schedule: Vec::new(),
            history: Vec::new(),
            counts: BTreeMap::new(),
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn k(&self) -> usize {
        self.schedule.len()
    }

    pub fn set(&self) -> &FiniteIntSet<T> {
        &self.set
    }

    pub fn into_set(self) -> FiniteIntSet<T> {
        self.set
    }

    /// `u_1, …, u_k`.
    pub fn schedule(&self) -> &[T] {
        &self.schedule
    }

    pub fn history(&self) -> &[FundRepStep<T>] {
        &self.history
    }

    /// `r_{A_k,h}(n)` for every `n ∈ hA_k`.
    pub fn counts(&self) -> &BTreeMap<T, u64> {
        &self.counts
    }

    pub fn count(&self, n: &T) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    fn occurrences(&self, n: &T) -> u64 {
        self.schedule.iter().filter(|&u| u == n).count() as u64
    }
}

fn check_invariants<T: Int>(s: &FundRepState<T>, f: &TargetFn<T>) -> Result<()> {
    for (n, &c) in &s.counts {
        if f.eval(n).is_zero() {
            return Err(Error::internal(format!("zero target {n} lies in hA_{}", s.k())));
        }
        if !f.eval(n).admits(c) {
            return Err(Error::internal(format!("r({n}) = {c} exceeds f({n}) = {}", f.eval(n))));
        }
    }
    for u in &s.schedule {
        let need = s.occurrences(u);
        if s.count(u) < need {
            return Err(Error::internal(format!(
                "r({u}) = {} below its {need} scheduled occurrences",
                s.count(u)
            )));
        }
    }
    if let Some(col) = sidon::generalized_collision(&s.set, s.h - 1)? {
        return Err(Error::internal(format!(
            "A_{} is not generalized Sidon of order {}: {col:?}",
            s.k(),
            s.h - 1
        )));
    }
    Ok(())
}

/// Consumes the next scheduled target `u_k`.
///
/// If `r_{A_{k-1},h}(u_k)` already covers every scheduled occurrence of
/// `u_k`, the set is unchanged. Otherwise `D_{c_k,u_k}` is adjoined with
/// `d_k` the largest absolute value in `f^{-1}(0) ∪ ⋃_{r<=h} rA_{k-1}` (at
/// least 1) and `c_k` the least value above `2h(2d_k + |u_k|)`, or above
/// `2h(d_k + |u_k|)` for the first gadget. The step checks that counts change
/// only at `u_k` (by one) and at fresh sums (to one), and that the resulting
/// state still meets every bound.
pub fn fundrep_step<T: Int>(s: FundRepState<T>, f: &TargetFn<T>) -> Result<FundRepState<T>> {
    let k = s.k() + 1;
    let u = Schedule::new(f)
        .nth(s.k())
        .ok_or_else(|| Error::internal("schedule ended"))?;
    let mut next = s;
    next.schedule.push(u.clone());
    let need = next.occurrences(&u);
    if next.count(&u) >= need {
        next.history.push(FundRepStep { k, u, gadget: None });
        check_invariants(&next, f)?;
        return Ok(next);
    }

    let h = next.h;
    let mut d = T::one();
    if let Some(z) = f.zeros().max_abs() {
        d = d.max(z);
    }
    if let Some(a) = next.set.max_abs() {
        d = d.max(scalar::scale(h, &a)?);
    }
    let spread = if next.set.is_empty() { d.clone() } else { scalar::scale(2, &d)? };
    let c = scalar::add(&scalar::scale(2 * h, &scalar::add(&spread, &u.abs())?)?, &T::one())?;
    let gadget = sidon::gadget(&GadgetParams::new(h, c.clone(), u.clone())?)?;
    if !next.set.is_disjoint(&gadget) {
        return Err(Error::internal("gadget meets A_{k-1}"));
    }

    let set = next.set.union(&gadget);
    let counts = repfn::support_counts(&set, h, RepKind::Unordered)?;
    for (n, &old) in &next.counts {
        let new = counts.get(n).copied().unwrap_or(0);
        let expect = if *n == u { old + 1 } else { old };
        if new != expect {
            return Err(Error::internal(format!("r({n}) moved from {old} to {new} at step {k}")));
        }
    }
    for (n, &new) in &counts {
        if !next.counts.contains_key(n) && new != 1 {
            return Err(Error::internal(format!("fresh sum {n} has {new} representations")));
        }
    }
    if !next.counts.contains_key(&u) && counts.get(&u) != Some(&1) {
        return Err(Error::internal(format!("{u} not injected")));
    }

    next.set = set;
    next.counts = counts;
    next.history.push(FundRepStep { k, u, gadget: Some((d, c)) });
    check_invariants(&next, f)?;
    Ok(next)
}

/// Consumes the first `k` targets of `schedule_targets(f, ·)`.
pub fn fundrep_build<T: Int>(f: &TargetFn<T>, h: usize, k: usize) -> Result<FundRepState<T>> {
    if k == 0 {
        return Err(Error::invalid("step count must be positive"));
    }
    let mut state = FundRepState::new(h)?;
    for _ in 0..k {
        state = fundrep_step(state, f)?;
    }
    Ok(state)
}

/// Brute-force audit of a state against `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundRepVerification {
    /// `r_{A_k,h}(n) <= f(n)` everywhere.
    pub upper: bool,
    /// `r_{A_k,h}(u_i) >= #{i' <= k : u_{i'} = u_i}`.
    pub lower: bool,
    pub zeros_avoided: bool,
    pub generalized_sidon: bool,
    pub fast_path_agrees: bool,
}

impl FundRepVerification {
    pub fn passed(&self) -> bool {
        self.upper && self.lower && self.zeros_avoided && self.generalized_sidon && self.fast_path_agrees
    }
}

pub fn verify_fundrep<T: Int>(s: &FundRepState<T>, f: &TargetFn<T>) -> Result<FundRepVerification> {
    let counts = oracle::enum_support(&s.set, s.h, TupleRule::Unordered)?;
    let fast = repfn::support_counts(&s.set, s.h, RepKind::Unordered)?;
    let get = |n: &T| counts.get(n).copied().unwrap_or(0);
    Ok(FundRepVerification {
        upper: counts.iter().all(|(n, &c)| f.eval(n).admits(c)),
        lower: s.schedule.iter().all(|u| get(u) >= s.occurrences(u)),
        zeros_avoided: f.zeros().iter().all(|z| get(z) == 0),
        generalized_sidon: sidon::is_generalized_sidon(&s.set, s.h - 1)?,
        fast_path_agrees: counts == fast && fast == s.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::TargetValue;
    use num_bigint::BigInt;

    fn target(default: TargetValue, o: &[(i64, TargetValue)]) -> TargetFn<BigInt> {
        TargetFn::new(default, o.iter().map(|&(n, v)| (BigInt::from(n), v)).collect()).unwrap()
    }

    #[test]
    fn first_step_example() {
        let f = target(TargetValue::Finite(1), &[]);
        let s = fundrep_build(&f, 2, 1).unwrap();
        let a: Vec<i64> = s.set().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(a, vec![-5, 5]);
        let sums: Vec<i64> = s.counts().keys().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(sums, vec![-10, 0, 10]);
        assert_eq!(s.count(&BigInt::from(0)), 1);
        let step = &s.history()[0];
        assert_eq!(step.gadget, Some((BigInt::from(1), BigInt::from(5))));
    }

    #[test]
    fn constant_one_pair_sums() {
        let f = target(TargetValue::Finite(1), &[]);
        let s = fundrep_build(&f, 2, 20).unwrap();
        for u in s.schedule() {
            assert_eq!(s.count(u), 1);
        }
        assert!(verify_fundrep(&s, &f).unwrap().passed());
    }

    #[test]
    fn constant_two_triples() {
        let f = target(TargetValue::Finite(2), &[]);
        let s = fundrep_build(&f, 3, 30).unwrap();
        assert!(s.counts().values().all(|&c| c <= 2));
        for u in s.schedule() {
            if s.schedule().iter().filter(|&x| x == u).count() == 2 {
                assert_eq!(s.count(u), 2);
            }
        }
        assert!(verify_fundrep(&s, &f).unwrap().passed());
    }

    #[test]
    fn zero_stays_out() {
        let f = target(TargetValue::Finite(1), &[(0, TargetValue::Finite(0))]);
        let mut s = FundRepState::new(2).unwrap();
        for _ in 0..20 {
            s = fundrep_step(s, &f).unwrap();
            assert_eq!(s.count(&BigInt::from(0)), 0);
        }
    }

    #[test]
    fn counts_never_decrease() {
        let f = target(TargetValue::Finite(1), &[(0, TargetValue::Infinite)]);
        let mut s = FundRepState::new(3).unwrap();
        for _ in 0..25 {
            let before = s.counts().clone();
            s = fundrep_step(s, &f).unwrap();
            for (n, c) in before {
                assert!(s.count(&n) >= c);
            }
            assert!(verify_fundrep(&s, &f).unwrap().passed());
        }
    }

    #[test]
    fn rejects_order_one() {
        let f = target(TargetValue::Finite(1), &[]);
        assert!(fundrep_build(&f, 1, 3).is_err());
        assert!(fundrep_build(&f, 2, 0).is_err());
    }
}
