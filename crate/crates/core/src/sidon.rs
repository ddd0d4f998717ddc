//! Sidon and generalized Sidon certification, and the two-element gadget
//! `D_{c,u} = {-c, (h-1)c + u}` used to inject a target into `hA`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::repfn;
use crate::scalar::{self, Int};

/// Two distinct multisets of elements with the same sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision<T> {
    pub sum: T,
    pub left: Vec<T>,
    pub right: Vec<T>,
}

/// Visits every nondecreasing index tuple of length `r` over `n` items.
fn for_each_multiset(
    n: usize,
    r: usize,
    f: &mut impl FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    if r == 0 || n == 0 {
        return Ok(true);
    }
    let mut idx = vec![0usize; r];
    loop {
        if !f(&idx)? {
            return Ok(false);
        }
        let Some(pos) = (0..r).rev().find(|&p| idx[p] + 1 < n) else {
            return Ok(true);
        };
        let v = idx[pos] + 1;
        idx[pos..].fill(v);
    }
}

/// First collision among multisets whose sizes lie in `sizes`.
fn find_collision<T: Int>(
    set: &FiniteIntSet<T>,
    sizes: std::ops::RangeInclusive<usize>,
) -> Result<Option<Collision<T>>> {
    let elems = set.as_slice();
    let mut seen: HashMap<T, Vec<usize>> = HashMap::new();
    let mut found = None;
    for r in sizes {
        let complete = for_each_multiset(elems.len(), r, &mut |idx| {
            let mut s = T::zero();
            for &i in idx {
                s = scalar::add(&s, &elems[i])?;
            }
            if let Some(prev) = seen.get(&s) {
                found = Some(Collision {
                    sum: s,
                    left: prev.iter().map(|&i| elems[i].clone()).collect(),
                    right: idx.iter().map(|&i| elems[i].clone()).collect(),
                });
                return Ok(false);
            }
            seen.insert(s, idx.to_vec());
            Ok(true)
        })?;
        if !complete {
            break;
        }
    }
    Ok(found)
}

/// A witness that `r_{A,h}(n) >= 2` for some `n`, if any.
pub fn sidon_collision<T: Int>(set: &FiniteIntSet<T>, h: usize) -> Result<Option<Collision<T>>> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    find_collision(set, h..=h)
}

/// A witness against the generalized Sidon property of order `h`: equal
/// sums of `r` and `r'` elements, `r, r' <= h`, from different multisets.
pub fn generalized_collision<T: Int>(
    set: &FiniteIntSet<T>,
    h: usize,
) -> Result<Option<Collision<T>>> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    find_collision(set, 1..=h)
}

/// `r_{A,h}(x) <= 1` for every `x`.
pub fn is_sidon<T: Int>(set: &FiniteIntSet<T>, h: usize) -> Result<bool> {
    Ok(sidon_collision(set, h)?.is_none())
}

pub fn is_generalized_sidon<T: Int>(set: &FiniteIntSet<T>, h: usize) -> Result<bool> {
    Ok(generalized_collision(set, h)?.is_none())
}

/// Minimum distance between distinct elements of `⋃_{r=1..h} rA`.
pub fn min_gap<T: Int>(set: &FiniteIntSet<T>, h: usize) -> Result<T> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    let mut all = FiniteIntSet::new();
    for r in 1..=h {
        all = all.union(&repfn::sumset(r, set)?);
    }
    all.as_slice()
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .min()
        .ok_or(Error::Degenerate)
}

/// Parameters of `D_{c,u}`; requires `h >= 2` and `c > 2h|u|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetParams<T> {
    h: usize,
    c: T,
    u: T,
}

impl<T: Int> GadgetParams<T> {
    pub fn new(h: usize, c: T, u: T) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidGadget(format!("order {h} < 2")));
        }
        let bound = scalar::scale(2 * h, &u.abs())?;
        if c <= bound {
            return Err(Error::InvalidGadget(format!("c = {c} must exceed 2h|u| = {bound}")));
        }
        Ok(GadgetParams { h, c, u })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn u(&self) -> &T {
        &self.u
    }
}

/// Builds `{-c, (h-1)c + u}` and checks the three gadget claims: `u` lies in
/// `hD`, `D` is a generalized Sidon set of order `h`, and distinct elements
/// of `⋃ rD` are more than `c/2` apart.
pub fn gadget<T: Int>(p: &GadgetParams<T>) -> Result<FiniteIntSet<T>> {
    let high = scalar::add(&scalar::scale(p.h - 1, &p.c)?, &p.u)?;
    let d: FiniteIntSet<T> = [-p.c.clone(), high].into_iter().collect();
    if d.len() != 2 {
        return Err(Error::internal("gadget elements coincide"));
    }
    if !repfn::sumset(p.h, &d)?.contains(&p.u) {
        return Err(Error::internal(format!("u = {} not in hD", p.u)));
    }
    if let Some(col) = generalized_collision(&d, p.h)? {
        return Err(Error::internal(format!("gadget not generalized Sidon: {col:?}")));
    }
    let gap = min_gap(&d, p.h)?;
    if scalar::scale(2, &gap)? <= p.c {
        return Err(Error::internal(format!("gadget gap {gap} not above c/2")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> FiniteIntSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn sidon_examples() {
        for h in 1..6 {
            assert!(is_sidon(&set(&[-17, 40]), h).unwrap());
        }
        assert!(!is_sidon(&set(&[0, 1, 2]), 2).unwrap());
        assert!(is_sidon(&set(&[0, 1, 3, 7]), 2).unwrap());
        let col = sidon_collision(&set(&[0, 1, 2]), 2).unwrap().unwrap();
        assert_eq!(col, Collision { sum: 2, left: vec![0, 2], right: vec![1, 1] });
    }

    #[test]
    fn generalized_examples() {
        assert!(is_generalized_sidon(&set(&[-21, 26]), 2).unwrap());
        assert!(!is_generalized_sidon(&set(&[0, 1]), 2).unwrap());
        let col = generalized_collision(&set(&[0, 1]), 2).unwrap().unwrap();
        assert_eq!(col.sum, 0);
        assert!(is_generalized_sidon(&set(&[]), 3).unwrap());
    }

    #[test]
    fn gadget_examples() {
        let d = gadget(&GadgetParams::new(2, 21i64, 5).unwrap()).unwrap();
        assert_eq!(d, set(&[-21, 26]));
        assert_eq!(repfn::sumset(2, &d).unwrap(), set(&[-42, 5, 52]));
        assert_eq!(min_gap(&d, 2).unwrap(), 21);

        let d = gadget(&GadgetParams::new(2, 1i64, 0).unwrap()).unwrap();
        assert_eq!(d, set(&[-1, 1]));
        assert_eq!(repfn::sumset(2, &d).unwrap(), set(&[-2, 0, 2]));

        let d = gadget(&GadgetParams::new(3, 7i64, 1).unwrap()).unwrap();
        assert_eq!(d, set(&[-7, 15]));
        assert_eq!(repfn::sumset(3, &d).unwrap(), set(&[-21, 1, 23, 45]));
        assert!(2 * min_gap(&d, 3).unwrap() > 7);
    }

    #[test]
    fn gadget_rejects_small_c() {
        assert!(matches!(GadgetParams::new(2, 20i64, 5), Err(Error::InvalidGadget(_))));
        assert!(matches!(GadgetParams::new(1, 100i64, 1), Err(Error::InvalidGadget(_))));
        assert!(matches!(GadgetParams::new(2, 0i64, 0), Err(Error::InvalidGadget(_))));
    }

    #[test]
    fn min_gap_examples() {
        assert_eq!(min_gap(&set(&[0, 1]), 1).unwrap(), 1);
        assert_eq!(min_gap(&set(&[0]), 2), Err(Error::Degenerate));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn gadget_claims(h in 2usize..=5, u in -50i64..=50, extra in 1i64..500) {
            let c = 2 * h as i64 * u.abs() + extra;
            let p = GadgetParams::new(h, c, u).unwrap();
            let d = gadget(&p).unwrap();
            prop_assert!(repfn::sumset(h, &d).unwrap().contains(&u));
            prop_assert!(is_generalized_sidon(&d, h).unwrap());
            prop_assert!(2 * min_gap(&d, h).unwrap() > c);
        }

        #[test]
        fn sidon_is_downward_closed(v in proptest::collection::vec(-60i64..60, 0..8), h in 1usize..5) {
            let a: FiniteIntSet<i64> = v.into_iter().collect();
            if is_sidon(&a, h).unwrap() {
                for lower in 1..h {
                    prop_assert!(is_sidon(&a, lower).unwrap());
                }
            }
            if is_generalized_sidon(&a, h).unwrap() {
                prop_assert!(is_sidon(&a, h).unwrap());
            }
        }

        #[test]
        fn sidon_matches_max_count(v in proptest::collection::vec(-40i64..40, 0..9), h in 1usize..4) {
            let a: FiniteIntSet<i64> = v.into_iter().collect();
            let counts = repfn::support_counts(&a, h, repfn::RepKind::Unordered).unwrap();
            let max = counts.values().copied().max().unwrap_or(0);
            prop_assert_eq!(is_sidon(&a, h).unwrap(), max <= 1);
        }
    }
}
