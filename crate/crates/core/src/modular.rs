//! Representation functions in `Z/mZ` and a bounded-representation basis
//! search.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A subset of `Z/mZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    m: u64,
    members: Vec<u64>,
}

impl ResidueSet {
    /// Members must lie in `[0, m)`; duplicates are merged.
    pub fn new(m: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let mut members: Vec<u64> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|&&a| a >= m) {
            return Err(Error::invalid(format!("residue {bad} not below m = {m}")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(ResidueSet { m, members })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }
}

/// `r_{A,h}(x)` for `x = 0, …, m-1`: unordered `h`-multisets of members
/// summing to `x` modulo `m`.
pub fn rep_mod(a: &ResidueSet, h: usize) -> Result<Vec<u64>> {
    if h == 0 {
        return Err(Error::invalid("order h must be positive"));
    }
    let m = a.m as usize;
    let mut layers = vec![vec![0u64; m]; h + 1];
    layers[0][0] = 1;
    for &x in &a.members {
        let x = x as usize;
        for j in 1..=h {
            let (below, above) = layers.split_at_mut(j);
            for (r, &c) in below[j - 1].iter().enumerate() {
                if c > 0 {
                    let slot = &mut above[0][(r + x) % m];
                    *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
                }
            }
        }
    }
    Ok(layers.swap_remove(h))
}

/// Every residue has a representation.
pub fn is_basis_mod(a: &ResidueSet, h: usize) -> Result<bool> {
    Ok(rep_mod(a, h)?.iter().all(|&c| c >= 1))
}

fn score(counts: &[u64], bound: u64) -> (usize, u64) {
    let uncovered = counts.iter().filter(|&&c| c == 0).count();
    let excess = counts.iter().map(|&c| c.saturating_sub(bound)).sum();
    (uncovered, excess)
}

/// Best-effort search for a basis of order `h` of `Z/mZ` with every count at
/// most `bound`.
///
/// Each restart grows a set greedily (the addition leaving the fewest
/// uncovered residues without exceeding `bound`), then applies random
/// swap moves that do not make the score worse. `budget` caps the total
/// number of candidate evaluations. `None` only means the budget ran out.
pub fn search_bounded_basis(
    m: u64,
    h: usize,
    bound: u64,
    budget: u64,
    seed: u64,
) -> Result<Option<ResidueSet>> {
    if m == 0 || bound == 0 || h == 0 {
        return Err(Error::invalid("m, h and the bound must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0u64;
    let all: Vec<u64> = (0..m).collect();
    let eval = |set: &[u64], spent: &mut u64| -> Result<(usize, u64)> {
        *spent += 1;
        let counts = rep_mod(&ResidueSet::new(m, set.iter().copied())?, h)?;
        Ok(score(&counts, bound))
    };

    while spent < budget {
        let mut set: Vec<u64> = Vec::new();
        let mut current = eval(&set, &mut spent)?;
        // greedy growth
        loop {
            let mut order = all.clone();
            order.shuffle(&mut rng);
            let mut best: Option<(u64, (usize, u64))> = None;
            for &x in &order {
                if set.contains(&x) || spent >= budget {
                    continue;
                }
                set.push(x);
                let s = eval(&set, &mut spent)?;
                set.pop();
                if s.1 == 0 && s.0 < current.0 && best.is_none_or(|(_, b)| s < b) {
                    best = Some((x, s));
                }
            }
            match best {
                Some((x, s)) => {
                    set.push(x);
                    current = s;
                }
                None => break,
            }
        }
        // local moves: swap one member for a non-member
        let mut stale = 0;
        while current != (0, 0) && spent < budget && stale < 4 * m as usize {
            let out = if set.is_empty() { None } else { Some(rng.gen_range(0..set.len())) };
            let inn = all[rng.gen_range(0..all.len())];
            if set.contains(&inn) {
                stale += 1;
                continue;
            }
            let mut trial = set.clone();
            match out {
                Some(i) if rng.gen_bool(0.7) => trial[i] = inn,
                _ => trial.push(inn),
            }
            let s = eval(&trial, &mut spent)?;
            if s <= current {
                stale = if s < current { 0 } else { stale + 1 };
                set = trial;
                current = s;
            } else {
                stale += 1;
            }
        }
        if current == (0, 0) {
            let found = ResidueSet::new(m, set)?;
            let counts = rep_mod(&found, h)?;
            if counts.iter().any(|&c| c == 0 || c > bound) {
                return Err(Error::internal("search returned an invalid witness"));
            }
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn rep_mod_examples() {
        let a = ResidueSet::new(5, [0, 1, 2]).unwrap();
        assert_eq!(rep_mod(&a, 2).unwrap(), vec![1, 1, 2, 1, 1]);
        assert!(is_basis_mod(&a, 2).unwrap());
        assert!(!is_basis_mod(&ResidueSet::new(5, [0]).unwrap(), 2).unwrap());
        assert!(is_basis_mod(&ResidueSet::new(1, [0]).unwrap(), 2).unwrap());
        assert_eq!(rep_mod(&ResidueSet::new(4, []).unwrap(), 2).unwrap(), vec![0; 4]);
        assert!(ResidueSet::new(4, [4]).is_err());
    }

    #[test]
    fn rep_mod_matches_enumeration() {
        for m in 1..=30u64 {
            let full = ResidueSet::new(m, 0..m).unwrap();
            let sparse = ResidueSet::new(m, (0..m).filter(|x| (x * 7 + 3) % 5 < 2)).unwrap();
            for a in [&full, &sparse] {
                for h in 1..=3 {
                    let fast = rep_mod(a, h).unwrap();
                    let slow = oracle::enum_unordered_mod(m, a.members(), h).unwrap();
                    assert_eq!(fast, slow, "m={m} h={h} A={:?}", a.members());
                }
            }
        }
    }

    #[test]
    fn search_finds_small_witnesses() {
        let w = search_bounded_basis(5, 2, 2, 10_000, 1).unwrap().unwrap();
        let counts = rep_mod(&w, 2).unwrap();
        assert!(counts.iter().all(|&c| (1..=2).contains(&c)));
        assert_eq!(search_bounded_basis(5, 2, 2, 10_000, 1).unwrap(), Some(w));
        let w = search_bounded_basis(1, 2, 1, 100, 1).unwrap().unwrap();
        assert_eq!(w.members(), &[0]);
    }

    #[test]
    fn perfect_basis_mod_forty_is_not_found() {
        // exactly one representation everywhere needs k(k+1)/2 = 40
        assert_eq!(search_bounded_basis(40, 2, 1, 20_000, 9).unwrap(), None);
    }
}
