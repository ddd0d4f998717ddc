//! Binary linear forms `Φ(x1, x2) = u1 x1 + u2 x2` and unique representation
//! bases with respect to them.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::oracle;
use crate::repfn::{RepTable, Window};
use crate::scalar::{self, Int};

/// `0 < u1 < u2`, coprime, with `u1 v1 + u2 v2 = 1` and `|v1|` minimal
/// (positive on ties).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<T> {
    u1: T,
    u2: T,
    v1: T,
    v2: T,
}

impl<T: Int> BinaryForm<T> {
    pub fn new(u1: T, u2: T) -> Result<Self> {
        if !u1.is_positive() || u1 >= u2 {
            return Err(Error::invalid(format!("need 0 < u1 < u2, got ({u1}, {u2})")));
        }
        let e = u1.extended_gcd(&u2);
        if !e.gcd.is_one() {
            return Err(Error::invalid(format!("gcd({u1}, {u2}) = {}", e.gcd)));
        }
        let r = e.x.mod_floor(&u2);
        let alt = r.clone() - u2.clone();
        let v1 = if alt.abs() < r { alt } else { r };
        let v2 = (T::one() - u1.clone() * v1.clone()) / u2.clone();
        Ok(BinaryForm { u1, u2, v1, v2 })
    }

    pub fn u1(&self) -> &T {
        &self.u1
    }

    pub fn u2(&self) -> &T {
        &self.u2
    }

    pub fn v1(&self) -> &T {
        &self.v1
    }

    pub fn v2(&self) -> &T {
        &self.v2
    }

    pub fn eval(&self, x1: &T, x2: &T) -> Result<T> {
        scalar::add(&scalar::mul(&self.u1, x1)?, &scalar::mul(&self.u2, x2)?)
    }
}

/// `Φ(A1, A2) = {u1 a1 + u2 a2}`.
pub fn image<T: Int>(phi: &BinaryForm<T>, a1: &FiniteIntSet<T>, a2: &FiniteIntSet<T>) -> Result<FiniteIntSet<T>> {
    let mut out = Vec::with_capacity(a1.len() * a2.len());
    for x in a1 {
        for y in a2 {
            out.push(phi.eval(x, y)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// `R_{A1,A2,Φ}(n)` on a window.
pub fn rep<T: Int>(
    phi: &BinaryForm<T>,
    a1: &FiniteIntSet<T>,
    a2: &FiniteIntSet<T>,
    window: &Window<T>,
) -> Result<RepTable<T>> {
    let mut counts = vec![0u64; window.len()?];
    let elems = a2.as_slice();
    for x in a1 {
        let base = scalar::mul(&phi.u1, x)?;
        // u2 y in [lo - base, hi - base]
        let y_lo = num_integer::Integer::div_ceil(&scalar::sub(window.lo(), &base)?, &phi.u2);
        let y_hi = scalar::sub(window.hi(), &base)?.div_floor(&phi.u2);
        let start = elems.partition_point(|y| y < &y_lo);
        let end = elems.partition_point(|y| y <= &y_hi).max(start);
        for y in &elems[start..end] {
            let n = scalar::add(&base, &scalar::mul(&phi.u2, y)?)?;
            counts[scalar::to_index(&(n - window.lo().clone()))?] += 1;
        }
    }
    RepTable::new(window.lo().clone(), window.hi().clone(), counts)
}

/// `R_{A,Φ}` on the whole image.
pub fn rep_support<T: Int>(phi: &BinaryForm<T>, a: &FiniteIntSet<T>) -> Result<BTreeMap<T, u64>> {
    let (Some(lo), Some(hi)) = (image_bound(phi, a, false)?, image_bound(phi, a, true)?) else {
        return Ok(BTreeMap::new());
    };
    let table = rep(phi, a, a, &Window::new(lo, hi)?)?;
    Ok(table.iter().filter(|(_, c)| *c > 0).collect())
}

fn image_bound<T: Int>(phi: &BinaryForm<T>, a: &FiniteIntSet<T>, upper: bool) -> Result<Option<T>> {
    let pick = if upper { a.max() } else { a.min() };
    pick.map(|x| phi.eval(x, x)).transpose()
}

/// `c + s t`.
#[derive(Clone, Debug)]
struct Line<T> {
    c: T,
    s: T,
}

impl<T: Int> Line<T> {
    fn at(&self, t: &T) -> Result<T> {
        scalar::add(&self.c, &scalar::mul(&self.s, t)?)
    }

    /// Every `t` with `self(t) = other(t)`; `Err` if they agree identically.
    fn meets(&self, other: &Line<T>, bad: &mut HashSet<T>) -> Result<()> {
        let ds = self.s.clone() - other.s.clone();
        let dc = other.c.clone() - self.c.clone();
        if ds.is_zero() {
            if dc.is_zero() {
                return Err(Error::internal("two new values coincide for every t"));
            }
            return Ok(());
        }
        if (dc.clone() % ds.clone()).is_zero() {
            bad.insert(dc / ds);
        }
        Ok(())
    }
}

/// `0, 1, -1, 2, -2, …`
fn zigzag<T: Int>(i: usize) -> Result<T> {
    let i = i as i64;
    scalar::from_i64(if i % 2 == 1 { (i + 1) / 2 } else { -i / 2 })
}

/// New values of `Φ(C)` other than the designated `Φ(x, y) = b`, for
/// `x = b v1 + u2 t`, `y = b v2 - u1 t`.
fn new_values<T: Int>(phi: &BinaryForm<T>, a: &FiniteIntSet<T>, b: &T) -> Result<Vec<Line<T>>> {
    let (u1, u2) = (&phi.u1, &phi.u2);
    let x0 = scalar::mul(b, &phi.v1)?;
    let y0 = scalar::mul(b, &phi.v2)?;
    let neg_u1 = -u1.clone();
    let sum = scalar::add(u1, u2)?;
    let mut out = Vec::with_capacity(4 * a.len() + 3);
    for e in a {
        let ue1 = scalar::mul(u1, e)?;
        let ue2 = scalar::mul(u2, e)?;
        out.push(Line { c: scalar::add(&ue1, &scalar::mul(u2, &x0)?)?, s: scalar::mul(u2, u2)? });
        out.push(Line { c: scalar::add(&ue1, &scalar::mul(u2, &y0)?)?, s: scalar::mul(u2, &neg_u1)? });
        out.push(Line { c: scalar::add(&scalar::mul(u1, &x0)?, &ue2)?, s: scalar::mul(u1, u2)? });
        out.push(Line { c: scalar::add(&scalar::mul(u1, &y0)?, &ue2)?, s: scalar::mul(u1, &neg_u1)? });
    }
    out.push(Line { c: scalar::mul(&sum, &x0)?, s: scalar::mul(&sum, u2)? });
    out.push(Line {
        c: phi.eval(&y0, &x0)?,
        s: scalar::sub(&scalar::mul(u2, u2)?, &scalar::mul(u1, u1)?)?,
    });
    out.push(Line { c: scalar::mul(&sum, &y0)?, s: scalar::mul(&sum, &neg_u1)? });
    Ok(out)
}

/// Adjoins `{b v1 + u2 t, b v2 - u1 t}` for the first admissible `t` in
/// `0, 1, -1, 2, -2, …`, so that `R_{C,Φ}(b)` gains one, counts on
/// `Φ(A) \ {b}` are unchanged, and every other new value of `Φ(C)` has a
/// unique representation.
///
/// Each new value is linear in `t`; the collisions that make `t`
/// inadmissible are solved for directly, and the chosen `C` is then checked
/// against a brute-force recount.
pub fn extend_once<T: Int>(phi: &BinaryForm<T>, a: &FiniteIntSet<T>, b: &T) -> Result<FiniteIntSet<T>> {
    let lines = new_values(phi, a, b)?;
    let old = oracle::enum_form(&phi.u1, &phi.u2, a, a)?;
    let mut bad: HashSet<T> = HashSet::new();
    let constant = |c: &T| Line { c: c.clone(), s: T::zero() };
    for (i, l) in lines.iter().enumerate() {
        for other in &lines[i + 1..] {
            l.meets(other, &mut bad)?;
        }
        l.meets(&constant(b), &mut bad)?;
        for n in old.keys() {
            l.meets(&constant(n), &mut bad)?;
        }
    }
    let x = Line { c: scalar::mul(b, &phi.v1)?, s: phi.u2.clone() };
    let y = Line { c: scalar::mul(b, &phi.v2)?, s: -phi.u1.clone() };
    x.meets(&y, &mut bad)?;
    for e in a {
        x.meets(&constant(e), &mut bad)?;
        y.meets(&constant(e), &mut bad)?;
    }

    let t = (0..=bad.len())
        .map(zigzag::<T>)
        .find(|t| t.as_ref().map_or(true, |t| !bad.contains(t)))
        .expect("more candidates than excluded values")?;
    let (nx, ny) = (x.at(&t)?, y.at(&t)?);
    let c = a.union(&[nx, ny].into_iter().collect());
    verify_extension(phi, a, &c, b)?;
    Ok(c)
}

/// The four-clause postcondition of [`extend_once`], by enumeration.
pub fn verify_extension<T: Int>(
    phi: &BinaryForm<T>,
    a: &FiniteIntSet<T>,
    c: &FiniteIntSet<T>,
    b: &T,
) -> Result<()> {
    let old = &oracle::enum_form(&phi.u1, &phi.u2, a, a)?;
    if c.len() != a.len() + 2 || !a.is_subset(c) {
        return Err(Error::internal("extension must add two new elements"));
    }
    let new = oracle::enum_form(&phi.u1, &phi.u2, c, c)?;
    let get = |m: &BTreeMap<T, u64>, n: &T| m.get(n).copied().unwrap_or(0);
    if get(&new, b) != get(old, b) + 1 {
        return Err(Error::internal(format!("R({b}) did not gain exactly one")));
    }
    for (n, &cnt) in &new {
        if n == b {
            continue;
        }
        let expect = if old.contains_key(n) { old[n] } else { 1 };
        if cnt != expect {
            return Err(Error::internal(format!("R({n}) = {cnt}, expected {expect}")));
        }
    }
    Ok(())
}

/// `b` with `|b| = min{|n| : n ∉ Φ(A)}`, positive first.
pub fn form_gap<T: Int>(phi: &BinaryForm<T>, a: &FiniteIntSet<T>) -> Result<T> {
    let img = image(phi, a, a)?;
    let mut i = 0usize;
    loop {
        let n: T = zigzag(i)?;
        if !img.contains(&n) {
            return Ok(n);
        }
        i += 1;
    }
}

/// `A_k` from `A_1 = {0, 1}`, each step covering the smallest missing `|n|`.
pub fn urb_form<T: Int>(phi: &BinaryForm<T>, k: usize) -> Result<FiniteIntSet<T>> {
    if k == 0 {
        return Err(Error::invalid("step count must be positive"));
    }
    let mut a: FiniteIntSet<T> = [T::zero(), T::one()].into_iter().collect();
    let counts = oracle::enum_form(&phi.u1, &phi.u2, &a, &a)?;
    if counts.len() != 4 || counts.values().any(|&c| c != 1) {
        return Err(Error::internal("Φ(A_1) must have four unique values"));
    }
    for _ in 1..k {
        let b = form_gap(phi, &a)?;
        let next = extend_once(phi, &a, &b)?;
        if next.len() != a.len() + 2 {
            return Err(Error::internal("A_{k+1} must have two more elements"));
        }
        a = next;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repfn;
    use num_bigint::BigInt;

    fn set(v: &[i64]) -> FiniteIntSet<i64> {
        v.iter().copied().collect()
    }

    fn form(u1: i64, u2: i64) -> BinaryForm<i64> {
        BinaryForm::new(u1, u2).unwrap()
    }

    #[test]
    fn bezout_is_canonical() {
        let f = form(1, 2);
        assert_eq!((f.v1, f.v2), (1, 0));
        let f = form(2, 3);
        assert_eq!((f.v1, f.v2), (-1, 1));
        let f = form(3, 5);
        assert_eq!((f.v1, f.v2), (2, -1));
        assert!(BinaryForm::new(2i64, 4).is_err());
        assert!(BinaryForm::new(3i64, 2).is_err());
        assert!(BinaryForm::new(0i64, 1).is_err());
    }

    #[test]
    fn image_examples() {
        let a = set(&[0, 1]);
        assert_eq!(image(&form(1, 2), &a, &a).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(image(&form(2, 3), &a, &a).unwrap(), set(&[0, 2, 3, 5]));
        assert!(image(&form(1, 2), &set(&[]), &a).unwrap().is_empty());
    }

    #[test]
    fn rep_examples() {
        let a = set(&[0, 1]);
        let w = Window::new(-2, 5).unwrap();
        let t = rep(&form(1, 2), &a, &a, &w).unwrap();
        assert_eq!(t.get(&3), Some(1));
        assert_eq!(t.get(&0), Some(1));
        assert!(rep(&form(1, 2), &a, &a, &Window::new(10, 20).unwrap()).unwrap().is_all_zero());
    }

    #[test]
    fn diagonal_form_is_ordered_pairs() {
        let relaxed = BinaryForm { u1: 1i64, u2: 1, v1: 1, v2: 0 };
        let a = set(&[-7, -2, 0, 3, 4, 9]);
        let w = Window::new(-20, 20).unwrap();
        assert_eq!(rep(&relaxed, &a, &a, &w).unwrap(), repfn::ordered(&a, 2, &w).unwrap());
    }

    #[test]
    fn fast_rep_matches_enumeration() {
        let f = form(3, 5);
        let a = set(&[-9, -4, 0, 1, 2, 6, 11]);
        let b = set(&[-3, 0, 5, 8]);
        let slow = oracle::enum_form(&3, &5, &a, &b).unwrap();
        let w = Window::new(-60, 60).unwrap();
        let fast = rep(&f, &a, &b, &w).unwrap();
        for (n, c) in fast.iter() {
            assert_eq!(c, slow.get(&n).copied().unwrap_or(0));
        }
    }

    #[test]
    fn extend_examples() {
        let f = form(1, 2);
        let a = set(&[0, 1]);
        let c = extend_once(&f, &a, &-1).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(rep_support(&f, &c).unwrap().get(&-1), Some(&1));

        // b already represented: it gains a second representation
        let c = extend_once(&f, &a, &3).unwrap();
        assert_eq!(rep_support(&f, &c).unwrap().get(&3), Some(&2));

        let c = extend_once(&f, &set(&[]), &0).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(rep_support(&f, &c).unwrap().get(&0), Some(&1));
    }

    #[test]
    fn first_form_step() {
        let a = urb_form(&form(1, 2), 1).unwrap();
        assert_eq!(a, set(&[0, 1]));
        assert_eq!(form_gap(&form(1, 2), &a).unwrap(), -1);
    }

    #[test]
    fn bases_for_small_forms() {
        for (u1, u2) in [(1, 2), (2, 3), (3, 5)] {
            let f = BinaryForm::new(BigInt::from(u1), BigInt::from(u2)).unwrap();
            let a = urb_form(&f, 10).unwrap();
            assert_eq!(a.len(), 20);
            let counts = rep_support(&f, &a).unwrap();
            assert!(counts.values().all(|&c| c == 1));
            let gap = form_gap(&f, &a).unwrap();
            let lim = gap.magnitude().clone();
            let mut n = BigInt::from(0);
            while n.magnitude() < &lim {
                assert_eq!(counts.get(&n), Some(&1));
                assert_eq!(counts.get(&-n.clone()), Some(&1));
                n += 1;
            }
        }
    }
}
