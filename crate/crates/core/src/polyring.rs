//! Dense Laurent polynomials with exact integer coefficients.
//!
//! `G_A(z) = Σ_{a∈A} z^a` turns sumset counting into polynomial powers, and
//! [`Poly::hth_root_01`] inverts `G ↦ G^h` when a 0/1 root exists.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::scalar::Int;

/// `Σ coeffs[i] z^(offset + i)`, normalized so the first and last stored
/// coefficients are nonzero. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    offset: i64,
    coeffs: Vec<C>,
}

impl<C: Int> Poly<C> {
    pub fn zero() -> Self {
        Poly { offset: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn monomial(c: C, k: i64) -> Self {
        Self::from_coeffs(k, vec![c])
    }

    /// Builds `Σ coeffs[i] z^(offset+i)` and normalizes it.
    pub fn from_coeffs(offset: i64, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Poly { offset: offset + lead as i64, coeffs }
    }

    /// The generating function `G_A(z)`.
    pub fn from_set<T: Int>(set: &FiniteIntSet<T>) -> Result<Self> {
        let (Some(lo), Some(hi)) = (set.min(), set.max()) else {
            return Ok(Self::zero());
        };
        let lo = lo.to_i64().ok_or(Error::Overflow)?;
        let hi = hi.to_i64().ok_or(Error::Overflow)?;
        let span = hi.checked_sub(lo).ok_or(Error::Overflow)?;
        let span = usize::try_from(span).map_err(|_| Error::WindowTooLarge)?;
        let mut coeffs = vec![C::zero(); span + 1];
        for a in set {
            let k = a.to_i64().ok_or(Error::Overflow)?;
            coeffs[(k - lo) as usize] = C::one();
        }
        Ok(Poly { offset: lo, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> C {
        k.checked_sub(self.offset)
            .and_then(|i| usize::try_from(i).ok())
            .and_then(|i| self.coeffs.get(i))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`, by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    pub fn pow(&self, h: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = h;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `p(z) ↦ p(z²)`.
    pub fn substitute_square(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); 2 * self.coeffs.len() - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Poly { offset: 2 * self.offset, coeffs }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_coeffs(self.offset, self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Divides every coefficient by `k`, failing unless all divisions are exact.
    pub fn div_exact(&self, k: &C) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(k);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::invalid(format!("coefficient {c} not divisible by {k}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(self.offset, coeffs))
    }

    /// Recovers the unique finite set `A` with `G_A(z)^h = self`.
    ///
    /// Writes the root as `z^a0 (1 + g_1 z + g_2 z² + …)` and solves the
    /// coefficients in order from `g·G' = h·g'·G`, rejecting any `g_n` outside
    /// `{0, 1}`. The candidate is then re-powered and compared exactly.
    pub fn hth_root_01(&self, h: usize) -> Result<FiniteIntSet<i64>> {
        let no_root = |reason: String| Error::NoRoot { h, reason };
        if h == 0 {
            return Err(Error::invalid("root order must be positive"));
        }
        if self.is_zero() {
            return Err(Error::invalid("zero polynomial has no set root"));
        }
        if self.coeffs.iter().any(|c| c.is_negative()) {
            return Err(Error::invalid("coefficients must be nonnegative"));
        }
        let hh = h as i64;
        if self.offset.rem_euclid(hh) != 0 {
            return Err(no_root(format!("lowest exponent {} not divisible by h", self.offset)));
        }
        if !self.coeffs[0].is_one() {
            return Err(no_root(format!("lowest coefficient {} is not 1", self.coeffs[0])));
        }
        let span = self.coeffs.len() - 1;
        if span % h != 0 {
            return Err(no_root(format!("exponent span {span} not divisible by h")));
        }
        let root_span = span / h;
        let base = self.offset / hh;
        let h_c = C::from_usize(h).ok_or(Error::Overflow)?;
        let mut ones: Vec<usize> = vec![0];
        for n in 1..=root_span {
            let mut acc = C::zero();
            for &k in &ones {
                let w = n as i64 - k as i64 - hh * k as i64;
                let w = C::from_i64(w).ok_or(Error::Overflow)?;
                acc = acc + w * self.coeffs[n - k].clone();
            }
            let denom = h_c.clone() * C::from_usize(n).ok_or(Error::Overflow)?;
            let (g, r) = acc.div_rem(&denom);
            if !r.is_zero() {
                return Err(no_root(format!("coefficient of z^{n} in root is not an integer")));
            }
            if g.is_one() {
                ones.push(n);
            } else if !g.is_zero() {
                return Err(no_root(format!("coefficient {g} of z^{n} in root is not 0/1")));
            }
        }
        let root: FiniteIntSet<i64> = ones.iter().map(|&k| base + k as i64).collect();
        let check: Poly<C> = Poly::from_set(&root)?;
        if &check.pow(h as u32) != self {
            return Err(no_root("candidate root does not reproduce the input".into()));
        }
        Ok(root)
    }
}

impl<C: Int> Add for &Poly<C> {
    type Output = Poly<C>;

    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.degree().unwrap().max(rhs.degree().unwrap());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::from_coeffs(lo, coeffs)
    }
}

impl<C: Int> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly { offset: self.offset, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<C: Int> Sub for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self + &(-rhs)
    }
}

impl<C: Int> Mul for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Poly::from_coeffs(self.offset + rhs.offset, coeffs)
    }
}

impl<C: Int> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            match (i, c.is_negative()) {
                (0, _) => write!(f, "{c}*z^{k}")?,
                (_, true) => write!(f, " - {}*z^{k}", c.abs())?,
                (_, false) => write!(f, " + {c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<C: Int> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = Poly<BigInt>;

    fn p(offset: i64, c: &[i64]) -> P {
        Poly::from_coeffs(offset, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn set(v: &[i64]) -> FiniteIntSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn from_set_examples() {
        assert_eq!(P::from_set(&set(&[0, 1])).unwrap(), p(0, &[1, 1]));
        assert!(P::from_set(&set(&[])).unwrap().is_zero());
        let g = P::from_set(&set(&[-4, 0, 1, 3])).unwrap();
        assert_eq!(g, p(-4, &[1, 0, 0, 0, 1, 1, 0, 1]));
        assert_eq!(g.to_string(), "1*z^-4 + 1*z^0 + 1*z^1 + 1*z^3");
    }

    #[test]
    fn normalization_strips_zeros() {
        let q = p(-2, &[0, 0, 3, 0, -1, 0]);
        assert_eq!(q.low_degree(), Some(0));
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.to_string(), "3*z^0 - 1*z^2");
        assert!(p(5, &[0, 0]).is_zero());
    }

    #[test]
    fn pow_and_substitution() {
        let one_plus_z = p(0, &[1, 1]);
        assert_eq!(one_plus_z.pow(2), p(0, &[1, 2, 1]));
        assert_eq!(one_plus_z.substitute_square(), p(0, &[1, 0, 1]));
        assert_eq!(one_plus_z.pow(0), P::one());
        // 2^3 ordered triples over {0,1}, counted by their sums
        let mut counts = [0i64; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    counts[a + b + c] += 1;
                }
            }
        }
        assert_eq!(one_plus_z.pow(3), p(0, &counts));
    }

    #[test]
    fn root_examples() {
        assert_eq!(p(0, &[1, 2, 1]).hth_root_01(2).unwrap(), set(&[0, 1]));
        assert_eq!(P::one().hth_root_01(5).unwrap(), set(&[0]));
        assert!(matches!(p(0, &[1, 1]).hth_root_01(2), Err(Error::NoRoot { .. })));
        // lowest exponent odd
        assert!(matches!(p(1, &[1]).hth_root_01(2), Err(Error::NoRoot { .. })));
        // 1 + 2z + 2z^2: first root coefficient fits, re-power check fails
        assert!(matches!(p(0, &[1, 2, 2]).hth_root_01(2), Err(Error::NoRoot { .. })));
        // would need root coefficient 2
        assert!(matches!(p(0, &[1, 4, 4]).hth_root_01(2), Err(Error::NoRoot { .. })));
        assert!(P::zero().hth_root_01(2).is_err());
        assert!(p(0, &[1, -2, 1]).hth_root_01(2).is_err());
    }

    #[test]
    fn negative_exponent_root() {
        let a = set(&[-7, -3, 0, 2, 11]);
        let g = P::from_set(&a).unwrap();
        assert_eq!(g.pow(3).hth_root_01(3).unwrap(), a);
    }

    #[test]
    fn arithmetic_is_exact_at_machine_width() {
        // coefficients beyond i64 stay exact
        let g = P::from_set(&FiniteIntSet::interval(&0i64, &40)).unwrap();
        let big = g.pow(13);
        let total: BigInt = big.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigInt::from(41).pow(13));
    }

    fn poly_strategy() -> impl Strategy<Value = P> {
        (-10i64..10, proptest::collection::vec(-20i64..20, 0..8))
            .prop_map(|(o, c)| p(o, &c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn root_round_trip(
            v in proptest::collection::vec(-30i64..=30, 1..15),
            h in 2usize..=4,
        ) {
            let a: FiniteIntSet<i64> = v.into_iter().collect();
            let g = P::from_set(&a).unwrap();
            prop_assert_eq!(g.pow(h as u32).hth_root_01(h).unwrap(), a);
        }
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() && !b.is_zero() {
                let ab = &a * &b;
                prop_assert_eq!(ab.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
                prop_assert_eq!(ab.low_degree().unwrap(), a.low_degree().unwrap() + b.low_degree().unwrap());
            }
        }

        #[test]
        fn pow_is_repeated_mul(a in poly_strategy(), h in 0u32..5) {
            let mut folded = P::one();
            for _ in 0..h {
                folded = &folded * &a;
            }
            prop_assert_eq!(a.pow(h), folded);
        }
    }
}
