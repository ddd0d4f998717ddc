use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::intset::FiniteIntSet;
use crate::scalar::{self, Int};

/// A value of `f : Z -> N0 ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetValue {
    Finite(u64),
    Infinite,
}

impl TargetValue {
    pub fn is_zero(self) -> bool {
        self == TargetValue::Finite(0)
    }

    /// `count <= self`.
    pub fn admits(self, count: u64) -> bool {
        match self {
            TargetValue::Finite(v) => count <= v,
            TargetValue::Infinite => true,
        }
    }
}

impl fmt::Display for TargetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetValue::Finite(v) => write!(f, "{v}"),
            TargetValue::Infinite => write!(f, "inf"),
        }
    }
}

/// A target function with finitely many zeros: a nonzero default plus a
/// finite table of overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetFn<T> {
    default: TargetValue,
    overrides: BTreeMap<T, TargetValue>,
}

impl<T: Int> TargetFn<T> {
    pub fn new(default: TargetValue, overrides: BTreeMap<T, TargetValue>) -> Result<Self> {
        if default.is_zero() {
            return Err(Error::invalid("default value 0 gives an infinite zero set"));
        }
        Ok(TargetFn { default, overrides })
    }

    pub fn constant(value: TargetValue) -> Result<Self> {
        Self::new(value, BTreeMap::new())
    }

    pub fn default_value(&self) -> TargetValue {
        self.default
    }

    pub fn overrides(&self) -> &BTreeMap<T, TargetValue> {
        &self.overrides
    }

    pub fn eval(&self, n: &T) -> TargetValue {
        self.overrides.get(n).copied().unwrap_or(self.default)
    }

    /// `f^{-1}(0)`.
    pub fn zeros(&self) -> FiniteIntSet<T> {
        self.overrides
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(n, _)| n.clone())
            .collect()
    }
}

/// `0, -1, 1, -2, 2, …`
fn zigzag<T: Int>(i: usize) -> Result<T> {
    let i = i as i64;
    scalar::from_i64(if i % 2 == 1 { -(i + 1) / 2 } else { i / 2 })
}

/// The target sequence `u_1, u_2, …` in which each `n` occurs `f(n)` times.
///
/// Sweep `s` visits the first `s` integers of `0, -1, 1, -2, 2, …` and emits
/// each one whose quota is not yet exhausted, once; values with `f(n) = ∞`
/// are emitted on every sweep.
#[derive(Clone, Debug)]
pub struct Schedule<'a, T> {
    f: &'a TargetFn<T>,
    sweep: usize,
    pos: usize,
    emitted: Vec<u64>,
}

impl<'a, T: Int> Schedule<'a, T> {
    pub fn new(f: &'a TargetFn<T>) -> Self {
        Schedule { f, sweep: 1, pos: 0, emitted: Vec::new() }
    }
}

impl<T: Int> Iterator for Schedule<'_, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        loop {
            if self.pos >= self.sweep {
                self.sweep += 1;
                self.pos = 0;
            }
            let i = self.pos;
            self.pos += 1;
            if i == self.emitted.len() {
                self.emitted.push(0);
            }
            let n: T = zigzag(i).ok()?;
            let open = match self.f.eval(&n) {
                TargetValue::Infinite => true,
                TargetValue::Finite(v) => self.emitted[i] < v,
            };
            if open {
                self.emitted[i] += 1;
                return Some(n);
            }
        }
    }
}

/// The first `k` scheduled targets.
pub fn schedule_targets<T: Int>(f: &TargetFn<T>, k: usize) -> Vec<T> {
    Schedule::new(f).take(k).collect()
}
