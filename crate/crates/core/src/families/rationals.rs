//! Rationals in `[0, 1]` encoded as string ids.
//!
//! Reduced fractions are listed diagonally by denominator and then
//! numerator: `0/1, 1/1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, …`. The id of a
//! fraction is its position in that list, so the universe is bounded by the
//! largest denominator kept in the table.

use alloc::vec::Vec;
use num_integer::Integer;

use super::{Rational, StringId};

#[derive(Clone, Debug)]
pub(crate) struct Rationals {
    pub tau: Rational,
    fracs: Vec<(u32, u32)>,
    /// `low_before[x]` = number of ids `< x` whose value is `≤ tau`.
    low_before: Vec<u32>,
}

impl Rationals {
    pub fn new(tau: Rational, max_den: u32) -> Self {
        let mut fracs = Vec::new();
        fracs.push((0, 1));
        for q in 1..=max_den {
            for p in 1..=q {
                if p.gcd(&q) == 1 {
                    fracs.push((p, q));
                }
            }
        }
        let mut low_before = Vec::with_capacity(fracs.len() + 1);
        low_before.push(0u32);
        let mut acc = 0u32;
        for &(p, q) in &fracs {
            if Rational::new(p as u64, q as u64) <= tau {
                acc += 1;
            }
            low_before.push(acc);
        }
        Rationals {
            tau,
            fracs,
            low_before,
        }
    }

    pub fn bound(&self) -> u64 {
        self.fracs.len() as u64
    }

    pub fn value(&self, x: StringId) -> Option<(u32, u32)> {
        self.fracs.get(x as usize).copied()
    }

    pub fn id_of(&self, p: u32, q: u32) -> Option<StringId> {
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        self.fracs
            .iter()
            .position(|&f| f == (p, q))
            .map(|i| i as u64)
    }

    pub fn is_low(&self, x: StringId) -> bool {
        let i = x as usize;
        self.low_before[i + 1] > self.low_before[i]
    }

    fn clamp(&self, x: StringId) -> Option<usize> {
        if self.fracs.is_empty() {
            None
        } else {
            Some((x.min(self.bound() - 1)) as usize)
        }
    }

    /// Number of ids `≤ x` with value `≤ tau`.
    pub fn low_le(&self, x: StringId) -> u64 {
        self.clamp(x).map_or(0, |i| self.low_before[i + 1] as u64)
    }

    /// Number of ids `≤ x` with value `> tau`.
    pub fn high_le(&self, x: StringId) -> u64 {
        self.clamp(x)
            .map_or(0, |i| (i as u64 + 1) - self.low_before[i + 1] as u64)
    }

    /// Language `i`: every value `≤ tau` plus the first `i` values above it.
    /// `i = None` is the whole universe.
    pub fn contains(&self, i: Option<u64>, x: StringId) -> bool {
        if x >= self.bound() {
            return false;
        }
        match i {
            None => true,
            Some(i) => self.is_low(x) || self.high_le(x) <= i,
        }
    }

    pub fn count_le(&self, i: Option<u64>, x: StringId) -> u64 {
        match i {
            None => self.clamp(x).map_or(0, |c| c as u64 + 1),
            Some(i) => self.low_le(x) + self.high_le(x).min(i),
        }
    }

    /// Fixing index of `x` in the tower `L_1 ⊊ L_2 ⊊ …`.
    pub fn fix(&self, x: StringId) -> Option<u64> {
        if x >= self.bound() {
            None
        } else if self.is_low(x) {
            Some(1)
        } else {
            Some(self.high_le(x).max(1))
        }
    }
}
