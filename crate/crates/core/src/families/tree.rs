//! Recursive tree families built by composing marker enumerations.
//!
//! A path `(p_1, …, p_m)` names the language `φ_{p_1}(φ_{p_2}(… φ_{p_m}(ℕ₊)))`
//! where `φ_p` is the increasing enumeration of the marker language `M_p`.
//! Index 0 is the root `ℕ₊`. Other indices enumerate paths of length
//! `1..=depth` in shells: shell `s` holds the paths whose largest entry is
//! `s`, ordered by length and then lexicographically, so the first
//! `Σ_m s^m` indices are exactly the paths with all entries `≤ s`.

use alloc::vec::Vec;

use super::markers::Markers;
use super::{Relation, StringId};

#[derive(Clone, Debug)]
pub(crate) struct Tree {
    pub depth: u32,
    pub markers: Markers,
}

fn pow(s: u64, e: u32) -> u64 {
    s.saturating_pow(e)
}

impl Tree {
    pub fn new(depth: u32, base: u64) -> Self {
        Tree {
            depth,
            markers: Markers::new(base, 1),
        }
    }

    /// Number of non-root paths with all entries `≤ s`.
    fn box_size(&self, s: u64) -> u64 {
        (1..=self.depth)
            .map(|m| pow(s, m))
            .fold(0u64, |a, b| a.saturating_add(b))
    }

    pub fn path_of(&self, index: u64) -> Vec<u64> {
        if index == 0 {
            return Vec::new();
        }
        let mut s = 1u64;
        while self.box_size(s) < index {
            s += 1;
        }
        let mut r = index - self.box_size(s - 1) - 1;
        let mut m = 1;
        loop {
            let c = pow(s, m) - pow(s - 1, m);
            if r < c {
                break;
            }
            r -= c;
            m += 1;
        }
        let mut path = Vec::with_capacity(m as usize);
        let mut has_s = false;
        for pos in 0..m {
            let rem = m - pos - 1;
            for v in 1..=s {
                let c = if has_s || v == s {
                    pow(s, rem)
                } else {
                    pow(s, rem) - pow(s - 1, rem)
                };
                if r < c {
                    path.push(v);
                    has_s |= v == s;
                    break;
                }
                r -= c;
            }
        }
        path
    }

    pub fn index_of(&self, path: &[u64]) -> u64 {
        if path.is_empty() {
            return 0;
        }
        let s = *path.iter().max().expect("nonempty");
        let m = path.len() as u32;
        let mut idx = self.box_size(s - 1) + 1;
        for mm in 1..m {
            idx += pow(s, mm) - pow(s - 1, mm);
        }
        let mut has_s = false;
        for (pos, &p) in path.iter().enumerate() {
            let rem = m - pos as u32 - 1;
            for _ in 1..p {
                idx += if has_s {
                    pow(s, rem)
                } else {
                    pow(s, rem) - pow(s - 1, rem)
                };
            }
            has_s |= p == s;
        }
        idx
    }

    pub fn path_valid(&self, path: &[u64]) -> bool {
        path.len() <= self.depth as usize && path.iter().all(|&p| p >= 1)
    }

    pub fn contains(&self, path: &[u64], x: StringId) -> bool {
        if x == 0 {
            return false;
        }
        let mut y = x;
        for &p in path {
            if !self.markers.contains(p, y) {
                return false;
            }
            y = self.markers.count_le(p, y);
        }
        true
    }

    pub fn count_le(&self, path: &[u64], x: StringId) -> u64 {
        let mut c = x;
        for &p in path {
            c = self.markers.count_le(p, c);
        }
        c
    }

    pub fn nth(&self, path: &[u64], n: u64) -> Option<StringId> {
        if n == 0 {
            return None;
        }
        let mut x = n;
        for &p in path.iter().rev() {
            x = self.markers.nth(p, x)?;
        }
        Some(x)
    }

    /// Exact relation over the representable universe `[0, 2^64)`.
    pub fn relation(&self, a: &[u64], b: &[u64]) -> Relation {
        if a == b {
            return Relation::Equal;
        }
        if a.is_empty() {
            return Relation::ProperSuperset;
        }
        if b.is_empty() {
            return Relation::ProperSubset;
        }
        // φ_p is an order embedding, so a shared head can be peeled off
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        if common > 0 {
            return self.relation(&a[common..], &b[common..]);
        }
        if a.len() == 1 && b.len() == 1 {
            return if a[0] < b[0] {
                Relation::ProperSubset
            } else {
                Relation::ProperSuperset
            };
        }
        // everything under φ_p lies in M_p, and M_p ⊊ M_q for p < q
        if a[0] < b[0] && b.len() == 1 {
            return Relation::ProperSubset;
        }
        if b[0] < a[0] && a.len() == 1 {
            return Relation::ProperSuperset;
        }
        let ca = self.count_le(a, u64::MAX);
        let cb = self.count_le(b, u64::MAX);
        let (small, large, flipped) = if ca <= cb {
            (a, b, false)
        } else {
            (b, a, true)
        };
        let csmall = ca.min(cb);
        let inside = (1..=csmall).all(|r| match self.nth(small, r) {
            Some(x) => self.contains(large, x),
            None => true,
        });
        let rel = match (inside, ca == cb) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::ProperSubset,
            _ => Relation::Incomparable,
        };
        if flipped {
            rel.mirror()
        } else {
            rel
        }
    }
}
