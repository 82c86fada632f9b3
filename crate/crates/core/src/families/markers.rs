//! Interval-marker languages `L_n = ∪_i [a_i, a_i + n]` with `a_0 ∈ {0, 1}`
//! and `a_i = base^i` for `i ≥ 1`.

use super::StringId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Markers {
    pub base: u64,
    pub start: u64,
    table: [u64; 65],
    len: usize,
}

impl Markers {
    pub fn new(base: u64, start: u64) -> Self {
        debug_assert!(base >= 2 && start <= 1);
        let mut table = [0u64; 65];
        table[0] = start;
        let mut len = 1;
        let mut p = 1u64;
        while let Some(next) = p.checked_mul(base) {
            table[len] = next;
            len += 1;
            p = next;
        }
        Markers {
            base,
            start,
            table,
            len,
        }
    }

    /// The `i`-th marker, `None` once it leaves `u64`.
    pub fn marker(&self, i: u32) -> Option<u64> {
        let i = i as usize;
        (i < self.len).then(|| self.table[i])
    }

    /// Largest marker `≤ x`.
    pub fn floor_marker(&self, x: StringId) -> Option<u64> {
        let k = self.table[..self.len].partition_point(|&m| m <= x);
        (k > 0).then(|| self.table[k - 1])
    }

    /// Distance from `x` to the largest marker not above it.
    pub fn offset(&self, x: StringId) -> Option<u64> {
        self.floor_marker(x).map(|m| x - m)
    }

    pub fn contains(&self, n: u64, x: StringId) -> bool {
        matches!(self.offset(x), Some(o) if o <= n)
    }

    pub fn count_le(&self, n: u64, x: StringId) -> u64 {
        if x < self.start {
            return 0;
        }
        let mut total = 0u64;
        let mut i = 0;
        while let Some(a) = self.marker(i) {
            if a > x {
                break;
            }
            let next = self.marker(i + 1);
            let mut hi = a.saturating_add(n).min(x);
            if let Some(nx) = next {
                hi = hi.min(nx - 1);
            }
            total += hi - a + 1;
            i += 1;
        }
        total
    }

    pub fn nth(&self, n: u64, rank: u64) -> Option<StringId> {
        if rank == 0 {
            return None;
        }
        let mut r = rank;
        let mut i = 0;
        loop {
            let a = self.marker(i)?;
            let seg = match self.marker(i + 1) {
                Some(nx) => (nx - a).min(n.saturating_add(1)),
                None => n.saturating_add(1),
            };
            if r <= seg {
                return a.checked_add(r - 1);
            }
            r -= seg;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn brute(m: &Markers, n: u64, upto: u64) -> Vec<u64> {
        let mut v = Vec::new();
        let mut i = 0;
        while let Some(a) = m.marker(i) {
            if a > upto {
                break;
            }
            for x in a..=a + n {
                v.push(x);
            }
            i += 1;
        }
        v.sort_unstable();
        v.dedup();
        v.retain(|&x| x <= upto);
        v
    }

    #[test]
    fn matches_enumeration_of_definition() {
        for start in [0, 1] {
            for base in [2, 3, 5] {
                let m = Markers::new(base, start);
                for n in 0..12 {
                    let members = brute(&m, n, 2000);
                    for (k, &x) in members.iter().enumerate() {
                        assert_eq!(m.nth(n, k as u64 + 1), Some(x));
                        assert!(m.contains(n, x));
                        assert_eq!(m.count_le(n, x), k as u64 + 1);
                    }
                    for x in 0..2000 {
                        assert_eq!(m.contains(n, x), members.binary_search(&x).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn exhausts_at_u64_edge() {
        let m = Markers::new(3, 1);
        let total = m.count_le(1, u64::MAX);
        assert!(m.nth(1, total).is_some());
        assert!(m.nth(1, total + 1).is_none());
    }
}
