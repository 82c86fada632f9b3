//! Consistency and strictly critical chains.
//!
//! A consistent language `L_n` is strictly critical at step `t` when it is a
//! proper subset of every consistent `L_i` with `i < n`. Only the first
//! `H(t) = max(t, 64)` languages of the listing are scanned.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::families::{FamilyHandle, LanguageIndex, Relation, StringId};

pub const MIN_SCAN: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("string {0} was already enumerated")]
    Duplicate(StringId),
}

/// Strings seen so far, in arrival order.
#[derive(Clone, Debug, Default)]
pub struct Sample {
    strings: Vec<StringId>,
    set: BTreeSet<StringId>,
}

impl Sample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_strings(strings: &[StringId]) -> Result<Self, SampleError> {
        let mut s = Self::new();
        for &w in strings {
            s.push(w)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, w: StringId) -> Result<(), SampleError> {
        if !self.set.insert(w) {
            return Err(SampleError::Duplicate(w));
        }
        self.strings.push(w);
        Ok(())
    }

    /// Current step: the number of strings seen.
    pub fn t(&self) -> u64 {
        self.strings.len() as u64
    }

    pub fn strings(&self) -> &[StringId] {
        &self.strings
    }

    pub fn as_set(&self) -> &BTreeSet<StringId> {
        &self.set
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// `S_t ⊆ L_i`.
pub fn consistent(family: &FamilyHandle, i: LanguageIndex, sample: &Sample) -> bool {
    sample.strings.iter().all(|&w| family.contains(i, w))
}

/// Inclusive index range scanned at step `t`.
pub fn scan_range(family: &FamilyHandle, t: u64) -> (LanguageIndex, LanguageIndex) {
    let first = family.first_index();
    let mut last = first + t.max(MIN_SCAN) - 1;
    if let Some(l) = family.last_index() {
        last = last.min(l);
    }
    (first, last)
}

/// Descending chain `c_t(1), c_t(2), …` of strictly critical indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CriticalChain {
    /// `entries[j-1] = c_t(j)`.
    pub entries: Vec<LanguageIndex>,
    /// Last scanned index.
    pub horizon: LanguageIndex,
    /// The last entry sits at the scan boundary, so the chain may continue.
    pub truncated: bool,
}

impl CriticalChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `c_t(j)` for a 1-based position.
    pub fn at(&self, j: usize) -> LanguageIndex {
        self.entries[j - 1]
    }

    /// 1-based position of an index in the chain.
    pub fn position_of(&self, i: LanguageIndex) -> Option<usize> {
        self.entries.binary_search(&i).ok().map(|p| p + 1)
    }

    /// `(position, index)` pairs.
    pub fn positioned(&self) -> impl Iterator<Item = (usize, LanguageIndex)> + '_ {
        self.entries.iter().enumerate().map(|(p, &c)| (p + 1, c))
    }
}

/// Reference computation straight from the definition.
pub fn critical_chain(family: &FamilyHandle, sample: &Sample, t: u64) -> CriticalChain {
    let (first, last) = scan_range(family, t);
    let alive: Vec<LanguageIndex> = (first..=last)
        .filter(|&i| consistent(family, i, sample))
        .collect();
    let mut entries = Vec::new();
    for (k, &n) in alive.iter().enumerate() {
        if alive[..k]
            .iter()
            .all(|&i| family.relation(n, i) == Relation::ProperSubset)
        {
            entries.push(n);
        }
    }
    let truncated = entries.last() == Some(&last);
    CriticalChain {
        entries,
        horizon: last,
        truncated,
    }
}

/// `h_t`: the largest position `j` with `c_t(j) ≤ t`, or 1 when none exists.
pub fn h_index(chain: &CriticalChain, t: u64) -> usize {
    chain
        .entries
        .iter()
        .rposition(|&c| c <= t)
        .map_or(1, |p| p + 1)
}

/// Smallest index whose language equals `L_k`.
pub fn first_equal_index(family: &FamilyHandle, k: LanguageIndex) -> LanguageIndex {
    (family.first_index()..k)
        .find(|&i| family.relation(i, k) == Relation::Equal)
        .unwrap_or(k)
}

/// Incremental chain computation over a growing sample.
///
/// Keeps the consistent indices of the scanned prefix, dropping those that
/// miss each new string, and rebuilds the chain from them. A consistent `n`
/// is critical iff it is a proper subset of the last critical entry and of
/// every consistent index after that entry.
#[derive(Clone, Debug)]
pub struct ChainTracker<'f> {
    family: &'f FamilyHandle,
    sample: Sample,
    alive: Vec<LanguageIndex>,
    scanned: LanguageIndex,
    started: bool,
    chain: CriticalChain,
}

impl<'f> ChainTracker<'f> {
    pub fn new(family: &'f FamilyHandle) -> Self {
        ChainTracker {
            family,
            sample: Sample::new(),
            alive: Vec::new(),
            scanned: family.first_index(),
            started: false,
            chain: CriticalChain::default(),
        }
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn chain(&self) -> &CriticalChain {
        &self.chain
    }

    /// Consistent indices within the scanned prefix.
    pub fn consistent_indices(&self) -> &[LanguageIndex] {
        &self.alive
    }

    /// Adds `w_t` and returns the chain at step `t`.
    pub fn observe(&mut self, w: StringId) -> Result<&CriticalChain, SampleError> {
        self.sample.push(w)?;
        let family = self.family;
        self.alive.retain(|&i| family.contains(i, w));
        let (first, last) = scan_range(family, self.sample.t());
        let mut next = if self.started {
            self.scanned + 1
        } else {
            first
        };
        while next <= last {
            if consistent(family, next, &self.sample) {
                self.alive.push(next);
            }
            next += 1;
        }
        self.started = true;
        self.scanned = last;
        self.rebuild(last);
        Ok(&self.chain)
    }

    fn rebuild(&mut self, last: LanguageIndex) {
        let f = self.family;
        let mut entries: Vec<LanguageIndex> = Vec::new();
        let mut gap: Vec<LanguageIndex> = Vec::new();
        for &n in &self.alive {
            let critical = match entries.last() {
                None => true,
                Some(&c) => {
                    f.relation(n, c) == Relation::ProperSubset
                        && gap
                            .iter()
                            .all(|&g| f.relation(n, g) == Relation::ProperSubset)
                }
            };
            if critical {
                entries.push(n);
                gap.clear();
            } else {
                gap.push(n);
            }
        }
        let truncated = entries.last() == Some(&last);
        self.chain = CriticalChain {
            entries,
            horizon: last,
            truncated,
        };
    }
}
