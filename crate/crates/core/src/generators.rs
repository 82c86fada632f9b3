//! Generation algorithms as deterministic step functions.
//!
//! Every generator sees one adversary string per step and answers with a
//! decision: an optional guessed index and a fresh output string. Outputs
//! never repeat a string used by either side.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{h_index, ChainTracker, CriticalChain, SampleError};
use crate::density::OrderedTracker;
use crate::families::{FamilyHandle, LanguageIndex, Rational, Relation, StringId};
use crate::ratio;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("no unused string is left in any candidate language at step {0}")]
    Exhausted(u64),
    #[error("level map has no entry for language {0}")]
    LevelMissing(LanguageIndex),
    #[error(
        "linear extension violates inclusion: L_{child} ⊊ L_{parent} but ℓ(child) ≥ ℓ(parent)"
    )]
    EllViolation {
        child: LanguageIndex,
        parent: LanguageIndex,
    },
    #[error("density target must lie strictly between 0 and 1")]
    BadTarget,
    #[error("unknown generator `{0}`")]
    Unknown(String),
}

/// What happened inside the generator at this step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Event {
    None,
    Rich,
    Refresh,
    Fallback {
        target: LanguageIndex,
        token: Option<u64>,
    },
}

impl Event {
    pub fn name(&self) -> &'static str {
        match self {
            Event::None => "none",
            Event::Rich => "rich",
            Event::Refresh => "refresh",
            Event::Fallback { .. } => "fallback",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecision {
    pub guess: Option<LanguageIndex>,
    pub output: StringId,
    pub event: Event,
    /// Language the output was drawn from when it differs from the guess.
    pub target: Option<LanguageIndex>,
    pub chain_len: usize,
    pub truncated: bool,
    /// Upper bound on the size of the fallback string list.
    pub s_size: u64,
}

/// Generator selection. Text form: `km`, `acc`, `lazy`, `lazy:c=9/10`,
/// `fallback-finite`, `fallback-general`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Km,
    Acc,
    Lazy { c: Rational },
    FallbackFinite,
    FallbackGeneral,
}

impl GeneratorSpec {
    pub fn default_c() -> Rational {
        Rational::new(9, 10)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Km => "km",
            GeneratorSpec::Acc => "acc",
            GeneratorSpec::Lazy { .. } => "lazy",
            GeneratorSpec::FallbackFinite => "fallback-finite",
            GeneratorSpec::FallbackGeneral => "fallback-general",
        }
    }

    /// Whether the generator needs levels or a linear extension.
    pub fn needs_levels(&self) -> bool {
        matches!(
            self,
            GeneratorSpec::FallbackFinite | GeneratorSpec::FallbackGeneral
        )
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Lazy { c } => write!(f, "lazy:c={}", ratio::format(c)),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let unknown = || GenError::Unknown(s.to_string());
        let spec = match name {
            "km" => GeneratorSpec::Km,
            "acc" => GeneratorSpec::Acc,
            "fallback-finite" => GeneratorSpec::FallbackFinite,
            "fallback-general" => GeneratorSpec::FallbackGeneral,
            "lazy" => {
                let mut c = Self::default_c();
                for kv in params.split(',').filter(|p| !p.is_empty()) {
                    match kv.split_once('=') {
                        Some(("c", v)) => c = ratio::parse(v).ok_or_else(unknown)?,
                        _ => return Err(unknown()),
                    }
                }
                if c == Rational::from_integer(0) || c >= Rational::from_integer(1) {
                    return Err(GenError::BadTarget);
                }
                return Ok(GeneratorSpec::Lazy { c });
            }
            _ => return Err(unknown()),
        };
        if !params.is_empty() {
            return Err(unknown());
        }
        Ok(spec)
    }
}

impl Serialize for GeneratorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Level values used by the fallback generators.
#[derive(Clone, Debug)]
pub enum LevelSource {
    /// The family's declared Cantor-Bendixson levels or linear extension.
    Declared,
    /// An explicit table, e.g. computed on a finite restriction.
    Table(BTreeMap<LanguageIndex, Rational>),
}

pub trait Generator {
    fn step(&mut self, w: StringId) -> Result<GeneratorDecision, GenError>;
}

/// Builds a generator over `family`.
pub fn build<'f>(
    spec: &GeneratorSpec,
    family: &'f FamilyHandle,
    levels: LevelSource,
) -> Result<alloc::boxed::Box<dyn Generator + Send + 'f>, GenError> {
    use alloc::boxed::Box;
    Ok(match spec {
        GeneratorSpec::Km => Box::new(Km {
            core: Core::new(family),
        }),
        GeneratorSpec::Acc => Box::new(Acc {
            core: Core::new(family),
        }),
        GeneratorSpec::Lazy { c } => Box::new(Lazy::new(family, *c)?),
        GeneratorSpec::FallbackFinite => {
            Box::new(Fallback::new(family, levels, FallbackMode::Finite))
        }
        GeneratorSpec::FallbackGeneral => {
            Box::new(Fallback::new(family, levels, FallbackMode::General))
        }
    })
}

/// Smallest member of `L_i` outside `used`.
pub fn element_pick(
    family: &FamilyHandle,
    i: LanguageIndex,
    used: &BTreeSet<StringId>,
) -> Option<StringId> {
    family.lang(i).iter().find(|x| !used.contains(x))
}

/// Set of strings stored as maximal runs `start → end`.
#[derive(Clone, Debug, Default)]
struct Runs {
    runs: BTreeMap<StringId, StringId>,
}

impl Runs {
    /// Last string of the run holding `x`.
    fn run_end(&self, x: StringId) -> Option<StringId> {
        self.runs
            .range(..=x)
            .next_back()
            .and_then(|(_, &e)| (e >= x).then_some(e))
    }

    fn contains(&self, x: StringId) -> bool {
        self.run_end(x).is_some()
    }

    fn insert(&mut self, x: StringId) {
        if self.contains(x) {
            return;
        }
        let mut start = x;
        let mut end = x;
        if let Some((&s, &e)) = self.runs.range(..x).next_back() {
            if e.checked_add(1) == Some(x) {
                start = s;
            }
        }
        if let Some(next) = x.checked_add(1) {
            if let Some(e) = self.runs.remove(&next) {
                end = e;
            }
        }
        self.runs.insert(start, end);
    }
}

/// State shared by all generators: chain tracking, used strings and
/// per-language enumeration cursors.
struct Core<'f> {
    family: &'f FamilyHandle,
    tracker: ChainTracker<'f>,
    prev: CriticalChain,
    used: Runs,
    max_used: Option<StringId>,
    cursors: BTreeMap<LanguageIndex, u64>,
    t: u64,
}

impl<'f> Core<'f> {
    fn new(family: &'f FamilyHandle) -> Self {
        Core {
            family,
            tracker: ChainTracker::new(family),
            prev: CriticalChain::default(),
            used: Runs::default(),
            max_used: None,
            cursors: BTreeMap::new(),
            t: 0,
        }
    }

    fn observe(&mut self, w: StringId) -> Result<(), GenError> {
        self.prev = self.tracker.chain().clone();
        self.tracker.observe(w)?;
        self.mark(w);
        self.t += 1;
        Ok(())
    }

    fn mark(&mut self, x: StringId) {
        self.used.insert(x);
        self.max_used = Some(self.max_used.map_or(x, |m| m.max(x)));
    }

    fn chain(&self) -> &CriticalChain {
        self.tracker.chain()
    }

    /// Smallest unused member of `L_i`, if one is representable.
    fn next_unused(&mut self, i: LanguageIndex) -> Option<StringId> {
        let mut r = *self.cursors.get(&i).unwrap_or(&1);
        let x = loop {
            let x = self.family.nth(i, r)?;
            match self.used.run_end(x) {
                None => break x,
                // every member of L_i up to the end of this run is used
                Some(e) => r = r.max(self.family.count_le(i, e) + 1),
            }
        };
        self.cursors.insert(i, r);
        Some(x)
    }

    /// Smallest unused member of `L_i`, widening to shallower chain entries
    /// when `L_i` is exhausted inside the representable universe.
    fn pick(&mut self, i: LanguageIndex) -> Result<(LanguageIndex, StringId), GenError> {
        if let Some(x) = self.next_unused(i) {
            return Ok((i, x));
        }
        let candidates: Vec<LanguageIndex> = self
            .chain()
            .entries
            .iter()
            .rev()
            .copied()
            .filter(|&c| c != i)
            .collect();
        for c in candidates {
            if let Some(x) = self.next_unused(c) {
                return Ok((c, x));
            }
        }
        Err(GenError::Exhausted(self.t))
    }

    /// `i_t` of the accuracy algorithm, decided from the chain at `t - 1`.
    fn acc_index(&self, w: StringId) -> LanguageIndex {
        let prev = &self.prev;
        if self.t <= 1 || prev.is_empty() {
            return self.family.first_index();
        }
        let h = h_index(prev, self.t - 1);
        let k = prev
            .entries
            .iter()
            .take_while(|&&c| self.family.contains(c, w))
            .count();
        if k == prev.len() || k == 0 {
            prev.at(h)
        } else {
            prev.at(k)
        }
    }

    fn decision(
        &self,
        guess: Option<LanguageIndex>,
        output: StringId,
        event: Event,
    ) -> GeneratorDecision {
        GeneratorDecision {
            guess,
            output,
            event,
            target: None,
            chain_len: self.chain().len(),
            truncated: self.chain().truncated,
            s_size: 0,
        }
    }
}

/// Guesses the deepest chain entry with index `≤ t`.
struct Km<'f> {
    core: Core<'f>,
}

impl Generator for Km<'_> {
    fn step(&mut self, w: StringId) -> Result<GeneratorDecision, GenError> {
        self.core.observe(w)?;
        let chain = self.core.chain();
        let i = chain.at(h_index(chain, self.core.t));
        let (from, x) = self.core.pick(i)?;
        self.core.mark(x);
        let mut d = self.core.decision(Some(i), x, Event::None);
        d.target = (from != i).then_some(from);
        Ok(d)
    }
}

/// Accurate infinitely often.
struct Acc<'f> {
    core: Core<'f>,
}

impl Generator for Acc<'_> {
    fn step(&mut self, w: StringId) -> Result<GeneratorDecision, GenError> {
        self.core.observe(w)?;
        let i = self.core.acc_index(w);
        let (from, x) = self.core.pick(i)?;
        self.core.mark(x);
        let mut d = self.core.decision(Some(i), x, Event::None);
        d.target = (from != i).then_some(from);
        Ok(d)
    }
}

#[derive(Clone, Debug)]
struct Missed {
    index: LanguageIndex,
    rich: bool,
}

/// Lazy variant of the accuracy algorithm: on a rich index it keeps
/// outputting from that language until the ordered density of all outputs
/// inside it reaches `c/2`, then refreshes.
struct Lazy<'f> {
    core: Core<'f>,
    half_c: Rational,
    prev_i: Option<LanguageIndex>,
    lazy: Option<(LanguageIndex, OrderedTracker)>,
    missed: Vec<Missed>,
    outputs: Vec<StringId>,
}

impl<'f> Lazy<'f> {
    fn new(family: &'f FamilyHandle, c: Rational) -> Result<Self, GenError> {
        if c == Rational::from_integer(0) || c >= Rational::from_integer(1) {
            return Err(GenError::BadTarget);
        }
        Ok(Lazy {
            core: Core::new(family),
            half_c: c / 2,
            prev_i: None,
            lazy: None,
            missed: Vec::new(),
            outputs: Vec::new(),
        })
    }

    fn enter(&mut self, target: LanguageIndex) {
        let tracker = OrderedTracker::seeded(self.core.family, target, &self.outputs);
        self.lazy = Some((target, tracker));
    }

    /// Latest rich entry among those maximal under inclusion.
    fn choose_rich(&self) -> Option<usize> {
        let f = self.core.family;
        let rich: Vec<usize> = (0..self.missed.len())
            .filter(|&k| self.missed[k].rich)
            .collect();
        rich.iter().rev().copied().find(|&k| {
            rich.iter().all(|&o| {
                f.relation(self.missed[k].index, self.missed[o].index) != Relation::ProperSubset
            })
        })
    }
}

impl Generator for Lazy<'_> {
    fn step(&mut self, w: StringId) -> Result<GeneratorDecision, GenError> {
        self.core.observe(w)?;
        let f = self.core.family;
        let i = self.core.acc_index(w);
        let rich = self
            .prev_i
            .is_some_and(|p| f.relation(i, p) == Relation::ProperSuperset);
        self.prev_i = Some(i);
        let mut event = Event::None;
        let source = match self.lazy.take() {
            None => {
                if rich {
                    event = Event::Rich;
                    self.missed.clear();
                    self.enter(i);
                    i
                } else {
                    i
                }
            }
            Some((target, tracker)) => {
                self.missed.push(Missed { index: i, rich });
                if tracker.reaches(self.half_c) {
                    event = Event::Refresh;
                    match self.choose_rich() {
                        Some(k) => {
                            let next = self.missed[k].index;
                            self.missed.drain(..=k);
                            self.enter(next);
                            next
                        }
                        None => {
                            self.missed.clear();
                            i
                        }
                    }
                } else {
                    self.lazy = Some((target, tracker));
                    target
                }
            }
        };
        let (from, x) = self.core.pick(source)?;
        self.core.mark(x);
        self.outputs.push(x);
        if let Some((target, tracker)) = self.lazy.as_mut() {
            tracker.observe(f, *target, x);
        }
        let mut d = self.core.decision(Some(i), x, event);
        d.target = (from != i).then_some(from);
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FallbackMode {
    Finite,
    General,
}

/// Priority strings: every unused member of `target` up to `bound`, plus
/// explicit extras.
#[derive(Clone, Debug, Default)]
struct FallbackList {
    charges: Vec<(LanguageIndex, StringId)>,
    extras: BTreeSet<StringId>,
}

impl FallbackList {
    fn charge(&mut self, target: LanguageIndex, bound: StringId) {
        if let Some(c) = self.charges.iter_mut().find(|c| c.0 == target) {
            c.1 = c.1.max(bound);
        } else {
            self.charges.push((target, bound));
        }
    }

    /// Smallest live string, dropping exhausted charges and used extras.
    fn min(&mut self, core: &mut Core<'_>) -> Option<StringId> {
        let mut best: Option<StringId> = None;
        let mut k = 0;
        while k < self.charges.len() {
            let (target, bound) = self.charges[k];
            match core.next_unused(target) {
                Some(x) if x <= bound => {
                    best = Some(best.map_or(x, |b| b.min(x)));
                    k += 1;
                }
                _ => {
                    self.charges.swap_remove(k);
                }
            }
        }
        while let Some(&x) = self.extras.first() {
            if core.used.contains(x) {
                self.extras.pop_first();
            } else {
                best = Some(best.map_or(x, |b| b.min(x)));
                break;
            }
        }
        best
    }

    fn size_bound(&self, core: &Core<'_>) -> u64 {
        let f = core.family;
        let charged: u64 = self
            .charges
            .iter()
            .map(|&(target, bound)| {
                let below = core.cursors.get(&target).map_or(0, |r| r - 1);
                f.count_le(target, bound).saturating_sub(below)
            })
            .sum();
        charged + self.extras.len() as u64
    }
}

/// Fallback generators for finite rank (levels) and the general case
/// (linear extension with tokens).
struct Fallback<'f> {
    core: Core<'f>,
    levels: LevelSource,
    mode: FallbackMode,
    list: FallbackList,
    prev_ga: Option<LanguageIndex>,
    prev_ancestors: Vec<LanguageIndex>,
}

impl<'f> Fallback<'f> {
    fn new(family: &'f FamilyHandle, levels: LevelSource, mode: FallbackMode) -> Self {
        Fallback {
            core: Core::new(family),
            levels,
            mode,
            list: FallbackList::default(),
            prev_ga: None,
            prev_ancestors: Vec::new(),
        }
    }

    fn key(&self, i: LanguageIndex) -> Result<Rational, GenError> {
        let f = self.core.family;
        let v = match &self.levels {
            LevelSource::Declared => match self.mode {
                FallbackMode::Finite => f
                    .declared_level(i)
                    .map(|l| Rational::from_integer(l as u64)),
                FallbackMode::General => f.declared_ell(i),
            },
            LevelSource::Table(t) => t.get(&i).copied(),
        };
        v.ok_or(GenError::LevelMissing(i))
    }

    /// Parent of `l` in the current forest: the deepest chain entry that
    /// strictly contains `l` with a larger key.
    fn parent(&self, l: LanguageIndex) -> Result<Option<LanguageIndex>, GenError> {
        let f = self.core.family;
        let chain = self.core.chain();
        let kl = self.key(l)?;
        let qualifies = |c: LanguageIndex| -> Result<bool, GenError> {
            if f.relation(c, l) != Relation::ProperSuperset {
                return Ok(false);
            }
            let kc = self.key(c)?;
            if self.mode == FallbackMode::General && kc <= kl {
                return Err(GenError::EllViolation {
                    child: l,
                    parent: c,
                });
            }
            Ok(kc > kl)
        };
        // qualifying entries form a prefix of the chain
        let (mut lo, mut hi) = (0usize, chain.len());
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if qualifies(chain.at(mid))? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo == 0 {
            return Ok(None);
        }
        if lo == chain.len() && chain.truncated {
            // no minimum within reach: take the t-th qualifying entry
            let pos = (self.core.t as usize).min(lo);
            return Ok(Some(chain.at(pos)));
        }
        Ok(Some(chain.at(lo)))
    }

    /// `ga` followed by its ancestors in the current forest.
    fn ancestors(&self, ga: LanguageIndex) -> Result<Vec<LanguageIndex>, GenError> {
        let mut out = alloc::vec![ga];
        let mut cur = ga;
        while let Some(p) = self.parent(cur)? {
            out.push(p);
            cur = p;
        }
        Ok(out)
    }

    fn position(&self, i: LanguageIndex) -> Option<usize> {
        self.core
            .chain()
            .position_of(i)
            .or_else(|| self.core.prev.position_of(i))
    }

    fn token(&self, upper: LanguageIndex, lower: LanguageIndex) -> u64 {
        match (self.position(upper), self.position(lower)) {
            (Some(i), Some(j)) if j >= i => 2 * (j - i) as u64,
            _ => 2,
        }
    }

    /// Charges the fallback list with the unused strings of `target`.
    fn fall_back(&mut self, target: LanguageIndex, token: Option<u64>) {
        let f = self.core.family;
        let w = self.core.max_used.unwrap_or(0);
        let Some(w1) = f.next_after(target, w) else {
            // target exhausted above w: charge what exists
            self.list.charge(target, w);
            return;
        };
        match self.mode {
            FallbackMode::Finite => {
                let bound = f.next_after(target, w1).unwrap_or(w1);
                self.list.charge(target, bound);
            }
            FallbackMode::General => {
                self.list.charge(target, w1);
                let r = f.count_le(target, w1);
                for k in 1..=token.unwrap_or(0) {
                    match f.nth(target, r + k) {
                        Some(x) => {
                            self.list.extras.insert(x);
                        }
                        None => break,
                    }
                }
            }
        }
    }

    fn decide(
        &mut self,
        ga: LanguageIndex,
        ancestors: &[LanguageIndex],
    ) -> Result<Option<(LanguageIndex, Option<u64>)>, GenError> {
        let f = self.core.family;
        let Some(prev) = self.prev_ga else {
            return Ok(None);
        };
        let rel = f.relation(ga, prev);
        if rel == Relation::Equal {
            return Ok(None);
        }
        let common = || {
            ancestors
                .iter()
                .copied()
                .find(|a| self.prev_ancestors.contains(a))
        };
        match self.mode {
            FallbackMode::Finite => {
                if rel == Relation::ProperSubset && self.key(ga)? != self.key(prev)? {
                    return Ok(Some((ga, None)));
                }
                Ok(common().map(|z| (z, None)))
            }
            FallbackMode::General => {
                if rel == Relation::ProperSubset {
                    return Ok(Some((prev, Some(self.token(prev, ga)))));
                }
                if rel == Relation::ProperSuperset {
                    return Ok(Some((ga, Some(2))));
                }
                Ok(common().map(|z| (z, Some(self.token(z, ga)))))
            }
        }
    }
}

impl Generator for Fallback<'_> {
    fn step(&mut self, w: StringId) -> Result<GeneratorDecision, GenError> {
        self.core.observe(w)?;
        let ga = self.core.acc_index(w);
        let ancestors = self.ancestors(ga)?;
        let mut event = Event::None;
        if let Some((target, token)) = self.decide(ga, &ancestors)? {
            self.fall_back(target, token);
            event = Event::Fallback { target, token };
        }
        self.prev_ga = Some(ga);
        self.prev_ancestors = ancestors;
        let from_list = self.list.min(&mut self.core);
        let from_ga = self.core.next_unused(ga);
        let (x, target) = match (from_list, from_ga) {
            (Some(s), Some(g)) if s < g => (s, None),
            (_, Some(g)) => (g, None),
            (Some(s), None) => (s, None),
            (None, None) => {
                let (from, x) = self.core.pick(ga)?;
                (x, Some(from))
            }
        };
        self.core.mark(x);
        let mut d = self.core.decision(Some(ga), x, event);
        d.target = match event {
            Event::Fallback { target, .. } => Some(target),
            _ => target,
        };
        d.s_size = self.list.size_bound(&self.core);
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn demo() -> FamilyHandle {
        FamilyHandle::load(&"naturals-evens-demo".parse().unwrap()).unwrap()
    }

    #[test]
    fn spec_text_round_trip() {
        for s in [
            "km",
            "acc",
            "lazy:c=9/10",
            "fallback-finite",
            "fallback-general",
        ] {
            let g: GeneratorSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert_eq!(
            "lazy".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Lazy {
                c: Rational::new(9, 10)
            }
        );
        assert!("lazy:c=1".parse::<GeneratorSpec>().is_err());
        assert!("nope".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn element_pick_examples() {
        let f = demo();
        let used: BTreeSet<u64> = [2, 4].into_iter().collect();
        assert_eq!(element_pick(&f, 2, &used), Some(6));
        assert_eq!(element_pick(&f, 1, &BTreeSet::new()), Some(1));
        let pm = FamilyHandle::load(&"prefix-multiples(100)".parse().unwrap()).unwrap();
        assert_eq!(element_pick(&pm, 1, &[1].into_iter().collect()), Some(100));
    }

    #[test]
    fn km_examples() {
        let f = demo();
        let mut g = build(&GeneratorSpec::Km, &f, LevelSource::Declared).unwrap();
        let d = g.step(2).unwrap();
        // t = 1: only c ≤ 1 is index 1
        assert_eq!((d.guess, d.output), (Some(1), 1));
        let mut g = build(&GeneratorSpec::Km, &f, LevelSource::Declared).unwrap();
        g.step(4).unwrap();
        g.step(8).unwrap();
        let d = g.step(16).unwrap();
        assert_eq!(d.guess, Some(3));
        assert_eq!(d.output, 12);
    }

    #[test]
    fn acc_cases() {
        let f = demo();
        // chain after {4, 8, 16} is (1, 2, 3)
        let run = |ws: &[u64]| {
            let mut g = build(&GeneratorSpec::Acc, &f, LevelSource::Declared).unwrap();
            let mut last = None;
            for &w in ws {
                last = Some(g.step(w).unwrap());
            }
            last.unwrap()
        };
        assert_eq!(run(&[4]).guess, Some(1));
        // case (a): w ∈ all stored languages; h_{t-1} with t-1 = 3 is position 3
        assert_eq!(run(&[4, 16, 32, 8]).guess, Some(3));
        // case (b): 10 lies in evens but not in multiples of 4
        assert_eq!(run(&[4, 16, 32, 10]).guess, Some(2));
        // 3 lies only in ℕ₊: case (b) with k = 1
        assert_eq!(run(&[4, 8, 3]).guess, Some(1));
        // edge case: stored chain (evens ⊋ mult4) and w = 3 outside both
        let mut core = Core::new(&f);
        core.prev = CriticalChain {
            entries: vec![2, 3],
            horizon: 3,
            truncated: false,
        };
        core.t = 2;
        assert_eq!(core.acc_index(3), 2);
    }

    #[test]
    fn outputs_never_repeat() {
        for spec in ["km", "acc", "lazy", "fallback-finite", "fallback-general"] {
            let f = FamilyHandle::load(&"prefix-multiples(10)".parse().unwrap()).unwrap();
            let mut g = build(&spec.parse().unwrap(), &f, LevelSource::Declared).unwrap();
            let mut used = BTreeSet::new();
            let ws = vec![10, 20, 1, 2, 30, 3, 4, 5, 40, 6, 7, 8, 9, 11, 12];
            for w in ws {
                if used.contains(&w) {
                    continue;
                }
                used.insert(w);
                let d = g.step(w).unwrap();
                assert!(used.insert(d.output), "{spec} repeated {}", d.output);
            }
        }
    }

    #[test]
    fn lazy_marks_rich_on_superset() {
        let f = demo();
        let mut g = build(&"lazy".parse().unwrap(), &f, LevelSource::Declared).unwrap();
        // evens first, then an odd string makes acc move up to ℕ₊
        let mut events = Vec::new();
        for w in [4, 8, 16, 10, 3] {
            events.push(g.step(w).unwrap().event);
        }
        assert!(events.contains(&Event::Rich), "{events:?}");
    }

    #[test]
    fn general_tokens() {
        let f = FamilyHandle::load(&"divisibility".parse().unwrap()).unwrap();
        let mut g = Fallback::new(&f, LevelSource::Declared, FallbackMode::General);
        // chain L_1 ⊋ L_2 ⊋ L_4 ⊋ … ⊋ L_64
        g.step(1024).unwrap();
        let chain = g.core.chain().clone();
        assert!(chain.len() >= 5);
        // positions 2 and 5 give token 2·(5 − 2)
        assert_eq!(g.token(chain.at(2), chain.at(5)), 6);
    }

    #[test]
    fn fallback_superset_token_two() {
        let f = demo();
        let mut g = Fallback::new(&f, LevelSource::Declared, FallbackMode::General);
        g.step(4).unwrap();
        g.step(8).unwrap();
        g.step(16).unwrap();
        g.step(32).unwrap();
        // acc now guesses index 3; an odd string forces a strict superset
        let d = g.step(99).unwrap();
        assert_eq!(d.guess, Some(1));
        assert_eq!(
            d.event,
            Event::Fallback {
                target: 1,
                token: Some(2)
            }
        );
    }

    #[test]
    fn single_language_never_falls_back() {
        let f = FamilyHandle::load(&"naturals-evens-demo(1)".parse().unwrap()).unwrap();
        for mode in [FallbackMode::Finite, FallbackMode::General] {
            let mut g = Fallback::new(&f, LevelSource::Declared, mode);
            let mut used = BTreeSet::new();
            for w in 1..200u64 {
                if !used.insert(w) {
                    continue;
                }
                let d = g.step(w).unwrap();
                assert_eq!(d.event, Event::None);
                used.insert(d.output);
            }
        }
    }
}
