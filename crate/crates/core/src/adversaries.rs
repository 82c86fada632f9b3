//! Adversary enumeration strategies.
//!
//! Every strategy emits distinct members of the true language `K` and, over
//! an unbounded run, all of them.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families::{FamilyHandle, LanguageIndex, StringId, TowerInfo};

pub const DEFAULT_WINDOW: u64 = 25;
/// A full-information greedy adversary emits one owed string every this many steps.
pub const GREEDY_DEBT_PERIOD: u64 = 8;
const SHUFFLE_BLOCK: u64 = 64;
/// Remainder candidates inspected per step before a stream counts as exhausted.
const REMAINDER_SCAN: u64 = 2048;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AdversaryError {
    #[error("no infinite perfect tower ends at L_{k}: {reason}")]
    NoTower { k: LanguageIndex, reason: String },
    #[error("scripted string {0} is not a member of the true language")]
    ScriptNonMember(StringId),
    #[error("scripted string {0} appears twice")]
    ScriptDuplicate(StringId),
    #[error("scripted adversary needs its strings")]
    MissingScript,
    #[error("the true language has no further representable member")]
    Exhausted,
    #[error("stabilization window must be at least 1")]
    BadWindow,
    #[error("unknown adversary `{0}`")]
    Unknown(String),
}

/// Adversary selection. Text form: `straight`, `greedy-lowest`,
/// `tower-pretender`, `tower-pretender:window=25`, `scripted:path=FILE`,
/// `shuffle:seed=7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversarySpec {
    Straight,
    GreedyLowest,
    TowerPretender { window: u64 },
    Scripted { path: String },
    Shuffle { seed: u64 },
}

impl AdversarySpec {
    pub fn name(&self) -> &'static str {
        match self {
            AdversarySpec::Straight => "straight",
            AdversarySpec::GreedyLowest => "greedy-lowest",
            AdversarySpec::TowerPretender { .. } => "tower-pretender",
            AdversarySpec::Scripted { .. } => "scripted",
            AdversarySpec::Shuffle { .. } => "shuffle",
        }
    }
}

impl fmt::Display for AdversarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversarySpec::TowerPretender { window } if *window != DEFAULT_WINDOW => {
                write!(f, "tower-pretender:window={window}")
            }
            AdversarySpec::Scripted { path } => write!(f, "scripted:path={path}"),
            AdversarySpec::Shuffle { seed } => write!(f, "shuffle:seed={seed}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for AdversarySpec {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || AdversaryError::Unknown(s.to_string());
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for p in params.split(',').filter(|p| !p.is_empty()) {
            kv.push(p.split_once('=').ok_or_else(unknown)?);
        }
        let int = |key: &str, default: u64| -> Result<u64, AdversaryError> {
            match kv.iter().find(|(k, _)| *k == key) {
                Some((_, v)) => v.parse().map_err(|_| unknown()),
                None => Ok(default),
            }
        };
        let allow = |keys: &[&str]| kv.iter().all(|(k, _)| keys.contains(k));
        let spec = match name {
            "straight" if kv.is_empty() => AdversarySpec::Straight,
            "greedy-lowest" if kv.is_empty() => AdversarySpec::GreedyLowest,
            "tower-pretender" if allow(&["window"]) => {
                let window = int("window", DEFAULT_WINDOW)?;
                if window == 0 {
                    return Err(AdversaryError::BadWindow);
                }
                AdversarySpec::TowerPretender { window }
            }
            "scripted" if allow(&["path"]) => {
                let path = kv.iter().find(|(k, _)| *k == "path").ok_or_else(unknown)?.1;
                AdversarySpec::Scripted {
                    path: path.to_string(),
                }
            }
            "shuffle" if allow(&["seed"]) => AdversarySpec::Shuffle {
                seed: int("seed", 0)?,
            },
            _ => return Err(unknown()),
        };
        Ok(spec)
    }
}

impl serde::Serialize for AdversarySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for AdversarySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub trait Adversary {
    /// Next string `w_t`.
    fn next(&mut self) -> Result<StringId, AdversaryError>;
    /// The algorithm's output for the step just played.
    fn observe_output(&mut self, _o: StringId) {}
    /// Currently pretended language, for strategies that pretend.
    fn pretended(&self) -> Option<LanguageIndex> {
        None
    }
}

/// Builds an adversary for true language `L_k`. `script` carries the strings
/// of a scripted adversary.
pub fn build<'f>(
    spec: &AdversarySpec,
    family: &'f FamilyHandle,
    k: LanguageIndex,
    script: Option<Vec<StringId>>,
) -> Result<alloc::boxed::Box<dyn Adversary + Send + 'f>, AdversaryError> {
    use alloc::boxed::Box;
    Ok(match spec {
        AdversarySpec::Straight => Box::new(Straight::new(family, k)),
        AdversarySpec::GreedyLowest => Box::new(Greedy::new(family, k)),
        AdversarySpec::Scripted { .. } => Box::new(Scripted::new(
            family,
            k,
            script.ok_or(AdversaryError::MissingScript)?,
        )?),
        AdversarySpec::Shuffle { seed } => Box::new(Shuffle::new(family, k, *seed)),
        AdversarySpec::TowerPretender { window } => {
            Box::new(TowerPretender::new(family, k, *window)?)
        }
    })
}

/// Members of `L_k` in increasing order, skipping those already emitted.
#[derive(Clone, Debug)]
struct Cursor {
    k: LanguageIndex,
    rank: u64,
}

impl Cursor {
    fn new(k: LanguageIndex) -> Self {
        Cursor { k, rank: 1 }
    }

    fn next_not_in(
        &mut self,
        family: &FamilyHandle,
        skip: &BTreeSet<StringId>,
    ) -> Option<StringId> {
        loop {
            let x = family.nth(self.k, self.rank)?;
            if !skip.contains(&x) {
                return Some(x);
            }
            self.rank += 1;
        }
    }
}

/// Canonical enumeration of `K`.
pub struct Straight<'f> {
    family: &'f FamilyHandle,
    cursor: Cursor,
    emitted: BTreeSet<StringId>,
}

impl<'f> Straight<'f> {
    pub fn new(family: &'f FamilyHandle, k: LanguageIndex) -> Self {
        Straight {
            family,
            cursor: Cursor::new(k),
            emitted: BTreeSet::new(),
        }
    }
}

impl Adversary for Straight<'_> {
    fn next(&mut self) -> Result<StringId, AdversaryError> {
        let x = self
            .cursor
            .next_not_in(self.family, &self.emitted)
            .ok_or(AdversaryError::Exhausted)?;
        self.emitted.insert(x);
        Ok(x)
    }
}

/// Emits the least member of `K` used by neither side. Strings the algorithm
/// took first are owed and paid back one per [`GREEDY_DEBT_PERIOD`] steps.
pub struct Greedy<'f> {
    family: &'f FamilyHandle,
    k: LanguageIndex,
    cursor: Cursor,
    used: BTreeSet<StringId>,
    debt: BTreeSet<StringId>,
    t: u64,
}

impl<'f> Greedy<'f> {
    pub fn new(family: &'f FamilyHandle, k: LanguageIndex) -> Self {
        Greedy {
            family,
            k,
            cursor: Cursor::new(k),
            used: BTreeSet::new(),
            debt: BTreeSet::new(),
            t: 0,
        }
    }
}

impl Adversary for Greedy<'_> {
    fn next(&mut self) -> Result<StringId, AdversaryError> {
        self.t += 1;
        if self.t % GREEDY_DEBT_PERIOD == 0 {
            if let Some(x) = self.debt.pop_first() {
                return Ok(x);
            }
        }
        let x = self
            .cursor
            .next_not_in(self.family, &self.used)
            .ok_or(AdversaryError::Exhausted)?;
        self.used.insert(x);
        Ok(x)
    }

    fn observe_output(&mut self, o: StringId) {
        if self.family.contains(self.k, o) && self.used.insert(o) {
            self.debt.insert(o);
        }
    }
}

/// Replays a fixed list, then continues canonically.
pub struct Scripted<'f> {
    queue: VecDeque<StringId>,
    rest: Straight<'f>,
}

impl<'f> Scripted<'f> {
    pub fn new(
        family: &'f FamilyHandle,
        k: LanguageIndex,
        script: Vec<StringId>,
    ) -> Result<Self, AdversaryError> {
        let mut seen = BTreeSet::new();
        for &x in &script {
            if !family.contains(k, x) {
                return Err(AdversaryError::ScriptNonMember(x));
            }
            if !seen.insert(x) {
                return Err(AdversaryError::ScriptDuplicate(x));
            }
        }
        let mut rest = Straight::new(family, k);
        rest.emitted = seen;
        Ok(Scripted {
            queue: script.into(),
            rest,
        })
    }
}

impl Adversary for Scripted<'_> {
    fn next(&mut self) -> Result<StringId, AdversaryError> {
        match self.queue.pop_front() {
            Some(x) => Ok(x),
            None => self.rest.next(),
        }
    }
}

/// Canonical enumeration shuffled inside consecutive blocks of 64 members.
pub struct Shuffle<'f> {
    family: &'f FamilyHandle,
    k: LanguageIndex,
    rng: ChaCha8Rng,
    next_rank: u64,
    block: VecDeque<StringId>,
}

impl<'f> Shuffle<'f> {
    pub fn new(family: &'f FamilyHandle, k: LanguageIndex, seed: u64) -> Self {
        Shuffle {
            family,
            k,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_rank: 1,
            block: VecDeque::new(),
        }
    }
}

impl Adversary for Shuffle<'_> {
    fn next(&mut self) -> Result<StringId, AdversaryError> {
        if self.block.is_empty() {
            let mut b: Vec<StringId> = (self.next_rank..self.next_rank + SHUFFLE_BLOCK)
                .map_while(|r| self.family.nth(self.k, r))
                .collect();
            self.next_rank += b.len() as u64;
            b.shuffle(&mut self.rng);
            self.block = b.into();
        }
        self.block.pop_front().ok_or(AdversaryError::Exhausted)
    }
}

/// Pretends the true language is `Λ_j` of a declared tower ending at `K`,
/// moving to a larger `j` once the algorithm appears to have settled inside
/// `Λ_j`.
///
/// The switch fires after `window` consecutive outputs inside `Λ_j`, a finite
/// stand-in for the unknowable validity time, or after the phase has lasted
/// `max(1000, phase start)` steps so that enumeration stays fair against
/// algorithms that never settle. The next phase uses the smallest
/// `j' > j` with every emitted string in `B_1 ∪ … ∪ B_{j'}`.
///
/// With finite blocks the plan emits the unused strings of `B_1 … B_j` in
/// block order and then the rest of `Λ_j`. With an infinite `B_1` it
/// alternates one `B_1` string with one string of `Λ_j ∖ B_1` until the
/// latter runs out.
pub struct TowerPretender<'f> {
    family: &'f FamilyHandle,
    tower: TowerInfo,
    window: u64,
    j: u64,
    lambda: LanguageIndex,
    emitted: BTreeSet<StringId>,
    max_fix: u64,
    streak: u64,
    t: u64,
    phase_start: u64,
    turn_b1: bool,
    b1: Cursor,
    rest: Cursor,
    rest_done: bool,
    blocks: VecDeque<StringId>,
    switches: u64,
}

impl<'f> TowerPretender<'f> {
    pub fn new(
        family: &'f FamilyHandle,
        k: LanguageIndex,
        window: u64,
    ) -> Result<Self, AdversaryError> {
        if window == 0 {
            return Err(AdversaryError::BadWindow);
        }
        let no_tower = |reason: String| AdversaryError::NoTower { k, reason };
        let tower = match family.declared_tower(k) {
            Some(t) => t,
            None => {
                return Err(no_tower(family.tower_obstruction(k).unwrap_or_else(|| {
                    "the family declares no tower here".to_string()
                })))
            }
        };
        let lambda = family
            .tower_member(1)
            .ok_or_else(|| no_tower("empty tower".to_string()))?;
        Ok(TowerPretender {
            family,
            tower,
            window,
            j: 1,
            lambda,
            emitted: BTreeSet::new(),
            max_fix: 1,
            streak: 0,
            t: 0,
            phase_start: 1,
            turn_b1: true,
            b1: Cursor::new(lambda),
            rest: Cursor::new(lambda),
            rest_done: false,
            blocks: VecDeque::new(),
            switches: 0,
        }
        .with_blocks())
    }

    fn with_blocks(mut self) -> Self {
        if self.tower.b_finite {
            self.fill_blocks();
        }
        self
    }

    /// Index `j` of the pretended `Λ_j`.
    pub fn level(&self) -> u64 {
        self.j
    }

    pub fn switches(&self) -> u64 {
        self.switches
    }

    fn fix(&self, x: StringId) -> u64 {
        self.family.tower_fix(x).unwrap_or(u64::MAX)
    }

    fn switch(&mut self) {
        self.j = (self.j + 1).max(self.max_fix);
        self.lambda = self.family.tower_member(self.j).unwrap_or(self.lambda);
        self.phase_start = self.t + 1;
        self.streak = 0;
        self.turn_b1 = true;
        self.rest = Cursor::new(self.lambda);
        self.rest_done = false;
        self.switches += 1;
        if self.tower.b_finite {
            self.fill_blocks();
        }
    }

    fn next_b1(&mut self) -> Option<StringId> {
        let f = self.family;
        let l1 = f.tower_member(1)?;
        let b1 = &mut self.b1;
        b1.k = l1;
        loop {
            let x = b1.next_not_in(f, &self.emitted)?;
            if f.tower_fix(x) == Some(1) {
                return Some(x);
            }
            b1.rank += 1;
        }
    }

    fn next_rest(&mut self, exclude_fix_le: u64) -> Option<StringId> {
        if self.rest_done {
            return None;
        }
        let f = self.family;
        for _ in 0..REMAINDER_SCAN {
            let x = match self.rest.next_not_in(f, &self.emitted) {
                Some(x) => x,
                None => break,
            };
            if self.fix(x) > exclude_fix_le {
                return Some(x);
            }
            self.rest.rank += 1;
        }
        self.rest_done = true;
        None
    }

    /// Unused strings of `B_1 ∪ … ∪ B_j` in block order (finite blocks only).
    fn fill_blocks(&mut self) {
        let f = self.family;
        self.blocks.clear();
        let Some(bound) = f.tower_block_bound(self.j) else {
            return;
        };
        let mut v: Vec<(u64, StringId)> = (0..=bound)
            .filter(|x| !self.emitted.contains(x))
            .filter_map(|x| f.tower_fix(x).filter(|&k| k <= self.j).map(|k| (k, x)))
            .collect();
        v.sort_unstable();
        self.blocks = v.into_iter().map(|(_, x)| x).collect();
    }

    fn plan(&mut self) -> Option<StringId> {
        if self.tower.b_finite {
            while let Some(x) = self.blocks.pop_front() {
                if !self.emitted.contains(&x) {
                    return Some(x);
                }
            }
            return self.next_rest(self.j);
        }
        let first = self.turn_b1;
        self.turn_b1 = !self.turn_b1;
        if first {
            self.next_b1().or_else(|| self.next_rest(1))
        } else {
            self.next_rest(1).or_else(|| self.next_b1())
        }
    }
}

impl Adversary for TowerPretender<'_> {
    fn next(&mut self) -> Result<StringId, AdversaryError> {
        let dwell = self.t + 1 - self.phase_start;
        if self.streak >= self.window || dwell > self.phase_start.max(1000) {
            self.switch();
        }
        self.t += 1;
        let x = match self.plan() {
            Some(x) => x,
            None => {
                self.switch();
                self.plan().ok_or(AdversaryError::Exhausted)?
            }
        };
        self.emitted.insert(x);
        self.max_fix = self.max_fix.max(self.fix(x));
        Ok(x)
    }

    fn observe_output(&mut self, o: StringId) {
        if self.family.contains(self.lambda, o) {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
    }

    fn pretended(&self) -> Option<LanguageIndex> {
        Some(self.lambda)
    }
}
