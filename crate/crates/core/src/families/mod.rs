//! Countable families of languages over the natural numbers.
//!
//! Strings are natural numbers ordered numerically, so every language shares
//! one universal order. A [`FamilyHandle`] answers membership, ordered
//! enumeration and exact inclusion queries for each listed language.
//!
//! Index conventions of the built-ins:
//!
//! | family | indices | languages |
//! |---|---|---|
//! | `prefix-multiples` | 0, 1, 2, … | `0 = ℕ₊`, `k = {1..k} ∪ period·ℕ₊` |
//! | `marker-intervals` | 0, 1, 2, … | `0` = all strings `≥ a_0`, `n = ∪_i [a_i, a_i+n]` |
//! | `recursive-tree` | 0, 1, 2, … | `0 = ℕ₊`, others are tree paths (see `tree`) |
//! | `divisibility` | 1, 2, … | `i` = positive multiples of `i` |
//! | `cofinite-gaps` | 0, 1, 2, … | `0 = ℕ₊`, `j = ℕ₊ ∖ {j+1}` |
//! | `rationals-truth` | 0, 1, 2, … | `0` = all of `ℚ ∩ [0,1]`, `i = Q(i) ∪ (ℚ ∩ [0,τ])` |
//! | `naturals-evens-demo` | 1..=depth | `k` = positive multiples of `2^(k-1)` |
//! | `scripted` | 1..=n | as declared |
//!
//! Index 0, when present, is the family's designated terminal language.

mod markers;
mod rationals;
mod scripted;
mod tree;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use scripted::{ScriptedFamilyDef, ScriptedRule};

use markers::Markers;
use rationals::Rationals;
use scripted::Scripted;
use tree::Tree;

/// A string of the ground set `ℕ`.
pub type StringId = u64;
/// Position of a language in its family's listing.
pub type LanguageIndex = u64;
/// 1-based position of a string inside a language's enumeration.
pub type Rank = u64;
/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// Inclusion relation of `L_i` to `L_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    ProperSubset,
    Equal,
    ProperSuperset,
    Incomparable,
}

impl Relation {
    pub fn mirror(self) -> Relation {
        match self {
            Relation::ProperSubset => Relation::ProperSuperset,
            Relation::ProperSuperset => Relation::ProperSubset,
            r => r,
        }
    }

    pub fn from_inclusions(a_in_b: bool, b_in_a: bool) -> Relation {
        match (a_in_b, b_in_a) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::ProperSubset,
            (false, true) => Relation::ProperSuperset,
            (false, false) => Relation::Incomparable,
        }
    }

    /// `⊆`.
    pub fn is_subset(self) -> bool {
        matches!(self, Relation::ProperSubset | Relation::Equal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family kind `{0}`")]
    UnknownKind(String),
    #[error("malformed family spec `{0}`")]
    MalformedSpec(String),
    #[error("unknown parameter `{param}` for family `{kind}`")]
    UnknownParam { kind: String, param: String },
    #[error("parameter `{name}` out of range: {reason}")]
    ParamOutOfRange { name: String, reason: String },
    #[error("scripted families are loaded from a file")]
    ScriptedNeedsDefinition,
    #[error("scripted family malformed: {0}")]
    ScriptedMalformed(String),
    #[error("scripted family is missing the relation between {0} and {1}")]
    MissingRelation(LanguageIndex, LanguageIndex),
    #[error("language index {0} is out of range")]
    IndexOutOfRange(LanguageIndex),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("string {x} is not a member of language {i}")]
    NotMember { i: LanguageIndex, x: StringId },
    #[error("rank {n} of language {i} lies beyond the representable universe")]
    BeyondUniverse { i: LanguageIndex, n: Rank },
}

/// Built-in family kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    PrefixMultiples,
    MarkerIntervals,
    RecursiveTree,
    Divisibility,
    CofiniteGaps,
    RationalsTruth,
    NaturalsEvensDemo,
    Scripted,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::PrefixMultiples,
        FamilyKind::MarkerIntervals,
        FamilyKind::RecursiveTree,
        FamilyKind::Divisibility,
        FamilyKind::CofiniteGaps,
        FamilyKind::RationalsTruth,
        FamilyKind::NaturalsEvensDemo,
        FamilyKind::Scripted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::PrefixMultiples => "prefix-multiples",
            FamilyKind::MarkerIntervals => "marker-intervals",
            FamilyKind::RecursiveTree => "recursive-tree",
            FamilyKind::Divisibility => "divisibility",
            FamilyKind::CofiniteGaps => "cofinite-gaps",
            FamilyKind::RationalsTruth => "rationals-truth",
            FamilyKind::NaturalsEvensDemo => "naturals-evens-demo",
            FamilyKind::Scripted => "scripted",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Parameter bound by the `kind(value)` shorthand.
    fn primary_param(self) -> Option<&'static str> {
        match self {
            FamilyKind::PrefixMultiples => Some("period"),
            FamilyKind::MarkerIntervals => Some("base"),
            FamilyKind::RecursiveTree => Some("depth"),
            FamilyKind::RationalsTruth => Some("tau"),
            FamilyKind::NaturalsEvensDemo => Some("depth"),
            FamilyKind::Scripted => Some("path"),
            FamilyKind::Divisibility | FamilyKind::CofiniteGaps => None,
        }
    }

    fn allowed_params(self) -> &'static [&'static str] {
        match self {
            FamilyKind::PrefixMultiples => &["period"],
            FamilyKind::MarkerIntervals => &["base", "marker_start"],
            FamilyKind::RecursiveTree => &["depth", "base"],
            FamilyKind::Divisibility | FamilyKind::CofiniteGaps => &[],
            FamilyKind::RationalsTruth => &["tau", "max_den"],
            FamilyKind::NaturalsEvensDemo => &["depth"],
            FamilyKind::Scripted => &["path"],
        }
    }
}

/// A parameter value: integer, rational `p/q`, or free text (paths).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Int(u64),
    Rational(Rational),
    Text(String),
}

impl ParamValue {
    fn parse(s: &str) -> ParamValue {
        if let Ok(v) = s.parse::<u64>() {
            return ParamValue::Int(v);
        }
        if let Some((p, q)) = s.split_once('/') {
            if let (Ok(p), Ok(q)) = (p.trim().parse::<u64>(), q.trim().parse::<u64>()) {
                if q != 0 {
                    return ParamValue::Rational(Rational::new(p, q));
                }
            }
        }
        ParamValue::Text(s.to_string())
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

/// Kind plus parameters. Text form: `kind`, `kind(value)` or
/// `kind:key=value,key=value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: BTreeMap<String, ParamValue>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn int(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_string(), ParamValue::Int(value));
        self
    }

    fn get_int(&self, key: &str, default: u64) -> Result<u64, FamilyError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(other) => Err(FamilyError::ParamOutOfRange {
                name: key.to_string(),
                reason: format!("expected an integer, got `{other}`"),
            }),
        }
    }

    fn get_rational(&self, key: &str, default: Rational) -> Result<Rational, FamilyError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(ParamValue::Int(v)) => Ok(Rational::from_integer(*v)),
            Some(ParamValue::Rational(r)) => Ok(*r),
            Some(other) => Err(FamilyError::ParamOutOfRange {
                name: key.to_string(),
                reason: format!("expected a rational, got `{other}`"),
            }),
        }
    }

    /// Path of a scripted family file.
    pub fn path(&self) -> Option<String> {
        self.params.get("path").map(|v| v.to_string())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        let mut sep = ':';
        for (k, v) in &self.params {
            write!(f, "{sep}{k}={v}")?;
            sep = ',';
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || FamilyError::MalformedSpec(s.to_string());
        let (name, rest) = if let Some(open) = s.find('(') {
            if !s.ends_with(')') {
                return Err(bad());
            }
            (&s[..open], Some((true, &s[open + 1..s.len() - 1])))
        } else if let Some((n, r)) = s.split_once(':') {
            (n, Some((false, r)))
        } else {
            (s, None)
        };
        let kind = FamilyKind::from_name(name.trim())
            .ok_or_else(|| FamilyError::UnknownKind(name.to_string()))?;
        let mut spec = FamilySpec::new(kind);
        match rest {
            None => {}
            Some((true, v)) => {
                let key = kind.primary_param().ok_or_else(bad)?;
                spec.params
                    .insert(key.to_string(), ParamValue::parse(v.trim()));
            }
            Some((false, list)) => {
                for item in list.split(',').filter(|x| !x.trim().is_empty()) {
                    let (k, v) = item.split_once('=').ok_or_else(bad)?;
                    spec.params
                        .insert(k.trim().to_string(), ParamValue::parse(v.trim()));
                }
            }
        }
        for k in spec.params.keys() {
            if !kind.allowed_params().contains(&k.as_str()) {
                return Err(FamilyError::UnknownParam {
                    kind: kind.name().to_string(),
                    param: k.clone(),
                });
            }
        }
        Ok(spec)
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A declared infinite tower `Λ_1 ⊊ …` with its terminal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerInfo {
    pub terminal: LanguageIndex,
    /// Every `B_k` is finite.
    pub b_finite: bool,
    /// `Λ_k = B_1 ∪ … ∪ B_k` for every `k`.
    pub nested: bool,
}

#[derive(Clone, Debug)]
enum Imp {
    PrefixMultiples { period: u64 },
    Marker(Markers),
    Tree(Tree),
    Divisibility,
    Cofinite,
    Rationals(Box<Rationals>),
    Demo { depth: u64 },
    Scripted(Box<Scripted>),
}

/// Immutable handle on a loaded family; cheap to share across threads.
#[derive(Clone, Debug)]
pub struct FamilyHandle {
    spec: FamilySpec,
    imp: Imp,
}

/// Anything that answers membership for single strings.
pub trait StringSet {
    fn contains(&self, x: StringId) -> bool;
}

impl StringSet for BTreeSet<StringId> {
    fn contains(&self, x: StringId) -> bool {
        BTreeSet::contains(self, &x)
    }
}

impl<T: StringSet + ?Sized> StringSet for &T {
    fn contains(&self, x: StringId) -> bool {
        (**self).contains(x)
    }
}

/// Wraps a predicate as a [`StringSet`].
pub struct FnSet<F>(pub F);

impl<F: Fn(StringId) -> bool> StringSet for FnSet<F> {
    fn contains(&self, x: StringId) -> bool {
        (self.0)(x)
    }
}

/// One language of a family, usable as a [`StringSet`].
#[derive(Clone, Copy)]
pub struct Lang<'a> {
    pub family: &'a FamilyHandle,
    pub index: LanguageIndex,
}

impl StringSet for Lang<'_> {
    fn contains(&self, x: StringId) -> bool {
        self.family.contains(self.index, x)
    }
}

impl<'a> Lang<'a> {
    /// Members in increasing order, starting from rank 1.
    pub fn iter(&self) -> impl Iterator<Item = StringId> + 'a {
        let (family, index) = (self.family, self.index);
        (1u64..).map_while(move |n| family.nth(index, n))
    }
}

fn out_of_range(name: &str, reason: &str) -> FamilyError {
    FamilyError::ParamOutOfRange {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

impl FamilyHandle {
    /// Loads a built-in family. Scripted families go through
    /// [`FamilyHandle::from_scripted`].
    pub fn load(spec: &FamilySpec) -> Result<FamilyHandle, FamilyError> {
        for k in spec.params.keys() {
            if !spec.kind.allowed_params().contains(&k.as_str()) {
                return Err(FamilyError::UnknownParam {
                    kind: spec.kind.name().to_string(),
                    param: k.clone(),
                });
            }
        }
        let imp = match spec.kind {
            FamilyKind::PrefixMultiples => {
                let period = spec.get_int("period", 100)?;
                if period < 2 {
                    return Err(out_of_range("period", "must be at least 2"));
                }
                Imp::PrefixMultiples { period }
            }
            FamilyKind::MarkerIntervals => {
                let base = spec.get_int("base", 3)?;
                let start = spec.get_int("marker_start", 0)?;
                if base < 2 {
                    return Err(out_of_range("base", "must be at least 2"));
                }
                if start > 1 {
                    return Err(out_of_range("marker_start", "must be 0 or 1"));
                }
                Imp::Marker(Markers::new(base, start))
            }
            FamilyKind::RecursiveTree => {
                let depth = spec.get_int("depth", 2)?;
                let base = spec.get_int("base", 3)?;
                if !(1..=4).contains(&depth) {
                    return Err(out_of_range("depth", "must lie in 1..=4"));
                }
                if base < 2 {
                    return Err(out_of_range("base", "must be at least 2"));
                }
                Imp::Tree(Tree::new(depth as u32, base))
            }
            FamilyKind::Divisibility => Imp::Divisibility,
            FamilyKind::CofiniteGaps => Imp::Cofinite,
            FamilyKind::RationalsTruth => {
                let tau = spec.get_rational("tau", Rational::new(1, 2))?;
                let max_den = spec.get_int("max_den", 600)?;
                if tau == Rational::from_integer(0) || tau >= Rational::from_integer(1) {
                    return Err(out_of_range("tau", "must lie strictly between 0 and 1"));
                }
                if !(2..=4000).contains(&max_den) {
                    return Err(out_of_range("max_den", "must lie in 2..=4000"));
                }
                Imp::Rationals(Box::new(Rationals::new(tau, max_den as u32)))
            }
            FamilyKind::NaturalsEvensDemo => {
                let depth = spec.get_int("depth", 3)?;
                if !(1..=62).contains(&depth) {
                    return Err(out_of_range("depth", "must lie in 1..=62"));
                }
                Imp::Demo { depth }
            }
            FamilyKind::Scripted => return Err(FamilyError::ScriptedNeedsDefinition),
        };
        Ok(FamilyHandle {
            spec: spec.clone(),
            imp,
        })
    }

    /// Builds a scripted family from its parsed definition.
    pub fn from_scripted(
        spec: &FamilySpec,
        def: ScriptedFamilyDef,
    ) -> Result<FamilyHandle, FamilyError> {
        let s = Scripted::build(def)?;
        Ok(FamilyHandle {
            spec: spec.clone(),
            imp: Imp::Scripted(Box::new(s)),
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn first_index(&self) -> LanguageIndex {
        match self.imp {
            Imp::Divisibility | Imp::Demo { .. } | Imp::Scripted(_) => 1,
            _ => 0,
        }
    }

    /// Last valid index for finite listings.
    pub fn last_index(&self) -> Option<LanguageIndex> {
        match &self.imp {
            Imp::Demo { depth } => Some(*depth),
            Imp::Scripted(s) => Some(s.rules.len() as u64),
            Imp::Rationals(r) => Some(r.high_le(u64::MAX)),
            _ => None,
        }
    }

    pub fn is_valid_index(&self, i: LanguageIndex) -> bool {
        i >= self.first_index() && self.last_index().map_or(true, |l| i <= l)
    }

    fn check(&self, i: LanguageIndex) -> Result<(), FamilyError> {
        if self.is_valid_index(i) {
            Ok(())
        } else {
            Err(FamilyError::IndexOutOfRange(i))
        }
    }

    /// Designated terminal language (the union of the family), if any.
    pub fn terminal(&self) -> Option<LanguageIndex> {
        match self.imp {
            Imp::Divisibility | Imp::Demo { .. } => Some(1),
            Imp::Scripted(_) => None,
            _ => Some(0),
        }
    }

    /// Exclusive bound on representable strings, when smaller than `2^64`.
    pub fn universe_bound(&self) -> Option<u64> {
        match &self.imp {
            Imp::Rationals(r) => Some(r.bound()),
            _ => None,
        }
    }

    /// Human-readable name of language `i`.
    pub fn language_name(&self, i: LanguageIndex) -> String {
        match &self.imp {
            Imp::Tree(t) if i > 0 => {
                let p = t.path_of(i);
                let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("L_{{{}}}", parts.join(":"))
            }
            _ if Some(i) == self.terminal() && self.first_index() == 0 => "K".to_string(),
            _ => format!("L_{i}"),
        }
    }

    /// Tree path behind index `i` (recursive-tree only).
    pub fn tree_path(&self, i: LanguageIndex) -> Option<Vec<u64>> {
        match &self.imp {
            Imp::Tree(t) => Some(t.path_of(i)),
            _ => None,
        }
    }

    /// Index of a tree path (recursive-tree only).
    pub fn tree_index(&self, path: &[u64]) -> Option<LanguageIndex> {
        match &self.imp {
            Imp::Tree(t) if t.path_valid(path) => Some(t.index_of(path)),
            _ => None,
        }
    }

    pub fn lang(&self, i: LanguageIndex) -> Lang<'_> {
        Lang {
            family: self,
            index: i,
        }
    }

    // ---- unchecked core queries (index must be valid) ----

    /// `x ∈ L_i`.
    pub fn contains(&self, i: LanguageIndex, x: StringId) -> bool {
        match &self.imp {
            Imp::PrefixMultiples { period } => x >= 1 && (i == 0 || x <= i || x % period == 0),
            Imp::Marker(m) => {
                if i == 0 {
                    x >= m.start
                } else {
                    m.contains(i, x)
                }
            }
            Imp::Tree(t) => t.contains(&t.path_of(i), x),
            Imp::Divisibility => x >= 1 && x % i == 0,
            Imp::Cofinite => x >= 1 && (i == 0 || x != i + 1),
            Imp::Rationals(r) => r.contains(if i == 0 { None } else { Some(i) }, x),
            Imp::Demo { .. } => x >= 1 && x.trailing_zeros() as u64 >= i - 1,
            Imp::Scripted(s) => s.rules[(i - 1) as usize].contains(x),
        }
    }

    /// Number of members of `L_i` that are `≤ x`.
    pub fn count_le(&self, i: LanguageIndex, x: StringId) -> u64 {
        match &self.imp {
            Imp::PrefixMultiples { period } => {
                if i == 0 {
                    x
                } else {
                    let head = x.min(i);
                    head + (x / period - head / period)
                }
            }
            Imp::Marker(m) => {
                if i == 0 {
                    if x < m.start {
                        0
                    } else {
                        (x - m.start).saturating_add(1)
                    }
                } else {
                    m.count_le(i, x)
                }
            }
            Imp::Tree(t) => t.count_le(&t.path_of(i), x),
            Imp::Divisibility => x / i,
            Imp::Cofinite => {
                if i == 0 || x < i + 1 {
                    x
                } else {
                    x - 1
                }
            }
            Imp::Rationals(r) => r.count_le(if i == 0 { None } else { Some(i) }, x),
            Imp::Demo { .. } => x >> (i - 1),
            Imp::Scripted(s) => s.rules[(i - 1) as usize].count_le(x),
        }
    }

    /// The `n`-th smallest member of `L_i` (`n ≥ 1`), or `None` when it lies
    /// beyond the representable universe.
    pub fn nth(&self, i: LanguageIndex, n: Rank) -> Option<StringId> {
        if n == 0 {
            return None;
        }
        match &self.imp {
            Imp::PrefixMultiples { period } => {
                if i == 0 || n <= i {
                    Some(n)
                } else {
                    (i / period).checked_add(n - i)?.checked_mul(*period)
                }
            }
            Imp::Marker(m) => {
                if i == 0 {
                    m.start.checked_add(n - 1)
                } else {
                    m.nth(i, n)
                }
            }
            Imp::Tree(t) => t.nth(&t.path_of(i), n),
            Imp::Divisibility => n.checked_mul(i),
            Imp::Cofinite => {
                if i == 0 || n <= i {
                    Some(n)
                } else {
                    n.checked_add(1)
                }
            }
            Imp::Demo { .. } => n.checked_mul(1u64 << (i - 1)),
            Imp::Rationals(_) | Imp::Scripted(_) => self.nth_by_search(i, n),
        }
    }

    fn nth_by_search(&self, i: LanguageIndex, n: Rank) -> Option<StringId> {
        let cap = self
            .universe_bound()
            .map_or(u64::MAX, |b| b.saturating_sub(1));
        if self.count_le(i, cap) < n {
            return None;
        }
        let mut hi = n.min(cap);
        while self.count_le(i, hi) < n {
            hi = hi.saturating_mul(2).min(cap);
        }
        let mut lo = 0u64;
        // invariant: count_le(lo) < n ≤ count_le(hi), with count_le(0) < n unless 0 qualifies
        if self.count_le(i, 0) >= n {
            return Some(0);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.count_le(i, mid) >= n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Smallest member of `L_i` strictly above `x`.
    pub fn next_after(&self, i: LanguageIndex, x: StringId) -> Option<StringId> {
        self.nth(i, self.count_le(i, x) + 1)
    }

    /// Exact relation of `L_i` to `L_j`.
    pub fn relation(&self, i: LanguageIndex, j: LanguageIndex) -> Relation {
        if i == j {
            return Relation::Equal;
        }
        match &self.imp {
            Imp::PrefixMultiples { period } => {
                if i == 0 {
                    Relation::ProperSuperset
                } else if j == 0 {
                    Relation::ProperSubset
                } else {
                    let (a, b) = (i.min(j), i.max(j));
                    // L_a = L_b only when (a, b] holds no non-multiple
                    let rel = if b == a + 1 && b % period == 0 {
                        Relation::Equal
                    } else {
                        Relation::ProperSubset
                    };
                    if i < j {
                        rel
                    } else {
                        rel.mirror()
                    }
                }
            }
            Imp::Marker(_) | Imp::Rationals(_) => {
                if i == 0 {
                    Relation::ProperSuperset
                } else if j == 0 || i < j {
                    Relation::ProperSubset
                } else {
                    Relation::ProperSuperset
                }
            }
            Imp::Tree(t) => t.relation(&t.path_of(i), &t.path_of(j)),
            Imp::Divisibility => {
                if i % j == 0 {
                    Relation::ProperSubset
                } else if j % i == 0 {
                    Relation::ProperSuperset
                } else {
                    Relation::Incomparable
                }
            }
            Imp::Cofinite => {
                if i == 0 {
                    Relation::ProperSuperset
                } else if j == 0 {
                    Relation::ProperSubset
                } else {
                    Relation::Incomparable
                }
            }
            Imp::Demo { .. } => {
                if i > j {
                    Relation::ProperSubset
                } else {
                    Relation::ProperSuperset
                }
            }
            Imp::Scripted(s) => s.rel[(i - 1) as usize][(j - 1) as usize],
        }
    }

    // ---- checked queries ----

    pub fn member(&self, i: LanguageIndex, x: StringId) -> Result<bool, FamilyError> {
        self.check(i)?;
        Ok(self.contains(i, x))
    }

    pub fn nth_string(&self, i: LanguageIndex, n: Rank) -> Result<StringId, FamilyError> {
        self.check(i)?;
        if n == 0 {
            return Err(FamilyError::ZeroRank);
        }
        self.nth(i, n).ok_or(FamilyError::BeyondUniverse { i, n })
    }

    pub fn rank_in(&self, i: LanguageIndex, x: StringId) -> Result<Rank, FamilyError> {
        self.check(i)?;
        if !self.contains(i, x) {
            return Err(FamilyError::NotMember { i, x });
        }
        Ok(self.count_le(i, x))
    }

    pub fn succ_in(&self, i: LanguageIndex, x: StringId) -> Result<StringId, FamilyError> {
        let r = self.rank_in(i, x)?;
        self.nth(i, r + 1)
            .ok_or(FamilyError::BeyondUniverse { i, n: r + 1 })
    }

    pub fn compare(&self, i: LanguageIndex, j: LanguageIndex) -> Result<Relation, FamilyError> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.relation(i, j))
    }

    // ---- declared structure ----

    /// Declared Cantor-Bendixson level of `L_i`.
    pub fn declared_level(&self, i: LanguageIndex) -> Option<u32> {
        match &self.imp {
            Imp::PrefixMultiples { .. } | Imp::Marker(_) | Imp::Cofinite | Imp::Rationals(_) => {
                Some(u32::from(i == 0))
            }
            Imp::Tree(t) => Some(t.depth - t.path_of(i).len() as u32),
            Imp::Divisibility | Imp::Demo { .. } => Some(0),
            Imp::Scripted(s) => s.levels.as_ref().map(|l| l[(i - 1) as usize]),
        }
    }

    /// Declared linear extension value `ℓ(L_i)`; strictly increasing along `⊊`.
    pub fn declared_ell(&self, i: LanguageIndex) -> Option<Rational> {
        let frac = |k: u64| Rational::new(k, k + 1);
        match &self.imp {
            Imp::PrefixMultiples { .. } | Imp::Marker(_) | Imp::Cofinite | Imp::Rationals(_) => {
                Some(if i == 0 {
                    Rational::from_integer(1)
                } else {
                    frac(i)
                })
            }
            Imp::Tree(t) => {
                let path = t.path_of(i);
                let level = (t.depth - path.len() as u32) as u64;
                if path.is_empty() {
                    return Some(Rational::from_integer(level));
                }
                // proper sublanguages have strictly fewer representable members
                let c = t.count_le(&path, u64::MAX);
                Some(Rational::from_integer(level) + frac(c))
            }
            Imp::Divisibility => Some(Rational::new(1, i)),
            Imp::Demo { .. } => Some(Rational::new(1, i)),
            Imp::Scripted(s) => s.ell.as_ref().map(|l| l[(i - 1) as usize]),
        }
    }

    /// The declared tower ending at `terminal`, if the family has one.
    pub fn declared_tower(&self, terminal: LanguageIndex) -> Option<TowerInfo> {
        if terminal != 0 {
            return None;
        }
        match &self.imp {
            Imp::PrefixMultiples { .. } | Imp::Marker(_) | Imp::Tree(_) | Imp::Rationals(_) => {
                Some(TowerInfo {
                    terminal: 0,
                    b_finite: false,
                    nested: true,
                })
            }
            Imp::Cofinite => Some(TowerInfo {
                terminal: 0,
                b_finite: true,
                nested: false,
            }),
            _ => None,
        }
    }

    /// All declared towers.
    pub fn declared_towers(&self) -> Vec<TowerInfo> {
        self.declared_tower(0).into_iter().collect()
    }

    /// `Λ_k` of the declared tower (`k ≥ 1`).
    pub fn tower_member(&self, k: u64) -> Option<LanguageIndex> {
        debug_assert!(k >= 1);
        match &self.imp {
            Imp::PrefixMultiples { period } => Some(k + (k - 1) / (period - 1)),
            Imp::Marker(_) | Imp::Cofinite => Some(k),
            Imp::Rationals(r) => (k <= r.high_le(u64::MAX)).then_some(k),
            Imp::Tree(t) => Some(t.index_of(&[k])),
            _ => None,
        }
    }

    /// The `k` with `x ∈ B_k` for the declared tower; `None` outside the terminal.
    pub fn tower_fix(&self, x: StringId) -> Option<u64> {
        match &self.imp {
            Imp::PrefixMultiples { period } => {
                if x == 0 {
                    None
                } else if x == 1 || x % period == 0 {
                    Some(1)
                } else {
                    Some(x - x / period)
                }
            }
            Imp::Marker(m) => m.offset(x).map(|o| o.max(1)),
            Imp::Tree(t) => t.markers.offset(x).map(|o| o.max(1)),
            Imp::Cofinite => (x >= 1).then_some(x),
            Imp::Rationals(r) => r.fix(x),
            _ => None,
        }
    }

    /// Upper bound on the strings of `B_1 ∪ … ∪ B_k` when all blocks are finite.
    pub fn tower_block_bound(&self, k: u64) -> Option<u64> {
        match &self.imp {
            Imp::Cofinite => Some(k),
            _ => None,
        }
    }

    /// A proof that no infinite perfect tower ends at `terminal`.
    pub fn tower_obstruction(&self, terminal: LanguageIndex) -> Option<String> {
        match &self.imp {
            Imp::Divisibility => Some(format!(
                "every B_k is empty: no positive integer is divisible by infinitely many distinct moduli, so any infinite intersection of languages below L_{terminal} is empty"
            )),
            Imp::Demo { .. } | Imp::Scripted(_) => Some(
                "the family lists finitely many languages, so no infinite sequence of distinct proper sublanguages exists".to_string(),
            ),
            Imp::PrefixMultiples { .. } if terminal > 0 => Some(format!(
                "L_{terminal} has only finitely many proper sublanguages in the family"
            )),
            Imp::Marker(_) | Imp::Rationals(_) | Imp::Cofinite if terminal > 0 => Some(format!(
                "L_{terminal} has only finitely many proper sublanguages in the family"
            )),
            _ => None,
        }
    }

    /// Upper estimate of the number of strings needed to separate two
    /// languages in spot checks.
    pub fn witness_bound(&self) -> u64 {
        match &self.imp {
            Imp::Rationals(r) => r.bound(),
            _ => 1_000_000,
        }
    }

    /// String id of the fraction `p/q` (rationals-truth only).
    pub fn rational_id(&self, p: u32, q: u32) -> Option<StringId> {
        match &self.imp {
            Imp::Rationals(r) => r.id_of(p, q),
            _ => None,
        }
    }

    /// Threshold `τ` of a rationals-truth family.
    pub fn rational_tau(&self) -> Option<Rational> {
        match &self.imp {
            Imp::Rationals(r) => Some(r.tau),
            _ => None,
        }
    }

    /// Textual value of a rationals-family string (`p/q`), for reports.
    pub fn rational_value(&self, x: StringId) -> Option<(u32, u32)> {
        match &self.imp {
            Imp::Rationals(r) => r.value(x),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
