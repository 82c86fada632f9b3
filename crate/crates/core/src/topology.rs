//! The family topology on finite restrictions.
//!
//! Basic open sets are `U_{L,F} = {L' : F ⊆ L' ⊆ L}`. Everything here is a
//! statement about a finite restriction of the family, with membership
//! examined on strings up to a horizon `H`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::density::{language_density_estimate, DensityError};
use crate::families::{FamilyHandle, LanguageIndex, Rational, Relation, StringId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("a restriction needs at least one language and a horizon of at least 1")]
    EmptyRestriction,
    #[error("index {0} is not a language of the family")]
    BadIndex(LanguageIndex),
    #[error("inclusion is cyclic among the restricted languages")]
    Cycle,
    #[error("a tower needs at least two languages")]
    ShortSequence,
    #[error("feasibility violated at step {step}: {reason}")]
    Infeasible { step: u64, reason: String },
    #[error("extraction is inconclusive at horizon {0}")]
    Inconclusive(u64),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// A finite set of languages together with a string horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub indices: Vec<LanguageIndex>,
    pub horizon: u64,
}

impl Restriction {
    pub fn new(
        family: &FamilyHandle,
        mut indices: Vec<LanguageIndex>,
        horizon: u64,
    ) -> Result<Self, TopologyError> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() || horizon == 0 {
            return Err(TopologyError::EmptyRestriction);
        }
        if let Some(&bad) = indices.iter().find(|&&i| !family.is_valid_index(i)) {
            return Err(TopologyError::BadIndex(bad));
        }
        Ok(Restriction { indices, horizon })
    }

    /// The first `n` non-terminal languages of the listing plus the
    /// terminal when the family has one.
    pub fn prefix(family: &FamilyHandle, n: u64, horizon: u64) -> Result<Self, TopologyError> {
        let start = family.first_index().max(1);
        let mut indices: Vec<LanguageIndex> = (start..start + n)
            .take_while(|&i| family.is_valid_index(i))
            .collect();
        indices.extend(family.terminal());
        Self::new(family, indices, horizon)
    }
}

/// `F ⊆ L_j ⊆ L_l`.
pub fn in_basic_open(
    family: &FamilyHandle,
    j: LanguageIndex,
    l: LanguageIndex,
    f: &BTreeSet<StringId>,
) -> bool {
    f.iter().all(|&x| family.contains(j, x)) && family.relation(j, l).is_subset()
}

/// Cantor-Bendixson data of a restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    pub restriction: Restriction,
    /// Level per index; `None` marks the perfect kernel.
    pub levels: BTreeMap<LanguageIndex, Option<u32>>,
    /// First `r` with an empty or stable derived set.
    pub rank: u32,
    pub kernel: Vec<LanguageIndex>,
    /// Linear extension refined from levels.
    pub ell: BTreeMap<LanguageIndex, Rational>,
    /// Sizes of `X^(0), X^(1), …` up to the stable set.
    pub derived_sizes: Vec<usize>,
}

impl LevelMap {
    pub fn level(&self, i: LanguageIndex) -> Option<u32> {
        self.levels.get(&i).copied().flatten()
    }

    pub fn level_table(&self) -> BTreeMap<LanguageIndex, Rational> {
        self.levels
            .iter()
            .map(|(&i, l)| {
                (
                    i,
                    Rational::from_integer(l.map_or(self.rank as u64, u64::from)),
                )
            })
            .collect()
    }
}

/// Largest level `cb_levels` resolves; deeper languages are reported as kernel.
pub const DEFAULT_MAX_LEVEL: u32 = 3;

/// Consecutive doublings over which a limit point's approximation must keep
/// improving. A single improvement is often a boundary effect of the
/// restriction.
pub const PERSISTENCE: u32 = 2;

/// Least member of `L_l` outside `L_j`, capped at `cap + 1`.
fn separation(family: &FamilyHandle, l: LanguageIndex, j: LanguageIndex, cap: u64) -> u64 {
    family
        .lang(l)
        .iter()
        .take_while(|&x| x <= cap)
        .find(|&x| !family.contains(j, x))
        .unwrap_or(cap + 1)
}

/// The restriction grown `2^step`-fold: its indices plus the listing up to
/// `2^step` times its largest index.
fn ladder_rung(family: &FamilyHandle, r: &Restriction, step: u32) -> Vec<LanguageIndex> {
    let top = *r.indices.last().expect("nonempty");
    let first = family.first_index();
    let mut v: Vec<LanguageIndex> = r.indices.clone();
    if step > 0 {
        let mut bound = top.max(first).max(1).saturating_mul(1u64 << step);
        if let Some(l) = family.last_index() {
            bound = bound.min(l);
        }
        v.extend(first..=bound);
        v.sort_unstable();
        v.dedup();
    }
    v
}

/// Derived sets `X^(s)` of the restriction and its doublings, built on demand.
struct Ladder<'a> {
    family: &'a FamilyHandle,
    restriction: &'a Restriction,
    cap: u64,
    // derived[s][j] = X^(s) of rung j
    derived: Vec<Vec<Option<Vec<LanguageIndex>>>>,
    separations: BTreeMap<(LanguageIndex, LanguageIndex), u64>,
}

impl Ladder<'_> {
    /// How far the best proper sublanguage in `y` agrees with `L_l`, never
    /// below the least member of `L_l`.
    fn isolation_scale(&mut self, l: LanguageIndex, y: &[LanguageIndex]) -> u64 {
        let (f, cap) = (self.family, self.cap);
        let floor = f.nth(l, 1).unwrap_or(0).min(cap + 1);
        let mut best = floor;
        for &j in y {
            if j != l && f.relation(j, l) == Relation::ProperSubset {
                let d = *self
                    .separations
                    .entry((l, j))
                    .or_insert_with(|| separation(f, l, j, cap));
                best = best.max(d);
            }
        }
        best
    }

    fn get(&mut self, s: usize, j: usize) -> Vec<LanguageIndex> {
        if self.derived.len() <= s {
            self.derived.resize(s + 1, Vec::new());
        }
        if self.derived[s].len() <= j {
            self.derived[s].resize(j + 1, None);
        }
        if let Some(v) = &self.derived[s][j] {
            return v.clone();
        }
        let v = if s == 0 {
            ladder_rung(self.family, self.restriction, j as u32)
        } else {
            let y = self.get(s - 1, j);
            let ups: Vec<Vec<LanguageIndex>> = (1..=PERSISTENCE as usize)
                .map(|k| self.get(s - 1, j + k))
                .collect();
            let mut out = Vec::new();
            for &l in &y {
                let mut prev = self.isolation_scale(l, &y);
                let mut keeps = prev <= self.cap;
                for up in &ups {
                    if !keeps {
                        break;
                    }
                    let next = self.isolation_scale(l, up);
                    keeps = next > prev;
                    prev = next;
                }
                if keeps {
                    out.push(l);
                }
            }
            out
        };
        self.derived[s][j] = Some(v.clone());
        v
    }
}

/// Iterated derived sets of the restriction.
///
/// The isolation scale of `L` in a set `Y` is the longest initial segment of
/// `L` on which some proper sublanguage in `Y` agrees with it. `L` is a limit
/// point of `Y` when that scale keeps growing as the restriction is doubled
/// [`PERSISTENCE`] times, i.e. every `U_{L,F}` examined still holds another
/// language. Membership is examined on strings up to the horizon.
pub fn cb_levels(
    family: &FamilyHandle,
    restriction: &Restriction,
) -> Result<LevelMap, TopologyError> {
    cb_levels_with(family, restriction, DEFAULT_MAX_LEVEL)
}

pub fn cb_levels_with(
    family: &FamilyHandle,
    restriction: &Restriction,
    max_level: u32,
) -> Result<LevelMap, TopologyError> {
    let mut ladder = Ladder {
        family,
        restriction,
        cap: restriction.horizon,
        derived: Vec::new(),
        separations: BTreeMap::new(),
    };
    let mut levels = BTreeMap::new();
    let mut current = ladder.get(0, 0);
    let mut sizes = alloc::vec![current.len()];
    let mut stage = 0u32;
    while !current.is_empty() && stage <= max_level {
        let next = ladder.get(stage as usize + 1, 0);
        for &i in &current {
            if !next.contains(&i) {
                levels.insert(i, Some(stage));
            }
        }
        stage += 1;
        sizes.push(next.len());
        current = next;
    }
    let kernel = current;
    for &i in &kernel {
        levels.insert(i, None);
    }
    let rank = stage;
    let key = |i: LanguageIndex| levels[&i].unwrap_or(rank);
    let order = topological_order(family, &restriction.indices, |a, b| {
        (key(a), a).cmp(&(key(b), b))
    })?;
    let ell = consecutive(&order);
    let levels = restriction
        .indices
        .iter()
        .map(|&i| (i, levels[&i]))
        .collect();
    Ok(LevelMap {
        restriction: restriction.clone(),
        levels,
        rank,
        kernel,
        ell,
        derived_sizes: sizes,
    })
}

/// Deterministic topological order of the `⊊` DAG: among ready languages
/// the smallest under `priority` goes first.
fn topological_order(
    family: &FamilyHandle,
    indices: &[LanguageIndex],
    priority: impl Fn(LanguageIndex, LanguageIndex) -> core::cmp::Ordering,
) -> Result<Vec<LanguageIndex>, TopologyError> {
    let n = indices.len();
    // below[b] lists the a with L_a ⊊ L_b
    let mut pending = alloc::vec![0usize; n];
    let mut above: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            if a != b && family.relation(indices[a], indices[b]) == Relation::ProperSubset {
                pending[b] += 1;
                above[a].push(b);
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&k| pending[k] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let (pos, _) = ready
            .iter()
            .enumerate()
            .min_by(|x, y| priority(indices[*x.1], indices[*y.1]))
            .expect("nonempty");
        let k = ready.swap_remove(pos);
        order.push(indices[k]);
        for &b in &above[k] {
            pending[b] -= 1;
            if pending[b] == 0 {
                ready.push(b);
            }
        }
    }
    if order.len() != n {
        return Err(TopologyError::Cycle);
    }
    Ok(order)
}

fn consecutive(order: &[LanguageIndex]) -> BTreeMap<LanguageIndex, Rational> {
    order
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, Rational::from_integer(p as u64 + 1)))
        .collect()
}

/// A linear extension of `⊊` on the restriction, ties broken by index.
pub fn linear_extension(
    family: &FamilyHandle,
    restriction: &Restriction,
) -> Result<BTreeMap<LanguageIndex, Rational>, TopologyError> {
    let order = topological_order(family, &restriction.indices, |a, b| a.cmp(&b))?;
    Ok(consecutive(&order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedAtHorizon,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::VerifiedAtHorizon => "verified-at-horizon",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub sequence: Vec<LanguageIndex>,
    pub terminal: LanguageIndex,
    pub horizon: u64,
    /// `b_sets[k-1]` holds the members of `B_k` up to the horizon.
    pub b_sets: Vec<Vec<StringId>>,
    pub verdict: Verdict,
    pub witness: Option<String>,
    /// Whether `B_k` used the family's exact fixing function.
    pub analytic: bool,
    /// Number of leading terminal members that lie in some `B_k`.
    pub covered_prefix: u64,
    /// Terminal members up to the horizon outside every `B_k`.
    pub uncovered: u64,
    #[serde(with = "crate::ratio::opt_text")]
    pub max_upper_density_estimate: Option<Rational>,
    #[serde(skip)]
    pub upper_density_estimates: Vec<Rational>,
}

/// Density horizon used for per-language estimates in tower reports.
pub const TOWER_DENSITY_HORIZON: u64 = 10_000;

/// `B_k` membership of `x` for a finite sequence: the least `k` with
/// `x ∈ Λ_i` for every listed `i ≥ k`.
fn truncated_fix(family: &FamilyHandle, seq: &[LanguageIndex], x: StringId) -> Option<usize> {
    let mut k = seq.len();
    while k > 0 && family.contains(seq[k - 1], x) {
        k -= 1;
    }
    (k < seq.len()).then_some(k + 1)
}

fn is_declared_prefix(
    family: &FamilyHandle,
    seq: &[LanguageIndex],
    terminal: LanguageIndex,
) -> bool {
    family.declared_tower(terminal).is_some()
        && seq
            .iter()
            .enumerate()
            .all(|(k, &i)| family.tower_member(k as u64 + 1) == Some(i))
}

/// Checks the tower conditions for `seq` up to `horizon`.
pub fn verify_tower(
    family: &FamilyHandle,
    seq: &[LanguageIndex],
    terminal: LanguageIndex,
    horizon: u64,
) -> Result<TowerReport, TopologyError> {
    if seq.len() < 2 {
        return Err(TopologyError::ShortSequence);
    }
    for &i in seq.iter().chain([&terminal]) {
        if !family.is_valid_index(i) {
            return Err(TopologyError::BadIndex(i));
        }
    }
    let m = seq.len();
    let analytic = is_declared_prefix(family, seq, terminal);
    let mut b_sets: Vec<Vec<StringId>> = alloc::vec![Vec::new(); m];
    let mut uncovered = 0u64;
    let mut covered_prefix = 0u64;
    let mut prefix_open = true;
    for x in family.lang(terminal).iter().take_while(|&x| x <= horizon) {
        let k = if analytic {
            family
                .tower_fix(x)
                .filter(|&k| k as usize <= m)
                .map(|k| k as usize)
        } else {
            truncated_fix(family, seq, x)
        };
        match k {
            Some(k) => {
                b_sets[k - 1].push(x);
                if prefix_open {
                    covered_prefix += 1;
                }
            }
            None => {
                uncovered += 1;
                prefix_open = false;
            }
        }
    }
    let mut report = TowerReport {
        sequence: seq.to_vec(),
        terminal,
        horizon,
        b_sets,
        verdict: Verdict::Inconclusive,
        witness: None,
        analytic,
        covered_prefix,
        uncovered,
        max_upper_density_estimate: None,
        upper_density_estimates: Vec::new(),
    };
    if let Some(reason) = family.tower_obstruction(terminal) {
        report.verdict = Verdict::Refuted;
        report.witness = Some(reason);
        return Ok(report);
    }
    if let Some(&bad) = seq
        .iter()
        .find(|&&i| family.relation(i, terminal) != Relation::ProperSubset)
    {
        report.verdict = Verdict::Refuted;
        report.witness = Some(format!("L_{bad} is not a proper subset of L_{terminal}"));
        return Ok(report);
    }
    let empty = report.b_sets.iter().position(|b| b.is_empty());
    if let (Some(k), true) = (empty, analytic) {
        report.verdict = Verdict::Refuted;
        report.witness = Some(format!("B_{} is empty", k + 1));
        return Ok(report);
    }
    let n_density = TOWER_DENSITY_HORIZON.min(family.count_le(terminal, u64::MAX).max(1));
    let mut estimates = Vec::with_capacity(m);
    for &i in seq {
        let e = language_density_estimate(family, i, terminal, n_density, n_density / 2)?;
        estimates.push(e.upper_est);
    }
    report.max_upper_density_estimate = estimates.iter().max().copied();
    report.upper_density_estimates = estimates;
    if empty.is_none() && covered_prefix >= m as u64 {
        report.verdict = Verdict::VerifiedAtHorizon;
    }
    Ok(report)
}

/// Extracts a tower from a feasible sequence `(step, J_step)` fed by the
/// enumeration `w_1, w_2, …`.
///
/// First builds distinct languages by repeatedly taking the leftmost later
/// entry that contains every string up to the first one missed by the
/// current language. Then partitions positions into maximal runs with equal
/// `D_i = B_1 ∪ … ∪ B_i` and keeps, per run, one language missing a string
/// that the next run fixes.
pub fn extract_tower(
    family: &FamilyHandle,
    feasible: &[(u64, LanguageIndex)],
    enumeration: &[StringId],
    terminal: LanguageIndex,
    horizon: u64,
) -> Result<Vec<LanguageIndex>, TopologyError> {
    for &(step, j) in feasible {
        if !family.is_valid_index(j) {
            return Err(TopologyError::BadIndex(j));
        }
        if family.relation(j, terminal) != Relation::ProperSubset {
            return Err(TopologyError::Infeasible {
                step,
                reason: format!("L_{j} is not a proper subset of L_{terminal}"),
            });
        }
        if step == 0 || step as usize > enumeration.len() {
            return Err(TopologyError::Infeasible {
                step,
                reason: "step outside the enumeration".into(),
            });
        }
        if let Some(w) = enumeration[..step as usize]
            .iter()
            .find(|&&w| !family.contains(j, w))
        {
            return Err(TopologyError::Infeasible {
                step,
                reason: format!("w = {w} is not in L_{j}"),
            });
        }
    }
    if let Some(w) = enumeration.iter().find(|&&w| !family.contains(terminal, w)) {
        return Err(TopologyError::Infeasible {
            step: 0,
            reason: format!("{w} is not in the terminal"),
        });
    }
    // distinct languages, each containing every string the previous one missed
    let mut distinct = Vec::new();
    let mut pos = 0usize;
    if feasible.is_empty() {
        return Err(TopologyError::Inconclusive(horizon));
    }
    distinct.push(feasible[0].1);
    loop {
        let cur = *distinct.last().expect("nonempty");
        let Some(miss) = enumeration.iter().position(|&w| !family.contains(cur, w)) else {
            break;
        };
        let need = &enumeration[..=miss];
        let next = (pos + 1..feasible.len())
            .find(|&p| need.iter().all(|&w| family.contains(feasible[p].1, w)));
        match next {
            Some(p) => {
                pos = p;
                distinct.push(feasible[p].1);
            }
            None => break,
        }
    }
    // runs of equal D_i and one representative per closed run
    let fix: Vec<Option<usize>> = family
        .lang(terminal)
        .iter()
        .take_while(|&x| x <= horizon)
        .map(|x| truncated_fix(family, &distinct, x))
        .collect::<Vec<_>>();
    let members: Vec<StringId> = family
        .lang(terminal)
        .iter()
        .take_while(|&x| x <= horizon)
        .collect();
    let d_size = |i: usize| fix.iter().filter(|k| k.is_some_and(|k| k <= i)).count();
    let mut result = Vec::new();
    let mut a = 1usize;
    while a <= distinct.len() {
        let base = d_size(a);
        let mut b = a + 1;
        while b <= distinct.len() && d_size(b) == base {
            b += 1;
        }
        if b > distinct.len() {
            break;
        }
        // strings newly fixed at b and missing from some language of the run
        let fresh: Vec<StringId> = members
            .iter()
            .zip(&fix)
            .filter(|(_, k)| **k == Some(b))
            .map(|(&x, _)| x)
            .collect();
        let keep = (a..b).find(|&i| fresh.iter().any(|&w| !family.contains(distinct[i - 1], w)));
        match keep {
            Some(i) => result.push(distinct[i - 1]),
            None => return Err(TopologyError::Inconclusive(horizon)),
        }
        a = b;
    }
    if result.len() < 2 {
        return Err(TopologyError::Inconclusive(horizon));
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthEstimate {
    #[serde(with = "crate::ratio::text")]
    pub value: Rational,
    /// No tower was found but none was ruled out either.
    pub inconclusive: bool,
    pub witness: Option<String>,
    pub tower: Vec<LanguageIndex>,
    pub label: &'static str,
}

/// Minimum over found towers of the largest per-language upper-density
/// estimate; 1 when no tower is found.
pub fn estimate_truth_index(
    family: &FamilyHandle,
    terminal: LanguageIndex,
    search_depth: usize,
    horizon: u64,
) -> Result<TruthEstimate, TopologyError> {
    let label = crate::density::ESTIMATE_LABEL;
    if let Some(reason) = family.tower_obstruction(terminal) {
        return Ok(TruthEstimate {
            value: Rational::from_integer(1),
            inconclusive: false,
            witness: Some(reason),
            tower: Vec::new(),
            label,
        });
    }
    let depth = search_depth.max(2);
    let mut candidates: Vec<Vec<LanguageIndex>> = Vec::new();
    if family.declared_tower(terminal).is_some() {
        let seq: Vec<LanguageIndex> = (1..=depth as u64)
            .map_while(|k| family.tower_member(k))
            .collect();
        candidates.push(seq);
    }
    if let Some(seq) = greedy_tower(family, terminal, depth, horizon)? {
        candidates.push(seq);
    }
    let mut best: Option<(Rational, Vec<LanguageIndex>)> = None;
    for seq in candidates {
        if seq.len() < 2 {
            continue;
        }
        let report = verify_tower(family, &seq, terminal, horizon)?;
        if report.verdict != Verdict::VerifiedAtHorizon {
            continue;
        }
        let v = report
            .max_upper_density_estimate
            .unwrap_or(Rational::from_integer(1));
        if best.as_ref().map_or(true, |(b, _)| v < *b) {
            best = Some((v, seq));
        }
    }
    Ok(match best {
        Some((value, tower)) => TruthEstimate {
            value,
            inconclusive: false,
            witness: None,
            tower,
            label,
        },
        None => TruthEstimate {
            value: Rational::from_integer(1),
            inconclusive: true,
            witness: None,
            tower: Vec::new(),
            label,
        },
    })
}

/// Greedy construction: each next language keeps every string fixed so far,
/// adds the earliest unfixed terminal string and has the smallest density
/// estimate. Backtracks at most three levels.
fn greedy_tower(
    family: &FamilyHandle,
    terminal: LanguageIndex,
    depth: usize,
    horizon: u64,
) -> Result<Option<Vec<LanguageIndex>>, TopologyError> {
    const BACKTRACK: usize = 3;
    let first = family.first_index();
    let mut last = first + (4 * depth as u64).max(64);
    if let Some(l) = family.last_index() {
        last = last.min(l);
    }
    let n_density = 2000.min(family.count_le(terminal, u64::MAX).max(1));
    let mut pool: Vec<(Rational, LanguageIndex)> = Vec::new();
    for i in first..=last {
        if i != terminal && family.relation(i, terminal) == Relation::ProperSubset {
            let e = language_density_estimate(family, i, terminal, n_density, n_density / 2)?;
            pool.push((e.upper_est, i));
        }
    }
    pool.sort();
    let members: Vec<StringId> = family
        .lang(terminal)
        .iter()
        .take_while(|&x| x <= horizon)
        .collect();

    fn extend(
        family: &FamilyHandle,
        pool: &[(Rational, LanguageIndex)],
        members: &[StringId],
        seq: &mut Vec<LanguageIndex>,
        fixed: &mut Vec<StringId>,
        depth: usize,
        budget: &mut usize,
    ) -> bool {
        if seq.len() >= depth {
            return true;
        }
        let Some(&target) = members.iter().find(|x| !fixed.contains(x)) else {
            return seq.len() >= 2;
        };
        let mut tries = 0;
        for &(_, i) in pool {
            if seq.contains(&i)
                || !family.contains(i, target)
                || !fixed.iter().all(|&x| family.contains(i, x))
            {
                continue;
            }
            if tries > 0 {
                if *budget == 0 {
                    return false;
                }
                *budget -= 1;
            }
            tries += 1;
            let added: Vec<StringId> = if seq.is_empty() {
                members
                    .iter()
                    .copied()
                    .filter(|&x| family.contains(i, x))
                    .collect()
            } else {
                alloc::vec![target]
            };
            let before = fixed.len();
            seq.push(i);
            fixed.extend(added);
            if extend(family, pool, members, seq, fixed, depth, budget) {
                return true;
            }
            seq.pop();
            fixed.truncate(before);
        }
        false
    }

    let mut seq = Vec::new();
    let mut fixed = Vec::new();
    let mut budget = BACKTRACK;
    Ok(extend(
        family,
        &pool,
        &members,
        &mut seq,
        &mut fixed,
        depth,
        &mut budget,
    )
    .then_some(seq))
}
