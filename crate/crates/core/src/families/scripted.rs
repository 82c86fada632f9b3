//! Finite families described by data: closed-form rules or eventually
//! periodic sets, plus an explicit relation table.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::markers::Markers;
use super::{FamilyError, LanguageIndex, Rational, Relation, StringId};

/// One scripted language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ScriptedRule {
    /// All positive integers.
    Naturals,
    /// Positive multiples of `of`.
    Multiples { of: u64 },
    /// `{1..k} ∪ period·ℕ₊`.
    PrefixMultiples { k: u64, period: u64 },
    /// `∪_i [a_i, a_i + n]` with `a_0 = start`, `a_i = base^i`.
    Marker {
        n: u64,
        base: u64,
        #[serde(default)]
        start: u64,
    },
    /// Positive integers except the listed ones.
    Cofinite { missing: Vec<u64> },
    /// `prefix ∪ {x ≥ from : x mod period ∈ residues}`.
    Periodic {
        #[serde(default)]
        prefix: Vec<u64>,
        from: u64,
        period: u64,
        residues: Vec<u64>,
    },
}

/// Parsed content of a scripted family file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScriptedFamilyDef {
    pub languages: Vec<ScriptedRule>,
    /// Relation of the first index to the second; mirrors are implied.
    pub relations: Vec<(LanguageIndex, LanguageIndex, Relation)>,
    /// Optional Cantor-Bendixson levels, one per language.
    #[serde(default)]
    pub levels: Option<Vec<u32>>,
    /// Optional linear extension values, one per language.
    #[serde(default, with = "crate::ratio::opt_list")]
    pub ell: Option<Vec<Rational>>,
    /// Bound under which declared relations are spot-checked at load.
    pub witness_bound: u64,
}

impl ScriptedRule {
    fn validate(&self) -> Result<(), String> {
        match self {
            ScriptedRule::Naturals => Ok(()),
            ScriptedRule::Multiples { of } if *of >= 1 => Ok(()),
            ScriptedRule::Multiples { .. } => Err("multiples needs of ≥ 1".into()),
            ScriptedRule::PrefixMultiples { period, .. } if *period >= 2 => Ok(()),
            ScriptedRule::PrefixMultiples { .. } => Err("prefix-multiples needs period ≥ 2".into()),
            ScriptedRule::Marker { base, start, .. } if *base >= 2 && *start <= 1 => Ok(()),
            ScriptedRule::Marker { .. } => Err("marker needs base ≥ 2 and start ∈ {0,1}".into()),
            ScriptedRule::Cofinite { missing } => {
                if missing.windows(2).all(|w| w[0] < w[1]) {
                    Ok(())
                } else {
                    Err("cofinite missing list must be strictly increasing".into())
                }
            }
            ScriptedRule::Periodic {
                prefix,
                from,
                period,
                residues,
            } => {
                if *period == 0 {
                    return Err("periodic rule needs period ≥ 1".into());
                }
                if residues.is_empty() {
                    return Err(
                        "periodic rule needs at least one residue (languages are infinite)".into(),
                    );
                }
                if !residues.windows(2).all(|w| w[0] < w[1]) || residues.iter().any(|r| r >= period)
                {
                    return Err("residues must be strictly increasing and below the period".into());
                }
                if !prefix.windows(2).all(|w| w[0] < w[1]) {
                    return Err("prefix must be strictly increasing".into());
                }
                if prefix.iter().any(|p| p >= from) {
                    return Err("prefix entries must lie below `from`".into());
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, x: StringId) -> bool {
        match self {
            ScriptedRule::Naturals => x >= 1,
            ScriptedRule::Multiples { of } => x >= 1 && x % of == 0,
            ScriptedRule::PrefixMultiples { k, period } => x >= 1 && (x <= *k || x % period == 0),
            ScriptedRule::Marker { n, base, start } => Markers::new(*base, *start).contains(*n, x),
            ScriptedRule::Cofinite { missing } => x >= 1 && missing.binary_search(&x).is_err(),
            ScriptedRule::Periodic {
                prefix,
                from,
                period,
                residues,
            } => {
                if x < *from {
                    prefix.binary_search(&x).is_ok()
                } else {
                    residues.binary_search(&(x % period)).is_ok()
                }
            }
        }
    }

    pub fn count_le(&self, x: StringId) -> u64 {
        match self {
            ScriptedRule::Naturals => x,
            ScriptedRule::Multiples { of } => x / of,
            ScriptedRule::PrefixMultiples { k, period } => {
                let head = x.min(*k);
                head + (x / period - head / period)
            }
            ScriptedRule::Marker { n, base, start } => Markers::new(*base, *start).count_le(*n, x),
            ScriptedRule::Cofinite { missing } => {
                let gone = missing.iter().filter(|&&m| m >= 1 && m <= x).count() as u64;
                x - gone
            }
            ScriptedRule::Periodic {
                prefix,
                from,
                period,
                residues,
            } => {
                let head = prefix.iter().filter(|&&p| p <= x).count() as u64;
                if x < *from {
                    return head;
                }
                let upto = |y: u64, r: u64| if y < r { 0 } else { (y - r) / period + 1 };
                let tail: u64 = residues
                    .iter()
                    .map(|&r| upto(x, r) - if *from == 0 { 0 } else { upto(from - 1, r) })
                    .sum();
                head + tail
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Scripted {
    pub rules: Vec<ScriptedRule>,
    /// `rel[a][b]` for 0-based positions.
    pub rel: Vec<Vec<Relation>>,
    pub levels: Option<Vec<u32>>,
    pub ell: Option<Vec<Rational>>,
}

impl Scripted {
    pub fn build(def: ScriptedFamilyDef) -> Result<Scripted, FamilyError> {
        let n = def.languages.len();
        if n == 0 {
            return Err(FamilyError::ScriptedMalformed(
                "family lists no languages".into(),
            ));
        }
        for (k, rule) in def.languages.iter().enumerate() {
            rule.validate()
                .map_err(|e| FamilyError::ScriptedMalformed(format!("language {}: {e}", k + 1)))?;
        }
        let mut table: BTreeMap<(usize, usize), Relation> = BTreeMap::new();
        for &(i, j, r) in &def.relations {
            if i < 1 || j < 1 || i as usize > n || j as usize > n {
                return Err(FamilyError::ScriptedMalformed(format!(
                    "relation names unknown index ({i}, {j})"
                )));
            }
            let (a, b) = (i as usize - 1, j as usize - 1);
            if a == b {
                if r != Relation::Equal {
                    return Err(FamilyError::ScriptedMalformed(format!(
                        "language {i} must be Equal to itself"
                    )));
                }
                continue;
            }
            for (key, val) in [((a, b), r), ((b, a), r.mirror())] {
                if let Some(prev) = table.insert(key, val) {
                    if prev != val {
                        return Err(FamilyError::ScriptedMalformed(format!(
                            "contradictory relations declared for ({i}, {j})"
                        )));
                    }
                }
            }
        }
        let mut rel = vec![vec![Relation::Equal; n]; n];
        for (a, row) in rel.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                if a == b {
                    continue;
                }
                *cell = *table
                    .get(&(a, b))
                    .ok_or(FamilyError::MissingRelation(a as u64 + 1, b as u64 + 1))?;
            }
        }
        if let Some(levels) = &def.levels {
            if levels.len() != n {
                return Err(FamilyError::ScriptedMalformed(
                    "levels must list one value per language".into(),
                ));
            }
        }
        if let Some(ell) = &def.ell {
            if ell.len() != n {
                return Err(FamilyError::ScriptedMalformed(
                    "ell must list one value per language".into(),
                ));
            }
        }
        let s = Scripted {
            rules: def.languages,
            rel,
            levels: def.levels,
            ell: def.ell,
        };
        s.spot_check(def.witness_bound.max(1))?;
        Ok(s)
    }

    /// Checks every declared relation against membership below `bound`.
    fn spot_check(&self, bound: u64) -> Result<(), FamilyError> {
        let n = self.rules.len();
        let members: Vec<Vec<u64>> = self
            .rules
            .iter()
            .map(|r| (0..=bound).filter(|&x| r.contains(x)).collect())
            .collect();
        for a in 0..n {
            if members[a].is_empty() {
                return Err(FamilyError::ScriptedMalformed(format!(
                    "language {} has no member below the witness bound {bound}",
                    a + 1
                )));
            }
            for b in 0..n {
                if a == b {
                    continue;
                }
                let a_in_b = members[a].iter().all(|&x| self.rules[b].contains(x));
                let b_in_a = members[b].iter().all(|&x| self.rules[a].contains(x));
                let seen = Relation::from_inclusions(a_in_b, b_in_a);
                let declared = self.rel[a][b];
                let ok = match declared {
                    // beyond the bound a declared difference may still appear
                    Relation::Incomparable => true,
                    Relation::ProperSubset => a_in_b,
                    Relation::ProperSuperset => b_in_a,
                    Relation::Equal => a_in_b && b_in_a,
                };
                let witnessed = match declared {
                    Relation::Incomparable => !a_in_b && !b_in_a,
                    Relation::ProperSubset => !b_in_a,
                    Relation::ProperSuperset => !a_in_b,
                    Relation::Equal => true,
                };
                if !ok || !witnessed {
                    return Err(FamilyError::ScriptedMalformed(format!(
                        "declared relation {:?} between {} and {} disagrees with members below {bound} (observed {:?})",
                        declared,
                        a + 1,
                        b + 1,
                        seen
                    )));
                }
            }
        }
        Ok(())
    }
}
