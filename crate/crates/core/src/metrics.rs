//! Metrics of a finished game.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::density::{self, DensityError, DensityEstimate, DensityProfile, ESTIMATE_LABEL};
use crate::families::{FamilyHandle, LanguageIndex, Rational, Relation, StringId};
use crate::game::Transcript;
use crate::ratio;

pub const DEFAULT_HORIZONS: [u64; 5] = [500, 1000, 2000, 5000, 10_000];
pub const DEFAULT_WINDOW: u64 = 500;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Horizons `N` at which the density of `O ∩ K` in `K` is reported.
    pub horizons: Vec<u64>,
    /// Start of the tail window for extrema.
    pub window: u64,
    /// Horizon used for the per-step estimates `d_t`.
    pub d_horizon: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            horizons: DEFAULT_HORIZONS.to_vec(),
            window: DEFAULT_WINDOW,
            d_horizon: 10_000,
        }
    }
}

impl AnalysisOptions {
    pub fn max_horizon(&self) -> u64 {
        self.horizons.iter().copied().max().unwrap_or(0)
    }
}

/// Summary of one run. Densities are exact ratios over finite prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub steps: u64,
    pub true_index: LanguageIndex,
    /// Least `t*` such that every output from `t*` on lies in `K`.
    pub t_star: Option<u64>,
    /// Least step from which every guessed language is a subset of `K`.
    pub t_star_index: Option<u64>,
    pub outputs_in_k: u64,
    /// Steps with `L_{i_t} = K`.
    pub accuracy_count: u64,
    /// Density of `O ∩ K` among the first `N` members of `K`.
    #[serde(with = "ratio::list")]
    pub densities: Vec<Rational>,
    pub horizons: Vec<u64>,
    /// Extremes of the prefix density over every `N` in the tail window.
    #[serde(with = "ratio::text")]
    pub tail_min: Rational,
    #[serde(with = "ratio::text")]
    pub tail_max: Rational,
    /// Extremes of `d_t` over `t ≥ t*`, surrogates for its liminf/limsup.
    #[serde(with = "ratio::opt_text")]
    pub breadth_min: Option<Rational>,
    #[serde(with = "ratio::opt_text")]
    pub breadth_max: Option<Rational>,
    pub label: String,
    /// `d_t` per step, `None` when no index was guessed.
    #[serde(skip)]
    pub d: Vec<Option<Rational>>,
}

impl Metrics {
    /// Accurate steps among the first `t`.
    pub fn accuracy_upto(&self, transcript: &Transcript, family: &FamilyHandle, t: u64) -> u64 {
        let k = self.true_index;
        transcript
            .records
            .iter()
            .take(t as usize)
            .filter(|r| {
                r.i.is_some_and(|i| family.relation(i, k) == Relation::Equal)
            })
            .count() as u64
    }

    /// Steps whose `d_t` is at most `bound`.
    pub fn low_d_count(&self, bound: Rational) -> u64 {
        self.d
            .iter()
            .filter(|d| d.is_some_and(|d| d <= bound))
            .count() as u64
    }
}

/// Output set `O ∩ K`.
pub fn outputs_in(
    transcript: &Transcript,
    family: &FamilyHandle,
    k: LanguageIndex,
) -> BTreeSet<StringId> {
    transcript
        .outputs()
        .filter(|&o| family.contains(k, o))
        .collect()
}

/// Usable horizons: those within the size of `K`.
fn clamp_horizons(family: &FamilyHandle, k: LanguageIndex, hs: &[u64]) -> Vec<u64> {
    hs.iter()
        .copied()
        .filter(|&h| h > 0 && family.nth(k, h).is_some())
        .collect()
}

/// Profile of `O ∩ K` inside `K` at every horizon `stride, 2·stride, …`.
pub fn output_profile(
    transcript: &Transcript,
    family: &FamilyHandle,
    n_max: u64,
    stride: u64,
) -> Result<DensityProfile, DensityError> {
    let k = transcript.config().true_index;
    let o = outputs_in(transcript, family, k);
    density::density_profile(&o, family, k, n_max, stride)
}

/// Per-language `d` values, cached per index for a fixed `K`.
pub struct DCache<'f> {
    family: &'f FamilyHandle,
    k: LanguageIndex,
    n_max: u64,
    window: u64,
    cache: BTreeMap<LanguageIndex, Rational>,
}

impl<'f> DCache<'f> {
    pub fn new(family: &'f FamilyHandle, k: LanguageIndex, n_max: u64, window: u64) -> Self {
        DCache {
            family,
            k,
            n_max,
            window,
            cache: BTreeMap::new(),
        }
    }

    /// Upper tail estimate of the density of `L_i` in `K`.
    pub fn get(&mut self, i: LanguageIndex) -> Result<Rational, DensityError> {
        if let Some(&d) = self.cache.get(&i) {
            return Ok(d);
        }
        let d = if self.family.relation(i, self.k) == Relation::Equal {
            Rational::from_integer(1)
        } else {
            let est: DensityEstimate = density::language_density_estimate(
                self.family,
                i,
                self.k,
                self.n_max,
                self.window,
            )?;
            est.upper_est
        };
        self.cache.insert(i, d);
        Ok(d)
    }
}

/// Computes every [`Metrics`] field from a transcript.
pub fn analyze(
    transcript: &Transcript,
    family: &FamilyHandle,
    options: &AnalysisOptions,
) -> Result<Metrics, DensityError> {
    let k = transcript.config().true_index;
    let recs = &transcript.records;
    let steps = recs.len() as u64;

    let last_out = recs.iter().rposition(|r| !family.contains(k, r.o));
    let t_star = match last_out {
        None => Some(1),
        Some(p) if (p as u64) + 1 < steps => Some(p as u64 + 2),
        Some(_) => None,
    };
    let last_index_miss = recs
        .iter()
        .rposition(|r| r.i.map_or(true, |i| !family.relation(i, k).is_subset()));
    let t_star_index = match last_index_miss {
        None => Some(1),
        Some(p) if (p as u64) + 1 < steps => Some(p as u64 + 2),
        Some(_) => None,
    };

    let o = outputs_in(transcript, family, k);
    let horizons = clamp_horizons(family, k, &options.horizons);
    let profile = density::profile_at(&o, family, k, &horizons)?;

    let n_max = horizons.last().copied().unwrap_or(0);
    let (tail_min, tail_max) = if n_max >= options.window.max(1) {
        let dense = density::density_profile(&o, family, k, n_max, 1)?;
        let e = density::tail_extrema(&dense, options.window)?;
        (e.lower_est, e.upper_est)
    } else {
        (Rational::from_integer(0), Rational::from_integer(0))
    };

    let mut cache = DCache::new(family, k, options.d_horizon, options.window);
    let mut d = Vec::with_capacity(recs.len());
    let mut accuracy_count = 0;
    for r in recs {
        match r.i {
            Some(i) => {
                let v = cache.get(i)?;
                if family.relation(i, k) == Relation::Equal {
                    accuracy_count += 1;
                }
                d.push(Some(v));
            }
            None => d.push(None),
        }
    }
    let tail_d = t_star.map(|ts| {
        d[(ts - 1) as usize..]
            .iter()
            .flatten()
            .copied()
            .collect::<Vec<_>>()
    });
    let breadth_min = tail_d.as_ref().and_then(|v| v.iter().min().copied());
    let breadth_max = tail_d.as_ref().and_then(|v| v.iter().max().copied());

    Ok(Metrics {
        steps,
        true_index: k,
        t_star,
        t_star_index,
        outputs_in_k: o.len() as u64,
        accuracy_count,
        densities: profile.ratios(),
        horizons,
        tail_min,
        tail_max,
        breadth_min,
        breadth_max,
        label: ESTIMATE_LABEL.to_string(),
        d,
    })
}
