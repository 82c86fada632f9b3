//! Finite-horizon densities.
//!
//! Every value here is an exact ratio over a finite prefix. Limits are never
//! claimed: [`tail_extrema`] reports the extreme ratios over a tail window and
//! labels them as estimates.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::families::{FamilyHandle, LanguageIndex, Rational, StringId, StringSet};
use crate::ratio;

pub const ESTIMATE_LABEL: &str = "finite-horizon estimate";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("stride must lie in 1..=N_max")]
    BadStride,
    #[error("horizons must be strictly increasing")]
    UnsortedHorizons,
    #[error("tail window starting at {0} holds no horizon")]
    EmptyWindow(u64),
    #[error("the set has no member in the language")]
    EmptyIntersection,
    #[error("language {i} has fewer than {n} representable members")]
    BeyondUniverse { i: LanguageIndex, n: u64 },
}

/// Hits of a set inside the first `N` strings of a language, per horizon.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DensityProfile {
    pub horizons: Vec<u64>,
    pub hits: Vec<u64>,
}

impl DensityProfile {
    pub fn len(&self) -> usize {
        self.horizons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.horizons.is_empty()
    }

    pub fn ratio(&self, k: usize) -> Rational {
        Rational::new(self.hits[k], self.horizons[k])
    }

    pub fn ratios(&self) -> Vec<Rational> {
        (0..self.len()).map(|k| self.ratio(k)).collect()
    }

    /// `(N, hits, ratio)` rows with the ratio as a 9-significant-digit decimal.
    pub fn csv_rows(&self) -> impl Iterator<Item = (u64, u64, String)> + '_ {
        (0..self.len()).map(|k| {
            (
                self.horizons[k],
                self.hits[k],
                ratio::to_decimal(&self.ratio(k), 9),
            )
        })
    }
}

/// Tail-window extrema standing in for `limsup` / `liminf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityEstimate {
    pub upper_est: Rational,
    pub lower_est: Rational,
    pub window_start: u64,
    pub label: &'static str,
}

pub fn default_stride(n_max: u64) -> u64 {
    (n_max / 2000).max(1)
}

/// `|A ∩ {ψ_i(1), …, ψ_i(N)}| / N`.
pub fn prefix_density<S: StringSet>(
    a: &S,
    family: &FamilyHandle,
    i: LanguageIndex,
    n: u64,
) -> Result<Rational, DensityError> {
    let p = profile_at(a, family, i, &[n])?;
    Ok(p.ratio(0))
}

/// Profile at horizons `stride, 2·stride, …, N_max`.
pub fn density_profile<S: StringSet>(
    a: &S,
    family: &FamilyHandle,
    i: LanguageIndex,
    n_max: u64,
    stride: u64,
) -> Result<DensityProfile, DensityError> {
    if n_max == 0 {
        return Err(DensityError::ZeroHorizon);
    }
    if stride == 0 || stride > n_max {
        return Err(DensityError::BadStride);
    }
    let horizons: Vec<u64> = (1..=n_max / stride).map(|k| k * stride).collect();
    profile_at(a, family, i, &horizons)
}

/// Profile at arbitrary strictly increasing horizons.
pub fn profile_at<S: StringSet>(
    a: &S,
    family: &FamilyHandle,
    i: LanguageIndex,
    horizons: &[u64],
) -> Result<DensityProfile, DensityError> {
    if horizons.first() == Some(&0) {
        return Err(DensityError::ZeroHorizon);
    }
    if !horizons.windows(2).all(|w| w[0] < w[1]) {
        return Err(DensityError::UnsortedHorizons);
    }
    let mut hits = Vec::with_capacity(horizons.len());
    let mut count = 0u64;
    let mut rank = 0u64;
    for &h in horizons {
        while rank < h {
            rank += 1;
            let x = family
                .nth(i, rank)
                .ok_or(DensityError::BeyondUniverse { i, n: h })?;
            if a.contains(x) {
                count += 1;
            }
        }
        hits.push(count);
    }
    Ok(DensityProfile {
        horizons: horizons.to_vec(),
        hits,
    })
}

/// Max and min ratio over horizons `≥ window_start`.
pub fn tail_extrema(
    profile: &DensityProfile,
    window_start: u64,
) -> Result<DensityEstimate, DensityError> {
    let mut tail = (0..profile.len()).filter(|&k| profile.horizons[k] >= window_start);
    let first = tail.next().ok_or(DensityError::EmptyWindow(window_start))?;
    // a/b < c/d  iff  a·d < c·b
    let less = |a: usize, b: usize| {
        (profile.hits[a] as u128) * (profile.horizons[b] as u128)
            < (profile.hits[b] as u128) * (profile.horizons[a] as u128)
    };
    let (lo, hi) = tail.fold((first, first), |(lo, hi), k| {
        (
            if less(k, lo) { k } else { lo },
            if less(hi, k) { k } else { hi },
        )
    });
    Ok(DensityEstimate {
        upper_est: profile.ratio(hi),
        lower_est: profile.ratio(lo),
        window_start,
        label: ESTIMATE_LABEL,
    })
}

/// `|O ∩ L_i| / N_T` with `N_T` the largest `L_i`-rank among `O ∩ L_i`.
pub fn ordered_density(
    o: &BTreeSet<StringId>,
    family: &FamilyHandle,
    i: LanguageIndex,
) -> Result<Rational, DensityError> {
    let mut inside = 0u64;
    let mut top = None;
    for &x in o {
        if family.contains(i, x) {
            inside += 1;
            top = Some(x);
        }
    }
    let top = top.ok_or(DensityError::EmptyIntersection)?;
    Ok(Rational::new(inside, family.count_le(i, top)))
}

/// Incremental `μ_order` of a growing output set inside one language.
#[derive(Clone, Debug, Default)]
pub struct OrderedTracker {
    inside: u64,
    max_rank: u64,
}

impl OrderedTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seeds the tracker with the members of `o` inside `L_i`.
    pub fn seeded<'a>(
        family: &FamilyHandle,
        i: LanguageIndex,
        o: impl IntoIterator<Item = &'a StringId>,
    ) -> Self {
        let mut t = Self::new();
        for &x in o {
            t.observe(family, i, x);
        }
        t
    }

    pub fn observe(&mut self, family: &FamilyHandle, i: LanguageIndex, x: StringId) {
        if family.contains(i, x) {
            self.inside += 1;
            self.max_rank = self.max_rank.max(family.count_le(i, x));
        }
    }

    pub fn value(&self) -> Option<Rational> {
        (self.inside > 0).then(|| Rational::new(self.inside, self.max_rank))
    }

    /// `value ≥ target`, false while the intersection is empty.
    pub fn reaches(&self, target: Rational) -> bool {
        self.inside > 0 && Rational::new(self.inside, self.max_rank) >= target
    }
}

/// Upper/lower tail estimates of the density of `L_i` inside `L_k`.
pub fn language_density_estimate(
    family: &FamilyHandle,
    i: LanguageIndex,
    k: LanguageIndex,
    n_max: u64,
    window_start: u64,
) -> Result<DensityEstimate, DensityError> {
    let stride = default_stride(n_max);
    let nested = family.relation(i, k).is_subset();
    let profile = match if nested {
        nested_profile(family, i, k, n_max, stride)?
    } else {
        walk_profile(family, i, k, n_max, stride)?
    } {
        Some(p) => p,
        None => density_profile(&family.lang(i), family, k, n_max, stride)?,
    };
    tail_extrema(&profile, window_start.min(n_max))
}

/// Profile of `L_i ⊆ L_k` inside `L_k` from counts: the hits at horizon `N`
/// are the members of `L_i` up to the `N`-th member of `L_k`.
fn nested_profile(
    family: &FamilyHandle,
    i: LanguageIndex,
    k: LanguageIndex,
    n_max: u64,
    stride: u64,
) -> Result<Option<DensityProfile>, DensityError> {
    if n_max == 0 {
        return Err(DensityError::ZeroHorizon);
    }
    let horizons: Vec<u64> = (1..=n_max / stride).map(|j| j * stride).collect();
    let mut hits = Vec::with_capacity(horizons.len());
    for &h in &horizons {
        let top = family
            .nth(k, h)
            .ok_or(DensityError::BeyondUniverse { i: k, n: h })?;
        hits.push(family.count_le(i, top));
    }
    Ok(Some(DensityProfile { horizons, hits }))
}

/// The same profile as [`density_profile`] of `L_i` in `L_k`, computed by
/// walking the members of `L_i` instead of those of `L_k`. Gives up once the
/// walk is longer than `2·n_max`.
fn walk_profile(
    family: &FamilyHandle,
    i: LanguageIndex,
    k: LanguageIndex,
    n_max: u64,
    stride: u64,
) -> Result<Option<DensityProfile>, DensityError> {
    if n_max == 0 {
        return Err(DensityError::ZeroHorizon);
    }
    let top = family
        .nth(k, n_max)
        .ok_or(DensityError::BeyondUniverse { i: k, n: n_max })?;
    let mut ranks = Vec::new();
    for (c, x) in family.lang(i).iter().take_while(|&x| x <= top).enumerate() {
        if c as u64 >= 2 * n_max {
            return Ok(None);
        }
        if family.contains(k, x) {
            ranks.push(family.count_le(k, x));
        }
    }
    let horizons: Vec<u64> = (1..=n_max / stride).map(|j| j * stride).collect();
    let mut hits = Vec::with_capacity(horizons.len());
    let mut p = 0;
    for &h in &horizons {
        while p < ranks.len() && ranks[p] <= h {
            p += 1;
        }
        hits.push(p as u64);
    }
    Ok(Some(DensityProfile { horizons, hits }))
}
