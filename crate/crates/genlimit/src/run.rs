//! A single game: load, play, analyze and persist.

use std::path::Path;

use genlimit_core::adversaries::AdversarySpec;
use genlimit_core::density::{self, DensityProfile};
use genlimit_core::game::{run_game, GameConfig, Transcript};
use genlimit_core::metrics::{analyze, output_profile, AnalysisOptions, Metrics};
use genlimit_core::FamilyHandle;

use crate::error::Result;
use crate::formats;

#[derive(Debug)]
pub struct RunOutput {
    pub transcript: Transcript,
    pub metrics: Metrics,
    pub profile: DensityProfile,
}

/// Reads the script of a scripted adversary, if any.
pub fn load_script(config: &GameConfig) -> Result<Option<Vec<u64>>> {
    match &config.adversary {
        AdversarySpec::Scripted { path } => Ok(Some(formats::read_script(Path::new(path))?)),
        _ => Ok(None),
    }
}

/// Density profile of the outputs in `K` up to the largest usable horizon.
pub fn profile(
    transcript: &Transcript,
    family: &FamilyHandle,
    metrics: &Metrics,
) -> Result<DensityProfile> {
    let n_max = metrics.horizons.last().copied().unwrap_or(0);
    if n_max == 0 {
        return Ok(DensityProfile {
            horizons: Vec::new(),
            hits: Vec::new(),
        });
    }
    Ok(output_profile(
        transcript,
        family,
        n_max,
        density::default_stride(n_max),
    )?)
}

/// Plays `config` on a loaded family and analyzes the result.
pub fn run_loaded(
    config: &GameConfig,
    family: &FamilyHandle,
    options: &AnalysisOptions,
) -> Result<RunOutput> {
    let script = load_script(config)?;
    let transcript = run_game(config, family, script)?;
    let metrics = analyze(&transcript, family, options)?;
    let profile = profile(&transcript, family, &metrics)?;
    Ok(RunOutput {
        transcript,
        metrics,
        profile,
    })
}

pub fn run(config: &GameConfig, options: &AnalysisOptions) -> Result<RunOutput> {
    let family = formats::load_family(&config.family)?;
    run_loaded(config, &family, options)
}

/// Writes the transcript and the density CSV where requested.
pub fn persist(out: &RunOutput, transcript: Option<&Path>, density: Option<&Path>) -> Result<()> {
    if let Some(p) = transcript {
        formats::save_transcript(p, &out.transcript)?;
    }
    if let Some(p) = density {
        formats::save_density_csv(p, &out.profile)?;
    }
    Ok(())
}

/// Recomputes metrics from a persisted transcript.
pub fn reanalyze(path: &Path, options: &AnalysisOptions) -> Result<(Transcript, Metrics)> {
    let transcript = formats::load_transcript(path)?;
    let family = formats::load_family(&transcript.config().family)?;
    let metrics = analyze(&transcript, &family, options)?;
    Ok((transcript, metrics))
}
