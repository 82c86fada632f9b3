//! The generation game: adversary and generator alternate for `T` steps.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::adversaries::{self, AdversaryError, AdversarySpec};
use crate::chain::first_equal_index;
use crate::families::{FamilyHandle, FamilySpec, LanguageIndex, StringId};
use crate::generators::{self, GenError, GeneratorSpec, LevelSource};

pub const VERSION: &str = concat!("genlimit ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("adversary: {0}")]
    Adversary(#[from] AdversaryError),
    #[error("generator at step {t}: {source}")]
    Generator { t: u64, source: GenError },
    #[error("adversary at step {t}: {source}")]
    AdversaryStep { t: u64, source: AdversaryError },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub family: FamilySpec,
    /// Index of the true language `K`.
    #[serde(rename = "true")]
    pub true_index: LanguageIndex,
    pub adversary: AdversarySpec,
    pub generator: GeneratorSpec,
    pub steps: u64,
}

impl GameConfig {
    pub fn new(
        family: FamilySpec,
        true_index: LanguageIndex,
        adversary: AdversarySpec,
        generator: GeneratorSpec,
        steps: u64,
    ) -> Self {
        GameConfig {
            family,
            true_index,
            adversary,
            generator,
            steps,
        }
    }

    /// Checks the config against the loaded family and returns `z`, the
    /// first index listing `K`.
    pub fn validate(&self, family: &FamilyHandle) -> Result<LanguageIndex, GameError> {
        if self.steps == 0 {
            return Err(GameError::Config("steps must be at least 1".to_string()));
        }
        if !family.is_valid_index(self.true_index) {
            return Err(GameError::Config(alloc::format!(
                "true language index {} is not valid for {}",
                self.true_index,
                family.spec()
            )));
        }
        Ok(first_equal_index(family, self.true_index))
    }
}

/// Config as echoed at the head of a transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub version: String,
    pub config: GameConfig,
    pub z: LanguageIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub w: StringId,
    /// Guessed index `i_t`, absent for purely element-based generators.
    pub i: Option<LanguageIndex>,
    pub o: StringId,
    pub event: String,
    pub fallback_target: Option<LanguageIndex>,
    pub token: Option<u64>,
    /// Language the output was drawn from when it differs from the guess.
    pub source: Option<LanguageIndex>,
    pub chain_len: usize,
    pub chain_truncated: bool,
    pub s_size: u64,
    /// Language the adversary pretends to enumerate, if any.
    pub pretended: Option<LanguageIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub header: Header,
    pub records: Vec<StepRecord>,
}

impl Transcript {
    pub fn config(&self) -> &GameConfig {
        &self.header.config
    }

    pub fn outputs(&self) -> impl Iterator<Item = StringId> + '_ {
        self.records.iter().map(|r| r.o)
    }
}

/// Plays `config` on an already loaded family. `script` holds the strings of
/// a scripted adversary.
pub fn run_game(
    config: &GameConfig,
    family: &FamilyHandle,
    script: Option<Vec<StringId>>,
) -> Result<Transcript, GameError> {
    let z = config.validate(family)?;
    let k = config.true_index;
    let mut adversary = adversaries::build(&config.adversary, family, k, script)?;
    let mut generator = generators::build(&config.generator, family, LevelSource::Declared)
        .map_err(|source| GameError::Generator { t: 0, source })?;
    let mut records = Vec::with_capacity(config.steps as usize);
    for t in 1..=config.steps {
        let w = adversary
            .next()
            .map_err(|source| GameError::AdversaryStep { t, source })?;
        let pretended = adversary.pretended();
        let d = generator
            .step(w)
            .map_err(|source| GameError::Generator { t, source })?;
        adversary.observe_output(d.output);
        let (fallback_target, token) = match d.event {
            generators::Event::Fallback { target, token } => (Some(target), token),
            _ => (None, None),
        };
        records.push(StepRecord {
            t,
            w,
            i: d.guess,
            o: d.output,
            event: d.event.name().to_string(),
            fallback_target,
            token,
            source: d.target,
            chain_len: d.chain_len,
            chain_truncated: d.truncated,
            s_size: d.s_size,
            pretended,
        });
    }
    Ok(Transcript {
        header: Header {
            version: VERSION.to_string(),
            config: config.clone(),
            z,
        },
        records,
    })
}
