//! Cartesian sweeps declared in a TOML file.
//!
//! ```toml
//! format = "genlimit-sweep"
//! version = 1
//! steps = 2000
//! output_dir = "out"          # relative to the config file
//! transcripts = false
//! adversaries = ["straight", "tower-pretender"]
//! generators = ["km", "fallback-general"]
//!
//! [[family]]
//! spec = "prefix-multiples(100)"
//! true = [0, 3]
//! ```

use std::path::{Path, PathBuf};

use genlimit_core::game::GameConfig;
use genlimit_core::metrics::{AnalysisOptions, Metrics};
use genlimit_core::{ratio, FamilyHandle, FamilySpec, LanguageIndex, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::formats;
use crate::run;

pub const SWEEP_FORMAT: &str = "genlimit-sweep";
pub const SWEEP_VERSION: u32 = 1;
pub const RESULTS_FILE: &str = "results.csv";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub format: String,
    pub version: u32,
    pub steps: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub transcripts: bool,
    #[serde(default)]
    pub family: Vec<FamilyEntry>,
    #[serde(default)]
    pub adversaries: Vec<String>,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub spec: String,
    #[serde(rename = "true")]
    pub true_indices: Vec<LanguageIndex>,
}

impl SweepConfig {
    pub fn parse(path: &Path, text: &str) -> Result<SweepConfig> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| HarnessError::parse(path, e))?;
        if cfg.format != SWEEP_FORMAT {
            return Err(HarnessError::parse(
                path,
                format!("expected format = \"{SWEEP_FORMAT}\""),
            ));
        }
        if cfg.version != SWEEP_VERSION {
            return Err(HarnessError::parse(
                path,
                format!("unsupported version {}", cfg.version),
            ));
        }
        if cfg.steps == 0 {
            return Err(HarnessError::Config("steps must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<SweepConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::parse(path, &text)?;
        if let (Some(dir), Some(base)) = (&cfg.output_dir, path.parent()) {
            cfg.output_dir = Some(base.join(dir));
        }
        Ok(cfg)
    }

    /// Grid points in config order: family, true index, adversary, generator.
    pub fn combos(&self) -> Vec<Combo> {
        let mut out = Vec::new();
        for (f, fam) in self.family.iter().enumerate() {
            for &k in &fam.true_indices {
                for a in &self.adversaries {
                    for g in &self.generators {
                        out.push(Combo {
                            id: out.len(),
                            family_entry: f,
                            family: fam.spec.clone(),
                            true_index: k,
                            adversary: a.clone(),
                            generator: g.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combo {
    pub id: usize,
    family_entry: usize,
    pub family: String,
    pub true_index: LanguageIndex,
    pub adversary: String,
    pub generator: String,
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub id: usize,
    pub family: String,
    #[serde(rename = "true")]
    pub true_index: LanguageIndex,
    pub adversary: String,
    pub generator: String,
    pub steps: u64,
    pub status: String,
    pub t_star: Option<u64>,
    pub t_star_index: Option<u64>,
    pub outputs_in_k: Option<u64>,
    pub accuracy_count: Option<u64>,
    /// `N=ratio` pairs separated by `;`.
    pub densities: String,
    pub tail_min: String,
    pub tail_max: String,
    pub breadth_min: String,
    pub breadth_max: String,
    pub density_csv: String,
    pub error: String,
}

impl Row {
    pub fn is_error(&self) -> bool {
        self.status != "ok"
    }
}

fn dec(r: &Rational) -> String {
    ratio::to_decimal(r, 9)
}

fn density_file(c: &Combo) -> String {
    format!("density-{:03}.csv", c.id)
}

fn transcript_file(c: &Combo) -> String {
    format!("transcript-{:03}.jsonl", c.id)
}

fn error_row(c: &Combo, steps: u64, e: &HarnessError) -> Row {
    Row {
        id: c.id,
        family: c.family.clone(),
        true_index: c.true_index,
        adversary: c.adversary.clone(),
        generator: c.generator.clone(),
        steps,
        status: "error".into(),
        t_star: None,
        t_star_index: None,
        outputs_in_k: None,
        accuracy_count: None,
        densities: String::new(),
        tail_min: String::new(),
        tail_max: String::new(),
        breadth_min: String::new(),
        breadth_max: String::new(),
        density_csv: String::new(),
        error: e.to_string(),
    }
}

fn ok_row(c: &Combo, steps: u64, m: &Metrics, density_csv: String) -> Row {
    let densities = m
        .horizons
        .iter()
        .zip(&m.densities)
        .map(|(n, r)| format!("{n}={}", dec(r)))
        .collect::<Vec<_>>()
        .join(";");
    Row {
        id: c.id,
        family: c.family.clone(),
        true_index: c.true_index,
        adversary: c.adversary.clone(),
        generator: c.generator.clone(),
        steps,
        status: "ok".into(),
        t_star: m.t_star,
        t_star_index: m.t_star_index,
        outputs_in_k: Some(m.outputs_in_k),
        accuracy_count: Some(m.accuracy_count),
        densities,
        tail_min: dec(&m.tail_min),
        tail_max: dec(&m.tail_max),
        breadth_min: m.breadth_min.as_ref().map(dec).unwrap_or_default(),
        breadth_max: m.breadth_max.as_ref().map(dec).unwrap_or_default(),
        density_csv,
        error: String::new(),
    }
}

fn run_combo(
    cfg: &SweepConfig,
    family: &std::result::Result<FamilyHandle, String>,
    c: &Combo,
    options: &AnalysisOptions,
) -> Row {
    let attempt = || -> Result<Row> {
        let family = family
            .as_ref()
            .map_err(|e| HarnessError::Config(e.clone()))?;
        let spec: FamilySpec = c.family.parse()?;
        let adversary = c
            .adversary
            .parse()
            .map_err(|e| HarnessError::Config(format!("{e}")))?;
        let generator = c
            .generator
            .parse()
            .map_err(|e| HarnessError::Config(format!("{e}")))?;
        let config = GameConfig::new(spec, c.true_index, adversary, generator, cfg.steps);
        let out = run::run_loaded(&config, family, options)?;
        let mut density_csv = String::new();
        if let Some(dir) = &cfg.output_dir {
            density_csv = density_file(c);
            formats::save_density_csv(&dir.join(&density_csv), &out.profile)?;
            if cfg.transcripts {
                formats::save_transcript(&dir.join(transcript_file(c)), &out.transcript)?;
            }
        }
        Ok(ok_row(c, cfg.steps, &out.metrics, density_csv))
    };
    attempt().unwrap_or_else(|e| error_row(c, cfg.steps, &e))
}

#[derive(Debug)]
pub struct SweepReport {
    pub rows: Vec<Row>,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_error()).count()
    }
}

/// Runs every combo. Rows come back in config order whatever the scheduling.
pub fn sweep(cfg: &SweepConfig, options: &AnalysisOptions) -> Result<SweepReport> {
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let families: Vec<std::result::Result<FamilyHandle, String>> = cfg
        .family
        .iter()
        .map(|f| {
            f.spec
                .parse::<FamilySpec>()
                .map_err(HarnessError::from)
                .and_then(|s| formats::load_family(&s))
                .map_err(|e| e.to_string())
        })
        .collect();
    let combos = cfg.combos();
    let rows: Vec<Row> = combos
        .par_iter()
        .map(|c| run_combo(cfg, &families[c.family_entry], c, options))
        .collect();
    let report = SweepReport { rows };
    if let Some(dir) = &cfg.output_dir {
        let path = dir.join(RESULTS_FILE);
        let f = std::fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
        write_rows(f, &report.rows).map_err(|e| HarnessError::io(&path, e.into()))?;
    }
    Ok(report)
}

/// Results table as CSV; an empty table still carries the header.
pub fn write_rows<W: std::io::Write>(w: W, rows: &[Row]) -> std::result::Result<(), csv::Error> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record([
        "id",
        "family",
        "true",
        "adversary",
        "generator",
        "steps",
        "status",
        "t_star",
        "t_star_index",
        "outputs_in_k",
        "accuracy_count",
        "densities",
        "tail_min",
        "tail_max",
        "breadth_min",
        "breadth_max",
        "density_csv",
        "error",
    ])?;
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
