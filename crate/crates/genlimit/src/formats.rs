//! On-disk formats: scripted family files, adversary scripts, JSONL
//! transcripts and density CSVs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use genlimit_core::density::DensityProfile;
use genlimit_core::game::{Header, StepRecord, Transcript};
use genlimit_core::{
    FamilyError, FamilyHandle, FamilyKind, FamilySpec, LanguageIndex, Rational, Relation,
    ScriptedFamilyDef, ScriptedRule, StringId,
};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const FAMILY_FORMAT: &str = "genlimit-family";
pub const FAMILY_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    format: String,
    version: u32,
    witness_bound: u64,
    #[serde(default)]
    language: Vec<LanguageEntry>,
    #[serde(default)]
    relation: Vec<RelationEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LanguageEntry {
    #[serde(flatten)]
    rule: ScriptedRule,
    #[serde(default)]
    level: Option<u32>,
    #[serde(default)]
    ell: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    a: LanguageIndex,
    b: LanguageIndex,
    relation: Relation,
}

/// Either all languages carry the optional field or none does.
fn all_or_none<T>(path: &Path, what: &str, v: Vec<Option<T>>) -> Result<Option<Vec<T>>> {
    let present = v.iter().filter(|x| x.is_some()).count();
    if present == 0 {
        Ok(None)
    } else if present == v.len() {
        Ok(Some(v.into_iter().flatten().collect()))
    } else {
        Err(HarnessError::parse(
            path,
            format!("`{what}` must be given for every language or for none"),
        ))
    }
}

/// Parses a scripted family file.
pub fn parse_family_file(path: &Path, text: &str) -> Result<ScriptedFamilyDef> {
    let file: FamilyFile = toml::from_str(text).map_err(|e| HarnessError::parse(path, e))?;
    if file.format != FAMILY_FORMAT {
        return Err(HarnessError::parse(
            path,
            format!("expected format = \"{FAMILY_FORMAT}\""),
        ));
    }
    if file.version != FAMILY_VERSION {
        return Err(HarnessError::parse(
            path,
            format!("unsupported version {}", file.version),
        ));
    }
    let mut rules = Vec::new();
    let mut levels = Vec::new();
    let mut ell = Vec::new();
    for l in file.language {
        rules.push(l.rule);
        levels.push(l.level);
        let e = l
            .ell
            .map(|s| {
                genlimit_core::ratio::parse(&s)
                    .ok_or_else(|| HarnessError::parse(path, format!("bad ratio `{s}`")))
            })
            .transpose()?;
        ell.push(e);
    }
    Ok(ScriptedFamilyDef {
        languages: rules,
        relations: file
            .relation
            .into_iter()
            .map(|r| (r.a, r.b, r.relation))
            .collect(),
        levels: all_or_none(path, "level", levels)?,
        ell: all_or_none::<Rational>(path, "ell", ell)?,
        witness_bound: file.witness_bound,
    })
}

/// Loads any family; scripted ones are read from their `path`.
pub fn load_family(spec: &FamilySpec) -> Result<FamilyHandle> {
    if spec.kind != FamilyKind::Scripted {
        return Ok(FamilyHandle::load(spec)?);
    }
    let path = PathBuf::from(spec.path().ok_or(FamilyError::ScriptedNeedsDefinition)?);
    let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
    let def = parse_family_file(&path, &text)?;
    Ok(FamilyHandle::from_scripted(spec, def)?)
}

/// Parses an adversary script: one string per line, `#` starts a comment.
pub fn parse_script(path: &Path, text: &str) -> Result<Vec<StringId>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let x = body.parse().map_err(|_| {
            HarnessError::parse(path, format!("line {}: `{body}` is not a string id", n + 1))
        })?;
        out.push(x);
    }
    Ok(out)
}

pub fn read_script(path: &Path) -> Result<Vec<StringId>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_script(path, &text)
}

/// Writes a transcript as JSON lines: the header, then one record per step.
pub fn write_transcript<W: Write>(mut w: W, transcript: &Transcript) -> std::io::Result<()> {
    serde_json::to_writer(&mut w, &transcript.header)?;
    w.write_all(b"\n")?;
    for r in &transcript.records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn save_transcript(path: &Path, transcript: &Transcript) -> Result<()> {
    let f = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_transcript(BufWriter::new(f), transcript).map_err(|e| HarnessError::io(path, e))
}

pub fn read_transcript<R: BufRead>(path: &Path, r: R) -> Result<Transcript> {
    let mut lines = r.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| HarnessError::parse(path, "empty transcript"))?;
    let first = first.map_err(|e| HarnessError::io(path, e))?;
    let header: Header = serde_json::from_str(&first).map_err(|e| HarnessError::parse(path, e))?;
    let mut records = Vec::new();
    for (n, line) in lines {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: StepRecord = serde_json::from_str(&line)
            .map_err(|e| HarnessError::parse(path, format!("line {}: {e}", n + 1)))?;
        records.push(rec);
    }
    Ok(Transcript { header, records })
}

pub fn load_transcript(path: &Path) -> Result<Transcript> {
    let f = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_transcript(path, BufReader::new(f))
}

/// Density CSV with columns `N,hits,ratio`.
pub fn write_density_csv<W: Write>(w: W, profile: &DensityProfile) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N", "hits", "ratio"])?;
    for (n, hits, ratio) in profile.csv_rows() {
        out.write_record([n.to_string(), hits.to_string(), ratio])?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_density_csv(path: &Path, profile: &DensityProfile) -> Result<()> {
    let f = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_density_csv(BufWriter::new(f), profile).map_err(|e| HarnessError::io(path, e.into()))
}
