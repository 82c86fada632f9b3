//! Language generation in the limit over countable families of languages on `ℕ`.
//!
//! The crate is `no_std` with `alloc`. It provides language families with
//! exact comparators, finite-horizon density measures, strictly critical
//! chains, five generation algorithms, adversary strategies, topology on
//! finite restrictions (Cantor-Bendixson levels, towers) and a game engine.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversaries;
pub mod chain;
pub mod density;
pub mod families;
pub mod game;
pub mod generators;
pub mod metrics;
pub mod ratio;
pub mod topology;

pub use families::{
    FamilyError, FamilyHandle, FamilyKind, FamilySpec, Lang, LanguageIndex, ParamValue, Rank,
    Rational, Relation, ScriptedFamilyDef, ScriptedRule, StringId, StringSet, TowerInfo,
};
