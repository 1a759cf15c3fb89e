//! Censuses of minimal pattern groups over the binary alphabet.

mod catalog;
mod grigorchuk;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{classify, ClassificationRecord};
use crate::error::{Error, Result};
use crate::pattern::PatternGroup;
use crate::permgroup::{all_subgroups, DEFAULT_SUBGROUP_BOUND};
use crate::tree::{Alphabet, LeafNumbering, TreeAutomorphism};

pub use catalog::{
    depth4_catalog, verify_depth4, verify_depth4_with_fallback, CatalogEntry, CatalogGroupReport,
    Depth4Report, A_CYCLES, B_CYCLES, C_CYCLES,
};
pub use grigorchuk::{grigorchuk_check, grigorchuk_generators, GrigorchukReport};

/// Largest depth for which [`enumerate_minimal`] enumerates all subgroups.
pub const MAX_ENUMERATION_DEPTH: usize = 3;

/// Every subgroup of `Aut X^[d]` for the binary alphabet, as pattern groups.
pub fn enumerate_subgroups(d: usize) -> Result<Vec<PatternGroup>> {
    if d == 0 {
        return Err(Error::domain("pattern depth must be at least 1"));
    }
    if d > MAX_ENUMERATION_DEPTH {
        return Err(Error::Unsupported(format!(
            "enumerating the subgroups of Aut X^[{d}] is out of scale (|Aut X^[4]| = 32768); \
             classify explicit groups instead, e.g. the depth-4 catalog"
        )));
    }
    let alphabet = Alphabet::BINARY;
    let full = PatternGroup::full(alphabet, d)?.to_permutation_group(LeafNumbering::Lex);
    all_subgroups(&full, DEFAULT_SUBGROUP_BOUND)?
        .par_iter()
        .map(|h| {
            PatternGroup::from_leaf_generators(alphabet, d, h.generators(), LeafNumbering::Lex)
        })
        .collect()
}

/// Distinct minimizations of `groups`, sorted by order and element list.
pub fn minimal_classes(groups: &[PatternGroup]) -> Result<Vec<PatternGroup>> {
    let minimized: Vec<PatternGroup> = groups
        .par_iter()
        .map(PatternGroup::minimize)
        .collect::<Result<_>>()?;
    let mut seen: HashSet<Vec<TreeAutomorphism>> = HashSet::new();
    let mut out: Vec<PatternGroup> = minimized
        .into_iter()
        .filter(|q| seen.insert(q.elements().to_vec()))
        .collect();
    out.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    Ok(out)
}

/// All minimal pattern groups of depth `d` over the binary alphabet.
pub fn enumerate_minimal(d: usize) -> Result<Vec<PatternGroup>> {
    minimal_classes(&enumerate_subgroups(d)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub depth: usize,
    pub max_n: usize,
    pub subgroup_count: usize,
    pub minimal_count: usize,
    /// Verdict name to count.
    pub verdicts: BTreeMap<String, usize>,
    /// Verdict name to (witness level to count).
    pub witness_levels: BTreeMap<String, BTreeMap<usize, usize>>,
    /// Isomorphism type (or `order N` when unnamed) of finite groups, to count.
    pub finite_types: BTreeMap<String, usize>,
    /// Number of distinct fingerprints among the finite groups.
    pub finite_fingerprint_classes: usize,
    pub records: Vec<ClassificationRecord>,
}

impl CensusReport {
    pub fn count(&self, verdict: &str) -> usize {
        self.verdicts.get(verdict).copied().unwrap_or(0)
    }

    pub fn count_at(&self, verdict: &str, level: usize) -> usize {
        self.witness_levels
            .get(verdict)
            .and_then(|m| m.get(&level))
            .copied()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes")
    }

    /// One row per minimal group.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "index,order,m,verdict,witness_level,level_transitive,isomorphism_type,generators\n",
        );
        for (i, r) in self.records.iter().enumerate() {
            let gens: Vec<String> = r.generators.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "{i},{},{},{},{},{},{},\"{}\"",
                r.order_formula.p,
                r.order_formula.m,
                r.verdict.name(),
                r.witness_level.map(|n| n.to_string()).unwrap_or_default(),
                r.level_transitive
                    .map(|t| t.to_string())
                    .unwrap_or_default(),
                r.isomorphism_type.clone().unwrap_or_default(),
                gens.join(" ")
            );
        }
        s
    }
}

/// Classifies `minimal` (already deduplicated) and aggregates.
pub fn census_of(
    depth: usize,
    subgroup_count: usize,
    minimal: &[PatternGroup],
    max_n: usize,
) -> Result<CensusReport> {
    let records: Vec<ClassificationRecord> = minimal
        .par_iter()
        .map(|p| classify(p, max_n))
        .collect::<Result<_>>()?;
    let mut verdicts = BTreeMap::new();
    let mut witness_levels: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut finite_types = BTreeMap::new();
    let mut fingerprints = HashSet::new();
    for r in &records {
        *verdicts.entry(r.verdict.name().to_string()).or_insert(0) += 1;
        if let Some(n) = r.witness_level {
            *witness_levels
                .entry(r.verdict.name().to_string())
                .or_default()
                .entry(n)
                .or_insert(0) += 1;
        }
        let name = match r.verdict.name() {
            "Trivial" => Some("1".to_string()),
            "Finite" => Some(
                r.isomorphism_type
                    .clone()
                    .unwrap_or_else(|| format!("order {}", r.order_formula.p)),
            ),
            _ => None,
        };
        if let Some(name) = name {
            *finite_types.entry(name).or_insert(0) += 1;
        }
        if let Some(fp) = &r.fingerprint {
            fingerprints.insert(fp.clone());
        }
    }
    Ok(CensusReport {
        depth,
        max_n,
        subgroup_count,
        minimal_count: minimal.len(),
        verdicts,
        witness_levels,
        finite_types,
        finite_fingerprint_classes: fingerprints.len(),
        records,
    })
}

/// Enumerates, minimizes and classifies every pattern group of depth `d`.
pub fn census(d: usize, max_n: usize) -> Result<CensusReport> {
    let subgroups = enumerate_subgroups(d)?;
    let minimal = minimal_classes(&subgroups)?;
    census_of(d, subgroups.len(), &minimal, max_n)
}

/// Census bound used when none is given.
pub fn default_max_n(d: usize) -> usize {
    d + 4
}
