//! The 32 depth-4 pattern groups `P_ijk = <a_i, b_j, c_k>` on 16 leaves.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{find_fg_certificate, find_not_fg_witness, level_transitivity};
use crate::error::Result;
use crate::pattern::{PatternGroup, RestrictionTower};
use crate::perm::Permutation;
use crate::permgroup::Fingerprint;
use crate::tree::{Alphabet, LeafNumbering};

pub const A_CYCLES: [&str; 4] = [
    "(1,9)(2,10)(3,11)(4,12)(5,13)(6,14)(7,15)(8,16)",
    "(1,10,2,9)(3,11)(4,12)(5,14,6,13)(7,15)(8,16)",
    "(1,10)(2,9)(3,11)(4,12)(5,13)(6,14)(7,15)(8,16)",
    "(1,9,2,10)(3,11)(4,12)(5,14,6,13)(7,15)(8,16)",
];

pub const B_CYCLES: [&str; 2] = ["(1,5)(2,6)(3,7)(4,8)(9,10)", "(1,6)(2,5)(3,7)(4,8)(9,10)"];

pub const C_CYCLES: [&str; 4] = [
    "(1,3)(2,4)",
    "(1,4,2,3)",
    "(1,3)(2,4)(5,6)",
    "(1,4,2,3)(5,6)",
];

const DEPTH: usize = 4;
const LEAVES: usize = 16;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// 1-based indices `(i, j, k)`.
    pub index: (usize, usize, usize),
    pub generators: [Permutation; 3],
}

impl CatalogEntry {
    pub fn label(&self) -> String {
        let (i, j, k) = self.index;
        format!("P_{i}{j}{k}")
    }

    pub fn pattern(&self, numbering: LeafNumbering) -> Result<PatternGroup> {
        PatternGroup::from_leaf_generators(Alphabet::BINARY, DEPTH, &self.generators, numbering)
    }

    /// Pattern-group file text with the transcribed cycle data.
    pub fn file_text(&self, numbering: LeafNumbering) -> String {
        let (i, j, k) = self.index;
        format!(
            "# {} = <a_{i}, b_{j}, c_{k}>, leaf numbering {numbering}\n2 4\nleafperms:\n{}\n{}\n{}\n",
            self.label(),
            self.generators[0],
            self.generators[1],
            self.generators[2]
        )
    }
}

/// The 32 triples in lexicographic order of `(i, j, k)`.
pub fn depth4_catalog() -> Vec<CatalogEntry> {
    let parse = |s: &str| Permutation::parse_cycles(s, LEAVES).expect("catalog cycle data parses");
    let mut out = Vec::with_capacity(32);
    for (i, a) in A_CYCLES.iter().enumerate() {
        for (j, b) in B_CYCLES.iter().enumerate() {
            for (k, c) in C_CYCLES.iter().enumerate() {
                out.push(CatalogEntry {
                    index: (i + 1, j + 1, k + 1),
                    generators: [parse(a), parse(b), parse(c)],
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogGroupReport {
    pub label: String,
    pub order: usize,
    pub minimal: bool,
    /// `|P|_{X^[3]}|`; equals 128 exactly when it is all of `Aut X^[3]`.
    pub restriction_to_depth3_order: usize,
    pub m: usize,
    pub infinite: bool,
    pub level_transitive: bool,
    /// Levels in `check_levels` at which the finite generation certificate
    /// holds.
    pub certificate_levels: Vec<usize>,
    /// Levels in `check_levels` at which a non-generation witness exists.
    pub witness_levels: Vec<usize>,
    pub fingerprint: Option<Fingerprint>,
    /// Names of the failed properties; empty on success.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Depth4Report {
    pub numbering: LeafNumbering,
    pub check_levels: Vec<usize>,
    pub expected_certificate_level: usize,
    pub groups: Vec<CatalogGroupReport>,
    /// Labels grouped by identical fingerprint.
    pub fingerprint_buckets: Vec<Vec<String>>,
    pub passed: bool,
}

impl Depth4Report {
    pub fn bucket_count(&self) -> usize {
        self.fingerprint_buckets.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per failure, naming the group, the property and the
    /// numbering.
    pub fn diagnostics(&self) -> Vec<String> {
        self.groups
            .iter()
            .flat_map(|g| {
                g.failures
                    .iter()
                    .map(move |f| format!("{}: {f} (leaf numbering {})", g.label, self.numbering))
            })
            .collect()
    }
}

fn verify_entry(
    entry: &CatalogEntry,
    numbering: LeafNumbering,
    check_levels: &[usize],
    expected_level: usize,
) -> Result<CatalogGroupReport> {
    let p = match entry.pattern(numbering) {
        Ok(p) => p,
        Err(e) => {
            return Ok(CatalogGroupReport {
                label: entry.label(),
                order: 0,
                minimal: false,
                restriction_to_depth3_order: 0,
                m: 0,
                infinite: false,
                level_transitive: false,
                certificate_levels: vec![],
                witness_levels: vec![],
                fingerprint: None,
                failures: vec![format!("generators are not tree automorphisms: {e}")],
            })
        }
    };
    let mut failures = Vec::new();
    let minimal = p.is_minimal();
    let restricted = p.restrictions(3)?.len();
    let m = p.bottom_stabilizer_order();
    let fingerprint = Some(Fingerprint::of(
        &p.to_permutation_group(LeafNumbering::Lex),
    )?);
    if p.order() != 4096 {
        failures.push(format!("order {} != 4096", p.order()));
    }
    if restricted != 128 {
        failures.push(format!(
            "restriction to X^[3] has order {restricted}, not 128"
        ));
    }
    let mut level_transitive = false;
    let mut certificate_levels = Vec::new();
    let mut witness_levels = Vec::new();
    if !minimal {
        failures.push("not minimal".into());
    } else {
        level_transitive = level_transitivity(&p)?.0;
        if !level_transitive {
            failures.push("not level-transitive".into());
        }
        let tower = RestrictionTower::new(&p)?;
        for &n in check_levels {
            if find_not_fg_witness(&tower, n)?.is_some() {
                witness_levels.push(n);
            }
            if level_transitive && find_fg_certificate(&tower, true, n)?.is_some() {
                certificate_levels.push(n);
            }
        }
        let expected: Vec<usize> = check_levels
            .iter()
            .copied()
            .filter(|&n| n >= expected_level)
            .collect();
        if certificate_levels != expected {
            failures.push(format!(
                "certificate levels {certificate_levels:?}, expected {expected:?}"
            ));
        }
        if !witness_levels.is_empty() {
            failures.push(format!(
                "non-generation witness at levels {witness_levels:?}"
            ));
        }
    }
    if m == 1 {
        failures.push("finite (trivial bottom stabilizer)".into());
    }
    Ok(CatalogGroupReport {
        label: entry.label(),
        order: p.order(),
        minimal,
        restriction_to_depth3_order: restricted,
        m,
        infinite: m > 1,
        level_transitive,
        certificate_levels,
        witness_levels,
        fingerprint,
        failures,
    })
}

/// Checks all 32 groups under `numbering`, running both criteria at every
/// level in `check_levels`.
pub fn verify_depth4(
    numbering: LeafNumbering,
    check_levels: &[usize],
    expected_level: usize,
) -> Result<Depth4Report> {
    let catalog = depth4_catalog();
    let groups: Vec<CatalogGroupReport> = catalog
        .par_iter()
        .map(|e| verify_entry(e, numbering, check_levels, expected_level))
        .collect::<Result<_>>()?;
    let mut buckets: BTreeMap<&Option<Fingerprint>, Vec<String>> = BTreeMap::new();
    for g in &groups {
        buckets
            .entry(&g.fingerprint)
            .or_default()
            .push(g.label.clone());
    }
    let mut fingerprint_buckets: Vec<Vec<String>> = buckets.into_values().collect();
    fingerprint_buckets.sort();
    let passed = groups.iter().all(|g| g.failures.is_empty());
    Ok(Depth4Report {
        numbering,
        check_levels: check_levels.to_vec(),
        expected_certificate_level: expected_level,
        groups,
        fingerprint_buckets,
        passed,
    })
}

/// Tries lex numbering, then reversed. Returns every report produced, the
/// last one being the passing one if any passed.
pub fn verify_depth4_with_fallback(
    check_levels: &[usize],
    expected_level: usize,
) -> Result<Vec<Depth4Report>> {
    let mut reports = Vec::new();
    for numbering in [LeafNumbering::Lex, LeafNumbering::Reversed] {
        let report = verify_depth4(numbering, check_levels, expected_level)?;
        let passed = report.passed;
        reports.push(report);
        if passed {
            break;
        }
    }
    Ok(reports)
}
