//! Finiteness, level-transitivity and topological finite generation of
//! `G_P`, and the combined classifier.

mod shortcuts;
mod transitivity;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{hausdorff_dimension, HausdorffDimension, PatternGroup, RestrictionTower};
use crate::perm::Permutation;
use crate::permgroup::{identify_small_group, Fingerprint, PermutationGroup};
use crate::tree::LeafNumbering;

pub use shortcuts::{abelian_shortcut, is_nilpotent, nilpotent_wreath_shortcut};
pub use transitivity::{level_transitivity, level_transitivity_at, TransitivityTrace};

/// An element of `St_G(n-1)|_{X^[n]}` outside `[G_n, G_n]`, where
/// `G_n = G_P|_{X^[n]}`. Proves `G_P` is not topologically finitely
/// generated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NotFgWitness {
    pub level: usize,
    /// Leaf permutation, lex numbering.
    pub element: Permutation,
}

impl NotFgWitness {
    /// Recomputes the membership facts the witness relies on.
    pub fn recheck(&self, tower: &RestrictionTower) -> Result<bool> {
        let g = tower.restriction_group(self.level)?;
        let t = tower.level_stabilizer(self.level - 1, self.level)?;
        Ok(t.contains(&self.element)? && !g.derived_subgroup().contains(&self.element)?)
    }
}

/// Generators of `St_G(n-1)|_{X^[n]}`, each inside `[S_n, S_n]` with
/// `S_n = St_G(d-1)|_{X^[n]}`. Proves topological finite generation of a
/// level-transitive `G_P`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FgCertificate {
    pub level: usize,
    pub stabilizer_generators: Vec<Permutation>,
}

impl FgCertificate {
    pub fn recheck(&self, tower: &RestrictionTower) -> Result<bool> {
        let d = tower.pattern().depth();
        let t = tower.level_stabilizer(self.level - 1, self.level)?;
        let listed = PermutationGroup::new(t.degree(), self.stabilizer_generators.clone())?;
        if !listed.same_group(&t)? {
            return Ok(false);
        }
        let s = tower.level_stabilizer(d - 1, self.level)?;
        let ds = s.derived_subgroup();
        for g in &self.stabilizer_generators {
            if !ds.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Trivial,
    Finite {
        order: u64,
    },
    #[serde(rename = "NotFG")]
    NotFinitelyGenerated {
        level: usize,
        witness: NotFgWitness,
    },
    #[serde(rename = "FG")]
    FinitelyGenerated {
        level: usize,
        certificate: FgCertificate,
    },
    Undecided {
        bound: usize,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Trivial => "Trivial",
            Verdict::Finite { .. } => "Finite",
            Verdict::NotFinitelyGenerated { .. } => "NotFG",
            Verdict::FinitelyGenerated { .. } => "FG",
            Verdict::Undecided { .. } => "Undecided",
        }
    }

    pub fn witness_level(&self) -> Option<usize> {
        match self {
            Verdict::NotFinitelyGenerated { level, .. }
            | Verdict::FinitelyGenerated { level, .. } => Some(*level),
            _ => None,
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, Verdict::Undecided { .. })
    }
}

/// `G_P` is finite iff `St_P(d-1)` is trivial, and then `G_P ≅ P`.
pub fn is_finite(p: &PatternGroup) -> Result<bool> {
    p.require_minimal()?;
    Ok(p.bottom_stabilizer_order() == 1)
}

fn check_level(tower: &RestrictionTower, n: usize) -> Result<()> {
    let d = tower.pattern().depth();
    if n < d {
        return Err(Error::domain(format!(
            "criterion level {n} is below the pattern depth {d}"
        )));
    }
    Ok(())
}

fn leaf_perms(gens: &[crate::tree::TreeAutomorphism]) -> Vec<Permutation> {
    gens.iter()
        .map(|g| g.to_leaf_permutation_with(LeafNumbering::Lex))
        .collect()
}

/// The first planted generator of `St_G(n-1)|_{X^[n]}` outside
/// `[G_n, G_n]`, if any. `None` does not imply finite generation.
pub fn find_not_fg_witness(tower: &RestrictionTower, n: usize) -> Result<Option<NotFgWitness>> {
    check_level(tower, n)?;
    let g = tower.restriction_group(n)?;
    let derived = g.derived_subgroup();
    for t in leaf_perms(&tower.planted_bottom_generators(n)?) {
        if !derived.contains(&t)? {
            return Ok(Some(NotFgWitness {
                level: n,
                element: t,
            }));
        }
    }
    Ok(None)
}

/// Certificate that `[S_n, S_n] ⊇ St_G(n-1)|_{X^[n]}`, if it holds.
/// Requires `level_transitive`, the caller's answer from
/// [`level_transitivity`].
pub fn find_fg_certificate(
    tower: &RestrictionTower,
    level_transitive: bool,
    n: usize,
) -> Result<Option<FgCertificate>> {
    if !level_transitive {
        return Err(Error::Precondition(
            "the finite generation criterion needs a level-transitive group".into(),
        ));
    }
    check_level(tower, n)?;
    let d = tower.pattern().depth();
    let s = tower.level_stabilizer(d - 1, n)?;
    let derived = s.derived_subgroup();
    let gens = leaf_perms(&tower.planted_bottom_generators(n)?);
    for t in &gens {
        if !derived.contains(t)? {
            return Ok(None);
        }
    }
    Ok(Some(FgCertificate {
        level: n,
        stabilizer_generators: gens,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderFormula {
    /// `|P|`.
    pub p: usize,
    /// `|St_P(d-1)|`.
    pub m: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub alphabet: usize,
    pub depth: usize,
    /// `|P|` of the input before minimization.
    pub input_order: usize,
    /// Generators of the minimal pattern group, lex leaf numbering.
    pub generators: Vec<Permutation>,
    pub order_formula: OrderFormula,
    pub verdict: Verdict,
    pub witness_level: Option<usize>,
    pub level_transitive: Option<bool>,
    pub fingerprint: Option<Fingerprint>,
    pub isomorphism_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff_dimension: Option<HausdorffDimension>,
}

impl ClassificationRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Minimizes `p` and decides what it can about `G_P` using levels up to
/// `max_n`.
pub fn classify(p: &PatternGroup, max_n: usize) -> Result<ClassificationRecord> {
    let q = p.minimize()?.with_small_generators();
    let d = q.depth();
    if max_n < d {
        return Err(Error::domain(format!(
            "max level {max_n} is below the pattern depth {d}"
        )));
    }
    let m = q.bottom_stabilizer_order();
    let mut record = ClassificationRecord {
        alphabet: q.alphabet().size(),
        depth: d,
        input_order: p.order(),
        generators: leaf_perms(q.generators()),
        order_formula: OrderFormula { p: q.order(), m },
        verdict: Verdict::Trivial,
        witness_level: None,
        level_transitive: None,
        fingerprint: None,
        isomorphism_type: None,
        hausdorff_dimension: None,
    };
    if q.is_trivial() {
        return Ok(record);
    }
    if m == 1 {
        let group = q.to_permutation_group(LeafNumbering::Lex);
        record.fingerprint = Some(Fingerprint::of(&group)?);
        record.isomorphism_type = identify_small_group(&group)?.map(str::to_owned);
        record.verdict = Verdict::Finite {
            order: q.order() as u64,
        };
        return Ok(record);
    }
    let (transitive, _) = level_transitivity(&q)?;
    if q.alphabet().size() == 2 && !transitive {
        return Err(Error::Internal(
            "an infinite group over the binary alphabet must be level-transitive, but the limit group is not transitive"
                .into(),
        ));
    }
    record.level_transitive = Some(transitive);
    record.hausdorff_dimension = Some(hausdorff_dimension(&q)?);
    let tower = RestrictionTower::new(&q)?;
    record.verdict = decide(&tower, transitive, d, max_n)?;
    record.witness_level = record.verdict.witness_level();
    Ok(record)
}

/// First verdict from levels `from..=max_n` for an infinite minimal group.
pub(crate) fn decide(
    tower: &RestrictionTower,
    transitive: bool,
    from: usize,
    max_n: usize,
) -> Result<Verdict> {
    for n in from..=max_n {
        if let Some(witness) = find_not_fg_witness(tower, n)? {
            return Ok(Verdict::NotFinitelyGenerated { level: n, witness });
        }
        if transitive {
            if let Some(certificate) = find_fg_certificate(tower, true, n)? {
                return Ok(Verdict::FinitelyGenerated {
                    level: n,
                    certificate,
                });
            }
        }
    }
    Ok(Verdict::Undecided { bound: max_n })
}
