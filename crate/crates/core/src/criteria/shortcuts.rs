use num_traits::One;

use super::{NotFgWitness, Verdict};
use crate::error::{Error, Result};
use crate::pattern::PatternGroup;
use crate::perm::Permutation;
use crate::permgroup::PermutationGroup;
use crate::tree::LeafNumbering;

/// Lower central series reaches the trivial group.
pub fn is_nilpotent(g: &PermutationGroup) -> bool {
    let gens = g.reduced_generators();
    let mut current = g.clone();
    while !current.order().is_one() {
        let comms: Vec<Permutation> = current
            .reduced_generators()
            .iter()
            .flat_map(|h| gens.iter().map(move |x| Permutation::commutator(h, x)))
            .filter(|c| !c.is_identity())
            .collect();
        let next = g
            .normal_closure(&comms)
            .expect("commutators lie in the group");
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
    true
}

/// For `n = d`, `G_d = P` and `St_G(d-1)|_{X^[d]} = St_P(d-1)`.
fn witness_at_depth(p: &PatternGroup) -> Result<Option<NotFgWitness>> {
    let derived = p
        .to_permutation_group(LeafNumbering::Lex)
        .derived_subgroup();
    for t in p.level_stabilizer_generators(p.depth() - 1) {
        let t = t.to_leaf_permutation_with(LeafNumbering::Lex);
        if !derived.contains(&t)? {
            return Ok(Some(NotFgWitness {
                level: p.depth(),
                element: t,
            }));
        }
    }
    Ok(None)
}

fn finite_or_witness(p: &PatternGroup, rule: &str) -> Result<Verdict> {
    if p.bottom_stabilizer_order() == 1 {
        return Ok(Verdict::Finite {
            order: p.order() as u64,
        });
    }
    match witness_at_depth(p)? {
        Some(witness) => Ok(Verdict::NotFinitelyGenerated {
            level: p.depth(),
            witness,
        }),
        None => Err(Error::Internal(format!(
            "{rule} pattern group with nontrivial bottom stabilizer has no witness at its own depth"
        ))),
    }
}

/// Abelian `P`: finite if `St_P(d-1) = 1`, otherwise not finitely generated
/// with a witness at level `d`.
pub fn abelian_shortcut(p: &PatternGroup) -> Result<Option<Verdict>> {
    p.require_minimal()?;
    if p.is_trivial() {
        return Ok(Some(Verdict::Trivial));
    }
    if !p.is_abelian() {
        return Ok(None);
    }
    finite_or_witness(p, "abelian").map(Some)
}

/// Depth-2 nilpotent `P ≤ C ≀ C` with `C ≤ Sym(X)` cyclic: the same
/// dichotomy as the abelian case.
pub fn nilpotent_wreath_shortcut(p: &PatternGroup) -> Result<Option<Verdict>> {
    p.require_minimal()?;
    if p.depth() != 2 {
        return Ok(None);
    }
    if p.is_trivial() {
        return Ok(Some(Verdict::Trivial));
    }
    let k = p.alphabet().size();
    let mut letter_perms: Vec<Permutation> = Vec::new();
    for g in p.elements() {
        for (level, width) in [(0, 1), (1, k)] {
            for v in 0..width {
                let images: Vec<usize> = g
                    .vertex_perm(level, v)
                    .iter()
                    .map(|&y| y as usize)
                    .collect();
                letter_perms.push(Permutation::from_images(&images)?);
            }
        }
    }
    letter_perms.sort();
    letter_perms.dedup();
    let c = PermutationGroup::new(k, letter_perms.clone())?;
    let c_order = c.order();
    let cyclic = c.is_abelian()
        && letter_perms
            .iter()
            .any(|x| num_bigint::BigUint::from(x.order()) == c_order);
    if !cyclic || !is_nilpotent(&p.to_permutation_group(LeafNumbering::Lex)) {
        return Ok(None);
    }
    finite_or_witness(p, "nilpotent").map(Some)
}
