use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::PatternGroup;
use crate::tree::TreeAutomorphism;

/// The decreasing chain `P = P_0 > P_1 > ... > P_s = Q` for a fixed letter.
#[derive(Clone, Debug, Serialize)]
pub struct TransitivityTrace {
    pub letter: usize,
    /// `|P_0|, |P_1|, ..., |P_s|`; the last entry repeats only through
    /// `P_s = P_{s+1}`.
    pub orders: Vec<usize>,
    /// Root permutations of `Q` generate a group with this orbit of the
    /// letter, listed ascending.
    pub root_orbit: Vec<usize>,
    #[serde(skip)]
    pub limit: Vec<TreeAutomorphism>,
}

/// One step: keep `a ∈ P_n` whose restriction to depth `d - 1` is the
/// section below `x` of some `b ∈ P_n` fixing `x`.
fn refine(current: &[TreeAutomorphism], x: usize, d: usize) -> Vec<TreeAutomorphism> {
    let reachable: HashSet<TreeAutomorphism> = current
        .iter()
        .filter(|b| b.vertex_perm(0, 0)[x] as usize == x)
        .map(|b| b.section_restricted(1, x, d - 1))
        .collect();
    current
        .iter()
        .filter(|a| reachable.contains(&a.restrict(d - 1).expect("d >= 1")))
        .cloned()
        .collect()
}

/// Runs the chain for letter `x` and reports whether `Q` is transitive on
/// the alphabet.
pub fn level_transitivity_at(p: &PatternGroup, x: usize) -> Result<(bool, TransitivityTrace)> {
    p.require_minimal()?;
    let k = p.alphabet().size();
    if x >= k {
        return Err(Error::domain(format!(
            "letter {x} is outside the alphabet of size {k}"
        )));
    }
    let d = p.depth();
    let mut current: Vec<TreeAutomorphism> = p.elements().to_vec();
    let mut orders = vec![current.len()];
    loop {
        let next = refine(&current, x, d);
        if next.len() == current.len() {
            break;
        }
        orders.push(next.len());
        current = next;
    }
    let mut seen = vec![false; k];
    seen[x] = true;
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        for q in &current {
            let y = q.vertex_perm(0, 0)[orbit[i]] as usize;
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    let transitive = orbit.len() == k;
    Ok((
        transitive,
        TransitivityTrace {
            letter: x,
            orders,
            root_orbit: orbit,
            limit: current,
        },
    ))
}

/// Runs [`level_transitivity_at`] for every letter and checks that the
/// answers agree; returns the trace for letter 0.
pub fn level_transitivity(p: &PatternGroup) -> Result<(bool, TransitivityTrace)> {
    let (answer, trace) = level_transitivity_at(p, 0)?;
    for x in 1..p.alphabet().size() {
        let (other, _) = level_transitivity_at(p, x)?;
        if other != answer {
            return Err(Error::Internal(format!(
                "level-transitivity differs between letters 0 ({answer}) and {x} ({other})"
            )));
        }
    }
    Ok((answer, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::tree::{Alphabet, LeafNumbering};

    #[test]
    fn full_group_stabilizes_immediately() {
        let p = PatternGroup::full(Alphabet::BINARY, 3).unwrap();
        let (t, trace) = level_transitivity(&p).unwrap();
        assert!(t);
        assert_eq!(trace.orders, vec![128]);
    }

    #[test]
    fn alternating_fixing_a_letter_is_not_transitive() {
        let k = Alphabet::new(6).unwrap();
        let gens = ["(2,3,4)", "(2,3,4,5,6)"]
            .iter()
            .map(|s| Permutation::parse_cycles(s, 6).unwrap())
            .collect::<Vec<_>>();
        let p = PatternGroup::from_leaf_generators(k, 1, &gens, LeafNumbering::Lex).unwrap();
        assert_eq!(p.order(), 60);
        let (t, trace) = level_transitivity(&p).unwrap();
        assert!(!t);
        assert_eq!(trace.root_orbit, vec![0]);
    }

    #[test]
    fn trivial_is_not_transitive() {
        let p = PatternGroup::trivial(Alphabet::BINARY, 2).unwrap();
        assert!(!level_transitivity(&p).unwrap().0);
    }
}
