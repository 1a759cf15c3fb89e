//! The Grigorchuk generators `a, b, c, d`, truncated, compared with `P_123`.
//!
//! `a` swaps the root; `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.

use serde::Serialize;

use super::catalog::depth4_catalog;
use crate::error::Result;
use crate::pattern::PatternGroup;
use crate::tree::{Alphabet, LeafNumbering, TreeAutomorphism};

/// Truncation depth: every section of depth 4 below a vertex of depth at
/// most 4 exists.
pub const TRUNCATION_DEPTH: usize = 8;
const PATTERN_DEPTH: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    E,
    A,
    B,
    C,
    D,
}

impl State {
    fn swaps(self) -> bool {
        self == State::A
    }

    fn children(self) -> [State; 2] {
        match self {
            State::E | State::A => [State::E, State::E],
            State::B => [State::A, State::C],
            State::C => [State::A, State::D],
            State::D => [State::E, State::B],
        }
    }
}

fn truncate(start: State, depth: usize) -> TreeAutomorphism {
    let mut perms = Vec::new();
    let mut level = vec![start];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for s in &level {
            perms.push(if s.swaps() { vec![1, 0] } else { vec![0, 1] });
            next.extend(s.children());
        }
        level = next;
    }
    TreeAutomorphism::from_portrait(Alphabet::BINARY, depth, &perms).expect("valid portrait")
}

/// `[a, b, c, d]` truncated to `depth`.
pub fn grigorchuk_generators(depth: usize) -> [TreeAutomorphism; 4] {
    [State::A, State::B, State::C, State::D].map(|s| truncate(s, depth))
}

#[derive(Clone, Debug, Serialize)]
pub struct GrigorchukReport {
    pub numbering: LeafNumbering,
    /// `|<a,b,c,d>|_{X^[4]}|`.
    pub order: usize,
    pub p123_order: usize,
    pub equal_to_p123: bool,
    /// Every depth-4 section at a vertex of depth at most 4 lies in `P_123`.
    pub sections_in_p123: bool,
    /// `a^2 = 1` at every truncation depth up to 8.
    pub involution: bool,
}

impl GrigorchukReport {
    pub fn passed(&self) -> bool {
        self.order == 4096 && self.equal_to_p123 && self.sections_in_p123 && self.involution
    }
}

pub fn grigorchuk_check(numbering: LeafNumbering) -> Result<GrigorchukReport> {
    let gens = grigorchuk_generators(TRUNCATION_DEPTH);
    let restricted = gens
        .iter()
        .map(|g| g.restrict(PATTERN_DEPTH))
        .collect::<Result<Vec<_>>>()?;
    let g = PatternGroup::generate(Alphabet::BINARY, PATTERN_DEPTH, restricted)?;
    let entry = depth4_catalog()
        .into_iter()
        .find(|e| e.index == (1, 2, 3))
        .expect("P_123 is in the catalog");
    let (p123_order, equal, sections) = match entry.pattern(numbering) {
        Ok(p) => {
            let sections = gens.iter().all(|g| {
                (0..=TRUNCATION_DEPTH - PATTERN_DEPTH).all(|level| {
                    (0..Alphabet::BINARY.level_size(level))
                        .all(|v| p.contains(&g.section_restricted(level, v, PATTERN_DEPTH)))
                })
            });
            (p.order(), g == p, sections)
        }
        Err(_) => (0, false, false),
    };
    let involution = (1..=TRUNCATION_DEPTH).all(|n| {
        let a = truncate(State::A, n);
        a.compose(&a).map(|x| x.is_identity()).unwrap_or(false)
    });
    Ok(GrigorchukReport {
        numbering,
        order: g.order(),
        p123_order,
        equal_to_p123: equal,
        sections_in_p123: sections,
        involution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        let [a, b, c, d] = grigorchuk_generators(6);
        let id = TreeAutomorphism::identity(Alphabet::BINARY, 6);
        for g in [&a, &b, &c, &d] {
            assert_eq!(g.compose(g).unwrap(), id);
        }
        // bcd = 1
        assert_eq!(b.compose(&c).unwrap().compose(&d).unwrap(), id);
    }
}
