//! Pattern groups `P ≤ Aut X^[d]` and the self-similar groups of finite type
//! `G_P` they define.

mod graph;
pub mod io;
mod tower;

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::PermutationGroup;
use crate::tree::{full_automorphism_generators, Alphabet, LeafNumbering, TreeAutomorphism};

pub use graph::{PatternGraph, DOT_WARN_VERTICES};
pub use tower::{
    hausdorff_dimension, level_stabilizer_restriction, restriction_group, restriction_order,
    HausdorffDimension, RestrictionTower, TowerLevel,
};

/// Cap on the number of elements a pattern group may have when closed from
/// generators (`|Aut X^[4]|` for the binary alphabet is 32768).
pub const MAX_PATTERN_ORDER: usize = 1 << 20;

/// A subgroup of `Aut X^[d]` with its full element list.
#[derive(Clone)]
pub struct PatternGroup {
    alphabet: Alphabet,
    depth: usize,
    /// Sorted by the portrait order; the identity comes first.
    elements: Vec<TreeAutomorphism>,
    index: HashMap<TreeAutomorphism, usize>,
    generators: Vec<TreeAutomorphism>,
}

impl std::fmt::Debug for PatternGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PatternGroup(k={}, d={}, |P|={}, gens={})",
            self.alphabet,
            self.depth,
            self.elements.len(),
            self.generators.len()
        )
    }
}

impl PartialEq for PatternGroup {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.depth == other.depth
            && self.elements == other.elements
    }
}

impl Eq for PatternGroup {}

impl PatternGroup {
    /// Closes `generators` under composition.
    pub fn generate(
        alphabet: Alphabet,
        depth: usize,
        generators: Vec<TreeAutomorphism>,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::domain("pattern groups have depth at least 1"));
        }
        if let Some(g) = generators
            .iter()
            .find(|g| g.alphabet() != alphabet || g.depth() != depth)
        {
            return Err(Error::domain(format!(
                "generator {g:?} is not an automorphism of X^[{depth}] over {alphabet} letters"
            )));
        }
        let generators: Vec<_> = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        let identity = TreeAutomorphism::identity(alphabet, depth);
        let mut seen: HashSet<TreeAutomorphism> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = vec![identity];
        let mut i = 0;
        while i < queue.len() {
            for g in &generators {
                let next = queue[i].compose(g)?;
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_PATTERN_ORDER {
                        return Err(Error::Resource(format!(
                            "pattern group exceeds {MAX_PATTERN_ORDER} elements"
                        )));
                    }
                    queue.push(next);
                }
            }
            i += 1;
        }
        Ok(Self::assemble(alphabet, depth, queue, generators))
    }

    /// Builds a pattern group from leaf permutations on `k^d` points.
    pub fn from_leaf_generators(
        alphabet: Alphabet,
        depth: usize,
        generators: &[Permutation],
        numbering: LeafNumbering,
    ) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|p| TreeAutomorphism::from_leaf_permutation_with(p, alphabet, depth, numbering))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(alphabet, depth, gens)
    }

    /// Builds a pattern group from an explicit element list, checking that it
    /// is a subgroup.
    pub fn from_elements(
        alphabet: Alphabet,
        depth: usize,
        elements: Vec<TreeAutomorphism>,
    ) -> Result<Self> {
        let set: HashSet<&TreeAutomorphism> = elements.iter().collect();
        let gens = generating_subset(alphabet, depth, &elements, |g| set.contains(g)).ok_or_else(
            || Error::structure(None, "element list is not closed under composition"),
        )?;
        let group = Self::generate(alphabet, depth, gens)?;
        if group.order() != set.len() {
            return Err(Error::structure(None, "element list is not a subgroup"));
        }
        Ok(group)
    }

    /// `Aut X^[d]`.
    pub fn full(alphabet: Alphabet, depth: usize) -> Result<Self> {
        Self::generate(
            alphabet,
            depth,
            full_automorphism_generators(alphabet, depth),
        )
    }

    pub fn trivial(alphabet: Alphabet, depth: usize) -> Result<Self> {
        Self::generate(alphabet, depth, vec![])
    }

    fn assemble(
        alphabet: Alphabet,
        depth: usize,
        mut elements: Vec<TreeAutomorphism>,
        generators: Vec<TreeAutomorphism>,
    ) -> Self {
        elements.sort();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        PatternGroup {
            alphabet,
            depth,
            elements,
            index,
            generators,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[TreeAutomorphism] {
        &self.elements
    }

    pub fn generators(&self) -> &[TreeAutomorphism] {
        &self.generators
    }

    pub fn index_of(&self, g: &TreeAutomorphism) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &TreeAutomorphism) -> bool {
        self.index.contains_key(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len())
            .all(|i| (i + 1..g.len()).all(|j| g[i].compose(&g[j]).ok() == g[j].compose(&g[i]).ok()))
    }

    /// True if `|P|` divides `|Aut X^[d]| = (k!)^((k^d - 1)/(k - 1))`.
    pub fn order_divides_full(&self) -> bool {
        let k_fact: BigUint = (1..=self.alphabet.size() as u32)
            .map(BigUint::from)
            .product();
        let full = k_fact.pow(self.alphabet.level_offset(self.depth) as u32);
        (full % BigUint::from(self.order())).is_zero()
    }

    /// Elements of the level stabilizer `St_P(level)`.
    pub fn level_stabilizer(&self, level: usize) -> Vec<&TreeAutomorphism> {
        self.elements
            .iter()
            .filter(|g| g.fixes_level(level))
            .collect()
    }

    /// `m = |St_P(d-1)|`.
    pub fn bottom_stabilizer_order(&self) -> usize {
        self.level_stabilizer(self.depth - 1).len()
    }

    /// A small generating set of `St_P(level)`.
    pub fn level_stabilizer_generators(&self, level: usize) -> Vec<TreeAutomorphism> {
        let stab: Vec<TreeAutomorphism> =
            self.level_stabilizer(level).into_iter().cloned().collect();
        generating_subset(self.alphabet, self.depth, &stab, |g| g.fixes_level(level))
            .expect("level stabilizer is a subgroup")
    }

    /// A generating set in which each element enlarges the span of the
    /// previous ones; deterministic in the element order.
    pub fn small_generating_set(&self) -> Vec<TreeAutomorphism> {
        generating_subset(self.alphabet, self.depth, &self.elements, |g| {
            self.contains(g)
        })
        .expect("pattern group is closed")
    }

    /// Returns a copy whose stored generators are a small generating set.
    pub fn with_small_generators(mut self) -> Self {
        self.generators = self.small_generating_set();
        self
    }

    /// The pattern group as a group of leaf permutations.
    pub fn to_permutation_group(&self, numbering: LeafNumbering) -> PermutationGroup {
        let degree = self.alphabet.level_size(self.depth);
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_leaf_permutation_with(numbering))
            .collect();
        PermutationGroup::new(degree, gens).expect("leaf permutations have the tree degree")
    }

    /// Restrictions `{a|_{X^[m]} : a ∈ P}`.
    pub fn restrictions(&self, m: usize) -> Result<HashSet<TreeAutomorphism>> {
        self.elements.iter().map(|a| a.restrict(m)).collect()
    }

    pub fn pattern_graph(&self) -> PatternGraph {
        PatternGraph::new(self)
    }

    /// Indices of the elements that survive minimization.
    fn surviving(&self) -> Vec<usize> {
        let k = self.alphabet.size();
        let d = self.depth;
        let mut alive = vec![true; self.elements.len()];
        loop {
            let heads: HashSet<TreeAutomorphism> = self
                .elements
                .iter()
                .zip(&alive)
                .filter(|(_, &a)| a)
                .map(|(b, _)| b.restrict(d - 1).expect("d >= 1"))
                .collect();
            let mut changed = false;
            for (i, a) in self.elements.iter().enumerate() {
                if alive[i] && !(0..k).all(|x| heads.contains(&a.section_at(1, x))) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.elements.len()).filter(|&i| alive[i]).collect()
    }

    /// The minimal pattern group defining the same `G_P`.
    pub fn minimize(&self) -> Result<PatternGroup> {
        let keep = self.surviving();
        if keep.len() == self.elements.len() {
            return Ok(self.clone());
        }
        let survivors: Vec<TreeAutomorphism> =
            keep.iter().map(|&i| self.elements[i].clone()).collect();
        let set: HashSet<&TreeAutomorphism> = survivors.iter().collect();
        let gens = generating_subset(self.alphabet, self.depth, &survivors, |g| set.contains(g))
            .ok_or_else(|| {
                Error::Internal("minimization survivors are not closed under composition".into())
            })?;
        let group = Self::generate(self.alphabet, self.depth, gens)?;
        if group.order() != survivors.len() {
            return Err(Error::Internal(
                "minimization survivors do not form a subgroup".into(),
            ));
        }
        Ok(group)
    }

    /// Every vertex of the pattern graph has an out-arc for every letter.
    pub fn is_minimal(&self) -> bool {
        let heads = self.restrictions(self.depth - 1).expect("d >= 1");
        let k = self.alphabet.size();
        self.elements
            .iter()
            .all(|a| (0..k).all(|x| heads.contains(&a.section_at(1, x))))
    }

    pub(crate) fn require_minimal(&self) -> Result<()> {
        if self.is_minimal() {
            Ok(())
        } else {
            Err(Error::Precondition("pattern group is not minimal".into()))
        }
    }

    /// Conjugate by a tree automorphism `t`: `{t a t^-1}`.
    pub fn conjugate(&self, t: &TreeAutomorphism) -> Result<PatternGroup> {
        let t_inv = t.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| t.compose(g)?.compose(&t_inv))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(self.alphabet, self.depth, gens)
    }
}

/// Greedy generating subset of `elements`: walks the list in order and keeps
/// each element not yet generated. Returns `None` if some product escapes
/// `member`.
fn generating_subset(
    alphabet: Alphabet,
    depth: usize,
    elements: &[TreeAutomorphism],
    member: impl Fn(&TreeAutomorphism) -> bool,
) -> Option<Vec<TreeAutomorphism>> {
    let identity = TreeAutomorphism::identity(alphabet, depth);
    if !elements.contains(&identity) && !elements.is_empty() {
        return None;
    }
    let mut span: HashSet<TreeAutomorphism> = HashSet::new();
    span.insert(identity.clone());
    let mut list = vec![identity];
    let mut gens: Vec<TreeAutomorphism> = Vec::new();
    for e in elements {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut i = 0;
        while i < list.len() {
            for g in &gens {
                let next = list[i].compose(g).ok()?;
                if !span.contains(&next) {
                    if !member(&next) {
                        return None;
                    }
                    span.insert(next.clone());
                    list.push(next);
                }
            }
            i += 1;
        }
    }
    Some(gens)
}

/// Exhaustive set of `g ∈ Aut X^[n]` whose depth-`d` sections all lie in `P`.
/// Exponential; intended only as a test oracle at tiny sizes.
pub fn brute_force_restriction(pattern: &PatternGroup, n: usize) -> Result<Vec<TreeAutomorphism>> {
    let full = PatternGroup::full(pattern.alphabet, n)?;
    let d = pattern.depth;
    let mut out = Vec::new();
    for g in full.elements() {
        let ok = (0..=n.saturating_sub(d)).all(|level| {
            (0..pattern.alphabet.level_size(level))
                .all(|v| pattern.contains(&g.section_restricted(level, v, d)))
        });
        if ok {
            out.push(g.clone());
        }
    }
    Ok(out)
}
