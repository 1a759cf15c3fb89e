//! Finite permutation groups backed by stabilizer chains.

mod chain;
mod fingerprint;
mod subgroups;

use std::collections::VecDeque;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub(crate) use chain::StabChain;
pub use fingerprint::{
    brute_force_isomorphic, identify_small_group, Fingerprint, BRUTE_FORCE_BOUND,
};
pub use subgroups::{all_subgroups, is_solvable, DEFAULT_SUBGROUP_BOUND};

/// Default cap on explicit element enumeration.
pub const ELEMENT_LIMIT: usize = 1 << 16;

/// A permutation group given by generators; the stabilizer chain is built on
/// first use and cached.
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl std::fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::domain(format!(
                "generator {g} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
        Ok(PermutationGroup {
            degree,
            generators: generators
                .into_iter()
                .filter(|g| !g.is_identity())
                .collect(),
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut swap: Vec<usize> = (0..degree).collect();
            swap.swap(0, 1);
            gens.push(Permutation::from_images(&swap).unwrap());
            let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
            gens.push(Permutation::from_images(&cycle).unwrap());
        }
        PermutationGroup::new(degree, gens).unwrap()
    }

    pub(crate) fn from_chain(
        degree: usize,
        generators: Vec<Permutation>,
        chain: StabChain,
    ) -> Self {
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        PermutationGroup {
            degree,
            generators,
            chain: lock,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub(crate) fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as a `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().base()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::domain(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(self.generators.iter().all(|g| other.chain().contains(g)))
    }

    /// Same set of permutations.
    pub fn same_group(&self, other: &PermutationGroup) -> Result<bool> {
        Ok(self.order() == other.order() && self.is_subgroup_of(other)?)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].compose(&g[j]) == g[j].compose(&g[i])))
    }

    /// A generating subset in which every generator enlarges the group
    /// generated by its predecessors; at most `log2 |G|` elements.
    pub fn reduced_generators(&self) -> Vec<Permutation> {
        let mut chain = StabChain::new(self.degree, &[]);
        self.generators
            .iter()
            .filter(|g| chain.add_generator(g))
            .cloned()
            .collect()
    }

    /// Smallest subgroup of `self` containing `set` and normalized by `self`.
    pub fn normal_closure(&self, set: &[Permutation]) -> Result<PermutationGroup> {
        for s in set {
            if !self.contains(s)? {
                return Err(Error::domain(format!("{s} is not an element of the group")));
            }
        }
        let gens = self.reduced_generators();
        let mut chain = StabChain::new(self.degree, &[]);
        let mut added = Vec::new();
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        for s in set {
            if chain.add_generator(s) {
                added.push(s.clone());
                queue.push_back(s.clone());
            }
        }
        while let Some(n) = queue.pop_front() {
            for g in &gens {
                let c = n.conjugate_by(g);
                if chain.add_generator(&c) {
                    added.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        Ok(PermutationGroup::from_chain(self.degree, added, chain))
    }

    /// The commutator subgroup `[G, G]`.
    pub fn derived_subgroup(&self) -> PermutationGroup {
        let gens = self.reduced_generators();
        let mut comms = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let c = Permutation::commutator(&gens[i], &gens[j]);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
            .expect("commutators of generators lie in the group")
    }

    /// Number of steps of the derived series down to the trivial group, or
    /// `None` if the series stabilizes at a nontrivial perfect subgroup.
    pub fn derived_length(&self) -> Option<usize> {
        let mut current = self.clone();
        let mut len = 0;
        while !current.order().is_one() {
            let next = current.derived_subgroup();
            if next.order() == current.order() {
                return None;
            }
            current = next;
            len += 1;
        }
        Some(len)
    }

    /// Kernel of the action on a block system: the elements fixing every
    /// block setwise.
    pub fn induced_action_kernel(&self, blocks: &[Vec<usize>]) -> Result<PermutationGroup> {
        let nb = blocks.len();
        let mut block_of = vec![usize::MAX; self.degree];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::structure(None, format!("block {b} is empty")));
            }
            for &p in block {
                if p >= self.degree || block_of[p] != usize::MAX {
                    return Err(Error::structure(
                        None,
                        format!("blocks do not partition 0..{}", self.degree),
                    ));
                }
                block_of[p] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::structure(
                None,
                format!("blocks do not cover 0..{}", self.degree),
            ));
        }
        // act on blocks ⊔ points, with the block points first in the base
        let mut extended = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut images = vec![0u16; nb + self.degree];
            for (b, block) in blocks.iter().enumerate() {
                let target = block_of[g.image(block[0])];
                if block.iter().any(|&p| block_of[g.image(p)] != target) {
                    return Err(Error::structure(
                        None,
                        format!("generator {g} splits block {b}"),
                    ));
                }
                images[b] = target as u16;
            }
            for p in 0..self.degree {
                images[nb + p] = (nb + g.image(p)) as u16;
            }
            extended.push(Permutation::from_raw(images));
        }
        let prefix: Vec<usize> = (0..nb).collect();
        let mut chain = StabChain::new(nb + self.degree, &prefix);
        for g in &extended {
            chain.add_generator(g);
        }
        let kernel_gens: Vec<Permutation> = chain
            .stabilizer_generators(nb)
            .iter()
            .map(|g| {
                Permutation::from_raw(g.images()[nb..].iter().map(|&i| i - nb as u16).collect())
            })
            .collect();
        let kernel = PermutationGroup::new(self.degree, kernel_gens)?;
        let expected = chain.order_from(nb);
        if kernel.order() != expected {
            return Err(Error::Internal(format!(
                "kernel order {} disagrees with chain prediction {expected}",
                kernel.order()
            )));
        }
        Ok(kernel)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < out.len() {
            let p = out[i];
            for g in &self.generators {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    out.push(q);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_transitive_on(&self, points: &[usize]) -> bool {
        match points.first() {
            None => true,
            Some(&p) => {
                let mut want = points.to_vec();
                want.sort_unstable();
                want.dedup();
                self.orbit(p) == want
            }
        }
    }

    /// All elements; fails if the order exceeds `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        match order.to_usize() {
            Some(n) if n <= limit => Ok(self.chain().elements()),
            _ => Err(Error::Resource(format!(
                "group of order {order} exceeds the enumeration limit {limit}"
            ))),
        }
    }

    /// A uniformly random element, drawing indices from `pick(n) ∈ 0..n`.
    pub fn random_element(&self, pick: impl FnMut(usize) -> usize) -> Permutation {
        self.chain().element_from(pick)
    }

    fn check_degree(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::domain(format!(
                "permutation of degree {} tested against a group of degree {}",
                p.degree(),
                self.degree
            )));
        }
        Ok(())
    }
}
