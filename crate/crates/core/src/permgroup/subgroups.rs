//! Subgroup enumeration for small solvable groups by cyclic extension.
//!
//! Subgroups are produced layer by layer in increasing order. A subgroup `H`
//! is extended by every element `g ∉ H` that normalizes `H` and whose image
//! in `N(H)/H` has prime order; `<H, g> = H<g>`. Every nontrivial subgroup of
//! a solvable group has a normal subgroup of prime index, so all subgroups are
//! reached.

use std::collections::{BTreeMap, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;

use super::PermutationGroup;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on `|G|` for [`all_subgroups`].
pub const DEFAULT_SUBGROUP_BOUND: usize = 1 << 13;

pub fn is_solvable(g: &PermutationGroup) -> bool {
    g.derived_length().is_some()
}

struct Elements {
    perms: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    identity: u32,
}

impl Elements {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.perms[a as usize].compose(&self.perms[b as usize]);
        self.index[&p]
    }

    fn inv(&self, a: u32) -> u32 {
        self.index[&self.perms[a as usize].inverse()]
    }
}

struct Sub {
    members: FixedBitSet,
    gens: Vec<u32>,
}

/// Every subgroup of `g`, each exactly once, sorted by order and then by the
/// sorted list of members.
pub fn all_subgroups(g: &PermutationGroup, bound: usize) -> Result<Vec<PermutationGroup>> {
    let order = g.order();
    let n = match order.to_usize() {
        Some(n) if n <= bound => n,
        _ => {
            return Err(Error::Resource(format!(
                "group of order {order} exceeds the subgroup enumeration bound {bound}; raise the bound"
            )))
        }
    };
    if !is_solvable(g) {
        return Err(Error::Precondition(
            "cyclic extension requires a solvable group".into(),
        ));
    }
    let perms = g.elements(n)?;
    let index: HashMap<Permutation, u32> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let identity = index[&Permutation::identity(g.degree())];
    let el = Elements {
        perms,
        index,
        identity,
    };

    let mut trivial = FixedBitSet::with_capacity(n);
    trivial.insert(identity as usize);
    let mut layers: BTreeMap<usize, Vec<Sub>> = BTreeMap::new();
    layers.insert(
        1,
        vec![Sub {
            members: trivial.clone(),
            gens: vec![],
        }],
    );
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    seen.insert(trivial);

    let mut done: Vec<Sub> = Vec::new();
    while let Some((&size, _)) = layers.iter().next() {
        let layer = layers.remove(&size).unwrap();
        for h in &layer {
            let mut covered = h.members.clone();
            for g in 0..n as u32 {
                if covered.contains(g as usize) || !normalizes(&el, g, h) {
                    continue;
                }
                // smallest e with g^e ∈ H
                let mut e = 1;
                let mut power = g;
                while !h.members.contains(power as usize) {
                    power = el.mul(power, g);
                    e += 1;
                }
                if !is_prime(e) {
                    continue;
                }
                let mut members = FixedBitSet::with_capacity(n);
                let mut coset_rep = el.identity;
                for _ in 0..e {
                    for x in h.members.ones() {
                        members.insert(el.mul(x as u32, coset_rep) as usize);
                    }
                    coset_rep = el.mul(coset_rep, g);
                }
                covered.union_with(&members);
                if seen.insert(members.clone()) {
                    let mut gens = h.gens.clone();
                    gens.push(g);
                    layers
                        .entry(size * e)
                        .or_default()
                        .push(Sub { members, gens });
                }
            }
        }
        done.extend(layer);
    }

    let mut keyed: Vec<(usize, Vec<Permutation>, Sub)> = done
        .into_iter()
        .map(|s| {
            let mut key: Vec<Permutation> = s.members.ones().map(|i| el.perms[i].clone()).collect();
            key.sort();
            (key.len(), key, s)
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed
        .into_iter()
        .map(|(_, _, s)| {
            let gens = s
                .gens
                .iter()
                .map(|&i| el.perms[i as usize].clone())
                .collect();
            PermutationGroup::new(g.degree(), gens)
        })
        .collect()
}

fn normalizes(el: &Elements, g: u32, h: &Sub) -> bool {
    let g_inv = el.inv(g);
    h.gens
        .iter()
        .all(|&x| h.members.contains(el.mul(el.mul(g, x), g_inv) as usize))
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn trivial_group_has_one_subgroup() {
        let subs = all_subgroups(&PermutationGroup::trivial(3), 16).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_trivial());
    }

    #[test]
    fn small_counts() {
        // S3: 1 + 3 + 1 + 1
        assert_eq!(
            all_subgroups(&PermutationGroup::symmetric(3), 16)
                .unwrap()
                .len(),
            6
        );
        // S4 has 30 subgroups
        assert_eq!(
            all_subgroups(&PermutationGroup::symmetric(4), 64)
                .unwrap()
                .len(),
            30
        );
        // C2^3 has 16
        let e8 =
            PermutationGroup::new(6, vec![p("(1,2)", 6), p("(3,4)", 6), p("(5,6)", 6)]).unwrap();
        assert_eq!(all_subgroups(&e8, 64).unwrap().len(), 16);
    }

    #[test]
    fn bound_and_solvability() {
        assert!(matches!(
            all_subgroups(&PermutationGroup::symmetric(4), 10),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            all_subgroups(&PermutationGroup::symmetric(5), 200),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn orders_divide_group_order() {
        let g = PermutationGroup::symmetric(4);
        for s in all_subgroups(&g, 64).unwrap() {
            assert_eq!(BigUint::from(24u32) % s.order(), BigUint::from(0u32));
        }
    }
}
