//! Isomorphism invariants and a brute-force isomorphism test for small groups.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{PermutationGroup, ELEMENT_LIMIT};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest order accepted by [`brute_force_isomorphic`].
pub const BRUTE_FORCE_BOUND: usize = 256;

/// Isomorphism-invariant summary. Distinct fingerprints certify
/// non-isomorphism; equal fingerprints certify nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    /// Elementary divisors (prime powers) of `G/[G,G]`, ascending.
    pub abelian_invariants: Vec<u64>,
    pub exponent: u64,
    /// `None` for non-solvable groups.
    pub derived_length: Option<usize>,
    /// `(element order, count)` pairs, ascending.
    pub element_orders: Vec<(u64, u64)>,
    /// `(class size, number of classes)` pairs, ascending.
    pub class_sizes: Vec<(u64, u64)>,
}

impl Fingerprint {
    pub fn of(group: &PermutationGroup) -> Result<Self> {
        let elements = group.elements(ELEMENT_LIMIT)?;
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let orders: Vec<u64> = elements.iter().map(Permutation::order).collect();

        let mut element_orders = BTreeMap::new();
        for &o in &orders {
            *element_orders.entry(o).or_insert(0u64) += 1;
        }
        let exponent = orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));

        // conjugacy classes: orbits under conjugation by the generators
        let gens = group.reduced_generators();
        let mut class_of = vec![usize::MAX; elements.len()];
        let mut class_sizes = BTreeMap::new();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            class_of[start] = start;
            let mut stack = vec![start];
            let mut size = 0u64;
            while let Some(i) = stack.pop() {
                size += 1;
                for g in &gens {
                    let j = index[&elements[i].conjugate_by(g)];
                    if class_of[j] == usize::MAX {
                        class_of[j] = start;
                        stack.push(j);
                    }
                }
            }
            *class_sizes.entry(size).or_insert(0u64) += 1;
        }

        let derived = group.derived_subgroup();
        let abelian_invariants = abelianization_invariants(&elements, &derived);

        Ok(Fingerprint {
            order: elements.len() as u64,
            abelian_invariants,
            exponent,
            derived_length: group.derived_length(),
            element_orders: element_orders.into_iter().collect(),
            class_sizes: class_sizes.into_iter().collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fingerprint serializes")
    }
}

/// Elementary divisors of `G/D` from the orders of cosets.
fn abelianization_invariants(elements: &[Permutation], derived: &PermutationGroup) -> Vec<u64> {
    let d_order = derived.order_u64().unwrap_or(1).max(1);
    // order of gD in G/D, counted once per coset
    let mut quotient_orders: BTreeMap<u64, u64> = BTreeMap::new();
    for g in elements {
        let mut e = 1u64;
        let mut power = g.clone();
        while !derived.chain().contains(&power) {
            power = power.compose(g);
            e += 1;
        }
        *quotient_orders.entry(e).or_insert(0) += 1;
    }
    for count in quotient_orders.values_mut() {
        *count /= d_order;
    }
    let quotient_size: u64 = quotient_orders.values().sum();
    let mut invariants = Vec::new();
    for p in prime_factors(quotient_size) {
        // c[i] = #{x : x^(p^i) = 1} inside the p-part
        let mut counts = vec![1u64];
        let mut pi = 1u64;
        loop {
            pi *= p;
            let c: u64 = quotient_orders
                .iter()
                .filter(|(&o, _)| pi.is_multiple_of(o))
                .map(|(_, &n)| n)
                .sum();
            if c == *counts.last().unwrap() {
                break;
            }
            counts.push(c);
        }
        // rank[i] = number of cyclic factors of order >= p^i
        let ranks: Vec<u32> = counts.windows(2).map(|w| ilog(p, w[1] / w[0])).collect();
        for (i, &r) in ranks.iter().enumerate() {
            let next = ranks.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                invariants.push(p.pow(i as u32 + 1));
            }
        }
    }
    invariants.sort_unstable();
    invariants
}

fn ilog(p: u64, mut x: u64) -> u32 {
    let mut r = 0;
    while x > 1 {
        x /= p;
        r += 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

struct Table {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    orders: Vec<u64>,
}

impl Table {
    fn new(g: &PermutationGroup) -> Result<Self> {
        let elements = g.elements(BRUTE_FORCE_BOUND)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let orders = elements.iter().map(Permutation::order).collect();
        Ok(Table {
            elements,
            index,
            orders,
        })
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    fn closure(&self, gens: &[usize]) -> FixedBitSet {
        let id = self.index[&Permutation::identity(self.elements[0].degree())];
        let mut set = FixedBitSet::with_capacity(self.elements.len());
        set.insert(id);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    stack.push(y);
                }
            }
        }
        set
    }
}

/// Decides `G ≅ H` by backtracking over images of a small generating set of
/// `G`, constrained by element orders.
pub fn brute_force_isomorphic(g: &PermutationGroup, h: &PermutationGroup) -> Result<bool> {
    for grp in [g, h] {
        if grp.order_u64().is_none_or(|o| o > BRUTE_FORCE_BOUND as u64) {
            return Err(Error::Resource(format!(
                "brute-force isomorphism is limited to order {BRUTE_FORCE_BOUND}, got {}",
                grp.order()
            )));
        }
    }
    if g.order() != h.order() {
        return Ok(false);
    }
    let tg = Table::new(g)?;
    let th = Table::new(h)?;
    let n = tg.elements.len();
    let histogram = |t: &Table| {
        let mut m = BTreeMap::new();
        for &o in &t.orders {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    };
    if histogram(&tg) != histogram(&th) {
        return Ok(false);
    }

    // greedy generating set of G, largest element orders first
    let mut by_order: Vec<usize> = (0..n).collect();
    by_order.sort_by_key(|&i| std::cmp::Reverse(tg.orders[i]));
    let mut gens: Vec<usize> = Vec::new();
    let mut span = tg.closure(&gens);
    for &i in &by_order {
        if span.count_ones(..) == n {
            break;
        }
        if !span.contains(i) {
            gens.push(i);
            span = tg.closure(&gens);
        }
    }

    // spanning tree: every element is parent * gen
    let id_g = tg.index[&Permutation::identity(g.degree())];
    let mut parent = vec![(usize::MAX, usize::MAX); n];
    let mut order = vec![id_g];
    parent[id_g] = (id_g, usize::MAX);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (t, &s) in gens.iter().enumerate() {
            let y = tg.mul(x, s);
            if parent[y].0 == usize::MAX {
                parent[y] = (x, t);
                order.push(y);
            }
        }
        i += 1;
    }

    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..n).filter(|&j| th.orders[j] == tg.orders[s]).collect())
        .collect();
    let id_h = th.index[&Permutation::identity(h.degree())];
    let mut choice = vec![0usize; gens.len()];

    let try_map = |images: &[usize]| -> bool {
        let mut phi = vec![usize::MAX; n];
        let mut used = FixedBitSet::with_capacity(n);
        phi[id_g] = id_h;
        used.insert(id_h);
        for &x in &order[1..] {
            let (p, t) = parent[x];
            let y = th.mul(phi[p], images[t]);
            if used.contains(y) {
                return false;
            }
            used.insert(y);
            phi[x] = y;
        }
        (0..n).all(|x| {
            gens.iter()
                .enumerate()
                .all(|(t, &s)| phi[tg.mul(x, s)] == th.mul(phi[x], images[t]))
        })
    };

    if gens.is_empty() {
        return Ok(true);
    }
    if candidates.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, v)| v[c]).collect();
        if try_map(&images) {
            return Ok(true);
        }
        // odometer
        let mut t = 0;
        loop {
            if t == choice.len() {
                return Ok(false);
            }
            choice[t] += 1;
            if choice[t] < candidates[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

/// Reference groups used to name small finite groups.
fn reference_groups() -> Vec<(&'static str, PermutationGroup)> {
    let g = |n: usize, gens: &[&str]| {
        PermutationGroup::new(
            n,
            gens.iter()
                .map(|s| Permutation::parse_cycles(s, n).unwrap())
                .collect(),
        )
        .unwrap()
    };
    vec![
        ("1", PermutationGroup::trivial(1)),
        ("C2", g(2, &["(1,2)"])),
        ("C3", g(3, &["(1,2,3)"])),
        ("C4", g(4, &["(1,2,3,4)"])),
        ("C2 x C2", g(4, &["(1,2)", "(3,4)"])),
        ("S3", g(3, &["(1,2)", "(1,2,3)"])),
        ("C8", g(8, &["(1,2,3,4,5,6,7,8)"])),
        ("C4 x C2", g(6, &["(1,2,3,4)", "(5,6)"])),
        ("C2 x C2 x C2", g(6, &["(1,2)", "(3,4)", "(5,6)"])),
        ("D8", g(4, &["(1,2,3,4)", "(1,3)"])),
        ("Q8", g(8, &["(1,2,4,7)(3,6,8,5)", "(1,3,4,8)(2,5,7,6)"])),
        ("C2 x D8", g(6, &["(1,2,3,4)", "(1,3)", "(5,6)"])),
        ("A4", g(4, &["(1,2,3)", "(2,3,4)"])),
        ("S4", g(4, &["(1,2)", "(1,2,3,4)"])),
    ]
}

/// Names `group` if it is isomorphic to one of a handful of small reference
/// groups; isomorphism is certified by [`brute_force_isomorphic`].
pub fn identify_small_group(group: &PermutationGroup) -> Result<Option<&'static str>> {
    if group
        .order_u64()
        .is_none_or(|o| o > BRUTE_FORCE_BOUND as u64)
    {
        return Ok(None);
    }
    let fp = Fingerprint::of(group)?;
    for (name, reference) in reference_groups() {
        if Fingerprint::of(&reference)? == fp && brute_force_isomorphic(group, &reference)? {
            return Ok(Some(name));
        }
    }
    Ok(None)
}
