//! Deterministic Schreier–Sims stabilizer chains.
//!
//! Each level keeps an append-only transversal, so Schreier generators that
//! were already sifted stay valid when the level grows. Every pair (orbit
//! point, strong generator) is sifted exactly once.

use num_bigint::BigUint;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Coset {
    rep: Permutation,
    rep_inv: Permutation,
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    /// Orbit of `base` in discovery order.
    orbit: Vec<usize>,
    /// Indexed by point; `rep` maps `base` to the point.
    transversal: Vec<Option<Coset>>,
    /// For `orbit[i]`, how many of `gens` have been used for Schreier generators.
    tested: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[base] = Some(Coset {
            rep: id.clone(),
            rep_inv: id,
        });
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            tested: vec![0],
        }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let pt = self.orbit[i];
            for s in &self.gens {
                let q = s.image(pt);
                if self.transversal[q].is_none() {
                    let from = self.transversal[pt].as_ref().unwrap();
                    let rep = s.compose(&from.rep);
                    let rep_inv = from.rep_inv.compose(&s.inverse());
                    self.transversal[q] = Some(Coset { rep, rep_inv });
                    self.orbit.push(q);
                    self.tested.push(0);
                }
            }
            i += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// An empty chain (trivial group) whose base starts with `prefix`.
    pub fn new(degree: usize, prefix: &[usize]) -> Self {
        StabChain {
            degree,
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        }
    }

    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = StabChain::new(degree, &[]);
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> BigUint {
        self.order_from(0)
    }

    /// Order of the pointwise stabilizer of the first `level` base points.
    pub fn order_from(&self, level: usize) -> BigUint {
        self.levels[level.min(self.levels.len())..]
            .iter()
            .fold(BigUint::from(1u32), |acc, l| {
                acc * BigUint::from(l.orbit.len())
            })
    }

    /// Strong generators of the pointwise stabilizer of the first `level`
    /// base points.
    pub fn stabilizer_generators(&self, level: usize) -> &[Permutation] {
        self.levels
            .get(level)
            .map(|l| l.gens.as_slice())
            .unwrap_or(&[])
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level
    /// at which sifting stopped (`base_len` if it passed every level).
    pub fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.image(level.base);
            match &level.transversal[beta] {
                None => return (h, i),
                Some(c) => {
                    if beta != level.base {
                        h = c.rep_inv.compose(&h);
                    }
                }
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, _) = self.strip(g, 0);
        h.is_identity()
    }

    /// Adds `g` to the group. Returns false when `g` was already a member.
    pub fn add_generator(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if self.contains(g) {
            return false;
        }
        let j = match self.levels.iter().position(|l| g.image(l.base) != l.base) {
            Some(j) => j,
            None => {
                let b = g.first_moved_point().expect("non-identity generator");
                self.levels.push(Level::new(b, self.degree));
                self.levels.len() - 1
            }
        };
        for level in &mut self.levels[..=j] {
            level.gens.push(g.clone());
            level.extend_orbit();
        }
        self.complete(j);
        true
    }

    /// Runs Schreier–Sims from level `start` upwards, assuming all deeper
    /// levels are already complete.
    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            match self.process_level(i as usize) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts the untested Schreier generators of level `i`. On the first
    /// nontrivial residue, adds it as a strong generator and returns the
    /// deepest level it was added to.
    fn process_level(&mut self, i: usize) -> Option<usize> {
        let mut oi = 0;
        while oi < self.levels[i].orbit.len() {
            while self.levels[i].tested[oi] < self.levels[i].gens.len() {
                let level = &self.levels[i];
                let s = &level.gens[level.tested[oi]];
                let beta = level.orbit[oi];
                let from = level.transversal[beta].as_ref().unwrap();
                let to = level.transversal[s.image(beta)].as_ref().unwrap();
                let y = to.rep_inv.compose(s).compose(&from.rep);
                self.levels[i].tested[oi] += 1;
                let (h, j) = self.strip(&y, i + 1);
                if !h.is_identity() {
                    let j = if j == self.levels.len() {
                        let b = h.first_moved_point().unwrap();
                        self.levels.push(Level::new(b, self.degree));
                        self.levels.len() - 1
                    } else {
                        j
                    };
                    for level in &mut self.levels[i + 1..=j] {
                        level.gens.push(h.clone());
                        level.extend_orbit();
                    }
                    return Some(j);
                }
            }
            oi += 1;
        }
        None
    }

    /// Enumerates all elements as products of transversal representatives.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &pt in &level.orbit {
                let rep = &level.transversal[pt].as_ref().unwrap().rep;
                for e in &out {
                    next.push(rep.compose(e));
                }
            }
            out = next;
        }
        out
    }

    /// A uniformly distributed element, given a source of indices.
    pub fn element_from(&self, mut pick: impl FnMut(usize) -> usize) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let pt = level.orbit[pick(level.orbit.len())];
            g = level.transversal[pt].as_ref().unwrap().rep.compose(&g);
        }
        g
    }
}
