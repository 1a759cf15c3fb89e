use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;

use super::PatternGroup;
use crate::error::{Error, Result};
use crate::permgroup::{PermutationGroup, StabChain};
use crate::tree::{LeafNumbering, TreeAutomorphism};

/// `G_P|_{X^[n]}` with generators kept both as portraits and as leaf
/// permutations (lex numbering).
#[derive(Clone, Debug)]
pub struct TowerLevel {
    depth: usize,
    generators: Vec<TreeAutomorphism>,
    group: PermutationGroup,
}

impl TowerLevel {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generators(&self) -> &[TreeAutomorphism] {
        &self.generators
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }
}

/// The finite quotients `G_P|_{X^[n]}`, `n >= d`, of the group defined by a
/// minimal pattern group, built on demand and cached.
pub struct RestrictionTower {
    pattern: PatternGroup,
    /// Generators of `St_P(d-1)`.
    bottom_generators: Vec<TreeAutomorphism>,
    /// For each `r ∈ P|_{X^[d-1]}`, the smallest `b ∈ P` restricting to `r`.
    lift_choice: HashMap<TreeAutomorphism, usize>,
    /// `levels[i]` is depth `d + i`; only fully built levels are pushed.
    levels: Mutex<Vec<Arc<TowerLevel>>>,
}

impl fmt::Debug for RestrictionTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RestrictionTower({:?}, built to depth {})",
            self.pattern,
            self.pattern.depth() + self.levels.lock().unwrap().len() - 1
        )
    }
}

impl RestrictionTower {
    pub fn new(pattern: &PatternGroup) -> Result<Self> {
        pattern.require_minimal()?;
        let d = pattern.depth();
        let mut lift_choice = HashMap::new();
        for (i, b) in pattern.elements().iter().enumerate() {
            lift_choice.entry(b.restrict(d - 1)?).or_insert(i);
        }
        let generators = pattern.small_generating_set();
        let group = leaf_group(&generators, pattern.alphabet().level_size(d)).1;
        let base = Arc::new(TowerLevel {
            depth: d,
            generators,
            group,
        });
        Ok(RestrictionTower {
            bottom_generators: pattern.level_stabilizer_generators(d - 1),
            pattern: pattern.clone(),
            lift_choice,
            levels: Mutex::new(vec![base]),
        })
    }

    pub fn pattern(&self) -> &PatternGroup {
        &self.pattern
    }

    /// `m = |St_P(d-1)|`.
    pub fn m(&self) -> usize {
        self.pattern.bottom_stabilizer_order()
    }

    pub fn level(&self, n: usize) -> Result<Arc<TowerLevel>> {
        let d = self.pattern.depth();
        if n < d {
            return Err(Error::domain(format!(
                "restriction level {n} is below the pattern depth {d}"
            )));
        }
        let mut levels = self.levels.lock().unwrap();
        while levels.len() <= n - d {
            let next = self.extend(levels.last().unwrap())?;
            levels.push(Arc::new(next));
        }
        Ok(levels[n - d].clone())
    }

    pub fn restriction_group(&self, n: usize) -> Result<PermutationGroup> {
        Ok(self.level(n)?.group.clone())
    }

    /// Extends a level-`n` generator to depth `n + 1`, filling each new
    /// depth-`d` window with the smallest pattern that continues it.
    pub fn lift(&self, g: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        let d = self.pattern.depth();
        let n = g.depth();
        let top = n + 1 - d;
        let alphabet = self.pattern.alphabet();
        let mut bottom = Vec::with_capacity(alphabet.level_size(n) * alphabet.size());
        for w in 0..alphabet.level_size(top) {
            let head = g.section_restricted(top, w, d - 1);
            let b = self.lift_choice.get(&head).ok_or_else(|| {
                Error::Precondition(format!(
                    "no pattern continues the window at level {top}, vertex {w}"
                ))
            })?;
            bottom.extend_from_slice(self.pattern.elements()[*b].level_slice(d - 1));
        }
        Ok(g.extend_with(&bottom))
    }

    /// Copies of the generators of `St_P(d-1)` planted at every vertex of
    /// level `n - d`; they generate `St_G(n-1)|_{X^[n]}`.
    pub fn planted_bottom_generators(&self, n: usize) -> Result<Vec<TreeAutomorphism>> {
        let d = self.pattern.depth();
        if n < d {
            return Err(Error::domain(format!(
                "level {n} is below the pattern depth {d}"
            )));
        }
        let mut out = Vec::new();
        for v in 0..self.pattern.alphabet().level_size(n - d) {
            for c in &self.bottom_generators {
                out.push(TreeAutomorphism::planted(n, n - d, v, c)?);
            }
        }
        Ok(out)
    }

    fn extend(&self, level: &TowerLevel) -> Result<TowerLevel> {
        let n = level.depth + 1;
        let mut candidates = level
            .generators
            .iter()
            .map(|g| self.lift(g))
            .collect::<Result<Vec<_>>>()?;
        candidates.extend(self.planted_bottom_generators(n)?);
        let (generators, group) = leaf_group(&candidates, self.pattern.alphabet().level_size(n));
        Ok(TowerLevel {
            depth: n,
            generators,
            group,
        })
    }

    /// Prefix blocks of the leaves of `X^[n]` at depth `j`, lex numbering.
    pub fn prefix_blocks(&self, j: usize, n: usize) -> Vec<Vec<usize>> {
        let a = self.pattern.alphabet();
        let size = a.level_size(n - j);
        (0..a.level_size(j))
            .map(|b| (b * size..(b + 1) * size).collect())
            .collect()
    }

    /// `St_G(j)|_{X^[n]}`, as the kernel of the action on depth-`j` prefixes.
    /// For `j = n - 1` the kernel is checked against the planted-copies
    /// construction.
    pub fn level_stabilizer(&self, j: usize, n: usize) -> Result<PermutationGroup> {
        if j >= n {
            return Err(Error::domain(format!(
                "stabilizer level {j} must be below the restriction level {n}"
            )));
        }
        let g = self.restriction_group(n)?;
        if j == 0 {
            return Ok(g);
        }
        let kernel = g.induced_action_kernel(&self.prefix_blocks(j, n))?;
        if j + 1 == n {
            let planted = self.planted_bottom_group(n)?;
            if !kernel.same_group(&planted)? {
                return Err(Error::Internal(format!(
                    "level-{j} kernel of order {} differs from the planted product of order {}",
                    kernel.order(),
                    planted.order()
                )));
            }
        }
        Ok(kernel)
    }

    /// The group generated by [`Self::planted_bottom_generators`].
    pub fn planted_bottom_group(&self, n: usize) -> Result<PermutationGroup> {
        let gens = self
            .planted_bottom_generators(n)?
            .iter()
            .map(|g| g.to_leaf_permutation())
            .collect();
        PermutationGroup::new(self.pattern.alphabet().level_size(n), gens)
    }
}

/// Leaf group of `candidates`, keeping only those that enlarge the group.
fn leaf_group(
    candidates: &[TreeAutomorphism],
    degree: usize,
) -> (Vec<TreeAutomorphism>, PermutationGroup) {
    let mut chain = StabChain::new(degree, &[]);
    let mut kept = Vec::new();
    let mut perms = Vec::new();
    for g in candidates {
        let p = g.to_leaf_permutation_with(LeafNumbering::Lex);
        if chain.add_generator(&p) {
            kept.push(g.clone());
            perms.push(p);
        }
    }
    (kept, PermutationGroup::from_chain(degree, perms, chain))
}

/// `G_P|_{X^[n]}` as a group of leaf permutations.
pub fn restriction_group(p: &PatternGroup, n: usize) -> Result<PermutationGroup> {
    RestrictionTower::new(p)?.restriction_group(n)
}

/// `St_{G_P}(j)|_{X^[n]}`.
pub fn level_stabilizer_restriction(
    p: &PatternGroup,
    j: usize,
    n: usize,
) -> Result<PermutationGroup> {
    RestrictionTower::new(p)?.level_stabilizer(j, n)
}

/// `|G_P|_{X^[n]}| = |P| m^(k + k^2 + ... + k^(n-d))`, `m = |St_P(d-1)|`.
pub fn restriction_order(p: &PatternGroup, n: usize) -> Result<BigUint> {
    p.require_minimal()?;
    let d = p.depth();
    if n < d {
        return Err(Error::domain(format!(
            "restriction level {n} is below the pattern depth {d}"
        )));
    }
    let k = p.alphabet().size();
    let exponent: usize = (1..=n - d).map(|i| k.pow(i as u32)).sum();
    Ok(BigUint::from(p.order()) * BigUint::from(p.bottom_stabilizer_order()).pow(exponent as u32))
}

/// Hausdorff dimension `log m / (k^(d-1) log k!)`.
#[derive(Clone, Debug, PartialEq)]
pub enum HausdorffDimension {
    Exact(Ratio<u64>),
    /// Irrational; `f64` precision.
    Approx(f64),
}

impl HausdorffDimension {
    pub fn value(&self) -> f64 {
        match self {
            HausdorffDimension::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            HausdorffDimension::Approx(v) => *v,
        }
    }
}

impl fmt::Display for HausdorffDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HausdorffDimension::Exact(r) => write!(f, "{r}"),
            HausdorffDimension::Approx(v) => write!(f, "{v:.12}"),
        }
    }
}

impl Serialize for HausdorffDimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HausdorffDimension", 3)?;
        st.serialize_field("exact", &matches!(self, HausdorffDimension::Exact(_)))?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("value", &self.value())?;
        st.end()
    }
}

/// Writes `n = b^e` with `b` not a perfect power.
fn perfect_power(n: u64) -> (u64, u32) {
    for e in (2..=63u32).rev() {
        let b = (n as f64).powf(1.0 / e as f64).round() as u64;
        for c in [b.saturating_sub(1), b, b + 1] {
            if c >= 2 && c.checked_pow(e) == Some(n) {
                return (c, e);
            }
        }
    }
    (n, 1)
}

pub fn hausdorff_dimension(p: &PatternGroup) -> Result<HausdorffDimension> {
    p.require_minimal()?;
    let m = p.bottom_stabilizer_order() as u64;
    if m == 1 {
        return Err(Error::Precondition(
            "the group is finite; its Hausdorff dimension is 0 and the formula does not apply"
                .into(),
        ));
    }
    let k = p.alphabet().size();
    let k_fact = p
        .alphabet()
        .factorial()
        .ok_or_else(|| Error::Unsupported(format!("{k}! does not fit in 64 bits")))?;
    let scale = (k as u64).pow(p.depth() as u32 - 1);
    let (base, e_fact) = perfect_power(k_fact);
    let mut e_m = 0u32;
    let mut rest = m;
    while rest.is_multiple_of(base) {
        rest /= base;
        e_m += 1;
    }
    if rest == 1 {
        return Ok(HausdorffDimension::Exact(Ratio::new(
            e_m as u64,
            e_fact as u64 * scale,
        )));
    }
    let value = (m as f64).ln() / (scale as f64 * (k_fact as f64).ln());
    Ok(HausdorffDimension::Approx(value))
}
