//! Automorphisms of the truncated regular rooted tree `X^[n]`.
//!
//! An automorphism is stored by its portrait: one permutation of the
//! alphabet for every internal vertex (depth `< n`), with vertices laid out
//! breadth first and lexicographically inside each level. The portrait entry
//! at `v` is the first-level action of the section at `v`, so
//! `g(vx) = g(v) g_(v)(x)` reads directly off the stored data.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

/// Size of the alphabet `X = {0, .., k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&size) {
            return Err(Error::domain(format!(
                "alphabet size must be between 2 and 255, got {size}"
            )));
        }
        Ok(Alphabet(size as u8))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    /// Number of vertices on level `n`, i.e. `k^n`.
    #[inline]
    pub fn level_size(self, n: usize) -> usize {
        self.size().pow(n as u32)
    }

    /// Number of vertices of depth `< n`; also the breadth-first offset of
    /// level `n`.
    #[inline]
    pub fn level_offset(self, n: usize) -> usize {
        let k = self.size();
        (k.pow(n as u32) - 1) / (k - 1)
    }

    /// `k!`, the order of `Sym(X)`, if it fits in a `u64`.
    pub fn factorial(self) -> Option<u64> {
        (1..=self.size() as u64).try_fold(1u64, |acc, i| acc.checked_mul(i))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A word over the alphabet; the empty word is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(alphabet: Alphabet, letters: &[usize]) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&x| x >= alphabet.size()) {
            return Err(Error::domain(format!(
                "letter {bad} outside alphabet of size {alphabet}"
            )));
        }
        Ok(Vertex(letters.iter().map(|&x| x as u8).collect()))
    }

    /// The vertex with the given lexicographic index on level `depth`.
    pub fn from_index(alphabet: Alphabet, depth: usize, mut index: usize) -> Self {
        let k = alphabet.size();
        let mut letters = vec![0u8; depth];
        for slot in letters.iter_mut().rev() {
            *slot = (index % k) as u8;
            index /= k;
        }
        Vertex(letters)
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn child(&self, letter: usize) -> Vertex {
        let mut w = self.0.clone();
        w.push(letter as u8);
        Vertex(w)
    }

    /// Lexicographic index on its level.
    pub fn index(&self, alphabet: Alphabet) -> usize {
        self.letters().fold(0, |acc, x| acc * alphabet.size() + x)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let sep = if self.0.iter().any(|&x| x > 9) {
            "."
        } else {
            ""
        };
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Bijection between the leaves `X^n` and the points `1..=k^n` of a leaf
/// permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafNumbering {
    /// `x_1..x_n -> 1 + Σ x_i k^(n-i)`: the first letter is most significant.
    #[default]
    Lex,
    /// `x_1..x_n -> 1 + Σ x_i k^(i-1)`: the first letter is least significant.
    Reversed,
}

impl LeafNumbering {
    /// Maps a lexicographic leaf index to a 0-based point.
    pub fn point(self, alphabet: Alphabet, depth: usize, lex_index: usize) -> usize {
        match self {
            LeafNumbering::Lex => lex_index,
            LeafNumbering::Reversed => reverse_digits(alphabet.size(), depth, lex_index),
        }
    }

    /// Inverse of [`LeafNumbering::point`].
    pub fn lex_index(self, alphabet: Alphabet, depth: usize, point: usize) -> usize {
        // digit reversal is an involution
        self.point(alphabet, depth, point)
    }
}

impl fmt::Display for LeafNumbering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeafNumbering::Lex => "lex",
            LeafNumbering::Reversed => "reversed",
        })
    }
}

impl std::str::FromStr for LeafNumbering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(LeafNumbering::Lex),
            "reversed" => Ok(LeafNumbering::Reversed),
            other => Err(Error::domain(format!(
                "unknown leaf numbering '{other}' (expected lex or reversed)"
            ))),
        }
    }
}

fn reverse_digits(k: usize, depth: usize, mut index: usize) -> usize {
    let mut out = 0;
    for _ in 0..depth {
        out = out * k + index % k;
        index /= k;
    }
    out
}

/// An automorphism of `X^[depth]`, stored as its portrait.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAutomorphism {
    alphabet: Alphabet,
    depth: usize,
    /// `k` letter images per internal vertex, breadth-first lexicographic.
    portrait: Box<[u8]>,
}

impl TreeAutomorphism {
    pub fn identity(alphabet: Alphabet, depth: usize) -> Self {
        let k = alphabet.size();
        let vertices = alphabet.level_offset(depth);
        let portrait = (0..vertices * k).map(|i| (i % k) as u8).collect();
        TreeAutomorphism {
            alphabet,
            depth,
            portrait,
        }
    }

    /// Builds an automorphism from one letter permutation (in one-line
    /// notation) per internal vertex, breadth-first lexicographic order.
    pub fn from_portrait(alphabet: Alphabet, depth: usize, perms: &[Vec<usize>]) -> Result<Self> {
        let k = alphabet.size();
        let expected = alphabet.level_offset(depth);
        if perms.len() != expected {
            return Err(Error::domain(format!(
                "depth-{depth} portrait needs {expected} vertex permutations, got {}",
                perms.len()
            )));
        }
        let mut portrait = Vec::with_capacity(expected * k);
        for (v, p) in perms.iter().enumerate() {
            check_letter_perm(k, p)
                .map_err(|msg| Error::structure(None, format!("vertex #{v}: {msg}")))?;
            portrait.extend(p.iter().map(|&x| x as u8));
        }
        Ok(TreeAutomorphism {
            alphabet,
            depth,
            portrait: portrait.into_boxed_slice(),
        })
    }

    /// The automorphism acting as `perm` at vertex `v` and trivially
    /// everywhere else.
    pub fn vertex_swap(
        alphabet: Alphabet,
        depth: usize,
        v: &Vertex,
        perm: &[usize],
    ) -> Result<Self> {
        if v.depth() >= depth {
            return Err(Error::domain(format!(
                "vertex {v} is not internal in a depth-{depth} tree"
            )));
        }
        check_letter_perm(alphabet.size(), perm).map_err(|m| Error::structure(None, m))?;
        let mut g = Self::identity(alphabet, depth);
        let flat = alphabet.level_offset(v.depth()) + v.index(alphabet);
        let k = alphabet.size();
        for (x, &y) in perm.iter().enumerate() {
            g.portrait[flat * k + x] = y as u8;
        }
        Ok(g)
    }

    /// The automorphism of depth `depth` that acts as `inner` on the subtree
    /// below the vertex with lexicographic index `vertex_index` on level
    /// `vertex_depth`, and trivially elsewhere.
    pub fn planted(
        depth: usize,
        vertex_depth: usize,
        vertex_index: usize,
        inner: &TreeAutomorphism,
    ) -> Result<Self> {
        let alphabet = inner.alphabet;
        if vertex_depth + inner.depth != depth {
            return Err(Error::domain(format!(
                "cannot plant a depth-{} automorphism at depth {vertex_depth} of a depth-{depth} tree",
                inner.depth
            )));
        }
        let k = alphabet.size();
        let mut g = Self::identity(alphabet, depth);
        for t in 0..inner.depth {
            let width = alphabet.level_size(t);
            let src = alphabet.level_offset(t) * k;
            let dst = (alphabet.level_offset(vertex_depth + t) + vertex_index * width) * k;
            g.portrait[dst..dst + width * k].copy_from_slice(&inner.portrait[src..src + width * k]);
        }
        Ok(g)
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Letter permutation at the vertex with lexicographic index `index` on
    /// level `level`.
    #[inline]
    pub fn vertex_perm(&self, level: usize, index: usize) -> &[u8] {
        let k = self.alphabet.size();
        let flat = self.alphabet.level_offset(level) + index;
        &self.portrait[flat * k..(flat + 1) * k]
    }

    pub fn is_identity(&self) -> bool {
        let k = self.alphabet.size();
        self.portrait
            .iter()
            .enumerate()
            .all(|(i, &y)| i % k == y as usize)
    }

    /// True when the portrait is trivial at every vertex of depth `< level`,
    /// i.e. the element lies in the level stabilizer `St(level)`.
    pub fn fixes_level(&self, level: usize) -> bool {
        let k = self.alphabet.size();
        let end = self.alphabet.level_offset(level.min(self.depth)) * k;
        self.portrait[..end]
            .iter()
            .enumerate()
            .all(|(i, &y)| i % k == y as usize)
    }

    /// Images of all vertices, level by level, as lexicographic indices.
    fn level_images(&self) -> Vec<Vec<usize>> {
        let k = self.alphabet.size();
        let mut out = Vec::with_capacity(self.depth + 1);
        out.push(vec![0usize]);
        for t in 0..self.depth {
            let prev = &out[t];
            let mut next = vec![0usize; prev.len() * k];
            for (v, &img) in prev.iter().enumerate() {
                let perm = self.vertex_perm(t, v);
                for x in 0..k {
                    next[v * k + x] = img * k + perm[x] as usize;
                }
            }
            out.push(next);
        }
        out
    }

    /// Image of the vertex with lexicographic index `index` on level `level`.
    pub fn apply_index(&self, level: usize, index: usize) -> usize {
        let k = self.alphabet.size();
        let mut src = 0;
        let mut img = 0;
        let mut rem = index;
        let mut scale = self.alphabet.level_size(level);
        for t in 0..level {
            scale /= k;
            let x = rem / scale;
            rem %= scale;
            let y = self.vertex_perm(t, src)[x] as usize;
            src = src * k + x;
            img = img * k + y;
        }
        img
    }

    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        self.check_vertex(v)?;
        let k = self.alphabet.size();
        let mut src = 0;
        let mut image = Vec::with_capacity(v.depth());
        for (t, x) in v.letters().enumerate() {
            image.push(self.vertex_perm(t, src)[x]);
            src = src * k + x;
        }
        Ok(Vertex(image))
    }

    /// `self ∘ other`, i.e. `(gh)(v) = g(h(v))`, with portrait
    /// `(gh)_(v) = g_(h(v)) h_(v)`.
    pub fn compose(&self, other: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        if self.alphabet != other.alphabet || self.depth != other.depth {
            return Err(Error::domain(format!(
                "cannot compose automorphisms of X^[{}] (k={}) and X^[{}] (k={})",
                self.depth, self.alphabet, other.depth, other.alphabet
            )));
        }
        let k = self.alphabet.size();
        let h_images = other.level_images();
        let mut portrait = vec![0u8; self.portrait.len()];
        for (t, level) in h_images.iter().enumerate().take(self.depth) {
            let base = self.alphabet.level_offset(t);
            for (v, &hv) in level.iter().enumerate() {
                let g_perm = self.vertex_perm(t, hv);
                let h_perm = other.vertex_perm(t, v);
                let dst = (base + v) * k;
                for x in 0..k {
                    portrait[dst + x] = g_perm[h_perm[x] as usize];
                }
            }
        }
        Ok(TreeAutomorphism {
            alphabet: self.alphabet,
            depth: self.depth,
            portrait: portrait.into_boxed_slice(),
        })
    }

    /// Inverse via `(g^-1)_(g(w)) = (g_(w))^-1`.
    pub fn inverse(&self) -> TreeAutomorphism {
        let k = self.alphabet.size();
        let images = self.level_images();
        let mut portrait = vec![0u8; self.portrait.len()];
        for (t, level) in images.iter().enumerate().take(self.depth) {
            let base = self.alphabet.level_offset(t);
            for (w, &gw) in level.iter().enumerate() {
                let perm = self.vertex_perm(t, w);
                let dst = (base + gw) * k;
                for x in 0..k {
                    portrait[dst + perm[x] as usize] = x as u8;
                }
            }
        }
        TreeAutomorphism {
            alphabet: self.alphabet,
            depth: self.depth,
            portrait: portrait.into_boxed_slice(),
        }
    }

    /// The section `g_(v)`, an automorphism of depth `depth - |v|`.
    pub fn section(&self, v: &Vertex) -> Result<TreeAutomorphism> {
        self.check_vertex(v)?;
        Ok(self.section_at(v.depth(), v.index(self.alphabet)))
    }

    /// Section at the vertex with lexicographic index `index` on `level`.
    pub fn section_at(&self, level: usize, index: usize) -> TreeAutomorphism {
        let alphabet = self.alphabet;
        let k = alphabet.size();
        let depth = self.depth - level;
        let mut portrait = Vec::with_capacity(alphabet.level_offset(depth) * k);
        for t in 0..depth {
            let width = alphabet.level_size(t);
            let start = (alphabet.level_offset(level + t) + index * width) * k;
            portrait.extend_from_slice(&self.portrait[start..start + width * k]);
        }
        TreeAutomorphism {
            alphabet,
            depth,
            portrait: portrait.into_boxed_slice(),
        }
    }

    /// Section at `index` on `level`, restricted to depth `depth`.
    pub fn section_restricted(&self, level: usize, index: usize, depth: usize) -> TreeAutomorphism {
        debug_assert!(level + depth <= self.depth);
        let alphabet = self.alphabet;
        let k = alphabet.size();
        let mut portrait = Vec::with_capacity(alphabet.level_offset(depth) * k);
        for t in 0..depth {
            let width = alphabet.level_size(t);
            let start = (alphabet.level_offset(level + t) + index * width) * k;
            portrait.extend_from_slice(&self.portrait[start..start + width * k]);
        }
        TreeAutomorphism {
            alphabet,
            depth,
            portrait: portrait.into_boxed_slice(),
        }
    }

    /// Restriction of the action to `X^[m]`.
    pub fn restrict(&self, m: usize) -> Result<TreeAutomorphism> {
        if m > self.depth {
            return Err(Error::domain(format!(
                "cannot restrict a depth-{} automorphism to depth {m}",
                self.depth
            )));
        }
        let end = self.alphabet.level_offset(m) * self.alphabet.size();
        Ok(TreeAutomorphism {
            alphabet: self.alphabet,
            depth: m,
            portrait: self.portrait[..end].into(),
        })
    }

    /// Extends the portrait to depth `self.depth + 1` using the given letter
    /// permutations on the new bottom level (one per vertex, lexicographic).
    pub(crate) fn extend_with(&self, bottom: &[u8]) -> TreeAutomorphism {
        debug_assert_eq!(
            bottom.len(),
            self.alphabet.level_size(self.depth) * self.alphabet.size()
        );
        let mut portrait = Vec::with_capacity(self.portrait.len() + bottom.len());
        portrait.extend_from_slice(&self.portrait);
        portrait.extend_from_slice(bottom);
        TreeAutomorphism {
            alphabet: self.alphabet,
            depth: self.depth + 1,
            portrait: portrait.into_boxed_slice(),
        }
    }

    /// Raw portrait entries of level `level`, `k` per vertex.
    pub(crate) fn level_slice(&self, level: usize) -> &[u8] {
        let k = self.alphabet.size();
        let start = self.alphabet.level_offset(level) * k;
        let end = self.alphabet.level_offset(level + 1) * k;
        &self.portrait[start..end]
    }

    pub fn to_leaf_permutation(&self) -> Permutation {
        self.to_leaf_permutation_with(LeafNumbering::Lex)
    }

    /// Action on the `k^n` leaves, numbered by `numbering`.
    pub fn to_leaf_permutation_with(&self, numbering: LeafNumbering) -> Permutation {
        let leaves = self.alphabet.level_size(self.depth);
        assert!(leaves <= MAX_DEGREE, "too many leaves for a permutation");
        let images = self.level_images().pop().unwrap_or_else(|| vec![0]);
        let mut out = vec![0u16; leaves];
        for (lex, &img) in images.iter().enumerate() {
            let p = numbering.point(self.alphabet, self.depth, lex);
            out[p] = numbering.point(self.alphabet, self.depth, img) as u16;
        }
        Permutation::from_raw(out)
    }

    pub fn from_leaf_permutation(
        p: &Permutation,
        alphabet: Alphabet,
        depth: usize,
    ) -> Result<Self> {
        Self::from_leaf_permutation_with(p, alphabet, depth, LeafNumbering::Lex)
    }

    /// Reconstructs the portrait from a leaf action. Fails with a structure
    /// error naming the first level whose prefix partition is not preserved.
    pub fn from_leaf_permutation_with(
        p: &Permutation,
        alphabet: Alphabet,
        depth: usize,
        numbering: LeafNumbering,
    ) -> Result<Self> {
        let k = alphabet.size();
        let leaves = alphabet.level_size(depth);
        if p.degree() != leaves {
            return Err(Error::domain(format!(
                "leaf permutation of degree {} does not act on X^{depth} ({leaves} leaves)",
                p.degree()
            )));
        }
        // lexicographic leaf map
        let f: Vec<usize> = (0..leaves)
            .map(|lex| {
                let point = numbering.point(alphabet, depth, lex);
                numbering.lex_index(alphabet, depth, p.image(point))
            })
            .collect();
        for level in 1..depth {
            let block = alphabet.level_size(depth - level);
            for b in 0..leaves / block {
                let target = f[b * block] / block;
                if (1..block).any(|r| f[b * block + r] / block != target) {
                    return Err(Error::structure(
                        Some(level),
                        format!(
                            "leaf permutation {p} does not preserve prefixes of length {level}"
                        ),
                    ));
                }
            }
        }
        let mut portrait = Vec::with_capacity(alphabet.level_offset(depth) * k);
        for level in 0..depth {
            let below = alphabet.level_size(depth - level - 1);
            for v in 0..alphabet.level_size(level) {
                for x in 0..k {
                    let child = v * k + x;
                    let y = (f[child * below] / below) % k;
                    portrait.push(y as u8);
                }
            }
        }
        Ok(TreeAutomorphism {
            alphabet,
            depth,
            portrait: portrait.into_boxed_slice(),
        })
    }

    /// Text portrait: `k n`, then one line per internal vertex.
    pub fn to_portrait_text(&self) -> String {
        let k = self.alphabet.size();
        let mut s = format!("{} {}\n", k, self.depth);
        for chunk in self.portrait.chunks(k) {
            let line: Vec<String> = chunk.iter().map(|y| y.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn parse_portrait_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing 'k n' header"))?;
        let nums = parse_usizes(hline, header)?;
        if nums.len() != 2 {
            return Err(Error::parse(hline, 1, "header must be 'k n'"));
        }
        let alphabet = Alphabet::new(nums[0]).map_err(|e| Error::parse(hline, 1, e.to_string()))?;
        let depth = nums[1];
        let mut perms = Vec::new();
        for (ln, line) in lines {
            let p = parse_usizes(ln, line)?;
            check_letter_perm(alphabet.size(), &p).map_err(|m| Error::parse(ln, 1, m))?;
            perms.push(p);
        }
        let expected = alphabet.level_offset(depth);
        if perms.len() != expected {
            return Err(Error::parse(
                hline,
                1,
                format!("expected {expected} vertex lines, found {}", perms.len()),
            ));
        }
        Self::from_portrait(alphabet, depth, &perms)
    }

    fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if v.depth() > self.depth {
            return Err(Error::domain(format!(
                "vertex {v} is deeper than the tree X^[{}]",
                self.depth
            )));
        }
        if v.letters().any(|x| x >= self.alphabet.size()) {
            return Err(Error::domain(format!(
                "vertex {v} uses letters outside alphabet of size {}",
                self.alphabet
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for TreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.alphabet.size();
        write!(f, "TreeAutomorphism(k={}, n={}, [", k, self.depth)?;
        for (i, chunk) in self.portrait.chunks(k).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            for y in chunk {
                write!(f, "{y}")?;
            }
        }
        f.write_str("])")
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Whitespace-separated unsigned integers with column-accurate errors.
pub(crate) fn parse_usizes(line_no: usize, line: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut col = 0;
    for tok in line.split_whitespace() {
        let start = line[col..].find(tok).map(|i| i + col).unwrap_or(col);
        col = start + tok.len();
        out.push(tok.parse().map_err(|_| {
            Error::parse(
                line_no,
                start + 1,
                format!("expected an integer, found '{tok}'"),
            )
        })?);
    }
    Ok(out)
}

fn check_letter_perm(k: usize, p: &[usize]) -> std::result::Result<(), String> {
    if p.len() != k {
        return Err(format!("expected {k} letter images, got {}", p.len()));
    }
    let mut seen = vec![false; k];
    for &y in p {
        if y >= k || seen[y] {
            return Err(format!("{p:?} is not a permutation of 0..{k}"));
        }
        seen[y] = true;
    }
    Ok(())
}

/// Generators of `Aut X^[n]`: at every internal vertex, a transposition and
/// (for `k > 2`) a `k`-cycle.
pub fn full_automorphism_generators(alphabet: Alphabet, depth: usize) -> Vec<TreeAutomorphism> {
    let k = alphabet.size();
    let mut swap: Vec<usize> = (0..k).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..k).map(|x| (x + 1) % k).collect();
    let mut out = Vec::new();
    for level in 0..depth {
        for v in 0..alphabet.level_size(level) {
            let vertex = Vertex::from_index(alphabet, level, v);
            out.push(TreeAutomorphism::vertex_swap(alphabet, depth, &vertex, &swap).unwrap());
            if k > 2 {
                out.push(TreeAutomorphism::vertex_swap(alphabet, depth, &vertex, &cycle).unwrap());
            }
        }
    }
    out
}
