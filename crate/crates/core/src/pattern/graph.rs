use std::collections::HashMap;
use std::fmt::Write as _;

use super::PatternGroup;
use crate::tree::TreeAutomorphism;

/// Vertex count above which DOT output carries a size warning.
pub const DOT_WARN_VERTICES: usize = 512;

/// The labelled graph on the elements of `P` with an arc `a -x-> b` whenever
/// `a_(x)|_{X^[d-1]} = b|_{X^[d-1]}`. Vertices are element indices of `P`.
#[derive(Clone, Debug)]
pub struct PatternGraph {
    alphabet: usize,
    vertices: usize,
    /// `successors[a * k + x]` lists every `b` with an arc `a -x-> b`.
    successors: Vec<Vec<u32>>,
}

impl PatternGraph {
    pub fn new(p: &PatternGroup) -> Self {
        let d = p.depth();
        let k = p.alphabet().size();
        let mut fibers: HashMap<TreeAutomorphism, Vec<u32>> = HashMap::new();
        for (i, b) in p.elements().iter().enumerate() {
            fibers
                .entry(b.restrict(d - 1).expect("d >= 1"))
                .or_default()
                .push(i as u32);
        }
        let mut successors = Vec::with_capacity(p.order() * k);
        for a in p.elements() {
            for x in 0..k {
                let head = a.section_restricted(1, x, d - 1);
                successors.push(fibers.get(&head).cloned().unwrap_or_default());
            }
        }
        PatternGraph {
            alphabet: k,
            vertices: p.order(),
            successors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arc_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, a: usize, x: usize) -> &[u32] {
        &self.successors[a * self.alphabet + x]
    }

    /// Arcs `(a, x, b)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.vertices).flat_map(move |a| {
            (0..self.alphabet).flat_map(move |x| {
                self.successors(a, x)
                    .iter()
                    .map(move |&b| (a, x, b as usize))
            })
        })
    }

    /// True if every vertex has an out-arc for every letter.
    pub fn has_full_out_degree(&self) -> bool {
        self.successors.iter().all(|s| !s.is_empty())
    }

    /// Out-degrees per (vertex, letter) if they are all equal.
    pub fn regular_out_degree(&self) -> Option<usize> {
        let first = self.successors.first()?.len();
        self.successors
            .iter()
            .all(|s| s.len() == first)
            .then_some(first)
    }

    /// Graphviz rendering. Vertex `i` is the `i`-th element of `P`; the
    /// legend maps indices to leaf permutations.
    pub fn to_dot(&self, p: &PatternGroup) -> String {
        let mut out = String::new();
        if self.vertices > DOT_WARN_VERTICES {
            let _ = writeln!(
                out,
                "// warning: {} vertices; rendering will be slow",
                self.vertices
            );
        }
        out.push_str("digraph pattern_graph {\n");
        let _ = writeln!(
            out,
            "  // k={} d={} |P|={}",
            p.alphabet(),
            p.depth(),
            p.order()
        );
        out.push_str("  // legend: vertex = leaf permutation (lex numbering)\n");
        for (i, g) in p.elements().iter().enumerate() {
            let _ = writeln!(out, "  //   {i} = {}", g.to_leaf_permutation());
        }
        for i in 0..self.vertices {
            let _ = writeln!(out, "  {i};");
        }
        for (a, x, b) in self.arcs() {
            let _ = writeln!(out, "  {a} -> {b} [label=\"x={x}\"];");
        }
        out.push_str("}\n");
        out
    }
}
