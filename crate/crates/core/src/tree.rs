//! Binary trees of bounded depth with vertices addressed by bit sequences.
//!
//! A vertex of the depth-`n` tree is a sequence of bits of length at most
//! `n`; the empty sequence is the root and adjacency is one-bit extension.

use std::cmp::Ordering;
use std::fmt;

use crate::graph::MaterializedGraph;

/// A vertex of a binary tree: the bit path from the root.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeVertex {
    bits: Vec<bool>,
}

impl TreeVertex {
    pub fn root() -> Self {
        TreeVertex { bits: Vec::new() }
    }

    pub fn new(bits: Vec<bool>) -> Self {
        TreeVertex { bits }
    }

    /// Parses a vertex from a bit string such as `1110`. The root is
    /// written `-` since the empty string does not survive whitespace
    /// splitting in the text formats.
    pub fn parse(s: &str) -> Option<Self> {
        if s == "-" {
            return Some(Self::root());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        if bits.is_empty() {
            return None;
        }
        Some(TreeVertex { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Distance from the root.
    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn is_root(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn parent(&self) -> Option<Self> {
        if self.bits.is_empty() {
            None
        } else {
            Some(TreeVertex {
                bits: self.bits[..self.bits.len() - 1].to_vec(),
            })
        }
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.bits.clone();
        bits.push(bit);
        TreeVertex { bits }
    }

    /// Length of the longest common prefix with `other`.
    pub fn common_prefix_len(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }
}

// Length-lexicographic: by depth first, then by bits. This is the canonical
// enumeration and serialization order everywhere in the crate.
impl Ord for TreeVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for TreeVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The parameter of a binary tree: its depth.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TreeSpec {
    pub depth: u32,
}

impl TreeSpec {
    pub fn new(depth: u32) -> Self {
        TreeSpec { depth }
    }

    /// `2^(n+1) - 1`.
    pub fn vertex_count(&self) -> u64 {
        (1u64 << (self.depth + 1)) - 1
    }

    pub fn contains(&self, v: &TreeVertex) -> bool {
        v.depth() as u32 <= self.depth
    }
}

/// All vertices of `T_n` in length-lexicographic order, root first.
pub fn enumerate_tree(spec: TreeSpec) -> Vec<TreeVertex> {
    let mut out = Vec::with_capacity(spec.vertex_count() as usize);
    for len in 0..=spec.depth {
        for code in 0u64..(1u64 << len) {
            let bits = (0..len).map(|i| (code >> (len - 1 - i)) & 1 == 1).collect();
            out.push(TreeVertex::new(bits));
        }
    }
    out
}

/// Shortest-path distance in the tree: `|u| + |v| - 2 lcp(u, v)`.
pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> u64 {
    let lcp = u.common_prefix_len(v);
    (u.depth() + v.depth() - 2 * lcp) as u64
}

/// Explicit adjacency structure of `T_n`, for use as a BFS ground truth.
pub fn materialize_tree(spec: TreeSpec) -> MaterializedGraph<TreeVertex, TreeSpec> {
    let vertices = enumerate_tree(spec);
    let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
    for v in &vertices {
        if let Some(p) = v.parent() {
            edges.push((p, v.clone()));
        }
    }
    MaterializedGraph::from_edges(vertices, edges, spec)
}
