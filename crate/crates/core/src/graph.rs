//! Explicit adjacency lists over canonically ordered labels.
//!
//! Construction sorts the labels, so vertex ids are stable across runs
//! and independent of the order edges were generated in.

use std::collections::HashMap;
use std::hash::Hash;

/// An undirected graph with labels of type `L`, remembering the parameters
/// `P` it was built from.
#[derive(Clone, Debug)]
pub struct MaterializedGraph<L, P> {
    labels: Vec<L>,
    index: HashMap<L, u32>,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    provenance: P,
}

impl<L, P> MaterializedGraph<L, P>
where
    L: Clone + Eq + Ord + Hash,
{
    /// Builds the graph from its vertex labels and an edge list. Labels are
    /// deduplicated and sorted; edges must connect known labels and are
    /// deduplicated as unordered pairs. Self-loops are rejected.
    pub fn from_edges(labels: Vec<L>, edges: Vec<(L, L)>, provenance: P) -> Self {
        let mut labels = labels;
        labels.sort();
        labels.dedup();
        let index: HashMap<L, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        let mut pairs: Vec<(u32, u32)> = edges
            .iter()
            .map(|(a, b)| {
                let ia = *index.get(a).expect("edge endpoint not in vertex set");
                let ib = *index.get(b).expect("edge endpoint not in vertex set");
                assert_ne!(ia, ib, "self-loop");
                (ia.min(ib), ia.max(ib))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(a, b) in &pairs {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        MaterializedGraph {
            labels,
            index,
            adjacency,
            edge_count: pairs.len(),
            provenance,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn label(&self, id: u32) -> &L {
        &self.labels[id as usize]
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn vertex_id(&self, label: &L) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn neighbors(&self, id: u32) -> &[u32] {
        &self.adjacency[id as usize]
    }

    pub fn degree(&self, id: u32) -> usize {
        self.adjacency[id as usize].len()
    }

    pub fn provenance(&self) -> &P {
        &self.provenance
    }

    /// Edges as id pairs `(a, b)` with `a < b`, ascending.
    pub fn edge_ids(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, row)| {
            let a = a as u32;
            row.iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    /// Edges as label pairs, in the same order as `edge_ids`.
    pub fn edge_labels(&self) -> impl Iterator<Item = (&L, &L)> + '_ {
        self.edge_ids()
            .map(|(a, b)| (&self.labels[a as usize], &self.labels[b as usize]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_basics() {
        let g = MaterializedGraph::from_edges(
            vec!["c", "a", "b"],
            vec![("a", "b"), ("b", "c"), ("a", "b")],
            (),
        );
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), &["a", "b", "c"]);
        assert_eq!(g.vertex_id(&"a"), Some(0));
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.edge_ids().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn ids_follow_sorted_label_order_not_input_order() {
        let g = MaterializedGraph::from_edges(vec!["z", "y", "x"], vec![("z", "x")], ());
        assert_eq!(g.label(0), &"x");
        assert_eq!(g.label(2), &"z");
        assert_eq!(g.neighbors(0), &[2]);
    }
}
