//! Structural checks on materialized diamonds: metric balls around interior
//! vertices decompose into two subdiamonds, and deleting all vertices of
//! generation >= d shatters the graph into components of diameter < 2^d.

use thiserror::Error;

use crate::diamond::{generation_number, DiamondAddress, DiamondParams, Half, SubdiamondRef};
use crate::exec::{map_collect, Parallelism};
use crate::graph::MaterializedGraph;
use crate::metric::{
    bfs_distances, bfs_distances_masked, diamond_distance, MetricError, UNREACHED,
};

type DiamondGraph = MaterializedGraph<DiamondAddress, DiamondParams>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObservationError {
    #[error("{0} has no generation number")]
    NoGeneration(DiamondAddress),
    #[error("{0} is not a vertex of the graph")]
    VertexNotInGraph(DiamondAddress),
    #[error("generation {d} out of range for level {level}")]
    DepthOutOfRange { d: u32, level: u32 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Outcome of comparing the radius-2^(d-1) ball around a generation-d
/// vertex with the two subdiamonds meeting at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodReport {
    pub vertex: DiamondAddress,
    pub generation: u32,
    pub radius: u64,
    /// Subdiamond with `vertex` as its top.
    pub lower: SubdiamondRef,
    /// Subdiamond with `vertex` as its bottom.
    pub upper: SubdiamondRef,
    pub ball_size: usize,
    pub union_size: usize,
    pub overlap: Vec<DiamondAddress>,
    pub holds: bool,
    /// A vertex in the ball or the union but not both, when they differ.
    pub mismatch: Option<DiamondAddress>,
}

/// Checks that the ball of radius 2^(d-1) around a generation-d vertex is
/// exactly the union of the two level-(d-1) subdiamonds pasted at it, and
/// that those subdiamonds share only the vertex itself.
pub fn check_neighborhood_structure(
    g: &DiamondGraph,
    v: &DiamondAddress,
) -> Result<NeighborhoodReport, ObservationError> {
    let params = *g.provenance();
    let src = g
        .vertex_id(v)
        .ok_or_else(|| ObservationError::VertexNotInGraph(v.clone()))?;
    let generation = generation_number(v, &params)
        .map_err(MetricError::Address)?
        .ok_or_else(|| ObservationError::NoGeneration(v.clone()))?;
    let radius = 1u64 << (generation - 1);

    let (path, branch) = match v {
        DiamondAddress::Inner { path, middle } => (path.clone(), *middle),
        _ => unreachable!("endpoints have no generation"),
    };
    let own = SubdiamondRef::new(path);
    let lower = own.child(branch, Half::Lower);
    let upper = own.child(branch, Half::Upper);

    let dist = bfs_distances(g, src);
    let mut ball = vec![false; g.vertex_count()];
    for (u, &d) in dist.iter().enumerate() {
        ball[u] = d <= radius;
    }
    let mut union = vec![false; g.vertex_count()];
    let mut overlap = Vec::new();
    for (u, label) in g.labels().iter().enumerate() {
        let in_lower = lower.contains(label);
        let in_upper = upper.contains(label);
        union[u] = in_lower || in_upper;
        if in_lower && in_upper {
            overlap.push(label.clone());
        }
    }

    let ball_size = ball.iter().filter(|&&b| b).count();
    let union_size = union.iter().filter(|&&b| b).count();
    let mismatch = (0..g.vertex_count())
        .find(|&u| ball[u] != union[u])
        .map(|u| g.label(u as u32).clone());
    let holds = mismatch.is_none() && overlap == [v.clone()];

    Ok(NeighborhoodReport {
        vertex: v.clone(),
        generation,
        radius,
        lower,
        upper,
        ball_size,
        union_size,
        overlap,
        holds,
        mismatch,
    })
}

/// Component structure of the graph after deleting every vertex of
/// generation >= d. Diameters are measured inside the surviving subgraph;
/// the ambient (whole-graph) diameters of the same components are kept
/// alongside for comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDiameterReport {
    pub d: u32,
    /// Strict upper bound the components must stay below: 2^d.
    pub bound: u64,
    pub removed: usize,
    pub components: Vec<Vec<DiamondAddress>>,
    pub induced_diameters: Vec<u64>,
    pub ambient_diameters: Vec<u64>,
    pub max_induced_diameter: u64,
    pub holds: bool,
    pub induced_equals_ambient: bool,
}

/// Deletes all vertices of generation >= d and checks every surviving
/// component has induced diameter strictly below 2^d.
pub fn check_component_diameters(
    g: &DiamondGraph,
    d: u32,
) -> Result<ComponentDiameterReport, ObservationError> {
    let params = *g.provenance();
    if d < 1 || d > params.level() {
        return Err(ObservationError::DepthOutOfRange {
            d,
            level: params.level(),
        });
    }
    let n = g.vertex_count();
    let mut kept = vec![false; n];
    for (u, label) in g.labels().iter().enumerate() {
        let gen = generation_number(label, &params).map_err(MetricError::Address)?;
        kept[u] = !matches!(gen, Some(gd) if gd >= d);
    }
    let removed = kept.iter().filter(|&&b| !b).count();

    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if !kept[start] || component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut queue = vec![start as u32];
        component_of[start] = id;
        let mut members = vec![start as u32];
        while let Some(u) = queue.pop() {
            for &w in g.neighbors(u) {
                let w_us = w as usize;
                if kept[w_us] && component_of[w_us] == usize::MAX {
                    component_of[w_us] = id;
                    members.push(w);
                    queue.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    let mut induced_diameters = Vec::with_capacity(components.len());
    let mut ambient_diameters = Vec::with_capacity(components.len());
    for members in &components {
        let mut induced = 0u64;
        let mut ambient = 0u64;
        for &u in members {
            let dist = bfs_distances_masked(g, u, &kept);
            for &w in members {
                let duv = dist[w as usize];
                assert_ne!(duv, UNREACHED, "component members must be connected");
                induced = induced.max(duv);
                if w > u {
                    ambient = ambient.max(diamond_distance(g.label(u), g.label(w), &params)?);
                }
            }
        }
        induced_diameters.push(induced);
        ambient_diameters.push(ambient);
    }

    let bound = 1u64 << d;
    let max_induced_diameter = induced_diameters.iter().copied().max().unwrap_or(0);
    let holds = max_induced_diameter < bound;
    let induced_equals_ambient = induced_diameters == ambient_diameters;
    Ok(ComponentDiameterReport {
        d,
        bound,
        removed,
        components: components
            .into_iter()
            .map(|m| m.into_iter().map(|u| g.label(u).clone()).collect())
            .collect(),
        induced_diameters,
        ambient_diameters,
        max_induced_diameter,
        holds,
        induced_equals_ambient,
    })
}

/// Runs the neighborhood check on every generation-labeled vertex.
pub fn sweep_neighborhoods(
    g: &DiamondGraph,
    par: Parallelism,
) -> Result<Vec<NeighborhoodReport>, ObservationError> {
    let params = *g.provenance();
    let mut interior = Vec::new();
    for label in g.labels() {
        if generation_number(label, &params)
            .map_err(MetricError::Address)?
            .is_some()
        {
            interior.push(label.clone());
        }
    }
    map_collect(par, interior, |v| check_neighborhood_structure(g, &v))
        .into_iter()
        .collect()
}

/// Runs the component-diameter check for every d from 1 to the level.
pub fn sweep_component_diameters(
    g: &DiamondGraph,
    par: Parallelism,
) -> Result<Vec<ComponentDiameterReport>, ObservationError> {
    let ds: Vec<u32> = (1..=g.provenance().level()).collect();
    map_collect(par, ds, |d| check_component_diameters(g, d))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::materialize_diamond;

    fn graph(m: u32, k: u32) -> DiamondGraph {
        materialize_diamond(&DiamondParams::finite(m, k).unwrap(), 10_000).unwrap()
    }

    fn generation_vertices(g: &DiamondGraph, d: u32) -> Vec<DiamondAddress> {
        g.labels()
            .iter()
            .filter(|v| generation_number(v, g.provenance()).unwrap() == Some(d))
            .cloned()
            .collect()
    }

    #[test]
    fn newest_vertices_have_three_vertex_balls() {
        let g = graph(2, 2);
        let vs = generation_vertices(&g, 1);
        assert_eq!(vs.len(), 8);
        for v in vs {
            let rep = check_neighborhood_structure(&g, &v).unwrap();
            assert!(rep.holds, "{v}");
            assert_eq!(rep.radius, 1);
            assert_eq!(rep.ball_size, 3);
            assert_eq!(rep.union_size, 3);
            assert_eq!(rep.overlap, vec![v]);
        }
    }

    #[test]
    fn second_generation_balls_split_into_two_quadrilaterals() {
        let g = graph(3, 2);
        let vs = generation_vertices(&g, 2);
        assert_eq!(vs.len(), 8);
        for v in vs {
            let rep = check_neighborhood_structure(&g, &v).unwrap();
            assert!(rep.holds, "{v}");
            assert_eq!(rep.radius, 2);
            // Two level-1 subdiamonds (4 vertices each for k = 2) share v.
            assert_eq!(rep.ball_size, 7);
            assert_eq!(rep.lower.level(g.provenance()), 1);
            assert_eq!(rep.upper.level(g.provenance()), 1);
            assert_eq!(rep.lower.top(), v);
            assert_eq!(rep.upper.bottom(), v);
        }
    }

    #[test]
    fn neighborhood_sweep_holds_everywhere() {
        for (m, k) in [(4, 2), (2, 3)] {
            let g = graph(m, k);
            let reports = sweep_neighborhoods(&g, Parallelism::Sequential).unwrap();
            assert_eq!(reports.len(), g.vertex_count() - 2);
            assert!(reports.iter().all(|r| r.holds), "D_{{{m},{k}}}");
        }
    }

    #[test]
    fn endpoints_are_rejected() {
        let g = graph(1, 2);
        let err = check_neighborhood_structure(&g, &DiamondAddress::Bottom).unwrap_err();
        assert!(matches!(err, ObservationError::NoGeneration(_)));
        let stranger = DiamondAddress::Inner {
            path: vec![],
            middle: 7,
        };
        let err = check_neighborhood_structure(&g, &stranger).unwrap_err();
        assert!(matches!(err, ObservationError::VertexNotInGraph(_)));
    }

    #[test]
    fn deleting_both_middles_of_one_round_isolates_the_endpoints() {
        let g = graph(1, 2);
        let rep = check_component_diameters(&g, 1).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.removed, 2);
        assert_eq!(
            rep.components,
            vec![vec![DiamondAddress::Bottom], vec![DiamondAddress::Top]]
        );
        assert_eq!(rep.induced_diameters, vec![0, 0]);
        assert_eq!(rep.ambient_diameters, vec![0, 0]);
        assert_eq!(rep.bound, 2);
    }

    #[test]
    fn figure_graph_components() {
        let g = graph(2, 2);

        let rep = check_component_diameters(&g, 1).unwrap();
        assert!(rep.holds);
        // All ten interior vertices go; the endpoints survive alone.
        assert_eq!(rep.removed, 10);
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.max_induced_diameter, 0);

        let rep = check_component_diameters(&g, 2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.removed, 2);
        // Each endpoint keeps its four last-round neighbors: two stars.
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.components[0].len(), 5);
        assert_eq!(rep.components[1].len(), 5);
        assert_eq!(rep.max_induced_diameter, 2);
        assert!(rep.induced_equals_ambient);
    }

    #[test]
    fn deeper_graph_components() {
        let g = graph(3, 2);

        let rep = check_component_diameters(&g, 2).unwrap();
        assert!(rep.holds);
        // Two 9-vertex stars at the endpoints, the rest isolated.
        assert_eq!(rep.components.len(), 18);
        assert_eq!(rep.max_induced_diameter, 2);

        let rep = check_component_diameters(&g, 3).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.removed, 2);
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.components[0].len(), 21);
        assert_eq!(rep.components[1].len(), 21);
        assert_eq!(rep.max_induced_diameter, 6);
        assert!(rep.max_induced_diameter < rep.bound);
        assert!(rep.induced_equals_ambient);
    }

    #[test]
    fn component_sweep_holds_on_the_grid() {
        for (m, k) in [(4, 2), (3, 3)] {
            let g = graph(m, k);
            let reports = sweep_component_diameters(&g, Parallelism::Sequential).unwrap();
            assert_eq!(reports.len(), m as usize);
            for rep in &reports {
                assert!(rep.holds, "D_{{{m},{k}}}, d = {}", rep.d);
                let kept = g.vertex_count() - rep.removed;
                assert_eq!(rep.components.iter().map(Vec::len).sum::<usize>(), kept);
            }
        }
    }

    #[test]
    fn out_of_range_depths_are_rejected() {
        let g = graph(2, 2);
        assert!(matches!(
            check_component_diameters(&g, 0),
            Err(ObservationError::DepthOutOfRange { d: 0, level: 2 })
        ));
        assert!(matches!(
            check_component_diameters(&g, 3),
            Err(ObservationError::DepthOutOfRange { d: 3, level: 2 })
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn sweeps_are_parallelism_independent() {
        let g = graph(3, 2);
        assert_eq!(
            sweep_neighborhoods(&g, Parallelism::Sequential).unwrap(),
            sweep_neighborhoods(&g, Parallelism::Rayon).unwrap()
        );
        assert_eq!(
            sweep_component_diameters(&g, Parallelism::Sequential).unwrap(),
            sweep_component_diameters(&g, Parallelism::Rayon).unwrap()
        );
    }
}
