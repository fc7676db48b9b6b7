//! Exact shortest-path metrics.
//!
//! Diamond distances are computed in O(level) from the addresses alone via
//! boundary profiles — the pair of distances from a vertex to the bottom
//! and top of an enclosing subdiamond. A vertex always lies on a
//! bottom-to-top geodesic of its subdiamond, so the two components sum to
//! the subdiamond's diameter. BFS on materialized graphs is kept alongside
//! as the ground-truth oracle.

use std::collections::VecDeque;
use std::hash::Hash;

use thiserror::Error;

use crate::diamond::{
    DiamondAddress, DiamondError, DiamondParams, Half, Refinement, SubdiamondRef,
};
use crate::graph::MaterializedGraph;

pub use crate::tree::tree_distance;

/// Sentinel for vertices a masked/partial BFS never reached.
pub const UNREACHED: u64 = u64::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error(transparent)]
    Address(#[from] DiamondError),
    #[error("vertex {vertex} does not lie in subdiamond {subdiamond}")]
    NotInSubdiamond { vertex: String, subdiamond: String },
    #[error("vertex not in graph")]
    VertexNotInGraph,
}

/// Distances from a vertex to the bottom and top of a subdiamond
/// containing it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundaryProfile {
    pub d_bottom: u64,
    pub d_top: u64,
    /// Level of the reference subdiamond; `d_bottom + d_top = 2^level`.
    pub level: u32,
}

/// Profile of the inner vertex with refinement path `path` relative to the
/// subdiamond at `path[..anchor]`. The vertex starts as the middle of its
/// own subdiamond, and each step out through a Lower half adds that
/// parent's half-diameter on the top side (Upper: bottom side).
fn inner_profile(path: &[Refinement], anchor: usize, m: u32) -> (u64, u64) {
    let own_level = m - path.len() as u32;
    debug_assert!(own_level >= 1);
    let mut d_bottom = 1u64 << (own_level - 1);
    let mut d_top = d_bottom;
    for (i, r) in path.iter().enumerate().skip(anchor) {
        let half_diameter = 1u64 << (m - 1 - i as u32);
        match r.half {
            Half::Lower => d_top += half_diameter,
            Half::Upper => d_bottom += half_diameter,
        }
    }
    (d_bottom, d_top)
}

/// Exact distances from `v` to the bottom and top of `s`.
pub fn boundary_profile(
    v: &DiamondAddress,
    s: &SubdiamondRef,
    params: &DiamondParams,
) -> Result<BoundaryProfile, MetricError> {
    v.validate(params)?;
    s.validate(params)?;
    let level = s.level(params);
    let not_in = || MetricError::NotInSubdiamond {
        vertex: format!("{v:?}"),
        subdiamond: s.to_string(),
    };
    if *v == s.bottom() {
        return Ok(BoundaryProfile {
            d_bottom: 0,
            d_top: 1 << level,
            level,
        });
    }
    if *v == s.top() {
        return Ok(BoundaryProfile {
            d_bottom: 1 << level,
            d_top: 0,
            level,
        });
    }
    match v {
        DiamondAddress::Inner { path, .. } if path.starts_with(s.path()) => {
            let (d_bottom, d_top) = inner_profile(path, s.path().len(), params.level());
            Ok(BoundaryProfile {
                d_bottom,
                d_top,
                level,
            })
        }
        _ => Err(not_in()),
    }
}

/// Exact shortest-path distance between two addresses of `D_{m,k}`,
/// computed without materializing the graph.
///
/// The two vertices are located relative to their minimal common
/// subdiamond `S` (longest common refinement prefix). Any path between
/// different chains of `S` passes through `S`'s bottom or top, which
/// reduces every case to boundary profiles; the same-chain/different-half
/// case additionally admits the route around the far endpoints, which is
/// included in the minimum even though the route through the chain middle
/// always wins.
pub fn diamond_distance(
    u: &DiamondAddress,
    v: &DiamondAddress,
    params: &DiamondParams,
) -> Result<u64, MetricError> {
    u.validate(params)?;
    v.validate(params)?;
    if u == v {
        return Ok(0);
    }
    let m = params.level();
    let whole_profile = |x: &DiamondAddress| -> (u64, u64) {
        match x {
            DiamondAddress::Bottom => (0, 1 << m),
            DiamondAddress::Top => (1 << m, 0),
            DiamondAddress::Inner { path, .. } => inner_profile(path, 0, m),
        }
    };
    let (pu, mu, pv, mv) = match (u, v) {
        (DiamondAddress::Bottom, x) | (x, DiamondAddress::Bottom) => {
            return Ok(whole_profile(x).0);
        }
        (DiamondAddress::Top, x) | (x, DiamondAddress::Top) => {
            return Ok(whole_profile(x).1);
        }
        (
            DiamondAddress::Inner {
                path: pu,
                middle: mu,
            },
            DiamondAddress::Inner {
                path: pv,
                middle: mv,
            },
        ) => (pu, *mu, pv, *mv),
    };
    let c = pu.iter().zip(pv.iter()).take_while(|(a, b)| a == b).count();
    let level = m - c as u32; // level of the minimal common subdiamond S
    match (pu.len() == c, pv.len() == c) {
        (true, true) => {
            // Both are middles of S on different chains (mu != mv since
            // u != v): meet at S's bottom or top, each a half-diameter away.
            Ok(1 << level)
        }
        (true, false) | (false, true) => {
            // One is S's chain-mu middle, the other strictly deeper.
            let (ma, pb) = if pu.len() == c { (mu, pv) } else { (mv, pu) };
            let step = pb[c];
            if step.branch == ma {
                // Deeper vertex sits in a child on the middle's own chain;
                // the middle is that child's top (Lower) or bottom (Upper).
                let (d_bottom, d_top) = inner_profile(pb, c + 1, m);
                Ok(match step.half {
                    Half::Lower => d_top,
                    Half::Upper => d_bottom,
                })
            } else {
                let (d_bottom, d_top) = inner_profile(pb, c, m);
                Ok((1 << (level - 1)) + d_bottom.min(d_top))
            }
        }
        (false, false) => {
            let ru = pu[c];
            let rv = pv[c];
            if ru.branch != rv.branch {
                let (dbu, dtu) = inner_profile(pu, c, m);
                let (dbv, dtv) = inner_profile(pv, c, m);
                Ok((dbu + dbv).min(dtu + dtv))
            } else {
                // Same chain, different halves. x in the Lower child (top =
                // the chain middle w), y in the Upper child (bottom = w).
                let (px, py) = if ru.half == Half::Lower {
                    (pu, pv)
                } else {
                    (pv, pu)
                };
                let (dbx, dtx) = inner_profile(px, c + 1, m);
                let (dby, dty) = inner_profile(py, c + 1, m);
                let through_middle = dtx + dby;
                let around_endpoints = dbx + (1 << level) + dty;
                Ok(through_middle.min(around_endpoints))
            }
        }
    }
}

/// BFS distances from `src` to every vertex, respecting `allowed`:
/// vertices with `allowed[i] == false` are treated as deleted. Unreached
/// vertices get [`UNREACHED`].
pub fn bfs_distances_masked<L, P>(
    g: &MaterializedGraph<L, P>,
    src: u32,
    allowed: &[bool],
) -> Vec<u64>
where
    L: Clone + Eq + Ord + Hash,
{
    assert_eq!(allowed.len(), g.vertex_count());
    assert!(allowed[src as usize], "BFS source is masked out");
    let mut dist = vec![UNREACHED; g.vertex_count()];
    dist[src as usize] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        for &y in g.neighbors(x) {
            if allowed[y as usize] && dist[y as usize] == UNREACHED {
                dist[y as usize] = dx + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// BFS distances from `src` to every vertex of `g`.
pub fn bfs_distances<L, P>(g: &MaterializedGraph<L, P>, src: u32) -> Vec<u64>
where
    L: Clone + Eq + Ord + Hash,
{
    bfs_distances_masked(g, src, &vec![true; g.vertex_count()])
}

/// Breadth-first shortest-path distance between two labeled vertices.
pub fn bfs_distance<L, P>(g: &MaterializedGraph<L, P>, u: &L, v: &L) -> Result<u64, MetricError>
where
    L: Clone + Eq + Ord + Hash,
{
    let su = g.vertex_id(u).ok_or(MetricError::VertexNotInGraph)?;
    let sv = g.vertex_id(v).ok_or(MetricError::VertexNotInGraph)?;
    if su == sv {
        return Ok(0);
    }
    Ok(bfs_distances(g, su)[sv as usize])
}
