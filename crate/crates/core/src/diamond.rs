//! k-branching diamond graphs and their canonical vertex addressing.
//!
//! `D_{0,k}` is a single edge between `Bottom` and `Top`; `D_{m,k}` replaces
//! every edge of `D_{m-1,k}` by `k` parallel paths of length 2. Vertices are
//! addressed without materializing the graph: an inner vertex is the middle
//! of exactly one subdiamond, identified by the refinement path that reaches
//! that subdiamond from the whole graph plus the branch index of its chain.

use std::fmt;

use thiserror::Error;

use crate::graph::MaterializedGraph;

/// Maximum level: distances are `u64` and the diameter of `D_{m,k}` is `2^m`.
pub const MAX_LEVEL: u32 = 62;

/// Default cap on materialized vertex counts.
pub const DEFAULT_VERTEX_BUDGET: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiamondError {
    #[error("branching must be at least 2, got {0}")]
    BranchingTooSmall(u32),
    #[error("level {0} exceeds the supported maximum {MAX_LEVEL}")]
    LevelTooLarge(u32),
    #[error("materialization would need {needed} vertices, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("graphs of unbounded branching cannot be materialized or enumerated")]
    UnboundedBranching,
    #[error("invalid address for D_{{{level},{branching}}}: {reason}")]
    InvalidAddress {
        level: u32,
        branching: String,
        reason: String,
    },
    #[error("generation {d} out of range 1..={m}")]
    GenerationOutOfRange { d: u32, m: u32 },
    #[error("refinement path of length {path_len} does not fit level {level}")]
    PathTooLong { path_len: usize, level: u32 },
}

/// Number of parallel chains substituted per edge in each construction round.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Branching {
    Finite(u32),
    Unbounded,
}

impl Branching {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Branching::Finite(k) => Some(*k),
            Branching::Unbounded => None,
        }
    }
}

impl fmt::Display for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branching::Finite(k) => write!(f, "{k}"),
            Branching::Unbounded => f.write_str("inf"),
        }
    }
}

/// Parameters of a diamond graph `D_{m,k}`: level `m` and branching `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DiamondParams {
    level: u32,
    branching: Branching,
}

impl DiamondParams {
    pub fn new(level: u32, branching: Branching) -> Result<Self, DiamondError> {
        if level > MAX_LEVEL {
            return Err(DiamondError::LevelTooLarge(level));
        }
        if let Branching::Finite(k) = branching {
            if k < 2 {
                return Err(DiamondError::BranchingTooSmall(k));
            }
        }
        Ok(DiamondParams { level, branching })
    }

    pub fn finite(level: u32, k: u32) -> Result<Self, DiamondError> {
        Self::new(level, Branching::Finite(k))
    }

    pub fn unbounded(level: u32) -> Result<Self, DiamondError> {
        Self::new(level, Branching::Unbounded)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn branching(&self) -> Branching {
        self.branching
    }

    /// `(2k)^m`, or `None` for unbounded branching or overflow.
    pub fn edge_count(&self) -> Option<u64> {
        let k = self.branching.finite()? as u64;
        let mut e: u64 = 1;
        for _ in 0..self.level {
            e = e.checked_mul(2 * k)?;
        }
        Some(e)
    }

    /// `2 + k ((2k)^m - 1) / (2k - 1)`, or `None` for unbounded branching
    /// or overflow.
    pub fn vertex_count(&self) -> Option<u64> {
        let k = self.branching.finite()? as u64;
        let e = self.edge_count()?;
        // (2k)^m - 1 is divisible by 2k - 1.
        Some(2 + k.checked_mul((e - 1) / (2 * k - 1))?)
    }

    /// Top-to-bottom distance of the whole graph.
    pub fn diameter(&self) -> u64 {
        1u64 << self.level
    }

    fn branch_ok(&self, b: u32) -> bool {
        b >= 1
            && match self.branching {
                Branching::Finite(k) => b <= k,
                Branching::Unbounded => true,
            }
    }
}

/// Which of the two length-1 edges of a refined chain a child subdiamond
/// occupies: `Lower` touches the parent's bottom, `Upper` its top.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Half {
    Lower,
    Upper,
}

impl Half {
    pub fn letter(&self) -> char {
        match self {
            Half::Lower => 'L',
            Half::Upper => 'U',
        }
    }
}

/// One refinement step: descend into chain `branch`, half `half`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Refinement {
    pub branch: u32,
    pub half: Half,
}

impl Refinement {
    pub fn new(branch: u32, half: Half) -> Self {
        Refinement { branch, half }
    }
}

/// Canonical identifier of a vertex of `D_{m,k}`.
///
/// An `Inner` vertex is the unique middle of the subdiamond reached by
/// `path`, on chain `middle`. With `|path| = t` it was created at
/// construction step `t + 1` and carries generation number `m - t`.
///
/// The derived order (`Bottom`, then `Inner` by `(path, middle)`, then
/// `Top`) is the canonical vertex order used for serialization and for
/// deterministic tie-breaking.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DiamondAddress {
    Bottom,
    Inner { path: Vec<Refinement>, middle: u32 },
    Top,
}

impl DiamondAddress {
    pub fn inner(path: Vec<Refinement>, middle: u32) -> Self {
        DiamondAddress::Inner { path, middle }
    }

    pub fn is_endpoint(&self) -> bool {
        matches!(self, DiamondAddress::Bottom | DiamondAddress::Top)
    }

    /// Validates branch ranges and path length against `params`.
    pub fn validate(&self, params: &DiamondParams) -> Result<(), DiamondError> {
        let fail = |reason: String| DiamondError::InvalidAddress {
            level: params.level,
            branching: params.branching.to_string(),
            reason,
        };
        match self {
            DiamondAddress::Bottom | DiamondAddress::Top => Ok(()),
            DiamondAddress::Inner { path, middle } => {
                if params.level == 0 || path.len() > (params.level - 1) as usize {
                    return Err(fail(format!(
                        "refinement path of length {} needs level at least {}",
                        path.len(),
                        path.len() + 1
                    )));
                }
                for r in path {
                    if !params.branch_ok(r.branch) {
                        return Err(fail(format!("branch index {} out of range", r.branch)));
                    }
                }
                if !params.branch_ok(*middle) {
                    return Err(fail(format!("middle branch {} out of range", middle)));
                }
                Ok(())
            }
        }
    }

    /// Construction step at which the vertex appeared, in `1..=m`.
    /// Forward numbering: stable when the level grows.
    pub fn creation_step(&self) -> Option<u32> {
        match self {
            DiamondAddress::Inner { path, .. } => Some(path.len() as u32 + 1),
            _ => None,
        }
    }

    /// The subdiamond this vertex is the middle of.
    pub fn own_subdiamond(&self) -> Option<SubdiamondRef> {
        match self {
            DiamondAddress::Inner { path, .. } => Some(SubdiamondRef::new(path.clone())),
            _ => None,
        }
    }
}

// Display/parse live in `io`, next to the other text formats.

/// Generation number in the backward numbering: vertices created at the
/// last construction step have generation 1, and `Top`/`Bottom` belong to
/// no generation.
pub fn generation_number(
    v: &DiamondAddress,
    params: &DiamondParams,
) -> Result<Option<u32>, DiamondError> {
    v.validate(params)?;
    Ok(v.creation_step().map(|s| params.level - s + 1))
}

/// A subdiamond of `D_{m,k}`: the subgraph that evolved from one edge of
/// an earlier construction stage. A path of length `t` identifies a
/// subdiamond of level `m - t` (top-to-bottom distance `2^(m-t)`); the
/// empty path is the whole graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SubdiamondRef {
    path: Vec<Refinement>,
}

impl SubdiamondRef {
    pub fn new(path: Vec<Refinement>) -> Self {
        SubdiamondRef { path }
    }

    pub fn whole() -> Self {
        SubdiamondRef { path: Vec::new() }
    }

    pub fn path(&self) -> &[Refinement] {
        &self.path
    }

    pub fn validate(&self, params: &DiamondParams) -> Result<(), DiamondError> {
        if self.path.len() > params.level as usize {
            return Err(DiamondError::PathTooLong {
                path_len: self.path.len(),
                level: params.level,
            });
        }
        for r in &self.path {
            if !params.branch_ok(r.branch) {
                return Err(DiamondError::InvalidAddress {
                    level: params.level,
                    branching: params.branching.to_string(),
                    reason: format!("branch index {} out of range", r.branch),
                });
            }
        }
        Ok(())
    }

    pub fn level(&self, params: &DiamondParams) -> u32 {
        params.level - self.path.len() as u32
    }

    /// Top-to-bottom distance, `2^level`.
    pub fn diameter(&self, params: &DiamondParams) -> u64 {
        1u64 << self.level(params)
    }

    pub fn child(&self, branch: u32, half: Half) -> Self {
        let mut path = self.path.clone();
        path.push(Refinement::new(branch, half));
        SubdiamondRef { path }
    }

    /// The vertex of the subdiamond closest to the graph's bottom.
    pub fn bottom(&self) -> DiamondAddress {
        // Walk the path backwards: the first Upper step pins the bottom to
        // that step's chain middle; all-Lower paths keep the global bottom.
        for (i, r) in self.path.iter().enumerate().rev() {
            if r.half == Half::Upper {
                return DiamondAddress::inner(self.path[..i].to_vec(), r.branch);
            }
        }
        DiamondAddress::Bottom
    }

    /// The vertex of the subdiamond closest to the graph's top.
    pub fn top(&self) -> DiamondAddress {
        for (i, r) in self.path.iter().enumerate().rev() {
            if r.half == Half::Lower {
                return DiamondAddress::inner(self.path[..i].to_vec(), r.branch);
            }
        }
        DiamondAddress::Top
    }

    /// The middle vertex of chain `branch`. Requires `level >= 1`.
    pub fn middle(&self, branch: u32) -> DiamondAddress {
        DiamondAddress::inner(self.path.clone(), branch)
    }

    /// Whether `v` is strictly inside this subdiamond, i.e. the middle of
    /// it or of a descendant.
    pub fn contains_as_interior(&self, v: &DiamondAddress) -> bool {
        match v {
            DiamondAddress::Inner { path, .. } => path.starts_with(&self.path),
            _ => self.path.is_empty(),
        }
    }

    /// Whether `v` belongs to the subdiamond's vertex set.
    pub fn contains(&self, v: &DiamondAddress) -> bool {
        self.contains_as_interior(v) || *v == self.bottom() || *v == self.top()
    }
}

impl fmt::Display for SubdiamondRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str("-");
        }
        for (i, r) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}{}", r.branch, r.half.letter())?;
        }
        Ok(())
    }
}

/// All valid addresses of `D_{m,k}` in canonical order, without adjacency.
/// Cheaper than materialization when only the vertex set is needed.
pub fn enumerate_addresses(
    params: &DiamondParams,
    budget: u64,
) -> Result<Vec<DiamondAddress>, DiamondError> {
    let k = params
        .branching
        .finite()
        .ok_or(DiamondError::UnboundedBranching)?;
    let needed = params.vertex_count().ok_or(DiamondError::BudgetExceeded {
        needed: u64::MAX,
        budget,
    })?;
    if needed > budget {
        return Err(DiamondError::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::with_capacity(needed as usize);
    out.push(DiamondAddress::Bottom);
    let mut stack = vec![Vec::new()];
    // Depth-first over refinement paths, then sort: simplest way to get the
    // canonical order including the Bottom/Top sentinels.
    while let Some(path) = stack.pop() {
        if (path.len() as u32) < params.level {
            for b in 1..=k {
                out.push(DiamondAddress::inner(path.clone(), b));
            }
            if (path.len() as u32) < params.level - 1 {
                for b in (1..=k).rev() {
                    for h in [Half::Upper, Half::Lower] {
                        let mut p = path.clone();
                        p.push(Refinement::new(b, h));
                        stack.push(p);
                    }
                }
            }
        }
    }
    out.push(DiamondAddress::Top);
    out.sort();
    debug_assert_eq!(out.len() as u64, needed);
    Ok(out)
}

/// All vertices of generation `d`: the set `Z_d`, in canonical order.
/// Exactly the inner addresses with `|path| = m - d`, `k (2k)^(m-d)` many.
pub fn generation_members(
    d: u32,
    params: &DiamondParams,
    budget: u64,
) -> Result<Vec<DiamondAddress>, DiamondError> {
    let k = params
        .branching
        .finite()
        .ok_or(DiamondError::UnboundedBranching)?;
    if d < 1 || d > params.level {
        return Err(DiamondError::GenerationOutOfRange { d, m: params.level });
    }
    let plen = (params.level - d) as usize;
    let count =
        (k as u64).saturating_mul((2 * k as u64).checked_pow(plen as u32).unwrap_or(u64::MAX));
    if count > budget {
        return Err(DiamondError::BudgetExceeded {
            needed: count,
            budget,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut path: Vec<Refinement> = Vec::with_capacity(plen);
    fill_generation(&mut out, &mut path, plen, k);
    out.sort();
    Ok(out)
}

fn fill_generation(
    out: &mut Vec<DiamondAddress>,
    path: &mut Vec<Refinement>,
    remaining: usize,
    k: u32,
) {
    if remaining == 0 {
        for b in 1..=k {
            out.push(DiamondAddress::inner(path.clone(), b));
        }
        return;
    }
    for b in 1..=k {
        for h in [Half::Lower, Half::Upper] {
            path.push(Refinement::new(b, h));
            fill_generation(out, path, remaining - 1, k);
            path.pop();
        }
    }
}

/// The `k^m` vertices adjacent to `Bottom`: for `m >= 1` exactly the
/// generation-1 addresses whose every refinement half is `Lower`, and for
/// `m = 0` the single endpoint `Top`. For unbounded branching a cap on
/// branch indices must be supplied.
pub fn bottom_neighbors(
    params: &DiamondParams,
    branch_cap: Option<u32>,
) -> Result<BottomNeighbors, DiamondError> {
    let k = match (params.branching.finite(), branch_cap) {
        (Some(k), None) => k,
        (Some(k), Some(cap)) => k.min(cap),
        (None, Some(cap)) => cap,
        (None, None) => return Err(DiamondError::UnboundedBranching),
    };
    Ok(BottomNeighbors {
        level: params.level,
        k,
        top_pending: params.level == 0,
        branches: if params.level == 0 {
            None
        } else {
            Some(vec![1; params.level as usize])
        },
    })
}

/// Iterator over the neighbors of `Bottom` in canonical order.
pub struct BottomNeighbors {
    level: u32,
    k: u32,
    top_pending: bool,          // level 0: the only neighbor is Top itself
    branches: Option<Vec<u32>>, // odometer over 1..=k per position
}

impl Iterator for BottomNeighbors {
    type Item = DiamondAddress;

    fn next(&mut self) -> Option<DiamondAddress> {
        if self.top_pending {
            self.top_pending = false;
            return Some(DiamondAddress::Top);
        }
        let branches = self.branches.as_mut()?;
        let path: Vec<Refinement> = branches[..(self.level - 1) as usize]
            .iter()
            .map(|&b| Refinement::new(b, Half::Lower))
            .collect();
        let addr = DiamondAddress::inner(path, branches[(self.level - 1) as usize]);
        // Advance the odometer, least significant position last.
        let mut i = branches.len();
        loop {
            if i == 0 {
                self.branches = None;
                break;
            }
            i -= 1;
            if branches[i] < self.k {
                branches[i] += 1;
                for b in branches[i + 1..].iter_mut() {
                    *b = 1;
                }
                break;
            }
        }
        Some(addr)
    }
}

/// Explicit adjacency of `D_{m,k}` over canonical addresses.
///
/// Every edge of the final graph is a level-0 subdiamond; enumerating all
/// `(2k)^m` refinement paths of length `m` and connecting each path's
/// endpoints yields the exact edge set.
pub fn materialize_diamond(
    params: &DiamondParams,
    budget: u64,
) -> Result<MaterializedGraph<DiamondAddress, DiamondParams>, DiamondError> {
    let k = params
        .branching
        .finite()
        .ok_or(DiamondError::UnboundedBranching)?;
    let vertices = enumerate_addresses(params, budget)?;
    let mut edges = Vec::with_capacity(params.edge_count().unwrap_or(0) as usize);
    let mut path: Vec<Refinement> = Vec::with_capacity(params.level as usize);
    collect_edges(&mut edges, &mut path, params.level as usize, k);
    Ok(MaterializedGraph::from_edges(vertices, edges, *params))
}

fn collect_edges(
    edges: &mut Vec<(DiamondAddress, DiamondAddress)>,
    path: &mut Vec<Refinement>,
    remaining: usize,
    k: u32,
) {
    if remaining == 0 {
        let s = SubdiamondRef::new(path.clone());
        edges.push((s.bottom(), s.top()));
        return;
    }
    for b in 1..=k {
        for h in [Half::Lower, Half::Upper] {
            path.push(Refinement::new(b, h));
            collect_edges(edges, path, remaining - 1, k);
            path.pop();
        }
    }
}

/// All subdiamonds of a given level, i.e. all refinement paths of length
/// `m - level`, in canonical order.
pub fn subdiamonds_of_level(
    level: u32,
    params: &DiamondParams,
) -> Result<Vec<SubdiamondRef>, DiamondError> {
    let k = params
        .branching
        .finite()
        .ok_or(DiamondError::UnboundedBranching)?;
    if level > params.level {
        return Err(DiamondError::PathTooLong {
            path_len: 0,
            level: params.level,
        });
    }
    let plen = (params.level - level) as usize;
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(plen);
    collect_paths(&mut out, &mut path, plen, k);
    out.sort();
    Ok(out)
}

fn collect_paths(
    out: &mut Vec<SubdiamondRef>,
    path: &mut Vec<Refinement>,
    remaining: usize,
    k: u32,
) {
    if remaining == 0 {
        out.push(SubdiamondRef::new(path.clone()));
        return;
    }
    for b in 1..=k {
        for h in [Half::Lower, Half::Upper] {
            path.push(Refinement::new(b, h));
            collect_paths(out, path, remaining - 1, k);
            path.pop();
        }
    }
}
