//! Minimum-distortion search over injective maps into a fixed diamond.
//!
//! Distortion is scale-free: the spread `expansion × contraction` of the
//! distance ratios over assigned pairs. The exact search is depth-first
//! branch and bound in canonical order — source points in index order,
//! candidate targets in ascending address order — pruning a partial map
//! as soon as its pair-ratio spread cannot beat the incumbent.
//!
//! Determinism: the top level of the search tree (the first point's
//! target) is split into independent branches, each with its own incumbent
//! and a fixed share of the node budget; branch results are merged by
//! `(value, branch index)`. The merged result equals the sequential
//! first-found optimum and does not depend on worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diamond::{bottom_neighbors, materialize_diamond, DiamondAddress, DiamondParams};
use crate::embedding::{
    evaluate_distortion, DistortionReport, EmbeddingError, EmbeddingMap, SourceMetric,
};
use crate::exec::{map_collect, Parallelism};
use crate::graph::MaterializedGraph;
use crate::metric::diamond_distance;

/// Distances above this cannot appear in search instances: ratio spreads
/// are compared by u128 cross-multiplication of four-factor products.
pub const MAX_SEARCH_DISTANCE: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("source metric has fewer than 2 points")]
    TrivialSource,
    #[error(
        "{source_points} source points cannot map injectively into {target_vertices} vertices"
    )]
    TargetTooSmall {
        source_points: usize,
        target_vertices: u64,
    },
    #[error("target has {needed} vertices, search cap is {cap}")]
    TargetTooLarge { needed: u64, cap: u64 },
    #[error("a distance exceeds the search maximum {MAX_SEARCH_DISTANCE}")]
    DistanceOverflow,
    #[error("node budget exhausted before any complete map was found")]
    BudgetExceededWithoutIncumbent,
    #[error("search completed: no injective map has distortion within the prune bound")]
    NoMapWithinBound,
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// Tuning knobs shared by both search modes.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Exact mode: max assignments tried, split evenly over top-level
    /// branches (earlier branches get the remainder).
    pub node_budget: u64,
    /// Local mode: independent hill-climbing starts.
    pub restarts: u32,
    /// Local mode: base seed; restart `r` uses stream `r` of the generator.
    pub seed: u64,
    /// Exact mode: known distortion upper bound `num/den`, inclusive —
    /// maps attaining it are still reported; everything above is pruned.
    pub prune_bound: Option<(u64, u64)>,
    /// Targets with more vertices than this are rejected, independently of
    /// the materialization budget.
    pub max_target_vertices: u64,
    pub parallelism: Parallelism,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 10_000_000,
            restarts: 8,
            seed: 0,
            prune_bound: None,
            max_target_vertices: 2048,
            parallelism: Parallelism::Sequential,
        }
    }
}

/// Result of a search run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub map: EmbeddingMap,
    pub report: DistortionReport,
    /// Exact mode: the whole tree was explored (possibly pruned), so the
    /// value is the true minimum. Local mode: always false.
    pub exhausted: bool,
    /// Assignments tried (exact) or candidate moves evaluated (local);
    /// deterministic for a given config.
    pub nodes_visited: u64,
}

/// Shared precomputation: flat distance matrices, both entries `> 0` off
/// the diagonal and `<= MAX_SEARCH_DISTANCE`.
struct Instance {
    n: usize,
    t: usize,
    smat: Vec<u64>,
    tmat: Vec<u64>,
    addresses: Vec<DiamondAddress>,
}

fn build_instance(
    source: &SourceMetric,
    target: &DiamondParams,
    cfg: &SearchConfig,
) -> Result<Instance, SearchError> {
    if cfg.node_budget == 0 {
        return Err(SearchError::BadConfig(
            "node_budget must be positive".into(),
        ));
    }
    if let Some((num, den)) = cfg.prune_bound {
        if num == 0 || den == 0 || num > MAX_SEARCH_DISTANCE || den > MAX_SEARCH_DISTANCE {
            return Err(SearchError::BadConfig(format!(
                "bad prune bound {num}/{den}"
            )));
        }
    }
    let n = source.point_count();
    if n < 2 {
        return Err(SearchError::TrivialSource);
    }
    let needed = target.vertex_count().unwrap_or(u64::MAX);
    if needed > cfg.max_target_vertices {
        return Err(SearchError::TargetTooLarge {
            needed,
            cap: cfg.max_target_vertices,
        });
    }
    if (n as u64) > needed {
        return Err(SearchError::TargetTooSmall {
            source_points: n,
            target_vertices: needed,
        });
    }
    let graph: MaterializedGraph<DiamondAddress, DiamondParams> =
        materialize_diamond(target, cfg.max_target_vertices).map_err(EmbeddingError::Target)?;
    let t = graph.vertex_count();
    let smat = source.distance_matrix();
    if smat.iter().any(|&d| d > MAX_SEARCH_DISTANCE) {
        return Err(SearchError::DistanceOverflow);
    }
    // All-pairs target distances from the O(level) oracle, row-parallel.
    let rows = map_collect(cfg.parallelism, (0..t).collect(), |i| {
        let u = graph.label(i as u32);
        (0..t)
            .map(|j| diamond_distance(u, graph.label(j as u32), target).expect("valid addresses"))
            .collect::<Vec<u64>>()
    });
    let tmat = rows.into_iter().flatten().collect();
    Ok(Instance {
        n,
        t,
        smat,
        tmat,
        addresses: graph.labels().to_vec(),
    })
}

/// Ratio spread of a pair set, as exact u64 fractions of products of two
/// distances each.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Spread {
    num: u64,
    den: u64,
}

impl Spread {
    fn less_than(self, other: Spread) -> bool {
        (self.num as u128) * (other.den as u128) < (other.num as u128) * (self.den as u128)
    }
}

/// Running maxima over assigned pairs: the witness fractions for
/// expansion (`dt/ds`) and contraction (`ds/dt`).
#[derive(Clone, Copy)]
struct Running {
    exp_num: u64,
    exp_den: u64,
    con_num: u64,
    con_den: u64,
    any: bool,
}

impl Running {
    const EMPTY: Running = Running {
        exp_num: 1,
        exp_den: 1,
        con_num: 1,
        con_den: 1,
        any: false,
    };

    #[inline]
    fn add_pair(&mut self, ds: u64, dt: u64) {
        if !self.any {
            self.exp_num = dt;
            self.exp_den = ds;
            self.con_num = ds;
            self.con_den = dt;
            self.any = true;
            return;
        }
        if (dt as u128) * (self.exp_den as u128) > (self.exp_num as u128) * (ds as u128) {
            self.exp_num = dt;
            self.exp_den = ds;
        }
        if (ds as u128) * (self.con_den as u128) > (self.con_num as u128) * (dt as u128) {
            self.con_num = ds;
            self.con_den = dt;
        }
    }

    #[inline]
    fn spread(&self) -> Spread {
        Spread {
            num: self.exp_num * self.con_num,
            den: self.exp_den * self.con_den,
        }
    }
}

#[derive(Clone)]
enum Incumbent {
    /// No map yet; partial spreads strictly above the bound are pruned.
    Bound(Spread),
    /// Best map so far; partial spreads at or above its value are pruned.
    Map(Spread, Vec<u32>),
}

impl Incumbent {
    fn prunes(&self, s: Spread) -> bool {
        match self {
            Incumbent::Bound(b) => b.less_than(s),
            Incumbent::Map(v, _) => !s.less_than(*v),
        }
    }
}

struct BranchSearch<'a> {
    inst: &'a Instance,
    budget: u64,
    nodes: u64,
    out_of_budget: bool,
    incumbent: Incumbent,
    used: Vec<bool>,
    assignment: Vec<u32>,
}

impl BranchSearch<'_> {
    fn dfs(&mut self, depth: usize, running: Running) {
        let inst = self.inst;
        if depth == inst.n {
            let value = running.spread();
            let better = match &self.incumbent {
                Incumbent::Bound(_) => true, // un-pruned means within bound
                Incumbent::Map(v, _) => value.less_than(*v),
            };
            if better {
                self.incumbent = Incumbent::Map(value, self.assignment.clone());
            }
            return;
        }
        for c in 0..inst.t as u32 {
            if self.used[c as usize] {
                continue;
            }
            if self.out_of_budget {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.out_of_budget = true;
                return;
            }
            let mut next = running;
            for i in 0..depth {
                let ds = inst.smat[i * inst.n + depth];
                let dt = inst.tmat[self.assignment[i] as usize * inst.t + c as usize];
                next.add_pair(ds, dt);
            }
            if self.incumbent.prunes(next.spread()) {
                continue;
            }
            self.used[c as usize] = true;
            self.assignment[depth] = c;
            self.dfs(depth + 1, next);
            self.used[c as usize] = false;
        }
    }
}

struct BranchResult {
    incumbent: Incumbent,
    nodes: u64,
    completed: bool,
}

/// Exact minimum-distortion search by deterministic branch and bound.
pub fn exhaustive_search(
    source: &SourceMetric,
    target: &DiamondParams,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let inst = build_instance(source, target, cfg)?;
    let start = match cfg.prune_bound {
        Some((num, den)) => Incumbent::Bound(Spread { num, den }),
        None => Incumbent::Bound(Spread {
            num: MAX_SEARCH_DISTANCE,
            den: 1,
        }),
    };
    // One branch per first-point target; fixed budget shares keep the
    // outcome independent of scheduling.
    let branches: Vec<u32> = (0..inst.t as u32).collect();
    let share = cfg.node_budget / branches.len() as u64;
    let extra = cfg.node_budget % branches.len() as u64;
    let results = map_collect(cfg.parallelism, branches, |first| {
        let budget = share + u64::from((first as u64) < extra);
        let mut search = BranchSearch {
            inst: &inst,
            budget,
            nodes: 0,
            out_of_budget: budget == 0,
            incumbent: start.clone(),
            used: vec![false; inst.t],
            assignment: vec![0; inst.n],
        };
        if budget > 0 {
            search.nodes = 1; // the root assignment itself
            search.used[first as usize] = true;
            search.assignment[0] = first;
            search.dfs(1, Running::EMPTY);
        }
        BranchResult {
            incumbent: search.incumbent,
            nodes: search.nodes,
            completed: !search.out_of_budget,
        }
    });
    let mut nodes_visited = 0;
    let mut exhausted = true;
    let mut best: Option<(Spread, &Vec<u32>)> = None;
    for r in &results {
        nodes_visited += r.nodes;
        exhausted &= r.completed;
        if let Incumbent::Map(value, assignment) = &r.incumbent {
            // Earlier branches win ties: only strict improvement replaces.
            let replace = match best {
                None => true,
                Some((bv, _)) => value.less_than(bv),
            };
            if replace {
                best = Some((*value, assignment));
            }
        }
    }
    let Some((_, assignment)) = best else {
        return Err(if exhausted {
            SearchError::NoMapWithinBound
        } else {
            SearchError::BudgetExceededWithoutIncumbent
        });
    };
    finish(
        source,
        target,
        cfg,
        &inst,
        assignment,
        exhausted,
        nodes_visited,
    )
}

fn finish(
    source: &SourceMetric,
    target: &DiamondParams,
    cfg: &SearchConfig,
    inst: &Instance,
    assignment: &[u32],
    exhausted: bool,
    nodes_visited: u64,
) -> Result<SearchOutcome, SearchError> {
    let images: Vec<DiamondAddress> = assignment
        .iter()
        .map(|&c| inst.addresses[c as usize].clone())
        .collect();
    let map = EmbeddingMap::new(source.clone(), *target, images)?;
    let report = evaluate_distortion(&map, cfg.parallelism)?;
    Ok(SearchOutcome {
        map,
        report,
        exhausted,
        nodes_visited,
    })
}

/// Full-map spread for local search move evaluation.
fn assignment_spread(inst: &Instance, assignment: &[u32]) -> Spread {
    let mut running = Running::EMPTY;
    for i in 0..inst.n {
        for j in i + 1..inst.n {
            let ds = inst.smat[i * inst.n + j];
            let dt = inst.tmat[assignment[i] as usize * inst.t + assignment[j] as usize];
            running.add_pair(ds, dt);
        }
    }
    running.spread()
}

/// Multi-restart first-improvement hill climbing over single reassignments
/// and pair swaps. Restart 0 starts from the star-like placement whenever
/// the target's bottom has enough neighbors; other restarts start from a
/// seeded random injection. Deterministic for a given config.
pub fn local_search(
    source: &SourceMetric,
    target: &DiamondParams,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    if cfg.restarts == 0 {
        return Err(SearchError::BadConfig("restarts must be positive".into()));
    }
    let inst = build_instance(source, target, cfg)?;
    let star_start: Option<Vec<u32>> = star_like_assignment(&inst, target);
    let restarts: Vec<u32> = (0..cfg.restarts).collect();
    let results = map_collect(cfg.parallelism, restarts, |r| {
        let assignment = match (&star_start, r) {
            (Some(star), 0) => star.clone(),
            _ => random_injection(&inst, cfg.seed, r),
        };
        climb(&inst, assignment)
    });
    let mut nodes_visited = 0;
    let mut best: Option<(Spread, &Vec<u32>)> = None;
    for (value, assignment, moves) in &results {
        nodes_visited += moves;
        let replace = match best {
            None => true,
            Some((bv, _)) => value.less_than(bv),
        };
        if replace {
            best = Some((*value, assignment));
        }
    }
    let (_, assignment) = best.expect("restarts >= 1");
    finish(source, target, cfg, &inst, assignment, false, nodes_visited)
}

/// Root to Bottom, the rest to the first bottom neighbors, when they fit.
fn star_like_assignment(inst: &Instance, target: &DiamondParams) -> Option<Vec<u32>> {
    let id_of = |a: &DiamondAddress| -> u32 {
        inst.addresses.binary_search(a).expect("canonical order") as u32
    };
    let mut out = vec![id_of(&DiamondAddress::Bottom)];
    let neighbors = bottom_neighbors(target, None).ok()?;
    out.extend(neighbors.take(inst.n - 1).map(|a| id_of(&a)));
    (out.len() == inst.n).then_some(out)
}

/// Deterministic injective start: a partial Fisher-Yates shuffle of the
/// target ids driven by stream `restart` of the seeded generator.
fn random_injection(inst: &Instance, seed: u64, restart: u32) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let mut pool: Vec<u32> = (0..inst.t as u32).collect();
    for i in 0..inst.n {
        let j = rng.gen_range(i..inst.t);
        pool.swap(i, j);
    }
    pool.truncate(inst.n);
    pool
}

/// First-improvement sweeps until a full pass finds nothing better.
/// Returns the local optimum, its spread, and the move evaluations spent.
fn climb(inst: &Instance, mut assignment: Vec<u32>) -> (Spread, Vec<u32>, u64) {
    let mut used = vec![false; inst.t];
    for &c in &assignment {
        used[c as usize] = true;
    }
    let mut value = assignment_spread(inst, &assignment);
    let mut moves = 0u64;
    loop {
        let mut improved = false;
        for v in 0..inst.n {
            for c in 0..inst.t as u32 {
                if used[c as usize] {
                    continue;
                }
                let old = assignment[v];
                assignment[v] = c;
                moves += 1;
                let candidate = assignment_spread(inst, &assignment);
                if candidate.less_than(value) {
                    used[old as usize] = false;
                    used[c as usize] = true;
                    value = candidate;
                    improved = true;
                } else {
                    assignment[v] = old;
                }
            }
        }
        for u in 0..inst.n {
            for v in u + 1..inst.n {
                assignment.swap(u, v);
                moves += 1;
                let candidate = assignment_spread(inst, &assignment);
                if candidate.less_than(value) {
                    value = candidate;
                    improved = true;
                } else {
                    assignment.swap(u, v);
                }
            }
        }
        if !improved {
            return (value, assignment, moves);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::enumerate_addresses;
    use crate::embedding::DistanceTable;
    use crate::tree::TreeSpec;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    /// Independent oracle: min distortion spread over ALL injective maps,
    /// by plain enumeration without pruning.
    fn enumerated_minimum(source: &SourceMetric, target: &DiamondParams) -> BigRational {
        let n = source.point_count();
        let addrs = enumerate_addresses(target, 10_000).unwrap();
        let t = addrs.len();
        let smat = source.distance_matrix();
        let mut tmat = vec![0u64; t * t];
        for i in 0..t {
            for j in 0..t {
                tmat[i * t + j] = diamond_distance(&addrs[i], &addrs[j], target).unwrap();
            }
        }
        let mut best: Option<BigRational> = None;
        let mut assignment = vec![0u32; n];
        let mut used = vec![false; t];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            depth: usize,
            n: usize,
            t: usize,
            smat: &[u64],
            tmat: &[u64],
            assignment: &mut Vec<u32>,
            used: &mut Vec<bool>,
            best: &mut Option<BigRational>,
        ) {
            if depth == n {
                let mut running = Running::EMPTY;
                for i in 0..n {
                    for j in i + 1..n {
                        running.add_pair(
                            smat[i * n + j],
                            tmat[assignment[i] as usize * t + assignment[j] as usize],
                        );
                    }
                }
                let s = running.spread();
                let v = BigRational::new(BigInt::from(s.num), BigInt::from(s.den));
                if best.as_ref().is_none_or(|b| v < *b) {
                    *best = Some(v);
                }
                return;
            }
            for c in 0..t as u32 {
                if used[c as usize] {
                    continue;
                }
                used[c as usize] = true;
                assignment[depth] = c;
                rec(depth + 1, n, t, smat, tmat, assignment, used, best);
                used[c as usize] = false;
            }
        }
        rec(0, n, t, &smat, &tmat, &mut assignment, &mut used, &mut best);
        best.unwrap()
    }

    #[test]
    fn smallest_tree_matches_full_enumeration() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        let target = DiamondParams::finite(1, 2).unwrap();
        let oracle = enumerated_minimum(&source, &target);
        assert_eq!(oracle, rat(1, 1));
        let out = exhaustive_search(&source, &target, &cfg()).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.report.distortion, oracle);
    }

    #[test]
    fn isometric_star_persists_across_levels() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        for m in 1..=3 {
            let target = DiamondParams::finite(m, 2).unwrap();
            let out = exhaustive_search(&source, &target, &cfg()).unwrap();
            assert!(out.exhausted, "m = {m}");
            assert_eq!(out.report.distortion, rat(1, 1), "m = {m}");
        }
    }

    #[test]
    fn depth_two_tree_matches_enumeration_in_smallest_target() {
        // 7 points into 12 vertices: the unpruned enumeration is the
        // independent ground truth for the exact search.
        let source = SourceMetric::tree(TreeSpec::new(2));
        let target = DiamondParams::finite(2, 2).unwrap();
        let oracle = enumerated_minimum(&source, &target);
        let out = exhaustive_search(&source, &target, &cfg()).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.report.distortion, oracle);
    }

    #[test]
    fn strategies_and_worker_counts_agree() {
        let source = SourceMetric::tree(TreeSpec::new(2));
        let target = DiamondParams::finite(2, 2).unwrap();
        let seq = exhaustive_search(&source, &target, &cfg()).unwrap();
        let mut par_cfg = cfg();
        par_cfg.parallelism = Parallelism::max_available();
        let par = exhaustive_search(&source, &target, &par_cfg).unwrap();
        assert_eq!(seq.report, par.report);
        assert_eq!(seq.map.images(), par.map.images());
        assert_eq!(seq.nodes_visited, par.nodes_visited);
        assert_eq!(seq.exhausted, par.exhausted);
    }

    #[test]
    fn budget_too_small_fails_without_incumbent() {
        let source = SourceMetric::tree(TreeSpec::new(2));
        let target = DiamondParams::finite(2, 2).unwrap();
        let mut c = cfg();
        c.node_budget = 5;
        assert!(matches!(
            exhaustive_search(&source, &target, &c),
            Err(SearchError::BudgetExceededWithoutIncumbent)
        ));
    }

    #[test]
    fn unattainable_prune_bound_is_proven_infeasible() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        let target = DiamondParams::finite(1, 2).unwrap();
        let mut c = cfg();
        c.prune_bound = Some((1, 2));
        assert!(matches!(
            exhaustive_search(&source, &target, &c),
            Err(SearchError::NoMapWithinBound)
        ));
    }

    #[test]
    fn prune_bound_is_inclusive() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        let target = DiamondParams::finite(1, 2).unwrap();
        let mut c = cfg();
        c.prune_bound = Some((1, 1));
        let out = exhaustive_search(&source, &target, &c).unwrap();
        assert_eq!(out.report.distortion, rat(1, 1));
        assert!(out.exhausted);
    }

    #[test]
    fn size_guards() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        assert!(matches!(
            exhaustive_search(&source, &DiamondParams::finite(0, 2).unwrap(), &cfg()),
            Err(SearchError::TargetTooSmall {
                source_points: 3,
                target_vertices: 2
            })
        ));
        assert!(matches!(
            exhaustive_search(&source, &DiamondParams::finite(9, 2).unwrap(), &cfg()),
            Err(SearchError::TargetTooLarge {
                needed: 174_764,
                cap: 2048
            })
        ));
        let single = DistanceTable::new(vec!["x".into()], vec![vec![0]]).unwrap();
        assert!(matches!(
            exhaustive_search(
                &SourceMetric::table(single),
                &DiamondParams::finite(1, 2).unwrap(),
                &cfg()
            ),
            Err(SearchError::TrivialSource)
        ));
    }

    #[test]
    fn scaling_the_source_changes_nothing() {
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let rows = vec![
            vec![0, 1, 2, 2],
            vec![1, 0, 1, 2],
            vec![2, 1, 0, 1],
            vec![2, 2, 1, 0],
        ];
        let base = DistanceTable::new(labels, rows).unwrap();
        let target = DiamondParams::finite(2, 2).unwrap();
        let plain = exhaustive_search(&SourceMetric::table(base.clone()), &target, &cfg()).unwrap();
        let scaled =
            exhaustive_search(&SourceMetric::table(base.scaled(7)), &target, &cfg()).unwrap();
        assert_eq!(plain.report.distortion, scaled.report.distortion);
        assert_eq!(plain.map.images(), scaled.map.images());
        assert!(plain.exhausted && scaled.exhausted);
    }

    #[test]
    fn local_search_finds_the_isometry() {
        let source = SourceMetric::tree(TreeSpec::new(1));
        let target = DiamondParams::finite(1, 2).unwrap();
        for seed in [0, 1, 42] {
            let mut c = cfg();
            c.seed = seed;
            c.restarts = 3;
            let out = local_search(&source, &target, &c).unwrap();
            assert_eq!(out.report.distortion, rat(1, 1), "seed {seed}");
            assert!(!out.exhausted);
        }
    }

    #[test]
    fn local_search_never_loses_to_the_star_seed() {
        // Star fits T_2 into D_{3,2}; restart 0 starts there, so the final
        // value cannot exceed the star's distortion 4.
        let source = SourceMetric::tree(TreeSpec::new(2));
        let target = DiamondParams::finite(3, 2).unwrap();
        let mut c = cfg();
        c.restarts = 2;
        let out = local_search(&source, &target, &c).unwrap();
        assert!(out.report.distortion <= rat(4, 1));
    }

    #[test]
    fn local_search_is_deterministic_across_strategies() {
        let source = SourceMetric::tree(TreeSpec::new(2));
        let target = DiamondParams::finite(2, 2).unwrap();
        let mut a_cfg = cfg();
        a_cfg.restarts = 4;
        a_cfg.seed = 9;
        let mut b_cfg = a_cfg.clone();
        b_cfg.parallelism = Parallelism::max_available();
        let a = local_search(&source, &target, &a_cfg).unwrap();
        let b = local_search(&source, &target, &b_cfg).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(a.map.images(), b.map.images());
        assert_eq!(a.nodes_visited, b.nodes_visited);
    }
}
