//! Separated sets in diamond graphs: exact maxima on small regions and
//! the combinatorial upper bound they are checked against.
//!
//! A set is `s`-separated when all pairwise distances are at least `s`.
//! Finding a maximum one is a maximum-clique problem on the compatibility
//! graph (pairs at distance `>= s`), solved exactly by branch and bound
//! with a greedy coloring bound for regions of up to 64 vertices, or
//! lower-bounded greedily for anything larger.

use num_bigint::BigUint;
use thiserror::Error;

use crate::diamond::{DiamondAddress, DiamondParams, SubdiamondRef};
use crate::graph::MaterializedGraph;
use crate::metric::{diamond_distance, MetricError};

/// Default size budget for the exact mode.
pub const EXACT_REGION_CAP: usize = 60;

/// Compatibility rows are u64 bitsets; no budget can push exact mode
/// past this.
const SOLVER_WIDTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SepSetError {
    #[error("region contains no vertices of the graph")]
    EmptyRegion,
    #[error("exact mode budget is {cap} vertices, region has {size}")]
    ExactBudgetExceeded { size: usize, cap: usize },
    #[error("exact mode budget cannot exceed {SOLVER_WIDTH} vertices, got {0}")]
    CapTooLarge(usize),
    #[error("separation must be at least 1")]
    ZeroSeparation,
    #[error("bound needs q >= p, got q = {q}, p = {p}")]
    BadExponents { q: u32, p: u32 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SepMode {
    Exact,
    Greedy,
}

/// A separated set found in a region, flagged `exact` when it is a proven
/// maximum rather than a greedy lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedSetResult {
    pub separation: u64,
    pub region: SubdiamondRef,
    pub size: usize,
    pub set: Vec<DiamondAddress>,
    pub exact: bool,
}

/// `k·(2k)^(q−p)`: the ceiling on the size of a `2^p`-separated set in a
/// diameter-`2^q` diamond region.
pub fn lemma_bound(q: u32, p: u32, k: u32) -> Result<BigUint, SepSetError> {
    if q < p {
        return Err(SepSetError::BadExponents { q, p });
    }
    Ok(BigUint::from(k) * BigUint::from(2 * k).pow(q - p))
}

/// Maximum (exact mode) or maximal-by-greed separated set among the
/// vertices of `region`, with the default exact-mode budget.
pub fn max_separated_set(
    g: &MaterializedGraph<DiamondAddress, DiamondParams>,
    region: &SubdiamondRef,
    separation: u64,
    mode: SepMode,
) -> Result<SeparatedSetResult, SepSetError> {
    max_separated_set_capped(g, region, separation, mode, EXACT_REGION_CAP)
}

/// Like [`max_separated_set`] with an explicit exact-mode budget.
pub fn max_separated_set_capped(
    g: &MaterializedGraph<DiamondAddress, DiamondParams>,
    region: &SubdiamondRef,
    separation: u64,
    mode: SepMode,
    cap: usize,
) -> Result<SeparatedSetResult, SepSetError> {
    let params = *g.provenance();
    region.validate(&params).map_err(MetricError::Address)?;
    if separation == 0 {
        return Err(SepSetError::ZeroSeparation);
    }
    let members: Vec<&DiamondAddress> = g.labels().iter().filter(|v| region.contains(v)).collect();
    if members.is_empty() {
        return Err(SepSetError::EmptyRegion);
    }
    if separation == 1 {
        // Distinct vertices are always 1-separated.
        return Ok(SeparatedSetResult {
            separation,
            region: region.clone(),
            size: members.len(),
            set: members.into_iter().cloned().collect(),
            exact: true,
        });
    }
    let n = members.len();
    let picked: Vec<usize> = match mode {
        SepMode::Exact => {
            if cap > SOLVER_WIDTH {
                return Err(SepSetError::CapTooLarge(cap));
            }
            if n > cap {
                return Err(SepSetError::ExactBudgetExceeded { size: n, cap });
            }
            let mut compatible = vec![0u64; n];
            for i in 0..n {
                for j in i + 1..n {
                    if diamond_distance(members[i], members[j], &params)? >= separation {
                        compatible[i] |= 1 << j;
                        compatible[j] |= 1 << i;
                    }
                }
            }
            max_clique(&compatible, n)
        }
        SepMode::Greedy => {
            let mut picked: Vec<usize> = Vec::new();
            'next: for i in 0..n {
                for &j in &picked {
                    if diamond_distance(members[i], members[j], &params)? < separation {
                        continue 'next;
                    }
                }
                picked.push(i);
            }
            picked
        }
    };
    let set: Vec<DiamondAddress> = picked.iter().map(|&i| members[i].clone()).collect();
    Ok(SeparatedSetResult {
        separation,
        region: region.clone(),
        size: set.len(),
        set,
        exact: matches!(mode, SepMode::Exact),
    })
}

/// Exact maximum clique over `n <= 64` vertices given adjacency bitsets.
/// Branch and bound with a greedy-coloring upper bound; deterministic.
fn max_clique(adj: &[u64], n: usize) -> Vec<usize> {
    let all = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, &mut current, all, &mut best);
    best
}

fn expand(adj: &[u64], current: &mut Vec<usize>, mut candidates: u64, best: &mut Vec<usize>) {
    if candidates == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    // Color candidates greedily in index order: vertices sharing a color
    // class are pairwise non-adjacent, so a clique inside `candidates`
    // has at most `color` members. Process in reverse color order.
    let mut order: Vec<u32> = Vec::new();
    let mut bound: Vec<usize> = Vec::new();
    let mut uncolored = candidates;
    let mut color = 0usize;
    while uncolored != 0 {
        color += 1;
        let mut class = uncolored;
        while class != 0 {
            let v = class.trailing_zeros();
            class &= !(adj[v as usize] | (1 << v));
            uncolored &= !(1 << v);
            order.push(v);
            bound.push(color);
        }
    }
    for i in (0..order.len()).rev() {
        if current.len() + bound[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v as usize);
        expand(adj, current, candidates & adj[v as usize], best);
        current.pop();
        candidates &= !(1 << v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::{materialize_diamond, subdiamonds_of_level, Half};

    fn graph(m: u32, k: u32) -> MaterializedGraph<DiamondAddress, DiamondParams> {
        materialize_diamond(&DiamondParams::finite(m, k).unwrap(), 10_000).unwrap()
    }

    fn check_valid(g: &MaterializedGraph<DiamondAddress, DiamondParams>, r: &SeparatedSetResult) {
        for (i, u) in r.set.iter().enumerate() {
            assert!(r.region.contains(u));
            for v in &r.set[..i] {
                assert!(
                    diamond_distance(u, v, g.provenance()).unwrap() >= r.separation,
                    "{u} and {v} too close"
                );
            }
        }
        assert_eq!(r.size, r.set.len());
    }

    #[test]
    fn bound_values() {
        assert_eq!(lemma_bound(2, 2, 5).unwrap(), BigUint::from(5u32));
        assert_eq!(lemma_bound(1, 0, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(lemma_bound(2, 1, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(
            lemma_bound(10, 2, 3).unwrap(),
            BigUint::from(3u32) * BigUint::from(6u32).pow(8)
        );
        assert!(lemma_bound(1, 2, 2).is_err());
    }

    #[test]
    fn level_subdiamond_counts_match_the_bound_denominator() {
        // (2k)^(q-p) level-p subdiamonds inside a level-q one.
        let params = DiamondParams::finite(3, 2).unwrap();
        let region = SubdiamondRef::whole().child(1, Half::Lower); // level 2
        for p in 0..=2u32 {
            let inside = subdiamonds_of_level(p, &params)
                .unwrap()
                .into_iter()
                .filter(|s| s.path().starts_with(region.path()))
                .count();
            assert_eq!(inside as u64, 4u64.pow(2 - p));
        }
    }

    #[test]
    fn middles_are_the_separated_set_of_one_round() {
        for k in [2, 3, 4] {
            let g = graph(1, k);
            let r = max_separated_set(&g, &SubdiamondRef::whole(), 2, SepMode::Exact).unwrap();
            check_valid(&g, &r);
            assert!(r.exact);
            assert_eq!(r.size as u32, k, "k = {k}");
        }
    }

    #[test]
    fn separation_one_takes_everything() {
        let g = graph(2, 2);
        let r = max_separated_set(&g, &SubdiamondRef::whole(), 1, SepMode::Greedy).unwrap();
        assert_eq!(r.size, 12);
        assert!(r.exact);
    }

    #[test]
    fn figure_graph_attains_the_bound() {
        let g = graph(2, 2);
        let r = max_separated_set(&g, &SubdiamondRef::whole(), 2, SepMode::Exact).unwrap();
        check_valid(&g, &r);
        assert_eq!(BigUint::from(r.size), lemma_bound(2, 1, 2).unwrap());
        assert_eq!(r.size, 8);
    }

    #[test]
    fn exact_beats_or_ties_greedy_everywhere_small() {
        for (m, k) in [(1, 2), (2, 2), (1, 3), (2, 3)] {
            let g = graph(m, k);
            for sep in [2u64, 4, 8] {
                if sep > 1 << m {
                    continue;
                }
                let exact =
                    max_separated_set(&g, &SubdiamondRef::whole(), sep, SepMode::Exact).unwrap();
                let greedy =
                    max_separated_set(&g, &SubdiamondRef::whole(), sep, SepMode::Greedy).unwrap();
                check_valid(&g, &exact);
                check_valid(&g, &greedy);
                assert!(exact.size >= greedy.size, "D_{{{m},{k}}} sep {sep}");
                assert!(!greedy.exact || sep == 1);
            }
        }
    }

    #[test]
    fn exact_mode_rejects_big_regions() {
        let g = graph(3, 3); // 131 vertices
        let err = max_separated_set(&g, &SubdiamondRef::whole(), 2, SepMode::Exact).unwrap_err();
        assert!(matches!(
            err,
            SepSetError::ExactBudgetExceeded { size: 131, cap: 60 }
        ));
        // Greedy still works and is valid.
        let r = max_separated_set(&g, &SubdiamondRef::whole(), 2, SepMode::Greedy).unwrap();
        check_valid(&g, &r);
        assert!(!r.exact);
    }

    #[test]
    fn exact_budget_is_adjustable_up_to_the_solver_width() {
        let g = graph(3, 2); // 44 vertices
        let whole = SubdiamondRef::whole();
        let err = max_separated_set_capped(&g, &whole, 2, SepMode::Exact, 40).unwrap_err();
        assert!(matches!(
            err,
            SepSetError::ExactBudgetExceeded { size: 44, cap: 40 }
        ));
        let r = max_separated_set_capped(&g, &whole, 2, SepMode::Exact, 64).unwrap();
        assert_eq!(r, max_separated_set(&g, &whole, 2, SepMode::Exact).unwrap());
        let err = max_separated_set_capped(&g, &whole, 2, SepMode::Exact, 65).unwrap_err();
        assert!(matches!(err, SepSetError::CapTooLarge(65)));
        // Greedy ignores the exact budget entirely.
        assert!(max_separated_set_capped(&g, &whole, 2, SepMode::Greedy, 0).is_ok());
    }

    #[test]
    fn subdiamond_regions_use_internal_distances() {
        // A level-1 subdiamond of D_{2,2} is a quadrilateral: its k = 2
        // middles are 2-separated, and with either endpoint they are not.
        let g = graph(2, 2);
        let region = SubdiamondRef::whole().child(1, Half::Lower);
        let r = max_separated_set(&g, &region, 2, SepMode::Exact).unwrap();
        check_valid(&g, &r);
        assert_eq!(r.size, 2);
    }

    #[test]
    fn clique_solver_cross_checked_by_enumeration() {
        // Random-ish small compatibility patterns, checked against brute
        // force over all subsets.
        let cases: Vec<Vec<u64>> = vec![
            vec![0b0110, 0b1001, 0b0001, 0b0010],
            vec![0; 5],
            vec![0b11110, 0b11101, 0b11011, 0b10111, 0b01111],
            vec![0b010, 0b101, 0b010],
        ];
        for adj in cases {
            let n = adj.len();
            let got = max_clique(&adj, n).len();
            let mut want = 0;
            for mask in 0u64..(1 << n) {
                let ok = (0..n).all(|i| mask & (1 << i) == 0 || (mask & !adj[i] & !(1 << i)) == 0);
                if ok {
                    want = want.max(mask.count_ones() as usize);
                }
            }
            assert_eq!(got, want, "{adj:?}");
        }
    }
}
