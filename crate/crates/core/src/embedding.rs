//! Embeddings of finite metric spaces into diamond graphs and their
//! exact bilipschitz distortion.
//!
//! An embedding with expansion `E = max d_target/d_source` and contraction
//! `K = max d_source/d_target` has distortion `E·K`: the least `C` such
//! that some scaling factor `r` satisfies
//! `r·d(u,v) <= d(f(u),f(v)) <= r·C·d(u,v)` for all pairs, attained at
//! `r = 1/K`. All ratios are exact rationals; no floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::diamond::{bottom_neighbors, DiamondAddress, DiamondError, DiamondParams};
use crate::exec::{map_collect, Parallelism};
use crate::metric::{diamond_distance, MetricError};
use crate::tree::{enumerate_tree, tree_distance, TreeSpec, TreeVertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("source metric has fewer than 2 points")]
    TrivialSource,
    #[error("map is not injective: {u} and {v} share image {image}")]
    NonInjective { u: String, v: String, image: String },
    #[error("assignment covers {got} points, source has {want}")]
    WrongArity { got: usize, want: usize },
    #[error("invalid distance table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Target(#[from] DiamondError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A finite metric space given by an explicit symmetric table of positive
/// integer distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    labels: Vec<String>,
    dist: Vec<u64>, // row-major n × n
}

impl DistanceTable {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<u64>>) -> Result<Self, EmbeddingError> {
        let n = labels.len();
        let bad = |m: String| EmbeddingError::BadTable(m);
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(bad(format!("want a {n}x{n} matrix")));
        }
        {
            let mut seen = labels.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != n {
                return Err(bad("duplicate point labels".into()));
            }
        }
        for i in 0..n {
            if rows[i][i] != 0 {
                return Err(bad(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(bad(format!("asymmetric at ({i},{j})")));
                }
                if i != j && rows[i][j] == 0 {
                    return Err(bad(format!(
                        "zero distance between distinct points {i},{j}"
                    )));
                }
                for l in 0..n {
                    if rows[i][j].saturating_add(rows[j][l]) < rows[i][l] {
                        return Err(bad(format!("triangle inequality fails at ({i},{j},{l})")));
                    }
                }
            }
        }
        let dist = rows.into_iter().flatten().collect();
        Ok(DistanceTable { labels, dist })
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.labels.len() + j]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// The same metric with every distance multiplied by `c > 0`.
    pub fn scaled(&self, c: u64) -> DistanceTable {
        assert!(c > 0);
        DistanceTable {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|&d| d * c).collect(),
        }
    }
}

/// The source of an embedding: a full binary tree of given depth with its
/// shortest-path metric, or an explicit distance table.
#[derive(Clone, Debug)]
pub enum SourceMetric {
    Tree {
        spec: TreeSpec,
        points: Vec<TreeVertex>,
    },
    Table(DistanceTable),
}

impl SourceMetric {
    pub fn tree(spec: TreeSpec) -> Self {
        let points = enumerate_tree(spec);
        SourceMetric::Tree { spec, points }
    }

    pub fn table(table: DistanceTable) -> Self {
        SourceMetric::Table(table)
    }

    pub fn point_count(&self) -> usize {
        match self {
            SourceMetric::Tree { points, .. } => points.len(),
            SourceMetric::Table(t) => t.point_count(),
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> u64 {
        match self {
            SourceMetric::Tree { points, .. } => tree_distance(&points[i], &points[j]),
            SourceMetric::Table(t) => t.distance(i, j),
        }
    }

    pub fn point_name(&self, i: usize) -> String {
        match self {
            SourceMetric::Tree { points, .. } => points[i].to_string(),
            SourceMetric::Table(t) => t.label(i).to_string(),
        }
    }

    pub fn tree_points(&self) -> Option<&[TreeVertex]> {
        match self {
            SourceMetric::Tree { points, .. } => Some(points),
            SourceMetric::Table(_) => None,
        }
    }

    /// Full distance matrix, row-major.
    pub fn distance_matrix(&self) -> Vec<u64> {
        let n = self.point_count();
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.distance(i, j);
            }
        }
        out
    }
}

/// An injective-by-intent assignment of source points to addresses of a
/// fixed diamond graph. Points are indexed in the source's canonical
/// order (length-lex for trees, table order otherwise).
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    source: SourceMetric,
    target: DiamondParams,
    images: Vec<DiamondAddress>,
}

impl EmbeddingMap {
    pub fn new(
        source: SourceMetric,
        target: DiamondParams,
        images: Vec<DiamondAddress>,
    ) -> Result<Self, EmbeddingError> {
        if images.len() != source.point_count() {
            return Err(EmbeddingError::WrongArity {
                got: images.len(),
                want: source.point_count(),
            });
        }
        for a in &images {
            a.validate(&target)?;
        }
        Ok(EmbeddingMap {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &SourceMetric {
        &self.source
    }

    pub fn target(&self) -> &DiamondParams {
        &self.target
    }

    pub fn images(&self) -> &[DiamondAddress] {
        &self.images
    }

    /// `(point name, image)` pairs in canonical point order.
    pub fn named_pairs(&self) -> Vec<(String, DiamondAddress)> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, a)| (self.source.point_name(i), a.clone()))
            .collect()
    }

    /// `(tree vertex, image)` pairs when the source is a tree.
    pub fn tree_pairs(&self) -> Option<Vec<(TreeVertex, DiamondAddress)>> {
        let points = self.source.tree_points()?;
        Some(
            points
                .iter()
                .cloned()
                .zip(self.images.iter().cloned())
                .collect(),
        )
    }
}

/// A pair of source points witnessing an extreme distance ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    pub u: String,
    pub v: String,
    pub source_distance: u64,
    pub target_distance: u64,
}

/// Exact distortion data of an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionReport {
    pub expansion: BigRational,
    pub contraction: BigRational,
    pub distortion: BigRational,
    /// Largest `r` with `r·d_source <= d_target` everywhere: `1/contraction`.
    pub scaling_factor: BigRational,
    pub witness_expansion: WitnessPair,
    pub witness_contraction: WitnessPair,
}

impl DistortionReport {
    pub fn kv_pairs(&self) -> Vec<(String, String)> {
        let rat = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
        let mut out = vec![
            ("expansion".to_string(), rat(&self.expansion)),
            ("contraction".to_string(), rat(&self.contraction)),
            ("distortion".to_string(), rat(&self.distortion)),
            ("scaling_factor".to_string(), rat(&self.scaling_factor)),
        ];
        for (tag, w) in [
            ("witness_expansion", &self.witness_expansion),
            ("witness_contraction", &self.witness_contraction),
        ] {
            out.push((format!("{tag}_pair"), format!("{} {}", w.u, w.v)));
            out.push((
                format!("{tag}_source_distance"),
                w.source_distance.to_string(),
            ));
            out.push((
                format!("{tag}_target_distance"),
                w.target_distance.to_string(),
            ));
        }
        out
    }
}

impl fmt::Display for DistortionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.kv_pairs() {
            writeln!(f, "{k} {v}")?;
        }
        Ok(())
    }
}

/// `a/b` vs `c/d` by cross-multiplication; all inputs fit in u64 so the
/// products fit in u128.
fn cmp_ratio(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

struct ExtremeTracker {
    /// (numerator, denominator, i, j); None until the first pair.
    best: Option<(u64, u64, usize, usize)>,
}

impl ExtremeTracker {
    fn new() -> Self {
        ExtremeTracker { best: None }
    }

    /// Keeps the strictly larger ratio; on ties the earlier pair in
    /// lexicographic `(i, j)` order wins.
    fn offer(&mut self, num: u64, den: u64, i: usize, j: usize) {
        let better = match self.best {
            None => true,
            Some((bn, bd, bi, bj)) => match cmp_ratio(num, den, bn, bd) {
                Ordering::Greater => true,
                Ordering::Equal => (i, j) < (bi, bj),
                Ordering::Less => false,
            },
        };
        if better {
            self.best = Some((num, den, i, j));
        }
    }

    fn merge(&mut self, other: ExtremeTracker) {
        if let Some((n, d, i, j)) = other.best {
            self.offer(n, d, i, j);
        }
    }
}

/// Evaluates the exact distortion of `f` over all unordered point pairs.
///
/// The parallel strategy splits by first index and merges trackers in
/// index order, so witnesses and ratios are identical across strategies.
pub fn evaluate_distortion(
    f: &EmbeddingMap,
    par: Parallelism,
) -> Result<DistortionReport, EmbeddingError> {
    let n = f.source.point_count();
    if n < 2 {
        return Err(EmbeddingError::TrivialSource);
    }
    {
        let mut seen: Vec<(&DiamondAddress, usize)> = f.images.iter().zip(0..).collect();
        seen.sort();
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                let (i, j) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                return Err(EmbeddingError::NonInjective {
                    u: f.source.point_name(i),
                    v: f.source.point_name(j),
                    image: w[0].0.to_string(),
                });
            }
        }
    }
    let rows = map_collect(par, (0..n - 1).collect(), |i| {
        let mut expansion = ExtremeTracker::new();
        let mut contraction = ExtremeTracker::new();
        for j in i + 1..n {
            let ds = f.source.distance(i, j);
            let dt = diamond_distance(&f.images[i], &f.images[j], &f.target)
                .expect("validated addresses");
            debug_assert!(ds > 0 && dt > 0);
            expansion.offer(dt, ds, i, j);
            contraction.offer(ds, dt, i, j);
        }
        (expansion, contraction)
    });
    let mut expansion = ExtremeTracker::new();
    let mut contraction = ExtremeTracker::new();
    for (e, c) in rows {
        expansion.merge(e);
        contraction.merge(c);
    }
    let witness = |t: &ExtremeTracker, flip: bool| {
        let (num, den, i, j) = t.best.expect("n >= 2 gives at least one pair");
        let (ds, dt) = if flip { (num, den) } else { (den, num) };
        WitnessPair {
            u: f.source.point_name(i),
            v: f.source.point_name(j),
            source_distance: ds,
            target_distance: dt,
        }
    };
    let ratio = |t: &ExtremeTracker| {
        let (num, den, _, _) = t.best.unwrap();
        BigRational::new(BigInt::from(num), BigInt::from(den))
    };
    let expansion_ratio = ratio(&expansion);
    let contraction_ratio = ratio(&contraction);
    Ok(DistortionReport {
        distortion: &expansion_ratio * &contraction_ratio,
        scaling_factor: contraction_ratio.recip(),
        witness_expansion: witness(&expansion, false),
        witness_contraction: witness(&contraction, true),
        expansion: expansion_ratio,
        contraction: contraction_ratio,
    })
}

/// Re-checks a report against its map: both scaling inequalities
/// `r·d_source <= d_target <= r·C·d_target` on every pair, and equality at
/// the witness pairs. Returns the first violation found.
pub fn verify_report(f: &EmbeddingMap, rep: &DistortionReport) -> Result<(), String> {
    let n = f.source().point_count();
    let r = &rep.scaling_factor;
    let rc = &rep.scaling_factor * &rep.distortion;
    let as_rat = |x: u64| BigRational::from_integer(BigInt::from(x));
    for i in 0..n {
        for j in i + 1..n {
            let ds = as_rat(f.source().distance(i, j));
            let dt = as_rat(
                diamond_distance(&f.images()[i], &f.images()[j], f.target())
                    .map_err(|e| e.to_string())?,
            );
            if r * &ds > dt {
                return Err(format!("left inequality fails at pair ({i},{j})"));
            }
            if dt > &rc * &ds {
                return Err(format!("right inequality fails at pair ({i},{j})"));
            }
        }
    }
    let we = &rep.witness_expansion;
    if as_rat(we.target_distance) != &rc * as_rat(we.source_distance) {
        return Err("expansion witness not tight".to_string());
    }
    let wc = &rep.witness_contraction;
    if as_rat(wc.target_distance) != r * as_rat(wc.source_distance) {
        return Err("contraction witness not tight".to_string());
    }
    Ok(())
}

/// The star construction: the smallest binary diamond whose bottom has
/// enough neighbors for all non-root vertices of the depth-`n` tree.
///
/// Picks the least level `k` with `2^k + 1 >= 2^(n+1) - 1`, sends the root
/// to `Bottom` and the remaining vertices, in length-lex order, to the
/// first bottom neighbors in canonical order.
pub fn star_embedding(n: u32) -> Result<(u32, EmbeddingMap), EmbeddingError> {
    assert!(n >= 1, "tree depth must be at least 1");
    let tree_vertices = (1u128 << (n + 1)) - 1;
    let mut k = 1u32;
    while (1u128 << k) + 1 < tree_vertices {
        k += 1;
    }
    let target = DiamondParams::finite(k, 2)?;
    let source = SourceMetric::tree(TreeSpec::new(n));
    let want = source.point_count();
    let mut images = Vec::with_capacity(want);
    images.push(DiamondAddress::Bottom);
    images.extend(bottom_neighbors(&target, None)?.take(want - 1));
    debug_assert_eq!(images.len(), want);
    let map = EmbeddingMap::new(source, target, images)?;
    Ok((k, map))
}
