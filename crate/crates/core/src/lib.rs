//! Binary trees, k-branching diamond graphs, exact shortest-path oracles,
//! and bilipschitz embedding distortion.
//!
//! The crate is organized around three layers:
//!
//! * graph construction and canonical vertex addressing ([`tree`], [`diamond`],
//!   [`graph`], [`io`]),
//! * exact metrics: a closed-form tree distance and a recursive diamond
//!   distance oracle that never materializes the graph, cross-validated
//!   against BFS ([`metric`]),
//! * embeddings and machine checks: the star embedding, exact rational
//!   distortion reports, minimum-distortion search, separated-set packing,
//!   and exhaustive verification sweeps ([`embedding`], [`search`],
//!   [`sepset`], [`observations`], [`witness`]).
//!
//! Everything deterministic by construction: fixed vertex orders, seeded
//! randomness, and parallel code paths ([`exec`]) that merge results in a
//! worker-count-independent way.

pub mod diamond;
pub mod embedding;
pub mod exec;
pub mod graph;
pub mod io;
pub mod metric;
pub mod observations;
pub mod search;
pub mod sepset;
pub mod tree;
pub mod witness;

pub use diamond::{
    Branching, DiamondAddress, DiamondError, DiamondParams, Half, Refinement, SubdiamondRef,
};
pub use embedding::{DistortionReport, EmbeddingError, EmbeddingMap, SourceMetric};
pub use exec::Parallelism;
pub use graph::MaterializedGraph;
pub use metric::{BoundaryProfile, MetricError};
pub use observations::{ComponentDiameterReport, NeighborhoodReport, ObservationError};
pub use search::{SearchConfig, SearchOutcome};
pub use sepset::{SepMode, SepSetError, SeparatedSetResult};
pub use tree::{TreeSpec, TreeVertex};
pub use witness::{InequalityVerdict, WitnessError, WitnessParams};
