//! Journal citation environments from an aggregated journal-journal
//! citation matrix: environment selection, cosine maps, local impact,
//! Kamada-Kawai layout and Pajek/SVG/ASCII export.
//!
//! Float computations are generic over [`Scalar`] (`f32`, `f64`); impact
//! shares are generic over [`Share`], which also covers exact rationals.
//! The aliases below fix the common choices.

pub mod environment;
pub mod error;
pub mod export;
pub mod impact;
pub mod layout;
pub mod matrix;
pub mod num;
pub mod pipeline;
pub mod similarity;
pub mod store;
pub mod synthetic;

pub use environment::{build_local_matrix, select_members, seed_dimension_total, Environment, Mode, Threshold};
pub use error::{Error, ErrorClass, Result};
pub use impact::{
    default_min_radius, grand_sum, impact_profile, impact_profiles, node_geometry, rank_by_local_impact,
    reference_split_report, ExternalReferences, ImpactProfile, ImpactReport, ImpactRow, NodeGeometry, RankedJournal,
    ReferenceSplit,
};
pub use layout::{layout_graph, Layout, LayoutOptions, SolverOptions, SpringSystem};
pub use matrix::CountMatrix;
pub use num::{percent_half_up, Scalar, Share};
pub use pipeline::{
    cmd_batch, cmd_compare, cmd_map, cmd_split, compare_environments, compute_map, load_store, BatchSummary,
    CompareReport, MapArtifacts, MapOutcome, RunConfig,
};
pub use similarity::{cosine, pairwise_cosines, threshold_edges, CosineMatrix, Orientation, SimilarityEdge};
pub use store::{
    parse_citation_edges, parse_journal_registry, Axis, CitationGraph, CitationStore, Journal, JournalId, Language,
    Registry,
};
pub use synthetic::{synthetic_corpus, SyntheticCorpus, SyntheticSpec};

/// Exact share type.
pub type Rational = num_rational::Ratio<i64>;

pub type Cosines = CosineMatrix<f64>;
pub type Cosines32 = CosineMatrix<f32>;
pub type Edge = SimilarityEdge<f64>;
pub type Edge32 = SimilarityEdge<f32>;
pub type Profile = ImpactProfile<f64>;
pub type ExactProfile = ImpactProfile<Rational>;
pub type Geometry = NodeGeometry<f64>;
pub type PlaneLayout = Layout<f64>;
pub type PlaneLayout32 = Layout<f32>;
pub type Springs = SpringSystem<f64>;
