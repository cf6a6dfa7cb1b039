//! Object-type clustering for object-centric event logs.
//!
//! The pipeline reads a JSON-OCEL log, discovers its directly-follows
//! multigraph, turns it into per-object-type transition probabilities,
//! scores how similarly each pair of object types behaves, and groups object
//! types whose similarity reaches a threshold. Threshold tuning enumerates
//! every distinct grouping, and flattening plus footprint comparison give an
//! independent check of the groups.
//!
//! ```
//! use mdfm_core::{discover_clusters, discover_dfm, generate_synthetic_log, running_example_spec};
//!
//! let log = generate_synthetic_log(&running_example_spec(0)).unwrap();
//! let markov = discover_dfm(&log).to_markov();
//! let clusters = discover_clusters(markov.similarity_matrix(), 0.01).unwrap();
//! assert_eq!(clusters.to_string(), "{i,o}|{p}");
//! ```

pub mod clustering;
pub mod dfm;
pub mod flatten;
pub mod footprint;
pub mod matrix;
pub mod ocel;

pub use clustering::{
    brute_force_clusters, discover_clusters, discover_clusters_with_pairs, distinct_cluster_sets,
    tune_clusters, tune_with, ClusterError, ClusterJson, ClusterSet, Threshold, TuneMode,
    TuningResult,
};
pub use dfm::{
    discover_dfm, discover_dfm_for_types, export_dot, Dfm, DfmError, DfmJson, MarkovDfm, Relation,
    TransitionMatrix,
};
pub use flatten::{flatten, FlatEvent, FlattenError, FlattenedLog};
pub use footprint::{footprint_matrix, footprint_of, footprint_similarity, Footprint, FootprintRelation};
pub use matrix::{MatrixError, SimilarityMatrix};
pub use ocel::{
    generate_synthetic_log, parse_ocel, running_example_spec, toy_spec, write_ocel, Event,
    ObjectInstance, OcelError, OcelLog, SyntheticSpec,
};
