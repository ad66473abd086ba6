//! Exact cut sparsification at desk scale.
//!
//! The crate builds friendly-cut sparsifiers by iterated expander
//! decomposition and contraction, turns them into all-pairs-min-cut
//! sparsifiers with the star transform, and answers `λ(s, t)` queries from
//! Gomory-Hu trees. Three model pipelines sit on top: a fully dynamic
//! engine, a two-pass dynamic-stream pipeline over linear sketches, and a
//! cut-query oracle with exact accounting.
//!
//! All weights are integers or exact rationals; nothing in the cut path
//! uses floating point.

pub mod apmc;
pub mod dynamic;
pub mod error;
pub mod expander;
pub mod fixtures;
pub mod flow;
pub mod friendly;
pub mod gomory_hu;
pub mod graph;
pub mod harness;
pub mod io;
pub mod streaming;
pub mod suite;

/// Exact rational used for parameters, ratios and conductances.
pub type Rational = num_rational::Ratio<i128>;

pub use error::{Error, Result};
pub use expander::{conductance, expander_decompose, Decomposition, DecomposeConfig};
pub use flow::{brute_force_apmc, enumerate_min_st_cuts, min_st_cut, minimal_min_st_cut, LambdaTable, MinCutResult};
pub use friendly::{build_friendly_sparsifier, EdgeUpdate, FriendlySparsifier, SlackPolicy, UpdateKind};
pub use graph::{contract, cut_value, friendliness_ratio, is_alpha_friendly, ContractionMap, EdgeWeighted, Multigraph, MultigraphBuilder, VertexId, WeightedGraph};
pub use gomory_hu::{build_gomory_hu, GomoryHuTree, SubmodularOracle};
pub use apmc::{apmc_pipeline, peel_degree_one, recover_min_cut_encoding, star_transform, ApmcSparsifier};
pub use harness::{cut_query_apmc_demo, generate_kl98, CutQueryOracle};
pub use dynamic::DynamicEngine;
pub use streaming::{pass_one, pass_two, two_pass_apmc, SparseRecoverySketch, StreamConfig, StreamEvent};
