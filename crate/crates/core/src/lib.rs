//! Combinatorics of graph-homomorphism shifts on `Z^d`.
//!
//! A pattern assigns a vertex of a finite graph `H` to each lattice site so that
//! neighbouring sites carry adjacent vertices. For four-cycle-free `H` the crate
//! provides folding to a stiff core, lifts to the universal cover and the height
//! functions they induce, gluing of patterns across an annulus, pivot chains between
//! patterns that agree far out, and exact pattern counts for entropy estimates.

pub mod error;
pub mod graph;
pub mod region;
pub mod pattern;
pub mod folding;
pub mod cover;
pub mod height;
pub mod patch;
pub mod pivot;
pub mod entropy;
pub mod sample;
pub mod io;

pub use cover::{cover_distance, Cover, CoverPiece, CoverVertex};
pub use entropy::{
    count_box_patterns, entropy_report, periodic_count, single_site_fillable, strip_estimate, EntropyReport,
    Fillability, StripEstimate,
};
pub use error::{Error, Result};
pub use folding::{
    fold_to_stiff, full_config_fold, is_stiff, onion_fix, onion_fix_with, Direction, FoldSequence, FoldStep,
    StiffClass,
};
pub use graph::{analyze_graph, Graph, GraphReport, Vertex};
pub use height::{height, lift, lift_at, range, LiftPattern, SlopeEstimate};
pub use patch::{minimal_k, patch, patch_with, ring_walk, PatchOptions, PatchResult};
pub use pattern::{count_patterns, enumerate_patterns, PartialPattern, Pattern};
pub use pivot::{
    is_frozen_window, pivot_chain, pivot_components, reconfig_components, PivotChain, PivotDelta, Reconfig,
    ReconfigReport,
};
pub use region::{Region, RegionKind, Site};
pub use sample::random_pattern;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
