//! Optimal straight-line shortcuts for geometric trees.
//!
//! Load a tree with [`load_tree`], inspect its [`backbone`], evaluate a
//! shortcut with [`augmented_diameter`] and search for the best one with
//! [`optimize`].

pub mod augmented;
pub(crate) mod caterpillar;
pub mod diameter;
pub mod error;
pub mod oracle;
pub mod smawk;
pub mod svg;
pub mod sweep;
pub mod tree;

pub use augmented::{
    augmented_diameter, classify_usefulness, pair_is_useful, AchievingPair, AugmentedDiagnosis,
    Endpoint, PairSubType, PairType, PairUsefulness, PathDescriptor, PathType, Usefulness,
    UsefulnessKind,
};
pub use diameter::{
    absolute_center, backbone, continuous_diameter, BackboneDecomposition, CenterResult,
    DiameterResult, Part, SecondarySubtree,
};
pub use oracle::{grid_search, random_tree, stress_family, GridResult, Shape};
pub use error::{BalanceError, EvalError, OracleError, SmawkError, TreeError};
pub use tree::{load_tree, Canonical, GeometricTree, PathTrace, Point, Shortcut, TreePoint, VertexId};
pub use caterpillar::BalanceLaw;
pub use svg::render_svg;
pub use smawk::{longest_wedge_path, row_maxima, row_maxima_counted, ImplicitMatrix, WedgeMatrix, WedgePath};
pub use sweep::{
    optimize, optimize_with, Event, EventKind, Mover, OptimizeResult, OutwardCounts, Phase, Prediction, Probe,
    Route, SpeedLaw, Sweep, SweepOptions, SweepState, TerminalReason,
};
