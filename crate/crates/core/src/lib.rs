//! Directional super-efficiency scoring for DEA datasets.
//!
//! The crate evaluates each decision-making unit against the frontier formed
//! by all the others, measuring how far its inputs could grow and outputs
//! shrink along a direction vector before it stops being efficient. Six
//! model families cover radial, generalized (fractional and linear), hybrid,
//! and input-oriented measurements, and a preset registry reproduces the
//! familiar named super-efficiency models as direction-vector choices.
//!
//! * [`dataset`] — DMU data, validation, evaluation contexts
//! * [`lp`] — linear programs, a deterministic simplex, the Charnes–Cooper
//!   linearization for ratio objectives
//! * [`direction`] — direction recipes, preference weighting, feasibility
//!   and well-definedness checks
//! * [`models`] — the model families, projections, decomposition
//! * [`catalog`] — named presets for conventional super-efficiency models
//! * [`io`], [`config`], [`report`] — CSV ingestion, run configuration,
//!   batch evaluation, ranking, and report emission

pub mod catalog;
pub mod config;
pub mod dataset;
pub mod direction;
pub mod io;
pub mod lp;
pub mod models;
pub mod report;

pub use dataset::{DataError, Dataset, DmuRecord, EvaluationContext, RtsSpec};
pub use direction::{
    apply_preference_weights, build_direction, validate_direction, DirectionReport, DirectionSpec,
    DirectionVector,
};
pub use models::{
    decompose, project, slack_index_sets, solve_fractional_gdse, solve_hdse, solve_input_nonradial,
    solve_input_radial, solve_linear_gdse, solve_model, solve_rdse, HybridPartition, ModelFamily,
    ModelSpec, ScoreResult, SlackIndexSets, SolutionBundle, SolveStatus,
};
