//! Lanchester-type dynamics of armed revolts over a split population.
//!
//! Two forces, Blue and Red, fight for control of a population divided into
//! supporters of Blue (fraction `S`) and contrarians (fraction `1 - S`).
//! Engagement rates scale with the product of the opposing presences, as in
//! Lanchester-style attrition, and a force fights better in friendly
//! territory. The crate provides:
//!
//! - [`model`]: parameter and state types plus the right-hand sides of the
//!   basic model, the direct foreign-intervention extension, and the
//!   opportunistic-population extension;
//! - [`equilibria`]: closed-form equilibria, analytic outcome classification,
//!   Jacobians, and eigenvalue stability reports;
//! - [`mod@integrate`]: adaptive trajectory integration with
//!   equilibrium-convergence detection;
//! - [`explore`]: outcome maps over parameter grids, Blue-control surfaces,
//!   basin-of-attraction slices with separatrix location, and a seeded Monte
//!   Carlo probe of the intervention-stability conjecture.

pub mod equilibria;
pub mod error;
pub mod explore;
pub mod integrate;
pub mod model;

pub use equilibria::{
    balanced_stalemate, balanced_stalemate_jacobian_det, basic_thresholds, check_conjecture,
    classify_basic, classify_direct, direct_victory_threshold, indirect_thresholds, jacobian_basic,
    jacobian_direct, jacobian_opportunistic, opportunistic_equilibria, stability_basic,
    stability_direct, stalemate_basic, stalemate_direct, BasicThresholds, Boundary,
    ConjectureCheck, EquilibriumKind, IndirectThresholds, Jacobian, OpportunisticEquilibria,
    Outcome, StabilityReport, Tolerances,
};
pub use error::{Error, Result};
pub use explore::{
    basin_map, blue_control_surface, conjecture_sweep, outcome_map, outcome_map_cross_checked,
    AxisScale, AxisSpec, BasinCell, BasinCoord, BasinMap, BasinSpec, BasinTag, CellOutcome,
    ConjectureRanges, ConjectureReport, CrossCheckReport, OutcomeMap, SeparatrixSample, SweepBase,
    SweepCell, SweepParam, SweepSpec, SweepVariant,
};
pub use integrate::{
    integrate, outcome_from_trajectory, rk4_fixed, InitState, IntegratorConfig, Model, Sample,
    Terminal, Trajectory,
};
pub use model::{
    apply_indirect, rhs_basic, rhs_direct, rhs_full_basic, rhs_opportunistic, BasicState,
    DirectIntervention, IndirectIntervention, OpportunisticParams, OpportunisticState,
    PopulationSplit, RateParams, ReducedState,
};
