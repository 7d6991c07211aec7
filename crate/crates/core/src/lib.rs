//! Deterministic engine for a two-player asymmetric-conflict
//! expected-utility model.
//!
//! The engine evaluates each side's expected net gain of fighting under
//! perfect and incomplete information, solves the box-constrained extremum
//! problems in each side's own decision utility, determines whether best
//! responses are attained, and verifies the model's four analytical claims
//! (P1-P4) against independent closed-form oracles.
//!
//! Modules:
//! - [`model`]: domain types and the payoff evaluators.
//! - [`incentives`]: incentive/shift/density families and their validators.
//! - [`integrate`]: quadrature and seeded Monte Carlo expectations.
//! - [`solver`]: extrema, gradients, best responses, proposition reports.
//! - [`scenario`]: scenario files and report serialization.
//! - [`corpus`]: reference scenarios and seeded generators.

pub mod corpus;
pub mod error;
pub mod incentives;
pub mod integrate;
pub mod model;
pub mod scenario;
pub mod solver;

pub use error::{CoreError, ValidationErrors, Violation};
pub use incentives::{IncentiveFamily, IncentiveSpec, NoiseSpec, PdfFamily, PdfSpec, ShiftFamily};
pub use integrate::{IntegratorConfig, IntegratorMethod};
pub use model::{
    Capabilities, InfoMode, Player, Scenario, SolverSettings, StrategyProfile, UtilityBounds,
};
pub use scenario::{load_scenario, LoadError, ReportFormat, ScenarioDocument};
pub use solver::{
    best_response, check_sign_conditions, gradient_check, solve_extrema, sweep, verify_proposition,
    verify_propositions, BestResponse, ExtremumKind, ExtremumReport, FormulaId, GradientReport,
    Proposition, PropositionReport, PropositionStatus, Series, SweepAxis,
};
