//! Domain types and expected-net-gain evaluators.
//!
//! The two free decision variables are the winning utilities
//! (`u_win_us`, `u_win_cn`); every other utility is derived through the
//! identities `U_S^US = U_L^US = -u_win_cn`, `U_L^CN = -u_win_us`,
//! `U_S^CN = u_win_cn`, so inconsistent states cannot be represented.
//!
//! Each player's expected net gain weighs the utility of winning against
//! the cost of the opponent's retaliation (their incentive scaled by their
//! capability) and the status-quo utility. Under incomplete information the
//! incentive is shifted by a random factor and enters through its
//! expectation.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, ValidationErrors, Violation};
use crate::incentives::{shifted_range, IncentiveFamily, IncentiveSpec, NoiseSpec};
use crate::integrate::{expect_noisy_incentive, IntegratorConfig};

// ---------------------------------------------------------------------------
// Players and information modes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Us,
    Cn,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Us => Player::Cn,
            Player::Cn => Player::Us,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Us => "us",
            Player::Cn => "cn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoMode {
    Perfect,
    Incomplete,
}

impl std::fmt::Display for InfoMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InfoMode::Perfect => "perfect",
            InfoMode::Incomplete => "incomplete",
        })
    }
}

// ---------------------------------------------------------------------------
// Capabilities
// ---------------------------------------------------------------------------

/// Fixed positive capabilities; the stronger side must be the US side and
/// win probabilities follow from the relative shares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capabilities {
    pub c_us: f64,
    pub c_cn: f64,
}

impl Capabilities {
    pub fn new(c_us: f64, c_cn: f64) -> Result<Self, ValidationErrors> {
        let caps = Self { c_us, c_cn };
        let mut errors = ValidationErrors::new();
        caps.collect_violations(&mut errors);
        errors.into_result().map(|()| caps)
    }

    fn collect_violations(&self, errors: &mut ValidationErrors) {
        let us_ok = self.c_us.is_finite() && self.c_us > 0.0;
        if !us_ok {
            errors.push(
                "capabilities.c_us",
                format!(
                    "capability must be a positive finite real, got {}",
                    self.c_us
                ),
            );
        }
        let cn_ok = self.c_cn.is_finite() && self.c_cn > 0.0;
        if !cn_ok {
            errors.push(
                "capabilities.c_cn",
                format!(
                    "capability must be a positive finite real, got {}",
                    self.c_cn
                ),
            );
        }
        if self.c_us.is_finite() && self.c_cn.is_finite() && self.c_us <= self.c_cn {
            errors.push(
                "capabilities",
                format!(
                    "c_us must exceed c_cn (got c_us = {}, c_cn = {})",
                    self.c_us, self.c_cn
                ),
            );
        }
    }

    /// Probability that the US side wins: its share of total capability.
    pub fn win_prob_us(&self) -> f64 {
        self.c_us / (self.c_us + self.c_cn)
    }

    /// Complement of the US win probability; computing it as `1 - p` keeps
    /// the two probabilities summing to exactly 1.
    pub fn win_prob_cn(&self) -> f64 {
        1.0 - self.win_prob_us()
    }

    /// Both win probabilities at once.
    pub fn win_probabilities(&self) -> (f64, f64) {
        (self.win_prob_us(), self.win_prob_cn())
    }

    pub fn of(&self, player: Player) -> f64 {
        match player {
            Player::Us => self.c_us,
            Player::Cn => self.c_cn,
        }
    }
}

// ---------------------------------------------------------------------------
// Utility bounds
// ---------------------------------------------------------------------------

/// The feasible utility interval endpoints. `c_low` is the status-quo
/// utility magnitude, `c_high` the worst-case escalation, and
/// `dominance_factor` turns the qualitative "much greater" assumption into a
/// checkable inequality (`c_high >= dominance_factor * c_low`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityBounds {
    pub c_low: f64,
    pub c_high: f64,
    pub dominance_factor: f64,
}

impl UtilityBounds {
    pub const DEFAULT_DOMINANCE_FACTOR: f64 = 10.0;

    pub fn new(c_low: f64, c_high: f64) -> Self {
        Self {
            c_low,
            c_high,
            dominance_factor: Self::DEFAULT_DOMINANCE_FACTOR,
        }
    }

    fn collect_violations(&self, c_us: f64, errors: &mut ValidationErrors) {
        let low_ok = self.c_low.is_finite() && self.c_low > 0.0;
        if !low_ok {
            errors.push(
                "bounds.c_low",
                format!("must be a positive finite real, got {}", self.c_low),
            );
            return;
        }
        let high_ok = self.c_high.is_finite() && self.c_high > self.c_low;
        if !high_ok {
            errors.push(
                "bounds.c_high",
                format!(
                    "must be a finite real greater than c_low = {}, got {}",
                    self.c_low, self.c_high
                ),
            );
            return;
        }
        if self.dominance_factor < 1.0 || self.dominance_factor.is_nan() {
            errors.push(
                "bounds.dominance_factor",
                format!("must be >= 1, got {}", self.dominance_factor),
            );
        }
        if self.c_high < self.dominance_factor * self.c_low {
            errors.push(
                "bounds.c_high",
                format!(
                    "must be at least dominance_factor * c_low = {} (got {})",
                    self.dominance_factor * self.c_low,
                    self.c_high
                ),
            );
        }
        if c_us.is_finite() && self.c_high >= c_us {
            errors.push(
                "bounds.c_high",
                format!(
                    "must be less than capabilities.c_us = {c_us} (got {})",
                    self.c_high
                ),
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Strategy profile
// ---------------------------------------------------------------------------

/// The two winning utilities. All other utilities are identities of these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub u_win_us: f64,
    pub u_win_cn: f64,
}

impl StrategyProfile {
    pub fn new(u_win_us: f64, u_win_cn: f64) -> Self {
        Self { u_win_us, u_win_cn }
    }

    /// US status-quo utility, `-u_win_cn`.
    pub fn u_status_us(&self) -> f64 {
        -self.u_win_cn
    }

    /// US losing utility, pinned to the status quo.
    pub fn u_lose_us(&self) -> f64 {
        -self.u_win_cn
    }

    /// CN losing utility, `-u_win_us`.
    pub fn u_lose_cn(&self) -> f64 {
        -self.u_win_us
    }

    /// CN status-quo utility, equal to its winning utility.
    pub fn u_status_cn(&self) -> f64 {
        self.u_win_cn
    }

    pub fn own(&self, player: Player) -> f64 {
        match player {
            Player::Us => self.u_win_us,
            Player::Cn => self.u_win_cn,
        }
    }

    /// Box constraints: `0 < u_win_us <= c_low`, `c_low <= u_win_cn <= c_high`.
    pub fn check_in_box(&self, bounds: &UtilityBounds) -> Result<(), CoreError> {
        let us_in_box = self.u_win_us > 0.0 && self.u_win_us <= bounds.c_low;
        if !us_in_box {
            return Err(CoreError::OutOfBox(Violation::new(
                "profile.u_win_us",
                format!("must lie in (0, {}], got {}", bounds.c_low, self.u_win_us),
            )));
        }
        let cn_in_box = self.u_win_cn >= bounds.c_low && self.u_win_cn <= bounds.c_high;
        if !cn_in_box {
            return Err(CoreError::OutOfBox(Violation::new(
                "profile.u_win_cn",
                format!(
                    "must lie in [{}, {}], got {}",
                    bounds.c_low, bounds.c_high, self.u_win_cn
                ),
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Solver settings
// ---------------------------------------------------------------------------

/// Grid resolution, report tolerance, open-boundary epsilon, and the
/// integrator used for incomplete-information expectations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub grid: usize,
    pub tolerance: f64,
    /// Proxy distance for the open endpoint `u_win_us = 0`; `None` resolves
    /// to `1e-6 * c_low`.
    pub boundary_epsilon: Option<f64>,
    pub integrator: IntegratorConfig,
}

impl SolverSettings {
    pub fn seed(&self) -> u64 {
        self.integrator.seed
    }
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grid: 1001,
            tolerance: 1e-4,
            boundary_epsilon: None,
            integrator: IntegratorConfig::default(),
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// A fully specified conflict model: capabilities, utility bounds, both
/// incentive functions, optional noise (both sides or neither), and solver
/// settings. All evaluation is pure; a validated scenario can be shared
/// across tasks freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub capabilities: Capabilities,
    pub bounds: UtilityBounds,
    /// The opposing side's incentive to retaliate against the US; its cost
    /// to the US is this scaled by `c_cn`.
    pub incentive_cn: IncentiveSpec,
    /// The US incentive to fight back; cost to CN scaled by `c_us`.
    pub incentive_us: IncentiveSpec,
    pub noise_cn: Option<NoiseSpec>,
    pub noise_us: Option<NoiseSpec>,
    pub settings: SolverSettings,
}

impl Scenario {
    /// Build and validate a scenario, binding each incentive to the
    /// capability that bounds its derivative.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        capabilities: Capabilities,
        bounds: UtilityBounds,
        incentive_cn: IncentiveFamily,
        incentive_us: IncentiveFamily,
        noise_cn: Option<NoiseSpec>,
        noise_us: Option<NoiseSpec>,
        settings: SolverSettings,
    ) -> Result<Self, ValidationErrors> {
        let scenario = Self {
            capabilities,
            bounds,
            incentive_cn: IncentiveSpec::new(incentive_cn, capabilities.c_cn),
            incentive_us: IncentiveSpec::new(incentive_us, capabilities.c_us),
            noise_cn,
            noise_us,
            settings,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Re-check every invariant, collecting all violations. On success the
    /// returned strings are non-fatal notes (e.g. a shifted incentive whose
    /// range leaves (-1, 1)).
    pub fn validate(&self) -> Result<Vec<String>, ValidationErrors> {
        let mut errors = ValidationErrors::new();
        let mut warnings = Vec::new();

        self.capabilities.collect_violations(&mut errors);
        self.bounds
            .collect_violations(self.capabilities.c_us, &mut errors);

        if let Some(eps) = self.settings.boundary_epsilon {
            let eps_ok = eps > 0.0 && eps < self.bounds.c_low;
            if !eps_ok {
                errors.push(
                    "solver.boundary_epsilon",
                    format!("must lie in (0, c_low), got {eps}"),
                );
            }
        }
        if self.settings.grid < 2 {
            errors.push(
                "solver.grid",
                format!(
                    "grid must have at least 2 points, got {}",
                    self.settings.grid
                ),
            );
        }
        let tolerance_ok = self.settings.tolerance > 0.0 && self.settings.tolerance.is_finite();
        if !tolerance_ok {
            errors.push(
                "solver.tolerance",
                format!(
                    "must be a positive finite real, got {}",
                    self.settings.tolerance
                ),
            );
        }
        errors
            .violations
            .extend(self.settings.integrator.validate());

        let bounds_usable = self.bounds.c_high.is_finite() && self.bounds.c_high > 0.0;
        if bounds_usable {
            let half_width = self.bounds.c_high;
            if self.incentive_cn.owner_capability != self.capabilities.c_cn {
                errors.push(
                    "incentive_cn",
                    "owner capability does not match capabilities.c_cn",
                );
            }
            if self.incentive_us.owner_capability != self.capabilities.c_us {
                errors.push(
                    "incentive_us",
                    "owner capability does not match capabilities.c_us",
                );
            }
            errors.violations.extend(
                self.incentive_cn
                    .validate(half_width)
                    .violations("incentive_cn"),
            );
            errors.violations.extend(
                self.incentive_us
                    .validate(half_width)
                    .violations("incentive_us"),
            );
        }

        match (&self.noise_cn, &self.noise_us) {
            (Some(_), None) | (None, Some(_)) => {
                errors.push(
                    "noise",
                    "noise must be specified for both players or neither",
                );
            }
            _ => {}
        }
        for (field, noise, incentive) in [
            ("noise_cn", &self.noise_cn, &self.incentive_cn),
            ("noise_us", &self.noise_us, &self.incentive_us),
        ] {
            if let Some(noise) = noise {
                errors.violations.extend(noise.validate().violations(field));
                if bounds_usable {
                    let (lo, hi) = shifted_range(incentive, noise, self.bounds.c_high);
                    if lo <= -1.0 || hi >= 1.0 {
                        warnings.push(format!(
                            "{field}: shifted incentive range [{lo:.4}, {hi:.4}] leaves (-1, 1); \
                             the axioms constrain the base incentive only"
                        ));
                    }
                }
            }
        }

        errors.into_result().map(|()| warnings)
    }

    /// True when the scenario carries incomplete-information noise.
    pub fn has_noise(&self) -> bool {
        self.noise_cn.is_some() && self.noise_us.is_some()
    }

    /// Resolved proxy distance for the open boundary `u_win_us = 0`.
    pub fn boundary_epsilon(&self) -> f64 {
        self.settings
            .boundary_epsilon
            .unwrap_or(1e-6 * self.bounds.c_low)
    }

    fn integrator(&self) -> &IntegratorConfig {
        &self.settings.integrator
    }

    // -- raw evaluators (no box checks; usable for limit reporting) --------

    fn us_perfect_raw(&self, u_win_us: f64, u_win_cn: f64) -> f64 {
        let p = self.capabilities.win_prob_us();
        let cost_scale = self.capabilities.c_cn;
        let u_status = -u_win_cn;
        p * (u_win_us - cost_scale * self.incentive_cn.value(u_win_us) - u_status)
            - (1.0 - p) * cost_scale * self.incentive_cn.value(u_status)
    }

    fn cn_perfect_raw(&self, u_win_cn: f64, u_win_us: f64) -> f64 {
        let q = self.capabilities.win_prob_cn();
        let cost_scale = self.capabilities.c_us;
        let u_lose = -u_win_us;
        -q * cost_scale * self.incentive_us.value(u_win_cn)
            + (1.0 - q) * (u_lose - cost_scale * self.incentive_us.value(u_lose) - u_win_cn)
    }

    fn us_incomplete_raw(&self, u_win_us: f64, u_win_cn: f64) -> Result<f64, CoreError> {
        let noise = self.noise_cn.as_ref().ok_or_else(|| {
            CoreError::Domain("incomplete-information evaluation requires noise_cn".into())
        })?;
        let p = self.capabilities.win_prob_us();
        let cost_scale = self.capabilities.c_cn;
        let u_status = -u_win_cn;
        let e_win = expect_noisy_incentive(&self.incentive_cn, noise, u_win_us, self.integrator())?;
        let e_status =
            expect_noisy_incentive(&self.incentive_cn, noise, u_status, self.integrator())?;
        Ok(p * (u_win_us - cost_scale * e_win - u_status) - (1.0 - p) * cost_scale * e_status)
    }

    fn cn_incomplete_raw(&self, u_win_cn: f64, u_win_us: f64) -> Result<f64, CoreError> {
        let noise = self.noise_us.as_ref().ok_or_else(|| {
            CoreError::Domain("incomplete-information evaluation requires noise_us".into())
        })?;
        let q = self.capabilities.win_prob_cn();
        let cost_scale = self.capabilities.c_us;
        let u_lose = -u_win_us;
        let e_win = expect_noisy_incentive(&self.incentive_us, noise, u_win_cn, self.integrator())?;
        let e_lose = expect_noisy_incentive(&self.incentive_us, noise, u_lose, self.integrator())?;
        Ok(-q * cost_scale * e_win + (1.0 - q) * (u_lose - cost_scale * e_lose - u_win_cn))
    }

    /// Raw expected net gain for `player` with its own decision utility
    /// `own` and the opponent's decision utility `opponent`. No box checks;
    /// the open-boundary point and out-of-box probes are permitted here.
    pub fn net_gain_raw(
        &self,
        player: Player,
        mode: InfoMode,
        own: f64,
        opponent: f64,
    ) -> Result<f64, CoreError> {
        match (player, mode) {
            (Player::Us, InfoMode::Perfect) => Ok(self.us_perfect_raw(own, opponent)),
            (Player::Cn, InfoMode::Perfect) => Ok(self.cn_perfect_raw(own, opponent)),
            (Player::Us, InfoMode::Incomplete) => self.us_incomplete_raw(own, opponent),
            (Player::Cn, InfoMode::Incomplete) => self.cn_incomplete_raw(own, opponent),
        }
    }

    // -- box-checked evaluators ---------------------------------------------

    /// US expected net gain under perfect information.
    pub fn eval_us_perfect(&self, profile: &StrategyProfile) -> Result<f64, CoreError> {
        profile.check_in_box(&self.bounds)?;
        Ok(self.us_perfect_raw(profile.u_win_us, profile.u_win_cn))
    }

    /// CN expected net gain under perfect information.
    pub fn eval_cn_perfect(&self, profile: &StrategyProfile) -> Result<f64, CoreError> {
        profile.check_in_box(&self.bounds)?;
        Ok(self.cn_perfect_raw(profile.u_win_cn, profile.u_win_us))
    }

    /// US expected net gain under incomplete information (noise required).
    pub fn eval_us_incomplete(&self, profile: &StrategyProfile) -> Result<f64, CoreError> {
        profile.check_in_box(&self.bounds)?;
        self.us_incomplete_raw(profile.u_win_us, profile.u_win_cn)
    }

    /// CN expected net gain under incomplete information (noise required).
    pub fn eval_cn_incomplete(&self, profile: &StrategyProfile) -> Result<f64, CoreError> {
        profile.check_in_box(&self.bounds)?;
        self.cn_incomplete_raw(profile.u_win_cn, profile.u_win_us)
    }
}

// ---------------------------------------------------------------------------
// General-form evaluators
// ---------------------------------------------------------------------------
//
// These take all three utilities independently and exist as oracles for the
// identity that collapses them to the simplified forms above. The solver
// never calls them.

/// US expected net gain with independent win/lose/status utilities.
pub fn eval_general_us(
    u_win: f64,
    u_lose: f64,
    u_status: f64,
    caps: &Capabilities,
    incentive_cn: &IncentiveSpec,
) -> f64 {
    let p = caps.win_prob_us();
    let cost_scale = caps.c_cn;
    p * (u_win - cost_scale * incentive_cn.value(u_win) - u_status)
        + (1.0 - p) * (u_lose - cost_scale * incentive_cn.value(u_lose) - u_status)
}

/// CN expected net gain with independent win/lose/status utilities.
pub fn eval_general_cn(
    u_win: f64,
    u_lose: f64,
    u_status: f64,
    caps: &Capabilities,
    incentive_us: &IncentiveSpec,
) -> f64 {
    let q = caps.win_prob_cn();
    let cost_scale = caps.c_us;
    q * (u_win - cost_scale * incentive_us.value(u_win) - u_status)
        + (1.0 - q) * (u_lose - cost_scale * incentive_us.value(u_lose) - u_status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::integrate::expect_shift;

    const FROZEN_US_AT_STATUS_QUO: f64 = -0.47375320224904005;
    const FROZEN_CN_AT_STATUS_QUO: f64 = 4.42125960674712;
    const FROZEN_CN_AT_ESCALATION: f64 = -7.0420229292157925;

    #[test]
    fn win_probabilities_from_relative_shares() {
        let caps = Capabilities::new(3.0, 1.0).unwrap();
        assert_eq!(caps.win_probabilities(), (0.75, 0.25));
        // Ratio invariance.
        let caps = Capabilities::new(60.0, 20.0).unwrap();
        assert_eq!(caps.win_probabilities(), (0.75, 0.25));
    }

    #[test]
    fn equal_capabilities_rejected() {
        let err = Capabilities::new(1.0, 1.0).unwrap_err();
        assert!(err.violations.iter().any(|v| v.field == "capabilities"));
        assert!(Capabilities::new(-1.0, -2.0).is_err());
        assert!(Capabilities::new(0.0, 0.0).is_err());
    }

    #[test]
    fn probabilities_sum_to_one_exactly() {
        for (c_us, c_cn) in [(60.0, 20.0), (3.7, 1.1), (199.0, 198.0), (1e6, 3.0)] {
            let caps = Capabilities::new(c_us, c_cn).unwrap();
            let (p, q) = caps.win_probabilities();
            assert_eq!(p + q, 1.0);
            assert!(p > 0.5 && p < 1.0);
            assert!(q > 0.0 && q < 0.5);
        }
    }

    #[test]
    fn general_us_vanishes_at_zero() {
        let s = corpus::reference();
        assert_eq!(
            eval_general_us(0.0, 0.0, 0.0, &s.capabilities, &s.incentive_cn),
            0.0
        );
        assert_eq!(
            eval_general_cn(0.0, 0.0, 0.0, &s.capabilities, &s.incentive_us),
            0.0
        );
    }

    #[test]
    fn general_us_termwise_reference_value() {
        // Termwise evaluation at u_win = 1, u_lose = u_status = -1:
        //   0.75 (2 - 20 tanh 0.2) + 0.25 (20 tanh 0.2)
        let s = corpus::reference();
        let v = eval_general_us(1.0, -1.0, -1.0, &s.capabilities, &s.incentive_cn);
        let t = 0.2f64.tanh();
        let oracle = 0.75 * (1.0 - 20.0 * t + 1.0) + 0.25 * (-1.0 - 20.0 * (-t) + 1.0);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - FROZEN_US_AT_STATUS_QUO).abs() < 1e-12);
        assert!((v - (-0.4738)).abs() < 1e-3);
    }

    #[test]
    fn general_cn_termwise_reference_value() {
        let s = corpus::reference();
        let v = eval_general_cn(1.0, -1.0, 1.0, &s.capabilities, &s.incentive_us);
        let t = 0.2f64.tanh();
        let oracle = 0.25 * (1.0 - 60.0 * t - 1.0) + 0.75 * (-1.0 + 60.0 * t - 1.0);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - FROZEN_CN_AT_STATUS_QUO).abs() < 1e-9);
        assert!((v - 4.4215).abs() < 1e-3);
    }

    #[test]
    fn simplification_identity_us() {
        let s = corpus::reference();
        for i in 0..50 {
            let u_win = 0.02 + 0.98 * i as f64 / 49.0;
            let u_win_cn = 1.0 + 4.0 * i as f64 / 49.0;
            let profile = StrategyProfile::new(u_win, u_win_cn);
            let simplified = s.eval_us_perfect(&profile).unwrap();
            let general = eval_general_us(
                u_win,
                profile.u_lose_us(),
                profile.u_status_us(),
                &s.capabilities,
                &s.incentive_cn,
            );
            assert!((simplified - general).abs() < 1e-12);
        }
    }

    #[test]
    fn simplification_identity_cn() {
        let s = corpus::reference();
        for i in 0..50 {
            let u_win_us = 0.02 + 0.98 * i as f64 / 49.0;
            let u_win_cn = 1.0 + 4.0 * i as f64 / 49.0;
            let profile = StrategyProfile::new(u_win_us, u_win_cn);
            let simplified = s.eval_cn_perfect(&profile).unwrap();
            let general = eval_general_cn(
                u_win_cn,
                profile.u_lose_cn(),
                profile.u_status_cn(),
                &s.capabilities,
                &s.incentive_us,
            );
            assert!((simplified - general).abs() < 1e-12);
        }
    }

    #[test]
    fn us_perfect_reference_values() {
        let s = corpus::reference();
        let v = s.eval_us_perfect(&StrategyProfile::new(1.0, 1.0)).unwrap();
        // Cross-check against 2 a c_low + (1 - 2a) c_cn I(c_low).
        let formula = 2.0 * 0.75 * 1.0 + (1.0 - 1.5) * 20.0 * 0.2f64.tanh();
        assert!((v - formula).abs() < 1e-12);
        assert!((v - FROZEN_US_AT_STATUS_QUO).abs() < 1e-12);

        // Strictly larger payoff at a smaller winning utility.
        let milder = s.eval_us_perfect(&StrategyProfile::new(0.5, 1.0)).unwrap();
        assert!(milder > v);
    }

    #[test]
    fn cn_perfect_reference_values() {
        let s = corpus::reference();
        let max = s.eval_cn_perfect(&StrategyProfile::new(1.0, 1.0)).unwrap();
        assert!((max - FROZEN_CN_AT_STATUS_QUO).abs() < 1e-12);

        let min = s.eval_cn_perfect(&StrategyProfile::new(1.0, 5.0)).unwrap();
        let t02 = 0.2f64.tanh();
        let t1 = 1.0f64.tanh();
        let formula = 60.0 * (-0.25 * t1 - 0.75 * (-t02)) + 0.75 * (-1.0 - 5.0);
        assert!((min - formula).abs() < 1e-12);
        assert!((min - FROZEN_CN_AT_ESCALATION).abs() < 1e-12);
        assert!((min - (-7.042)).abs() < 1e-3);
    }

    #[test]
    fn out_of_box_profiles_rejected() {
        let s = corpus::reference();
        for profile in [
            StrategyProfile::new(0.0, 1.0),
            StrategyProfile::new(1.5, 1.0),
            StrategyProfile::new(1.0, 0.5),
            StrategyProfile::new(1.0, 5.5),
            StrategyProfile::new(-0.2, 2.0),
        ] {
            assert!(s.eval_us_perfect(&profile).is_err(), "{profile:?}");
            assert!(s.eval_cn_perfect(&profile).is_err(), "{profile:?}");
        }
    }

    #[test]
    fn perfect_evaluators_vanish_at_zero_profile() {
        // Outside the box, but the raw formulas are evaluable and exactly 0.
        let s = corpus::reference();
        assert_eq!(
            s.net_gain_raw(Player::Us, InfoMode::Perfect, 0.0, 0.0)
                .unwrap(),
            0.0
        );
        assert_eq!(
            s.net_gain_raw(Player::Cn, InfoMode::Perfect, 0.0, 0.0)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn incomplete_reduces_to_perfect_for_zero_shift() {
        // A constant-zero shift fails validation, so exercise the raw path.
        let mut s = corpus::reference_with_noise();
        for noise in [&mut s.noise_cn, &mut s.noise_us] {
            noise.as_mut().unwrap().shift = crate::incentives::ShiftFamily::Affine {
                offset: 0.0,
                scale: 0.0,
            };
        }
        for (player, own, opp) in [(Player::Us, 0.7, 2.0), (Player::Cn, 3.0, 0.9)] {
            let perfect = s.net_gain_raw(player, InfoMode::Perfect, own, opp).unwrap();
            let incomplete = s
                .net_gain_raw(player, InfoMode::Incomplete, own, opp)
                .unwrap();
            assert!((perfect - incomplete).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_separability_offsets_perfect_values() {
        let s = corpus::reference_with_noise();
        let e_m = expect_shift(s.noise_cn.as_ref().unwrap(), &s.settings.integrator).unwrap();
        let e_n = expect_shift(s.noise_us.as_ref().unwrap(), &s.settings.integrator).unwrap();
        for i in 0..25 {
            let own_us = 0.04 * (i + 1) as f64;
            let own_cn = 1.0 + 4.0 * i as f64 / 24.0;
            let profile = StrategyProfile::new(own_us, own_cn);
            let us_gap =
                s.eval_us_incomplete(&profile).unwrap() - s.eval_us_perfect(&profile).unwrap();
            assert!((us_gap - 20.0 * e_m).abs() < 1e-10);
            let cn_gap =
                s.eval_cn_incomplete(&profile).unwrap() - s.eval_cn_perfect(&profile).unwrap();
            assert!((cn_gap - 60.0 * e_n).abs() < 1e-10);
        }
    }

    #[test]
    fn incomplete_reference_values() {
        let s = corpus::reference_with_noise();
        let us = s
            .eval_us_incomplete(&StrategyProfile::new(1.0, 1.0))
            .unwrap();
        assert!((us - 0.52624679775096).abs() < 2e-3);
        let cn = s
            .eval_cn_incomplete(&StrategyProfile::new(1.0, 1.0))
            .unwrap();
        assert!((cn - 7.42125960674712).abs() < 2e-3);
    }

    #[test]
    fn incomplete_without_noise_is_an_error() {
        let s = corpus::reference();
        assert!(s
            .eval_us_incomplete(&StrategyProfile::new(1.0, 1.0))
            .is_err());
        assert!(s
            .net_gain_raw(Player::Cn, InfoMode::Incomplete, 1.0, 1.0)
            .is_err());
    }

    #[test]
    fn monotone_decrease_in_own_utility() {
        let s = corpus::reference();
        // Finite differences at 100 interior points, all strictly negative.
        for (player, lo, hi) in [(Player::Us, 0.0, 1.0), (Player::Cn, 1.0, 5.0)] {
            for i in 0..100 {
                let u = lo + (hi - lo) * (i + 1) as f64 / 101.0;
                let h = 1e-6;
                let up = s
                    .net_gain_raw(player, InfoMode::Perfect, u + h, 1.0)
                    .unwrap();
                let down = s
                    .net_gain_raw(player, InfoMode::Perfect, u - h, 1.0)
                    .unwrap();
                assert!(up - down < 0.0, "player {player} at u = {u}");
            }
        }
    }

    #[test]
    fn evaluation_is_freely_concurrent() {
        // Immutable scenario, pure evaluation: concurrent tasks agree with
        // the sequential values bit for bit.
        let s = corpus::reference_with_noise();
        let sequential: Vec<f64> = (0..8)
            .map(|i| {
                s.net_gain_raw(Player::Us, InfoMode::Incomplete, 0.1 + 0.1 * i as f64, 1.0)
                    .unwrap()
            })
            .collect();
        let concurrent: Vec<f64> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..8)
                .map(|i| {
                    let s = &s;
                    scope.spawn(move || {
                        s.net_gain_raw(Player::Us, InfoMode::Incomplete, 0.1 + 0.1 * i as f64, 1.0)
                            .unwrap()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (a, b) in sequential.iter().zip(&concurrent) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn scenario_validation_collects_multiple_violations() {
        let err = Scenario::new(
            Capabilities {
                c_us: 10.0,
                c_cn: 20.0,
            },
            UtilityBounds::new(1.0, 100.0),
            IncentiveFamily::OddSigmoid { slope: 0.2 },
            IncentiveFamily::OddSigmoid { slope: 0.2 },
            None,
            None,
            SolverSettings::default(),
        )
        .unwrap_err();
        assert!(err.len() >= 2, "{err}");
        assert!(err.violations.iter().any(|v| v.field == "capabilities"));
        assert!(err.violations.iter().any(|v| v.field == "bounds.c_high"));
    }

    #[test]
    fn scenario_rejects_one_sided_noise() {
        let mut s = corpus::reference_with_noise();
        s.noise_us = None;
        let err = s.validate().unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| v.field == "noise" && v.message.contains("both players or neither")));
    }

    #[test]
    fn scenario_warns_on_shifted_range_excursion() {
        let mut s = corpus::reference_with_noise();
        for noise in [&mut s.noise_cn, &mut s.noise_us] {
            noise.as_mut().unwrap().shift = crate::incentives::ShiftFamily::Affine {
                offset: 0.0,
                scale: 1.5,
            };
        }
        let warnings = s.validate().unwrap();
        assert_eq!(warnings.len(), 2);
        assert!(warnings[0].contains("shifted incentive range"));
    }

    #[test]
    fn boundary_epsilon_defaults_from_c_low() {
        let s = corpus::reference();
        assert_eq!(s.boundary_epsilon(), 1e-6);
        let mut s2 = s.clone();
        s2.settings.boundary_epsilon = Some(1e-3);
        assert_eq!(s2.boundary_epsilon(), 1e-3);
        s2.settings.boundary_epsilon = Some(2.0);
        assert!(s2.validate().is_err());
    }
}
