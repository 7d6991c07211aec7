//! Reference scenarios and seeded generators.
//!
//! Shared by the test suites, the benchmarks, and anything that needs a
//! known-valid scenario quickly. The random generators draw from parameter
//! ranges where the incentive axioms are satisfiable and re-run the
//! validators, so every returned scenario is valid by construction.

use rand::Rng;

use crate::incentives::{
    IncentiveFamily, IncentiveSpec, NoiseSpec, PdfFamily, PdfSpec, ShiftFamily,
};
use crate::integrate::IntegratorConfig;
use crate::model::{Capabilities, Scenario, SolverSettings, StrategyProfile, UtilityBounds};

/// Reference scenario: capabilities 60/20, bounds [1, 5], odd-sigmoid
/// incentives with slope 0.2 on both sides, perfect information.
///
/// The bound ratio is 5, so the scenario declares `dominance_factor = 5`
/// rather than relying on the stricter default of 10.
pub fn reference() -> Scenario {
    let settings = SolverSettings {
        grid: 1001,
        tolerance: 1e-4,
        boundary_epsilon: None,
        integrator: IntegratorConfig::simpson(42),
    };
    Scenario::new(
        Capabilities {
            c_us: 60.0,
            c_cn: 20.0,
        },
        UtilityBounds {
            c_low: 1.0,
            c_high: 5.0,
            dominance_factor: 5.0,
        },
        IncentiveFamily::OddSigmoid { slope: 0.2 },
        IncentiveFamily::OddSigmoid { slope: 0.2 },
        None,
        None,
        settings,
    )
    .expect("reference scenario is valid")
}

/// The reference scenario with uniform noise and affine shifts `0.1 z` on
/// both sides.
pub fn reference_with_noise() -> Scenario {
    let mut scenario = reference();
    let noise = NoiseSpec::new(
        PdfSpec::new(PdfFamily::Uniform {}).expect("uniform pdf"),
        ShiftFamily::Affine {
            offset: 0.0,
            scale: 0.1,
        },
    );
    scenario.noise_cn = Some(noise);
    scenario.noise_us = Some(noise);
    scenario
        .validate()
        .expect("noisy reference scenario is valid");
    scenario
}

/// Random incentive family that passes validation for the given operating
/// half-width and owner capability. Falls back to the linear blend, which is
/// feasible whenever `half_width < 0.75 * capability`.
pub fn random_incentive(rng: &mut impl Rng, half_width: f64, capability: f64) -> IncentiveFamily {
    for _ in 0..32 {
        let family = match rng.random_range(0..3u8) {
            0 => IncentiveFamily::OddSigmoid {
                slope: rng.random_range(0.08..0.35),
            },
            1 => IncentiveFamily::OddArctanLike {
                slope: rng.random_range(0.08..0.35),
            },
            _ => IncentiveFamily::LinearPlusSigmoid {
                gamma: rng.random_range(0.6..0.9),
                slope: rng.random_range(0.05..0.3),
                c_ref: half_width,
            },
        };
        if IncentiveSpec::new(family, capability)
            .validate(half_width)
            .passed()
        {
            return family;
        }
    }
    IncentiveFamily::LinearPlusSigmoid {
        gamma: 0.75,
        slope: 0.1,
        c_ref: half_width,
    }
}

/// Random noise: uniform or small-integer-exponent bump density with an
/// affine or low-power shift. The exponent caps keep the integrands at a
/// polynomial degree the default Simpson rule resolves within the engine's
/// normalization and agreement bounds (bump(4,4) already misses 1e-9).
pub fn random_noise(rng: &mut impl Rng) -> NoiseSpec {
    let pdf = if rng.random_bool(0.5) {
        PdfSpec::new(PdfFamily::Uniform {}).expect("uniform pdf")
    } else {
        PdfSpec::new(PdfFamily::PolynomialBump {
            a: rng.random_range(1..=3) as f64,
            b: rng.random_range(1..=3) as f64,
        })
        .expect("bump pdf")
    };
    let shift = if rng.random_bool(0.5) {
        ShiftFamily::Affine {
            offset: rng.random_range(0.0..0.03),
            scale: rng.random_range(0.02..0.2),
        }
    } else {
        ShiftFamily::Power {
            offset: rng.random_range(0.0..0.03),
            scale: rng.random_range(0.02..0.2),
            exponent: rng.random_range(1..=2) as f64,
        }
    };
    NoiseSpec::new(pdf, shift)
}

/// Random valid scenario. Capability and bound ranges are chosen so that
/// every invariant (including the incentive derivative bounds on
/// `[-c_high, c_high]`) is satisfiable.
pub fn random_valid(rng: &mut impl Rng, with_noise: bool) -> Scenario {
    let c_cn = rng.random_range(10.0..60.0);
    let c_us = c_cn * rng.random_range(1.3..3.5);
    let c_low = rng.random_range(0.1..0.03 * c_cn);
    let c_high = c_low * rng.random_range(10.0..15.0);

    let incentive_cn = random_incentive(rng, c_high, c_cn);
    let incentive_us = random_incentive(rng, c_high, c_us);
    let (noise_cn, noise_us) = if with_noise {
        (Some(random_noise(rng)), Some(random_noise(rng)))
    } else {
        (None, None)
    };

    let settings = SolverSettings {
        grid: 801,
        tolerance: 1e-4,
        boundary_epsilon: None,
        integrator: IntegratorConfig::simpson(rng.random()),
    };
    Scenario::new(
        Capabilities { c_us, c_cn },
        UtilityBounds::new(c_low, c_high),
        incentive_cn,
        incentive_us,
        noise_cn,
        noise_us,
        settings,
    )
    .expect("generated scenario parameters are in the feasible region")
}

/// Uniformly random in-box profile for a scenario's bounds.
pub fn random_profile(rng: &mut impl Rng, bounds: &UtilityBounds) -> StrategyProfile {
    let r: f64 = rng.random_range(0.0..1.0);
    StrategyProfile::new(
        bounds.c_low * (1.0 - r),
        rng.random_range(bounds.c_low..=bounds.c_high),
    )
}
