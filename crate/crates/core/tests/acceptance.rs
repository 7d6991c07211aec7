//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).
//!
//! Every tolerance is pinned here, in code. Expected extremum values are
//! frozen from the closed-form oracles evaluated independently of the grid
//! search:
//!   P1-min = 2 a c_low + (1 - 2a) c_cn I(c_low)      = -0.47375320224904005
//!   P2-max = (1 - 2b) c_us psi(c_low) - 2 (1-b) c_low =  4.42125960674712
//!   P2-min = c_us [-b psi(c_high) - (1-b) psi(-1)] + (1-b)(-1 - c_high)
//!                                                     = -7.0420229292157925
//! with a = 0.75, b = 0.25, I = psi = tanh(0.2 u), and the incomplete-mode
//! counterparts offset by C_opponent * E[shift] = 20 * 0.05 and 60 * 0.05.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netgain_core::incentives::{IncentiveFamily, IncentiveSpec};
use netgain_core::integrate::{
    expect_noisy_incentive, mc_cross_check, simpson_unit, IntegratorConfig,
};
use netgain_core::model::{eval_general_cn, eval_general_us, InfoMode, Player};
use netgain_core::scenario::{emit_report, ReportFormat, ScenarioDocument};
use netgain_core::solver::{best_response, gradient_check, solve_extrema, verify_propositions};
use netgain_core::{corpus, load_scenario};

const P1_MIN: f64 = -0.47375320224904005;
const P2_MAX: f64 = 4.42125960674712;
const P2_MIN: f64 = -7.0420229292157925;

/// Collects failures so the criterion line prints before any panic.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(message());
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("acceptance {}: {verdict}", self.name);
        assert!(
            self.failures.is_empty(),
            "{} failed:\n{}",
            self.name,
            self.failures.join("\n")
        );
    }
}

#[test]
fn c1_simplification_identity() {
    let mut criterion = Criterion::new("C1 simplification-identity");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let started = std::time::Instant::now();
    let mut checked = 0usize;
    for i in 0..25 {
        let scenario = corpus::random_valid(&mut rng, i % 2 == 0);
        for _ in 0..40 {
            let profile = corpus::random_profile(&mut rng, &scenario.bounds);
            let us = scenario.eval_us_perfect(&profile).unwrap();
            let us_general = eval_general_us(
                profile.u_win_us,
                profile.u_lose_us(),
                profile.u_status_us(),
                &scenario.capabilities,
                &scenario.incentive_cn,
            );
            criterion.check((us - us_general).abs() < 1e-12, || {
                format!("US identity gap {} at {profile:?}", (us - us_general).abs())
            });

            let cn = scenario.eval_cn_perfect(&profile).unwrap();
            let cn_general = eval_general_cn(
                profile.u_win_cn,
                profile.u_lose_cn(),
                profile.u_status_cn(),
                &scenario.capabilities,
                &scenario.incentive_us,
            );
            criterion.check((cn - cn_general).abs() < 1e-12, || {
                format!("CN identity gap {} at {profile:?}", (cn - cn_general).abs())
            });
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    criterion.check(checked == 1000, || format!("checked {checked} profiles"));
    criterion.check(elapsed.as_secs_f64() < 1.0, || {
        format!("identity sweep took {elapsed:?}")
    });
    criterion.finish();
}

#[test]
fn c2_proposition_1_extrema() {
    let mut criterion = Criterion::new("C2 proposition-1");
    let scenario = corpus::reference();
    let (min, max) = solve_extrema(Player::Us, InfoMode::Perfect, &scenario, 1.0).unwrap();

    criterion.check(min.attained, || "minimum not attained".into());
    criterion.check(min.arg.u_win_us == 1.0, || {
        format!("argmin {} != c_low", min.arg.u_win_us)
    });
    let formula = {
        let incentive = &scenario.incentive_cn;
        2.0 * 0.75 * 1.0 + (1.0 - 2.0 * 0.75) * 20.0 * incentive.value(1.0)
    };
    criterion.check((formula - P1_MIN).abs() < 1e-12, || {
        format!("frozen oracle drifted: {formula} vs {P1_MIN}")
    });
    criterion.check((min.numeric_value - formula).abs() < 1e-4, || {
        format!(
            "numeric minimum {} vs closed form {formula}",
            min.numeric_value
        )
    });
    criterion.check(min.numeric_value < 0.0, || {
        format!("minimum {} not negative", min.numeric_value)
    });
    criterion.check(!max.attained, || {
        "maximum should be flagged unattained".into()
    });
    criterion.finish();
}

#[test]
fn c3_proposition_2_extrema_and_best_response() {
    let mut criterion = Criterion::new("C3 proposition-2");
    let scenario = corpus::reference();
    let (min, max) = solve_extrema(Player::Cn, InfoMode::Perfect, &scenario, 1.0).unwrap();

    criterion.check(max.attained && max.arg.u_win_cn == 1.0, || {
        format!("argmax {:?} (attained {})", max.arg, max.attained)
    });
    criterion.check((max.numeric_value - P2_MAX).abs() < 1e-4, || {
        format!("numeric maximum {} vs {P2_MAX}", max.numeric_value)
    });
    criterion.check(max.numeric_value > 0.0, || {
        format!("maximum {} not positive", max.numeric_value)
    });

    criterion.check(min.attained && min.arg.u_win_cn == 5.0, || {
        format!("argmin {:?} (attained {})", min.arg, min.attained)
    });
    criterion.check((min.numeric_value - P2_MIN).abs() < 1e-4, || {
        format!("numeric minimum {} vs {P2_MIN}", min.numeric_value)
    });

    let response = best_response(Player::Cn, InfoMode::Perfect, &scenario, 1.0).unwrap();
    criterion.check(response.exists, || "CN best response should exist".into());
    criterion.check(response.arg.is_some_and(|a| (a - 1.0).abs() < 1e-9), || {
        format!("CN best response arg {:?} != c_low", response.arg)
    });
    criterion.finish();
}

#[test]
fn c4_propositions_3_and_4_offsets() {
    let mut criterion = Criterion::new("C4 propositions-3-4");
    let perfect = corpus::reference();
    let noisy = corpus::reference_with_noise();

    // Every incomplete-mode extremum sits C_opponent * E[shift] above its
    // perfect-mode counterpart; E[shift] = 0.05 for the 0.1 z shifts.
    for (player, offset) in [(Player::Us, 20.0 * 0.05), (Player::Cn, 60.0 * 0.05)] {
        let (pmin, pmax) = solve_extrema(player, InfoMode::Perfect, &perfect, 1.0).unwrap();
        let (imin, imax) = solve_extrema(player, InfoMode::Incomplete, &noisy, 1.0).unwrap();
        criterion.check(
            (imin.numeric_value - (pmin.numeric_value + offset)).abs() < 2e-3,
            || {
                format!(
                    "{player} min offset: {} vs {} + {offset}",
                    imin.numeric_value, pmin.numeric_value
                )
            },
        );
        criterion.check(
            (imax.numeric_value - (pmax.numeric_value + offset)).abs() < 2e-3,
            || {
                format!(
                    "{player} max offset: {} vs {} + {offset}",
                    imax.numeric_value, pmax.numeric_value
                )
            },
        );
    }

    let (p3min, _) = solve_extrema(Player::Us, InfoMode::Incomplete, &noisy, 1.0).unwrap();
    criterion.check((p3min.numeric_value - (P1_MIN + 1.0)).abs() < 2e-3, || {
        format!("P3 minimum {} vs {}", p3min.numeric_value, P1_MIN + 1.0)
    });
    let (_, p4max) = solve_extrema(Player::Cn, InfoMode::Incomplete, &noisy, 1.0).unwrap();
    criterion.check((p4max.numeric_value - (P2_MAX + 3.0)).abs() < 2e-3, || {
        format!("P4 maximum {} vs {}", p4max.numeric_value, P2_MAX + 3.0)
    });

    let us = best_response(Player::Us, InfoMode::Incomplete, &noisy, 1.0).unwrap();
    criterion.check(!us.exists, || {
        "US best response should stay unattained".into()
    });
    let cn = best_response(Player::Cn, InfoMode::Incomplete, &noisy, 1.0).unwrap();
    criterion.check(
        cn.exists && cn.arg.is_some_and(|a| (a - 1.0).abs() < 1e-9),
        || format!("CN best response {cn:?} should stay attained at c_low"),
    );
    criterion.finish();
}

#[test]
fn c5_gradient_suite() {
    let mut criterion = Criterion::new("C5 gradients");
    let noisy = corpus::reference_with_noise();
    for player in [Player::Us, Player::Cn] {
        for mode in [InfoMode::Perfect, InfoMode::Incomplete] {
            let report = gradient_check(player, mode, &noisy, 100).unwrap();
            criterion.check(report.max_abs_gap < 1e-6, || {
                format!(
                    "{player}/{mode}: |fd - analytic| = {} at u = {}",
                    report.max_abs_gap, report.worst_u
                )
            });
            criterion.check(report.all_negative, || {
                format!("{player}/{mode}: max partial {}", report.max_partial)
            });
        }
    }
    criterion.finish();
}

#[test]
fn c6_incentive_axioms() {
    let mut criterion = Criterion::new("C6 incentive-axioms");
    // Shipped family configurations: (family, owner capability, half width).
    let shipped = [
        (IncentiveFamily::OddSigmoid { slope: 0.2 }, 20.0, 5.0),
        (IncentiveFamily::OddSigmoid { slope: 0.2 }, 60.0, 5.0),
        (IncentiveFamily::OddSigmoid { slope: 0.1 }, 100.0, 12.0),
        (IncentiveFamily::OddArctanLike { slope: 0.2 }, 20.0, 5.0),
        (
            IncentiveFamily::LinearPlusSigmoid {
                gamma: 0.5,
                slope: 0.2,
                c_ref: 5.0,
            },
            20.0,
            5.0,
        ),
        (
            IncentiveFamily::LinearPlusSigmoid {
                gamma: 0.75,
                slope: 0.1,
                c_ref: 8.0,
            },
            30.0,
            8.0,
        ),
    ];
    for (family, capability, half_width) in shipped {
        let spec = IncentiveSpec::new(family, capability);
        let report = spec.validate(half_width);
        criterion.check(report.passed(), || {
            format!("{family:?} (C = {capability}) failed: {report:?}")
        });
        // Oddness at tighter resolution than the validator grid.
        for i in 0..2000 {
            let u = -half_width + 2.0 * half_width * i as f64 / 1999.0;
            let asym = (spec.value(u) + spec.value(-u)).abs();
            if asym >= 1e-12 {
                criterion.check(false, || format!("oddness {asym} at u = {u}"));
                break;
            }
        }
    }

    let bad = IncentiveSpec::new(IncentiveFamily::OddSigmoid { slope: 1.5 }, 20.0);
    criterion.check(!bad.validate(5.0).passed(), || {
        "slope 1.5 should fail the upper derivative bound".into()
    });
    let mut broken = corpus::reference();
    broken.incentive_cn = IncentiveSpec::new(IncentiveFamily::OddSigmoid { slope: 1.5 }, 20.0);
    criterion.check(broken.validate().is_err(), || {
        "scenario with slope 1.5 should be rejected".into()
    });
    criterion.finish();
}

#[test]
fn c7_integration_agreement() {
    let mut criterion = Criterion::new("C7 integration");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noisy = corpus::reference_with_noise();
    let incentives = [noisy.incentive_cn, noisy.incentive_us];
    let mut noises = vec![noisy.noise_cn.unwrap(), noisy.noise_us.unwrap()];
    for _ in 0..4 {
        noises.push(corpus::random_noise(&mut rng));
    }

    for incentive in &incentives {
        for noise in &noises {
            // pdf normalization under both deterministic rules.
            let mass_s = simpson_unit(|z| noise.pdf.density(z).unwrap(), 257).unwrap();
            let mass_g =
                netgain_core::integrate::gauss_legendre_unit(|z| noise.pdf.density(z).unwrap(), 64)
                    .unwrap();
            criterion.check((mass_s - 1.0).abs() < 1e-9, || {
                format!("Simpson pdf mass {mass_s}")
            });
            criterion.check((mass_g - 1.0).abs() < 1e-9, || {
                format!("Gauss pdf mass {mass_g}")
            });

            for u in [-4.0, -1.0, -0.2, 0.0, 0.6, 2.5, 5.0] {
                let s = expect_noisy_incentive(incentive, noise, u, &IntegratorConfig::simpson(9))
                    .unwrap();
                let g = expect_noisy_incentive(incentive, noise, u, &IntegratorConfig::gauss(9))
                    .unwrap();
                criterion.check((s - g).abs() < 1e-8, || {
                    format!("Simpson {s} vs Gauss {g} at u = {u}")
                });

                let check =
                    mc_cross_check(incentive, noise, u, &IntegratorConfig::simpson(1234)).unwrap();
                criterion.check(
                    (check.quadrature - check.mc_estimate).abs() <= 4.0 * check.mc_stderr,
                    || {
                        format!(
                            "MC {} +/- {} vs quadrature {} at u = {u}",
                            check.mc_estimate, check.mc_stderr, check.quadrature
                        )
                    },
                );
            }
        }
    }
    criterion.finish();
}

#[test]
fn c8_robustness_and_determinism() {
    let mut criterion = Criterion::new("C8 robustness-determinism");
    let base = ScenarioDocument::from_scenario(&corpus::reference_with_noise()).to_json();

    // 100 deterministic corruptions; each must produce a structured error,
    // never a panic or a silently-accepted document.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    use rand::Rng;
    for case in 0..100 {
        let text = match case % 10 {
            0 => base[..rng.random_range(1..base.len() - 1)].to_string(),
            1 => base.replace("odd-sigmoid", "odd-gaussian"),
            2 => base.replace("\"c_us\": 60.0", "\"c_us\": \"sixty\""),
            3 => base.replace("\"c_us\": 60.0", "\"c_us\": 10.0"),
            4 => base.replace("\"c_high\": 5.0", "\"c_high\": -5.0"),
            5 => base.replace("\"nodes\": 257", "\"nodes\": 256"),
            6 => base.replace("\"capabilities\"", "\"capability_matrix\""),
            7 => base.replace("\"scale\": 0.1", "\"scale\": 0.0"),
            8 => {
                // drop the noise_us block: one-sided noise
                let doc: serde_json::Value = serde_json::from_str(&base).unwrap();
                let mut doc = doc;
                doc.as_object_mut().unwrap().remove("noise_us");
                serde_json::to_string(&doc).unwrap()
            }
            _ => base.replace("\"slope\": 0.2", "\"slope\": 1.9"),
        };
        let result = load_scenario(&text);
        criterion.check(result.is_err(), || {
            format!("corruption case {case} unexpectedly loaded")
        });
        if let Err(err) = result {
            criterion.check(!err.to_string().is_empty(), || {
                format!("case {case} produced an empty diagnostic")
            });
        }
    }

    // Identical seeded runs are byte-identical, JSON and CSV alike.
    let scenario = corpus::reference_with_noise();
    let a = verify_propositions(&scenario).unwrap();
    let b = verify_propositions(&scenario).unwrap();
    for format in [ReportFormat::Json, ReportFormat::Csv] {
        let ra = emit_report(&a, format);
        let rb = emit_report(&b, format);
        criterion.check(ra.as_bytes() == rb.as_bytes(), || {
            "re-run produced different report bytes".into()
        });
    }
    let mc_a = mc_cross_check(
        &scenario.incentive_cn,
        scenario.noise_cn.as_ref().unwrap(),
        1.0,
        &scenario.settings.integrator,
    )
    .unwrap();
    let mc_b = mc_cross_check(
        &scenario.incentive_cn,
        scenario.noise_cn.as_ref().unwrap(),
        1.0,
        &scenario.settings.integrator,
    )
    .unwrap();
    criterion.check(
        mc_a.mc_estimate.to_bits() == mc_b.mc_estimate.to_bits(),
        || "seeded Monte Carlo is not bit-stable".into(),
    );
    criterion.finish();
}
