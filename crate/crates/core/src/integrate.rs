//! Expectations over the unit interval.
//!
//! Deterministic quadrature (composite Simpson, Gauss-Legendre) carries the
//! engine; seeded Monte Carlo exists as an independent-path cross-check and
//! is never the solver's input. Every node evaluation is checked for
//! non-finite values so a misconfigured integrand aborts with the offending
//! location instead of propagating NaN into reports.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Violation};
use crate::incentives::{IncentiveSpec, NoiseSpec};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Quadrature method for expectation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegratorMethod {
    #[serde(rename = "composite-simpson")]
    CompositeSimpson,
    #[serde(rename = "gauss-legendre")]
    GaussLegendre,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

/// Node/sample budget and seed for the expectation operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: IntegratorMethod,
    pub nodes: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl IntegratorConfig {
    pub const DEFAULT_SIMPSON_NODES: usize = 257;
    pub const DEFAULT_GAUSS_NODES: usize = 64;
    pub const DEFAULT_MC_SAMPLES: usize = 200_000;

    pub fn simpson(seed: u64) -> Self {
        Self {
            method: IntegratorMethod::CompositeSimpson,
            nodes: Self::DEFAULT_SIMPSON_NODES,
            mc_samples: Self::DEFAULT_MC_SAMPLES,
            seed,
        }
    }

    pub fn gauss(seed: u64) -> Self {
        Self {
            method: IntegratorMethod::GaussLegendre,
            nodes: Self::DEFAULT_GAUSS_NODES,
            mc_samples: Self::DEFAULT_MC_SAMPLES,
            seed,
        }
    }

    pub fn monte_carlo(seed: u64) -> Self {
        Self {
            method: IntegratorMethod::MonteCarlo,
            nodes: Self::DEFAULT_SIMPSON_NODES,
            mc_samples: Self::DEFAULT_MC_SAMPLES,
            seed,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.nodes < 3 {
            out.push(Violation::new(
                "solver.integrator.nodes",
                format!("node count must be >= 3, got {}", self.nodes),
            ));
        }
        if self.method == IntegratorMethod::CompositeSimpson && self.nodes % 2 == 0 {
            out.push(Violation::new(
                "solver.integrator.nodes",
                format!(
                    "composite Simpson needs an odd node count, got {}",
                    self.nodes
                ),
            ));
        }
        if self.mc_samples < 3 {
            out.push(Violation::new(
                "solver.integrator.mc_samples",
                format!("sample count must be >= 3, got {}", self.mc_samples),
            ));
        }
        out
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::simpson(0)
    }
}

// ---------------------------------------------------------------------------
// Quadrature rules on [0, 1]
// ---------------------------------------------------------------------------

/// Composite Simpson rule with an odd number of nodes.
pub fn simpson_unit(f: impl Fn(f64) -> f64, nodes: usize) -> Result<f64, CoreError> {
    debug_assert!(nodes >= 3 && nodes % 2 == 1);
    let h = 1.0 / (nodes - 1) as f64;
    let mut sum = 0.0;
    for i in 0..nodes {
        let z = if i == nodes - 1 { 1.0 } else { i as f64 * h };
        let v = f(z);
        if !v.is_finite() {
            return Err(CoreError::NonFiniteIntegrand { z, value: v });
        }
        let w = if i == 0 || i == nodes - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * v;
    }
    Ok(sum * h / 3.0)
}

/// Gauss-Legendre rule mapped to [0, 1].
pub fn gauss_legendre_unit(f: impl Fn(f64) -> f64, nodes: usize) -> Result<f64, CoreError> {
    debug_assert!(nodes >= 2);
    let mut sum = 0.0;
    for (x, w) in legendre_nodes(nodes) {
        let z = 0.5 * (x + 1.0);
        let v = f(z);
        if !v.is_finite() {
            return Err(CoreError::NonFiniteIntegrand { z, value: v });
        }
        sum += 0.5 * w * v;
    }
    Ok(sum)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], found by
/// Newton iteration on the three-term recurrence.
fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 1..=n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let pk = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = pk;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                // settle dp at the converged abscissa
                let (mut q0, mut q1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let qk = ((2.0 * kf - 1.0) * x * q1 - (kf - 1.0) * q0) / kf;
                    q0 = q1;
                    q1 = qk;
                }
                dp = nf * (x * q1 - q0) / (x * x - 1.0);
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let is_center = n % 2 == 1 && 2 * i == n + 1;
        out.push((-x, w));
        if !is_center {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Double-exponential rule on (0, 1); used for one-time density
/// normalization where endpoint behavior must not degrade the constant.
pub(crate) fn tanh_sinh_unit(f: impl Fn(f64) -> f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let t_max = 4.0;
    let mut previous = f64::NAN;
    for level in 4..=10u32 {
        let h = 0.5f64.powi(level as i32 - 2);
        let steps = (t_max / h) as i64;
        let mut sum = 0.0;
        for k in -steps..=steps {
            let t = k as f64 * h;
            let s = FRAC_PI_2 * t.sinh();
            let x = 0.5 + 0.5 * s.tanh();
            let c = s.cosh();
            let w = h * FRAC_PI_2 * 0.5 * t.cosh() / (c * c);
            if w < 1e-320 {
                continue;
            }
            let v = f(x);
            if v.is_finite() {
                sum += w * v;
            }
        }
        if (sum - previous).abs() <= 1e-13 * sum.abs().max(1.0) {
            return sum;
        }
        previous = sum;
    }
    previous
}

// ---------------------------------------------------------------------------
// Seeded Monte Carlo
// ---------------------------------------------------------------------------

/// Mean and standard error of a seeded Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Estimate `E_f[g]` by uniform sampling weighted with the density.
///
/// The stream is derived from (seed, tag) so concurrent callers get
/// reproducible, scheduling-independent results. Welford's update keeps the
/// mean exact for constant integrands, which is what makes the
/// zero-variance contract (`stderr == 0`) hold bit-for-bit.
pub fn mc_expect_over_pdf(
    g: impl Fn(f64) -> f64,
    pdf: &crate::incentives::PdfSpec,
    samples: usize,
    seed: u64,
    tag: u64,
) -> Result<McEstimate, CoreError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);

    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        let z: f64 = rng.random();
        let v = g(z) * pdf.density_unchecked(z);
        if !v.is_finite() {
            return Err(CoreError::NonFiniteIntegrand { z, value: v });
        }
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let variance = if samples > 1 {
        m2 / (samples - 1) as f64
    } else {
        0.0
    };
    Ok(McEstimate {
        value: mean,
        stderr: (variance / samples as f64).sqrt(),
        samples,
    })
}

/// Fold a call-site tag and an argument into a ChaCha stream id.
fn stream_tag(purpose: u64, x: f64) -> u64 {
    purpose.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ x.to_bits()
}

const TAG_SHIFT: u64 = 1;
const TAG_NOISY: u64 = 2;
const TAG_CROSS: u64 = 3;

// ---------------------------------------------------------------------------
// Expectation operators
// ---------------------------------------------------------------------------

fn expect_over_pdf(
    g: impl Fn(f64) -> f64,
    noise: &NoiseSpec,
    config: &IntegratorConfig,
    tag: u64,
) -> Result<f64, CoreError> {
    let integrand = |z: f64| g(z) * noise.pdf.density_unchecked(z);
    match config.method {
        IntegratorMethod::CompositeSimpson => simpson_unit(integrand, config.nodes),
        IntegratorMethod::GaussLegendre => gauss_legendre_unit(integrand, config.nodes),
        IntegratorMethod::MonteCarlo => {
            Ok(mc_expect_over_pdf(g, &noise.pdf, config.mc_samples, config.seed, tag)?.value)
        }
    }
}

/// `E_f[M]`: the expected shift under the noise density.
pub fn expect_shift(noise: &NoiseSpec, config: &IntegratorConfig) -> Result<f64, CoreError> {
    expect_over_pdf(
        |z| noise.shift.value_unchecked(z),
        noise,
        config,
        stream_tag(TAG_SHIFT, 0.0),
    )
}

/// `E_f[I(u) - M(z)]`: expectation of the shifted incentive at `u`.
///
/// Integrates the full product rather than splitting off the shift, so the
/// separability identity `E = I(u) - E_f[M]` stays a genuine cross-check.
pub fn expect_noisy_incentive(
    incentive: &IncentiveSpec,
    noise: &NoiseSpec,
    u: f64,
    config: &IntegratorConfig,
) -> Result<f64, CoreError> {
    let base = incentive.value(u);
    expect_over_pdf(
        |z| base - noise.shift.value_unchecked(z),
        noise,
        config,
        stream_tag(TAG_NOISY, u),
    )
}

/// Quadrature value, Monte Carlo estimate, and its standard error for the
/// noisy-incentive expectation at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub quadrature: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
}

/// Independent-path check: deterministic quadrature against seeded Monte
/// Carlo of the same expectation. For validated specs the two agree within
/// four standard errors.
pub fn mc_cross_check(
    incentive: &IncentiveSpec,
    noise: &NoiseSpec,
    u: f64,
    config: &IntegratorConfig,
) -> Result<CrossCheck, CoreError> {
    let deterministic = IntegratorConfig {
        method: if config.method == IntegratorMethod::MonteCarlo {
            IntegratorMethod::CompositeSimpson
        } else {
            config.method
        },
        ..*config
    };
    let quadrature = expect_noisy_incentive(incentive, noise, u, &deterministic)?;
    let base = incentive.value(u);
    let mc = mc_expect_over_pdf(
        |z| base - noise.shift.value_unchecked(z),
        &noise.pdf,
        config.mc_samples,
        config.seed,
        stream_tag(TAG_CROSS, u),
    )?;
    Ok(CrossCheck {
        quadrature,
        mc_estimate: mc.value,
        mc_stderr: mc.stderr,
    })
}
