//! Incentive-function families, shift functions, and densities.
//!
//! An incentive function maps an opponent utility to the inclination to
//! retaliate. Every family here is an increasing odd map valued in (-1, 1),
//! and each instance must keep its derivative inside (1/C, 1) on the
//! operating interval, where C is the owning player's capability. The
//! validators in this module are the single source of truth for those
//! axioms; nothing else in the engine re-derives them.

use serde::{Deserialize, Serialize};

use crate::error::Violation;
use crate::integrate::tanh_sinh_unit;

/// Grid resolution used by the axiom validators (1000 intervals).
pub const VALIDATION_GRID: usize = 1001;

/// Tolerance for the oddness check: |I(u) + I(-u)|.
pub const ODDNESS_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Incentive families
// ---------------------------------------------------------------------------

/// Parametric family of an incentive function.
///
/// The serialized form is `{"family": "...", "params": {...}}`; the family
/// names below appear verbatim in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum IncentiveFamily {
    /// Saturating odd map `tanh(slope * u)`; slope is the derivative at 0.
    #[serde(rename = "odd-sigmoid")]
    OddSigmoid { slope: f64 },
    /// `(2/pi) * atan((pi/2) * slope * u)`; heavier tails than the sigmoid.
    #[serde(rename = "odd-arctan-like")]
    OddArctanLike { slope: f64 },
    /// `gamma * u / c_ref + (1 - gamma) * tanh(slope * u)`.
    ///
    /// The linear term guarantees a derivative of at least `gamma / c_ref`
    /// everywhere, which pure saturating maps cannot do on wide intervals.
    #[serde(rename = "linear-plus-sigmoid")]
    LinearPlusSigmoid { gamma: f64, slope: f64, c_ref: f64 },
}

impl IncentiveFamily {
    /// Closed-form value of the family at `u`.
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Self::OddSigmoid { slope } => (slope * u).tanh(),
            Self::OddArctanLike { slope } => {
                std::f64::consts::FRAC_2_PI * (std::f64::consts::FRAC_PI_2 * slope * u).atan()
            }
            Self::LinearPlusSigmoid {
                gamma,
                slope,
                c_ref,
            } => gamma * u / c_ref + (1.0 - gamma) * (slope * u).tanh(),
        }
    }

    /// Analytic first derivative of the family at `u`.
    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            Self::OddSigmoid { slope } => {
                let t = (slope * u).tanh();
                slope * (1.0 - t * t)
            }
            Self::OddArctanLike { slope } => {
                let s = std::f64::consts::FRAC_PI_2 * slope * u;
                slope / (1.0 + s * s)
            }
            Self::LinearPlusSigmoid {
                gamma,
                slope,
                c_ref,
            } => {
                let t = (slope * u).tanh();
                gamma / c_ref + (1.0 - gamma) * slope * (1.0 - t * t)
            }
        }
    }
}

/// An incentive function bound to the capability that scales its cost.
///
/// `owner_capability` is the C whose reciprocal bounds the derivative from
/// below: China's capability for the incentive aimed at the US and vice
/// versa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncentiveSpec {
    pub family: IncentiveFamily,
    pub owner_capability: f64,
}

impl IncentiveSpec {
    pub fn new(family: IncentiveFamily, owner_capability: f64) -> Self {
        Self {
            family,
            owner_capability,
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        self.family.value(u)
    }

    pub fn derivative(&self, u: f64) -> f64 {
        self.family.derivative(u)
    }

    /// Check every axiom on the operating interval `[-half_width, half_width]`.
    ///
    /// Axioms are enforced on the operating interval rather than all reals:
    /// only that interval is reachable by the evaluators, and saturating
    /// families cannot hold the lower derivative bound globally.
    pub fn validate(&self, half_width: f64) -> ValidationReport {
        let mut report = ValidationReport::new("incentive");
        let usable = half_width > 0.0 && self.owner_capability > 0.0;
        if !usable {
            report.checks.push(AxiomCheck {
                axiom: Axiom::DerivativeLowerBound,
                pass: false,
                worst_u: f64::NAN,
                observed: f64::NAN,
                bound: f64::NAN,
                margin: f64::NAN,
            });
            report
                .notes
                .push("operating interval and capability must be positive".into());
            return report;
        }

        let n = VALIDATION_GRID;
        let us: Vec<f64> = (0..n)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
            .collect();
        let values: Vec<f64> = us.iter().map(|&u| self.value(u)).collect();

        // Oddness: worst |I(u) + I(-u)| over the grid. NaN counts as worst.
        let mut worst_odd = (0.0f64, 0.0f64);
        for (&u, &v) in us.iter().zip(&values) {
            let asym = (v + self.value(-u)).abs();
            if asym > worst_odd.1 || asym.is_nan() {
                worst_odd = (u, asym);
            }
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::Odd,
            pass: worst_odd.1 <= ODDNESS_TOL,
            worst_u: worst_odd.0,
            observed: worst_odd.1,
            bound: ODDNESS_TOL,
            margin: ODDNESS_TOL - worst_odd.1,
        });

        // Strict increase between consecutive grid nodes.
        let mut worst_step = (us[0], f64::INFINITY);
        for i in 1..n {
            let step = values[i] - values[i - 1];
            if step < worst_step.1 || step.is_nan() {
                worst_step = (us[i], step);
            }
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::StrictlyIncreasing,
            pass: worst_step.1 > 0.0,
            worst_u: worst_step.0,
            observed: worst_step.1,
            bound: 0.0,
            margin: worst_step.1,
        });

        // Range (-1, 1) via the largest magnitude (families are monotone,
        // still scanned in full so broken parameterizations surface).
        let mut worst_range = (0.0f64, 0.0f64);
        for (&u, &v) in us.iter().zip(&values) {
            if v.abs() > worst_range.1 || v.is_nan() {
                worst_range = (u, v.abs());
            }
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::Range,
            pass: worst_range.1 < 1.0,
            worst_u: worst_range.0,
            observed: worst_range.1,
            bound: 1.0,
            margin: 1.0 - worst_range.1,
        });

        // Derivative bounds 1/C < I' < 1 on the same grid.
        let lower = 1.0 / self.owner_capability;
        let mut min_d = (us[0], f64::INFINITY);
        let mut max_d = (us[0], f64::NEG_INFINITY);
        for &u in &us {
            let d = self.derivative(u);
            if d < min_d.1 || d.is_nan() {
                min_d = (u, d);
            }
            if d > max_d.1 || d.is_nan() {
                max_d = (u, d);
            }
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::DerivativeLowerBound,
            pass: min_d.1 > lower,
            worst_u: min_d.0,
            observed: min_d.1,
            bound: lower,
            margin: min_d.1 - lower,
        });
        report.checks.push(AxiomCheck {
            axiom: Axiom::DerivativeUpperBound,
            pass: max_d.1 < 1.0,
            worst_u: max_d.0,
            observed: max_d.1,
            bound: 1.0,
            margin: 1.0 - max_d.1,
        });

        report
    }
}

// ---------------------------------------------------------------------------
// Shift functions (incomplete-information perturbations)
// ---------------------------------------------------------------------------

/// Non-negative, strictly increasing perturbation of an incentive, driven by
/// a random factor on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum ShiftFamily {
    /// `offset + scale * z`.
    #[serde(rename = "affine")]
    Affine { offset: f64, scale: f64 },
    /// `offset + scale * z^exponent`.
    #[serde(rename = "power")]
    Power {
        offset: f64,
        scale: f64,
        exponent: f64,
    },
}

impl ShiftFamily {
    pub(crate) fn value_unchecked(&self, z: f64) -> f64 {
        match *self {
            Self::Affine { offset, scale } => offset + scale * z,
            Self::Power {
                offset,
                scale,
                exponent,
            } => offset + scale * z.powf(exponent),
        }
    }

    /// Evaluate the shift; `z` must lie in [0, 1].
    pub fn value(&self, z: f64) -> Result<f64, crate::error::CoreError> {
        if !(0.0..=1.0).contains(&z) {
            return Err(crate::error::CoreError::Domain(format!(
                "shift argument {z} outside [0, 1]"
            )));
        }
        Ok(self.value_unchecked(z))
    }

    /// Check non-negativity at 0 and strict increase on a dense grid.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("shift");
        let n = VALIDATION_GRID;
        let at_zero = self.value_unchecked(0.0);
        report.checks.push(AxiomCheck {
            axiom: Axiom::NonNegative,
            pass: at_zero >= 0.0,
            worst_u: 0.0,
            observed: at_zero,
            bound: 0.0,
            margin: at_zero,
        });

        let mut prev = at_zero;
        let mut worst = (0.0f64, f64::INFINITY);
        for i in 1..n {
            let z = i as f64 / (n - 1) as f64;
            let v = self.value_unchecked(z);
            let step = v - prev;
            if step < worst.1 || step.is_nan() {
                worst = (z, step);
            }
            prev = v;
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::StrictlyIncreasing,
            pass: worst.1 > 0.0,
            worst_u: worst.0,
            observed: worst.1,
            bound: 0.0,
            margin: worst.1,
        });
        report
    }
}

// ---------------------------------------------------------------------------
// Probability densities on [0, 1]
// ---------------------------------------------------------------------------

/// Density family; `polynomial-bump` is proportional to
/// `z^(a-1) * (1-z)^(b-1)` and is normalized numerically at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum PdfFamily {
    #[serde(rename = "uniform")]
    Uniform {},
    #[serde(rename = "polynomial-bump")]
    PolynomialBump { a: f64, b: f64 },
}

/// A validated density with its normalization constant cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfSpec {
    family: PdfFamily,
    norm: f64,
}

impl PdfSpec {
    /// Build a normalized density. The one-time normalization uses a
    /// double-exponential rule so endpoint behavior of valid exponents
    /// (a, b >= 1, possibly fractional) does not degrade the constant.
    pub fn new(family: PdfFamily) -> Result<Self, Violation> {
        match family {
            PdfFamily::Uniform {} => Ok(Self { family, norm: 1.0 }),
            PdfFamily::PolynomialBump { a, b } => {
                if !(a.is_finite() && a >= 1.0) {
                    return Err(Violation::new(
                        "pdf.params.a",
                        format!("shape exponent must be a finite real >= 1, got {a}"),
                    ));
                }
                if !(b.is_finite() && b >= 1.0) {
                    return Err(Violation::new(
                        "pdf.params.b",
                        format!("shape exponent must be a finite real >= 1, got {b}"),
                    ));
                }
                let norm = tanh_sinh_unit(|z| z.powf(a - 1.0) * (1.0 - z).powf(b - 1.0));
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(Violation::new(
                        "pdf.params",
                        format!("unnormalized density integrates to {norm}"),
                    ));
                }
                Ok(Self { family, norm })
            }
        }
    }

    pub fn family(&self) -> PdfFamily {
        self.family
    }

    /// Cached normalization constant (integral of the unnormalized form).
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub(crate) fn density_unchecked(&self, z: f64) -> f64 {
        match self.family {
            PdfFamily::Uniform {} => 1.0,
            PdfFamily::PolynomialBump { a, b } => {
                z.powf(a - 1.0) * (1.0 - z).powf(b - 1.0) / self.norm
            }
        }
    }

    /// Density value at `z`; `z` must lie in the support [0, 1].
    pub fn density(&self, z: f64) -> Result<f64, crate::error::CoreError> {
        if !(0.0..=1.0).contains(&z) {
            return Err(crate::error::CoreError::Domain(format!(
                "density argument {z} outside the support [0, 1]"
            )));
        }
        Ok(self.density_unchecked(z))
    }

    /// Non-negativity on a dense grid plus a re-integration of the
    /// normalized density against the cached constant.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("pdf");
        let n = VALIDATION_GRID;
        let mut worst = (0.0f64, f64::INFINITY);
        for i in 0..n {
            let z = i as f64 / (n - 1) as f64;
            let v = self.density_unchecked(z);
            if v < worst.1 || v.is_nan() {
                worst = (z, v);
            }
        }
        report.checks.push(AxiomCheck {
            axiom: Axiom::NonNegative,
            pass: worst.1 >= 0.0,
            worst_u: worst.0,
            observed: worst.1,
            bound: 0.0,
            margin: worst.1,
        });

        let total = tanh_sinh_unit(|z| self.density_unchecked(z));
        let err = (total - 1.0).abs();
        report.checks.push(AxiomCheck {
            axiom: Axiom::Normalized,
            pass: err <= 1e-9,
            worst_u: f64::NAN,
            observed: total,
            bound: 1e-9,
            margin: 1e-9 - err,
        });
        report
    }
}

// ---------------------------------------------------------------------------
// Noise specification (pdf + shift)
// ---------------------------------------------------------------------------

/// One player's incomplete-information model: the random factor's density
/// together with the shift it applies to the opponent-facing incentive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub pdf: PdfSpec,
    pub shift: ShiftFamily,
}

impl NoiseSpec {
    pub fn new(pdf: PdfSpec, shift: ShiftFamily) -> Self {
        Self { pdf, shift }
    }

    /// Component validations merged into one report.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.pdf.validate();
        report.subject = "noise".into();
        let shift = self.shift.validate();
        report.checks.extend(shift.checks);
        report
    }
}

/// Range of the shifted incentive `I(u) - M(z)` over the operating interval.
///
/// The base function is confined to (-1, 1); the shifted one may leave it.
/// That is reported as a note, never as a failure: the axioms constrain the
/// base incentive only.
pub fn shifted_range(incentive: &IncentiveSpec, noise: &NoiseSpec, half_width: f64) -> (f64, f64) {
    let lo = incentive.value(-half_width) - noise.shift.value_unchecked(1.0);
    let hi = incentive.value(half_width) - noise.shift.value_unchecked(0.0);
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

/// Axioms checked by the validators in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Odd,
    StrictlyIncreasing,
    Range,
    DerivativeLowerBound,
    DerivativeUpperBound,
    NonNegative,
    Normalized,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Odd => "odd",
            Self::StrictlyIncreasing => "strictly-increasing",
            Self::Range => "range",
            Self::DerivativeLowerBound => "derivative-lower-bound",
            Self::DerivativeUpperBound => "derivative-upper-bound",
            Self::NonNegative => "non-negative",
            Self::Normalized => "normalized",
        };
        f.write_str(s)
    }
}

/// Outcome of a single axiom check. `margin` is positive when the axiom
/// holds, and measures the distance to its bound; `worst_u` is the grid
/// point where the axiom came closest to failing (or failed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub pass: bool,
    pub worst_u: f64,
    pub observed: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Per-axiom pass/fail report. Never silently passes: a failed check keeps
/// the violating location and margin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<AxiomCheck>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    fn new(subject: &str) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Failed checks as field-path violations under `field`.
    pub fn violations(&self, field: &str) -> Vec<Violation> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                Violation::new(
                    field,
                    format!(
                        "{} axiom failed at u = {:.6}: observed {:.6e}, bound {:.6e}",
                        c.axiom, c.worst_u, c.observed, c.bound
                    ),
                )
            })
            .collect()
    }
}
