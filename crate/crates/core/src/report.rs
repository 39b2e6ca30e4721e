//! Structured outcome of a single check.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
    /// Statistical comparison of two sample means.
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Which residual the tolerance is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Abs,
    Rel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub mode: Mode,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub measure: Measure,
    pub status: Status,
    pub points_checked: usize,
    pub wall_time_ms: f64,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Report whose status is the negation of the inner check, used for
    /// negative controls: it passes when the perturbed residual exceeds `floor`.
    pub fn expect_failure(case: impl Into<String>, inner: &VerificationReport, floor: f64) -> Self {
        let r = match inner.measure {
            Measure::Abs => inner.max_abs_residual,
            Measure::Rel => inner.max_rel_residual,
        };
        VerificationReport {
            case: case.into(),
            mode: inner.mode,
            max_abs_residual: inner.max_abs_residual,
            max_rel_residual: inner.max_rel_residual,
            tolerance: floor,
            measure: inner.measure,
            status: if r > floor { Status::Pass } else { Status::Fail },
            points_checked: inner.points_checked,
            wall_time_ms: inner.wall_time_ms,
            seed: inner.seed,
            notes: vec![format!("negative control: residual must exceed {floor:e}")],
        }
    }
}

/// Running max of absolute and relative residuals.
#[derive(Clone, Debug, Default)]
pub struct Residuals {
    pub max_abs: f64,
    pub max_rel: f64,
    /// Relative residual against max(|lhs|, |rhs|) alone, kept when the
    /// conditioned form is used.
    pub max_rel_raw: f64,
    pub points: usize,
}

impl Residuals {
    pub fn new() -> Self {
        Self::default()
    }

    /// Relative residual uses `max(|lhs|, |rhs|, 1e-300)` as denominator.
    pub fn push(&mut self, lhs: Complex64, rhs: Complex64) {
        let d = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        self.push_raw(d, d / scale);
    }

    /// Exact when `S` is: the difference is formed before rounding.
    pub fn push_scalar<S: Scalar>(&mut self, lhs: &S, rhs: &S) {
        let d = (lhs.clone() - rhs.clone()).modulus();
        let scale = lhs.modulus().max(rhs.modulus()).max(1e-300);
        self.push_raw(d, d / scale);
    }

    /// Relative residual against `max(|lhs|, |rhs|, magnitude)`, where
    /// `magnitude` is the size of the summands that produced the two sides.
    /// Where the identity's value is itself 0 (or cancels far below its
    /// summands) rounding is all that is left, and this measures it on the
    /// scale at which it was made.
    pub fn push_conditioned(&mut self, lhs: Complex64, rhs: Complex64, magnitude: f64) {
        let d = (lhs - rhs).norm();
        let plain = lhs.norm().max(rhs.norm());
        let raw = d / plain.max(1e-300);
        self.max_rel_raw = if raw.is_nan() { f64::INFINITY } else { self.max_rel_raw.max(raw) };
        self.push_raw(d, d / plain.max(magnitude).max(1e-300));
    }

    pub fn push_raw(&mut self, abs: f64, rel: f64) {
        self.points += 1;
        self.max_rel_raw = if rel.is_nan() { f64::INFINITY } else { self.max_rel_raw.max(rel) };
        // NaN must never hide a failure
        self.max_abs = if abs.is_nan() { f64::INFINITY } else { self.max_abs.max(abs) };
        self.max_rel = if rel.is_nan() { f64::INFINITY } else { self.max_rel.max(rel) };
    }

    pub fn merge(mut self, other: &Residuals) -> Self {
        self.max_abs = self.max_abs.max(other.max_abs);
        self.max_rel = self.max_rel.max(other.max_rel);
        self.max_rel_raw = self.max_rel_raw.max(other.max_rel_raw);
        self.points += other.points;
        self
    }

    pub fn report(&self, case: impl Into<String>, mode: Mode, measure: Measure, tolerance: f64) -> VerificationReport {
        let r = match measure {
            Measure::Abs => self.max_abs,
            Measure::Rel => self.max_rel,
        };
        VerificationReport {
            case: case.into(),
            mode,
            max_abs_residual: self.max_abs,
            max_rel_residual: self.max_rel,
            tolerance,
            measure,
            status: if r <= tolerance { Status::Pass } else { Status::Fail },
            points_checked: self.points,
            wall_time_ms: 0.0,
            seed: None,
            notes: if self.max_rel_raw > self.max_rel {
                vec![format!(
                    "relative to max(|lhs|, |rhs|) alone the largest residual is {:e}; the reported one is conditioned on the summand size",
                    self.max_rel_raw
                )]
            } else {
                Vec::new()
            },
        }
    }
}

/// Runs `f` and stamps the elapsed wall time on its report.
pub fn timed<E>(f: impl FnOnce() -> Result<VerificationReport, E>) -> Result<VerificationReport, E> {
    let t0 = Instant::now();
    let mut r = f()?;
    r.wall_time_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_tracks_tolerance() {
        let mut r = Residuals::new();
        r.push(Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-12, 0.0));
        assert!(r.report("x", Mode::Float, Measure::Rel, 1e-9).passed());
        assert!(!r.report("x", Mode::Float, Measure::Abs, 0.0).passed());
        r.push(Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0));
        assert!(!r.report("x", Mode::Float, Measure::Rel, 1.0).passed());
    }

    #[test]
    fn zero_over_zero_is_zero() {
        let mut r = Residuals::new();
        r.push(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(r.max_rel, 0.0);
    }
}
