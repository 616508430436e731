//! Rotational movement-fluency metrics over orientation trajectories.
//!
//! A trajectory of rotation matrices sampled at a fixed period is reduced to
//! a dimensionless jerk index:
//!
//! 1. body-frame angular velocity from relative-step logarithms,
//!    `w_k = vee(log(R_k^T R_{k+1})) / dt`;
//! 2. angular acceleration change as the centered second difference of that
//!    series;
//! 3. rotational path length `d = dt * sum |w_k|`;
//! 4. the index `J = C * dt * sum |a_k|` with the duration-and-amplitude
//!    normalization `C = (N-2)^2 dt^2 / d`.
//!
//! Low values mean smooth movement; erratic, stop-and-go rotation drives the
//! index up. The index is invariant to where the trajectory sits in space
//! (left-composition of a fixed rotation) and nearly invariant to uniform
//! time or amplitude rescaling.

use crate::so3::{log_so3, vee, RotationMatrix};
use nalgebra::Vector3;
use thiserror::Error;

/// Path lengths at or below this (radians) are treated as "no movement":
/// the normalization would divide by it.
pub const PATH_EPS: f64 = 1e-9;

/// Relative steps whose rotation angle comes within this of a half turn have
/// a direction-ambiguous logarithm and are counted in diagnostics.
const AMBIGUOUS_STEP_MARGIN: f64 = 1e-9;

/// Errors from trajectory construction and metric evaluation.
#[derive(Debug, Error)]
pub enum JerkError {
    /// Fewer samples than the differencing scheme needs.
    #[error("trajectory too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    /// Total rotational path below [`PATH_EPS`]; the normalized index is
    /// undefined on a trajectory that does not move.
    #[error("degenerate trajectory: rotational path length {path_length:.3e} rad")]
    DegeneratePath { path_length: f64 },
    /// Sampling period is not a finite positive number.
    #[error("sampling period must be finite and positive, got {got}")]
    InvalidSamplingPeriod { got: f64 },
}

/// Orientation samples at a fixed sampling period.
#[derive(Debug, Clone)]
pub struct RotationTrajectory {
    samples: Vec<RotationMatrix>,
    dt: f64,
}

impl RotationTrajectory {
    /// Wraps samples taken every `dt` seconds. The sample count is validated
    /// by the operations that need a minimum, not here.
    pub fn new(samples: Vec<RotationMatrix>, dt: f64) -> Result<Self, JerkError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(JerkError::InvalidSamplingPeriod { got: dt });
        }
        Ok(RotationTrajectory { samples, dt })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[RotationMatrix] {
        &self.samples
    }

    /// Duration spanned by the samples, `(N - 1) * dt`.
    pub fn duration(&self) -> f64 {
        (self.samples.len().saturating_sub(1)) as f64 * self.dt
    }

    /// Body-frame angular velocity between consecutive samples: one vector
    /// per step, `w_k = vee(log(R_k^T R_{k+1})) / dt`.
    pub fn angular_velocity(&self) -> Result<AngularVelocitySeries, JerkError> {
        if self.samples.len() < 2 {
            return Err(JerkError::TooShort {
                needed: 2,
                got: self.samples.len(),
            });
        }
        let mut omega = Vec::with_capacity(self.samples.len() - 1);
        let mut ambiguous_steps = 0;
        for pair in self.samples.windows(2) {
            let step = log_so3(&pair[0].relative_to(&pair[1]));
            if step.angle() >= std::f64::consts::PI - AMBIGUOUS_STEP_MARGIN {
                ambiguous_steps += 1;
            }
            omega.push(vee(&step) / self.dt);
        }
        Ok(AngularVelocitySeries {
            omega,
            dt: self.dt,
            ambiguous_steps,
        })
    }
}

/// Angular-velocity series derived from a [`RotationTrajectory`], one sample
/// per consecutive pair.
#[derive(Debug, Clone)]
pub struct AngularVelocitySeries {
    omega: Vec<Vector3<f64>>,
    dt: f64,
    ambiguous_steps: usize,
}

impl AngularVelocitySeries {
    pub fn samples(&self) -> &[Vector3<f64>] {
        &self.omega
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Steps whose relative rotation was within [`AMBIGUOUS_STEP_MARGIN`] of
    /// a half turn, where the recovered direction is a convention rather
    /// than a measurement.
    pub fn ambiguous_steps(&self) -> usize {
        self.ambiguous_steps
    }

    /// Centered second difference, `(w_k - 2 w_{k-1} + w_{k-2}) / dt^2`.
    /// Empty when the series has fewer than three samples.
    pub fn second_difference(&self) -> Vec<Vector3<f64>> {
        if self.omega.len() < 3 {
            return Vec::new();
        }
        self.omega
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]) / (self.dt * self.dt))
            .collect()
    }

    /// Total rotational path `d = dt * sum |w_k|`, in radians.
    pub fn path_length(&self) -> f64 {
        self.dt * self.omega.iter().map(|w| w.norm()).sum::<f64>()
    }
}

/// Everything [`jerk_index`] computes, with the diagnostics that qualify it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JerkReport {
    /// Dimensionless fluency index: higher is more erratic.
    pub jerk_index: f64,
    /// Total rotational path length in radians.
    pub path_length: f64,
    /// Normalization constant `(N-2)^2 dt^2 / path_length` applied to the
    /// summed acceleration changes.
    pub normalization: f64,
    /// Number of orientation samples the index was computed from.
    pub sample_count: usize,
    /// Sampling period in seconds.
    pub dt: f64,
    /// Relative steps with direction-ambiguous (half-turn) logarithms.
    pub ambiguous_steps: usize,
}

/// Computes the normalized rotational jerk index of a trajectory.
///
/// Needs at least 4 samples (one second-difference term) and a rotational
/// path above [`PATH_EPS`].
pub fn jerk_index(trajectory: &RotationTrajectory) -> Result<JerkReport, JerkError> {
    let n = trajectory.len();
    if n < 4 {
        return Err(JerkError::TooShort { needed: 4, got: n });
    }
    let omega = trajectory.angular_velocity()?;
    let path_length = omega.path_length();
    if path_length <= PATH_EPS || path_length.is_nan() {
        return Err(JerkError::DegeneratePath { path_length });
    }
    let dt = trajectory.dt();
    let span = (n - 2) as f64;
    let normalization = span * span * dt * dt / path_length;
    let accel_sum: f64 = omega
        .second_difference()
        .iter()
        .map(|a| a.norm())
        .sum();
    Ok(JerkReport {
        jerk_index: normalization * dt * accel_sum,
        path_length,
        normalization,
        sample_count: n,
        dt,
        ambiguous_steps: omega.ambiguous_steps(),
    })
}
