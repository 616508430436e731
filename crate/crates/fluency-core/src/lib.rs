//! Acquisition and analysis of smartphone orientation streams.
//!
//! A phone strapped to the body streams its orientation as ASCII
//! `Yaw,Pitch,Roll#` records over UDP. This crate turns such streams into a
//! scalar movement-fluency score: a dimensionless rotational jerk index that
//! is small for smooth, steady rotation and grows with erratic motion.
//!
//! The crate is organized along the processing chain:
//!
//! * [`so3`] — rotation algebra: skew generators, matrix exponential and
//!   logarithm, Euler-angle conversions.
//! * [`jerk`] — angular velocity, second differences, and the normalized
//!   jerk index over a rotation trajectory.
//! * [`wire`] — the ASCII wire codec and its robust parser.
//! * [`acquire`] — UDP listening and session files.
//! * [`synth`] — deterministic synthetic walks and UDP replay for testing
//!   and calibration.

pub mod acquire;
pub mod jerk;
pub mod so3;
pub mod synth;
pub mod wire;

pub use nalgebra;
