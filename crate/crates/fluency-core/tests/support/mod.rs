//! Shared test support: an independent quaternion-based oracle for rotation
//! kinematics plus a brute-force transcription of the jerk pipeline.
//!
//! Everything here deliberately avoids the library's own rotation code so
//! that agreement between the two is meaningful: rotations are composed,
//! exponentiated, and logarithmized through unit quaternions, and the jerk
//! pipeline below is a line-by-line transcription of its defining formulas
//! with no shared helpers.

#![allow(dead_code)]

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Unit quaternion `w + xi + yj + zk` (scalar first).
#[derive(Debug, Clone, Copy)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub fn normalize(self) -> Quat {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        Quat {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    pub fn conj(self) -> Quat {
        Quat {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn mul(self, o: Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    /// Branch-stable extraction from an orthonormal matrix (largest of the
    /// four squared components picked via trace/diagonal comparison).
    pub fn from_matrix(m: &Matrix3<f64>) -> Quat {
        let t = m.trace();
        let q = if t > 0.0 {
            let s = (t + 1.0).sqrt() * 2.0;
            Quat {
                w: 0.25 * s,
                x: (m[(2, 1)] - m[(1, 2)]) / s,
                y: (m[(0, 2)] - m[(2, 0)]) / s,
                z: (m[(1, 0)] - m[(0, 1)]) / s,
            }
        } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
            let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
            Quat {
                w: (m[(2, 1)] - m[(1, 2)]) / s,
                x: 0.25 * s,
                y: (m[(0, 1)] + m[(1, 0)]) / s,
                z: (m[(0, 2)] + m[(2, 0)]) / s,
            }
        } else if m[(1, 1)] > m[(2, 2)] {
            let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
            Quat {
                w: (m[(0, 2)] - m[(2, 0)]) / s,
                x: (m[(0, 1)] + m[(1, 0)]) / s,
                y: 0.25 * s,
                z: (m[(1, 2)] + m[(2, 1)]) / s,
            }
        } else {
            let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
            Quat {
                w: (m[(1, 0)] - m[(0, 1)]) / s,
                x: (m[(0, 2)] + m[(2, 0)]) / s,
                y: (m[(1, 2)] + m[(2, 1)]) / s,
                z: 0.25 * s,
            }
        };
        q.normalize()
    }

    pub fn to_matrix(self) -> Matrix3<f64> {
        let Quat { w, x, y, z } = self.normalize();
        Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        )
    }

    /// Quaternion exponential of a rotation vector (axis times angle, in the
    /// cross-product convention).
    pub fn from_rotvec(v: &Vector3<f64>) -> Quat {
        let th = v.norm();
        let half = 0.5 * th;
        let k = if th < 1e-8 { 0.5 } else { half.sin() / th };
        Quat {
            w: half.cos(),
            x: v[0] * k,
            y: v[1] * k,
            z: v[2] * k,
        }
        .normalize()
    }

    /// Principal rotation vector (angle in `[0, pi]`).
    pub fn to_rotvec(self) -> Vector3<f64> {
        let q = if self.w < 0.0 {
            Quat {
                w: -self.w,
                x: -self.x,
                y: -self.y,
                z: -self.z,
            }
        } else {
            self
        }
        .normalize();
        let v = Vector3::new(q.x, q.y, q.z);
        let vn = v.norm();
        if vn < 1e-12 {
            return 2.0 * v;
        }
        let angle = 2.0 * vn.atan2(q.w);
        v * (angle / vn)
    }
}

/// Geodesic angle between two orientations, `2 * acos(|<q1, q2>|)`.
pub fn geodesic_angle(q1: Quat, q2: Quat) -> f64 {
    2.0 * q1.normalize().dot(q2.normalize()).abs().clamp(0.0, 1.0).acos()
}

/// Brute-force transcription of the jerk pipeline over raw sample matrices:
///
/// ```text
/// w_k   = Log(R_k^T R_{k+1}) / dt                      k = 0 .. N-2
/// a_k   = (w_k - 2 w_{k-1} + w_{k-2}) / dt^2           k = 2 .. N-2
/// d     = dt * sum_k |w_k|
/// C     = (N-2)^2 dt^2 / d
/// J     = C * dt * sum_k |a_k|
/// ```
///
/// Returns `(J, d, C)`. The relative-step logarithm goes through quaternions,
/// sharing nothing with the implementation under test.
pub fn brute_force_jerk(samples: &[Matrix3<f64>], dt: f64) -> (f64, f64, f64) {
    let n = samples.len();
    assert!(n >= 4, "brute-force pipeline needs at least 4 samples");
    let omega: Vec<Vector3<f64>> = (0..n - 1)
        .map(|k| {
            let rel = samples[k].transpose() * samples[k + 1];
            Quat::from_matrix(&rel).to_rotvec() / dt
        })
        .collect();
    let path: f64 = dt * omega.iter().map(|w| w.norm()).sum::<f64>();
    let mut accel = 0.0;
    for k in 2..n - 1 {
        let a = (omega[k] - 2.0 * omega[k - 1] + omega[k - 2]) / (dt * dt);
        accel += a.norm();
    }
    let c = ((n - 2) as f64).powi(2) * dt * dt / path;
    (c * dt * accel, path, c)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random unit quaternion (rejection-sampled ball, then normalized).
pub fn random_quat(rng: &mut ChaCha8Rng) -> Quat {
    loop {
        let q = Quat {
            w: rng.gen::<f64>() * 2.0 - 1.0,
            x: rng.gen::<f64>() * 2.0 - 1.0,
            y: rng.gen::<f64>() * 2.0 - 1.0,
            z: rng.gen::<f64>() * 2.0 - 1.0,
        };
        let n2 = q.dot(q);
        if n2 > 1e-2 && n2 <= 1.0 {
            return q.normalize();
        }
    }
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    random_quat(rng).to_matrix()
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        );
        let n = v.norm();
        if n > 1e-1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Largest absolute entry of the difference of two matrices.
pub fn max_abs_diff(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    (a - b).abs().max()
}
