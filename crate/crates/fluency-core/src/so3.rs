//! Rotation algebra on SO(3): skew-symmetric generators, the matrix
//! exponential and principal logarithm, and Euler-angle conversions.
//!
//! The skew layout matches the device stream convention: [`hat`] packs the
//! three components into the strictly upper triangle,
//!
//! ```text
//!           [  0    a    b ]
//! hat(v) =  [ -a    0    c ]      v = (a, b, c)
//!           [ -b   -c    0 ]
//! ```
//!
//! and [`vee`] reads them back from entries `(0,1)`, `(0,2)`, `(1,2)`. This
//! differs from the common cross-product layout by a signed permutation of
//! the components (`w = (-c, b, -a)`), so angles and norms agree between the
//! two; [`SkewMatrix::rotation_vector`] converts when a cross-product-style
//! axis is needed.
//!
//! All angles are radians unless a name says otherwise; the wire-facing
//! [`AngleTriple`] is degrees.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

/// Maximum allowed deviation of `R^T R` from the identity (and of `det R`
/// from `+1`) for a matrix accepted as a rotation.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Maximum allowed deviation from exact antisymmetry for a matrix accepted
/// as skew-symmetric.
pub const SKEW_TOL: f64 = 1e-9;

/// Below this rotation angle, exponential and logarithm switch to series
/// expansions of their trigonometric coefficients.
const SMALL_ANGLE: f64 = 1e-4;

/// Within this of a half turn, the logarithm switches to the symmetric-part
/// axis extraction: the antisymmetric part shrinks like `sin(theta)` and no
/// longer determines the axis reliably.
const NEAR_PI: f64 = 1e-3;

/// `|cos(pitch)|` (or `|sin(beta)|` for repeated-axis orders) below which an
/// Euler-angle extraction is treated as gimbal-locked.
const GIMBAL_LOCK_TOL: f64 = 1e-9;

/// Errors from rotation-algebra constructors and conversions.
#[derive(Debug, Error)]
pub enum So3Error {
    /// An input component is NaN or infinite.
    #[error("non-finite input component")]
    InvalidInput,
    /// A matrix offered as skew-symmetric deviates from `-M^T` beyond
    /// [`SKEW_TOL`].
    #[error("matrix is not skew-symmetric: deviation {deviation:.3e}")]
    NotSkew { deviation: f64 },
    /// A matrix offered as a rotation fails orthonormality or has the wrong
    /// determinant sign.
    #[error("matrix is not a rotation: {detail}")]
    NotRotation { detail: String },
    /// A rotation-order string or axis sequence is not one of the twelve
    /// valid orders.
    #[error("invalid rotation order: {detail}")]
    InvalidConvention { detail: String },
}

/// Skew-symmetric 3x3 matrix, stored as its three independent components.
///
/// Only the strictly upper entries `(a, b, c)` are kept, so the matrix is
/// exactly antisymmetric by construction and `hat`/`vee` round-trip
/// bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewMatrix {
    upper: Vector3<f64>,
}

impl SkewMatrix {
    /// Zero generator (identity rotation under [`exp_so3`]).
    pub fn zero() -> Self {
        SkewMatrix {
            upper: Vector3::zeros(),
        }
    }

    /// Accepts a general matrix as skew-symmetric if `M + M^T` vanishes
    /// within [`SKEW_TOL`], keeping the antisymmetric part `(M - M^T) / 2`.
    pub fn try_from_matrix(m: &Matrix3<f64>) -> Result<Self, So3Error> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(So3Error::InvalidInput);
        }
        let sym = (m + m.transpose()).abs().max();
        if sym > SKEW_TOL {
            return Err(So3Error::NotSkew { deviation: sym });
        }
        Ok(SkewMatrix {
            upper: Vector3::new(
                0.5 * (m[(0, 1)] - m[(1, 0)]),
                0.5 * (m[(0, 2)] - m[(2, 0)]),
                0.5 * (m[(1, 2)] - m[(2, 1)]),
            ),
        })
    }

    /// The full 3x3 matrix.
    pub fn matrix(&self) -> Matrix3<f64> {
        let (a, b, c) = (self.upper[0], self.upper[1], self.upper[2]);
        Matrix3::new(0.0, a, b, -a, 0.0, c, -b, -c, 0.0)
    }

    /// Rotation angle `|(a, b, c)|` of the generator.
    pub fn angle(&self) -> f64 {
        self.upper.norm()
    }

    /// The equivalent cross-product-convention rotation vector
    /// (axis times angle).
    pub fn rotation_vector(&self) -> Vector3<f64> {
        Vector3::new(-self.upper[2], self.upper[1], -self.upper[0])
    }

    /// Builds the generator whose cross-product-convention rotation vector
    /// is `w`.
    pub fn from_rotation_vector(w: &Vector3<f64>) -> Self {
        SkewMatrix {
            upper: Vector3::new(-w[2], w[1], -w[0]),
        }
    }
}

/// Packs angular components into the skew generator. Fails on non-finite
/// input.
pub fn hat(v: &Vector3<f64>) -> Result<SkewMatrix, So3Error> {
    if !(v[0].is_finite() && v[1].is_finite() && v[2].is_finite()) {
        return Err(So3Error::InvalidInput);
    }
    Ok(SkewMatrix { upper: *v })
}

/// Reads the angular components back out of a skew generator. Exact inverse
/// of [`hat`].
pub fn vee(omega: &SkewMatrix) -> Vector3<f64> {
    omega.upper
}

/// Proper rotation matrix, validated on construction.
///
/// Instances satisfy `max|R^T R - I| <= 1e-9` and `det R = +1` within the
/// same tolerance; operations that compose validated rotations preserve this
/// to well below the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    /// Validates and wraps a general matrix.
    pub fn try_new(m: Matrix3<f64>) -> Result<Self, So3Error> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(So3Error::InvalidInput);
        }
        let ortho = (m.transpose() * m - Matrix3::identity()).abs().max();
        if ortho > ORTHONORMALITY_TOL {
            return Err(So3Error::NotRotation {
                detail: format!("max|R^T R - I| = {ortho:.3e}"),
            });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ORTHONORMALITY_TOL {
            return Err(So3Error::NotRotation {
                detail: format!("det = {det:.6}"),
            });
        }
        Ok(RotationMatrix(m))
    }

    /// Wraps a matrix that is orthonormal by construction (closed-form
    /// trigonometric builds, products of validated rotations).
    pub(crate) fn from_orthonormal(m: Matrix3<f64>) -> Self {
        RotationMatrix(m)
    }

    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix3<f64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    /// `self * other` (composition; `other` applied first).
    pub fn compose(&self, other: &Self) -> Self {
        RotationMatrix(self.0 * other.0)
    }

    /// Relative rotation `self^T * next` carrying `self` onto `next`.
    pub fn relative_to(&self, next: &Self) -> Self {
        RotationMatrix(self.0.tr_mul(&next.0))
    }

    /// `max|R^T R - I|`, for diagnostics and tests.
    pub fn orthonormality_deviation(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).abs().max()
    }
}

/// Rodrigues closed form of the matrix exponential of a skew generator.
///
/// `R = I + sin(t)/t * W + (1 - cos(t))/t^2 * W^2` with `t` the generator
/// angle; both coefficients switch to series below [`SMALL_ANGLE`] where the
/// direct quotients lose digits.
pub fn exp_so3(omega: &SkewMatrix) -> RotationMatrix {
    let t = omega.angle();
    let w = omega.matrix();
    let (a, b) = if t < SMALL_ANGLE {
        let t2 = t * t;
        (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
    } else {
        let t2 = t * t;
        (t.sin() / t, (1.0 - t.cos()) / t2)
    };
    RotationMatrix::from_orthonormal(Matrix3::identity() + w * a + w * w * b)
}

/// Principal matrix logarithm of a rotation: the unique skew generator with
/// angle in `[0, pi]` (at exactly `pi` the sign is fixed by a tie-break, see
/// below).
///
/// The angle comes from `atan2(|antisymmetric part|, (tr R - 1)/2)`, which
/// stays fully conditioned at both ends of the range. Away from a half turn
/// the generator is the scaled antisymmetric part; within [`NEAR_PI`] of a
/// half turn that part vanishes and the axis is recovered from the symmetric
/// part instead: `u_i^2 = (R_ii - cos t)/(1 - cos t)` for the dominant
/// component and the symmetric off-diagonal pairs for the rest (at exactly
/// `pi` this is the diagonal of `(R + I)/2`). The half-turn sign ambiguity is
/// resolved toward the true logarithm while one exists (via the residual
/// antisymmetric part); at exactly `pi` the tie-break makes the
/// largest-magnitude axis component non-negative, keeping results
/// reproducible.
pub fn log_so3(r: &RotationMatrix) -> SkewMatrix {
    let m = r.matrix();
    // Upper-triangle components of the antisymmetric part (exact in fp).
    let anti = Vector3::new(
        0.5 * (m[(0, 1)] - m[(1, 0)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 2)] - m[(2, 1)]),
    );
    let s = anti.norm(); // |sin t|
    let c = (0.5 * (m.trace() - 1.0)).clamp(-1.0, 1.0); // cos t
    let t = s.atan2(c);

    if t < SMALL_ANGLE {
        // t/sin(t) = 1 + t^2/6 + O(t^4)
        return SkewMatrix {
            upper: anti * (1.0 + t * t / 6.0),
        };
    }
    if t < std::f64::consts::PI - NEAR_PI {
        return SkewMatrix {
            upper: anti * (t / s),
        };
    }

    // Near a half turn: axis from the symmetric part.
    let q = 1.0 - c;
    let diag = Vector3::new(m[(0, 0)] - c, m[(1, 1)] - c, m[(2, 2)] - c);
    let k = diag.imax();
    let mut u = Vector3::zeros();
    u[k] = (diag[k] / q).max(0.0).sqrt();
    for j in 0..3 {
        if j != k {
            // Symmetric off-diagonal pair: R_jk + R_kj = 2 (1 - cos t) u_j u_k.
            u[j] = (m[(j, k)] + m[(k, j)]) / (2.0 * q * u[k]);
        }
    }
    u.normalize_mut();
    // The antisymmetric part equals sin(t) * axis (cross-product convention);
    // while it is resolvable it selects the true sign of the half-turn axis.
    let cross_axis = Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    );
    let d = u.dot(&cross_axis);
    if d < -1e-12 {
        u = -u;
    }
    // At exactly pi, d is numerical noise and u keeps the constructed sign:
    // u[k] >= 0 with k the largest-magnitude component.
    SkewMatrix::from_rotation_vector(&(u * t))
}

/// Rotation axis for Euler-angle orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    fn from_char(ch: char) -> Option<Axis> {
        match ch.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }

    fn letter(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Whether the three rotations act about body-fixed (intrinsic) or
/// space-fixed (extrinsic) axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Intrinsic,
    Extrinsic,
}

/// One of the twelve three-rotation orders (six Tait-Bryan with all axes
/// distinct, six with the first axis repeated), plus the intrinsic/extrinsic
/// flag.
///
/// The default is intrinsic z-y'-x'': yaw about Z, then pitch about the new
/// Y, then roll about the newest X — the usual yaw/pitch/roll convention of
/// phone orientation streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerConvention {
    pub order: [Axis; 3],
    pub frame: Frame,
}

impl EulerConvention {
    /// Validates that consecutive axes differ (the only constraint on the
    /// twelve meaningful orders).
    pub fn new(order: [Axis; 3], frame: Frame) -> Result<Self, So3Error> {
        if order[0] == order[1] || order[1] == order[2] {
            return Err(So3Error::InvalidConvention {
                detail: format!(
                    "consecutive rotations about the same axis in {}{}{}",
                    order[0].letter(),
                    order[1].letter(),
                    order[2].letter()
                ),
            });
        }
        Ok(EulerConvention { order, frame })
    }

    /// `true` when all three axes are distinct (Tait-Bryan order).
    pub fn is_tait_bryan(&self) -> bool {
        self.order[0] != self.order[2]
    }
}

impl Default for EulerConvention {
    fn default() -> Self {
        EulerConvention {
            order: [Axis::Z, Axis::Y, Axis::X],
            frame: Frame::Intrinsic,
        }
    }
}

impl std::fmt::Display for EulerConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}{}-{}",
            self.order[0].letter(),
            self.order[1].letter(),
            self.order[2].letter(),
            match self.frame {
                Frame::Intrinsic => "intrinsic",
                Frame::Extrinsic => "extrinsic",
            }
        )
    }
}

impl std::str::FromStr for EulerConvention {
    type Err = So3Error;

    /// Parses strings like `zyx`, `ZYX`, `zyx-intrinsic`, `xzx-extrinsic`.
    /// Without a suffix the frame is intrinsic.
    fn from_str(s: &str) -> Result<Self, So3Error> {
        let (order_part, frame) = match s.split_once('-') {
            None => (s, Frame::Intrinsic),
            Some((o, "intrinsic")) => (o, Frame::Intrinsic),
            Some((o, "extrinsic")) => (o, Frame::Extrinsic),
            Some((_, other)) => {
                return Err(So3Error::InvalidConvention {
                    detail: format!("unknown frame suffix {other:?} (use intrinsic/extrinsic)"),
                })
            }
        };
        let chars: Vec<char> = order_part.chars().collect();
        if chars.len() != 3 {
            return Err(So3Error::InvalidConvention {
                detail: format!("order {order_part:?} must name exactly three axes"),
            });
        }
        let mut order = [Axis::X; 3];
        for (i, ch) in chars.iter().enumerate() {
            order[i] = Axis::from_char(*ch).ok_or_else(|| So3Error::InvalidConvention {
                detail: format!("axis {ch:?} is not one of x, y, z"),
            })?;
        }
        EulerConvention::new(order, frame)
    }
}

/// Orientation sample in degrees, in the order the stream sends them.
///
/// Nominal device ranges are yaw `[0, 360)`, pitch `[-180, 180)`, roll
/// `[-90, 90]`; real sensors drift past these, so values outside the ranges
/// are carried through unchanged and only flagged by
/// [`AngleTriple::in_nominal_range`] (ingest paths count the flags).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTriple {
    pub yaw_deg: f64,
    pub pitch_deg: f64,
    pub roll_deg: f64,
}

impl AngleTriple {
    pub fn new(yaw_deg: f64, pitch_deg: f64, roll_deg: f64) -> Self {
        AngleTriple {
            yaw_deg,
            pitch_deg,
            roll_deg,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.yaw_deg.is_finite() && self.pitch_deg.is_finite() && self.roll_deg.is_finite()
    }

    pub fn in_nominal_range(&self) -> bool {
        (0.0..360.0).contains(&self.yaw_deg)
            && (-180.0..180.0).contains(&self.pitch_deg)
            && (-90.0..=90.0).contains(&self.roll_deg)
    }

    /// `(yaw, pitch, roll)` in radians.
    pub fn to_radians(self) -> (f64, f64, f64) {
        (
            self.yaw_deg.to_radians(),
            self.pitch_deg.to_radians(),
            self.roll_deg.to_radians(),
        )
    }
}

/// Single-axis rotation matrix (right-handed, column-vector convention).
fn axis_rotation(axis: Axis, angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    match axis {
        Axis::X => Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        Axis::Y => Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
        Axis::Z => Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
    }
}

/// Composes the rotation encoded by an angle triple under the given order.
///
/// Intrinsic orders multiply left to right (`R = R1 R2 R3`), extrinsic
/// right to left; the triple's fields are the first, second, and third
/// rotation angles respectively. Fails only on non-finite angles.
pub fn euler_to_rotation(
    angles: &AngleTriple,
    convention: EulerConvention,
) -> Result<RotationMatrix, So3Error> {
    if !angles.is_finite() {
        return Err(So3Error::InvalidInput);
    }
    let (a1, a2, a3) = angles.to_radians();
    let r1 = axis_rotation(convention.order[0], a1);
    let r2 = axis_rotation(convention.order[1], a2);
    let r3 = axis_rotation(convention.order[2], a3);
    let m = match convention.frame {
        Frame::Intrinsic => r1 * r2 * r3,
        Frame::Extrinsic => r3 * r2 * r1,
    };
    Ok(RotationMatrix::from_orthonormal(m))
}

/// Even (+1) or odd (-1) permutation sign of three distinct axis indices.
fn permutation_sign(i: usize, j: usize, k: usize) -> f64 {
    if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// Intrinsic-order angle extraction for distinct axes `(i, j, k)` from
/// `R = Ri(a1) Rj(a2) Rk(a3)`. Returns the radians triple and a
/// gimbal-lock flag.
fn tait_bryan_angles(m: &Matrix3<f64>, i: usize, j: usize, k: usize) -> ((f64, f64, f64), bool) {
    let e = permutation_sign(i, j, k);
    let sb = (e * m[(i, k)]).clamp(-1.0, 1.0);
    // Column k carries cos(a2) through rows j and k: hypot = |cos a2|.
    let cb = m[(j, k)].hypot(m[(k, k)]);
    if cb < GIMBAL_LOCK_TOL {
        // Half-pitch degeneracy: only a1 -+ a3 is determined. Pin a3 = 0.
        let beta = std::f64::consts::FRAC_PI_2.copysign(sb);
        let alpha = (sb.signum() * m[(j, i)]).atan2(m[(j, j)]);
        ((alpha, beta, 0.0), true)
    } else {
        let alpha = (-e * m[(j, k)]).atan2(m[(k, k)]);
        let beta = sb.asin();
        let gamma = (-e * m[(i, j)]).atan2(m[(i, i)]);
        ((alpha, beta, gamma), false)
    }
}

/// Intrinsic-order angle extraction for a repeated first axis from
/// `R = Ri(a1) Rj(a2) Ri(a3)`; the middle angle lies in `[0, pi]`.
fn repeated_axis_angles(m: &Matrix3<f64>, i: usize, j: usize) -> ((f64, f64, f64), bool) {
    let third = 3 - i - j;
    let e = permutation_sign(i, j, third);
    let cb = m[(i, i)].clamp(-1.0, 1.0);
    let sb = m[(i, j)].hypot(m[(i, third)]);
    if sb < GIMBAL_LOCK_TOL {
        // a2 = 0 or pi: the composition collapses to Ri(a1 + a3) or
        // Ri(a1 - a3) * Rj(pi). Pin a3 = 0 and read the combined angle from
        // the plane normal to axis i; in the a2 = pi case Rj(pi) negates the
        // read-off column whenever j is the axis two steps past i.
        let (p, q) = ((i + 1) % 3, (i + 2) % 3);
        let (beta, sign) = if cb > 0.0 {
            (0.0, 1.0)
        } else {
            (std::f64::consts::PI, if j == p { 1.0 } else { -1.0 })
        };
        let alpha = (sign * m[(q, p)]).atan2(sign * m[(p, p)]);
        ((alpha, beta, 0.0), true)
    } else {
        let alpha = m[(j, i)].atan2(-e * m[(third, i)]);
        let beta = sb.atan2(cb);
        let gamma = m[(i, j)].atan2(e * m[(i, third)]);
        ((alpha, beta, gamma), false)
    }
}

/// Inverse of [`euler_to_rotation`]: recovers an angle triple under the given
/// convention, flagging gimbal-locked samples. At lock only the sum or
/// difference of the outer angles is determined; the third reported angle is
/// pinned to zero and the first carries the combination.
///
/// The first angle is reported in `[0, 360)` degrees to match the stream's
/// yaw range; adding a full turn does not change the encoded rotation. The
/// middle angle lies in `[-90, 90]` for distinct-axis orders and `[0, 180]`
/// (intrinsic) or `[-180, 0]` (extrinsic) for repeated-axis orders.
pub fn rotation_to_euler(r: &RotationMatrix, convention: EulerConvention) -> (AngleTriple, bool) {
    let m = r.matrix();
    let ((a1, a2, a3), locked) = match convention.frame {
        Frame::Intrinsic => {
            let [i, j, k] = convention.order.map(Axis::index);
            if i != k {
                tait_bryan_angles(m, i, j, k)
            } else {
                repeated_axis_angles(m, i, j)
            }
        }
        Frame::Extrinsic => {
            // The transpose of an extrinsic composition is the intrinsic
            // composition of the same axis order with negated angles, so the
            // intrinsic extraction applies directly -- and its lock pin on
            // the third angle carries over to the reported third angle.
            let mt = m.transpose();
            let [i, j, k] = convention.order.map(Axis::index);
            let ((b1, b2, b3), locked) = if i != k {
                tait_bryan_angles(&mt, i, j, k)
            } else {
                repeated_axis_angles(&mt, i, j)
            };
            ((-b1, -b2, -b3), locked)
        }
    };
    let mut yaw = a1.to_degrees();
    if yaw < 0.0 {
        yaw += 360.0;
    }
    if yaw >= 360.0 {
        yaw -= 360.0;
    }
    // `+ 0.0` normalizes negative zero out of the extrinsic negations.
    (
        AngleTriple::new(yaw + 0.0, a2.to_degrees() + 0.0, a3.to_degrees() + 0.0),
        locked,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};
    use std::str::FromStr;

    const EPS: f64 = 1e-10;

    fn skew(a: f64, b: f64, c: f64) -> SkewMatrix {
        hat(&Vector3::new(a, b, c)).unwrap()
    }

    #[test]
    fn hat_packs_upper_triangle() {
        let w = skew(1.0, 2.0, 3.0).matrix();
        let expected = Matrix3::new(0.0, 1.0, 2.0, -1.0, 0.0, 3.0, -2.0, -3.0, 0.0);
        assert_eq!(w, expected);
    }

    #[test]
    fn hat_vee_round_trip_is_exact() {
        let v = Vector3::new(0.1, -2.5, 1e-17);
        assert_eq!(vee(&hat(&v).unwrap()), v);
    }

    #[test]
    fn hat_rejects_non_finite() {
        assert!(matches!(
            hat(&Vector3::new(f64::NAN, 0.0, 0.0)),
            Err(So3Error::InvalidInput)
        ));
        assert!(matches!(
            hat(&Vector3::new(0.0, f64::INFINITY, 0.0)),
            Err(So3Error::InvalidInput)
        ));
    }

    #[test]
    fn skew_from_matrix_checks_antisymmetry() {
        let ok = SkewMatrix::try_from_matrix(&skew(1.0, 2.0, 3.0).matrix()).unwrap();
        assert_eq!(vee(&ok), Vector3::new(1.0, 2.0, 3.0));
        let bad = Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            SkewMatrix::try_from_matrix(&bad),
            Err(So3Error::NotSkew { .. })
        ));
    }

    #[test]
    fn quarter_turn_exp_matches_hand_value() {
        // Generator (-pi/2, 0, 0) is a +90 degree turn about the third axis.
        let r = exp_so3(&skew(-FRAC_PI_2, 0.0, 0.0));
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(*r.matrix(), expected, epsilon = 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(*exp_so3(&SkewMatrix::zero()).matrix(), Matrix3::identity());
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(vee(&log_so3(&RotationMatrix::identity())), Vector3::zeros());
    }

    #[test]
    fn log_inverts_exp_across_magnitudes() {
        for &theta in &[1e-9, 1e-6, 1e-4, 0.1, 1.0, 2.0, 3.0, PI - 0.01] {
            let v = Vector3::new(2.0, -1.0, 0.5).normalize() * theta;
            let back = vee(&log_so3(&exp_so3(&hat(&v).unwrap())));
            assert!(
                (back - v).norm() <= EPS,
                "theta {theta}: error {}",
                (back - v).norm()
            );
        }
    }

    #[test]
    fn half_turn_log_has_angle_pi_and_reexponentiates() {
        // Half turn about the first body axis.
        let r = RotationMatrix::try_new(Matrix3::new(
            1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0,
        ))
        .unwrap();
        let l = log_so3(&r);
        assert_relative_eq!(l.angle(), PI, epsilon = 1e-12);
        // Tie-break: the axis points along +x (largest component non-negative).
        assert_relative_eq!(l.rotation_vector(), Vector3::new(PI, 0.0, 0.0), epsilon = 1e-12);
        let back = exp_so3(&l);
        assert_relative_eq!(*back.matrix(), *r.matrix(), epsilon = 1e-8);
    }

    #[test]
    fn rotation_constructor_rejects_non_rotations() {
        assert!(matches!(
            RotationMatrix::try_new(Matrix3::identity() * 2.0),
            Err(So3Error::NotRotation { .. })
        ));
        // Reflection: orthonormal but det = -1.
        let refl = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert!(matches!(
            RotationMatrix::try_new(refl),
            Err(So3Error::NotRotation { .. })
        ));
        let mut nan = Matrix3::identity();
        nan[(0, 0)] = f64::NAN;
        assert!(matches!(
            RotationMatrix::try_new(nan),
            Err(So3Error::InvalidInput)
        ));
    }

    #[test]
    fn yaw_quarter_turn_matches_generator_form() {
        // 90 degrees of yaw equals exp(hat((-pi/2, 0, 0))).
        let r = euler_to_rotation(&AngleTriple::new(90.0, 0.0, 0.0), EulerConvention::default())
            .unwrap();
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(*r.matrix(), expected, epsilon = 1e-15);
        assert_relative_eq!(
            *exp_so3(&skew(-FRAC_PI_2, 0.0, 0.0)).matrix(),
            *r.matrix(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn euler_rejects_non_finite_angles() {
        let bad = AngleTriple::new(f64::NAN, 0.0, 0.0);
        assert!(matches!(
            euler_to_rotation(&bad, EulerConvention::default()),
            Err(So3Error::InvalidInput)
        ));
    }

    #[test]
    fn convention_strings_parse_and_display() {
        let c = EulerConvention::from_str("zyx").unwrap();
        assert_eq!(c, EulerConvention::default());
        assert_eq!(c.to_string(), "zyx-intrinsic");
        let e = EulerConvention::from_str("XZX-extrinsic").unwrap();
        assert_eq!(e.order, [Axis::X, Axis::Z, Axis::X]);
        assert_eq!(e.frame, Frame::Extrinsic);
        assert!(!e.is_tait_bryan());
        assert!(EulerConvention::from_str("zzx").is_err());
        assert!(EulerConvention::from_str("zy").is_err());
        assert!(EulerConvention::from_str("zyx-sideways").is_err());
        assert!(EulerConvention::from_str("zwx").is_err());
    }

    fn all_conventions() -> Vec<EulerConvention> {
        let orders = [
            "xyz", "xzy", "yxz", "yzx", "zxy", "zyx", "xyx", "xzx", "yxy", "yzy", "zxz", "zyz",
        ];
        let mut out = Vec::new();
        for o in orders {
            for frame in ["intrinsic", "extrinsic"] {
                out.push(EulerConvention::from_str(&format!("{o}-{frame}")).unwrap());
            }
        }
        out
    }

    #[test]
    fn euler_round_trip_all_conventions() {
        // Angle grid away from gimbal lock in every convention. The middle
        // angle stays inside (0, 90) so it is valid for both distinct-axis
        // orders (|a2| < 90) and repeated-axis orders (0 < a2 < 180).
        let firsts = [-170.0, -90.5, -10.0, 0.0, 45.0, 91.0, 179.0];
        let middles = [5.0, 30.0, 62.5, 88.0];
        let thirds = [-150.0, -45.0, 0.0, 10.0, 120.0];
        for convention in all_conventions() {
            for &a1 in &firsts {
                for &a2 in &middles {
                    for &a3 in &thirds {
                        let input = AngleTriple::new(a1, a2, a3);
                        let r = euler_to_rotation(&input, convention).unwrap();
                        let (angles, locked) = rotation_to_euler(&r, convention);
                        assert!(!locked, "{convention}: unexpected lock at {input:?}");
                        let r2 = euler_to_rotation(&angles, convention).unwrap();
                        let err = (r.matrix() - r2.matrix()).abs().max();
                        assert!(
                            err <= 1e-9,
                            "{convention}: {input:?} -> {angles:?}, error {err:.3e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gimbal_lock_flagged_and_still_reconstructs() {
        for convention in all_conventions() {
            // Both exact degeneracies of the middle angle for each family.
            let mids: [f64; 2] = if convention.is_tait_bryan() {
                [90.0, -90.0]
            } else {
                [0.0, 180.0]
            };
            for mid in mids {
                let input = AngleTriple::new(35.0, mid, -20.0);
                let r = euler_to_rotation(&input, convention).unwrap();
                let (angles, locked) = rotation_to_euler(&r, convention);
                assert!(locked, "{convention} mid {mid}: lock not flagged");
                assert_eq!(
                    angles.roll_deg, 0.0,
                    "{convention} mid {mid}: third angle not pinned"
                );
                let r2 = euler_to_rotation(&angles, convention).unwrap();
                let err = (r.matrix() - r2.matrix()).abs().max();
                assert!(
                    err <= 1e-9,
                    "{convention} mid {mid}: lock reconstruction error {err:.3e}"
                );
            }
        }
    }

    #[test]
    fn nominal_range_flags() {
        assert!(AngleTriple::new(0.0, -180.0, 90.0).in_nominal_range());
        assert!(AngleTriple::new(359.9, 179.9, -90.0).in_nominal_range());
        assert!(!AngleTriple::new(360.0, 0.0, 0.0).in_nominal_range());
        assert!(!AngleTriple::new(-0.1, 0.0, 0.0).in_nominal_range());
        assert!(!AngleTriple::new(0.0, 180.0, 0.0).in_nominal_range());
        assert!(!AngleTriple::new(0.0, 0.0, 90.1).in_nominal_range());
    }

    proptest! {
        #[test]
        fn prop_log_inverts_exp_below_half_turn(
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
            z in -1.0f64..1.0,
            theta in 1e-8f64..(PI - 1e-3),
        ) {
            let n = Vector3::new(x, y, z).norm();
            prop_assume!(n > 1e-3);
            let v = Vector3::new(x, y, z) / n * theta;
            let back = vee(&log_so3(&exp_so3(&hat(&v).unwrap())));
            prop_assert!((back - v).norm() <= EPS);
        }

        #[test]
        fn prop_exp_output_is_orthonormal(
            x in -3.0f64..3.0,
            y in -3.0f64..3.0,
            z in -3.0f64..3.0,
        ) {
            let r = exp_so3(&hat(&Vector3::new(x, y, z)).unwrap());
            prop_assert!(r.orthonormality_deviation() <= 1e-12);
            prop_assert!((r.matrix().determinant() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn prop_exp_inverts_log(
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
            z in -1.0f64..1.0,
            theta in 0.0f64..PI,
        ) {
            let n = Vector3::new(x, y, z).norm();
            prop_assume!(n > 1e-3);
            let v = Vector3::new(x, y, z) / n * theta;
            let r = exp_so3(&hat(&v).unwrap());
            let back = exp_so3(&log_so3(&r));
            prop_assert!((back.matrix() - r.matrix()).abs().max() <= 1e-8);
        }
    }
}
