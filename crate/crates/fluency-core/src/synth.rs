//! Deterministic synthetic trajectories and a UDP replayer.
//!
//! [`generate_walk`] integrates a fixed angular-velocity vector with an
//! optional per-step random perturbation: `R_{k+1} = R_k * exp(hat(dt*v +
//! eta_k))`. With zero perturbation the walk is a geodesic (constant
//! angular velocity, zero jerk index); growing perturbation amplitude makes
//! it measurably more erratic. Generation is keyed by a 64-bit seed through
//! ChaCha8 (a portable, versioned keystream), so identical parameters give
//! bit-identical trajectories on every platform — and the perturbations are
//! drawn as unit-amplitude triples scaled afterwards, so changing only the
//! amplitude rescales the exact same noise sequence.
//!
//! [`replay`] puts a record sequence on the wire the way the phone app
//! would: encoded chunks, one datagram per chunk, paced at the sampling
//! rate.

use crate::jerk::RotationTrajectory;
use crate::so3::{
    exp_so3, hat, rotation_to_euler, AngleTriple, EulerConvention, RotationMatrix,
};
use crate::wire::{encode_stream, WireError};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Errors from synthetic generation and replay.
#[derive(Debug, Error)]
pub enum SynthError {
    /// A [`WalkParams`] or replay argument violates its documented range.
    #[error("invalid parameters: {detail}")]
    InvalidParams { detail: String },
    /// Encoding records for the wire failed (non-finite field).
    #[error(transparent)]
    Encode(#[from] WireError),
    /// A datagram send failed; `sent_records` were already delivered to the
    /// socket before the failure.
    #[error("send failed after {sent_records} records: {source}")]
    Send {
        sent_records: usize,
        #[source]
        source: std::io::Error,
    },
}

/// Parameters of one synthetic walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    /// Orientation sample count, at least 4.
    pub n: usize,
    /// Sampling period in seconds.
    pub dt: f64,
    /// Seed for the deterministic generator.
    pub seed: u64,
    /// Magnitude of the fixed angular-velocity vector, rad/s; its direction
    /// is drawn from the seed.
    pub base_rate: f64,
    /// Per-step perturbation bound, radians: each step's perturbation
    /// vector has norm at most this.
    pub noise_amp: f64,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams {
            n: 450,
            dt: 0.02,
            seed: 0,
            base_rate: 1.0,
            noise_amp: 0.0,
        }
    }
}

impl WalkParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |detail: String| Err(SynthError::InvalidParams { detail });
        if self.n < 4 {
            return fail(format!("need at least 4 samples, got {}", self.n));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return fail(format!("sampling period must be positive, got {}", self.dt));
        }
        if !self.base_rate.is_finite() || self.base_rate < 0.0 {
            return fail(format!(
                "base rate must be non-negative, got {}",
                self.base_rate
            ));
        }
        if !self.noise_amp.is_finite() || self.noise_amp < 0.0 {
            return fail(format!(
                "noise amplitude must be non-negative, got {}",
                self.noise_amp
            ));
        }
        Ok(())
    }
}

/// One uniform draw in [-1, 1].
fn symmetric_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>() * 2.0 - 1.0
}

/// Rejection-sampled uniform direction on the unit sphere.
fn seeded_direction(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            symmetric_unit(rng),
            symmetric_unit(rng),
            symmetric_unit(rng),
        );
        let norm = v.norm();
        if norm > 1e-1 && norm <= 1.0 {
            return v / norm;
        }
    }
}

/// Generates the seeded walk `R_0 = I`, `R_{k+1} = R_k * exp(hat(dt*v +
/// eta_k))` with `|v| = base_rate` and `|eta_k| <= noise_amp`.
///
/// The perturbation components are uniform in `[-noise_amp/sqrt(3),
/// noise_amp/sqrt(3)]`, drawn once per step regardless of amplitude — the
/// same seed yields the same noise shape at every amplitude, scaled
/// linearly.
pub fn generate_walk(params: &WalkParams) -> Result<RotationTrajectory, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let velocity = seeded_direction(&mut rng) * params.base_rate;
    let noise_scale = params.noise_amp / 3f64.sqrt();

    let mut samples = Vec::with_capacity(params.n);
    let mut current = RotationMatrix::identity();
    samples.push(current);
    for _ in 1..params.n {
        let eta = Vector3::new(
            symmetric_unit(&mut rng),
            symmetric_unit(&mut rng),
            symmetric_unit(&mut rng),
        ) * noise_scale;
        let step = hat(&(velocity * params.dt + eta))
            .expect("finite parameters produce a finite step generator");
        current = current.compose(&exp_so3(&step));
        samples.push(current);
    }
    Ok(RotationTrajectory::new(samples, params.dt)
        .expect("validated sampling period is accepted"))
}

/// Angle triples extracted from a trajectory, with the count of
/// gimbal-locked samples (where the extraction had to pin one angle).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedAngles {
    pub angles: Vec<AngleTriple>,
    pub gimbal_locked: usize,
}

/// Converts every sample to an angle triple under the given convention.
/// Samples at gimbal lock are still converted (the triple reproduces the
/// rotation) but counted, since their individual angles are conventional.
pub fn trajectory_to_angles(
    trajectory: &RotationTrajectory,
    convention: EulerConvention,
) -> ExtractedAngles {
    let mut gimbal_locked = 0;
    let angles = trajectory
        .samples()
        .iter()
        .map(|r| {
            let (triple, locked) = rotation_to_euler(r, convention);
            gimbal_locked += locked as usize;
            triple
        })
        .collect();
    ExtractedAngles {
        angles,
        gimbal_locked,
    }
}

/// Outcome of a completed [`replay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayStats {
    pub records_sent: usize,
    pub datagrams_sent: usize,
    pub elapsed: Duration,
}

/// Sends records to `dest` the way the phone app would: `chunk` records per
/// datagram in the wire grammar, datagram `i` dispatched `i * chunk * dt`
/// seconds after the first (absolute schedule, so pacing error does not
/// accumulate). Pacing is sleep-based and best-effort.
pub fn replay(
    records: &[AngleTriple],
    dest: impl ToSocketAddrs,
    dt: f64,
    chunk: usize,
) -> Result<ReplayStats, SynthError> {
    if chunk == 0 {
        return Err(SynthError::InvalidParams {
            detail: "chunk must be at least 1 record per datagram".into(),
        });
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(SynthError::InvalidParams {
            detail: format!("sampling period must be positive, got {dt}"),
        });
    }
    let dest: SocketAddr = dest
        .to_socket_addrs()
        .and_then(|mut addrs| {
            addrs.next().ok_or_else(|| {
                std::io::Error::new(std::io::ErrorKind::InvalidInput, "destination resolved to no address")
            })
        })
        .map_err(|source| SynthError::Send {
            sent_records: 0,
            source,
        })?;
    let socket = UdpSocket::bind(("0.0.0.0", 0)).map_err(|source| SynthError::Send {
        sent_records: 0,
        source,
    })?;

    let interval = Duration::from_secs_f64(dt * chunk as f64);
    let start = Instant::now();
    let mut sent_records = 0usize;
    let mut datagrams_sent = 0usize;
    for (i, batch) in records.chunks(chunk).enumerate() {
        let payload = encode_stream(batch)?;
        let target = start + interval * i as u32;
        if let Some(wait) = target.checked_duration_since(Instant::now()) {
            std::thread::sleep(wait);
        }
        socket
            .send_to(&payload.bytes, dest)
            .map_err(|source| SynthError::Send {
                sent_records,
                source,
            })?;
        sent_records += batch.len();
        datagrams_sent += 1;
    }
    Ok(ReplayStats {
        records_sent: sent_records,
        datagrams_sent,
        elapsed: start.elapsed(),
    })
}
