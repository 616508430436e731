//! Plot-ready series: time column plus the three angle channels in
//! radians, unwrapped so a channel that crosses its wrap point continues
//! smoothly past 2π instead of jumping. Presentation only — scoring always
//! consumes rotation matrices, never these columns.

use fluency_core::acquire::Session;
use std::f64::consts::TAU;

/// Unwraps one angle channel by the minimal-jump rule: each sample is
/// shifted by the whole multiple of 2π that brings it closest to its
/// unwrapped predecessor. The first sample is kept as-is, and every output
/// equals its input modulo 2π.
pub fn unwrap_channel(radians: &[f64]) -> Vec<f64> {
    let mut unwrapped = Vec::with_capacity(radians.len());
    let mut prev: Option<f64> = None;
    for &x in radians {
        let u = match prev {
            None => x,
            Some(p) => x + TAU * ((p - x) / TAU).round(),
        };
        unwrapped.push(u);
        prev = Some(u);
    }
    unwrapped
}

/// Renders a session as whitespace-separated columns with a `#` comment
/// header (directly loadable by gnuplot and friends):
/// `time_s yaw_rad pitch_rad roll_rad`, one row per record. Values print
/// in full precision so the columns round-trip numerically.
pub fn columns(session: &Session) -> String {
    let channel = |f: fn(&fluency_core::so3::AngleTriple) -> f64| -> Vec<f64> {
        unwrap_channel(
            &session
                .records
                .iter()
                .map(|r| f(r).to_radians())
                .collect::<Vec<_>>(),
        )
    };
    let yaw = channel(|r| r.yaw_deg);
    let pitch = channel(|r| r.pitch_deg);
    let roll = channel(|r| r.roll_deg);

    let mut out = String::from("# time_s yaw_rad pitch_rad roll_rad\n");
    for i in 0..session.records.len() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            i as f64 * session.dt,
            yaw[i],
            pitch[i],
            roll[i]
        ));
    }
    out
}
