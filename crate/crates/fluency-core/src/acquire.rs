//! UDP acquisition of the angle stream and session-file persistence.
//!
//! [`listen`] binds a wildcard UDP socket and accumulates whole datagrams
//! until either the configured byte budget fills or the timeout (measured
//! from listen start) elapses — whichever happens first. [`acquire_session`]
//! runs the parser over the accumulated bytes and packages the result as a
//! [`Session`] with its diagnostics.
//!
//! Sessions persist as small CSV files: a `# key=value` metadata block
//! (sampling period, provenance, stream diagnostics), a fixed header line
//! `yaw_deg,pitch_deg,roll_deg`, then one record per line. Saving and
//! loading round-trip a session exactly, values bit-for-bit.

use crate::so3::AngleTriple;
use crate::wire::{parse_decimal, parse_stream, ParseReport, RawStream};
use std::fmt::Write as _;
use std::io::{ErrorKind, Read, Write};
use std::net::UdpSocket;
use std::path::Path;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Smallest sampling period the phone app offers (20 ms); live acquisition
/// configs below it are rejected.
pub const MIN_LISTEN_DT: f64 = 0.020;

/// Largest UDP payload worth provisioning for (64 KiB datagram limit).
const MAX_DATAGRAM: usize = 65536;

/// Errors from acquisition and session-file handling.
#[derive(Debug, Error)]
pub enum AcquireError {
    /// A [`ListenConfig`] field violates its documented range.
    #[error("invalid listen configuration: {detail}")]
    InvalidConfig { detail: String },
    /// The UDP port could not be bound (typically already in use).
    #[error("cannot bind UDP port {port}: {source}")]
    Bind {
        port: u16,
        #[source]
        source: std::io::Error,
    },
    /// The listen window closed without a single datagram.
    #[error("no datagrams received before the timeout")]
    EmptyAcquisition,
    /// A session file deviates from the documented format; `line` is
    /// 1-based.
    #[error("session file line {line}: {detail}")]
    Format { line: usize, detail: String },
    /// Underlying I/O failure (file or socket).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Listening window configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ListenConfig {
    /// UDP port to bind on all interfaces; must be nonzero.
    pub port: u16,
    /// Stop once at least this many bytes have accumulated.
    pub buffer_size: usize,
    /// Stop this long after listening starts, data or not.
    pub timeout: Duration,
    /// Sampling period (seconds) stamped on the resulting session; the
    /// device sends no timestamps, so this is configuration, not
    /// measurement. At least 20 ms.
    pub dt: f64,
}

impl Default for ListenConfig {
    fn default() -> Self {
        ListenConfig {
            port: 5555,
            buffer_size: 65536,
            timeout: Duration::from_secs(120),
            dt: 0.02,
        }
    }
}

impl ListenConfig {
    pub fn validate(&self) -> Result<(), AcquireError> {
        let fail = |detail: String| Err(AcquireError::InvalidConfig { detail });
        if self.port == 0 {
            return fail("port must be in 1..=65535".into());
        }
        if self.buffer_size == 0 {
            return fail("buffer size must be positive".into());
        }
        if self.timeout.is_zero() {
            return fail("timeout must be positive".into());
        }
        if !self.dt.is_finite() || self.dt < MIN_LISTEN_DT {
            return fail(format!(
                "sampling period must be at least {MIN_LISTEN_DT} s, got {}",
                self.dt
            ));
        }
        Ok(())
    }
}

/// Why a listen window closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The byte budget filled (checked after each whole datagram).
    BufferFilled,
    /// The window's deadline passed.
    TimedOut,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::BufferFilled => "buffer filled",
            StopReason::TimedOut => "timed out",
        })
    }
}

/// Raw result of one listen window.
#[derive(Debug)]
pub struct Acquisition {
    /// All received payload bytes, concatenated in arrival order.
    pub raw: RawStream,
    /// Number of datagrams received.
    pub datagrams: usize,
    pub stop_reason: StopReason,
    /// Wall-clock time the window was open.
    pub elapsed: Duration,
}

/// Counters describing what ingest had to drop or question; a [`Session`]
/// carries them alongside its records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamDiagnostics {
    pub empty_expunged: usize,
    pub malformed_skipped: usize,
    pub trailing_partial: bool,
    pub range_flagged: usize,
}

impl StreamDiagnostics {
    /// Diagnostics for records that never crossed the wire: nothing was
    /// dropped or truncated, but out-of-nominal-range values are still
    /// counted, so a saved synthetic session describes its records the same
    /// way an acquired copy of them would.
    pub fn for_records(records: &[AngleTriple]) -> Self {
        StreamDiagnostics {
            range_flagged: records.iter().filter(|r| !r.in_nominal_range()).count(),
            ..StreamDiagnostics::default()
        }
    }
}

impl From<&ParseReport> for StreamDiagnostics {
    fn from(report: &ParseReport) -> Self {
        StreamDiagnostics {
            empty_expunged: report.empty_expunged,
            malformed_skipped: report.malformed_skipped,
            trailing_partial: report.trailing_partial,
            range_flagged: report.range_flagged,
        }
    }
}

/// One recorded stream: the parsed records, the sampling period they were
/// taken at, where they came from, and the ingest diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub records: Vec<AngleTriple>,
    /// Sampling period in seconds; positive.
    pub dt: f64,
    /// Free-text provenance: a socket address or file path.
    pub source: String,
    pub diagnostics: StreamDiagnostics,
}

/// A [`Session`] fresh off the network, with the acquisition facts that
/// qualify it.
#[derive(Debug)]
pub struct AcquiredSession {
    pub session: Session,
    pub datagrams: usize,
    pub stop_reason: StopReason,
    pub bytes_received: usize,
    pub elapsed: Duration,
}

/// Receives datagrams from any source into one byte stream.
///
/// Binds `0.0.0.0:port`, appends each datagram payload whole (the byte
/// budget is checked only after a complete datagram, so the final one may
/// overshoot it), and returns when the budget fills or the deadline passes.
/// Zero datagrams by the deadline is [`AcquireError::EmptyAcquisition`].
pub fn listen(cfg: &ListenConfig) -> Result<Acquisition, AcquireError> {
    cfg.validate()?;
    let socket = UdpSocket::bind(("0.0.0.0", cfg.port)).map_err(|source| AcquireError::Bind {
        port: cfg.port,
        source,
    })?;
    let start = Instant::now();
    let deadline = start + cfg.timeout;
    let mut bytes: Vec<u8> = Vec::new();
    let mut datagrams = 0usize;
    let mut buf = vec![0u8; MAX_DATAGRAM];
    let stop_reason = loop {
        let now = Instant::now();
        if now >= deadline {
            break StopReason::TimedOut;
        }
        socket.set_read_timeout(Some(deadline - now))?;
        match socket.recv_from(&mut buf) {
            Ok((len, _source)) => {
                bytes.extend_from_slice(&buf[..len]);
                datagrams += 1;
                if bytes.len() >= cfg.buffer_size {
                    break StopReason::BufferFilled;
                }
            }
            Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                break StopReason::TimedOut;
            }
            Err(e) => return Err(e.into()),
        }
    };
    if datagrams == 0 {
        return Err(AcquireError::EmptyAcquisition);
    }
    Ok(Acquisition {
        raw: RawStream::new(bytes),
        datagrams,
        stop_reason,
        elapsed: start.elapsed(),
    })
}

/// [`listen`] followed by the stream parser: one complete acquisition.
pub fn acquire_session(cfg: &ListenConfig) -> Result<AcquiredSession, AcquireError> {
    let acquisition = listen(cfg)?;
    let bytes_received = acquisition.raw.len();
    let report = parse_stream(&acquisition.raw);
    let session = Session {
        diagnostics: StreamDiagnostics::from(&report),
        records: report.records,
        dt: cfg.dt,
        source: format!("udp://0.0.0.0:{}", cfg.port),
    };
    Ok(AcquiredSession {
        session,
        datagrams: acquisition.datagrams,
        stop_reason: acquisition.stop_reason,
        bytes_received,
        elapsed: acquisition.elapsed,
    })
}

const HEADER: &str = "yaw_deg,pitch_deg,roll_deg";

/// Writes a session to `path` in the documented CSV-with-metadata format.
///
/// Angles are printed with exactly the digits a bit-exact round trip needs.
/// Non-finite records are refused (they cannot survive a round trip);
/// newlines in `source` are flattened to spaces.
pub fn save_session(session: &Session, path: &Path) -> Result<(), AcquireError> {
    let mut out = String::new();
    let d = &session.diagnostics;
    writeln!(out, "# dt={}", session.dt).unwrap();
    writeln!(out, "# source={}", session.source.replace(['\n', '\r'], " ")).unwrap();
    writeln!(out, "# empty_expunged={}", d.empty_expunged).unwrap();
    writeln!(out, "# malformed_skipped={}", d.malformed_skipped).unwrap();
    writeln!(out, "# trailing_partial={}", d.trailing_partial).unwrap();
    writeln!(out, "# range_flagged={}", d.range_flagged).unwrap();
    writeln!(out, "{HEADER}").unwrap();
    for (i, r) in session.records.iter().enumerate() {
        if !r.is_finite() {
            return Err(AcquireError::Format {
                line: 8 + i,
                detail: "record has a non-finite field".into(),
            });
        }
        writeln!(out, "{},{},{}", r.yaw_deg, r.pitch_deg, r.roll_deg).unwrap();
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads a session back from the format [`save_session`] writes.
///
/// Metadata lines are optional (a bare header is a valid empty session;
/// missing keys fall back to a 20 ms period, the file path as source, and
/// clean diagnostics). Unknown metadata keys are ignored so the format can
/// grow. Data rows are held to the strict record grammar — errors name the
/// offending 1-based line.
pub fn load_session(path: &Path) -> Result<Session, AcquireError> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;

    let mut session = Session {
        records: Vec::new(),
        dt: 0.02,
        source: path.display().to_string(),
        diagnostics: StreamDiagnostics::default(),
    };
    let fail = |line: usize, detail: String| Err(AcquireError::Format { line, detail });

    let mut lines = text.lines().enumerate();
    // Metadata block, then the header.
    let mut header_seen = false;
    for (idx, raw_line) in lines.by_ref() {
        let line_no = idx + 1;
        let line = raw_line.trim_end();
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            let Some((key, value)) = meta.split_once('=') else {
                return fail(line_no, format!("metadata line without '=': {meta:?}"));
            };
            let (key, value) = (key.trim(), value.trim());
            let counter = |v: &str| -> Result<usize, AcquireError> {
                v.parse().map_err(|_| AcquireError::Format {
                    line: line_no,
                    detail: format!("{key} must be a non-negative integer, got {v:?}"),
                })
            };
            match key {
                "dt" => {
                    let dt = parse_decimal(value).filter(|v| *v > 0.0);
                    session.dt = dt.ok_or(AcquireError::Format {
                        line: line_no,
                        detail: format!("dt must be a positive number, got {value:?}"),
                    })?;
                }
                "source" => session.source = value.to_string(),
                "empty_expunged" => session.diagnostics.empty_expunged = counter(value)?,
                "malformed_skipped" => session.diagnostics.malformed_skipped = counter(value)?,
                "trailing_partial" => {
                    session.diagnostics.trailing_partial = match value {
                        "true" => true,
                        "false" => false,
                        other => {
                            return fail(
                                line_no,
                                format!("trailing_partial must be true or false, got {other:?}"),
                            )
                        }
                    }
                }
                "range_flagged" => session.diagnostics.range_flagged = counter(value)?,
                _ => {} // unknown keys are ignored
            }
        } else if line == HEADER {
            header_seen = true;
            break;
        } else {
            return fail(
                line_no,
                format!("expected metadata or the header {HEADER:?}, got {line:?}"),
            );
        }
    }
    if !header_seen {
        return fail(
            text.lines().count().max(1),
            format!("missing header line {HEADER:?}"),
        );
    }

    for (idx, raw_line) in lines {
        let line_no = idx + 1;
        let line = raw_line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return fail(
                line_no,
                format!("expected 3 comma-separated fields, got {}", fields.len()),
            );
        }
        let mut values = [0.0f64; 3];
        for (v, field) in values.iter_mut().zip(&fields) {
            *v = parse_decimal(field).ok_or(AcquireError::Format {
                line: line_no,
                detail: format!("invalid number {field:?}"),
            })?;
        }
        session
            .records
            .push(AngleTriple::new(values[0], values[1], values[2]));
    }
    Ok(session)
}
