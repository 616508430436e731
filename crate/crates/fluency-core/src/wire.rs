//! Codec for the ASCII angle stream sent by the phone app.
//!
//! A stream is a sequence of records `yaw,pitch,roll#` — three decimal
//! floats in degrees, comma-separated, each record terminated by `#`:
//!
//! ```text
//! 12.5,-3.0,0.25#12.6,-2.9,0.30#
//! ```
//!
//! Parsing never fails hard: datagram truncation, stray bytes, and malformed
//! records are everyday events on a UDP feed, so every pathology is counted
//! in the returned [`ParseReport`] instead of aborting the acquisition.
//! Encoding is the exact inverse on well-formed records; values round-trip
//! bit-for-bit.

use crate::so3::AngleTriple;
use std::fmt::Write as _;
use thiserror::Error;

/// Raw bytes as received from the network or a capture file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawStream {
    pub bytes: Vec<u8>,
}

impl RawStream {
    pub fn new(bytes: Vec<u8>) -> Self {
        RawStream { bytes }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

impl From<&str> for RawStream {
    fn from(s: &str) -> Self {
        RawStream {
            bytes: s.as_bytes().to_vec(),
        }
    }
}

/// Everything [`parse_stream`] extracted, with counters for everything it
/// had to drop or question.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParseReport {
    /// Fully parsed, finite records, in stream order.
    pub records: Vec<AngleTriple>,
    /// Zero-length segments between consecutive `#`s, dropped.
    pub empty_expunged: usize,
    /// Segments with the wrong field count, invalid float syntax, or
    /// non-finite values, dropped.
    pub malformed_skipped: usize,
    /// Whether the stream ended mid-record (bytes after the last `#`); the
    /// truncated tail is dropped.
    pub trailing_partial: bool,
    /// Records kept in `records` whose angles fall outside the nominal
    /// device ranges (yaw `[0, 360)`, pitch `[-180, 180)`, roll `[-90, 90]`).
    pub range_flagged: usize,
}

/// Errors from [`encode_stream`].
#[derive(Debug, Error)]
pub enum WireError {
    /// A record to encode contains NaN or an infinity.
    #[error("record {index} has a non-finite field")]
    InvalidRecord { index: usize },
}

/// Strict decimal-float parser for one field: optional sign, one or more
/// digits, optional `.` with further digits, optional exponent. Leading and
/// trailing ASCII whitespace is trimmed first. Anything else — including
/// `nan`, `inf`, hex, underscores, or a bare leading dot — is rejected, as
/// is any value that does not parse to a finite f64.
pub(crate) fn parse_decimal(field: &str) -> Option<f64> {
    let t = field.trim();
    let s = t.as_bytes();
    let mut i = 0;
    if matches!(s.first(), Some(b'+') | Some(b'-')) {
        i += 1;
    }
    let int_start = i;
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
    }
    if i == int_start {
        return None;
    }
    if i < s.len() && s[i] == b'.' {
        i += 1;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
        i += 1;
        if matches!(s.get(i), Some(b'+') | Some(b'-')) {
            i += 1;
        }
        let exp_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return None;
        }
    }
    if i != s.len() {
        return None;
    }
    let value: f64 = t.parse().ok()?;
    value.is_finite().then_some(value)
}

/// One `#`-delimited segment to a record, or `None` if it is malformed.
fn parse_record(segment: &[u8]) -> Option<AngleTriple> {
    let text = std::str::from_utf8(segment).ok()?;
    let mut fields = text.split(',');
    let yaw = parse_decimal(fields.next()?)?;
    let pitch = parse_decimal(fields.next()?)?;
    let roll = parse_decimal(fields.next()?)?;
    if fields.next().is_some() {
        return None;
    }
    Some(AngleTriple::new(yaw, pitch, roll))
}

/// Splits a raw stream on `#` and parses each segment.
///
/// Accepts arbitrary bytes and never fails: empty segments are counted and
/// dropped, malformed segments are counted and dropped, and a final segment
/// not terminated by `#` is dropped and flagged as a truncated partial
/// record. Record count plus drops always accounts for every segment.
pub fn parse_stream(raw: &RawStream) -> ParseReport {
    let mut report = ParseReport::default();
    // split() always yields at least one piece; the last one is whatever
    // follows the final '#' -- the (possibly empty) unterminated tail.
    let mut segments: Vec<&[u8]> = raw.bytes.split(|&b| b == b'#').collect();
    let tail = segments.pop().unwrap_or(&[]);
    report.trailing_partial = !tail.is_empty();
    for segment in segments {
        if segment.is_empty() {
            report.empty_expunged += 1;
            continue;
        }
        match parse_record(segment) {
            Some(record) => {
                if !record.in_nominal_range() {
                    report.range_flagged += 1;
                }
                report.records.push(record);
            }
            None => report.malformed_skipped += 1,
        }
    }
    report
}

/// Encodes records back into the stream grammar, every record
/// `#`-terminated.
///
/// Values are printed with however many digits an exact round trip needs
/// (and never in scientific notation), so
/// `parse_stream(encode_stream(r)).records == r` bit-for-bit.
pub fn encode_stream(records: &[AngleTriple]) -> Result<RawStream, WireError> {
    let mut out = String::new();
    for (index, r) in records.iter().enumerate() {
        if !r.is_finite() {
            return Err(WireError::InvalidRecord { index });
        }
        write!(out, "{},{},{}#", r.yaw_deg, r.pitch_deg, r.roll_deg)
            .expect("writing to a String cannot fail");
    }
    Ok(RawStream {
        bytes: out.into_bytes(),
    })
}
