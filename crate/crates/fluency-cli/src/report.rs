//! The report document every scoring command emits.
//!
//! One flat structure, rendered either as human-readable text or as a JSON
//! document. The JSON field names — `jerk_index`, `path_length`,
//! `normalization`, `sample_count`, `dt`, `duration`, `diagnostics` — are a
//! public contract; scripts may rely on them. Wall-clock quantities are
//! deliberately excluded so that identical inputs and flags produce
//! byte-identical output.

use fluency_core::acquire::Session;
use fluency_core::jerk::JerkReport;
use serde::Serialize;

/// How a command's primary output is rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Multi-line human-readable report.
    Text,
    /// Single-line JSON document.
    Structured,
}

/// Ingest and differencing diagnostics carried alongside the score.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Diagnostics {
    /// Empty wire segments dropped during parsing.
    pub empty_expunged: usize,
    /// Malformed wire segments dropped during parsing.
    pub malformed_skipped: usize,
    /// Whether the stream ended mid-record.
    pub trailing_partial: bool,
    /// Records kept despite angles outside the nominal device ranges.
    pub range_flagged: usize,
    /// Relative steps of half a turn, where the rotation axis sign is
    /// ambiguous.
    pub ambiguous_steps: usize,
}

/// Everything a scoring run reports.
#[derive(Debug, Clone, Serialize)]
pub struct ReportOutput {
    /// Dimensionless fluency index; higher is more erratic.
    pub jerk_index: f64,
    /// Total rotational path length in radians.
    pub path_length: f64,
    /// Normalization constant applied to the summed acceleration changes.
    pub normalization: f64,
    /// Orientation samples scored.
    pub sample_count: usize,
    /// Sampling period in seconds.
    pub dt: f64,
    /// Recording span in seconds, `(sample_count - 1) * dt`.
    pub duration: f64,
    pub diagnostics: Diagnostics,
    /// Where the records came from; shown in text output only, since file
    /// paths and socket addresses would break structured-output equality
    /// between a live acquisition and its saved session.
    #[serde(skip)]
    pub source: String,
}

impl ReportOutput {
    /// Combines the computed metrics with the session's provenance.
    /// Rejects non-finite metrics (possible only with extreme sampling
    /// periods) rather than emitting a document that violates the
    /// all-fields-finite contract.
    pub fn from_parts(report: &JerkReport, session: &Session) -> Result<Self, String> {
        let duration = (report.sample_count - 1) as f64 * report.dt;
        if !(report.jerk_index.is_finite()
            && report.path_length.is_finite()
            && report.normalization.is_finite()
            && duration.is_finite())
        {
            return Err(format!(
                "index overflowed (jerk index {}, path {} rad): \
                 sampling period {} s is too extreme for this recording",
                report.jerk_index, report.path_length, report.dt
            ));
        }
        Ok(ReportOutput {
            jerk_index: report.jerk_index,
            path_length: report.path_length,
            normalization: report.normalization,
            sample_count: report.sample_count,
            dt: report.dt,
            duration,
            diagnostics: Diagnostics {
                empty_expunged: session.diagnostics.empty_expunged,
                malformed_skipped: session.diagnostics.malformed_skipped,
                trailing_partial: session.diagnostics.trailing_partial,
                range_flagged: session.diagnostics.range_flagged,
                ambiguous_steps: report.ambiguous_steps,
            },
            source: session.source.clone(),
        })
    }

    /// Renders the report in the requested format, newline-terminated.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Structured => {
                let mut doc = serde_json::to_string(self)
                    .expect("report serialization cannot fail: plain finite fields");
                doc.push('\n');
                doc
            }
            OutputFormat::Text => {
                let d = &self.diagnostics;
                let trailing = if d.trailing_partial {
                    ", trailing partial record"
                } else {
                    ""
                };
                format!(
                    "rotational fluency report\n\
                     \x20 source:        {}\n\
                     \x20 samples:       {} at {} s ({} s total)\n\
                     \x20 path length:   {} rad\n\
                     \x20 jerk index:    {}\n\
                     \x20 normalization: {}\n\
                     \x20 diagnostics:   {} empty, {} malformed, {} out of range, \
                     {} ambiguous steps{}\n",
                    self.source,
                    self.sample_count,
                    self.dt,
                    self.duration,
                    self.path_length,
                    self.jerk_index,
                    self.normalization,
                    d.empty_expunged,
                    d.malformed_skipped,
                    d.range_flagged,
                    d.ambiguous_steps,
                    trailing,
                )
            }
        }
    }
}
