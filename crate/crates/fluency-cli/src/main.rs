//! `fluency` — acquire, simulate, replay, and score streamed orientation
//! recordings from the command line.
//!
//! Subcommands:
//! - `listen`: receive a yaw/pitch/roll stream over UDP, optionally save it
//!   as a session file, and print its fluency report.
//! - `compute`: score a saved session file.
//! - `simulate`: write a seeded synthetic session file.
//! - `replay`: send a session file over UDP at its recorded pace, the way
//!   the phone app would.
//! - `plotdata`: emit plot-ready columns (time plus unwrapped radians).
//!
//! Exit status partitions the failure classes: 0 success, 2 usage or
//! invalid parameter values, 3 network acquisition or delivery, 4 file or
//! wire format, 5 recordings the index is undefined on (too short, or no
//! rotational movement).

mod plot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use fluency_core::acquire::{
    acquire_session, load_session, save_session, AcquireError, ListenConfig, Session,
    StreamDiagnostics,
};
use fluency_core::jerk::{jerk_index, JerkError, RotationTrajectory};
use fluency_core::so3::{euler_to_rotation, EulerConvention};
use fluency_core::synth::{generate_walk, replay, trajectory_to_angles, SynthError, WalkParams};

use report::{OutputFormat, ReportOutput};

const EXIT_USAGE: u8 = 2;
const EXIT_ACQUISITION: u8 = 3;
const EXIT_FORMAT: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;

/// A command failure: the process exit status plus a one-line cause.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, message)
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "fluency",
    version,
    about = "Score the fluency of streamed yaw/pitch/roll rotations",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Receive a stream over UDP, then score it
    Listen(ListenArgs),
    /// Score a saved session file
    Compute(ComputeArgs),
    /// Generate a seeded synthetic session file
    Simulate(SimulateArgs),
    /// Send a session file over UDP at its recorded pace
    Replay(ReplayArgs),
    /// Print plot-ready columns: time plus unwrapped angles in radians
    Plotdata(PlotdataArgs),
}

#[derive(Args)]
struct ListenArgs {
    /// UDP port to bind on all interfaces
    #[arg(long, default_value_t = 5555)]
    port: u16,
    /// Stop once this many payload bytes have arrived
    #[arg(long, default_value_t = 65536)]
    buffer_size: usize,
    /// Stop this many seconds after listening starts, data or not
    #[arg(long, default_value_t = 120.0)]
    timeout: f64,
    /// Sampling period of the incoming stream, seconds
    #[arg(long, default_value_t = 0.02)]
    dt: f64,
    /// Rotation order the angles encode, e.g. zyx or xzx-extrinsic
    #[arg(long, default_value = "zyx")]
    convention: String,
    /// Save the received session to this file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct ComputeArgs {
    /// Session file to score
    session: PathBuf,
    /// Rotation order the angles encode, e.g. zyx or xzx-extrinsic
    #[arg(long, default_value = "zyx")]
    convention: String,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of orientation samples (at least 4)
    #[arg(long, default_value_t = 450)]
    n: usize,
    /// Sampling period, seconds
    #[arg(long, default_value_t = 0.02)]
    dt: f64,
    /// Generator seed; identical seeds give identical sessions
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Magnitude of the steady angular velocity, rad/s
    #[arg(long, default_value_t = 1.0)]
    base_rate: f64,
    /// Per-step perturbation bound, radians; 0 gives a smooth walk
    #[arg(long, default_value_t = 0.0)]
    noise_amp: f64,
    /// Rotation order used to express the samples as angles
    #[arg(long, default_value = "zyx")]
    convention: String,
    /// Session file to write
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct ReplayArgs {
    /// Session file to send
    session: PathBuf,
    /// Destination address
    #[arg(long, default_value = "127.0.0.1:5555")]
    addr: String,
    /// Records per datagram
    #[arg(long, default_value_t = 25)]
    chunk: usize,
    /// Override the file's sampling period for pacing, seconds
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct PlotdataArgs {
    /// Session file to render
    session: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Listen(args) => cmd_listen(args),
        Command::Compute(args) => cmd_compute(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Replay(args) => cmd_replay(args),
        Command::Plotdata(args) => cmd_plotdata(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Maps acquisition errors raised while listening: configuration problems
/// are usage, everything network-side is acquisition.
fn listen_failure(e: AcquireError) -> Failure {
    let code = match &e {
        AcquireError::InvalidConfig { .. } => EXIT_USAGE,
        AcquireError::Bind { .. } | AcquireError::EmptyAcquisition | AcquireError::Io(_) => {
            EXIT_ACQUISITION
        }
        AcquireError::Format { .. } => EXIT_FORMAT,
    };
    Failure::new(code, e.to_string())
}

/// Maps acquisition errors raised on session files: everything, I/O
/// included, is the file's fault.
fn file_failure(e: AcquireError) -> Failure {
    let code = match &e {
        AcquireError::InvalidConfig { .. } => EXIT_USAGE,
        AcquireError::Bind { .. } | AcquireError::EmptyAcquisition => EXIT_ACQUISITION,
        AcquireError::Format { .. } | AcquireError::Io(_) => EXIT_FORMAT,
    };
    Failure::new(code, e.to_string())
}

fn jerk_failure(e: JerkError) -> Failure {
    let code = match &e {
        JerkError::TooShort { .. } | JerkError::DegeneratePath { .. } => EXIT_DEGENERATE,
        JerkError::InvalidSamplingPeriod { .. } => EXIT_USAGE,
    };
    Failure::new(code, e.to_string())
}

fn synth_failure(e: SynthError) -> Failure {
    let code = match &e {
        SynthError::InvalidParams { .. } => EXIT_USAGE,
        SynthError::Encode(_) => EXIT_FORMAT,
        SynthError::Send { .. } => EXIT_ACQUISITION,
    };
    Failure::new(code, e.to_string())
}

fn parse_convention(s: &str) -> Result<EulerConvention, Failure> {
    s.parse()
        .map_err(|e| Failure::usage(format!("--convention {s:?}: {e}")))
}

fn load(path: &std::path::Path) -> Result<Session, Failure> {
    load_session(path).map_err(|e| {
        let failure = file_failure(e);
        Failure::new(
            failure.code,
            format!("{}: {}", path.display(), failure.message),
        )
    })
}

fn save(session: &Session, path: &std::path::Path) -> Result<(), Failure> {
    save_session(session, path).map_err(|e| {
        let failure = file_failure(e);
        Failure::new(
            failure.code,
            format!("{}: {}", path.display(), failure.message),
        )
    })
}

/// Turns a session's records into rotations under `convention` and scores
/// them.
fn score_session(session: &Session, convention: EulerConvention) -> Result<ReportOutput, Failure> {
    let mut rotations = Vec::with_capacity(session.records.len());
    for (i, record) in session.records.iter().enumerate() {
        let rotation = euler_to_rotation(record, convention)
            .map_err(|e| Failure::new(EXIT_FORMAT, format!("record {}: {e}", i + 1)))?;
        rotations.push(rotation);
    }
    let trajectory = RotationTrajectory::new(rotations, session.dt).map_err(jerk_failure)?;
    let report = jerk_index(&trajectory).map_err(jerk_failure)?;
    ReportOutput::from_parts(&report, session).map_err(|m| Failure::new(EXIT_DEGENERATE, m))
}

fn cmd_listen(args: ListenArgs) -> CmdResult {
    let convention = parse_convention(&args.convention)?;
    if !(args.timeout.is_finite() && args.timeout > 0.0 && args.timeout <= 1e9) {
        return Err(Failure::usage(format!(
            "--timeout must be a positive number of seconds (at most 1e9), got {}",
            args.timeout
        )));
    }
    let cfg = ListenConfig {
        port: args.port,
        buffer_size: args.buffer_size,
        timeout: Duration::from_secs_f64(args.timeout),
        dt: args.dt,
    };
    let acquired = acquire_session(&cfg).map_err(listen_failure)?;
    eprintln!(
        "received {} bytes in {} datagrams over {:.3} s ({}); {} records parsed",
        acquired.bytes_received,
        acquired.datagrams,
        acquired.elapsed.as_secs_f64(),
        acquired.stop_reason,
        acquired.session.records.len(),
    );
    if let Some(out) = &args.out {
        save(&acquired.session, out)?;
        eprintln!("session saved to {}", out.display());
    }
    let output = score_session(&acquired.session, convention)?;
    print!("{}", output.render(args.format));
    Ok(())
}

fn cmd_compute(args: ComputeArgs) -> CmdResult {
    let convention = parse_convention(&args.convention)?;
    let session = load(&args.session)?;
    let output = score_session(&session, convention)?;
    print!("{}", output.render(args.format));
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let convention = parse_convention(&args.convention)?;
    let params = WalkParams {
        n: args.n,
        dt: args.dt,
        seed: args.seed,
        base_rate: args.base_rate,
        noise_amp: args.noise_amp,
    };
    let trajectory = generate_walk(&params).map_err(synth_failure)?;
    let extracted = trajectory_to_angles(&trajectory, convention);
    let diagnostics = StreamDiagnostics::for_records(&extracted.angles);
    let session = Session {
        records: extracted.angles,
        dt: args.dt,
        source: format!(
            "synthetic walk seed={} n={} rate={} noise={} convention={}",
            args.seed, args.n, args.base_rate, args.noise_amp, convention
        ),
        diagnostics,
    };
    save(&session, &args.out)?;
    match args.format {
        OutputFormat::Text => println!(
            "saved {} records ({} at gimbal lock) to {}",
            session.records.len(),
            extracted.gimbal_locked,
            args.out.display()
        ),
        OutputFormat::Structured => println!(
            "{}",
            serde_json::json!({
                "records": session.records.len(),
                "gimbal_locked": extracted.gimbal_locked,
                "dt": args.dt,
                "seed": args.seed,
                "out": args.out.display().to_string(),
            })
        ),
    }
    Ok(())
}

fn cmd_replay(args: ReplayArgs) -> CmdResult {
    let session = load(&args.session)?;
    let dt = args.dt.unwrap_or(session.dt);
    let stats = replay(&session.records, args.addr.as_str(), dt, args.chunk)
        .map_err(synth_failure)?;
    match args.format {
        OutputFormat::Text => println!(
            "sent {} records in {} datagrams over {:.3} s to {}",
            stats.records_sent,
            stats.datagrams_sent,
            stats.elapsed.as_secs_f64(),
            args.addr
        ),
        OutputFormat::Structured => println!(
            "{}",
            serde_json::json!({
                "records_sent": stats.records_sent,
                "datagrams_sent": stats.datagrams_sent,
            })
        ),
    }
    Ok(())
}

fn cmd_plotdata(args: PlotdataArgs) -> CmdResult {
    let session = load(&args.session)?;
    print!("{}", plot::columns(&session));
    Ok(())
}
