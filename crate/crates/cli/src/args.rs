//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldic_core::gains::ForwardParams;
use ldic_core::simulator::PolicyKind;
use ldic_core::ChannelParams;

#[derive(Debug, Clone, Parser)]
#[command(name = "ldic", version, args_conflicts_with_subcommands = true, about = "Capacity regions and feedback gains of the two-user linear deterministic interference channel")]
pub struct Cli {
    /// Run every job listed in a TOML manifest instead of a single command.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyName {
    Zero,
    Impulse,
    Random,
    Echo,
}

impl PolicyName {
    pub fn kind(self) -> PolicyKind {
        match self {
            PolicyName::Zero => PolicyKind::Zero,
            PolicyName::Impulse => PolicyKind::Impulse,
            PolicyName::Random => PolicyKind::Random,
            PolicyName::Echo => PolicyKind::Echo,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the result to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Capacity region of one channel, optionally compared with a second one.
    Region {
        #[arg(long, value_parser = parse_params)]
        params: ChannelParams,
        #[arg(long, value_parser = parse_params)]
        compare: Option<ChannelParams>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Feedback gains with respect to the same channel without feedback.
    Metrics {
        #[arg(long, value_parser = parse_params)]
        params: ChannelParams,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gains over a grid of feedback parameters.
    Sweep {
        /// Forward parameters n11,n22,n12,n21.
        #[arg(long, value_parser = parse_forward)]
        base: ForwardParams,
        /// Inclusive range `lo..hi` (or a single value) for n11 feedback.
        #[arg(long, value_parser = parse_range)]
        fb1: (u64, u64),
        #[arg(long, value_parser = parse_range)]
        fb2: (u64, u64),
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Append floating-point columns (informational only).
        #[arg(long)]
        decimal: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive structural checks over all tuples in {0..max}^6.
    Verify {
        #[arg(long, default_value_t = 2)]
        max_param: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute the worked-example numbers and diff them against golden values.
    Examples {
        /// Machine-readable assertion list.
        #[arg(long)]
        json: bool,
        /// Golden values to compare against instead of the embedded ones.
        #[arg(long, value_name = "FILE")]
        golden: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bit-level channel simulation with delay-one feedback.
    Simulate {
        #[arg(long, value_parser = parse_params)]
        params: ChannelParams,
        #[arg(long, default_value_t = 4)]
        uses: usize,
        #[arg(long, value_enum, default_value_t = PolicyName::Random)]
        policy: PolicyName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Transmitter that sends the impulse; the other stays silent.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        user: u8,
        /// Level (1 = top) carrying the impulse.
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Channel use carrying the impulse.
        #[arg(long, default_value_t = 1)]
        at_use: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Region { .. } => "region",
            Command::Metrics { .. } => "metrics",
            Command::Sweep { .. } => "sweep",
            Command::Verify { .. } => "verify",
            Command::Examples { .. } => "examples",
            Command::Simulate { .. } => "simulate",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Region { output, .. }
            | Command::Metrics { output, .. }
            | Command::Sweep { output, .. }
            | Command::Verify { output, .. }
            | Command::Examples { output, .. }
            | Command::Simulate { output, .. } => output,
        }
    }

    pub fn output_mut(&mut self) -> &mut OutputArgs {
        match self {
            Command::Region { output, .. }
            | Command::Metrics { output, .. }
            | Command::Sweep { output, .. }
            | Command::Verify { output, .. }
            | Command::Examples { output, .. }
            | Command::Simulate { output, .. } => output,
        }
    }

    pub fn format(&self) -> Format {
        match self {
            Command::Region { format, .. }
            | Command::Metrics { format, .. }
            | Command::Sweep { format, .. }
            | Command::Verify { format, .. }
            | Command::Simulate { format, .. } => *format,
            Command::Examples { json: true, .. } => Format::Json,
            Command::Examples { .. } => Format::Text,
        }
    }
}

pub fn parse_params(s: &str) -> Result<ChannelParams, String> {
    s.parse().map_err(|e: ldic_core::Error| e.to_string())
}

pub fn parse_forward(s: &str) -> Result<ForwardParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated integers, got {}", parts.len()));
    }
    let mut out = [0u64; 4];
    for (k, p) in parts.iter().enumerate() {
        out[k] = p.parse().map_err(|_| format!("field {}: not a non-negative integer: {p:?}", k + 1))?;
    }
    Ok(out)
}

pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("not a non-negative integer: {t:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}
