//! One function per subcommand. Each returns the rendered output and the
//! process exit code; nothing here touches stdout or the filesystem except
//! reading a golden override.

use std::fs;

use ldic_core::gains::{gain_report, gain_surface, ForwardParams};
use ldic_core::properties::{tuples, Property};
use ldic_core::simulator::{
    decompose, policy_pair, run_session, SessionTrace,
};
use ldic_core::{ChannelParams, User};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{Command, Format, PolicyName};
use crate::docs::{
    metrics_csv, metrics_text, region_csv, region_text, MetricsDocument, RegionDocument, SweepDocument, SweepRow,
};
use crate::golden::{evaluate, report_text, GoldenFile};
use crate::{svg, CliError, Outcome};

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Usage(format!("{cmd} does not support --format {}", f.extension()))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Region { params, compare, format, .. } => region(params, compare.as_ref(), *format),
        Command::Metrics { params, format, .. } => metrics(params, *format),
        Command::Sweep { base, fb1, fb2, format, decimal, .. } => sweep(*base, *fb1, *fb2, *format, *decimal),
        Command::Verify { max_param, format, .. } => verify(*max_param, *format),
        Command::Examples { json, golden, .. } => {
            let g = match golden {
                None => GoldenFile::embedded(),
                Some(path) => GoldenFile::parse(&fs::read_to_string(path)?)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
            };
            Ok(examples(&g, *json))
        }
        Command::Simulate { params, uses, policy, seed, user, level, at_use, format, .. } => {
            let impulse_user = User::from_index(*user)?;
            simulate(params, *uses, *policy, *seed, impulse_user, *level, *at_use, *format)
        }
    }
}

pub fn region(p: &ChannelParams, compare: Option<&ChannelParams>, format: Format) -> Result<Outcome, CliError> {
    let doc = RegionDocument::new(p, compare);
    let text = match format {
        Format::Text => region_text(&doc),
        Format::Json => json(&doc),
        Format::Csv => region_csv(&doc)?,
        Format::Svg => svg::render(&doc.entries()),
    };
    Ok(Outcome::ok(text))
}

pub fn metrics(p: &ChannelParams, format: Format) -> Result<Outcome, CliError> {
    let doc = MetricsDocument::new(gain_report(p));
    let text = match format {
        Format::Text => metrics_text(&doc),
        Format::Json => json(&doc),
        Format::Csv => metrics_csv(&doc)?,
        Format::Svg => return Err(unsupported("metrics", format)),
    };
    Ok(Outcome::ok(text))
}

pub fn sweep_document(base: ForwardParams, fb1: (u64, u64), fb2: (u64, u64)) -> SweepDocument {
    let rows = gain_surface(base, fb1.0..=fb1.1, fb2.0..=fb2.1)
        .into_iter()
        .map(|r| SweepRow {
            fb1: r.subject.n11_fb,
            fb2: r.subject.n22_fb,
            delta1: r.delta1,
            delta2: r.delta2,
            sigma: r.sigma,
        })
        .collect();
    SweepDocument { base, fb1, fb2, rows }
}

pub fn sweep(
    base: ForwardParams,
    fb1: (u64, u64),
    fb2: (u64, u64),
    format: Format,
    decimal: bool,
) -> Result<Outcome, CliError> {
    if fb1.0 > fb1.1 || fb2.0 > fb2.1 {
        return Err(CliError::Usage("empty feedback range".into()));
    }
    let doc = sweep_document(base, fb1, fb2);
    let text = match format {
        Format::Csv => crate::docs::sweep_csv(&doc, decimal)?,
        Format::Json => json(&doc),
        _ => return Err(unsupported("sweep", format)),
    };
    Ok(Outcome::ok(text))
}

/// Properties checked by `verify`. The literal termwise sum-rate claim is
/// left out; its min-equality form is included.
pub const VERIFIED: [Property; 7] = [
    Property::AchievabilityEqualsConverse,
    Property::ThetaIdentities,
    Property::FeedbackMonotone,
    Property::Saturation,
    Property::IndexSymmetry,
    Property::DecompositionOracle,
    Property::SumRateSimplificationExact,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: String,
    pub passed: u64,
    pub failed: u64,
    /// First few failing tuples.
    pub counterexamples: Vec<ChannelParams>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_param: u64,
    pub tuples: u64,
    pub properties: Vec<PropertyTally>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|t| t.failed == 0)
    }
}

pub fn verify_report(max_param: u64, properties: &[Property]) -> VerifyReport {
    let all: Vec<ChannelParams> = tuples(max_param).collect();
    let failures: Vec<Vec<bool>> =
        all.par_iter().map(|p| properties.iter().map(|prop| !prop.holds(p)).collect()).collect();
    let tallies = properties
        .iter()
        .enumerate()
        .map(|(k, prop)| {
            let failing: Vec<ChannelParams> =
                all.iter().zip(&failures).filter(|(_, f)| f[k]).map(|(p, _)| *p).collect();
            PropertyTally {
                property: prop.name().to_string(),
                passed: (all.len() - failing.len()) as u64,
                failed: failing.len() as u64,
                counterexamples: failing.into_iter().take(5).collect(),
            }
        })
        .collect();
    VerifyReport { max_param, tuples: all.len() as u64, properties: tallies }
}

pub fn verify(max_param: u64, format: Format) -> Result<Outcome, CliError> {
    if max_param > 9 {
        return Err(CliError::Usage("--max-param above 9 is impractical (10^6 tuples and more)".into()));
    }
    let report = verify_report(max_param, &VERIFIED);
    let text = match format {
        Format::Json => json(&report),
        Format::Text => {
            let mut s = format!("tuples: {} (all of {{0..{}}}^6)\n", report.tuples, report.max_param);
            for t in &report.properties {
                let status = if t.failed == 0 { "pass" } else { "FAIL" };
                s.push_str(&format!("{status}  {:<34} {}/{}\n", t.property, t.passed, report.tuples));
                for c in &t.counterexamples {
                    s.push_str(&format!("      counterexample {c}\n"));
                }
            }
            s
        }
        _ => return Err(unsupported("verify", format)),
    };
    Ok(Outcome { text, code: if report.all_pass() { 0 } else { 1 } })
}

pub fn examples(golden: &GoldenFile, as_json: bool) -> Outcome {
    let assertions = evaluate(golden);
    let ok = assertions.iter().all(|a| a.ok);
    let text = if as_json { json(&assertions) } else { report_text(&assertions) };
    Outcome { text, code: if ok { 0 } else { 1 } }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAnnotation {
    pub level: u64,
    pub tx1: String,
    pub tx2: String,
    pub rx1: String,
    pub rx2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub policy: String,
    pub seed: u64,
    pub levels: Vec<LevelAnnotation>,
    pub trace: SessionTrace,
}

pub fn annotate(p: &ChannelParams) -> Vec<LevelAnnotation> {
    let d1 = decompose(p, User::One);
    let d2 = decompose(p, User::Two);
    (1..=p.q())
        .map(|l| LevelAnnotation {
            level: l,
            tx1: d1.input_tags(l),
            tx2: d2.input_tags(l),
            rx1: d1.output_tag(l).to_string(),
            rx2: d2.output_tag(l).to_string(),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    p: &ChannelParams,
    uses: usize,
    policy: PolicyName,
    seed: u64,
    impulse_user: User,
    level: usize,
    at_use: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let q = p.q() as usize;
    if policy == PolicyName::Impulse && !(1..=q).contains(&level) {
        return Err(CliError::Usage(format!("--level must lie in 1..={q}")));
    }
    let (mut a, mut b) = policy_pair(policy.kind(), seed, q, impulse_user, level, at_use);
    let trace = run_session(a.as_mut(), b.as_mut(), p, uses)?;
    let levels = annotate(p);
    let policy_name = policy.kind().name().to_string();
    let text = match format {
        Format::Json => json(&SimulationDocument { policy: policy_name, seed, levels, trace }),
        Format::Text => {
            let mut s = format!("# params {p}  q = {q}  policy {policy_name}  uses {uses}  seed {seed}\n");
            s.push_str("# level\ttx1\ttx2\trx1\trx2\n");
            for l in &levels {
                s.push_str(&format!("# {}\t{}\t{}\t{}\t{}\n", l.level, l.tx1, l.tx2, l.rx1, l.rx2));
            }
            s.push_str(&trace.dump());
            s
        }
        _ => return Err(unsupported("simulate", format)),
    };
    Ok(Outcome::ok(text))
}
