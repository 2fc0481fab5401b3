//! Serializable documents emitted by the commands. Rationals travel as
//! `"p/q"` strings so every document round-trips exactly.

use ldic_core::gains::ForwardParams;
use ldic_core::geometry::Point;
use ldic_core::{
    capacity_region, classify_regimes, converse_bounds, ChannelParams, ConverseBounds, GainReport, Rational, RegimePair,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionEntry {
    pub params: ChannelParams,
    pub q: u64,
    pub bounds: ConverseBounds,
    pub vertices: Vec<Point>,
    pub regimes: RegimePair,
}

impl RegionEntry {
    pub fn new(p: &ChannelParams) -> Self {
        RegionEntry {
            params: *p,
            q: p.q(),
            bounds: converse_bounds(p),
            vertices: capacity_region(p).vertices().to_vec(),
            regimes: classify_regimes(p),
        }
    }

    pub fn has_feedback(&self) -> bool {
        self.params.n11_fb > 0 || self.params.n22_fb > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    /// The first region lies strictly inside the second.
    Subset,
    /// The second region lies strictly inside the first.
    Superset,
    Incomparable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Subset => "subset",
            Verdict::Superset => "superset",
            Verdict::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDocument {
    pub region: RegionEntry,
    pub compare: Option<RegionEntry>,
    pub verdict: Option<Verdict>,
}

impl RegionDocument {
    pub fn new(p: &ChannelParams, compare: Option<&ChannelParams>) -> Self {
        let region = RegionEntry::new(p);
        let (compare, verdict) = match compare {
            None => (None, None),
            Some(c) => {
                let a = capacity_region(p);
                let b = capacity_region(c);
                let verdict = match (a.subset_of(&b), b.subset_of(&a)) {
                    (true, true) => Verdict::Equal,
                    (true, false) => Verdict::Subset,
                    (false, true) => Verdict::Superset,
                    (false, false) => Verdict::Incomparable,
                };
                (Some(RegionEntry::new(c)), Some(verdict))
            }
        };
        RegionDocument { region, compare, verdict }
    }

    pub fn entries(&self) -> Vec<&RegionEntry> {
        std::iter::once(&self.region).chain(self.compare.as_ref()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decimals {
    pub delta1: f64,
    pub delta2: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    pub report: GainReport,
    pub decimal: Decimals,
}

impl MetricsDocument {
    pub fn new(report: GainReport) -> Self {
        let decimal =
            Decimals { delta1: report.delta1.to_f64(), delta2: report.delta2.to_f64(), sigma: report.sigma.to_f64() };
        MetricsDocument { report, decimal }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub fb1: u64,
    pub fb2: u64,
    pub delta1: Rational,
    pub delta2: Rational,
    pub sigma: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub base: ForwardParams,
    pub fb1: (u64, u64),
    pub fb2: (u64, u64),
    pub rows: Vec<SweepRow>,
}

impl SweepDocument {
    /// Row for `(fb1, fb2)`; rows are indexed, not searched.
    pub fn cell(&self, fb1: u64, fb2: u64) -> Option<&SweepRow> {
        if !(self.fb1.0..=self.fb1.1).contains(&fb1) || !(self.fb2.0..=self.fb2.1).contains(&fb2) {
            return None;
        }
        let width = self.fb2.1 - self.fb2.0 + 1;
        self.rows.get(((fb1 - self.fb1.0) * width + (fb2 - self.fb2.0)) as usize)
    }
}

fn point_text(p: &Point) -> String {
    format!("({}, {})", p.r1, p.r2)
}

pub fn region_entry_text(e: &RegionEntry) -> String {
    let b = &e.bounds;
    let alpha = |a: &Option<Rational>| a.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "undefined".into());
    let vertices: Vec<String> = e.vertices.iter().map(point_text).collect();
    format!(
        "params {}  (q = {})\n\
         regimes: {} at receiver 1 (alpha = {}), {} at receiver 2 (alpha = {})\n\
         bounds: R1 <= {}, R2 <= {}, R1+R2 <= {} and {}, 2R1+R2 <= {}, R1+2R2 <= {}\n\
         vertices: {}\n",
        e.params,
        e.q,
        e.regimes.regime_1.label(),
        alpha(&e.regimes.alpha_1),
        e.regimes.regime_2.label(),
        alpha(&e.regimes.alpha_2),
        b.r1_bound,
        b.r2_bound,
        b.sum_bound_cutset,
        b.sum_bound_fb,
        b.two_r1_plus_r2,
        b.r1_plus_two_r2,
        vertices.join(" ")
    )
}

pub fn region_text(doc: &RegionDocument) -> String {
    let mut s = region_entry_text(&doc.region);
    if let (Some(c), Some(v)) = (&doc.compare, doc.verdict) {
        s.push('\n');
        s.push_str(&region_entry_text(c));
        s.push_str(&format!("\nverdict: {}\n", v.label()));
    }
    s
}

pub fn region_csv(doc: &RegionDocument) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["params", "vertex", "r1", "r2"])?;
    for e in doc.entries() {
        for (k, v) in e.vertices.iter().enumerate() {
            w.write_record([e.params.to_string(), k.to_string(), v.r1.to_string(), v.r2.to_string()])?;
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

pub fn metrics_text(doc: &MetricsDocument) -> String {
    let r = &doc.report;
    format!(
        "params {}  (baseline {})\n\
         Delta1 = {} ({}) at R2 = {}\n\
         Delta2 = {} ({}) at R1 = {}\n\
         Sigma  = {} ({})\n",
        r.subject,
        r.baseline,
        r.delta1,
        doc.decimal.delta1,
        r.argmax_rj_for_delta1,
        r.delta2,
        doc.decimal.delta2,
        r.argmax_rj_for_delta2,
        r.sigma,
        doc.decimal.sigma
    )
}

pub fn metrics_csv(doc: &MetricsDocument) -> Result<String, csv::Error> {
    let r = &doc.report;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["params", "delta1", "delta2", "sigma", "delta1_decimal", "delta2_decimal", "sigma_decimal"])?;
    w.write_record([
        r.subject.to_string(),
        r.delta1.to_string(),
        r.delta2.to_string(),
        r.sigma.to_string(),
        doc.decimal.delta1.to_string(),
        doc.decimal.delta2.to_string(),
        doc.decimal.sigma.to_string(),
    ])?;
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

pub fn sweep_csv(doc: &SweepDocument, decimal: bool) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["fb1", "fb2", "delta1", "delta2", "sigma"];
    if decimal {
        header.extend(["delta1_decimal", "delta2_decimal", "sigma_decimal"]);
    }
    w.write_record(&header)?;
    for r in &doc.rows {
        let mut rec = vec![r.fb1.to_string(), r.fb2.to_string(), r.delta1.to_string(), r.delta2.to_string(), r.sigma.to_string()];
        if decimal {
            rec.extend([r.delta1.to_f64().to_string(), r.delta2.to_f64().to_string(), r.sigma.to_f64().to_string()]);
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

/// Parses the exact columns of a sweep CSV back into rows.
pub fn sweep_rows_from_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let field = |k: usize| rec.get(k).ok_or_else(|| format!("missing column {k}"));
        let int = |k: usize| field(k)?.parse::<u64>().map_err(|e| e.to_string());
        let rat = |k: usize| field(k)?.parse::<Rational>().map_err(|e| e.to_string());
        rows.push(SweepRow { fb1: int(0)?, fb2: int(1)?, delta1: rat(2)?, delta2: rat(3)?, sigma: rat(4)? });
    }
    Ok(rows)
}
