//! Golden values for the worked examples and the diff against fresh results.

use ldic_core::gains::{feedback_thresholds, gain_report, ForwardParams, GainMetric};
use ldic_core::{capacity_region, ChannelParams, Rational, User};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EMBEDDED: &str = include_str!("../golden/examples.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainGolden {
    pub params: [u64; 6],
    pub delta1: Rational,
    pub delta2: Rational,
    pub sigma: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityGolden {
    pub left: [u64; 6],
    pub right: [u64; 6],
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdGolden {
    pub base: ForwardParams,
    pub side: u8,
    pub metric: GainMetric,
    pub value: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GoldenFile {
    #[serde(default)]
    pub gains: Vec<GainGolden>,
    #[serde(default)]
    pub equality: Vec<EqualityGolden>,
    #[serde(default)]
    pub threshold: Vec<ThresholdGolden>,
}

impl GoldenFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let g: GoldenFile = toml::from_str(text).map_err(|e| e.to_string())?;
        if let Some(t) = g.threshold.iter().find(|t| !(1..=2).contains(&t.side)) {
            return Err(format!("threshold side must be 1 or 2, got {}", t.side));
        }
        Ok(g)
    }

    pub fn embedded() -> Self {
        GoldenFile::parse(EMBEDDED).expect("embedded golden file parses")
    }

    pub fn assertion_count(&self) -> usize {
        3 * self.gains.len() + self.equality.len() + self.threshold.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

fn assertion(name: String, expected: String, actual: String) -> Assertion {
    let ok = expected == actual;
    Assertion { name, expected, actual, ok }
}

fn tuple_text(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn threshold_text(v: Option<u64>) -> String {
    v.map(|t| t.to_string()).unwrap_or_else(|| "none".into())
}

/// Recomputes every golden quantity; order follows the file.
pub fn evaluate(golden: &GoldenFile) -> Vec<Assertion> {
    let gain_values: Vec<Vec<Assertion>> = golden
        .gains
        .par_iter()
        .map(|c| {
            let r = gain_report(&ChannelParams::from_array(c.params));
            let t = tuple_text(&c.params);
            vec![
                assertion(format!("Delta1({t})"), c.delta1.to_string(), r.delta1.to_string()),
                assertion(format!("Delta2({t})"), c.delta2.to_string(), r.delta2.to_string()),
                assertion(format!("Sigma({t})"), c.sigma.to_string(), r.sigma.to_string()),
            ]
        })
        .collect();
    let equalities = golden.equality.iter().map(|e| {
        let same = capacity_region(&ChannelParams::from_array(e.left))
            == capacity_region(&ChannelParams::from_array(e.right));
        let rel = |b: bool| if b { "equal" } else { "different" }.to_string();
        assertion(format!("C({}) vs C({})", tuple_text(&e.left), tuple_text(&e.right)), rel(e.equal), rel(same))
    });
    let thresholds: Vec<Assertion> = golden
        .threshold
        .par_iter()
        .map(|t| {
            let side = User::from_index(t.side).expect("validated on parse");
            let got = feedback_thresholds(t.base, side, t.metric);
            assertion(
                format!("threshold n{0}{0}_fb* for ({1}) [{2}]", t.side, tuple_text(&t.base), t.metric.name()),
                threshold_text(t.value),
                threshold_text(got),
            )
        })
        .collect();
    gain_values.into_iter().flatten().chain(equalities).chain(thresholds).collect()
}

pub fn report_text(assertions: &[Assertion]) -> String {
    let mut s = String::new();
    for a in assertions {
        if a.ok {
            s.push_str(&format!("ok    {} = {}\n", a.name, a.actual));
        } else {
            s.push_str(&format!("FAIL  {}: expected {}, got {}\n", a.name, a.expected, a.actual));
        }
    }
    let passed = assertions.iter().filter(|a| a.ok).count();
    s.push_str(&format!("{passed}/{} golden assertions match\n", assertions.len()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_file_shape() {
        let g = GoldenFile::embedded();
        assert_eq!((g.gains.len(), g.equality.len(), g.threshold.len()), (8, 1, 8));
        assert_eq!(g.assertion_count(), 33);
        assert_eq!(g.threshold[4].value, None);
    }

    #[test]
    fn bad_side_rejected() {
        let text = "[[threshold]]\nbase = [1,2,3,4]\nside = 3\nmetric = \"any\"\n";
        assert!(GoldenFile::parse(text).is_err());
    }
}
