//! Feedback gains measured against the same channel without feedback.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::converse::{capacity_region, no_feedback};
use crate::geometry::{Axis, RateRegion};
use crate::model::{ChannelParams, User};
use crate::rational::Rational;

/// Rate axis carrying user `i`.
pub fn axis_of(i: User) -> Axis {
    match i {
        User::One => Axis::R1,
        User::Two => Axis::R2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainReport {
    pub subject: ChannelParams,
    pub baseline: ChannelParams,
    pub delta1: Rational,
    pub delta2: Rational,
    pub sigma: Rational,
    /// Value of `R2` at which `delta1` is attained.
    pub argmax_rj_for_delta1: Rational,
    /// Value of `R1` at which `delta2` is attained.
    pub argmax_rj_for_delta2: Rational,
}

impl GainReport {
    pub fn delta(&self, i: User) -> &Rational {
        match i {
            User::One => &self.delta1,
            User::Two => &self.delta2,
        }
    }

    /// `(Δ1, Δ2, Σ)`.
    pub fn triple(&self) -> (Rational, Rational, Rational) {
        (self.delta1.clone(), self.delta2.clone(), self.sigma.clone())
    }
}

fn sum_gain_between(with: &RateRegion, without: &RateRegion) -> Rational {
    let one = Rational::one();
    with.sup_linear(&one, &one) - without.sup_linear(&one, &one)
}

/// Largest gain of `R_i` at a common value `v` of `R_j`, with `v` ranging
/// over the slices that are nonempty without feedback. Returns the gain and
/// the smallest `v` attaining it.
fn individual_gain_between(with: &RateRegion, without: &RateRegion, i: User) -> (Rational, Rational) {
    let fixed = axis_of(i.other());
    let vmax = without.axis_max(fixed);
    let mut candidates: Vec<Rational> = with
        .vertices()
        .iter()
        .chain(without.vertices())
        .map(|p| p.coord(fixed).clone())
        .filter(|v| *v <= vmax)
        .collect();
    candidates.push(Rational::zero());
    candidates.push(vmax);
    candidates.sort();
    candidates.dedup();

    let slice = |r: &RateRegion, v: &Rational| {
        r.boundary_max(fixed, v).value().cloned().expect("slice lies inside the no-feedback region")
    };
    let mut best: Option<(Rational, Rational)> = None;
    for v in candidates {
        let g = slice(with, &v) - slice(without, &v);
        if best.as_ref().is_none_or(|(b, _)| g > *b) {
            best = Some((g, v));
        }
    }
    best.expect("candidate set is nonempty")
}

/// `Σ`: increase of the maximum sum rate.
pub fn sum_gain(subject: &ChannelParams) -> Rational {
    let with = capacity_region(subject);
    let without = capacity_region(&no_feedback(subject));
    sum_gain_between(&with, &without)
}

/// `Δ_i` and a witness value of the other user's rate.
pub fn individual_gain(subject: &ChannelParams, i: User) -> (Rational, Rational) {
    let with = capacity_region(subject);
    let without = capacity_region(&no_feedback(subject));
    individual_gain_between(&with, &without, i)
}

pub fn gain_report(subject: &ChannelParams) -> GainReport {
    let baseline = no_feedback(subject);
    let with = capacity_region(subject);
    let without = capacity_region(&baseline);
    let (delta1, w1) = individual_gain_between(&with, &without, User::One);
    let (delta2, w2) = individual_gain_between(&with, &without, User::Two);
    GainReport {
        subject: *subject,
        baseline,
        delta1,
        delta2,
        sigma: sum_gain_between(&with, &without),
        argmax_rj_for_delta1: w1,
        argmax_rj_for_delta2: w2,
    }
}

/// Forward part of a channel: `(n11→, n22→, n12, n21)`.
pub type ForwardParams = [u64; 4];

pub fn with_forward(base: ForwardParams, fb1: u64, fb2: u64) -> ChannelParams {
    ChannelParams::from_array([base[0], base[1], base[2], base[3], fb1, fb2])
}

/// Reports for every `(n11←, n22←)` in the two inclusive ranges, row-major
/// by `fb1` then `fb2`.
pub fn gain_surface(
    base: ForwardParams,
    fb1: std::ops::RangeInclusive<u64>,
    fb2: std::ops::RangeInclusive<u64>,
) -> Vec<GainReport> {
    let points: Vec<(u64, u64)> = fb1.flat_map(|a| fb2.clone().map(move |b| (a, b))).collect();
    points.par_iter().map(|&(a, b)| gain_report(&with_forward(base, a, b))).collect()
}

/// Which gain a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainMetric {
    Delta1,
    Delta2,
    Sigma,
    /// Positive as soon as any of the three is.
    Any,
}

impl GainMetric {
    pub fn name(self) -> &'static str {
        match self {
            GainMetric::Delta1 => "delta1",
            GainMetric::Delta2 => "delta2",
            GainMetric::Sigma => "sigma",
            GainMetric::Any => "any",
        }
    }

    pub fn is_positive(self, r: &GainReport) -> bool {
        match self {
            GainMetric::Delta1 => r.delta1.is_positive(),
            GainMetric::Delta2 => r.delta2.is_positive(),
            GainMetric::Sigma => r.sigma.is_positive(),
            GainMetric::Any => r.delta1.is_positive() || r.delta2.is_positive() || r.sigma.is_positive(),
        }
    }
}

/// Reports along the sweep of side `side` over `0..=max(n_ii→, n_ij)`, with
/// the other feedback link absent.
pub fn threshold_sweep(base: ForwardParams, side: User) -> Vec<GainReport> {
    let top = with_forward(base, 0, 0).signal_levels(side);
    (0..=top)
        .into_par_iter()
        .map(|t| match side {
            User::One => gain_report(&with_forward(base, t, 0)),
            User::Two => gain_report(&with_forward(base, 0, t)),
        })
        .collect()
}

/// Largest feedback value `t` with zero gain at every value up to `t` and
/// positive gain at every value beyond it. `None` when the gain never turns
/// positive, or when zero and positive values interleave.
pub fn feedback_thresholds(base: ForwardParams, side: User, metric: GainMetric) -> Option<u64> {
    let positive: Vec<bool> = threshold_sweep(base, side).iter().map(|r| metric.is_positive(r)).collect();
    let first = positive.iter().position(|b| *b)?;
    if first == 0 || !positive[first..].iter().all(|b| *b) {
        return None;
    }
    Some(first as u64 - 1)
}
