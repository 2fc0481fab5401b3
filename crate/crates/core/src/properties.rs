//! Per-tuple structural checks used by exhaustive verification sweeps.

use serde::{Deserialize, Serialize};

use crate::achievability::{
    achievable_region_fm, sumrate_simplification_exact, sumrate_simplification_holds, theta_table,
};
use crate::converse::{capacity_region, no_feedback};
use crate::model::{ChannelParams, User};
use crate::simulator::check_decomposition;

/// All tuples in `{0..=max}^6`, in lexicographic order of the fields.
pub fn tuples(max: u64) -> impl Iterator<Item = ChannelParams> + Clone {
    let base = max + 1;
    (0..base.pow(6)).map(move |mut k| {
        let mut v = [0u64; 6];
        for slot in v.iter_mut().rev() {
            *slot = k % base;
            k /= base;
        }
        ChannelParams::from_array(v)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    /// The eliminated achievable region equals the outer bound region.
    AchievabilityEqualsConverse,
    /// `θ1 + θ3 = n_ij`, `θ5 = max(θ4, θ3)`, `θ7 = max(θ3, θ6)` for both users.
    ThetaIdentities,
    /// Adding feedback, or one more feedback level, never shrinks the region.
    FeedbackMonotone,
    /// Feedback beyond `max(n_ii→, n_ij)` changes nothing.
    Saturation,
    /// Swapping the user labels mirrors the region.
    IndexSymmetry,
    /// Dimension formulas agree with bit tracing for both users.
    DecompositionOracle,
    /// The three retained sum-rate terms are each at most every dropped one.
    SumRateSimplificationLiteral,
    /// The minimum over three retained sum-rate terms equals the minimum over all ten.
    SumRateSimplificationExact,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::AchievabilityEqualsConverse,
        Property::ThetaIdentities,
        Property::FeedbackMonotone,
        Property::Saturation,
        Property::IndexSymmetry,
        Property::DecompositionOracle,
        Property::SumRateSimplificationLiteral,
        Property::SumRateSimplificationExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::AchievabilityEqualsConverse => "achievability-equals-converse",
            Property::ThetaIdentities => "theta-identities",
            Property::FeedbackMonotone => "feedback-monotonicity",
            Property::Saturation => "feedback-saturation",
            Property::IndexSymmetry => "index-symmetry",
            Property::DecompositionOracle => "decomposition-oracle",
            Property::SumRateSimplificationLiteral => "sum-rate-simplification-literal",
            Property::SumRateSimplificationExact => "sum-rate-simplification-exact",
        }
    }

    pub fn holds(self, p: &ChannelParams) -> bool {
        match self {
            Property::AchievabilityEqualsConverse => achievable_region_fm(&theta_table(p)) == capacity_region(p),
            Property::ThetaIdentities => theta_identities_hold(p),
            Property::FeedbackMonotone => feedback_monotone(p),
            Property::Saturation => saturates(p),
            Property::IndexSymmetry => capacity_region(&p.swapped()) == capacity_region(p).mirrored(),
            Property::DecompositionOracle => {
                User::BOTH.iter().all(|i| check_decomposition(p, *i).is_empty())
            }
            Property::SumRateSimplificationLiteral => sumrate_simplification_holds(&theta_table(p)),
            Property::SumRateSimplificationExact => sumrate_simplification_exact(&theta_table(p)),
        }
    }
}

pub fn theta_identities_hold(p: &ChannelParams) -> bool {
    let t = theta_table(p);
    User::BOTH.iter().all(|&i| {
        t.get(1, i) + t.get(3, i) == p.cross_at(i) as i64
            && t.get(5, i) == t.get(4, i).max(t.get(3, i))
            && t.get(7, i) == t.get(3, i).max(t.get(6, i))
    })
}

pub fn feedback_monotone(p: &ChannelParams) -> bool {
    let here = capacity_region(p);
    let more1 = capacity_region(&p.with_feedback(p.n11_fb + 1, p.n22_fb));
    let more2 = capacity_region(&p.with_feedback(p.n11_fb, p.n22_fb + 1));
    capacity_region(&no_feedback(p)).subset_of(&here) && here.subset_of(&more1) && here.subset_of(&more2)
}

pub fn saturates(p: &ChannelParams) -> bool {
    let s1 = p.signal_levels(User::One);
    let s2 = p.signal_levels(User::Two);
    let at = capacity_region(&p.with_feedback(s1, s2));
    [(s1 + 1, s2), (s1, s2 + 1), (s1 + 7, s2 + 7)]
        .iter()
        .all(|&(a, b)| capacity_region(&p.with_feedback(a, b)) == at)
}
