//! Outer bounds on `(R1, R2)` and the resulting capacity region.

use serde::{Deserialize, Serialize};

use crate::geometry::{HalfPlane, RateRegion};
use crate::model::{ChannelParams, User};

#[inline]
pub(crate) fn pos(x: i64) -> i64 {
    x.max(0)
}

/// The seven scalar right-hand sides of the capacity region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConverseBounds {
    pub r1_bound: i64,
    pub r2_bound: i64,
    pub sum_bound_cutset: i64,
    pub sum_bound_fb: i64,
    pub two_r1_plus_r2: i64,
    pub r1_plus_two_r2: i64,
}

impl ConverseBounds {
    pub fn individual(&self, i: User) -> i64 {
        match i {
            User::One => self.r1_bound,
            User::Two => self.r2_bound,
        }
    }

    /// Bound on `2R_i + R_j`.
    pub fn weighted(&self, i: User) -> i64 {
        match i {
            User::One => self.two_r1_plus_r2,
            User::Two => self.r1_plus_two_r2,
        }
    }

    pub fn sum(&self) -> i64 {
        self.sum_bound_cutset.min(self.sum_bound_fb)
    }

    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        [
            (1, 0, self.r1_bound),
            (0, 1, self.r2_bound),
            (1, 1, self.sum_bound_cutset),
            (1, 1, self.sum_bound_fb),
            (2, 1, self.two_r1_plus_r2),
            (1, 2, self.r1_plus_two_r2),
        ]
        .into_iter()
        .map(|(a, b, c)| HalfPlane::int(a, b, c).expect("nonzero normal"))
        .collect()
    }
}

struct Signed {
    d: [i64; 2],
    // c[i] = n_ij, interference arriving at receiver i
    c: [i64; 2],
    fb: [i64; 2],
}

impl Signed {
    fn new(p: &ChannelParams) -> Self {
        Signed {
            d: [p.n11_fwd as i64, p.n22_fwd as i64],
            c: [p.n12 as i64, p.n21 as i64],
            fb: [p.n11_fb as i64, p.n22_fb as i64],
        }
    }

    /// `max((n_kk→ − n_kl)^+, n_lk, n_kk→ − (max(n_kk→, n_kl) − n_kk←)^+)`
    /// with `l` the other user.
    fn fb_term(&self, k: usize) -> i64 {
        let l = 1 - k;
        let n_kk = self.d[k];
        let n_kl = self.c[k];
        let n_lk = self.c[l];
        pos(n_kk - n_kl).max(n_lk).max(n_kk - pos(n_kk.max(n_kl) - self.fb[k]))
    }
}

/// Evaluates the six families of outer bounds, integer-exact.
pub fn converse_bounds(p: &ChannelParams) -> ConverseBounds {
    let s = Signed::new(p);
    let individual = |i: usize| {
        let j = 1 - i;
        let (n_ii, n_jj) = (s.d[i], s.d[j]);
        let (n_ij, n_ji) = (s.c[i], s.c[j]);
        let cut = n_ii.max(n_ji).min(n_ii.max(n_ij));
        let fb = n_ii.max(n_ji).min(n_ii.max(s.fb[j] - pos(n_jj - n_ji)));
        cut.min(fb)
    };
    let (n11, n22, n12, n21) = (s.d[0], s.d[1], s.c[0], s.c[1]);
    let sum_cut = (n22.max(n12) + pos(n11 - n12)).min(n11.max(n21) + pos(n22 - n21));
    let sum_fb = s.fb_term(0) + s.fb_term(1);
    let weighted = |i: usize| {
        let j = 1 - i;
        let (n_ii, n_ij, n_ji) = (s.d[i], s.c[i], s.c[j]);
        n_ii.max(n_ji) + pos(n_ii - n_ij) + s.fb_term(j)
    };
    ConverseBounds {
        r1_bound: individual(0),
        r2_bound: individual(1),
        sum_bound_cutset: sum_cut,
        sum_bound_fb: sum_fb,
        two_r1_plus_r2: weighted(0),
        r1_plus_two_r2: weighted(1),
    }
}

pub fn capacity_region(p: &ChannelParams) -> RateRegion {
    RateRegion::from_halfplanes(&converse_bounds(p).halfplanes())
        .expect("capacity bounds are non-negative and bound both rates")
}

pub fn no_feedback(p: &ChannelParams) -> ChannelParams {
    p.with_feedback(0, 0)
}

/// Feedback on both sides raised to `max(n_ii→, n_ij)`.
pub fn perfect_feedback(p: &ChannelParams) -> ChannelParams {
    p.with_feedback(p.signal_levels(User::One), p.signal_levels(User::Two))
}

/// Perfect feedback on side `i`, none on the other.
pub fn one_sided_perfect(p: &ChannelParams, i: User) -> ChannelParams {
    match i {
        User::One => p.with_feedback(p.signal_levels(User::One), 0),
        User::Two => p.with_feedback(0, p.signal_levels(User::Two)),
    }
}
