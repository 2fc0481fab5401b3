//! Channel parameters, the signal dimension `q` and interference regimes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One of the two transmitter-receiver pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            User::One => 1,
            User::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<User> {
        match i {
            1 => Ok(User::One),
            2 => Ok(User::Two),
            other => Err(Error::UserIndex(other)),
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

pub const FIELD_NAMES: [&str; 6] = ["n11_fwd", "n22_fwd", "n12", "n21", "n11_fb", "n22_fb"];

/// Bit-pipe counts of the channel.
///
/// `n12` counts the pipes from transmitter 2 to receiver 1 (interference seen
/// at receiver 1) and `n21` those from transmitter 1 to receiver 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ChannelParams {
    pub n11_fwd: u64,
    pub n22_fwd: u64,
    pub n12: u64,
    pub n21: u64,
    pub n11_fb: u64,
    pub n22_fb: u64,
}

impl ChannelParams {
    pub const fn new(n11_fwd: u64, n22_fwd: u64, n12: u64, n21: u64, n11_fb: u64, n22_fb: u64) -> Self {
        ChannelParams { n11_fwd, n22_fwd, n12, n21, n11_fb, n22_fb }
    }

    /// Checks six raw integers and builds the parameter record.
    pub fn validate(raw: &[i64]) -> Result<Self> {
        if raw.len() != 6 {
            return Err(Error::ParameterCount(raw.len()));
        }
        let mut v = [0u64; 6];
        for (k, &x) in raw.iter().enumerate() {
            if x < 0 {
                return Err(Error::InvalidParameter {
                    field: FIELD_NAMES[k],
                    position: k + 1,
                    reason: format!("must be non-negative, got {x}"),
                });
            }
            v[k] = x as u64;
        }
        Ok(Self::from_array(v))
    }

    pub fn from_array(v: [u64; 6]) -> Self {
        ChannelParams::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(&self) -> [u64; 6] {
        [self.n11_fwd, self.n22_fwd, self.n12, self.n21, self.n11_fb, self.n22_fb]
    }

    /// Forward parameters with the given feedback pair.
    pub fn with_feedback(&self, n11_fb: u64, n22_fb: u64) -> Self {
        ChannelParams { n11_fb, n22_fb, ..*self }
    }

    /// `q = max(n11→, n22→, n12, n21)`.
    pub fn q(&self) -> u64 {
        self.n11_fwd.max(self.n22_fwd).max(self.n12).max(self.n21)
    }

    /// Direct pipes `n_ii→`.
    pub fn direct(&self, i: User) -> u64 {
        match i {
            User::One => self.n11_fwd,
            User::Two => self.n22_fwd,
        }
    }

    /// Interference pipes arriving at receiver `i`, `n_ij`.
    pub fn cross_at(&self, i: User) -> u64 {
        match i {
            User::One => self.n12,
            User::Two => self.n21,
        }
    }

    /// Pipes from transmitter `i` to the other receiver, `n_ji`.
    pub fn cross_from(&self, i: User) -> u64 {
        self.cross_at(i.other())
    }

    /// Feedback pipes `n_ii←`.
    pub fn feedback(&self, i: User) -> u64 {
        match i {
            User::One => self.n11_fb,
            User::Two => self.n22_fb,
        }
    }

    /// Number of signal levels at receiver `i`, `max(n_ii→, n_ij)`.
    pub fn signal_levels(&self, i: User) -> u64 {
        self.direct(i).max(self.cross_at(i))
    }

    /// Relabels the users.
    pub fn swapped(&self) -> Self {
        ChannelParams::new(self.n22_fwd, self.n11_fwd, self.n21, self.n12, self.n22_fb, self.n11_fb)
    }
}

impl fmt::Display for ChannelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.to_array();
        write!(f, "{},{},{},{},{},{}", a[0], a[1], a[2], a[3], a[4], a[5])
    }
}

impl FromStr for ChannelParams {
    type Err = Error;

    /// Parses `"a,b,c,d,e,f"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::ParameterCount(parts.len()));
        }
        let mut raw = [0i64; 6];
        for (k, p) in parts.iter().enumerate() {
            raw[k] = p.parse().map_err(|_| Error::InvalidParameter {
                field: FIELD_NAMES[k],
                position: k + 1,
                reason: format!("not an integer: {p:?}"),
            })?;
        }
        ChannelParams::validate(&raw)
    }
}

/// Free function form of [`ChannelParams::q`].
pub fn effective_q(p: &ChannelParams) -> u64 {
    p.q()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    VeryWeak,
    Weak,
    Moderate,
    Strong,
    VeryStrong,
    Undefined,
}

impl Regime {
    /// Bins `α = n_ij / n_ii→` with left-open, right-closed edges 1/2, 2/3, 1, 2.
    pub fn from_alpha(alpha: &Rational) -> Regime {
        if *alpha <= Rational::new(1, 2) {
            Regime::VeryWeak
        } else if *alpha <= Rational::new(2, 3) {
            Regime::Weak
        } else if *alpha <= 1 {
            Regime::Moderate
        } else if *alpha <= 2 {
            Regime::Strong
        } else {
            Regime::VeryStrong
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::VeryWeak => "very weak",
            Regime::Weak => "weak",
            Regime::Moderate => "moderate",
            Regime::Strong => "strong",
            Regime::VeryStrong => "very strong",
            Regime::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimePair {
    pub regime_1: Regime,
    pub regime_2: Regime,
    /// `None` when the direct link is absent.
    pub alpha_1: Option<Rational>,
    pub alpha_2: Option<Rational>,
}

pub fn classify_regimes(p: &ChannelParams) -> RegimePair {
    let classify = |i: User| {
        let direct = p.direct(i);
        if direct == 0 {
            (Regime::Undefined, None)
        } else {
            let alpha = Rational::new(p.cross_at(i) as i64, direct as i64);
            (Regime::from_alpha(&alpha), Some(alpha))
        }
    };
    let (regime_1, alpha_1) = classify(User::One);
    let (regime_2, alpha_2) = classify(User::Two);
    RegimePair { regime_1, regime_2, alpha_1, alpha_2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_accepts_example_tuple() {
        let p = ChannelParams::validate(&[20, 15, 12, 13, 15, 14]).unwrap();
        assert_eq!(p, ChannelParams::new(20, 15, 12, 13, 15, 14));
        assert_eq!(p.q(), 20);
    }

    #[test]
    fn validate_zero_channel() {
        let p = ChannelParams::validate(&[0; 6]).unwrap();
        assert_eq!(effective_q(&p), 0);
    }

    #[test]
    fn validate_names_negative_field() {
        let err = ChannelParams::validate(&[3, -1, 0, 0, 0, 0]).unwrap_err();
        match err {
            Error::InvalidParameter { field, position, .. } => {
                assert_eq!(field, "n22_fwd");
                assert_eq!(position, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_non_integer() {
        let err = "1,2,3.5,4,5,6".parse::<ChannelParams>().unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { position: 3, .. }));
        assert!(matches!("1,2,3".parse::<ChannelParams>(), Err(Error::ParameterCount(3))));
    }

    #[test]
    fn effective_q_examples() {
        assert_eq!(ChannelParams::new(20, 15, 12, 13, 0, 0).q(), 20);
        assert_eq!(ChannelParams::new(7, 8, 15, 13, 0, 0).q(), 15);
    }

    #[test]
    fn regimes_match_example_labels() {
        let r = |a, b, c, d| {
            let rp = classify_regimes(&ChannelParams::new(a, b, c, d, 0, 0));
            (rp.regime_1, rp.regime_2)
        };
        assert_eq!(r(20, 15, 12, 13), (Regime::Weak, Regime::Moderate));
        assert_eq!(r(10, 10, 3, 8), (Regime::VeryWeak, Regime::Moderate));
        assert_eq!(r(10, 20, 6, 12), (Regime::Weak, Regime::Weak));
        assert_eq!(r(7, 8, 15, 13), (Regime::VeryStrong, Regime::Strong));
        assert_eq!(r(10, 9, 2, 15), (Regime::VeryWeak, Regime::Strong));
    }

    #[test]
    fn regime_bin_edges() {
        assert_eq!(Regime::from_alpha(&Rational::new(1, 2)), Regime::VeryWeak);
        assert_eq!(Regime::from_alpha(&Rational::new(2, 3)), Regime::Weak);
        assert_eq!(Regime::from_alpha(&Rational::new(1, 1)), Regime::Moderate);
        assert_eq!(Regime::from_alpha(&Rational::new(2, 1)), Regime::Strong);
        assert_eq!(Regime::from_alpha(&Rational::new(201, 100)), Regime::VeryStrong);
        let rp = classify_regimes(&ChannelParams::new(0, 4, 3, 1, 0, 0));
        assert_eq!(rp.regime_1, Regime::Undefined);
        assert_eq!(rp.alpha_1, None);
    }

    proptest! {
        #[test]
        fn q_is_swap_invariant(v in proptest::array::uniform6(0u64..50)) {
            let p = ChannelParams::from_array(v);
            prop_assert_eq!(p.q(), p.swapped().q());
            prop_assert_eq!(p.swapped().swapped(), p);
        }

        #[test]
        fn text_and_json_roundtrip(v in proptest::array::uniform6(0u64..1000)) {
            let p = ChannelParams::from_array(v);
            prop_assert_eq!(p.to_string().parse::<ChannelParams>().unwrap(), p);
            let json = serde_json::to_string(&p).unwrap();
            prop_assert_eq!(serde_json::from_str::<ChannelParams>(&json).unwrap(), p);
        }
    }
}
