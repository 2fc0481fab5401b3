//! Capacity regions of the two-user linear deterministic interference channel
//! with noisy channel-output feedback, computed in exact arithmetic.

pub mod achievability;
pub mod converse;
pub mod error;
pub mod gains;
pub mod geometry;
pub mod model;
pub mod properties;
pub mod rational;
pub mod simulator;

pub use achievability::{achievable_region_fm, fm_project, theta_table, SplitRateSystem, ThetaTable};
pub use converse::{capacity_region, converse_bounds, ConverseBounds};
pub use error::{Error, Result};
pub use gains::{feedback_thresholds, gain_report, gain_surface, individual_gain, sum_gain, GainMetric, GainReport};
pub use geometry::{Axis, HalfPlane, Point, RateRegion, SliceMax};
pub use model::{classify_regimes, ChannelParams, Regime, RegimePair, User};
pub use rational::Rational;
pub use simulator::{decompose, dims_oracle, feedback_signal, forward, run_session, shift_apply, BitWord, Decomposition};
