//! Bit-exact simulator of the deterministic channel over GF(2).
//!
//! Words are indexed MSB-first: level 1 is the top bit-pipe and sits at
//! index 0. The lower shift matrix `S` moves every bit one level down and
//! drops the bottom one, so `S^k` models an attenuation of `k` levels.
//!
//! Besides the forward and feedback maps this module carries the input and
//! output decompositions used by the outer bounds, and an empirical version
//! of them obtained by pushing unit vectors through the channel.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::converse::pos;
use crate::error::{Error, Result};
use crate::model::{ChannelParams, User};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord { bits: vec![false; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    /// Word with a single one at `level` (1-based).
    pub fn unit(len: usize, level: usize) -> Self {
        let mut w = BitWord::zeros(len);
        w.bits[level - 1] = true;
        w
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        BitWord { bits: (0..len).map(|_| rng.random()).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit at `level` (1-based).
    pub fn level(&self, level: usize) -> bool {
        self.bits[level - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// Levels (1-based) holding a one.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| k + 1)
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord> {
        if self.len() != other.len() {
            return Err(Error::WordLength { expected: self.len(), got: other.len() });
        }
        Ok(BitWord { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() })
    }

    /// `zeros(len − self.len()) ++ self`.
    pub fn left_padded(&self, len: usize) -> BitWord {
        let mut bits = vec![false; len.saturating_sub(self.len())];
        bits.extend_from_slice(&self.bits);
        BitWord { bits }
    }

    /// `self ++ zeros`, truncated to `len`.
    pub fn right_padded(&self, len: usize) -> BitWord {
        let mut bits: Vec<bool> = self.bits.iter().copied().take(len).collect();
        bits.resize(len, false);
        BitWord { bits }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitWord::from_bits)
    }
}

/// `S^k · w`.
pub fn shift_apply(k: usize, w: &BitWord) -> Result<BitWord> {
    let q = w.len();
    if k > q {
        return Err(Error::ShiftOutOfRange { shift: k, len: q });
    }
    let mut out = vec![false; q];
    out[k..].copy_from_slice(&w.bits[..q - k]);
    Ok(BitWord { bits: out })
}

fn check_len(w: &BitWord, q: usize) -> Result<()> {
    if w.len() != q {
        return Err(Error::WordLength { expected: q, got: w.len() });
    }
    Ok(())
}

/// Channel outputs `(Y→_1, Y→_2)` for inputs `(X_1, X_2)`.
pub fn forward(x1: &BitWord, x2: &BitWord, p: &ChannelParams) -> Result<(BitWord, BitWord)> {
    let q = p.q() as usize;
    check_len(x1, q)?;
    check_len(x2, q)?;
    let out = |own: &BitWord, other: &BitWord, i: User| -> Result<BitWord> {
        let a = shift_apply(q - p.direct(i) as usize, own)?;
        let b = shift_apply(q - p.cross_at(i) as usize, other)?;
        a.xor(&b)
    };
    Ok((out(x1, x2, User::One)?, out(x2, x1, User::Two)?))
}

/// Number of output levels that reach transmitter `i`, `min(n_ii←, max(n_ii→, n_ij))`.
pub fn feedback_width(p: &ChannelParams, i: User) -> usize {
    p.feedback(i).min(p.signal_levels(i)) as usize
}

/// Feedback fragment seen by transmitter `i` for output `y` of receiver `i`:
/// the top `min(n_ii←, M)` of the `M = max(n_ii→, n_ij)` signal levels.
pub fn feedback_signal(y: &BitWord, p: &ChannelParams, i: User) -> Result<BitWord> {
    let q = p.q() as usize;
    check_len(y, q)?;
    let first = q - p.signal_levels(i) as usize;
    let width = feedback_width(p, i);
    Ok(BitWord { bits: y.bits[first..first + width].to_vec() })
}

/// The full-length word `S^{(max(n_ii→, n_ij) − n_ii←)^+} · y`, whose
/// lowest `min(n_ii←, max(n_ii→, n_ij))` levels carry the feedback.
pub fn feedback_by_shift(y: &BitWord, p: &ChannelParams, i: User) -> Result<BitWord> {
    check_len(y, p.q() as usize)?;
    let s = pos(p.signal_levels(i) as i64 - p.feedback(i) as i64) as usize;
    shift_apply(s, y)
}

/// Checks `(0, …, 0, fragment) = S^{(M − n_ii←)^+} · y` for output `y`.
pub fn padding_identity_holds(y: &BitWord, p: &ChannelParams, i: User) -> Result<bool> {
    let fragment = feedback_signal(y, p, i)?;
    Ok(fragment.left_padded(p.q() as usize) == feedback_by_shift(y, p, i)?)
}

/// Contiguous run of levels, 1-based; empty when `count == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Levels {
    pub first: u64,
    pub count: u64,
}

impl Levels {
    fn new(first: u64, count: u64) -> Self {
        if count == 0 {
            Levels { first: 0, count: 0 }
        } else {
            Levels { first, count }
        }
    }

    /// Level numbers covered.
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.first..self.first + self.count
    }

    pub fn contains(&self, level: u64) -> bool {
        self.count > 0 && level >= self.first && level < self.first + self.count
    }

    /// The levels as an explicit list.
    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

/// Named parts of the input and output words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    /// Seen by both receivers.
    C,
    /// Seen only by the own receiver.
    P,
    /// Seen only by the other receiver.
    D,
    /// Never seen (padding).
    Q,
    DF,
    DG,
    CF,
    CG,
    U,
    /// Output levels above every signal.
    YQ,
    /// Output levels carried by the feedback link.
    YFb,
    /// Signal levels lost in the feedback noise.
    YG,
}

impl Part {
    pub const ALL: [Part; 12] =
        [Part::C, Part::P, Part::D, Part::Q, Part::DF, Part::DG, Part::CF, Part::CG, Part::U, Part::YQ, Part::YFb, Part::YG];

    pub fn name(self) -> &'static str {
        match self {
            Part::C => "X_C",
            Part::P => "X_P",
            Part::D => "X_D",
            Part::Q => "X_Q",
            Part::DF => "X_DF",
            Part::DG => "X_DG",
            Part::CF => "X_CF",
            Part::CG => "X_CG",
            Part::U => "X_U",
            Part::YQ => "Y_Q",
            Part::YFb => "Y_fb",
            Part::YG => "Y_G",
        }
    }
}

/// Input and output decomposition for one user, from the closed-form
/// dimension formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub user: User,
    pub q: u64,
    pub x_c: Levels,
    pub x_p: Levels,
    pub x_d: Levels,
    pub x_q: Levels,
    pub x_df: Levels,
    pub x_dg: Levels,
    pub x_cf: Levels,
    pub x_cg: Levels,
    pub x_u: Levels,
    pub y_q: Levels,
    pub y_fb: Levels,
    pub y_g: Levels,
}

impl Decomposition {
    pub fn part(&self, part: Part) -> Levels {
        match part {
            Part::C => self.x_c,
            Part::P => self.x_p,
            Part::D => self.x_d,
            Part::Q => self.x_q,
            Part::DF => self.x_df,
            Part::DG => self.x_dg,
            Part::CF => self.x_cf,
            Part::CG => self.x_cg,
            Part::U => self.x_u,
            Part::YQ => self.y_q,
            Part::YFb => self.y_fb,
            Part::YG => self.y_g,
        }
    }

    pub fn dim(&self, part: Part) -> u64 {
        self.part(part).count
    }

    /// `dim (X_CF, X_DF)`.
    pub fn dim_cf_df(&self) -> u64 {
        self.x_cf.count + self.x_df.count
    }

    /// Short tag list for an input level, e.g. `C,CF,U`.
    pub fn input_tags(&self, level: u64) -> String {
        let tags: Vec<&str> = [Part::C, Part::P, Part::D, Part::Q, Part::CF, Part::CG, Part::DF, Part::DG, Part::U]
            .into_iter()
            .filter(|p| self.part(*p).contains(level))
            .map(|p| &p.name()[2..])
            .collect();
        tags.join(",")
    }

    pub fn output_tag(&self, level: u64) -> &'static str {
        [Part::YQ, Part::YFb, Part::YG]
            .into_iter()
            .find(|p| self.part(*p).contains(level))
            .map(|p| &p.name()[2..])
            .unwrap_or("")
    }
}

/// Evaluates every dimension formula for user `i` and lays the parts out
/// top-down: C above P or D, then padding; the feedback-visible part of C
/// and D sits on top of each.
pub fn decompose(p: &ChannelParams, i: User) -> Decomposition {
    let j = i.other();
    let q = p.q() as i64;
    let n_ii = p.direct(i) as i64;
    let n_jj = p.direct(j) as i64;
    let n_ij = p.cross_at(i) as i64;
    let n_ji = p.cross_from(i) as i64;
    let fb_i = p.feedback(i) as i64;
    let fb_j = p.feedback(j) as i64;

    let c = n_ii.min(n_ji);
    let pp = pos(n_ii - n_ji);
    let d = pos(n_ji - n_ii);
    let qpad = q - n_ii.max(n_ji);

    let df = pos(n_ji - n_ii).min(pos(fb_j - n_ii - pos(n_jj - n_ji).min(n_ij) - pos(pos(n_jj - n_ij) - n_ji)));
    let dg = d - df;
    let cf_df = pos(fb_j.min(n_jj.max(n_ji)) - pos(n_jj - n_ji));
    let cf = cf_df - df;
    let cg = c - cf;
    let u = n_jj.min(n_ij) - pos(n_jj - n_ji).min(n_ij) + pos(n_ji - n_jj);

    let m_i = n_ii.max(n_ij);
    let y_fb = fb_i.min(m_i);
    let y_g = pos(m_i - fb_i);
    let y_q = q - m_i;

    let l = |first: i64, count: i64| Levels::new(first as u64, count.max(0) as u64);
    Decomposition {
        user: i,
        q: q as u64,
        x_c: l(1, c),
        x_p: l(c + 1, pp),
        x_d: l(c + 1, d),
        x_q: l(n_ii.max(n_ji) + 1, qpad),
        x_df: l(c + 1, df),
        x_dg: l(c + df + 1, dg),
        x_cf: l(1, cf),
        x_cg: l(cf + 1, cg),
        x_u: l(1, u),
        y_q: l(1, y_q),
        y_fb: l(y_q + 1, y_fb),
        y_g: l(y_q + y_fb + 1, y_g),
    }
}

/// Level sets found by tracing unit vectors through the channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDecomposition {
    pub user: User,
    pub q: u64,
    pub levels: Vec<(Part, Vec<u64>)>,
}

impl EmpiricalDecomposition {
    pub fn levels_of(&self, part: Part) -> &[u64] {
        self.levels.iter().find(|(p, _)| *p == part).map(|(_, v)| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self, part: Part) -> u64 {
        self.levels_of(part).len() as u64
    }
}

fn unit_outputs(p: &ChannelParams, sender: User, level: usize) -> (BitWord, BitWord) {
    let q = p.q() as usize;
    let e = BitWord::unit(q, level);
    let z = BitWord::zeros(q);
    let (y1, y2) = match sender {
        User::One => forward(&e, &z, p),
        User::Two => forward(&z, &e, p),
    }
    .expect("lengths match q");
    (y1, y2)
}

fn output_of(outputs: &(BitWord, BitWord), receiver: User) -> &BitWord {
    match receiver {
        User::One => &outputs.0,
        User::Two => &outputs.1,
    }
}

/// Traces each input level of user `i` (other input silent) and each output
/// level of receiver `i`, classifying levels by what actually reaches which
/// receiver and feedback link. `X_U` follows its verbal definition: levels
/// reaching receiver `j` that either land on a common level of `X_j` or on
/// no level of `X_j` at all.
#[allow(clippy::needless_range_loop)]
pub fn dims_oracle(p: &ChannelParams, i: User) -> EmpiricalDecomposition {
    let j = i.other();
    let q = p.q() as usize;

    // position of each X_j level at receiver j, and which X_j levels are common
    let mut own_pos_j = vec![None; q + 1];
    let mut common_j = vec![false; q + 1];
    for k in 1..=q {
        let out = unit_outputs(p, j, k);
        let at_j = output_of(&out, j);
        let at_i = output_of(&out, i);
        if let Some(pos) = at_j.ones().next() {
            own_pos_j[pos] = Some(k);
        }
        common_j[k] = !at_j.is_zero() && !at_i.is_zero();
    }

    let mut sets: Vec<(Part, Vec<u64>)> = Part::ALL.iter().map(|p| (*p, Vec::new())).collect();
    let mut push = |part: Part, level: usize| {
        sets.iter_mut().find(|(p, _)| *p == part).unwrap().1.push(level as u64);
    };

    for m in 1..=q {
        let out = unit_outputs(p, i, m);
        let own = output_of(&out, i);
        let other = output_of(&out, j);
        let seen_own = !own.is_zero();
        let seen_other = !other.is_zero();
        let in_fb_j = !feedback_signal(other, p, j).unwrap().is_zero();
        match (seen_own, seen_other) {
            (true, true) => {
                push(Part::C, m);
                push(if in_fb_j { Part::CF } else { Part::CG }, m);
            }
            (true, false) => push(Part::P, m),
            (false, true) => {
                push(Part::D, m);
                push(if in_fb_j { Part::DF } else { Part::DG }, m);
            }
            (false, false) => push(Part::Q, m),
        }
        let landing = other.ones().next();
        if let Some(pos) = landing {
            let hits_common_or_nothing = match own_pos_j[pos] {
                None => true,
                Some(k) => common_j[k],
            };
            if hits_common_or_nothing {
                push(Part::U, m);
            }
        }
    }

    // signal levels at receiver i: anything some transmitter can reach
    let mut signal = vec![false; q + 1];
    for sender in User::BOTH {
        for k in 1..=q {
            for pos in output_of(&unit_outputs(p, sender, k), i).ones() {
                signal[pos] = true;
            }
        }
    }
    for s in 1..=q {
        if !signal[s] {
            push(Part::YQ, s);
        } else if !feedback_signal(&BitWord::unit(q, s), p, i).unwrap().is_zero() {
            push(Part::YFb, s);
        } else {
            push(Part::YG, s);
        }
    }
    EmpiricalDecomposition { user: i, q: q as u64, levels: sets }
}

/// A disagreement between a dimension formula and the traced channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMismatch {
    pub params: ChannelParams,
    pub user: User,
    pub part: Part,
    pub formula: Levels,
    pub traced: Vec<u64>,
}

impl fmt::Display for DecompositionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "params {} user {} {}: formula dim {} levels {:?}, traced dim {} levels {:?}",
            self.params,
            self.user,
            self.part.name(),
            self.formula.count,
            self.formula.to_vec(),
            self.traced.len(),
            self.traced
        )
    }
}

/// Compares formula and traced level sets part by part.
pub fn check_decomposition(p: &ChannelParams, i: User) -> Vec<DecompositionMismatch> {
    let formula = decompose(p, i);
    let traced = dims_oracle(p, i);
    Part::ALL
        .iter()
        .filter(|part| formula.part(**part).to_vec() != traced.levels_of(**part))
        .map(|part| DecompositionMismatch {
            params: *p,
            user: i,
            part: *part,
            formula: formula.part(*part),
            traced: traced.levels_of(*part).to_vec(),
        })
        .collect()
}

/// Encoder of one transmitter: maps the feedback received so far to the
/// next channel input. Message content is internal to the policy.
pub trait EncoderPolicy {
    /// `feedback` holds the fragments of uses `1..use_index`.
    fn next_input(&mut self, use_index: usize, feedback: &[BitWord], q: usize) -> BitWord;
}

impl<F> EncoderPolicy for F
where
    F: FnMut(usize, &[BitWord], usize) -> BitWord,
{
    fn next_input(&mut self, use_index: usize, feedback: &[BitWord], q: usize) -> BitWord {
        self(use_index, feedback, q)
    }
}

/// Always transmits zeros.
#[derive(Debug, Clone, Default)]
pub struct ZeroPolicy;

impl EncoderPolicy for ZeroPolicy {
    fn next_input(&mut self, _use_index: usize, _feedback: &[BitWord], q: usize) -> BitWord {
        BitWord::zeros(q)
    }
}

/// A single one at `level` during `at_use`, zeros otherwise.
#[derive(Debug, Clone)]
pub struct ImpulsePolicy {
    pub level: usize,
    pub at_use: usize,
}

impl EncoderPolicy for ImpulsePolicy {
    fn next_input(&mut self, use_index: usize, _feedback: &[BitWord], q: usize) -> BitWord {
        if use_index == self.at_use && (1..=q).contains(&self.level) {
            BitWord::unit(q, self.level)
        } else {
            BitWord::zeros(q)
        }
    }
}

/// Uniform random words from a seeded ChaCha stream.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        RandomPolicy { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl EncoderPolicy for RandomPolicy {
    fn next_input(&mut self, _use_index: usize, _feedback: &[BitWord], q: usize) -> BitWord {
        BitWord::random(q, &mut self.rng)
    }
}

/// Sends `initial` first, then retransmits the latest feedback fragment on
/// the top levels.
#[derive(Debug, Clone)]
pub struct EchoPolicy {
    pub initial: BitWord,
}

impl EncoderPolicy for EchoPolicy {
    fn next_input(&mut self, _use_index: usize, feedback: &[BitWord], q: usize) -> BitWord {
        match feedback.last() {
            None => self.initial.right_padded(q),
            Some(fb) => fb.right_padded(q),
        }
    }
}

/// Named encoder pairs used by the command-line and Python front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Zero,
    Impulse,
    Random,
    Echo,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Zero => "zero",
            PolicyKind::Impulse => "impulse",
            PolicyKind::Random => "random",
            PolicyKind::Echo => "echo",
        }
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" => Ok(PolicyKind::Zero),
            "impulse" => Ok(PolicyKind::Impulse),
            "random" => Ok(PolicyKind::Random),
            "echo" => Ok(PolicyKind::Echo),
            other => Err(Error::Parse(format!("unknown policy {other:?}"))),
        }
    }
}

/// Encoders for both transmitters. Impulse: `impulse_user` sends a single one
/// at `level` during `at_use` while the other stays silent. Random: streams
/// seeded with `2 seed` and `2 seed + 1`. Echo: initial words drawn from a
/// stream seeded with `seed`.
pub fn policy_pair(
    kind: PolicyKind,
    seed: u64,
    q: usize,
    impulse_user: User,
    level: usize,
    at_use: usize,
) -> (Box<dyn EncoderPolicy>, Box<dyn EncoderPolicy>) {
    match kind {
        PolicyKind::Zero => (Box::new(ZeroPolicy), Box::new(ZeroPolicy)),
        PolicyKind::Impulse => {
            let imp: Box<dyn EncoderPolicy> = Box::new(ImpulsePolicy { level, at_use });
            match impulse_user {
                User::One => (imp, Box::new(ZeroPolicy)),
                User::Two => (Box::new(ZeroPolicy), imp),
            }
        }
        PolicyKind::Random => {
            (Box::new(RandomPolicy::new(seed.wrapping_mul(2))), Box::new(RandomPolicy::new(seed.wrapping_mul(2) + 1)))
        }
        PolicyKind::Echo => {
            let mut source = RandomPolicy::new(seed);
            let a = source.next_input(1, &[], q);
            let b = source.next_input(2, &[], q);
            (Box::new(EchoPolicy { initial: a }), Box::new(EchoPolicy { initial: b }))
        }
    }
}

/// One channel use. `fb1`/`fb2` are the fragments available at the
/// transmitters when the use starts, i.e. those of the previous use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelUse {
    pub use_index: usize,
    pub x1: BitWord,
    pub x2: BitWord,
    pub y1: BitWord,
    pub y2: BitWord,
    pub fb1: BitWord,
    pub fb2: BitWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionTrace {
    pub params: ChannelParams,
    pub uses: Vec<ChannelUse>,
}

impl SessionTrace {
    /// Checks the one-use feedback delay against the recorded outputs.
    pub fn delay_invariant_holds(&self) -> bool {
        self.uses.iter().enumerate().all(|(k, u)| {
            let (e1, e2) = if k == 0 {
                (
                    BitWord::zeros(feedback_width(&self.params, User::One)),
                    BitWord::zeros(feedback_width(&self.params, User::Two)),
                )
            } else {
                let prev = &self.uses[k - 1];
                (
                    feedback_signal(&prev.y1, &self.params, User::One).unwrap(),
                    feedback_signal(&prev.y2, &self.params, User::Two).unwrap(),
                )
            };
            u.fb1 == e1 && u.fb2 == e2
        })
    }

    /// One line per use: index, x1, x2, y1, y2, fb1, fb2, tab-separated.
    pub fn dump(&self) -> String {
        let mut s = String::from("use\tx1\tx2\ty1\ty2\tfb1\tfb2\n");
        for u in &self.uses {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                u.use_index, u.x1, u.x2, u.y1, u.y2, u.fb1, u.fb2
            ));
        }
        s
    }
}

/// Runs `uses` channel uses with delay-one feedback.
pub fn run_session(
    policy1: &mut dyn EncoderPolicy,
    policy2: &mut dyn EncoderPolicy,
    p: &ChannelParams,
    uses: usize,
) -> Result<SessionTrace> {
    if uses == 0 {
        return Err(Error::EmptySession);
    }
    let q = p.q() as usize;
    let mut hist1: Vec<BitWord> = Vec::with_capacity(uses);
    let mut hist2: Vec<BitWord> = Vec::with_capacity(uses);
    let mut records = Vec::with_capacity(uses);
    for n in 1..=uses {
        let x1 = policy1.next_input(n, &hist1, q);
        let x2 = policy2.next_input(n, &hist2, q);
        let (y1, y2) = forward(&x1, &x2, p)?;
        let fb1 = hist1.last().cloned().unwrap_or_else(|| BitWord::zeros(feedback_width(p, User::One)));
        let fb2 = hist2.last().cloned().unwrap_or_else(|| BitWord::zeros(feedback_width(p, User::Two)));
        hist1.push(feedback_signal(&y1, p, User::One)?);
        hist2.push(feedback_signal(&y2, p, User::Two)?);
        records.push(ChannelUse { use_index: n, x1, x2, y1, y2, fb1, fb2 });
    }
    Ok(SessionTrace { params: *p, uses: records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn params(v: [u64; 6]) -> ChannelParams {
        ChannelParams::from_array(v)
    }

    /// Dense q×q matrix power of the lower shift, applied by plain
    /// matrix-vector multiplication mod 2.
    fn matrix_shift(k: usize, x: &BitWord) -> BitWord {
        let q = x.len();
        let mut s = vec![vec![0u8; q]; q];
        for r in 1..q {
            s[r][r - 1] = 1;
        }
        let mut m: Vec<Vec<u8>> = (0..q).map(|r| (0..q).map(|c| (r == c) as u8).collect()).collect();
        for _ in 0..k {
            m = (0..q)
                .map(|r| (0..q).map(|c| (0..q).map(|t| m[r][t] * s[t][c]).sum::<u8>() % 2).collect())
                .collect();
        }
        BitWord::from_bits((0..q).map(|r| (0..q).map(|c| m[r][c] * x.bits()[c] as u8).sum::<u8>() % 2 == 1).collect())
    }

    #[test]
    fn shift_cases() {
        let x = w("1010");
        assert_eq!(shift_apply(0, &x).unwrap(), x);
        assert_eq!(shift_apply(4, &x).unwrap(), w("0000"));
        assert_eq!(shift_apply(2, &x).unwrap(), w("0010"));
        assert!(matches!(shift_apply(5, &x), Err(Error::ShiftOutOfRange { .. })));
        for k in 0..=4 {
            assert_eq!(shift_apply(k, &x).unwrap(), matrix_shift(k, &x));
        }
    }

    #[test]
    fn forward_cases() {
        let p = params([2, 2, 1, 1, 0, 0]);
        let (y1, y2) = forward(&w("10"), &w("10"), &p).unwrap();
        assert_eq!(y1, w("11"));
        assert_eq!(y2, w("11"));
        let z = BitWord::zeros(2);
        assert_eq!(forward(&z, &z, &p).unwrap(), (z.clone(), z.clone()));

        let p = params([3, 5, 2, 4, 0, 0]);
        let x1 = w("10110");
        let (y1, _) = forward(&x1, &BitWord::zeros(5), &p).unwrap();
        assert_eq!(y1, shift_apply(2, &x1).unwrap());
        assert!(forward(&w("10"), &x1, &p).is_err());
    }

    #[test]
    fn forward_matches_matrix_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for v in [[3, 5, 2, 4, 1, 1], [4, 1, 4, 0, 0, 0], [2, 2, 2, 2, 2, 2]] {
            let p = params(v);
            let q = p.q() as usize;
            for _ in 0..16 {
                let (x1, x2) = (BitWord::random(q, &mut rng), BitWord::random(q, &mut rng));
                let (y1, y2) = forward(&x1, &x2, &p).unwrap();
                let e1 = matrix_shift(q - v[0] as usize, &x1).xor(&matrix_shift(q - v[2] as usize, &x2)).unwrap();
                let e2 = matrix_shift(q - v[1] as usize, &x2).xor(&matrix_shift(q - v[3] as usize, &x1)).unwrap();
                assert_eq!((y1, y2), (e1, e2));
            }
        }
    }

    #[test]
    fn feedback_widths() {
        let p = params([20, 15, 12, 13, 15, 14]);
        let y = BitWord::unit(20, 1);
        let fb = feedback_signal(&y, &p, User::One).unwrap();
        assert_eq!(fb.len(), 15);
        assert!(fb.level(1));
        let perfect = params([20, 15, 12, 13, 30, 30]);
        assert_eq!(feedback_signal(&y, &perfect, User::One).unwrap().len(), 20);
        let none = params([20, 15, 12, 13, 0, 0]);
        assert!(feedback_signal(&y, &none, User::One).unwrap().is_empty());
    }

    #[test]
    fn padding_identity_on_channel_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in [[20, 15, 12, 13, 15, 14], [3, 5, 0, 7, 0, 6], [4, 2, 6, 1, 9, 0], [0, 0, 0, 0, 3, 3]] {
            let p = params(v);
            let q = p.q() as usize;
            for _ in 0..32 {
                let (y1, y2) = forward(&BitWord::random(q, &mut rng), &BitWord::random(q, &mut rng), &p).unwrap();
                assert!(padding_identity_holds(&y1, &p, User::One).unwrap());
                assert!(padding_identity_holds(&y2, &p, User::Two).unwrap());
            }
        }
    }

    #[test]
    fn decomposition_first_example() {
        let d = decompose(&params([20, 15, 12, 13, 0, 0]), User::One);
        assert_eq!((d.x_c.count, d.x_p.count, d.x_d.count, d.x_q.count), (13, 7, 0, 0));
        // q = 20 and max(n11, n21) = 20 leave no padding
        assert_eq!(d.x_c.count + d.x_p.count + d.x_d.count + d.x_q.count, 20);
    }

    #[test]
    fn symmetric_cut_has_no_private_or_discarded() {
        let d = decompose(&params([6, 3, 2, 6, 1, 1]), User::One);
        assert_eq!((d.x_p.count, d.x_d.count), (0, 0));
    }

    #[test]
    fn df_positional_example() {
        let p = params([3, 5, 0, 7, 0, 6]);
        assert_eq!(decompose(&p, User::One).x_df.count, 3);
        assert_eq!(dims_oracle(&p, User::One).dim(Part::DF), 3);
    }

    #[test]
    fn oracle_degenerate_and_perfect() {
        let e = dims_oracle(&ChannelParams::default(), User::One);
        assert!(Part::ALL.iter().all(|p| e.dim(*p) == 0));
        let p = params([4, 3, 5, 2, 5, 3]);
        for i in User::BOTH {
            assert_eq!(dims_oracle(&p, i).dim(Part::DG), 0);
            assert_eq!(decompose(&p, i).x_dg.count, 0);
        }
    }

    #[test]
    fn decomposition_agrees_on_small_grid() {
        for a in 0..4u64.pow(6) {
            let mut x = a;
            let mut v = [0u64; 6];
            for s in v.iter_mut() {
                *s = x % 4;
                x /= 4;
            }
            for i in User::BOTH {
                let m = check_decomposition(&params(v), i);
                assert!(m.is_empty(), "{}", m[0]);
            }
        }
    }

    #[test]
    fn zero_session() {
        let p = params([3, 2, 1, 2, 1, 1]);
        let t = run_session(&mut ZeroPolicy, &mut ZeroPolicy, &p, 4).unwrap();
        assert!(t.uses.iter().all(|u| u.x1.is_zero() && u.y1.is_zero() && u.y2.is_zero() && u.fb1.is_zero()));
        assert!(t.delay_invariant_holds());
        assert!(matches!(run_session(&mut ZeroPolicy, &mut ZeroPolicy, &p, 0), Err(Error::EmptySession)));
    }

    #[test]
    fn impulse_visibility_follows_window() {
        // receiver 1 has M = 3 signal levels and a 2-level feedback window
        let p = params([3, 1, 1, 1, 2, 0]);
        for level in 1..=3 {
            let mut p1 = ImpulsePolicy { level, at_use: 1 };
            let t = run_session(&mut p1, &mut ZeroPolicy, &p, 2).unwrap();
            let visible = !t.uses[1].fb1.is_zero();
            assert_eq!(visible, level <= 2, "level {level}");
        }
    }

    #[test]
    fn echo_three_uses_by_hand() {
        // q = 2, Y1 = X1 ⊕ S·X2, Y2 = X2 ⊕ S·X1, both feedback links perfect.
        // use 1: X1=10, X2=01 -> Y1=10⊕00=10, Y2=01⊕01=00
        // use 2: X1=10, X2=00 -> Y1=10,       Y2=00⊕01=01
        // use 3: X1=10, X2=01 -> Y1=10⊕00=10, Y2=01⊕01=00
        let p = params([2, 2, 1, 1, 2, 2]);
        let mut e1 = EchoPolicy { initial: w("10") };
        let mut e2 = EchoPolicy { initial: w("01") };
        let t = run_session(&mut e1, &mut e2, &p, 3).unwrap();
        let rows: Vec<(String, String, String, String)> = t
            .uses
            .iter()
            .map(|u| (u.x1.to_string(), u.x2.to_string(), u.y1.to_string(), u.y2.to_string()))
            .collect();
        let s = |a: &str, b: &str, c: &str, d: &str| (a.into(), b.into(), c.into(), d.into());
        assert_eq!(rows, vec![s("10", "01", "10", "00"), s("10", "00", "10", "01"), s("10", "01", "10", "00")]);
        assert!(t.delay_invariant_holds());
        assert_eq!(t.uses[0].fb1, w("00"));
    }

    #[test]
    fn random_policy_is_deterministic() {
        let p = params([4, 3, 2, 3, 2, 1]);
        let run = || run_session(&mut RandomPolicy::new(9), &mut RandomPolicy::new(10), &p, 8).unwrap();
        assert_eq!(run(), run());
        assert!(run().dump().lines().count() == 9);
    }

    #[test]
    fn closures_are_policies() {
        let p = params([2, 2, 1, 1, 0, 0]);
        let mut bad = |_: usize, _: &[BitWord], _: usize| BitWord::zeros(1);
        assert!(matches!(
            run_session(&mut bad, &mut ZeroPolicy, &p, 1),
            Err(Error::WordLength { expected: 2, got: 1 })
        ));
    }
}
