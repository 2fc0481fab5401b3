//! Rate constraints of the rate-splitting scheme and their projection onto
//! `(R1, R2)`.
//!
//! Each message is split as `R_i = R_{i,C1} + R_{i,C2} + R_{i,P}`. The
//! fourteen decoding constraints ([`SplitRateSystem`]) have closed-form
//! right-hand sides for the deterministic model ([`ThetaTable`]). The
//! projection is available twice: through the closed-form eliminated
//! system ([`achievable_region_fm`]) and through a generic Fourier-Motzkin
//! run on the split system ([`fm_project`]).

use serde::{Deserialize, Serialize};

use crate::converse::pos;
use crate::geometry::{HalfPlane, RateRegion};
use crate::model::{ChannelParams, User};
use crate::rational::Rational;

/// `θ_{l,i}` for `l ∈ 1..=7`, `i ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ThetaTable {
    /// `theta[l - 1][i - 1]`
    pub theta: [[i64; 2]; 7],
}

impl ThetaTable {
    /// `θ_{l,i}`, with `l` one-based.
    pub fn get(&self, l: usize, i: User) -> i64 {
        self.theta[l - 1][i.index() - 1]
    }

    fn t(&self, l: usize, i: usize) -> i64 {
        self.theta[l - 1][i - 1]
    }

    /// Right-hand sides of the eliminated system, in the order
    /// `R1, R2, R1+R2, 2R1+R2, R1+2R2`, using the three-term sum bound.
    pub fn eliminated_bounds(&self) -> [i64; 5] {
        let t = |l, i| self.t(l, i);
        let r1 = t(2, 1).min(t(6, 1) + t(1, 2)).min(t(4, 1) + t(1, 2) + t(3, 2));
        let r2 = t(2, 2).min(t(1, 1) + t(6, 2)).min(t(1, 1) + t(3, 1) + t(4, 2));
        let sum = simplified_sum_terms(self).into_iter().min().unwrap();
        let w1 = (t(2, 1) + t(4, 1) + t(1, 2) + t(7, 2))
            .min(t(1, 1) + t(4, 1) + t(7, 1) + 2 * t(1, 2) + t(5, 2))
            .min(t(2, 1) + t(4, 1) + t(1, 2) + t(5, 2));
        let w2 = (t(1, 1) + t(5, 1) + t(2, 2) + t(4, 2))
            .min(t(1, 1) + t(7, 1) + t(2, 2) + t(4, 2))
            .min(2 * t(1, 1) + t(5, 1) + t(1, 2) + t(4, 2) + t(7, 2));
        [r1, r2, sum, w1, w2]
    }
}

/// Closed-form evaluation of the fourteen `θ` terms.
pub fn theta_table(p: &ChannelParams) -> ThetaTable {
    let mut theta = [[0i64; 2]; 7];
    for i in User::BOTH {
        let j = i.other();
        let n_ii = p.direct(i) as i64;
        let n_jj = p.direct(j) as i64;
        let n_ij = p.cross_at(i) as i64;
        let n_ji = p.cross_from(i) as i64;
        // feedback noise floor at receiver i and at receiver j
        let hidden_i = pos(n_ii.max(n_ij) - p.feedback(i) as i64);
        let hidden_j = pos(n_jj.max(n_ji) - p.feedback(j) as i64);

        let t1 = pos(n_ij - hidden_i);
        let t2 = n_ii.max(n_ij);
        let t3 = n_ij.min(hidden_i);
        let t4 = pos(n_ii - n_ji);
        let t5 = pos(n_ii - n_ji).max(n_ij.min(hidden_i));
        let t6 = n_ji.min(hidden_j) - pos(n_ji - n_ii).min(hidden_j) + pos(n_ii - n_ji);
        let t7 = n_ij.min(hidden_i).max(n_ji.min(hidden_j) - pos(n_ji - n_ii).min(hidden_j) + pos(n_ii - n_ji));

        let k = i.index() - 1;
        for (l, v) in [t1, t2, t3, t4, t5, t6, t7].into_iter().enumerate() {
            theta[l][k] = v;
        }
    }
    ThetaTable { theta }
}

fn simplified_sum_terms(t: &ThetaTable) -> [i64; 3] {
    let t = |l, i| t.t(l, i);
    [t(2, 1) + t(4, 2), t(4, 1) + t(2, 2), t(1, 1) + t(5, 1) + t(1, 2) + t(5, 2)]
}

fn dropped_sum_terms(t: &ThetaTable) -> [i64; 7] {
    let t = |l, i| t.t(l, i);
    [
        t(2, 1) + t(6, 2),
        t(6, 1) + t(2, 2),
        t(1, 1) + t(3, 1) + t(4, 1) + t(1, 2) + t(5, 2),
        t(1, 1) + t(7, 1) + t(1, 2) + t(5, 2),
        t(1, 1) + t(4, 1) + t(1, 2) + t(7, 2),
        t(1, 1) + t(5, 1) + t(1, 2) + t(3, 2) + t(4, 2),
        t(1, 1) + t(7, 1) + t(1, 2) + t(4, 2),
    ]
}

/// The ten-term sum-rate bound before simplification.
pub fn full_sum_rate_bound(t: &ThetaTable) -> i64 {
    simplified_sum_terms(t).into_iter().chain(dropped_sum_terms(t)).min().unwrap()
}

/// The three-term sum-rate bound.
pub fn simplified_sum_rate_bound(t: &ThetaTable) -> i64 {
    simplified_sum_terms(t).into_iter().min().unwrap()
}

/// `max(retained terms) ≤ min(dropped terms)`, as literally stated for the
/// sum-rate simplification.
pub fn sumrate_simplification_holds(t: &ThetaTable) -> bool {
    let retained = simplified_sum_terms(t).into_iter().max().unwrap();
    let dropped = dropped_sum_terms(t).into_iter().min().unwrap();
    retained <= dropped
}

/// Whether dropping the seven terms leaves the sum-rate bound unchanged.
pub fn sumrate_simplification_exact(t: &ThetaTable) -> bool {
    simplified_sum_rate_bound(t) == full_sum_rate_bound(t)
}

fn region_from_bounds(b: [i64; 5]) -> RateRegion {
    let hs: Vec<HalfPlane> = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]
        .iter()
        .zip(b)
        .map(|(&(a1, a2), rhs)| HalfPlane::int(a1, a2, rhs).expect("nonzero normal"))
        .collect();
    RateRegion::from_halfplanes(&hs).expect("theta bounds are non-negative")
}

/// Region of the closed-form eliminated system.
pub fn achievable_region_fm(t: &ThetaTable) -> RateRegion {
    region_from_bounds(t.eliminated_bounds())
}

/// Same as [`achievable_region_fm`] with the ten-term sum bound.
pub fn achievable_region_fm_full(t: &ThetaTable) -> RateRegion {
    let mut b = t.eliminated_bounds();
    b[2] = full_sum_rate_bound(t);
    region_from_bounds(b)
}

/// Split-rate variables, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitVar {
    R1C1,
    R1C2,
    R1P,
    R2C1,
    R2C2,
    R2P,
}

impl SplitVar {
    pub const ALL: [SplitVar; 6] =
        [SplitVar::R1C1, SplitVar::R1C2, SplitVar::R1P, SplitVar::R2C1, SplitVar::R2C2, SplitVar::R2P];

    fn of(user: User, part: usize) -> SplitVar {
        SplitVar::ALL[(user.index() - 1) * 3 + part]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConstraint {
    /// 0/1 coefficients over [`SplitVar::ALL`].
    pub coeffs: [u8; 6],
    pub rhs: i64,
    /// `(l, i)` of the `θ` bounding this row.
    pub theta: (usize, User),
}

/// The fourteen decoding constraints over the six split rates, all of which
/// are implicitly non-negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRateSystem {
    pub constraints: Vec<SplitConstraint>,
}

impl SplitRateSystem {
    pub fn from_theta(t: &ThetaTable) -> SplitRateSystem {
        let mut constraints = Vec::with_capacity(14);
        for i in User::BOTH {
            let j = i.other();
            let (ic1, ic2, ip) = (SplitVar::of(i, 0), SplitVar::of(i, 1), SplitVar::of(i, 2));
            let (jc1, jc2) = (SplitVar::of(j, 0), SplitVar::of(j, 1));
            let rows: [(usize, &[SplitVar]); 7] = [
                (1, &[jc1]),
                (2, &[ic1, ic2, ip, jc1, jc2]),
                (3, &[jc2]),
                (4, &[ip]),
                (5, &[ip, jc2]),
                (6, &[ic2, ip]),
                (7, &[ic2, ip, jc2]),
            ];
            for (l, vars) in rows {
                let mut coeffs = [0u8; 6];
                for v in vars {
                    coeffs[*v as usize] = 1;
                }
                constraints.push(SplitConstraint { coeffs, rhs: t.get(l, i), theta: (l, i) });
            }
        }
        SplitRateSystem { constraints }
    }
}

/// Dense inequality `coeffs · x ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Row {
    fn normalized(mut self) -> Row {
        if let Some(s) = self.coeffs.iter().find(|c| !c.is_zero()).map(Rational::abs) {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &s;
            }
            self.rhs = &self.rhs / &s;
        }
        self
    }

    fn is_nonnegativity(&self) -> bool {
        self.rhs.is_zero()
            && self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
            && self.coeffs.iter().any(|c| c.is_negative())
    }

    /// `other` implies `self` given that every variable is non-negative.
    fn dominated_by(&self, other: &Row) -> bool {
        other.rhs <= self.rhs && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }
}

/// Eliminates column `k` by pairing every upper bound with every lower bound.
fn eliminate(rows: Vec<Row>, k: usize) -> Vec<Row> {
    let (mut pos_rows, mut neg_rows, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[k].is_positive() {
            pos_rows.push(r);
        } else if r.coeffs[k].is_negative() {
            neg_rows.push(r);
        } else {
            out.push(r);
        }
    }
    for p in &pos_rows {
        for n in &neg_rows {
            let (wp, wn) = (-&n.coeffs[k], p.coeffs[k].clone());
            let coeffs: Vec<Rational> =
                p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| &wp * a + &wn * b).collect();
            let rhs = &wp * &p.rhs + &wn * &n.rhs;
            out.push(Row { coeffs, rhs });
        }
    }
    prune(out)
}

/// Drops trivial rows, exact duplicates and coefficient-wise dominated rows.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut rows: Vec<Row> = rows
        .into_iter()
        .filter(|r| !(r.coeffs.iter().all(Rational::is_zero) && !r.rhs.is_negative()))
        .map(Row::normalized)
        .collect();
    rows.sort();
    rows.dedup();
    let keep: Vec<bool> = rows
        .iter()
        .enumerate()
        .map(|(a, ra)| {
            ra.is_nonnegativity()
                || !rows.iter().enumerate().any(|(b, rb)| a != b && ra.dominated_by(rb))
        })
        .collect();
    rows.into_iter().zip(keep).filter_map(|(r, k)| k.then_some(r)).collect()
}

/// Columns of the substituted system: `R1, R2, R1C1, R1C2, R2C1, R2C2`.
const COL_R1: usize = 0;
const COL_R2: usize = 1;

/// Default elimination order: the C2 parts first, the C1 parts last.
pub const DEFAULT_ELIMINATION_ORDER: [SplitVar; 4] =
    [SplitVar::R1C2, SplitVar::R2C2, SplitVar::R1C1, SplitVar::R2C1];

fn column_of(v: SplitVar) -> usize {
    match v {
        SplitVar::R1C1 => 2,
        SplitVar::R1C2 => 3,
        SplitVar::R2C1 => 4,
        SplitVar::R2C2 => 5,
        SplitVar::R1P | SplitVar::R2P => panic!("private parts are substituted, not eliminated"),
    }
}

/// Projects the split-rate polytope onto `(R1, R2)` by Fourier-Motzkin
/// elimination.
pub fn fm_project(s: &SplitRateSystem) -> RateRegion {
    fm_project_with_order(s, &DEFAULT_ELIMINATION_ORDER)
}

/// [`fm_project`] with an explicit order over the four common parts.
pub fn fm_project_with_order(s: &SplitRateSystem, order: &[SplitVar; 4]) -> RateRegion {
    let zero = || vec![Rational::zero(); 6];
    let unit = |col: usize, v: i64| {
        let mut c = zero();
        c[col] = v.into();
        c
    };
    // R_{i,P} = R_i − R_{i,C1} − R_{i,C2}
    let substitute = |coeffs: &[u8; 6]| -> Vec<Rational> {
        let mut c = zero();
        for (v, &a) in SplitVar::ALL.iter().zip(coeffs) {
            if a == 0 {
                continue;
            }
            let a = Rational::from(a as i64);
            match v {
                SplitVar::R1P => {
                    c[COL_R1] += &a;
                    c[2] = &c[2] - &a;
                    c[3] = &c[3] - &a;
                }
                SplitVar::R2P => {
                    c[COL_R2] += &a;
                    c[4] = &c[4] - &a;
                    c[5] = &c[5] - &a;
                }
                other => c[column_of(*other)] += &a,
            }
        }
        c
    };

    let mut rows: Vec<Row> = s
        .constraints
        .iter()
        .map(|c| Row { coeffs: substitute(&c.coeffs), rhs: c.rhs.into() })
        .collect();
    for col in 0..6 {
        rows.push(Row { coeffs: unit(col, -1), rhs: Rational::zero() });
    }
    for (p, r) in [(SplitVar::R1P, COL_R1), (SplitVar::R2P, COL_R2)] {
        let mut c = [0u8; 6];
        c[p as usize] = 1;
        let mut coeffs = substitute(&c);
        for x in coeffs.iter_mut() {
            *x = -&*x;
        }
        debug_assert!(coeffs[r].is_negative());
        rows.push(Row { coeffs, rhs: Rational::zero() });
    }
    let mut rows = prune(rows);
    for v in order {
        rows = eliminate(rows, column_of(*v));
    }
    let hs: Vec<HalfPlane> = rows
        .into_iter()
        .filter(|r| !(r.coeffs[COL_R1].is_zero() && r.coeffs[COL_R2].is_zero()))
        .map(|r| HalfPlane::new(r.coeffs[COL_R1].clone(), r.coeffs[COL_R2].clone(), r.rhs).unwrap())
        .collect();
    RateRegion::from_halfplanes(&hs).expect("split system contains the origin and is bounded")
}
