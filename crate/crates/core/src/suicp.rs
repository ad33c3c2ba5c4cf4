//! Single-unicast index coding with symmetric neighbouring interference.
//!
//! `K` receivers, receiver `k` wants message `k`, sees the `U` messages
//! before it and the `D` messages after it (indices mod `K`) as
//! interference, and knows everything else.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::air::{build_air, AirMatrix};
use crate::error::{Error, Result};

pub type Rate = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SniProblem {
    #[serde(rename = "K")]
    messages: usize,
    #[serde(rename = "D")]
    after: usize,
    #[serde(rename = "U")]
    before: usize,
}

impl SniProblem {
    pub fn new(messages: usize, after: usize, before: usize) -> Result<Self> {
        let invalid = |reason| {
            Err(Error::InvalidProblem {
                messages,
                after,
                before,
                reason,
            })
        };
        if messages == 0 {
            return invalid("K must be positive");
        }
        if before > after {
            return invalid("U must not exceed D");
        }
        if before + after >= messages {
            return invalid("U + D must be smaller than K");
        }
        Ok(SniProblem {
            messages,
            after,
            before,
        })
    }

    /// `K`
    pub fn messages(&self) -> usize {
        self.messages
    }

    /// `D`
    pub fn after(&self) -> usize {
        self.after
    }

    /// `U`
    pub fn before(&self) -> usize {
        self.before
    }

    /// The messages interfering at receiver `k`, in the order
    /// `k-U, …, k-1, k+1, …, k+D` (mod `K`).
    pub fn interference(&self, k: usize) -> Vec<usize> {
        let kk = self.messages;
        let k = k % kk;
        (1..=self.before)
            .rev()
            .map(|s| (k + kk - s) % kk)
            .chain((1..=self.after).map(|s| (k + s) % kk))
            .collect()
    }

    pub fn interference_set(&self, k: usize) -> BTreeSet<usize> {
        self.interference(k).into_iter().collect()
    }

    /// Everything receiver `k` already knows.
    pub fn side_info_set(&self, k: usize) -> BTreeSet<usize> {
        let blocked = self.interference_set(k);
        (0..self.messages)
            .filter(|&i| i != k % self.messages && !blocked.contains(&i))
            .collect()
    }

    /// Membership of `(a, b)` in the feasibility set:
    /// `gcd(bK, b(D+1)+a) >= b(U+1)`.
    pub fn is_feasible(&self, a: usize, b: usize) -> bool {
        is_feasible(self.messages, self.after, self.before, a, b)
    }

    pub fn min_rate_fraction(&self) -> RateFraction {
        min_rate_fraction(self.messages, self.after, self.before)
    }

    pub fn partition_params(&self, a: usize, b: usize) -> Result<PartitionScheme> {
        PartitionScheme::new(self, a, b)
    }

    pub fn scalar_padding(&self) -> ScalarPadding {
        find_scalar_padding(self)
    }

    pub fn full_rate_class(&self) -> Option<usize> {
        full_rate_class(self.messages, self.after, self.before)
    }

    pub fn bounds(&self) -> BoundsReport {
        broadcast_rate_bounds(self)
    }
}

impl fmt::Display for SniProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}, D={}, U={}", self.messages, self.after, self.before)
    }
}

pub fn is_feasible(messages: usize, after: usize, before: usize, a: usize, b: usize) -> bool {
    b >= 1 && (b * messages).gcd(&(b * (after + 1) + a)) >= b * (before + 1)
}

/// A point `(a, b)` of the feasibility set and its rate `D + 1 + a/b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RateFraction {
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "serialize_rate")]
    pub rate: Rate,
}

/// Exhaustive search for the feasible `(a, b)` minimising `a/b`.
///
/// `b` ranges over `[1 : ⌊K/(U+1)⌋]` and `a` over `[0 : b(K−D−1)]`; the top
/// of the `a` range is always feasible because it makes `b(D+1)+a = bK`.
/// Ties on `a/b` go to the smallest `b`. Works on bare parameters so that
/// table rows sitting on the `U + D = K` boundary can still be evaluated.
pub fn min_rate_fraction(messages: usize, after: usize, before: usize) -> RateFraction {
    assert!(messages > after, "D must be smaller than K");
    let b_max = (messages / (before + 1)).max(1);
    let (a, b) = (1..=b_max)
        .filter_map(|b| {
            (0..=b * (messages - after - 1))
                .find(|&a| is_feasible(messages, after, before, a, b))
                .map(|a| (a, b))
        })
        .min_by(|&(a1, b1), &(a2, b2)| Ratio::new(a1, b1).cmp(&Ratio::new(a2, b2)).then(b1.cmp(&b2)))
        .expect("a = b(K-D-1) is always feasible");
    RateFraction {
        a,
        b,
        rate: Rate::from_integer((after + 1) as u64) + Rate::new(a as u64, b as u64),
    }
}

/// Parameters of the partitioned vector code for a feasible `(a, b)`.
///
/// The `Kb` flat message symbols split into `tau` residue classes mod `tau`,
/// each of `partition_size` symbols, each encoded by the same
/// `partition_size × gamma` AIR matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScheme {
    pub a: usize,
    pub b: usize,
    /// Slack over the minimum partition count: `tau - b(U+1)`.
    pub c: usize,
    pub tau: usize,
    pub partition_size: usize,
    pub gamma: usize,
    pub code_len: usize,
    pub air: AirMatrix,
}

impl PartitionScheme {
    pub fn new(problem: &SniProblem, a: usize, b: usize) -> Result<Self> {
        if !problem.is_feasible(a, b) {
            return Err(Error::NotInS { a, b });
        }
        let flat = problem.messages * b;
        let code_len = b * (problem.after + 1) + a;
        let tau = flat.gcd(&code_len);
        let partition_size = flat / tau;
        let gamma = code_len / tau;
        if gamma > partition_size {
            // only happens when the rate exceeds K
            return Err(Error::InvalidDims {
                m: partition_size,
                n: gamma,
            });
        }
        Ok(PartitionScheme {
            a,
            b,
            c: tau - b * (problem.before + 1),
            tau,
            partition_size,
            gamma,
            code_len,
            air: build_air(partition_size, gamma)?,
        })
    }

    /// Replaces the encoding matrix, e.g. to test a candidate matrix.
    pub fn with_air(mut self, air: AirMatrix) -> Result<Self> {
        if air.m() != self.partition_size || air.n() != self.gamma {
            return Err(Error::DimensionMismatch(format!(
                "need a {}x{} matrix, got {}x{}",
                self.partition_size,
                self.gamma,
                air.m(),
                air.n()
            )));
        }
        self.air = air;
        Ok(self)
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.code_len as u64, self.b as u64)
    }

    pub fn is_instantly_decodable(&self) -> bool {
        self.gamma == 1
    }

    /// Flat symbol indices of partition `i`: `i, i+τ, …, i+(t−1)τ`.
    pub fn partition(&self, i: usize) -> Vec<usize> {
        (0..self.partition_size).map(|h| i + h * self.tau).collect()
    }

    pub fn partition_sets(&self) -> Vec<Vec<usize>> {
        (0..self.tau).map(|i| self.partition(i)).collect()
    }

    /// `(message, slot)` of flat symbol `w`.
    pub fn symbol_of(&self, w: usize) -> (usize, usize) {
        (w / self.b, w % self.b)
    }
}

/// Zero-padding parameters of the scalar construction:
/// `gcd(K+a, D+1+a+b) >= U+1+a`, code length `D+1+a+b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarPadding {
    pub a: usize,
    pub b: usize,
    pub length: usize,
}

impl ScalarPadding {
    pub fn satisfies(problem: &SniProblem, a: usize, b: usize) -> bool {
        let SniProblem {
            messages,
            after,
            before,
        } = *problem;
        (messages + a).gcd(&(after + 1 + a + b)) >= before + 1 + a
    }

    pub fn new(problem: &SniProblem, a: usize, b: usize) -> Result<Self> {
        if Self::satisfies(problem, a, b) {
            Ok(ScalarPadding {
                a,
                b,
                length: problem.after + 1 + a + b,
            })
        } else {
            Err(Error::ConditionViolated { a, b })
        }
    }

    /// Rows and columns of the encoding matrix.
    pub fn air_dims(&self, problem: &SniProblem) -> (usize, usize) {
        (problem.messages + self.a, self.length)
    }
}

/// Smallest `a + b` (then smallest `a`) meeting the padding condition.
///
/// The search never fails: `(0, K−D−1)` gives `gcd(K, K) = K >= U+1`.
pub fn find_scalar_padding(problem: &SniProblem) -> ScalarPadding {
    let limit = problem.messages - problem.after - 1;
    for sum in 0..=limit {
        for a in 0..=sum {
            if let Ok(p) = ScalarPadding::new(problem, a, sum - a) {
                return p;
            }
        }
    }
    unreachable!("(0, K-D-1) always satisfies the padding condition")
}

/// `D_l = [⌊lK/(l+1)⌋ : ⌊(l+1)K/(l+2)⌋ − 1]`, possibly empty (`lo > hi`).
pub fn after_interval(messages: usize, l: usize) -> (usize, isize) {
    let lo = l * messages / (l + 1);
    let hi = ((l + 1) * messages / (l + 2)) as isize - 1;
    (lo, hi)
}

/// `U_l = [⌊K/(l+2)⌋ : ⌊K/(l+1)⌋ − 1]`, possibly empty.
pub fn before_interval(messages: usize, l: usize) -> (usize, isize) {
    (messages / (l + 2), (messages / (l + 1)) as isize - 1)
}

fn within((lo, hi): (usize, isize), v: usize) -> bool {
    v >= lo && (v as isize) <= hi
}

/// Smallest `l >= 1` with `D ∈ D_l` and `U ∈ U_l`; for such instances the
/// minimum vector rate equals `K`.
pub fn full_rate_class(messages: usize, after: usize, before: usize) -> Option<usize> {
    (1..)
        // the top of U_l never increases with l
        .take_while(|&l| before_interval(messages, l).1 >= before as isize)
        .find(|&l| within(after_interval(messages, l), after) && within(before_interval(messages, l), before))
}

/// Index of the `D_l` containing `after`, for `l ∈ [1 : max_l]`.
pub fn after_class(messages: usize, after: usize, max_l: usize) -> Option<usize> {
    (1..=max_l).find(|&l| within(after_interval(messages, l), after))
}

pub fn before_in_class(messages: usize, before: usize, l: usize) -> bool {
    within(before_interval(messages, l), before)
}

/// Lower bound, the three constructive upper-bound candidates, and their
/// minimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub problem: SniProblem,
    pub lower: usize,
    pub vector: RateFraction,
    pub padding: ScalarPadding,
    #[serde(serialize_with = "serialize_rate")]
    pub l1: Rate,
    pub l2: usize,
    pub du1: usize,
    #[serde(serialize_with = "serialize_rate")]
    pub upper: Rate,
    pub full_rate_class: Option<usize>,
}

pub fn broadcast_rate_bounds(problem: &SniProblem) -> BoundsReport {
    let vector = problem.min_rate_fraction();
    let padding = problem.scalar_padding();
    let du1 = problem.after + problem.before + 1;
    let upper = [
        vector.rate,
        Rate::from_integer(padding.length as u64),
        Rate::from_integer(du1 as u64),
    ]
    .into_iter()
    .min()
    .expect("three candidates");
    BoundsReport {
        problem: *problem,
        lower: problem.after + 1,
        l1: vector.rate,
        vector,
        l2: padding.length,
        padding,
        du1,
        upper,
        full_rate_class: problem.full_rate_class(),
    }
}

/// Decimal rendering truncated toward zero, e.g. `9 + 6/23` → `"9.2608"`.
pub fn truncated_decimal(rate: &Rate, places: u32) -> String {
    let scale = 10u64.pow(places);
    let scaled = (rate * scale).to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

#[derive(Serialize)]
struct RateJson {
    num: u64,
    den: u64,
    decimal: String,
}

pub(crate) fn serialize_rate<S: Serializer>(rate: &Rate, s: S) -> std::result::Result<S::Ok, S::Error> {
    RateJson {
        num: *rate.numer(),
        den: *rate.denom(),
        decimal: truncated_decimal(rate, 4),
    }
    .serialize(s)
}

/// Floating-point view, for display only.
pub fn rate_f64(rate: &Rate) -> f64 {
    rate.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: usize, d: usize, u: usize) -> SniProblem {
        SniProblem::new(k, d, u).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(SniProblem::new(0, 0, 0).is_err());
        assert!(SniProblem::new(5, 1, 2).is_err());
        assert!(SniProblem::new(2, 1, 1).is_err());
        assert!(SniProblem::new(4, 1, 1).is_ok());
        assert!(SniProblem::new(1, 0, 0).is_ok());
    }

    #[test]
    fn interference_sets() {
        assert_eq!(p(5, 1, 1).interference_set(0), BTreeSet::from([4, 1]));
        assert_eq!(p(13, 4, 1).interference_set(1), BTreeSet::from([0, 2, 3, 4, 5]));
        let mut expect: BTreeSet<usize> = (0..=9).collect();
        expect.extend([67, 68, 69]);
        assert_eq!(p(71, 10, 3).interference_set(70), expect);
    }

    #[test]
    fn side_info_sets() {
        assert_eq!(p(5, 1, 1).side_info_set(0), BTreeSet::from([2, 3]));
        // complement oracle: all indices minus {k} minus interference
        let q = p(13, 4, 1);
        let mut oracle: BTreeSet<usize> = (0..13).collect();
        oracle.remove(&3);
        for s in [2, 4, 5, 6, 7] {
            oracle.remove(&s);
        }
        assert_eq!(q.side_info_set(3), oracle);
        assert_eq!(oracle, BTreeSet::from([0, 1, 8, 9, 10, 11, 12]));
        assert_eq!(p(4, 1, 1).side_info_set(0), BTreeSet::from([2]));
        for k in 0..13 {
            assert_eq!(q.side_info_set(k).len(), 13 - 4 - 1 - 1);
        }
    }

    #[test]
    fn feasibility_examples() {
        assert!(p(13, 4, 1).is_feasible(1, 5));
        assert!(p(71, 1, 1).is_feasible(1, 35));
        assert!(!p(13, 4, 1).is_feasible(0, 1));
    }

    #[test]
    fn min_rate_examples() {
        let r = p(71, 1, 1).min_rate_fraction();
        assert_eq!((r.a, r.b, r.rate), (1, 35, Rate::new(71, 35)));
        let r = p(71, 10, 3).min_rate_fraction();
        assert_eq!((r.a, r.b, truncated_decimal(&r.rate, 4)), (5, 6, "11.8333".to_string()));
        let r = p(71, 44, 23).min_rate_fraction();
        assert_eq!(r.rate, Rate::from_integer(71));
        assert_eq!((r.a, r.b), (26, 1));
    }

    #[test]
    fn partition_examples() {
        let s = p(13, 4, 1).partition_params(1, 5).unwrap();
        assert_eq!((s.tau, s.partition_size, s.gamma, s.code_len, s.c), (13, 5, 2, 26, 3));
        assert_eq!(s.partition(6), vec![6, 19, 32, 45, 58]);
        let owners: Vec<_> = s.partition(6).iter().map(|&w| s.symbol_of(w)).collect();
        // A_7 of the worked example with 0-based sub-symbols
        assert_eq!(owners, vec![(1, 1), (3, 4), (6, 2), (9, 0), (11, 3)]);

        let s = p(71, 2, 1).partition_params(2, 23).unwrap();
        assert_eq!((s.partition_size, s.gamma), (23, 1));

        let s = p(5, 1, 1).partition_params(1, 2).unwrap();
        assert_eq!((s.tau, s.partition_size, s.gamma), (5, 2, 1));
        assert_eq!(s.air.to_rows(), vec![vec![1], vec![1]]);

        assert_eq!(p(13, 4, 1).partition_params(0, 1), Err(Error::NotInS { a: 0, b: 1 }));
    }

    #[test]
    fn partition_sets_cover_everything_once() {
        let s = p(13, 4, 1).partition_params(1, 5).unwrap();
        let mut all: Vec<usize> = s.partition_sets().into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, (0..65).collect::<Vec<_>>());
    }

    #[test]
    fn singleton_partitions_when_tau_is_everything() {
        // uncoded transmission: N = K, one symbol per partition
        let q = p(6, 2, 1);
        let s = q.partition_params(3, 1).unwrap();
        assert_eq!(s.tau, 6);
        assert!(s.partition_sets().iter().all(|set| set.len() == 1));
    }

    #[test]
    fn scalar_padding_examples() {
        assert_eq!(p(19, 13, 3).scalar_padding(), ScalarPadding { a: 1, b: 0, length: 15 });
        let pad = p(71, 52, 16).scalar_padding();
        assert_eq!((pad.a, pad.b, pad.length), (1, 0, 54));
        assert_eq!(pad.air_dims(&p(71, 52, 16)), (72, 54));
        // gcd(12, 4) = 4 >= U+1
        assert_eq!(p(12, 3, 2).scalar_padding(), ScalarPadding { a: 0, b: 0, length: 4 });
        assert_eq!(
            ScalarPadding::new(&p(19, 13, 3), 0, 0),
            Err(Error::ConditionViolated { a: 0, b: 0 })
        );
    }

    #[test]
    fn full_rate_classes() {
        assert_eq!(full_rate_class(71, 44, 23), Some(1));
        assert_eq!(full_rate_class(71, 59, 10), Some(5));
        assert_eq!(full_rate_class(71, 3, 1), None);
        assert_eq!(after_interval(71, 1), (35, 46));
        assert_eq!(before_interval(71, 1), (23, 34));
        // D_8 is empty for K = 71 but D_9 is not
        let (lo, hi) = after_interval(71, 8);
        assert!(hi < lo as isize);
        assert_eq!(after_interval(71, 9), (63, 63));
    }

    #[test]
    fn bounds_examples() {
        let b = p(71, 44, 23).bounds();
        assert_eq!(
            (b.l1, b.l2, b.du1, b.upper),
            (Rate::from_integer(71), 71, 68, Rate::from_integer(68))
        );
        // (1,4) is feasible here: gcd(284, 213) = 71 >= 68
        let b = p(71, 52, 16).bounds();
        assert_eq!(
            (b.l1, b.l2, b.du1, b.upper),
            (Rate::new(213, 4), 54, 69, Rate::new(213, 4))
        );
        let b = p(71, 1, 1).bounds();
        assert_eq!(b.upper, Rate::new(71, 35));
        assert_eq!(b.lower, 2);
    }

    #[test]
    fn truncation() {
        assert_eq!(
            truncated_decimal(&(Rate::from_integer(9) + Rate::new(6, 23)), 4),
            "9.2608"
        );
        assert_eq!(truncated_decimal(&Rate::new(71, 10), 4), "7.1000");
        assert_eq!(truncated_decimal(&Rate::from_integer(71), 4), "71.0000");
        assert_eq!(truncated_decimal(&Rate::new(71, 35), 0), "2");
    }

    #[test]
    fn bounds_json_carries_exact_fractions() {
        let v = serde_json::to_value(p(71, 1, 1).bounds()).unwrap();
        assert_eq!(v["upper"]["num"], 71);
        assert_eq!(v["upper"]["den"], 35);
        assert_eq!(v["upper"]["decimal"], "2.0285");
        assert_eq!(v["problem"]["K"], 71);
    }
}
