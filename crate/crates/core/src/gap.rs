//! Symmetric generalized arithmetic progressions: enumeration, properness,
//! exact membership, polynomial-value avoidance, and the one-dimensional
//! extremal construction.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::IntPolynomial;
use crate::primes::{is_prime_u64, PrimeTable};
use crate::InputMode;

/// Largest admissible element magnitude; leaves headroom for sums of a few
/// elements in exact `i64`/`i128` arithmetic downstream.
const MAX_MAGNITUDE: i128 = 1 << 62;

/// The set `{ a + x_1 d_1 + ... + x_k d_k : |x_i| <= L_i }`.
///
/// Steps are stored positive (negating a step reflects a coordinate and
/// leaves the set unchanged); widths are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricGap {
    steps: Vec<i64>,
    widths: Vec<i64>,
    offset: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PropernessReport {
    /// Maximum number of coefficient tuples representing one element.
    pub max_representations: u64,
    /// Smallest element attaining the maximum.
    pub witness_element: i64,
    pub distinct_size: u64,
    pub is_proper: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AvoidanceVerdict {
    Avoids,
    Contains { input: i64, value: i64 },
}

impl AvoidanceVerdict {
    pub fn avoids(&self) -> bool {
        matches!(self, AvoidanceVerdict::Avoids)
    }
}

impl SymmetricGap {
    pub fn new(steps: Vec<i64>, widths: Vec<i64>) -> Result<Self> {
        Self::with_offset(steps, widths, 0)
    }

    pub fn with_offset(steps: Vec<i64>, widths: Vec<i64>, offset: i64) -> Result<Self> {
        if steps.is_empty() || steps.len() != widths.len() {
            return Err(Error::InvalidInput(format!(
                "need matching nonempty steps/widths, got {} and {}",
                steps.len(),
                widths.len()
            )));
        }
        let steps: Vec<i64> = steps
            .iter()
            .map(|&d| {
                if d == 0 {
                    Err(Error::InvalidInput("steps must be nonzero".into()))
                } else {
                    Ok(d.abs())
                }
            })
            .collect::<Result<_>>()?;
        if widths.iter().any(|&w| w < 1) {
            return Err(Error::InvalidInput("widths must be at least 1".into()));
        }
        let gap = SymmetricGap {
            steps,
            widths,
            offset,
        };
        let magnitude = offset.unsigned_abs() as i128 + gap.span();
        if magnitude > MAX_MAGNITUDE {
            return Err(Error::InvalidInput(format!(
                "maximum element magnitude {magnitude} exceeds {MAX_MAGNITUDE}"
            )));
        }
        Ok(gap)
    }

    pub fn dimension(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }

    pub fn widths(&self) -> &[i64] {
        &self.widths
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// `sum L_i d_i`: the radius around the offset.
    pub fn span(&self) -> i128 {
        self.steps
            .iter()
            .zip(&self.widths)
            .map(|(&d, &l)| d as i128 * l as i128)
            .sum()
    }

    /// Largest |element|.
    pub fn max_abs(&self) -> i64 {
        let hi = (self.offset as i128 + self.span()).unsigned_abs();
        let lo = (self.offset as i128 - self.span()).unsigned_abs();
        hi.max(lo) as i64
    }

    /// Number of coefficient tuples, `prod (2 L_i + 1)`.
    pub fn tuple_count(&self) -> u128 {
        self.widths
            .iter()
            .map(|&l| 2 * l as u128 + 1)
            .product()
    }

    /// Normalized density `prod L_i / ambient`.
    pub fn density(&self, ambient: i64) -> f64 {
        let num: f64 = self.widths.iter().map(|&l| l as f64).product();
        num / ambient as f64
    }

    fn check_enumeration_guard(&self, limits: &Limits) -> Result<()> {
        let tuples = self.tuple_count();
        if tuples > limits.tuple_enumeration() as u128 {
            return Err(Error::GuardExceeded(format!(
                "{tuples} coefficient tuples exceed the enumeration guard {}",
                limits.tuple_enumeration()
            )));
        }
        Ok(())
    }

    /// Distinct values with their representation counts, ascending by value.
    pub fn value_counts(&self, limits: &Limits) -> Result<Vec<(i64, u64)>> {
        self.check_enumeration_guard(limits)?;
        let mut counts = vec![(self.offset, 1u64)];
        for (&d, &l) in self.steps.iter().zip(&self.widths) {
            counts = merge_shift_range(&counts, d, -l, l);
        }
        Ok(counts)
    }

    /// Sorted distinct elements.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<i64>> {
        Ok(self
            .value_counts(limits)?
            .into_iter()
            .map(|(v, _)| v)
            .collect())
    }

    /// Exact maximum representation count by full enumeration.
    pub fn properness(&self, limits: &Limits) -> Result<PropernessReport> {
        let counts = self.value_counts(limits)?;
        let mut max_representations = 0u64;
        let mut witness_element = self.offset;
        for &(v, c) in &counts {
            if c > max_representations {
                max_representations = c;
                witness_element = v;
            }
        }
        Ok(PropernessReport {
            max_representations,
            witness_element,
            distinct_size: counts.len() as u64,
            is_proper: max_representations == 1,
        })
    }

    /// Closed-form properness for one and two dimensions (`None` beyond).
    ///
    /// For k = 2 a nontrivial collision exists exactly when both
    /// `d_2/g <= 2 L_1` and `d_1/g <= 2 L_2` hold, `g = gcd(d_1, d_2)`.
    pub fn is_proper_fast(&self) -> Option<bool> {
        match self.dimension() {
            1 => Some(true),
            2 => {
                let (d1, d2) = (self.steps[0], self.steps[1]);
                let (l1, l2) = (self.widths[0], self.widths[1]);
                let g = d1.gcd(&d2);
                Some(!(d2 / g <= 2 * l1 && d1 / g <= 2 * l2))
            }
            _ => None,
        }
    }

    /// Exact membership without enumeration.
    pub fn contains(&self, value: i64) -> bool {
        // Work on dimensions sorted by descending step so pruning bites.
        let mut dims: Vec<(i64, i64)> = self
            .steps
            .iter()
            .copied()
            .zip(self.widths.iter().copied())
            .collect();
        dims.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut suffix_span = vec![0i128; dims.len() + 1];
        for i in (0..dims.len()).rev() {
            suffix_span[i] = suffix_span[i + 1] + dims[i].0 as i128 * dims[i].1 as i128;
        }
        contains_rec(&dims, &suffix_span, value as i128 - self.offset as i128)
    }
}

/// Merges the shifted copies `base + t*d` for `t in lo..=hi`, combining
/// counts of equal values. Divide-and-conquer keeps the result independent
/// of thread count.
fn merge_shift_range(base: &[(i64, u64)], d: i64, lo: i64, hi: i64) -> Vec<(i64, u64)> {
    if lo == hi {
        let shift = lo * d;
        return base.iter().map(|&(v, c)| (v + shift, c)).collect();
    }
    let mid = lo + (hi - lo) / 2;
    let (a, b) = rayon::join(
        || merge_shift_range(base, d, lo, mid),
        || merge_shift_range(base, d, mid + 1, hi),
    );
    merge_counts(&a, &b)
}

fn merge_counts(a: &[(i64, u64)], b: &[(i64, u64)]) -> Vec<(i64, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn contains_rec(dims: &[(i64, i64)], suffix_span: &[i128], target: i128) -> bool {
    if target.abs() > suffix_span[suffix_span.len() - dims.len() - 1] {
        return false;
    }
    match dims {
        [] => target == 0,
        [(d, l)] => {
            let d = *d as i128;
            target % d == 0 && (target / d).abs() <= *l as i128
        }
        [(d1, l1), (d2, l2)] => two_dim_membership(*d1, *l1, *d2, *l2, target),
        [(d, l), rest @ ..] => {
            let d = *d as i128;
            let span_rest = suffix_span[suffix_span.len() - rest.len() - 1];
            // Only x with |target - x d| <= span(rest) can work.
            let lo = ceil_div(target - span_rest, d).max(-(*l as i128));
            let hi = floor_div(target + span_rest, d).min(*l as i128);
            let tail_spans = &suffix_span[suffix_span.len() - rest.len() - 1..];
            (lo..=hi).any(|x| contains_rec(rest, tail_spans, target - x * d))
        }
    }
}

/// Membership for `{x1 d1 + x2 d2}` in O(1): a congruence for `x2` modulo
/// `d1/g` intersected with the interval forced by `|x1| <= L1`.
fn two_dim_membership(d1: i64, l1: i64, d2: i64, l2: i64, target: i128) -> bool {
    let (d1, l1, d2, l2) = (d1 as i128, l1 as i128, d2 as i128, l2 as i128);
    let g = gcd_i128(d1, d2);
    if target % g != 0 {
        return false;
    }
    let lo = ceil_div(target - l1 * d1, d2).max(-l2);
    let hi = floor_div(target + l1 * d1, d2).min(l2);
    if lo > hi {
        return false;
    }
    let m = d1 / g;
    if m == 1 {
        return true;
    }
    // x2 = (target/g) * inv(d2/g) (mod m).
    let inv = mod_inv_i128(d2 / g, m).expect("d2/g is a unit mod d1/g");
    let t0 = (target / g).rem_euclid(m) * inv % m;
    let first = lo + (t0 - lo).rem_euclid(m);
    first <= hi
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn mod_inv_i128(a: i128, m: i128) -> Option<i128> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m, a.rem_euclid(m));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    (r == 1).then(|| t.rem_euclid(m))
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i128::from(a.rem_euclid(b) != 0)
}

fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Smallest bound `n0` such that `|n| > n0` forces `|h(n)| > cap`.
pub(crate) fn input_scan_bound(h: &IntPolynomial, cap: &BigInt) -> u64 {
    let degree = h.degree().expect("nonconstant polynomial") as u32;
    let lc = h.leading_coefficient().unwrap().abs();
    let tail = &h.height() - &lc;
    // |n| >= 2·tail/lc makes the leading term dominate by a factor 2;
    // (lc/2)·|n|^degree > cap beyond the degree-th root of 2·cap/lc.
    let t1: BigInt = (BigInt::from(2) * tail + &lc - 1) / &lc;
    let t2 = (BigInt::from(2) * cap / &lc).nth_root(degree) + 1;
    let n0: BigInt = t1.max(t2) + 1;
    n0.to_u64().unwrap_or(u64::MAX)
}

/// Does any nonzero polynomial value land in the progression?
///
/// Scans every admissible input (all integers, or all primes) whose value
/// can fit under `max |A|`, in a deterministic order: integers by
/// increasing magnitude with positive before negative, primes ascending.
pub fn avoids(
    gap: &SymmetricGap,
    h: &IntPolynomial,
    inputs: InputMode,
    limits: &Limits,
) -> Result<AvoidanceVerdict> {
    if h.is_constant() {
        return Err(Error::InvalidInput(
            "avoidance needs a nonconstant polynomial".into(),
        ));
    }
    gap.check_enumeration_guard(limits)?;
    let cap = BigInt::from(gap.max_abs());
    let n0 = input_scan_bound(h, &cap);
    if n0 > limits.tuple_enumeration() {
        return Err(Error::GuardExceeded(format!(
            "avoidance scan bound {n0} exceeds {}",
            limits.tuple_enumeration()
        )));
    }
    let probe = |n: i64| -> Option<AvoidanceVerdict> {
        let value = h.evaluate_i64(n);
        if value.is_zero() || value.abs() > cap {
            return None;
        }
        let v = value.to_i64().expect("bounded by cap");
        gap.contains(v).then_some(AvoidanceVerdict::Contains { input: n, value: v })
    };
    match inputs {
        InputMode::Integers => {
            if let Some(w) = probe(0) {
                return Ok(w);
            }
            for n in 1..=n0 as i64 {
                if let Some(w) = probe(n) {
                    return Ok(w);
                }
                if let Some(w) = probe(-n) {
                    return Ok(w);
                }
            }
        }
        InputMode::Primes => {
            if n0 >= 2 {
                let table = PrimeTable::sieve(n0, limits)?;
                for p in table.primes_up_to(n0) {
                    if let Some(w) = probe(p as i64) {
                        return Ok(w);
                    }
                }
            }
        }
    }
    Ok(AvoidanceVerdict::Avoids)
}

/// `{xp : |x| <= p-1}` for the largest prime `p` in `[sqrt(N)/2, sqrt(N)]`.
///
/// Square-avoiding because every nonzero square multiple of `p` is at least
/// `p^2 > (p-1)p = max A`; the construction is re-verified before returning.
pub fn construct_1d_extremal(ambient: i64, limits: &Limits) -> Result<SymmetricGap> {
    if ambient < 16 {
        return Err(Error::InvalidInput(format!(
            "ambient bound {ambient} below 16"
        )));
    }
    let s = (ambient as i128).sqrt() as i64;
    let mut p = s;
    let gap = loop {
        if p < 2 || 4 * (p as i128) * (p as i128) < ambient as i128 {
            return Err(Error::ConsistencyFailure(format!(
                "no prime in [sqrt({ambient})/2, sqrt({ambient})]"
            )));
        }
        if is_prime_u64(p as u64) {
            break SymmetricGap::new(vec![p], vec![p - 1])?;
        }
        p -= 1;
    };
    let square: IntPolynomial = "x^2".parse()?;
    match avoids(&gap, &square, InputMode::Integers, limits)? {
        AvoidanceVerdict::Avoids => Ok(gap),
        AvoidanceVerdict::Contains { input, value } => Err(Error::ConsistencyFailure(format!(
            "extremal construction hit {value} = ({input})^2"
        ))),
    }
}
