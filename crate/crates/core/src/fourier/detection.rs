//! Detection of polynomial values inside a symmetric progression by
//! counting in residue space.
//!
//! Every step of the progression is divisible by the gcd `q` of the steps,
//! so a value `h(n)` can only land in the progression when `q | h(n)`,
//! i.e. `n = r + qm` for a root `r` of `h` mod `q`.  Dividing out `q`
//! turns the question into one about the auxiliary polynomial
//! `h_q(m) = h(r + qm) / q` and the reduced steps `d_i`.  With the
//! largest-span direction playing the modulus `d_k`, shrunken layers
//! `A_i = { y d_i mod d_k : |y| <= floor(L_i / 4k) }` and their
//! autocorrelations `f_i = g_i * g_i / |A_i|`, the exact counting
//! identity over `Z_{d_k}` reads
//!
//! ```text
//!   d_k · sum_{m in S} (f_1 * … * f_{k-1})(h_q(m) mod d_k)
//!       = sum_{t in Z_{d_k}} fhat_1(t) … fhat_{k-1}(t) · W(t),
//! ```
//!
//! where `S = { m >= 1 : 0 < h_q(m) < L_k d_k / 2 }` and `W` is the
//! transform of the residue histogram of `h_q` on `S` (weighted by
//! `log(qm + r)` over prime inputs in primes mode).  Both sides are
//! computed independently — the left by exact integer convolution when
//! the work fits a guard — and any disagreement beyond
//! `1e-6 · (physical + 1)` is an internal-consistency error.  A positive
//! count is always certified by unfolding an explicit input `n` with
//! `0 != h(n)` in the original progression and re-verifying it exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{autocorrelation, fft, layer_counts};
use crate::error::{Error, Result};
use crate::gap::{self, SymmetricGap};
use crate::intersective::{coprime_root_for_gap, roots_mod};
use crate::limits::Limits;
use crate::poly::IntPolynomial;
use crate::primes::PrimeTable;
use crate::InputMode;

/// A prepared detection problem: a symmetric progression, a polynomial
/// with positive leading coefficient, and the derived reduction data.
#[derive(Debug, Clone)]
pub struct DetectionInstance {
    gap: SymmetricGap,
    poly: IntPolynomial,
    mode: InputMode,
    common_divisor: u64,
    /// `permutation[j]` is the original index of reordered direction `j`;
    /// the last reordered direction provides the working modulus.
    permutation: Vec<usize>,
    reduced_steps: Vec<u64>,
    ordered_widths: Vec<u64>,
    shrunk_widths: Vec<u64>,
    root: Option<u64>,
    aux: Option<IntPolynomial>,
    predicted_inputs: u64,
}

/// An explicit nonzero polynomial value inside the progression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionWitness {
    /// The input `n` (a prime in primes mode) with `h(n)` in the set.
    pub input: i64,
    /// `h(input)`, nonzero.
    pub value: i64,
    /// Representing coefficients per original direction order.
    pub coefficients: Vec<i64>,
}

/// Both sides of the counting identity plus diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionReport {
    pub input_mode: InputMode,
    /// gcd of the original steps.
    pub common_divisor: u64,
    /// Chosen root of the polynomial modulo the common divisor.
    pub root: Option<u64>,
    /// Working modulus `d_k` (largest-span reduced step).
    pub modulus: u64,
    /// Predicted input count `n` from the threshold formula.
    pub predicted_inputs: u64,
    /// `|S|`, the number of admissible inputs actually found.
    pub s_size: u64,
    /// `|S symdiff [1, n]|`.
    pub s_interval_discrepancy: u64,
    /// True when no admissible root exists modulo the common divisor,
    /// so no nonzero value of the polynomial can enter the progression
    /// along the scanned input family.
    pub local_obstruction: bool,
    /// Layer sizes `|A_i| = 2 floor(L_i/4k) + 1`.
    pub layer_sizes: Vec<u64>,
    /// Left side: `d_k · sum_m F(h_q(m) mod d_k)` with weights.
    pub physical: f64,
    /// Right side: `sum_t fhat_1(t)…fhat_{k-1}(t) W(t)` (real part).
    pub spectral: f64,
    /// `|physical - spectral|` including any imaginary residue.
    pub discrepancy: f64,
    /// `t = 0` contribution `|A_1|…|A_{k-1}| · W(0)`.
    pub main_term: f64,
    /// `spectral - main_term`.
    pub tail_sum: f64,
    /// Whether the left side was computed by exact integer convolution.
    pub exact_physical: bool,
    /// Exact value of `physical` as a fraction (integer-input mode with
    /// the exact path only): numerator and denominator as decimal strings.
    pub physical_numerator: Option<String>,
    pub physical_denominator: Option<String>,
    /// `(f_1 * … * f_{k-1})(0)`, the representation functional at zero.
    pub convolution_at_zero: f64,
    /// Exact fraction for `convolution_at_zero` when available.
    pub convolution_zero_numerator: Option<String>,
    pub convolution_zero_denominator: Option<String>,
    /// Structurally certified positivity of the count.
    pub positive: bool,
    pub witness: Option<DetectionWitness>,
}

/// Residue-space data gathered by scanning the admissible inputs.
struct ScanData {
    /// Per-residue summed weights (counts, or logs of prime inputs).
    weights: Vec<f64>,
    /// Per-residue count of weight-carrying inputs.
    counts: Vec<i64>,
    /// Smallest weight-carrying input per residue (0 = none).
    first_input: Vec<u64>,
    s_size: u64,
    sym_diff: u64,
    members: Option<Vec<u64>>,
}

impl DetectionInstance {
    pub fn new(
        gap: SymmetricGap,
        poly: IntPolynomial,
        mode: InputMode,
        limits: &Limits,
    ) -> Result<Self> {
        let degree = poly
            .degree()
            .filter(|&l| l >= 1)
            .ok_or_else(|| Error::InvalidInput("detection needs a nonconstant polynomial".into()))?;
        let lc = poly.leading_coefficient().expect("nonconstant");
        if !lc.is_positive() {
            return Err(Error::InvalidInput(
                "detection needs a positive leading coefficient (values must grow into the set)"
                    .into(),
            ));
        }
        if gap.offset() != 0 {
            return Err(Error::InvalidInput(
                "detection expects a centered progression (offset 0)".into(),
            ));
        }
        let k = gap.dimension();
        if k == 0 {
            return Err(Error::InvalidInput("detection needs at least one direction".into()));
        }
        let steps = gap.steps();
        let widths = gap.widths();
        let common_divisor = steps.iter().fold(0u64, |a, &s| a.gcd(&(s as u64)));
        // The direction with the largest span L_i * d_i becomes the
        // modulus; ties prefer the larger index.
        let mut pivot = 0usize;
        let mut best: i128 = -1;
        for i in 0..k {
            let v = widths[i] as i128 * steps[i] as i128;
            if v >= best {
                best = v;
                pivot = i;
            }
        }
        let mut permutation: Vec<usize> = (0..k).filter(|&i| i != pivot).collect();
        permutation.push(pivot);
        let reduced_steps: Vec<u64> = permutation
            .iter()
            .map(|&i| steps[i] as u64 / common_divisor)
            .collect();
        let ordered_widths: Vec<u64> = permutation.iter().map(|&i| widths[i] as u64).collect();
        let modulus = reduced_steps[k - 1];
        if modulus > limits.detection_modulus() {
            return Err(Error::GuardExceeded(format!(
                "working modulus {modulus} exceeds {}",
                limits.detection_modulus()
            )));
        }
        let shrunk_widths: Vec<u64> = ordered_widths[..k - 1]
            .iter()
            .map(|&l| l / (4 * k as u64))
            .collect();
        let root = match mode {
            InputMode::Integers => roots_mod(&poly, common_divisor, limits)?.into_iter().next(),
            InputMode::Primes => coprime_root_for_gap(&poly, common_divisor, limits)?,
        };
        let (aux, predicted_inputs) = match root {
            None => (None, 0),
            Some(r) => {
                let h_q = poly.auxiliary(r as i64, common_divisor)?;
                let cap = ordered_widths[k - 1] as i128 * modulus as i128;
                let lc_q = h_q.leading_coefficient().expect("nonconstant").clone();
                let ratio = BigInt::from(cap) / (BigInt::from(2) * lc_q);
                let n = if ratio.is_positive() {
                    ratio.nth_root(degree as u32).to_u64().unwrap_or(u64::MAX)
                } else {
                    0
                };
                if n > limits.detection_inputs() {
                    return Err(Error::GuardExceeded(format!(
                        "predicted input count {n} exceeds {}",
                        limits.detection_inputs()
                    )));
                }
                (Some(h_q), n)
            }
        };
        Ok(DetectionInstance {
            gap,
            poly,
            mode,
            common_divisor,
            permutation,
            reduced_steps,
            ordered_widths,
            shrunk_widths,
            root,
            aux,
            predicted_inputs,
        })
    }

    pub fn gap(&self) -> &SymmetricGap {
        &self.gap
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    /// gcd of the original steps.
    pub fn common_divisor(&self) -> u64 {
        self.common_divisor
    }

    /// Original index of each reordered direction (modulus direction last).
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn reduced_steps(&self) -> &[u64] {
        &self.reduced_steps
    }

    pub fn ordered_widths(&self) -> &[u64] {
        &self.ordered_widths
    }

    pub fn shrunk_widths(&self) -> &[u64] {
        &self.shrunk_widths
    }

    pub fn root(&self) -> Option<u64> {
        self.root
    }

    pub fn aux_polynomial(&self) -> Option<&IntPolynomial> {
        self.aux.as_ref()
    }

    /// Working modulus `d_k`.
    pub fn modulus(&self) -> u64 {
        self.reduced_steps[self.gap.dimension() - 1]
    }

    /// Value threshold `L_k d_k`; admissible values satisfy
    /// `0 < 2 h_q(m) < threshold`.
    pub fn threshold(&self) -> i128 {
        let k = self.gap.dimension();
        self.ordered_widths[k - 1] as i128 * self.reduced_steps[k - 1] as i128
    }

    pub fn predicted_inputs(&self) -> u64 {
        self.predicted_inputs
    }

    /// The admissible inputs `m` (members of `S`, restricted to prime
    /// `qm + r` in primes mode), ascending.
    pub fn scan_admissible_inputs(&self, limits: &Limits) -> Result<Vec<u64>> {
        if self.aux.is_none() {
            return Ok(Vec::new());
        }
        let scan = self.scan(limits, true)?;
        Ok(scan.members.unwrap_or_default())
    }

    fn aux_coeffs_i128(&self) -> Result<Vec<i128>> {
        let h_q = self.aux.as_ref().expect("requires a root");
        h_q.coefficients()
            .iter()
            .map(|c| c.to_i128())
            .collect::<Option<Vec<i128>>>()
            .ok_or_else(|| {
                Error::GuardExceeded("auxiliary coefficients exceed the 128-bit range".into())
            })
    }

    fn scan(&self, limits: &Limits, collect_members: bool) -> Result<ScanData> {
        let h_q = self.aux.as_ref().expect("requires a root");
        let r = self.root.expect("requires a root");
        let q = self.common_divisor;
        let d = self.modulus() as usize;
        let cap = self.threshold();
        let m_max = gap::input_scan_bound(h_q, &BigInt::from(cap / 2));
        if m_max > limits.detection_inputs() {
            return Err(Error::GuardExceeded(format!(
                "input scan bound {m_max} exceeds {}",
                limits.detection_inputs()
            )));
        }
        debug_assert!(self.predicted_inputs <= m_max);
        let coeffs = self.aux_coeffs_i128()?;
        // Magnitude bound over the scanned range keeps plain i128 Horner
        // provably overflow-free (all intermediates are bounded by it).
        let mut value_bound = BigInt::zero();
        let mut power = BigInt::from(1);
        let m_big = BigInt::from(m_max);
        for c in h_q.coefficients() {
            value_bound += c.abs() * &power;
            power *= &m_big;
        }
        if value_bound >= BigInt::from(i128::MAX / 4) {
            return Err(Error::GuardExceeded(
                "scanned values exceed the 128-bit safety margin".into(),
            ));
        }
        let table = match self.mode {
            InputMode::Integers => None,
            InputMode::Primes => {
                let target = q as u128 * m_max as u128 + r as u128 + 1;
                if target > limits.sieve_limit() as u128 {
                    return Err(Error::GuardExceeded(format!(
                        "prime-input range {target} exceeds sieve limit {}",
                        limits.sieve_limit()
                    )));
                }
                Some(PrimeTable::sieve(target as u64, limits)?)
            }
        };
        let mut weights = vec![0.0f64; d];
        let mut counts = vec![0i64; d];
        let mut first_input = vec![0u64; d];
        let mut s_size = 0u64;
        let mut sym_diff = 0u64;
        let mut members = collect_members.then(Vec::new);
        for m in 1..=m_max {
            let mut v = 0i128;
            for &c in coeffs.iter().rev() {
                v = v * m as i128 + c;
            }
            let in_s = v > 0 && 2 * v < cap;
            if in_s != (m <= self.predicted_inputs) {
                sym_diff += 1;
            }
            if !in_s {
                continue;
            }
            s_size += 1;
            let x = v.rem_euclid(d as i128) as usize;
            let weight = match (&table, self.mode) {
                (_, InputMode::Integers) => Some(1.0),
                (Some(t), InputMode::Primes) => {
                    let p = q * m + r;
                    t.is_prime(p).then(|| (p as f64).ln())
                }
                (None, InputMode::Primes) => unreachable!("primes mode sieves"),
            };
            if let Some(w) = weight {
                weights[x] += w;
                counts[x] += 1;
                if first_input[x] == 0 {
                    first_input[x] = m;
                }
                if let Some(ms) = &mut members {
                    ms.push(m);
                }
            }
        }
        Ok(ScanData { weights, counts, first_input, s_size, sym_diff, members })
    }

    /// Representing coefficients `(s_1, …, s_{k-1})` with
    /// `sum s_j d_j = x (mod d_k)` and `|s_j| <= 2 w_j`, if any.
    fn unfold(&self, x: i128) -> Option<Vec<i128>> {
        let k = self.gap.dimension();
        let d = self.modulus() as i128;
        let mut out = vec![0i128; k - 1];
        self.unfold_layer(0, x, d, &mut out).then_some(out)
    }

    fn unfold_layer(&self, layer: usize, target: i128, d: i128, out: &mut [i128]) -> bool {
        let k = self.gap.dimension();
        if layer == k - 1 {
            return target.rem_euclid(d) == 0;
        }
        let step = self.reduced_steps[layer] as i128;
        let half_window = 2 * self.shrunk_widths[layer] as i128;
        if layer == k - 2 {
            if let Some(s) = solve_congruence_in_window(step, target, d, half_window) {
                out[layer] = s;
                return true;
            }
            return false;
        }
        // A residue-complete window: either the full coefficient range,
        // or [-d, d] once the range covers every residue class.
        let bound = half_window.min(d);
        for s in -bound..=bound {
            if self.unfold_layer(layer + 1, target - s * step, d, out) {
                out[layer] = s;
                return true;
            }
        }
        false
    }
}

/// Smallest-magnitude `s` with `s·step = target (mod modulus)` and
/// `|s| <= half_window`, or None.
fn solve_congruence_in_window(
    step: i128,
    target: i128,
    modulus: i128,
    half_window: i128,
) -> Option<i128> {
    let g = step.gcd(&modulus);
    if target.rem_euclid(g) != 0 {
        return None;
    }
    let m2 = modulus / g;
    if m2 == 1 {
        return Some(0);
    }
    let inv = gap::mod_inv_i128(step / g, m2)?;
    let base = ((target / g).rem_euclid(m2) * inv).rem_euclid(m2);
    // Solutions form the class base + m2·Z; only the representatives
    // nearest zero can fit the window.
    if base <= half_window {
        return Some(base);
    }
    if m2 - base <= half_window {
        return Some(base - m2);
    }
    None
}

fn complex_from_i64(values: &[i64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect()
}

fn complex_from_f64(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Cyclic convolution of a dense exact table with a sparse exact profile,
/// with overflow checking; None on any overflow.
fn fold_checked(dense: &[i128], sparse: &[i128]) -> Option<Vec<i128>> {
    let d = dense.len();
    let support: Vec<(usize, i128)> = sparse
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| (i, v))
        .collect();
    let mut out = vec![0i128; d];
    for x in 0..d {
        let mut acc = 0i128;
        for &(y, a) in &support {
            let idx = (x + d - y) % d;
            acc = acc.checked_add(dense[idx].checked_mul(a)?)?;
        }
        out[x] = acc;
    }
    Some(out)
}

/// Evaluates both sides of the counting identity, certifies positivity
/// with an explicit re-verified witness, and errors on any internal
/// disagreement beyond `1e-6 · (physical + 1)`.
pub fn detection_count(inst: &DetectionInstance, limits: &Limits) -> Result<DetectionReport> {
    let k = inst.gap.dimension();
    let layer_sizes: Vec<u64> = inst.shrunk_widths.iter().map(|&w| 2 * w + 1).collect();
    let mut report = DetectionReport {
        input_mode: inst.mode,
        common_divisor: inst.common_divisor,
        root: inst.root,
        modulus: inst.modulus(),
        predicted_inputs: inst.predicted_inputs,
        s_size: 0,
        s_interval_discrepancy: 0,
        local_obstruction: inst.root.is_none(),
        layer_sizes,
        physical: 0.0,
        spectral: 0.0,
        discrepancy: 0.0,
        main_term: 0.0,
        tail_sum: 0.0,
        exact_physical: true,
        physical_numerator: None,
        physical_denominator: None,
        convolution_at_zero: 0.0,
        convolution_zero_numerator: None,
        convolution_zero_denominator: None,
        positive: false,
        witness: None,
    };
    if inst.root.is_none() {
        return Ok(report);
    }
    let d = inst.modulus() as usize;
    let scan = inst.scan(limits, false)?;
    report.s_size = scan.s_size;
    report.s_interval_discrepancy = scan.sym_diff;

    // Layer profiles and the spectral product  prod_i fhat_i(t)
    // = prod_i |ghat_i(t)|^2 / |A_i|  (real and nonnegative by squaring).
    let layer_profiles: Vec<Vec<i64>> = (0..k - 1)
        .map(|i| layer_counts(d as u64, inst.reduced_steps[i], inst.shrunk_widths[i]))
        .collect();
    let mut fhat_prod = vec![1.0f64; d];
    let mut sizes_product_f = 1.0f64;
    for (i, g) in layer_profiles.iter().enumerate() {
        let size = (2 * inst.shrunk_widths[i] + 1) as f64;
        sizes_product_f *= size;
        let ghat = fft::dft_fast(&complex_from_i64(g), false);
        for t in 0..d {
            fhat_prod[t] *= ghat[t].norm_sqr() / size;
        }
    }
    let w_transform = fft::dft_fast(&complex_from_f64(&scan.weights), false);
    let mut spectral_acc = fft::ComplexKahan::<f64>::new();
    for t in 0..d {
        spectral_acc.add(w_transform[t] * fhat_prod[t]);
    }
    let spectral_complex = spectral_acc.value();
    report.spectral = spectral_complex.re;
    report.main_term = sizes_product_f * w_transform[0].re;
    report.tail_sum = report.spectral - report.main_term;

    // Exact convolution table G = (g_1*g_1) * … * (g_{k-1}*g_{k-1}) when
    // the support work fits the guard; the float transform path otherwise.
    let supports: Vec<u128> = layer_profiles
        .iter()
        .map(|g| g.iter().filter(|&&v| v != 0).count() as u128)
        .collect();
    let mut work: u128 = supports.iter().map(|&s| s * s).sum();
    for &s in supports.iter().skip(1) {
        work += d as u128 * (s * s).min(d as u128);
    }
    let exact_table: Option<Vec<i128>> = if k == 1 {
        let mut delta = vec![0i128; d];
        delta[0] = 1;
        Some(delta)
    } else if work <= limits.exact_convolution_work() as u128 {
        let mut table = Some(autocorrelation(&layer_profiles[0]));
        for g in layer_profiles.iter().skip(1) {
            let auto = autocorrelation(g);
            table = table.and_then(|t| fold_checked(&t, &auto));
            if table.is_none() {
                break;
            }
        }
        table
    } else {
        None
    };
    let sizes_exact: Option<i128> = inst
        .shrunk_widths
        .iter()
        .try_fold(1i128, |acc, &w| acc.checked_mul(2 * w as i128 + 1));

    let float_table: Option<Vec<f64>> = if exact_table.is_none() || sizes_exact.is_none() {
        // F = inverse transform of the spectral product, carrying the 1/d.
        let back = fft::dft_fast(&complex_from_f64(&fhat_prod), true);
        Some(back.iter().map(|v| v.re / d as f64).collect())
    } else {
        None
    };

    match (&exact_table, sizes_exact) {
        (Some(table), Some(den)) => {
            report.convolution_at_zero = table[0] as f64 / den as f64;
            report.convolution_zero_numerator = Some(table[0].to_string());
            report.convolution_zero_denominator = Some(den.to_string());
            match inst.mode {
                InputMode::Integers => {
                    let mut numerator = BigInt::zero();
                    for x in 0..d {
                        if scan.counts[x] != 0 && table[x] != 0 {
                            numerator += BigInt::from(scan.counts[x]) * BigInt::from(table[x]);
                        }
                    }
                    numerator *= BigInt::from(d as u64);
                    report.physical =
                        numerator.to_f64().unwrap_or(f64::INFINITY) / den as f64;
                    report.physical_numerator = Some(numerator.to_string());
                    report.physical_denominator = Some(den.to_string());
                }
                InputMode::Primes => {
                    let mut acc = fft::ComplexKahan::<f64>::new();
                    for x in 0..d {
                        if scan.weights[x] != 0.0 && table[x] != 0 {
                            acc.add(Complex64::new(scan.weights[x] * table[x] as f64, 0.0));
                        }
                    }
                    report.physical = d as f64 * acc.value().re / den as f64;
                }
            }
        }
        _ => {
            report.exact_physical = false;
            let f_vals = float_table.as_ref().expect("float fallback present");
            report.convolution_at_zero = f_vals[0];
            let mut acc = fft::ComplexKahan::<f64>::new();
            for x in 0..d {
                if scan.weights[x] != 0.0 {
                    acc.add(Complex64::new(scan.weights[x] * f_vals[x], 0.0));
                }
            }
            report.physical = d as f64 * acc.value().re;
        }
    }

    // Structural positivity: a weight-carrying residue whose convolution
    // cell is occupied, certified by unfolding an explicit witness.
    let mut candidates: Vec<(u64, usize)> = (0..d)
        .filter(|&x| scan.counts[x] > 0)
        .filter(|&x| match (&exact_table, &float_table) {
            (Some(table), _) => table[x] > 0,
            (None, Some(f_vals)) => f_vals[x] > 0.5 / sizes_product_f,
            (None, None) => unreachable!("one physical path always runs"),
        })
        .map(|x| (scan.first_input[x], x))
        .collect();
    candidates.sort_unstable();
    let coeffs = inst.aux_coeffs_i128()?;
    for (m, x) in candidates {
        let Some(layers) = inst.unfold(x as i128) else {
            if exact_table.is_some() {
                return Err(Error::ConsistencyFailure(format!(
                    "occupied convolution cell {x} has no layer decomposition"
                )));
            }
            continue;
        };
        let mut v = 0i128;
        for &c in coeffs.iter().rev() {
            v = v * m as i128 + c;
        }
        let spent: i128 = layers
            .iter()
            .zip(&inst.reduced_steps)
            .map(|(&s, &step)| s * step as i128)
            .sum();
        let last = (v - spent) / d as i128;
        debug_assert_eq!((v - spent).rem_euclid(d as i128), 0);
        let k_idx = k - 1;
        if last.unsigned_abs() > inst.ordered_widths[k_idx] as u128 {
            return Err(Error::ConsistencyFailure(format!(
                "witness coefficient {last} exceeds width {} in the modulus direction",
                inst.ordered_widths[k_idx]
            )));
        }
        let mut coefficients = vec![0i64; k];
        for (j, &s) in layers.iter().enumerate() {
            coefficients[inst.permutation[j]] = s as i64;
        }
        coefficients[inst.permutation[k_idx]] = last as i64;
        let input_big = inst.root.unwrap() as i128 + inst.common_divisor as i128 * m as i128;
        let input = i64::try_from(input_big)
            .map_err(|_| Error::GuardExceeded("witness input exceeds 64 bits".into()))?;
        let value_big = inst.common_divisor as i128 * v;
        let value = i64::try_from(value_big)
            .map_err(|_| Error::GuardExceeded("witness value exceeds 64 bits".into()))?;
        // Exact re-verification against the original progression.
        let recomputed = inst.poly.evaluate(&BigInt::from(input));
        let in_box = coefficients
            .iter()
            .zip(inst.gap.widths())
            .all(|(&c, &wd)| c.unsigned_abs() <= wd as u64);
        let resum: i128 = coefficients
            .iter()
            .zip(inst.gap.steps())
            .map(|(&c, &s)| c as i128 * s as i128)
            .sum();
        let prime_ok = match inst.mode {
            InputMode::Integers => true,
            InputMode::Primes => input > 1 && crate::primes::is_prime_u64(input as u64),
        };
        if recomputed != BigInt::from(value)
            || value == 0
            || resum != value as i128
            || !in_box
            || !inst.gap.contains(value)
            || !prime_ok
        {
            return Err(Error::ConsistencyFailure(
                "detected witness failed exact re-verification".into(),
            ));
        }
        report.positive = true;
        report.witness = Some(DetectionWitness { input, value, coefficients });
        break;
    }

    let mismatch = (Complex64::new(report.physical, 0.0) - spectral_complex).norm();
    report.discrepancy = mismatch;
    let tolerance = 1e-6 * (report.physical.abs() + 1.0);
    if mismatch > tolerance {
        return Err(Error::ConsistencyFailure(format!(
            "counting identity mismatch: physical {} vs spectral {} (|diff| {mismatch} > {tolerance})",
            report.physical, report.spectral
        )));
    }
    Ok(report)
}
