//! Exponential sums with exact phase arithmetic: complete and incomplete
//! Weyl sums, an asserted explicit bound for quadratic phases, comparison
//! envelopes for higher degrees, log-weighted sums over prime inputs,
//! spectral moment sums, and exact divisor-function moments.
//!
//! Phases never touch floating point until the last moment. For a phase
//! polynomial `P(m) = t*h(m)` the residues `P(m) mod d` are produced by an
//! integer forward-difference recurrence costing `deg h` modular additions
//! per input, seeded from arbitrary-precision evaluations. Each residue is
//! then mapped to the unit circle through a precomputed table of the `d`-th
//! roots of unity (or one trigonometric call on the exactly reduced angle
//! when `d` is too large to tabulate). The only inexactness is the final
//! rounding of each unit-circle term and the compensated summation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::fft::ComplexKahan;
use crate::limits::Limits;
use crate::poly::{horner_mod, IntPolynomial};
use crate::primes::PrimeTable;

#[inline]
fn add_mod(a: u64, b: u64, d: u64) -> u64 {
    // Callers keep a, b < d and d < 2^63, so the sum cannot wrap.
    let s = a + b;
    if s >= d {
        s - d
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, d: u64) -> u64 {
    add_mod(a, d - b, d)
}

#[inline]
fn mul_mod(a: u64, b: u64, d: u64) -> u64 {
    ((a as u128 * b as u128) % d as u128) as u64
}

/// The point `e^{2 pi i r / d}` on the unit circle, from the exact residue.
#[inline]
fn unit_angle(r: u64, d: u64) -> Complex64 {
    let theta = std::f64::consts::TAU * (r as f64 / d as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// Unit-circle lookup: a full table of the `d`-th roots of unity when `d`
/// is small enough to tabulate, per-call trigonometry otherwise.
struct Phases {
    d: u64,
    table: Option<Vec<Complex64>>,
}

impl Phases {
    fn new(d: u64, limits: &Limits) -> Phases {
        let table = (d <= limits.phase_table_modulus())
            .then(|| (0..d).map(|r| unit_angle(r, d)).collect());
        Phases { d, table }
    }

    /// `e^{2 pi i r / d}` for a residue `0 <= r < d`.
    #[inline]
    fn unit(&self, r: u64) -> Complex64 {
        match &self.table {
            Some(t) => t[r as usize],
            None => unit_angle(r, self.d),
        }
    }

    /// `e^{-2 pi i r / d}` for a residue `0 <= r < d`.
    #[inline]
    fn unit_conj(&self, r: u64) -> Complex64 {
        self.unit(if r == 0 { 0 } else { self.d - r })
    }
}

/// Forward-difference generator of the residues `P(1), P(2), ... mod d`
/// for `P(m) = t*h(m)`. Construction seeds the difference table from
/// arbitrary-precision evaluations reduced exactly; each subsequent
/// residue costs `deg h` modular additions.
struct ResidueMachine {
    diffs: Vec<u64>,
    d: u64,
}

impl ResidueMachine {
    fn new(h: &IntPolynomial, t: i64, d: u64) -> ResidueMachine {
        let t_red = (t as i128).rem_euclid(d as i128) as u64;
        let mut scaled: Vec<u64> = h
            .reduced_mod(d)
            .iter()
            .map(|&c| mul_mod(c, t_red, d))
            .collect();
        if scaled.is_empty() {
            scaled.push(0); // the zero polynomial
        }
        let deg = scaled.len() - 1;
        // vals[i] = P(i + 1) mod d, then in-place forward differences so
        // that vals[j] = (delta^j P)(1) mod d.
        let mut vals: Vec<u64> = (0..=deg)
            .map(|i| horner_mod(&scaled, (i as u64 + 1) % d.max(1), d))
            .collect();
        for j in 1..=deg {
            for i in (j..=deg).rev() {
                vals[i] = sub_mod(vals[i], vals[i - 1], d);
            }
        }
        ResidueMachine { diffs: vals, d }
    }

    /// The next residue in the sequence `P(1), P(2), ...`.
    #[inline]
    fn next(&mut self) -> u64 {
        let out = self.diffs[0];
        for j in 0..self.diffs.len() - 1 {
            self.diffs[j] = add_mod(self.diffs[j], self.diffs[j + 1], self.d);
        }
        out
    }
}

fn check_sum_guards(n: u64, d: u64, limits: &Limits) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidInput("modulus d must be positive".into()));
    }
    if d > limits.sum_modulus() {
        return Err(Error::GuardExceeded(format!(
            "modulus {d} exceeds the exponential-sum ceiling {}",
            limits.sum_modulus()
        )));
    }
    if n > limits.sum_terms() {
        return Err(Error::GuardExceeded(format!(
            "{n} terms exceed the exponential-sum ceiling {}",
            limits.sum_terms()
        )));
    }
    Ok(())
}

/// The exponential sum `W(t) = sum_{m=1}^{n} e^{2 pi i h(m) t / d}`.
///
/// Every phase is reduced exactly in integer arithmetic before the unit
/// circle is touched, so the result carries only per-term rounding and
/// compensated-summation error (a few ulps per term).
pub fn weyl_sum(h: &IntPolynomial, n: u64, t: i64, d: u64, limits: &Limits) -> Result<Complex64> {
    check_sum_guards(n, d, limits)?;
    let phases = Phases::new(d, limits);
    let mut machine = ResidueMachine::new(h, t, d);
    let mut acc = ComplexKahan::<f64>::new();
    for _ in 0..n {
        acc.add(phases.unit(machine.next()));
    }
    Ok(acc.value())
}

/// Reference evaluation of [`weyl_sum`] that reduces each `t*h(m)` through
/// arbitrary-precision arithmetic instead of the difference recurrence.
/// Both paths produce identical residues in identical order, so they agree
/// bit for bit; tests assert exactly that.
pub fn weyl_sum_direct(
    h: &IntPolynomial,
    n: u64,
    t: i64,
    d: u64,
    limits: &Limits,
) -> Result<Complex64> {
    check_sum_guards(n, d, limits)?;
    let phases = Phases::new(d, limits);
    let big_t = BigInt::from(t);
    let big_d = BigInt::from(d);
    let mut acc = ComplexKahan::<f64>::new();
    for m in 1..=n {
        let r = (h.evaluate(&BigInt::from(m)) * &big_t)
            .mod_floor(&big_d)
            .to_u64()
            .expect("residue below d fits in u64");
        acc.add(phases.unit(r));
    }
    Ok(acc.value())
}

/// The reduced modulus `d' = d / gcd(2*a2*t, d)` governing a quadratic
/// phase `(a1*m + a2*m^2)*t/d`. Degenerate data (`a2*t = 0` or
/// `d | 2*a2*t`) gives `d' = 1`.
fn reduced_quadratic_modulus(d: u64, a2: i64, t: i64) -> u64 {
    let prod = 2i128 * a2 as i128 * t as i128;
    let g = (prod.unsigned_abs() % d as u128) as u64;
    d / g.gcd(&d)
}

/// Explicit unconditional bound for quadratic exponential sums: `n` terms
/// with phase `(a1*m + a2*m^2)*t/d` have magnitude at most
/// `sqrt(2*n^2/d' + 7*(n + d')*ln d')` with `d' = d / gcd(2*a2*t, d)`.
/// When `d' = 1` the logarithm vanishes and the bound is `sqrt(2)*n`.
pub fn lemma1_bound(n: u64, d: u64, a2: i64, t: i64) -> f64 {
    let dp = reduced_quadratic_modulus(d, a2, t) as f64;
    let nf = n as f64;
    (2.0 * nf * nf / dp + 7.0 * (nf + dp) * dp.ln()).sqrt()
}

/// One quadratic instance `sum_{m=1}^{n} e((a1*m + a2*m^2)*t/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticInstance {
    pub n: u64,
    pub d: u64,
    pub a1: i64,
    pub a2: i64,
    pub t: i64,
}

/// Rectangular verification grid: every `1 <= n <= n_max`,
/// `1 <= d <= d_max`, and `|a1|, |a2|, |t| <= coeff_bound` (zero
/// coefficients included).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Lemma1Grid {
    pub n_max: u64,
    pub d_max: u64,
    pub coeff_bound: i64,
}

impl Default for Lemma1Grid {
    fn default() -> Self {
        Lemma1Grid {
            n_max: 200,
            d_max: 200,
            coeff_bound: 5,
        }
    }
}

/// Outcome of a bound verification: the bound held on every instance
/// (violations are hard errors, never reports), and this is how close it
/// came to being attained.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    /// Number of `(n, d, a1, a2, t)` tuples checked.
    pub instances: u64,
    /// Largest `|sum| / bound` seen; at most 1 whenever the bound holds.
    pub max_ratio: f64,
    /// The instance attaining `max_ratio`.
    pub worst: Option<QuadraticInstance>,
}

/// Checks the quadratic bound on every instance of a rectangular grid.
///
/// All prefixes of one phase sequence share its difference recurrence, so a
/// full column of `n` values costs one pass; the whole grid runs in
/// `O(d_max * n_max * coeff_bound^3)` modular additions. Any violation
/// beyond float tolerance is a hard [`Error::ConsistencyFailure`] — the
/// bound is unconditional, so a violation means a defect in this crate.
pub fn verify_lemma1_grid(grid: &Lemma1Grid, limits: &Limits) -> Result<Lemma1Report> {
    if grid.n_max == 0 || grid.d_max == 0 || grid.coeff_bound < 0 {
        return Err(Error::InvalidInput(
            "verification grid needs n_max >= 1, d_max >= 1, coeff_bound >= 0".into(),
        ));
    }
    let cube = (2 * grid.coeff_bound as u64 + 1).pow(3);
    let work = grid
        .n_max
        .checked_mul(grid.d_max)
        .and_then(|v| v.checked_mul(cube))
        .ok_or_else(|| Error::GuardExceeded("verification grid size overflows".into()))?;
    if work > limits.tuple_enumeration() {
        return Err(Error::GuardExceeded(format!(
            "verification grid needs {work} term operations, ceiling is {}",
            limits.tuple_enumeration()
        )));
    }

    let n_max = grid.n_max as usize;
    let d_max = grid.d_max;
    let c = grid.coeff_bound;
    // bound_sq[dp][n]: the squared true bound, and the squared bound padded
    // by the float tolerance used for the hard check.
    let mut bound_sq = vec![vec![0.0f64; n_max + 1]; d_max as usize + 1];
    let mut padded_sq = vec![vec![0.0f64; n_max + 1]; d_max as usize + 1];
    for dp in 1..=d_max as usize {
        let dpf = dp as f64;
        let log_dp = dpf.ln();
        for n in 1..=n_max {
            let nf = n as f64;
            let b = (2.0 * nf * nf / dpf + 7.0 * (nf + dpf) * log_dp).sqrt();
            bound_sq[dp][n] = b * b;
            let padded = b + 1e-6 * (b + 1.0);
            padded_sq[dp][n] = padded * padded;
        }
    }

    let mut instances = 0u64;
    let mut best_ratio_sq = 0.0f64;
    let mut worst = None;
    for d in 1..=d_max {
        let table: Vec<Complex64> = (0..d).map(|r| unit_angle(r, d)).collect();
        for a2 in -c..=c {
            for t in -c..=c {
                let dp = reduced_quadratic_modulus(d, a2, t) as usize;
                let true_row = &bound_sq[dp];
                let pad_row = &padded_sq[dp];
                for a1 in -c..=c {
                    // Seed the difference recurrence for
                    // P(m) = (a1*m + a2*m^2)*t, exactly.
                    let mut p = (((a1 + a2) as i128 * t as i128).rem_euclid(d as i128)) as u64;
                    let mut step =
                        (((a1 + 3 * a2) as i128 * t as i128).rem_euclid(d as i128)) as u64;
                    let curve = ((2 * a2 as i128 * t as i128).rem_euclid(d as i128)) as u64;
                    let mut sum = Complex64::new(0.0, 0.0);
                    for n in 1..=n_max {
                        sum += table[p as usize];
                        let norm = sum.norm_sqr();
                        if norm > pad_row[n] {
                            return Err(Error::ConsistencyFailure(format!(
                                "quadratic bound violated at n={n} d={d} a1={a1} a2={a2} t={t}: \
                                 |sum| = {} > bound = {}",
                                norm.sqrt(),
                                true_row[n].sqrt()
                            )));
                        }
                        let ratio_sq = norm / true_row[n];
                        if ratio_sq > best_ratio_sq {
                            best_ratio_sq = ratio_sq;
                            worst = Some(QuadraticInstance {
                                n: n as u64,
                                d,
                                a1,
                                a2,
                                t,
                            });
                        }
                        p = add_mod(p, step, d);
                        step = add_mod(step, curve, d);
                    }
                    instances += n_max as u64;
                }
            }
        }
    }
    Ok(Lemma1Report {
        instances,
        max_ratio: best_ratio_sq.sqrt(),
        worst,
    })
}

/// Checks the quadratic bound on an explicit list of instances (for
/// file-driven verification). Violations are hard errors, as in
/// [`verify_lemma1_grid`].
pub fn verify_lemma1_instances(
    rows: &[QuadraticInstance],
    limits: &Limits,
) -> Result<Lemma1Report> {
    let mut max_ratio = 0.0f64;
    let mut worst = None;
    for row in rows {
        let h = IntPolynomial::from_i64_coeffs(&[0, row.a1, row.a2]);
        let value = weyl_sum(&h, row.n, row.t, row.d, limits)?;
        let bound = lemma1_bound(row.n, row.d, row.a2, row.t);
        let magnitude = value.norm();
        if magnitude > bound + 1e-6 * (bound + 1.0) {
            return Err(Error::ConsistencyFailure(format!(
                "quadratic bound violated at n={} d={} a1={} a2={} t={}: |sum| = {magnitude} \
                 > bound = {bound}",
                row.n, row.d, row.a1, row.a2, row.t
            )));
        }
        let ratio = magnitude / bound;
        if ratio > max_ratio {
            max_ratio = ratio;
            worst = Some(*row);
        }
    }
    Ok(Lemma1Report {
        instances: rows.len() as u64,
        max_ratio,
        worst,
    })
}

/// Comparison envelope for degree-`l` phases with positive leading
/// coefficient `a_l` and rational phase `t/d` (reduced internally):
///
/// `n * (a_l * ln^{l^2}(a_l * d' * n) * (1/d' + 1/n + d'/(a_l * n^l)))^{2^-l}`
///
/// The underlying estimate carries an unspecified absolute constant, so
/// this value supports ratio reports, never assertions.
pub fn lemma3_shape(h: &IntPolynomial, n: u64, t: i64, d: u64) -> Result<f64> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidInput(
            "envelope needs n >= 1 and d >= 1".into(),
        ));
    }
    let ell = match h.degree() {
        Some(ell) if ell >= 1 => ell,
        _ => {
            return Err(Error::InvalidInput(
                "envelope needs a nonconstant polynomial".into(),
            ))
        }
    };
    let lead = h
        .leading_coefficient()
        .and_then(|c| c.to_f64())
        .unwrap_or(f64::INFINITY);
    if lead <= 0.0 {
        return Err(Error::InvalidInput(
            "envelope needs a positive leading coefficient".into(),
        ));
    }
    let g = t.unsigned_abs().gcd(&d);
    let dp = (d / g) as f64; // t = 0 gives gcd d, hence d' = 1
    let nf = n as f64;
    let log_arg = lead * dp * nf;
    let bracket = 1.0 / dp + 1.0 / nf + dp / (lead * nf.powi(ell as i32));
    let inner = lead * log_arg.ln().powi((ell * ell) as i32) * bracket;
    Ok(nf * inner.powf(2f64.powi(-(ell as i32))))
}

/// Comparison envelope, in log10 space, for log-weighted prime-input sums
/// in a rational-approximation regime with quality parameter `u`:
/// `n/u + u^L * n^{1 - 4^-l}` with `L = 64 * l^2 * 4^l`. The power `u^L`
/// overflows doubles for any realistic `u`, hence log10 throughout.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma4Report {
    /// Phase polynomial degree `l`.
    pub degree: u32,
    /// Number of inputs `n`.
    pub inputs: u64,
    /// Approximation quality parameter `U` (configurable, recorded as given).
    pub u: f64,
    /// The derived exponent `L = 64 * l^2 * 4^l`.
    pub l: f64,
    /// `log10(n / u)`.
    pub log10_leading_term: f64,
    /// `log10(u^L * n^{1 - 4^-l})`.
    pub log10_approximation_term: f64,
    /// `log10` of the sum of the two terms.
    pub log10_envelope: f64,
    /// `log10 |V|` of an evaluated sum, when one was evaluated and nonzero.
    pub log10_magnitude: Option<f64>,
    /// `log10 |V| - log10 envelope`, when a sum was evaluated and nonzero.
    pub log10_ratio: Option<f64>,
}

/// `log10(10^a + 10^b)` without leaving log space.
fn log10_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

/// The envelope of [`Lemma4Report`] without evaluating any sum.
pub fn lemma4_shape(degree: u32, n: u64, u: f64) -> Result<Lemma4Report> {
    if degree == 0 {
        return Err(Error::InvalidInput("envelope needs degree >= 1".into()));
    }
    if n == 0 || !(u > 0.0) {
        return Err(Error::InvalidInput("envelope needs n >= 1 and u > 0".into()));
    }
    let l = 64.0 * (degree as f64).powi(2) * 4f64.powi(degree as i32);
    let log10_n = (n as f64).log10();
    let leading = log10_n - u.log10();
    let approximation = l * u.log10() + (1.0 - 4f64.powi(-(degree as i32))) * log10_n;
    Ok(Lemma4Report {
        degree,
        inputs: n,
        u,
        l,
        log10_leading_term: leading,
        log10_approximation_term: approximation,
        log10_envelope: log10_add(leading, approximation),
        log10_magnitude: None,
        log10_ratio: None,
    })
}

/// Evaluates a log-weighted prime-input sum and reports it against the
/// log10 envelope of [`lemma4_shape`].
#[allow(clippy::too_many_arguments)]
pub fn lemma4_report(
    h: &IntPolynomial,
    q: u64,
    r: i64,
    n: u64,
    t: i64,
    d: u64,
    u: f64,
    limits: &Limits,
) -> Result<Lemma4Report> {
    let ell = match h.degree() {
        Some(ell) if ell >= 1 => ell as u32,
        _ => {
            return Err(Error::InvalidInput(
                "envelope needs a nonconstant polynomial".into(),
            ))
        }
    };
    let mut report = lemma4_shape(ell, n, u)?;
    let value = prime_weyl_sum(h, q, r, n, t, d, limits)?;
    let magnitude = value.norm();
    if magnitude > 0.0 {
        let log_mag = magnitude.log10();
        report.log10_magnitude = Some(log_mag);
        report.log10_ratio = Some(log_mag - report.log10_envelope);
    }
    Ok(report)
}

/// Log-weighted exponential sum over the primes in an arithmetic
/// progression:
///
/// `V(t) = sum over m in [1, n] with q*m + r prime of
///         ln(q*m + r) * e^{-2 pi i h(m) t / d}`.
///
/// At `t = 0` this is the log-weighted prime count of the progression
/// (the class-restricted Chebyshev sum, excluding `r` itself).
pub fn prime_weyl_sum(
    h: &IntPolynomial,
    q: u64,
    r: i64,
    n: u64,
    t: i64,
    d: u64,
    limits: &Limits,
) -> Result<Complex64> {
    check_sum_guards(n, d, limits)?;
    if q == 0 {
        return Err(Error::InvalidInput(
            "progression step q must be positive".into(),
        ));
    }
    let top = q as i128 * n as i128 + r as i128;
    let table = if top >= 2 {
        Some(PrimeTable::sieve(top as u64, limits)?)
    } else {
        None
    };
    let phases = Phases::new(d, limits);
    let mut machine = ResidueMachine::new(h, t, d);
    let mut acc = ComplexKahan::<f64>::new();
    for m in 1..=n {
        let residue = machine.next();
        let p = q as i128 * m as i128 + r as i128;
        if p >= 2 {
            let p = p as u64;
            if table.as_ref().is_some_and(|t| t.is_prime(p)) {
                acc.add(phases.unit_conj(residue) * (p as f64).ln());
            }
        }
    }
    Ok(acc.value())
}

/// Moment of the prime-input spectrum: `sum_{t mod d} |V(t)|^s` against
/// the envelope `d * n^{s-l} + n^s`.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    /// Phase polynomial degree `l`.
    pub degree: u32,
    /// Spectrum modulus `d`.
    pub modulus: u64,
    /// Number of inputs `n`.
    pub inputs: u64,
    /// Moment exponent `s` (must exceed `2^l`).
    pub exponent: f64,
    /// Number of prime inputs encountered.
    pub prime_terms: u64,
    /// `sum_{t mod d} |V(t)|^s`.
    pub moment: f64,
    /// `d * n^{s-l} + n^s`.
    pub envelope: f64,
    /// `moment / envelope`. The underlying estimate carries an unspecified
    /// constant, so this supports ratio reports, never assertions.
    pub ratio: f64,
}

/// Evaluates `sum_{t mod d} |V(t)|^s` for the prime-input sum of
/// [`prime_weyl_sum`], sharing one residue pass and one sieve across all
/// `d` spectrum points.
pub fn moment_sum(
    h: &IntPolynomial,
    q: u64,
    r: i64,
    n: u64,
    d: u64,
    s: f64,
    limits: &Limits,
) -> Result<MomentReport> {
    let ell = match h.degree() {
        Some(ell) if ell >= 1 => ell,
        _ => {
            return Err(Error::InvalidInput(
                "moment sums need a nonconstant polynomial".into(),
            ))
        }
    };
    let threshold = 2f64.powi(ell as i32);
    if !(s > threshold) {
        return Err(Error::InvalidInput(format!(
            "moment exponent {s} must exceed 2^{ell} = {threshold}"
        )));
    }
    check_sum_guards(n, d, limits)?;
    if d > limits.moment_modulus() {
        return Err(Error::GuardExceeded(format!(
            "moment modulus {d} exceeds ceiling {}",
            limits.moment_modulus()
        )));
    }
    if q == 0 {
        return Err(Error::InvalidInput(
            "progression step q must be positive".into(),
        ));
    }
    let top = q as i128 * n as i128 + r as i128;
    let table = if top >= 2 {
        Some(PrimeTable::sieve(top as u64, limits)?)
    } else {
        None
    };
    // One residue pass for h(m) mod d; each spectrum point then scales the
    // stored residues by t.
    let mut machine = ResidueMachine::new(h, 1, d);
    let mut entries: Vec<(u64, f64)> = Vec::new();
    for m in 1..=n {
        let residue = machine.next();
        let p = q as i128 * m as i128 + r as i128;
        if p >= 2 {
            let p = p as u64;
            if table.as_ref().is_some_and(|t| t.is_prime(p)) {
                entries.push((residue, (p as f64).ln()));
            }
        }
    }
    let work = d as u128 * entries.len() as u128;
    if work > limits.tuple_enumeration() as u128 {
        return Err(Error::GuardExceeded(format!(
            "moment sum needs {work} term operations, ceiling is {}",
            limits.tuple_enumeration()
        )));
    }
    let phases = Phases::new(d, limits);
    let mut moment = 0.0f64;
    let mut compensation = 0.0f64;
    for t in 0..d {
        let mut acc = ComplexKahan::<f64>::new();
        for &(residue, weight) in &entries {
            let idx = mul_mod(residue, t, d);
            acc.add(phases.unit_conj(idx) * weight);
        }
        let term = acc.value().norm().powf(s);
        // Kahan step for the scalar moment.
        let y = term - compensation;
        let fresh = moment + y;
        compensation = (fresh - moment) - y;
        moment = fresh;
    }
    let nf = n as f64;
    let envelope = d as f64 * nf.powf(s - ell as f64) + nf.powf(s);
    Ok(MomentReport {
        degree: ell as u32,
        modulus: d,
        inputs: n,
        exponent: s,
        prime_terms: entries.len() as u64,
        moment,
        envelope,
        ratio: moment / envelope,
    })
}

/// Exact second moment of the `j`-fold divisor function
/// `d_j(m) = #{(v_1, ..., v_j) : v_1 * ... * v_j = m}` over `m <= range`.
#[derive(Debug, Clone, Serialize)]
pub struct DivisorMomentReport {
    /// Fold count `j`.
    pub order: u32,
    /// Range `M` of the sum.
    pub range: u64,
    /// Exact `sum_{m<=M} d_j(m)^2`, as a decimal string (it can exceed
    /// `2^64`).
    pub moment: String,
    /// `moment / (M * ln(M)^{j^2-1})`; `None` at `range = 1` where the
    /// normalizer vanishes.
    pub normalized: Option<f64>,
}

/// Computes the exact divisor-function moment by `j - 1` convolution
/// passes of the all-ones table, each pass walking harmonic multiples.
pub fn divisor_moment(j: u32, range: u64, limits: &Limits) -> Result<DivisorMomentReport> {
    if !(2..=4).contains(&j) {
        return Err(Error::InvalidInput(format!(
            "divisor moment order {j} outside the supported range [2, 4]"
        )));
    }
    if range == 0 {
        return Err(Error::InvalidInput("divisor range must be positive".into()));
    }
    if range > limits.divisor_range() {
        return Err(Error::GuardExceeded(format!(
            "divisor range {range} exceeds ceiling {}",
            limits.divisor_range()
        )));
    }
    let m = range as usize;
    let mut table = vec![1u32; m + 1];
    for _ in 1..j {
        let mut folded = vec![0u32; m + 1];
        for a in 1..=m {
            for (quotient, index) in (1..).zip((a..=m).step_by(a)) {
                folded[index] += table[quotient];
            }
        }
        table = folded;
    }
    let mut moment: u128 = 0;
    for &v in &table[1..] {
        moment += v as u128 * v as u128;
    }
    let normalized = if range == 1 {
        None
    } else {
        let mf = range as f64;
        Some(moment as f64 / (mf * mf.ln().powi((j * j - 1) as i32)))
    };
    Ok(DivisorMomentReport {
        order: j,
        range,
        moment: moment.to_string(),
        normalized,
    })
}
