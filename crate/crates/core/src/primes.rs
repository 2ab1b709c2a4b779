//! Prime tables, Chebyshev-type log sums over residue classes, and
//! least-prime scans in arithmetic progressions.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Bit-packed sieve of Eratosthenes over `0..=limit`.
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
}

impl PrimeTable {
    pub fn sieve(limit: u64, limits: &Limits) -> Result<PrimeTable> {
        if limit > limits.sieve_limit() {
            return Err(Error::GuardExceeded(format!(
                "sieve limit {limit} exceeds {}",
                limits.sieve_limit()
            )));
        }
        let words = (limit as usize / 64) + 1;
        let mut bits = vec![u64::MAX; words];
        let clear = |bits: &mut [u64], n: u64| bits[(n / 64) as usize] &= !(1 << (n % 64));
        clear(&mut bits, 0);
        if limit >= 1 {
            clear(&mut bits, 1);
        }
        let mut p = 2u64;
        while p.saturating_mul(p) <= limit {
            if bits[(p / 64) as usize] >> (p % 64) & 1 == 1 {
                let mut m = p * p;
                while m <= limit {
                    clear(&mut bits, m);
                    m += p;
                }
            }
            p += 1;
        }
        // Trim stray bits beyond the limit so popcounts are honest.
        let last = limit % 64;
        if last < 63 {
            let mask = (1u64 << (last + 1)) - 1;
            *bits.last_mut().unwrap() &= mask;
        }
        Ok(PrimeTable { limit, bits })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Membership; panics beyond the sieve to avoid silently wrong answers.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "query {n} beyond sieve limit {}", self.limit);
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Ascending primes `<= x`.
    pub fn primes_up_to(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        assert!(x <= self.limit, "query {x} beyond sieve limit {}", self.limit);
        PrimeIter {
            table: self,
            word_index: 0,
            current: self.bits[0],
            bound: x,
            done: false,
        }
    }

    pub fn count_up_to(&self, x: u64) -> u64 {
        self.primes_up_to(x).count() as u64
    }
}

struct PrimeIter<'a> {
    table: &'a PrimeTable,
    word_index: usize,
    current: u64,
    bound: u64,
    done: bool,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        loop {
            if self.current == 0 {
                self.word_index += 1;
                if self.word_index >= self.table.bits.len() {
                    self.done = true;
                    return None;
                }
                self.current = self.table.bits[self.word_index];
                continue;
            }
            let bit = self.current.trailing_zeros() as u64;
            self.current &= self.current - 1;
            let n = self.word_index as u64 * 64 + bit;
            if n > self.bound {
                self.done = true;
                return None;
            }
            return Some(n);
        }
    }
}

/// Deterministic Miller-Rabin primality for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An exactly additive sum of `ln p` values.
///
/// Each `ln p` (as rounded to `f64`) is an exact multiple of `2^-64` for the
/// magnitudes that occur here, so the fixed-point accumulator below adds
/// them without further rounding. Sums over disjoint sets of primes are
/// therefore *bit-exactly* additive, independent of summation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LogSum {
    units: i128,
}

const LOG_UNIT: f64 = 18446744073709551616.0; // 2^64

impl LogSum {
    pub fn zero() -> Self {
        LogSum { units: 0 }
    }

    /// The `f64`-rounded `ln n`, captured exactly.
    pub fn of_log(n: u64) -> Self {
        debug_assert!(n >= 2);
        let v = (n as f64).ln();
        debug_assert!(v < 63.0, "log value out of exact fixed-point range");
        LogSum {
            units: (v * LOG_UNIT) as i128,
        }
    }

    pub fn units(&self) -> i128 {
        self.units
    }

    pub fn to_f64(self) -> f64 {
        self.units as f64 / LOG_UNIT
    }
}

impl std::ops::Add for LogSum {
    type Output = LogSum;

    fn add(self, rhs: LogSum) -> LogSum {
        LogSum {
            units: self.units + rhs.units,
        }
    }
}

impl std::ops::AddAssign for LogSum {
    fn add_assign(&mut self, rhs: LogSum) {
        self.units += rhs.units;
    }
}

impl std::iter::Sum for LogSum {
    fn sum<I: Iterator<Item = LogSum>>(iter: I) -> LogSum {
        iter.fold(LogSum::zero(), |a, b| a + b)
    }
}

/// `psi(x; q, a) = sum of ln p over primes p <= x with p = a (mod q)`.
///
/// Primes only: proper prime powers are not counted.
pub fn psi(table: &PrimeTable, x: u64, a: u64, q: u64) -> Result<LogSum> {
    if q == 0 {
        return Err(Error::InvalidInput("modulus q must be positive".into()));
    }
    if x > table.limit() {
        return Err(Error::GuardExceeded(format!(
            "psi query {x} beyond sieve limit {}",
            table.limit()
        )));
    }
    let a = a % q;
    let mut acc = LogSum::zero();
    for p in table.primes_up_to(x) {
        if p % q == a {
            acc += LogSum::of_log(p);
        }
    }
    Ok(acc)
}

/// All residue classes of `psi(x; q, ·)` in one pass over the sieve.
pub fn psi_classes(table: &PrimeTable, x: u64, q: u64) -> Result<Vec<LogSum>> {
    if q == 0 {
        return Err(Error::InvalidInput("modulus q must be positive".into()));
    }
    if x > table.limit() {
        return Err(Error::GuardExceeded(format!(
            "psi query {x} beyond sieve limit {}",
            table.limit()
        )));
    }
    let mut classes = vec![LogSum::zero(); q as usize];
    for p in table.primes_up_to(x) {
        classes[(p % q) as usize] += LogSum::of_log(p);
    }
    Ok(classes)
}

/// Euler's totient by trial factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut phi = 1u64;
    let handle = |n: &mut u64, p: u64, phi: &mut u64| {
        if *n % p == 0 {
            let mut pk = 1u64;
            while *n % p == 0 {
                *n /= p;
                pk *= p;
            }
            *phi *= pk - pk / p;
        }
    };
    handle(&mut n, 2, &mut phi);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        handle(&mut n, p, &mut phi);
        p += 2;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Normalized lower-bound ratio `psi(x; q, a) * phi(q) * sqrt(q) / x`.
///
/// Reported, not asserted: the comparison constant in the underlying lower
/// bound is not explicit. Positivity (the existence statement) is what
/// callers assert, and only in regimes where a prime is guaranteed to be
/// found by brute force (`q <= x^{1/3}` in the shipped verification grid).
pub fn lemma6_ratio(table: &PrimeTable, x: u64, a: u64, q: u64) -> Result<f64> {
    if q == 0 || a.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!(
            "requires gcd(a, q) = 1, got a = {a}, q = {q}"
        )));
    }
    let value = psi(table, x, a, q)?.to_f64();
    Ok(value * euler_phi(q) as f64 * (q as f64).sqrt() / x as f64)
}

/// Least prime `p = a (mod q)`, by direct scan with a guarded ceiling.
pub fn least_prime_in_ap(a: u64, q: u64, limits: &Limits) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidInput("modulus q must be positive".into()));
    }
    if a.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!(
            "requires gcd(a, q) = 1, got a = {a}, q = {q}"
        )));
    }
    let ceiling = limits.least_prime_ceiling();
    let mut n = a % q;
    if n == 0 {
        n = q; // q = 1: every integer qualifies, start at 2 below.
    }
    loop {
        if n >= 2 && is_prime_u64(n) {
            return Ok(n);
        }
        n = n
            .checked_add(q)
            .ok_or_else(|| Error::GuardExceeded("least-prime scan overflowed".into()))?;
        if n > ceiling {
            return Err(Error::GuardExceeded(format!(
                "no prime = {a} (mod {q}) below ceiling {ceiling}"
            )));
        }
    }
}

/// One modulus of a least-prime scan: the worst residue class and its
/// normalized size `p / q^2`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LeastPrimeRow {
    pub q: u64,
    pub worst_a: u64,
    pub least_prime: u64,
    pub ratio: f64,
}

/// Worst-case least primes `max_a p(q, a)` for every modulus in
/// `q_min..=q_max`, with the growth ratio `p / q^2`.
pub fn least_prime_scan(q_min: u64, q_max: u64, limits: &Limits) -> Result<Vec<LeastPrimeRow>> {
    if q_min < 2 || q_min > q_max {
        return Err(Error::InvalidInput(format!(
            "scan range [{q_min}, {q_max}] must satisfy 2 <= q_min <= q_max"
        )));
    }
    let mut rows = Vec::with_capacity((q_max - q_min + 1) as usize);
    for q in q_min..=q_max {
        let mut worst = LeastPrimeRow {
            q,
            worst_a: 0,
            least_prime: 0,
            ratio: 0.0,
        };
        for a in 1..q.max(2) {
            if a.gcd(&q) != 1 {
                continue;
            }
            let p = least_prime_in_ap(a, q, limits)?;
            if p > worst.least_prime {
                worst.worst_a = a;
                worst.least_prime = p;
            }
        }
        worst.ratio = worst.least_prime as f64 / (q as f64 * q as f64);
        rows.push(worst);
    }
    Ok(rows)
}
