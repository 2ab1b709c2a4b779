//! Roots of integer polynomials modulo prime powers, p-adic root decisions
//! by certified lifting, and intersectivity certificates.
//!
//! The decision procedure works on the squarefree part `h~` of `h`: a root
//! `r` of `h~` modulo `p^j` with `j >= 2e + 1`, where `e = v_p(h~'(r))`,
//! lifts indefinitely, and every branch of the lifting tree is resolved one
//! way or the other by depth `2·v_p(res(h~, h~')) + 1`. Refutations are
//! re-measured on `h` itself so the reported exponent is exactly the first
//! level at which `h` has no admissible root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::{horner_mod, IntPolynomial};
use crate::primes::{is_prime_u64, PrimeTable};
use crate::InputMode;

/// Hard ceiling on lifting depth, independent of the resultant-based cap.
const DEPTH_CEILING: u32 = 64;

/// All roots of `h` modulo `q`, ascending.
///
/// Prime-power parts are lifted level by level from brute force modulo `p`;
/// composite moduli are glued by the Chinese remainder theorem.
pub fn roots_mod(h: &IntPolynomial, q: u64, limits: &Limits) -> Result<Vec<u64>> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "every residue is a root of the zero polynomial".into(),
        ));
    }
    if q == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if q == 1 {
        return Ok(vec![0]);
    }
    let mut roots: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for (p, k) in factorize(q) {
        let pk = p.pow(k);
        let part = roots_mod_prime_power(h, p, k, limits)?;
        let mut glued = Vec::with_capacity(roots.len() * part.len().max(1));
        if roots.len() as u64 * part.len() as u64 > limits.tuple_enumeration() {
            return Err(Error::GuardExceeded(format!(
                "root composition for modulus {q} exceeds {} residues",
                limits.tuple_enumeration()
            )));
        }
        for &x in &roots {
            for &r in &part {
                glued.push(crt_pair(x, modulus, r, pk));
            }
        }
        roots = glued;
        modulus *= pk;
    }
    roots.sort_unstable();
    Ok(roots)
}

/// Roots of `h` modulo `p^k` by level-by-level lifting (ascending).
pub fn roots_mod_prime_power(
    h: &IntPolynomial,
    p: u64,
    k: u32,
    limits: &Limits,
) -> Result<Vec<u64>> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "every residue is a root of the zero polynomial".into(),
        ));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p > limits.direct_root_modulus() {
        return Err(Error::GuardExceeded(format!(
            "base prime {p} exceeds the direct scan limit {}",
            limits.direct_root_modulus()
        )));
    }
    if k == 0 {
        return Ok(vec![0]);
    }
    if p.checked_pow(k).is_none() {
        return Err(Error::GuardExceeded(format!(
            "prime power {p}^{k} does not fit in 64 bits"
        )));
    }
    let dcoeffs = h.derivative().reduced_mod(p);
    // Level 1 by direct scan.
    let base = h.reduced_mod(p);
    let mut frontier: Vec<u64> = (0..p).filter(|&r| horner_mod(&base, r, p) == 0).collect();
    let mut pj = p;
    for _ in 1..k {
        let next_mod = pj * p;
        let reduced = h.reduced_mod(next_mod);
        let mut next = Vec::with_capacity(frontier.len());
        for &r in &frontier {
            let hr = horner_mod(&reduced, r % next_mod, next_mod);
            let d1 = horner_mod(&dcoeffs, r % p, p);
            if d1 != 0 {
                let c = (hr / pj) % p;
                let t = (p - c) % p * mod_inv(d1, p).expect("unit mod p") % p;
                next.push(r + t * pj);
            } else if hr == 0 {
                for t in 0..p {
                    next.push(r + t * pj);
                }
            }
        }
        if next.len() as u64 > limits.lifting_frontier() {
            return Err(Error::GuardExceeded(format!(
                "lifting frontier for {p}^{k} exceeds {}",
                limits.lifting_frontier()
            )));
        }
        frontier = next;
        pj = next_mod;
    }
    frontier.sort_unstable();
    Ok(frontier)
}

/// Witness for a p-adic root: an approximation `root` modulo
/// `p^modulus_exponent` whose branch provably lifts indefinitely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicRootWitness {
    pub prime: u64,
    pub root: BigInt,
    pub modulus_exponent: u32,
    pub derivative_valuation: u32,
}

/// Proof that no admissible root exists: the exhaustive level-by-level
/// count of admissible roots of `h` itself, ending in zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub prime: u64,
    /// Smallest exponent `k` with no admissible root of `h` modulo `p^k`.
    pub exponent: u32,
    /// `level_counts[i]` = number of admissible roots modulo `p^(i+1)`.
    pub level_counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicConclusion {
    RootExists(PadicRootWitness),
    NoRoot(Refutation),
}

impl PadicConclusion {
    pub fn root_exists(&self) -> bool {
        matches!(self, PadicConclusion::RootExists(_))
    }
}

/// Decides whether `h` has a root in the p-adic integers (a p-adic unit
/// root when `coprime` is set), with a checkable witness either way.
pub fn has_padic_root(
    h: &IntPolynomial,
    p: u64,
    coprime: bool,
    limits: &Limits,
) -> Result<PadicConclusion> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "p-adic roots of the zero polynomial are everything".into(),
        ));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p > limits.direct_root_modulus() {
        return Err(Error::GuardExceeded(format!(
            "base prime {p} exceeds the direct scan limit {}",
            limits.direct_root_modulus()
        )));
    }
    if h.is_constant() {
        // A nonzero constant c is divisible by p^j exactly while j <= v_p(c),
        // and then every residue (every unit, under the coprime filter) is a
        // root mod p^j; the first empty level is v_p(c) + 1.
        let c = h.coefficient(0);
        let vp = valuation(&c, p).expect("nonzero constant");
        let mut counts: Vec<u64> = Vec::new();
        let mut pj = 1u64;
        for _ in 1..=vp {
            pj = pj.saturating_mul(p);
            counts.push(if coprime { pj - pj / p } else { pj });
        }
        counts.push(0);
        return Ok(PadicConclusion::NoRoot(Refutation {
            prime: p,
            exponent: vp + 1,
            level_counts: counts,
        }));
    }

    let ht = h.squarefree_part()?;
    let resultant = ht.resultant(&ht.derivative());
    debug_assert!(!resultant.is_zero(), "squarefree part has nonzero discriminant pairing");
    let rho = valuation(&resultant, p).unwrap_or(0);
    let cap = DEPTH_CEILING.min(2 * rho + 1);

    match lift_decide(&ht, p, coprime, cap, limits)? {
        Some(witness) => Ok(PadicConclusion::RootExists(witness)),
        None => {
            // No p-adic root. Measure the first empty level of h itself.
            let refutation = trace_death(h, p, coprime, limits)?;
            Ok(PadicConclusion::NoRoot(refutation))
        }
    }
}

/// Runs the certified lifting tree on a squarefree polynomial. Returns a
/// witness if some branch certifies, `None` if the tree dies, and an error
/// if `cap` levels pass without resolution.
fn lift_decide(
    ht: &IntPolynomial,
    p: u64,
    coprime: bool,
    cap: u32,
    limits: &Limits,
) -> Result<Option<PadicRootWitness>> {
    let dt = ht.derivative();
    let pb = BigInt::from(p);
    let base = ht.reduced_mod(p);
    let mut frontier: Vec<BigInt> = (0..p)
        .filter(|&r| horner_mod(&base, r, p) == 0)
        .filter(|&r| !coprime || r % p != 0)
        .map(BigInt::from)
        .collect();
    let mut level: u32 = 1;
    let mut pj = pb.clone();
    loop {
        if frontier.is_empty() {
            return Ok(None);
        }
        // Certificates at the current level.
        for r in &frontier {
            let value = ht.evaluate(r);
            if value.is_zero() {
                // Exact integer root: lifts forever trivially.
                return Ok(Some(PadicRootWitness {
                    prime: p,
                    root: r.clone(),
                    modulus_exponent: level,
                    derivative_valuation: valuation(&dt.evaluate(r), p).unwrap_or(0),
                }));
            }
            let dval = dt.evaluate(r);
            if let Some(e) = valuation(&dval, p) {
                if level >= 2 * e + 1 {
                    return Ok(Some(PadicRootWitness {
                        prime: p,
                        root: r.clone(),
                        modulus_exponent: level,
                        derivative_valuation: e,
                    }));
                }
            }
        }
        if level >= cap {
            return Err(Error::Inconclusive(format!(
                "lifting tree for prime {p} unresolved at depth cap {cap}"
            )));
        }
        // Build the next level.
        let next_mod = &pj * &pb;
        let mut next: Vec<BigInt> = Vec::with_capacity(frontier.len());
        for r in &frontier {
            let hr = ht.evaluate(r).mod_floor(&next_mod);
            let d1 = dt.evaluate(r).mod_floor(&pb).to_u64().unwrap();
            if d1 != 0 {
                // Unique nonsingular lift.
                let c = (&hr / &pj).mod_floor(&pb).to_u64().unwrap();
                let t = (p - c) % p * mod_inv(d1, p).expect("unit mod p") % p;
                next.push(r + &pj * BigInt::from(t));
            } else if hr.is_zero() {
                for t in 0..p {
                    next.push(r + &pj * BigInt::from(t));
                }
                if next.len() as u64 > limits.lifting_frontier() {
                    return Err(Error::GuardExceeded(format!(
                        "lifting frontier for prime {p} exceeds {}",
                        limits.lifting_frontier()
                    )));
                }
            }
        }
        frontier = next;
        pj = next_mod;
        level += 1;
    }
}

/// Level-by-level admissible-root counts of `h` itself until the first
/// empty level (which must come, given that no p-adic root exists).
fn trace_death(
    h: &IntPolynomial,
    p: u64,
    coprime: bool,
    limits: &Limits,
) -> Result<Refutation> {
    let pb = BigInt::from(p);
    let dh = h.derivative();
    let base = h.reduced_mod(p);
    let mut frontier: Vec<BigInt> = (0..p)
        .filter(|&r| horner_mod(&base, r, p) == 0)
        .filter(|&r| !coprime || r % p != 0)
        .map(BigInt::from)
        .collect();
    let mut counts = vec![frontier.len() as u64];
    let mut level: u32 = 1;
    let mut pj = pb.clone();
    while !frontier.is_empty() {
        if level >= DEPTH_CEILING {
            return Err(Error::Inconclusive(format!(
                "refutation trace for prime {p} still alive at depth {DEPTH_CEILING}"
            )));
        }
        let next_mod = &pj * &pb;
        let mut next = Vec::with_capacity(frontier.len());
        for r in &frontier {
            // Children r + t·p^level surviving mod p^(level+1) satisfy
            // c + t·h'(r) = 0 (mod p) with c = (h(r)/p^level) mod p.
            let hr = h.evaluate(r).mod_floor(&next_mod);
            let d1 = dh.evaluate(r).mod_floor(&pb).to_u64().unwrap();
            if d1 != 0 {
                let c = (&hr / &pj).mod_floor(&pb).to_u64().unwrap();
                let t = (p - c) % p * mod_inv(d1, p).expect("unit mod p") % p;
                next.push(r + &pj * BigInt::from(t));
            } else if hr.is_zero() {
                for t in 0..p {
                    next.push(r + &pj * BigInt::from(t));
                }
            }
            if next.len() as u64 > limits.lifting_frontier() {
                return Err(Error::GuardExceeded(format!(
                    "refutation frontier for prime {p} exceeds {}",
                    limits.lifting_frontier()
                )));
            }
        }
        frontier = next;
        pj = next_mod;
        level += 1;
        counts.push(frontier.len() as u64);
    }
    Ok(Refutation {
        prime: p,
        exponent: level,
        level_counts: counts,
    })
}

/// Per-prime witness stored in a certificate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateWitness {
    pub prime: u64,
    /// Decimal representation of the approximate root.
    pub root: String,
    pub modulus_exponent: u32,
    pub coprime: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateStatus {
    VerifiedUpTo {
        prime_bound: u64,
    },
    Refuted {
        prime: u64,
        exponent: u32,
        /// Admissible root counts of `h` modulo `p^1, p^2, ...` ending in 0.
        trace: Vec<u64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntersectivityCertificate {
    pub poly: String,
    pub mode: InputMode,
    pub status: CertificateStatus,
    pub witnesses: Vec<CertificateWitness>,
}

/// Certifies roots at every prime `p <= prime_bound` (p-adic unit roots in
/// primes mode). If any prime refutes, the refutation with the smallest
/// witness modulus `p^k` is reported and the witness list is emptied.
pub fn certify(
    h: &IntPolynomial,
    mode: InputMode,
    prime_bound: u64,
    limits: &Limits,
) -> Result<IntersectivityCertificate> {
    if prime_bound > limits.certification_prime_bound() {
        return Err(Error::GuardExceeded(format!(
            "prime bound {prime_bound} exceeds {}",
            limits.certification_prime_bound()
        )));
    }
    let coprime = mode == InputMode::Primes;
    let table = PrimeTable::sieve(prime_bound, limits)?;
    let primes: Vec<u64> = table.primes_up_to(prime_bound).collect();
    let conclusions: Vec<(u64, Result<PadicConclusion>)> = primes
        .par_iter()
        .map(|&p| (p, has_padic_root(h, p, coprime, limits)))
        .collect();

    // Deterministic reduction: the refutation with the smallest p^k wins.
    let mut best: Option<&Refutation> = None;
    let mut inconclusive: Option<(u64, String)> = None;
    let mut witnesses = Vec::new();
    for (p, conclusion) in &conclusions {
        match conclusion {
            Ok(PadicConclusion::RootExists(w)) => witnesses.push(CertificateWitness {
                prime: *p,
                root: w.root.to_string(),
                modulus_exponent: w.modulus_exponent,
                coprime,
            }),
            Ok(PadicConclusion::NoRoot(r)) => {
                let smaller = match best {
                    None => true,
                    Some(b) => {
                        BigInt::from(r.prime).pow(r.exponent)
                            < BigInt::from(b.prime).pow(b.exponent)
                    }
                };
                if smaller {
                    best = Some(r);
                }
            }
            Err(Error::Inconclusive(msg)) => {
                if inconclusive.is_none() {
                    inconclusive = Some((*p, msg.clone()));
                }
            }
            Err(e) => {
                return Err(Error::InvalidInput(format!(
                    "certification failed at prime {p}: {e}"
                )))
            }
        }
    }
    if let Some(r) = best {
        return Ok(IntersectivityCertificate {
            poly: h.to_string(),
            mode,
            status: CertificateStatus::Refuted {
                prime: r.prime,
                exponent: r.exponent,
                trace: r.level_counts.clone(),
            },
            witnesses: Vec::new(),
        });
    }
    if let Some((p, msg)) = inconclusive {
        return Err(Error::Inconclusive(format!(
            "prime {p} unresolved and no smaller refutation found: {msg}"
        )));
    }
    Ok(IntersectivityCertificate {
        poly: h.to_string(),
        mode,
        status: CertificateStatus::VerifiedUpTo { prime_bound },
        witnesses,
    })
}

/// Smallest root of `h` modulo `q` that is coprime to `q`, if any.
pub fn coprime_root_for_gap(
    h: &IntPolynomial,
    q: u64,
    limits: &Limits,
) -> Result<Option<u64>> {
    if q == 1 {
        return Ok(Some(0));
    }
    let roots = roots_mod(h, q, limits)?;
    Ok(roots.into_iter().find(|&r| r.gcd(&q) == 1))
}

/// `v_p(n)` for nonzero `n`.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0u32;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut k = 0u32;
        while *n % p == 0 {
            *n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

fn crt_pair(x: u64, m: u64, r: u64, pk: u64) -> u64 {
    // Unique y mod m·pk with y = x (mod m), y = r (mod pk); gcd(m, pk) = 1.
    let inv = mod_inv(m % pk, pk).expect("coprime moduli");
    let diff = (r % pk + pk - x % pk) % pk;
    let t = (diff as u128 * inv as u128 % pk as u128) as u64;
    x + m * t
}
