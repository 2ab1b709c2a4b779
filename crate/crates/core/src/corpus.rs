//! A fixed corpus of integer polynomials exercising every root-finding,
//! lifting, and certification path: linear units, content multiples,
//! irreducible quadratics, quadratic residues with singular reductions,
//! repeated factors, polynomials with local roots everywhere but no
//! rational root, and 2-adic failures that only appear beyond the first
//! power.
//!
//! The corpus is frozen: tests refer to entries by position and by display
//! form, so the list must never be reordered, only (carefully) extended.

use crate::poly::IntPolynomial;

/// Ascending coefficient rows of the thirty corpus polynomials.
const COEFFS: [&[i64]; 30] = [
    // Degree 1: always an integer root or an explicit unit obstruction.
    &[0, 1],                      // x
    &[-1, 1],                     // x - 1
    &[1, 1],                      // x + 1
    &[1, 2],                      // 2x + 1: no root mod 2, roots elsewhere
    &[-21, 7],                    // 7(x - 3): nontrivial content
    // Degree 2.
    &[1, 0, 1],                   // x^2 + 1: refuted at 3 (and 2-adically at 4)
    &[-2, 0, 1],                  // x^2 - 2: quadratic-residue dependent
    &[1, 1, 1],                   // x^2 + x + 1: roots iff p = 1 mod 3 (or p = 3)
    &[-1, -1, 1],                 // x^2 - x - 1: golden-ratio discriminant 5
    &[0, 0, 1],                   // x^2: repeated root at 0
    &[0, 1, 1],                   // x(x + 1): two integer roots
    &[-1, 0, 3],                  // 3x^2 - 1: leading coefficient shares factors with moduli
    &[3, 0, 1],                   // x^2 + 3: singular root 0 mod 3 that dies at 9
    &[-17, 0, 1],                 // x^2 - 17: 2-adic square, lifts forever at 2
    &[7, 3, 5],                   // 5x^2 + 3x + 7: negative discriminant, odd leading
    &[-1, 0, 4],                  // 4x^2 - 1: rational non-integer roots
    // Degree 3.
    &[-2, 0, 0, 1],               // x^3 - 2
    &[1, 1, 0, 1],                // x^3 + x + 1: no root mod 2
    &[0, -1, 0, 1],               // x(x - 1)(x + 1)
    &[-19, 0, 0, 1],              // x^3 - 19: cubic-residue dependent
    &[1, 1, 1, 1],                // (x + 1)(x^2 + 1): root at -1
    &[7, 5, 3, 2],                // 2x^3 + 3x^2 + 5x + 7
    &[-17, 3, 0, 9],              // 9x^3 + 3x - 17
    // Degree 4.
    &[4, 0, -4, 0, 1],            // (x^2 - 2)^2: repeated irreducible factor
    &[1, 0, 0, 0, 1],             // x^4 + 1: root mod 2 but none mod 4 (or mod 3)
    &[1, 0, -10, 0, 1],           // x^4 - 10x^2 + 1: min poly of sqrt(2)+sqrt(3); dies at 16
    // Degree 5 and up.
    &[-19, -19, -19, 1, 1, 1],    // (x^3 - 19)(x^2 + x + 1): see canonical_quintic
    &[-1, -1, 0, 0, 0, 1],        // x^5 - x - 1: generic Galois group
    &[-1, 0, 0, 0, 0, 0, 1],      // x^6 - 1: roots at +-1, many roots mod primes
    &[-100003, 0, 100003],        // 100003(x^2 - 1): large prime content
];

/// The thirty fixed reference polynomials, in frozen order.
pub fn reference_corpus() -> Vec<IntPolynomial> {
    COEFFS
        .iter()
        .map(|c| IntPolynomial::from_i64_coeffs(c))
        .collect()
}

/// The expanded product `(x^3 - 19)(x^2 + x + 1)`: no rational root, yet a
/// p-adic root exists for every prime, so it certifies as intersective for
/// integer and for prime inputs alike. The canonical positive example for
/// the certifier.
pub fn canonical_quintic() -> IntPolynomial {
    IntPolynomial::from_i64_coeffs(&[-19, -19, -19, 1, 1, 1])
}
