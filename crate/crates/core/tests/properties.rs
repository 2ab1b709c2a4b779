//! Randomized invariant checks: algebraic identities that must hold for
//! every input, exercised over generated instances.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use gaplab_core::expsum::{weyl_sum, weyl_sum_direct};
use gaplab_core::gap::SymmetricGap;
use gaplab_core::intersective::roots_mod;
use gaplab_core::poly::IntPolynomial;
use gaplab_core::{Limits, Zd};

fn limits() -> Limits {
    Limits::default()
}

/// Nonzero integer polynomial with bounded degree and coefficients.
fn poly_strategy(max_degree: usize, coeff: i64) -> impl Strategy<Value = IntPolynomial> {
    vec(-coeff..=coeff, 1..=max_degree + 1)
        .prop_map(|cs| IntPolynomial::from_i64_coeffs(&cs))
        .prop_filter("nonzero", |h| !h.is_zero())
}

proptest! {
    #[test]
    fn display_and_parse_round_trip(cs in vec(-999i64..=999, 0..=9)) {
        let h = IntPolynomial::from_i64_coeffs(&cs);
        let text = h.to_string();
        let back = IntPolynomial::parse(&text, &limits()).unwrap();
        prop_assert_eq!(h, back);
    }

    #[test]
    fn modular_evaluation_matches_exact(
        h in poly_strategy(6, 1_000),
        x in -1_000_000i64..=1_000_000,
        q in 1u64..=1_000_000,
    ) {
        let exact = h.evaluate_i64(x).mod_floor(&BigInt::from(q));
        let xm = (x % q as i64 + q as i64) as u64 % q;
        let modular = h.evaluate_mod(xm, q);
        prop_assert_eq!(BigInt::from(modular), exact);
    }

    #[test]
    fn auxiliary_satisfies_scaling_identity(
        h0 in poly_strategy(5, 500),
        r in -50i64..=50,
        q in 1u64..=999,
    ) {
        // Shift the constant term so q | h(r), the precondition.
        let rem = h0.evaluate_i64(r).mod_floor(&BigInt::from(q));
        let h = IntPolynomial::from_coeffs(
            {
                let mut cs = h0.coefficients().to_vec();
                if cs.is_empty() {
                    cs.push(BigInt::zero());
                }
                cs[0] -= &rem;
                cs
            },
        );
        let aux = h.auxiliary(r, q).unwrap();
        for x in [-3i64, -1, 0, 1, 2, 7] {
            let lhs = BigInt::from(q) * aux.evaluate_i64(x);
            let rhs = h.evaluate_i64(r + q as i64 * x);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn squarefree_part_divides_and_has_no_repeated_factors(
        h in poly_strategy(4, 30),
    ) {
        prop_assume!(h.degree().unwrap_or(0) >= 1);
        let s = h.squarefree_part().unwrap();
        // The squarefree part divides the primitive part exactly.
        prop_assert!(h.primitive_part().exact_div(&s).is_ok());
        // And shares no factor with its own derivative beyond constants.
        let g = gaplab_core::poly::poly_gcd(&s, &s.derivative());
        prop_assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn dft_round_trips_and_matches_direct(
        values in vec((-100i32..=100, -100i32..=100), 1..=192),
    ) {
        let values: Vec<Complex64> = values
            .into_iter()
            .map(|(re, im)| Complex64::new(re as f64, im as f64))
            .collect();
        let d = values.len() as f64;
        let f = Zd::new(values).unwrap();
        let fast = f.dft();
        let direct = f.dft_direct();
        let scale = f.max_abs() * d + 1.0;
        for (a, b) in fast.values().iter().zip(direct.values()) {
            prop_assert!((a - b).norm() <= 1e-9 * scale);
        }
        let back = fast.inverse_dft();
        for (a, b) in back.values().iter().zip(f.values()) {
            prop_assert!((a - b).norm() <= 1e-9 * scale);
        }
        // Norm preservation up to the transform's d factor.
        let physical: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
        let spectral: f64 = fast.values().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((spectral - d * physical).abs() <= 1e-8 * (d * physical + 1.0));
    }

    #[test]
    fn real_functions_have_conjugate_symmetric_transforms(
        values in vec(-100i32..=100, 1..=160),
    ) {
        let f = Zd::from_real(values.into_iter().map(f64::from).collect()).unwrap();
        let d = f.modulus();
        let hat = f.dft();
        let scale = f.max_abs() * d as f64 + 1.0;
        for t in 0..d {
            let mirrored = hat.values()[(d - t) % d].conj();
            prop_assert!((hat.values()[t] - mirrored).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn properness_counts_are_a_sandwich(
        dims in prop::sample::select(vec![1usize, 2, 3]),
        raw_steps in vec(1i64..=40, 3),
        raw_widths in vec(1i64..=6, 3),
    ) {
        let steps = raw_steps[..dims].to_vec();
        let widths = raw_widths[..dims].to_vec();
        let gap = SymmetricGap::new(steps, widths).unwrap();
        let report = gap.properness(&limits()).unwrap();
        let tuples = gap.tuple_count() as u64;
        prop_assert!(report.distinct_size >= 1);
        prop_assert!(report.distinct_size <= tuples);
        prop_assert!(tuples <= report.distinct_size * report.max_representations);
        prop_assert_eq!(report.is_proper, report.distinct_size == tuples);
        if let Some(fast) = gap.is_proper_fast() {
            prop_assert_eq!(fast, report.is_proper);
        }
        // Membership agrees with full enumeration on a sample of points.
        let elements = gap.value_counts(&limits()).unwrap();
        prop_assert_eq!(elements.len() as u64, report.distinct_size);
        for (v, _) in elements.iter().step_by(7) {
            prop_assert!(gap.contains(*v));
        }
        let beyond = gap.span() as i64 + 1;
        prop_assert!(!gap.contains(beyond));
        prop_assert!(!gap.contains(-beyond));
    }

    #[test]
    fn exponential_sums_match_their_reference_path(
        h in poly_strategy(4, 100),
        n in 1u64..=250,
        d in 1u64..=2_000,
        t_raw in -4_000i64..=4_000,
    ) {
        let lim = limits();
        let fast = weyl_sum(&h, n, t_raw, d, &lim).unwrap();
        let slow = weyl_sum_direct(&h, n, t_raw, d, &lim).unwrap();
        // Identical rounding step by step, not merely close.
        prop_assert_eq!(fast.re.to_bits(), slow.re.to_bits());
        prop_assert_eq!(fast.im.to_bits(), slow.im.to_bits());
        prop_assert!(fast.norm() <= n as f64 * (1.0 + 1e-9));
        let conj = weyl_sum(&h, n, -t_raw, d, &lim).unwrap();
        prop_assert!((conj - fast.conj()).norm() <= 1e-9 * (n as f64 + 1.0));
    }

    #[test]
    fn root_sets_glue_multiplicatively(
        h in poly_strategy(4, 60),
        pair in prop::sample::select(vec![
            (3u64, 4u64), (4, 9), (5, 8), (7, 9), (8, 15), (9, 25), (16, 27), (25, 49),
        ]),
    ) {
        let lim = limits();
        let (q1, q2) = pair;
        let q = q1 * q2;
        let combined = roots_mod(&h, q, &lim).unwrap();
        let r1 = roots_mod(&h, q1, &lim).unwrap();
        let r2 = roots_mod(&h, q2, &lim).unwrap();
        let mut glued: Vec<u64> = Vec::new();
        for &a in &r1 {
            for &b in &r2 {
                for x in 0..q {
                    if x % q1 == a && x % q2 == b {
                        glued.push(x);
                    }
                }
            }
        }
        glued.sort_unstable();
        prop_assert_eq!(combined, glued);
    }

    #[test]
    fn avoidance_verdicts_are_witnessed(
        step in 1i64..=60,
        width in 1i64..=40,
        cs in vec(-9i64..=9, 2..=4),
    ) {
        let h = IntPolynomial::from_i64_coeffs(&cs);
        prop_assume!(h.degree().unwrap_or(0) >= 1);
        let lim = limits();
        let gap = SymmetricGap::new(vec![step], vec![width]).unwrap();
        match gaplab_core::gap::avoids(&gap, &h, gaplab_core::InputMode::Integers, &lim).unwrap() {
            gaplab_core::gap::AvoidanceVerdict::Contains { input, value } => {
                prop_assert_eq!(BigInt::from(value), h.evaluate_i64(input));
                prop_assert!(value != 0);
                prop_assert!(gap.contains(value));
            }
            gaplab_core::gap::AvoidanceVerdict::Avoids => {
                // Spot-check: no small input lands a value inside.
                for nn in -60i64..=60 {
                    let v = h.evaluate_i64(nn);
                    if !v.is_zero() && v.abs() <= BigInt::from(gap.max_abs()) {
                        prop_assert!(!gap.contains(v.to_i64().unwrap()));
                    }
                }
            }
        }
    }
}
