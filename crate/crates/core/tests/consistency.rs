//! Cross-module consistency over the frozen polynomial corpus: the p-adic
//! decision procedure, the explicit root-lifting routine, and the
//! whole-certificate layer must tell one coherent story.

use gaplab_core::corpus::reference_corpus;
use gaplab_core::intersective::{
    certify, has_padic_root, roots_mod_prime_power, CertificateStatus, PadicConclusion,
};
use gaplab_core::poly::IntPolynomial;
use gaplab_core::{InputMode, Limits};

const TEST_PRIMES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 37, 97];

fn admissible_count(h: &IntPolynomial, p: u64, k: u32, coprime: bool, limits: &Limits) -> u64 {
    roots_mod_prime_power(h, p, k, limits)
        .unwrap()
        .into_iter()
        .filter(|r| !coprime || r % p != 0)
        .count() as u64
}

#[test]
fn padic_decisions_agree_with_explicit_lifting() {
    let limits = Limits::default();
    for h in reference_corpus() {
        for &p in &TEST_PRIMES {
            for coprime in [false, true] {
                match has_padic_root(&h, p, coprime, &limits).unwrap() {
                    PadicConclusion::RootExists(w) => {
                        assert_eq!(w.prime, p);
                        // A certified branch forces admissible roots at
                        // every finite level we can afford to expand.
                        let k_max = (40 / (64 - p.leading_zeros())).clamp(2, 8);
                        for k in 1..=k_max {
                            assert!(
                                admissible_count(&h, p, k, coprime, &limits) > 0,
                                "{h} claims a {p}-adic root but has none mod {p}^{k}"
                            );
                        }
                        // The witness really is a root at its stated level.
                        let pk = num_bigint::BigInt::from(p).pow(w.modulus_exponent);
                        let val = h.evaluate(&w.root);
                        assert!(
                            (val % &pk).eq(&num_bigint::BigInt::from(0)),
                            "witness fails for {h} at {p}^{}",
                            w.modulus_exponent
                        );
                    }
                    PadicConclusion::NoRoot(r) => {
                        assert_eq!(r.prime, p);
                        assert_eq!(r.level_counts.last(), Some(&0));
                        assert_eq!(r.level_counts.len() as u32, r.exponent);
                        // The refutation trace must equal the true
                        // admissible-root counts level by level.
                        for (i, &count) in r.level_counts.iter().enumerate() {
                            assert_eq!(
                                count,
                                admissible_count(&h, p, i as u32 + 1, coprime, &limits),
                                "level {} of the refutation of {h} at {p}",
                                i + 1
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn certificates_summarize_per_prime_conclusions() {
    let limits = Limits::default();
    let bound = 50u64;
    for h in reference_corpus() {
        for mode in [InputMode::Integers, InputMode::Primes] {
            let coprime = mode == InputMode::Primes;
            let cert = match certify(&h, mode, bound, &limits) {
                Ok(c) => c,
                Err(gaplab_core::Error::Inconclusive(_)) => continue,
                Err(e) => panic!("certification of {h} failed: {e}"),
            };
            match cert.status {
                CertificateStatus::VerifiedUpTo { prime_bound } => {
                    assert_eq!(prime_bound, bound);
                    let witness_primes: Vec<u64> =
                        cert.witnesses.iter().map(|w| w.prime).collect();
                    assert_eq!(witness_primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
                    for &p in &witness_primes {
                        assert!(has_padic_root(&h, p, coprime, &limits)
                            .unwrap()
                            .root_exists());
                    }
                }
                CertificateStatus::Refuted { prime, exponent, ref trace } => {
                    assert!(cert.witnesses.is_empty());
                    let conclusion = has_padic_root(&h, prime, coprime, &limits).unwrap();
                    match conclusion {
                        PadicConclusion::NoRoot(r) => {
                            assert_eq!(r.exponent, exponent);
                            assert_eq!(&r.level_counts, trace);
                        }
                        _ => panic!("certificate refutes {h} at {prime} but the prime does not"),
                    }
                    // Minimality of the refuting modulus prime^exponent.
                    let pk = (prime as u128).pow(exponent);
                    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                        if let PadicConclusion::NoRoot(r) =
                            has_padic_root(&h, p, coprime, &limits).unwrap()
                        {
                            assert!(
                                (p as u128).pow(r.exponent) >= pk,
                                "{h}: refutation at {p}^{} beats reported {prime}^{exponent}",
                                r.exponent
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn known_certificates_for_named_polynomials() {
    let limits = Limits::default();
    let parse = |s: &str| IntPolynomial::parse(s, &limits).unwrap();

    // x^2 + 1 dies fastest at modulus 3 even though it also dies at 4.
    let cert = certify(&parse("x^2+1"), InputMode::Integers, 100, &limits).unwrap();
    assert_eq!(
        cert.status,
        CertificateStatus::Refuted {
            prime: 3,
            exponent: 1,
            trace: vec![0],
        }
    );

    // x has the root 0 everywhere but no unit root at any prime: the
    // prime-inputs certificate refutes at the smallest modulus, 2.
    let cert = certify(&parse("x"), InputMode::Primes, 100, &limits).unwrap();
    match cert.status {
        CertificateStatus::Refuted { prime: 2, exponent: 1, ref trace } => {
            assert_eq!(trace, &vec![0]);
        }
        other => panic!("expected refutation at 2, got {other:?}"),
    }
    let cert = certify(&parse("x"), InputMode::Integers, 100, &limits).unwrap();
    assert!(matches!(cert.status, CertificateStatus::VerifiedUpTo { .. }));

    // The canonical quintic passes both modes.
    let quintic = gaplab_core::corpus::canonical_quintic();
    for mode in [InputMode::Integers, InputMode::Primes] {
        let cert = certify(&quintic, mode, 100, &limits).unwrap();
        assert!(
            matches!(cert.status, CertificateStatus::VerifiedUpTo { .. }),
            "quintic should certify in {mode} mode"
        );
        assert_eq!(cert.witnesses.len(), 25);
    }

    // x^4 + 1 dies at 4 over the 2-adics, but the scan reports the
    // smallest refuting modulus over all primes, which is 3.
    let cert = certify(&parse("x^4+1"), InputMode::Integers, 100, &limits).unwrap();
    assert_eq!(
        cert.status,
        CertificateStatus::Refuted {
            prime: 3,
            exponent: 1,
            trace: vec![0],
        }
    );

    // (x^2-2)(x^2-3)(x^2-6) has a root modulo every prime (one of 2, 3, 6
    // is always a square), and even modulo 4 (valuations of the factors
    // add up at x = 0 and 2), yet none modulo 8: the smallest refutation
    // is genuinely a prime *power*.
    let product = parse("x^6-11x^4+36x^2-36");
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
        let roots = roots_mod_prime_power(&product, p, 1, &limits).unwrap();
        assert!(!roots.is_empty(), "no root mod {p}");
    }
    let cert = certify(&product, InputMode::Integers, 100, &limits).unwrap();
    assert_eq!(
        cert.status,
        CertificateStatus::Refuted {
            prime: 2,
            exponent: 3,
            trace: vec![2, 2, 0],
        }
    );
}

#[test]
fn detection_positivity_never_contradicts_avoidance() {
    use gaplab_core::fourier::{detection_count, DetectionInstance};
    use gaplab_core::gap::{avoids, AvoidanceVerdict, SymmetricGap};

    let limits = Limits::default();
    let polys = ["x^2", "x^2+1", "x^2-2", "x^3-2", "2x^2+3x+5"];
    let shapes: &[(&[i64], &[i64])] = &[
        (&[7], &[40]),
        (&[11], &[10]),
        (&[12], &[60]),
        (&[4, 9], &[30, 18]),
        (&[10, 23], &[25, 12]),
        (&[3, 8, 25], &[20, 16, 9]),
    ];
    let mut checked = 0;
    for poly_text in polys {
        let h = IntPolynomial::parse(poly_text, &limits).unwrap();
        for &(steps, widths) in shapes {
            for mode in [InputMode::Integers, InputMode::Primes] {
                let gap = SymmetricGap::new(steps.to_vec(), widths.to_vec()).unwrap();
                let verdict = avoids(&gap, &h, mode, &limits).unwrap();
                let inst = match DetectionInstance::new(gap.clone(), h.clone(), mode, &limits) {
                    Ok(inst) => inst,
                    Err(_) => continue,
                };
                let report = match detection_count(&inst, &limits) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                checked += 1;
                if report.positive {
                    // Detection certifies a value inside a sub-progression,
                    // hence inside the progression itself.
                    assert!(
                        matches!(verdict, AvoidanceVerdict::Contains { .. }),
                        "{poly_text} detected in {steps:?}/{widths:?} ({mode}) \
                         but the scan says the progression avoids it"
                    );
                    let w = report.witness.expect("positive reports carry a witness");
                    assert_eq!(
                        num_bigint::BigInt::from(w.value),
                        h.evaluate_i64(w.input),
                        "witness value mismatch"
                    );
                    assert!(gap.contains(w.value));
                    let rebuilt: i64 = w
                        .coefficients
                        .iter()
                        .zip(gap.steps())
                        .map(|(&c, &d)| c * d)
                        .sum();
                    assert_eq!(rebuilt, w.value);
                }
            }
        }
    }
    assert!(checked >= 30, "too few instances fit the detection guards: {checked}");
}
