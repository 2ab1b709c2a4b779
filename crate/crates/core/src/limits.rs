use crate::error::{Error, Result};

/// Resource guards for every potentially expensive enumeration.
///
/// Each guard has a fixed default chosen so a pathological request fails in
/// milliseconds instead of hanging. A single multiplicative `scale` in
/// `[0.1, 10]` widens or tightens all of them together.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    scale: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { scale: 1.0 }
    }
}

impl Limits {
    /// A guard set scaled by `scale`, which must lie in `[0.1, 10]`.
    pub fn with_scale(scale: f64) -> Result<Self> {
        if !(0.1..=10.0).contains(&scale) {
            return Err(Error::InvalidInput(format!(
                "guard scale {scale} outside [0.1, 10]"
            )));
        }
        Ok(Limits { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn scaled(&self, base: u64) -> u64 {
        ((base as f64) * self.scale).max(1.0) as u64
    }

    /// Maximum degree accepted by the polynomial parser and constructors.
    pub fn max_degree(&self) -> usize {
        30
    }

    /// Maximum number of coefficient tuples enumerated when listing the
    /// elements of a multidimensional progression.
    pub fn tuple_enumeration(&self) -> u64 {
        self.scaled(100_000_000)
    }

    /// Largest modulus (or base prime) searched by direct residue scans.
    pub fn direct_root_modulus(&self) -> u64 {
        self.scaled(10_000_000)
    }

    /// Largest prime bound accepted by intersectivity certification.
    pub fn certification_prime_bound(&self) -> u64 {
        self.scaled(1_000_000)
    }

    /// Maximum number of live residue branches in a lifting tree.
    pub fn lifting_frontier(&self) -> u64 {
        self.scaled(1_000_000)
    }

    /// Largest sieve limit for prime tables.
    pub fn sieve_limit(&self) -> u64 {
        self.scaled(100_000_000)
    }

    /// Largest number of terms in one exponential sum.
    pub fn sum_terms(&self) -> u64 {
        self.scaled(100_000_000)
    }

    /// Largest modulus accepted by exponential-sum evaluation.
    pub fn sum_modulus(&self) -> u64 {
        self.scaled(1_000_000_000)
    }

    /// Largest modulus for which a full table of d-th roots of unity is
    /// precomputed (larger moduli fall back to per-term trigonometry).
    pub fn phase_table_modulus(&self) -> u64 {
        1 << 20
    }

    /// Largest range for divisor-function sieves.
    pub fn divisor_range(&self) -> u64 {
        self.scaled(10_000_000)
    }

    /// Largest modulus over which a full moment sum (one exponential sum per
    /// residue class) is evaluated.
    pub fn moment_modulus(&self) -> u64 {
        self.scaled(100_000)
    }

    /// Largest final-direction modulus in residue-space detection.
    pub fn detection_modulus(&self) -> u64 {
        self.scaled(1_000_000)
    }

    /// Largest input scan length (the `n` of a detection or prime-sum
    /// instance).
    pub fn detection_inputs(&self) -> u64 {
        self.scaled(10_000_000)
    }

    /// Budget, in accumulated multiply-adds, for exact integer convolution
    /// chains before the float transform path takes over.
    pub fn exact_convolution_work(&self) -> u64 {
        self.scaled(200_000_000)
    }

    /// Ceiling for least-prime scans in arithmetic progressions.
    pub fn least_prime_ceiling(&self) -> u64 {
        self.scaled(100_000_000)
    }

    /// Largest ambient interval for extremal searches.
    pub fn search_ambient(&self) -> i64 {
        self.scaled(1_000_000_000) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_bounds_enforced() {
        assert!(Limits::with_scale(0.05).is_err());
        assert!(Limits::with_scale(10.5).is_err());
        assert!(Limits::with_scale(0.1).is_ok());
        assert!(Limits::with_scale(10.0).is_ok());
    }

    #[test]
    fn scaling_moves_guards() {
        let tight = Limits::with_scale(0.1).unwrap();
        let wide = Limits::with_scale(10.0).unwrap();
        let base = Limits::default();
        assert_eq!(tight.tuple_enumeration(), base.tuple_enumeration() / 10);
        assert_eq!(wide.tuple_enumeration(), base.tuple_enumeration() * 10);
        // Degree and phase-table cutoffs are structural, not scaled.
        assert_eq!(tight.max_degree(), wide.max_degree());
        assert_eq!(tight.phase_table_modulus(), wide.phase_table_modulus());
    }
}
