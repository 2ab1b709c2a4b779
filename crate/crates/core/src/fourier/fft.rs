//! Transform kernels: iterative radix-2 for power-of-two sizes, a chirp
//! (Bluestein) reduction for everything else, and a direct quadratic-path
//! evaluator used as the cross-check oracle.
//!
//! Phase angles are always derived from exactly reduced integer indices
//! (`x·t mod d`, `j² mod 2d`) and evaluated in `f64` before conversion to
//! the working scalar, so phase error does not grow with the argument.

use num_complex::Complex;

use crate::scalar::Real;

fn unit<T: Real>(theta: f64) -> Complex<T> {
    Complex::new(T::from_f64_c(theta.cos()), T::from_f64_c(theta.sin()))
}

/// Compensated complex accumulator (Kahan) with a fixed summation order.
pub(crate) struct ComplexKahan<T: Real> {
    sum: Complex<T>,
    carry: Complex<T>,
}

impl<T: Real> ComplexKahan<T> {
    pub(crate) fn new() -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        ComplexKahan { sum: zero, carry: zero }
    }

    #[inline]
    pub(crate) fn add(&mut self, term: Complex<T>) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> Complex<T> {
        self.sum
    }
}

/// In-place radix-2 transform; `inverse` flips the phase sign only (no
/// `1/n` normalization).
fn fft_pow2<T: Real>(values: &mut [Complex<T>], inverse: bool) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let twiddle: Vec<Complex<T>> = (0..n / 2)
        .map(|k| unit(sign * std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddle[k * stride];
                let u = values[start + k];
                let v = values[start + k + len / 2] * w;
                values[start + k] = u + v;
                values[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Arbitrary-size transform via the chirp identity
/// `2xt = x² + t² - (t - x)²`, reducing to one power-of-two convolution.
fn bluestein<T: Real>(input: &[Complex<T>], inverse: bool) -> Vec<Complex<T>> {
    let d = input.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let two_d = 2 * d as u128;
    let chirp: Vec<Complex<T>> = (0..d)
        .map(|j| {
            let idx = (j as u128 * j as u128) % two_d;
            unit(sign * std::f64::consts::PI * idx as f64 / d as f64)
        })
        .collect();
    let m = (2 * d - 1).next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());
    let mut a = vec![zero; m];
    for i in 0..d {
        a[i] = input[i] * chirp[i];
    }
    let mut b = vec![zero; m];
    for j in 0..d {
        let c = chirp[j].conj();
        b[j] = c;
        if j > 0 {
            b[m - j] = c;
        }
    }
    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for i in 0..m {
        a[i] = a[i] * b[i];
    }
    fft_pow2(&mut a, true);
    let m_inv = T::one() / T::from_u64_c(m as u64);
    (0..d).map(|k| a[k] * chirp[k] * m_inv).collect()
}

pub(crate) fn dft_fast<T: Real>(input: &[Complex<T>], inverse: bool) -> Vec<Complex<T>> {
    let d = input.len();
    if d.is_power_of_two() {
        let mut values = input.to_vec();
        fft_pow2(&mut values, inverse);
        values
    } else {
        bluestein(input, inverse)
    }
}

/// Direct `O(d²)` evaluation with exactly reduced phase indices and
/// compensated summation in ascending `x`; the trust-anchor path.
pub(crate) fn dft_direct<T: Real>(input: &[Complex<T>], inverse: bool) -> Vec<Complex<T>> {
    let d = input.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let table: Vec<Complex<T>> = (0..d)
        .map(|j| unit(sign * std::f64::consts::TAU * j as f64 / d as f64))
        .collect();
    (0..d)
        .map(|t| {
            let mut acc = ComplexKahan::new();
            for (x, value) in input.iter().enumerate() {
                let idx = (x as u128 * t as u128 % d as u128) as usize;
                acc.add(value * table[idx]);
            }
            acc.value()
        })
        .collect()
}
