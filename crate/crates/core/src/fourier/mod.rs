//! Unnormalized discrete Fourier analysis on `Z_d` and the residue-space
//! detection functional built from it.
//!
//! Conventions: `fhat(t) = sum_x f(x) e^(-2 pi i x t / d)` (no
//! normalization), inversion carries the `1/d`, and convolution is the
//! cyclic `f*g(x) = sum_y f(y) g(x - y)` satisfying `(f*g)^ = fhat * ghat`.

mod detection;
pub(crate) mod fft;

pub use detection::{
    detection_count, DetectionInstance, DetectionReport, DetectionWitness,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A complex-valued function on `Z_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZdFunction<T: Real> {
    values: Vec<Complex<T>>,
}

impl<T: Real> ZdFunction<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        Ok(ZdFunction { values })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        Self::new(vec![Complex::new(T::zero(), T::zero()); d.max(0)])
    }

    pub fn from_real(values: Vec<T>) -> Result<Self> {
        Self::new(
            values
                .into_iter()
                .map(|v| Complex::new(v, T::zero()))
                .collect(),
        )
    }

    /// Indicator of a set of residues (values may repeat; repeats add).
    pub fn indicator(d: usize, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut f = Self::zeros(d)?;
        for m in members {
            f.values[(m % d as u64) as usize] += Complex::new(T::one(), T::zero());
        }
        Ok(f)
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    /// Forward transform, `O(d log d)`.
    pub fn dft(&self) -> ZdFunction<T> {
        ZdFunction {
            values: fft::dft_fast(&self.values, false),
        }
    }

    /// Forward transform by direct `O(d^2)` summation with exact phase
    /// indices; the cross-check path.
    pub fn dft_direct(&self) -> ZdFunction<T> {
        ZdFunction {
            values: fft::dft_direct(&self.values, false),
        }
    }

    /// Inverse transform (carries the `1/d`).
    pub fn inverse_dft(&self) -> ZdFunction<T> {
        let d = T::from_u64_c(self.modulus() as u64);
        let mut values = fft::dft_fast(&self.values, true);
        for v in &mut values {
            *v = *v / d;
        }
        ZdFunction { values }
    }

    pub fn inverse_dft_direct(&self) -> ZdFunction<T> {
        let d = T::from_u64_c(self.modulus() as u64);
        let mut values = fft::dft_direct(&self.values, true);
        for v in &mut values {
            *v = *v / d;
        }
        ZdFunction { values }
    }

    /// Cyclic convolution via transforms.
    pub fn convolve(&self, other: &ZdFunction<T>) -> Result<ZdFunction<T>> {
        if self.modulus() != other.modulus() {
            return Err(Error::InvalidInput(format!(
                "convolution needs equal moduli, got {} and {}",
                self.modulus(),
                other.modulus()
            )));
        }
        let fa = self.dft();
        let fb = other.dft();
        let product: Vec<Complex<T>> = fa
            .values
            .iter()
            .zip(&fb.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(ZdFunction { values: product }.inverse_dft())
    }

    /// Cyclic convolution by direct double summation; the cross-check path.
    pub fn convolve_direct(&self, other: &ZdFunction<T>) -> Result<ZdFunction<T>> {
        let d = self.modulus();
        if d != other.modulus() {
            return Err(Error::InvalidInput(format!(
                "convolution needs equal moduli, got {} and {}",
                d,
                other.modulus()
            )));
        }
        let mut out = vec![Complex::new(T::zero(), T::zero()); d];
        for (x, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for y in 0..d {
                let idx = (x + d - y) % d;
                acc += self.values[y] * other.values[idx];
            }
            *slot = acc;
        }
        Ok(ZdFunction { values: out })
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

/// The exact layer coefficient profile
/// `g(x) = #{ |y| <= w : y d = x (mod m) }`.
pub(crate) fn layer_counts(m: u64, step: u64, w: u64) -> Vec<i64> {
    let md = m as usize;
    let mut g = vec![0i64; md];
    let shift = |y: i64| -> usize {
        let v = (y as i128 * step as i128).rem_euclid(m as i128);
        v as usize
    };
    if w < m {
        for y in -(w as i64)..=(w as i64) {
            g[shift(y)] += 1;
        }
    } else {
        // The window covers every residue class of y; count each class
        // arithmetically: #{ y in [-w, w] : y = y0 (mod m) }.
        let (wi, mi) = (w as i64, m as i64);
        for y0 in 0..mi {
            let count = (wi - y0).div_euclid(mi) + (wi + y0).div_euclid(mi) + 1;
            g[shift(y0)] += count;
        }
    }
    g
}

/// The layer pair of a detection instance: the profile from
/// [`layer_counts`] and its autocorrelation `(g*g)(x)`, both exact.
pub(crate) fn layer_profile(m: u64, step: u64, w: u64) -> (Vec<i64>, Vec<i128>) {
    let g = layer_counts(m, step, w);
    let gg = autocorrelation(&g);
    (g, gg)
}

/// Exact cyclic autocorrelation `(g*g)(x) = sum_y g(y) g(x - y)` of an
/// integer profile, by direct summation over the support pairs.
pub(crate) fn autocorrelation(g: &[i64]) -> Vec<i128> {
    let md = g.len();
    let support: Vec<usize> = (0..md).filter(|&x| g[x] != 0).collect();
    let mut gg = vec![0i128; md];
    for &a in &support {
        for &b in &support {
            let idx = (a + b) % md;
            gg[idx] += g[a] as i128 * g[b] as i128;
        }
    }
    gg
}

/// Builds the normalized layer functions `g_i` and `f_i = g_i*g_i / |A_i|`
/// used by detection, where `A_i = { y d_i : |y| <= w_i }` in `Z_m`.
pub fn layer_function<T: Real>(m: u64, step: u64, w: u64) -> Result<(ZdFunction<T>, ZdFunction<T>)> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let (g, gg) = layer_profile(m, step, w);
    let size = T::from_u64_c(2 * w + 1);
    let gf = ZdFunction::from_real(g.iter().map(|&v| T::from_u64_c(v as u64)).collect())?;
    let ff = ZdFunction::from_real(
        gg.iter()
            .map(|&v| T::from_f64_c(v as f64) / size)
            .collect(),
    )?;
    Ok((gf, ff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn dft_of_small_indicator_matches_hand_computation() {
        // Indicator of {0, 2} in Z_4: fhat(t) = 1 + e^(-pi i t) = 2,0,2,0.
        let f = ZdFunction::<f64>::indicator(4, [0u64, 2]).unwrap();
        let fh = f.dft();
        let expected = [2.0, 0.0, 2.0, 0.0];
        for (t, &e) in expected.iter().enumerate() {
            assert!(
                close(fh.values()[t], Complex64::new(e, 0.0), 1e-12),
                "t = {t}: {:?}",
                fh.values()[t]
            );
        }
    }

    #[test]
    fn fast_and_direct_transforms_agree() {
        // Moduli exercising the power-of-two and Bluestein paths.
        for d in [1usize, 2, 3, 4, 5, 12, 16, 17, 31, 64, 97, 120, 128, 243, 1000] {
            let values: Vec<Complex64> = (0..d)
                .map(|x| {
                    let a = (x as f64 * 0.7371).sin();
                    let b = ((x * x % d) as f64 * 0.1231).cos();
                    Complex64::new(a, b)
                })
                .collect();
            let f = ZdFunction::new(values).unwrap();
            let fast = f.dft();
            let direct = f.dft_direct();
            let scale = d as f64 * f.max_abs().max(1.0);
            for t in 0..d {
                assert!(
                    close(fast.values()[t], direct.values()[t], 1e-9 * scale),
                    "d = {d}, t = {t}: fast {:?} direct {:?}",
                    fast.values()[t],
                    direct.values()[t]
                );
            }
        }
    }

    #[test]
    fn inversion_round_trips() {
        for d in [1usize, 2, 5, 8, 21, 50, 127, 256] {
            let values: Vec<Complex64> = (0..d)
                .map(|x| Complex64::new((x as f64).cos(), (2.0 * x as f64).sin()))
                .collect();
            let f = ZdFunction::new(values).unwrap();
            let back = f.dft().inverse_dft();
            let tol = 1e-9 * d as f64 * f.max_abs().max(1.0);
            for t in 0..d {
                assert!(close(back.values()[t], f.values()[t], tol));
            }
        }
    }

    #[test]
    fn parseval_orthogonality() {
        // sum_t |fhat(t)|^2 = d * sum_x |f(x)|^2.
        for d in [3usize, 16, 25, 100] {
            let values: Vec<Complex64> = (0..d)
                .map(|x| Complex64::new((x as f64 * 1.1).sin(), 0.25 * x as f64))
                .collect();
            let f = ZdFunction::new(values).unwrap();
            let lhs: f64 = f.dft().values().iter().map(|v| v.norm_sqr()).sum();
            let rhs: f64 = d as f64 * f.values().iter().map(|v| v.norm_sqr()).sum::<f64>();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "d = {d}");
        }
    }

    #[test]
    fn convolution_theorem_holds() {
        for d in [4usize, 9, 30, 64] {
            let f = ZdFunction::<f64>::indicator(d, (0..d as u64 / 2).map(|x| x * 2)).unwrap();
            let g = ZdFunction::<f64>::indicator(d, [1u64, 2, 3]).unwrap();
            let via_fft = f.convolve(&g).unwrap();
            let direct = f.convolve_direct(&g).unwrap();
            for t in 0..d {
                assert!(
                    close(via_fft.values()[t], direct.values()[t], 1e-9 * d as f64),
                    "d = {d}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn layer_functions_have_the_expected_transform_range() {
        // fhat_i is real with 0 <= fhat_i(t) <= fhat_i(0) = |A_i|.
        for (m, step, w) in [(12u64, 3u64, 2u64), (17, 5, 3), (32, 8, 4), (10, 2, 7)] {
            let (_, f) = layer_function::<f64>(m, step, w).unwrap();
            let fh = f.dft();
            let size = (2 * w + 1) as f64;
            let at_zero = fh.values()[0];
            assert!((at_zero.re - size).abs() < 1e-9 && at_zero.im.abs() < 1e-12);
            for t in 0..m as usize {
                let v = fh.values()[t];
                assert!(v.im.abs() < 1e-9, "imaginary part at t = {t}");
                assert!(v.re >= -1e-9 && v.re <= size + 1e-9, "range at t = {t}");
            }
        }
    }

    #[test]
    fn layer_profile_counts_are_exact() {
        let (g, gg) = layer_profile(12, 3, 2);
        // y in [-2,2], y*3 mod 12: residues 6, 9, 0, 3, 6 -> counts.
        assert_eq!(g[0], 1);
        assert_eq!(g[3], 1);
        assert_eq!(g[6], 2);
        assert_eq!(g[9], 1);
        assert_eq!(g.iter().sum::<i64>(), 5);
        assert_eq!(gg.iter().sum::<i128>(), 25);
        // Autocorrelation at 0: pairs summing to 0 mod 12.
        let brute: i128 = (0..12)
            .map(|a| g[a] as i128 * g[(12 - a) % 12] as i128)
            .sum();
        assert_eq!(gg[0], brute);
    }

    #[test]
    fn wide_windows_count_classes_arithmetically() {
        // w >= m exercises the closed-form class counting; compare with a
        // brute loop over the window.
        for (m, step, w) in [(5u64, 2u64, 12u64), (6, 4, 6), (7, 7, 30), (9, 3, 100)] {
            let (g, _) = layer_profile(m, step, w);
            let mut brute = vec![0i64; m as usize];
            for y in -(w as i64)..=(w as i64) {
                let idx = (y as i128 * step as i128).rem_euclid(m as i128) as usize;
                brute[idx] += 1;
            }
            assert_eq!(g, brute, "m = {m}, step = {step}, w = {w}");
        }
    }
}
