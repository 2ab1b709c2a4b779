//! Integer polynomials with exact arbitrary-precision coefficients.
//!
//! This is the shared currency of the toolkit: residue-root enumeration,
//! avoidance scans, exponential-sum phases, and the auxiliary rescaling
//! `h_q(x) = h(r + qx) / q` all consume the same exact representation.
//! Coefficients are stored in ascending order of degree with no trailing
//! zeros; the zero polynomial has an empty coefficient vector.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    /// Ascending coefficients, no trailing zeros. Empty means zero.
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coefficient(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact evaluation by Horner's rule.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_i64(&self, x: i64) -> BigInt {
        self.evaluate(&BigInt::from(x))
    }

    /// Coefficients reduced into `[0, q)`.
    pub fn reduced_mod(&self, q: u64) -> Vec<u64> {
        assert!(q >= 1, "modulus must be positive");
        let qq = BigInt::from(q);
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&qq);
                r.to_u64().expect("residue fits in u64")
            })
            .collect()
    }

    /// `h(x) mod q` for `x` given as a residue in `[0, q)`.
    pub fn evaluate_mod(&self, x: u64, q: u64) -> u64 {
        horner_mod(&self.reduced_mod(q), x % q.max(1), q)
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// `h(-x)`: the caller-side transform for searching negative inputs.
    pub fn reflected(&self) -> IntPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Greatest common divisor of the coefficients (nonnegative; 0 for the
    /// zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading_coefficient().unwrap().is_negative() {
            g = -g;
        }
        let coeffs = self.coeffs.iter().map(|c| c / &g).collect();
        IntPolynomial { coeffs }
    }

    /// Largest squarefree divisor, primitive with positive leading
    /// coefficient. Undefined (error) for the zero polynomial.
    pub fn squarefree_part(&self) -> Result<IntPolynomial> {
        if self.is_zero() {
            return Err(Error::InvalidInput(
                "squarefree part of the zero polynomial is undefined".into(),
            ));
        }
        let hp = self.primitive_part();
        if hp.is_constant() {
            return Ok(IntPolynomial::constant(BigInt::one()));
        }
        let g = poly_gcd(&hp, &hp.derivative());
        hp.exact_div(&g)
    }

    /// Exact division, erroring if `d` does not divide `self` in `Z[x]`.
    pub fn exact_div(&self, d: &IntPolynomial) -> Result<IntPolynomial> {
        if d.is_zero() {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (dn, dd) = (self.degree().unwrap(), d.degree().unwrap());
        if dn < dd {
            return Err(Error::ConsistencyFailure(
                "polynomial division with smaller dividend degree".into(),
            ));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        let lead = d.leading_coefficient().unwrap();
        for k in (0..=dn - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::ConsistencyFailure(
                    "inexact polynomial division".into(),
                ));
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let prod = dc * &q;
                rem[k + i] -= prod;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::ConsistencyFailure(
                "nonzero remainder in exact polynomial division".into(),
            ));
        }
        Ok(Self::from_coeffs(quot))
    }

    /// Resultant of `self` and `other`, by fraction-free elimination on the
    /// Sylvester matrix.
    pub fn resultant(&self, other: &IntPolynomial) -> BigInt {
        let (n, m) = match (self.degree(), other.degree()) {
            (Some(n), Some(m)) => (n, m),
            _ => return BigInt::zero(),
        };
        if n == 0 && m == 0 {
            return BigInt::one();
        }
        if n == 0 {
            return self.coeffs[0].pow(m as u32);
        }
        if m == 0 {
            return other.coeffs[0].pow(n as u32);
        }
        let size = n + m;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..m {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..n {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[m + row][row + j] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// The rescaled auxiliary polynomial `(x -> h(r + q*x) / q)`.
    ///
    /// Requires `q >= 1` and `q | h(r)`; every coefficient of the
    /// composition is checked for exact divisibility.
    pub fn auxiliary(&self, r: i64, q: u64) -> Result<IntPolynomial> {
        if q == 0 {
            return Err(Error::InvalidInput("auxiliary scale q must be positive".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let qb = BigInt::from(q);
        let rb = BigInt::from(r);
        // Composition h(r + q x) by Horner: acc <- acc * (q x + r) + a_j.
        let mut acc: Vec<BigInt> = vec![self.coeffs.last().unwrap().clone()];
        for a in self.coeffs.iter().rev().skip(1) {
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] += c * &qb;
                next[i] += c * &rb;
            }
            next[0] += a;
            acc = next;
        }
        let mut out = Vec::with_capacity(acc.len());
        for (i, c) in acc.iter().enumerate() {
            let (quot, rem) = c.div_rem(&qb);
            if !rem.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "scale {q} does not divide coefficient {i} of the composition \
                     (h(r) = {}; choose r with q | h(r))",
                    self.evaluate_i64(r)
                )));
            }
            out.push(quot);
        }
        Ok(Self::from_coeffs(out))
    }

    /// Parses the ASCII grammar `c`, `x`, `c*x^k`, `cx^k`, `x^k` joined by
    /// `+` and `-`, reporting byte positions on error.
    pub fn parse(text: &str, limits: &Limits) -> Result<IntPolynomial> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
        .parse(limits)
    }

    /// Sum of absolute coefficient values.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Horner evaluation over `Z/q` with pre-reduced coefficients.
pub fn horner_mod(coeffs_mod: &[u64], x: u64, q: u64) -> u64 {
    debug_assert!(q >= 1);
    let qq = q as u128;
    let xx = (x % q) as u128;
    let mut acc: u128 = 0;
    for &c in coeffs_mod.iter().rev() {
        acc = (acc * xx + c as u128) % qq;
    }
    acc as u64
}

/// Primitive polynomial gcd via the primitive pseudo-remainder sequence.
/// The result is primitive with positive leading coefficient.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let mut a = a.primitive_part();
    let mut b = b.primitive_part();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = r.primitive_part();
    }
    a
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero): the remainder of
/// `lc(b)^(deg a - deg b + 1) * a` under division by `b`.
fn pseudo_rem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let da = match a.degree() {
        Some(d) => d,
        None => return IntPolynomial::zero(),
    };
    let db = b.degree().expect("pseudo_rem by zero polynomial");
    if da < db {
        return a.clone();
    }
    let lead = b.leading_coefficient().unwrap().clone();
    let mut rem = a.coeffs.clone();
    for k in (db..=da).rev() {
        let top = rem[k].clone();
        for c in rem.iter_mut().take(k) {
            *c *= &lead;
        }
        rem[k] = BigInt::zero();
        for (i, bc) in b.coeffs.iter().enumerate().take(db) {
            let prod = bc * &top;
            rem[k - db + i] -= prod;
        }
        // Entries above k are already zero; scaling them is a no-op.
    }
    rem.truncate(db);
    IntPolynomial::from_coeffs(rem)
}

/// Fraction-free (Bareiss) determinant of an exact integer matrix.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &pivot - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::PolySyntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).map_or(false, u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(BigInt::from_str(text).expect("digit run parses as an integer"))
    }

    fn exponent(&mut self, limits: &Limits) -> Result<usize> {
        let start = self.pos;
        let value = self.integer()?;
        match value.to_usize() {
            Some(k) if k <= limits.max_degree() => Ok(k),
            Some(k) => Err(Error::DegreeLimit {
                degree: k,
                limit: limits.max_degree(),
            }),
            None => Err(Error::PolySyntax {
                position: start,
                message: "exponent does not fit".into(),
            }),
        }
    }

    /// One term: returns (coefficient, exponent).
    fn term(&mut self, limits: &Limits) -> Result<(BigInt, usize)> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let k = self.power(limits)?;
                Ok((BigInt::one(), k))
            }
            Some(b) if b.is_ascii_digit() => {
                let c = self.integer()?;
                self.skip_ws();
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.skip_ws();
                        if self.peek() != Some(b'x') {
                            return self.err("expected x after *");
                        }
                        self.pos += 1;
                        let k = self.power(limits)?;
                        Ok((c, k))
                    }
                    Some(b'x') => {
                        self.pos += 1;
                        let k = self.power(limits)?;
                        Ok((c, k))
                    }
                    _ => Ok((c, 0)),
                }
            }
            Some(_) => self.err("expected a coefficient or x"),
            None => self.err("unexpected end of input"),
        }
    }

    /// Optional `^k` after an `x`; bare `x` is degree 1.
    fn power(&mut self, limits: &Limits) -> Result<usize> {
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            self.exponent(limits)
        } else {
            Ok(1)
        }
    }

    fn parse(mut self, limits: &Limits) -> Result<IntPolynomial> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (c, k) = self.term(limits)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            if negate {
                coeffs[k] -= c;
            } else {
                coeffs[k] += c;
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                Some(_) => return self.err("expected + or - between terms"),
            }
        }
        Ok(IntPolynomial::from_coeffs(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    /// Canonical form: descending degrees, explicit `*`, unit coefficients
    /// elided on powers of x. Round-trips through `parse`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = BigInt::one();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag == one;
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, &Limits::default())
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut coeffs: Vec<serde_json::Number> = Vec::with_capacity(self.coeffs.len().max(1));
        if self.is_zero() {
            coeffs.push(serde_json::Number::from(0));
        } else {
            for c in &self.coeffs {
                let n: serde_json::Number = c
                    .to_string()
                    .parse()
                    .map_err(|_| serde::ser::Error::custom("coefficient is not a JSON number"))?;
                coeffs.push(n);
            }
        }
        let mut st = serializer.serialize_struct("IntPolynomial", 1)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: Vec<serde_json::Number>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for n in &raw.coeffs {
            let c = BigInt::from_str(&n.to_string()).map_err(|_| {
                D::Error::custom(format!("coefficient {n} is not an integer"))
            })?;
            coeffs.push(c);
        }
        Ok(IntPolynomial::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> IntPolynomial {
        text.parse().unwrap()
    }

    #[test]
    fn parser_accepts_the_documented_forms() {
        assert_eq!(p("7"), IntPolynomial::from_i64_coeffs(&[7]));
        assert_eq!(p("x"), IntPolynomial::from_i64_coeffs(&[0, 1]));
        assert_eq!(p("3*x^2"), IntPolynomial::from_i64_coeffs(&[0, 0, 3]));
        assert_eq!(p("3x^2"), IntPolynomial::from_i64_coeffs(&[0, 0, 3]));
        assert_eq!(p("x^4"), IntPolynomial::from_i64_coeffs(&[0, 0, 0, 0, 1]));
        assert_eq!(
            p("x^2 - 2x + 1"),
            IntPolynomial::from_i64_coeffs(&[1, -2, 1])
        );
        assert_eq!(p("-x + 5"), IntPolynomial::from_i64_coeffs(&[5, -1]));
        assert_eq!(p(" - 3 "), IntPolynomial::from_i64_coeffs(&[-3]));
        // Repeated monomials accumulate.
        assert_eq!(p("x + x"), IntPolynomial::from_i64_coeffs(&[0, 2]));
        assert_eq!(p("x - x"), IntPolynomial::zero());
    }

    #[test]
    fn parser_reports_positions() {
        match IntPolynomial::parse("x^2 + $", &Limits::default()) {
            Err(Error::PolySyntax { position, .. }) => assert_eq!(position, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match IntPolynomial::parse("x^31", &Limits::default()) {
            Err(Error::DegreeLimit { degree: 31, limit: 30 }) => {}
            other => panic!("expected degree error, got {other:?}"),
        }
        assert!(IntPolynomial::parse("", &Limits::default()).is_err());
        assert!(IntPolynomial::parse("x^2 y", &Limits::default()).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "x^5 + x^4 + x^3 - 19*x^2 - 19*x - 19",
            "0",
            "-7",
            "x",
            "-x^3 + 2*x - 1",
            "42*x^30 - 42",
        ] {
            let q = p(text);
            assert_eq!(q.to_string(), text);
            assert_eq!(p(&q.to_string()), q);
        }
    }

    #[test]
    fn evaluation_matches_hand_values() {
        let h = p("x^2 + x + 1");
        assert_eq!(h.evaluate_i64(0), BigInt::from(1));
        assert_eq!(h.evaluate_i64(2), BigInt::from(7));
        assert_eq!(h.evaluate_i64(-3), BigInt::from(7));
        let g = p("x^3 - 19");
        assert_eq!(g.evaluate_i64(3), BigInt::from(8));
        assert_eq!(g.evaluate_i64(-2), BigInt::from(-27));
    }

    #[test]
    fn modular_evaluation_is_consistent() {
        let h = p("x^5 + x^4 + x^3 - 19*x^2 - 19*x - 19");
        for q in [2u64, 3, 5, 7, 97, 1_000_003] {
            let reduced = h.reduced_mod(q);
            for x in 0..q.min(50) {
                let exact = h
                    .evaluate(&BigInt::from(x))
                    .mod_floor(&BigInt::from(q))
                    .to_u64()
                    .unwrap();
                assert_eq!(horner_mod(&reduced, x, q), exact);
            }
        }
    }

    #[test]
    fn derivative_and_reflection() {
        let h = p("x^3 - 19*x + 4");
        assert_eq!(h.derivative(), p("3*x^2 - 19"));
        assert_eq!(h.reflected(), p("-x^3 + 19*x + 4"));
        assert_eq!(IntPolynomial::zero().derivative(), IntPolynomial::zero());
    }

    #[test]
    fn auxiliary_rescaling_known_value() {
        // h = x^2 + x + 1, r = 2, q = 7: h(2 + 7x) = 49x^2 + 35x + 7,
        // so the rescaled polynomial is 7x^2 + 5x + 1.
        let h = p("x^2 + x + 1");
        let hq = h.auxiliary(2, 7).unwrap();
        assert_eq!(hq, p("7*x^2 + 5*x + 1"));
        // q that does not divide h(r) is rejected.
        assert!(h.auxiliary(1, 7).is_err());
    }

    #[test]
    fn auxiliary_leading_coefficient_shape() {
        // The leading coefficient of the rescaled polynomial is q^(l-1)
        // times the original leading coefficient.
        let h = p("2*x^3 - 54");
        let hq = h.auxiliary(3, 6).unwrap(); // h(3) = 0, divisible by 6
        assert_eq!(
            hq.leading_coefficient().unwrap(),
            &BigInt::from(2 * 36)
        );
    }

    #[test]
    fn squarefree_part_known_values() {
        let h = p("x^2 - 2x + 1"); // (x-1)^2
        assert_eq!(h.squarefree_part().unwrap(), p("x - 1"));
        let g = p("x^3 + x^2"); // x^2 (x+1)
        assert_eq!(g.squarefree_part().unwrap(), p("x^2 + x"));
        // Content and sign are stripped.
        let s = p("-4*x^2 - 4");
        assert_eq!(s.squarefree_part().unwrap(), p("x^2 + 1"));
        // Already squarefree inputs come back primitive.
        let f = p("x^5 + x^4 + x^3 - 19*x^2 - 19*x - 19");
        assert_eq!(f.squarefree_part().unwrap(), f);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = &p("x^2 - 1") * &p("x + 2");
        let b = &p("x^2 - 1") * &p("x - 3");
        assert_eq!(poly_gcd(&a, &b), p("x^2 - 1"));
        assert_eq!(poly_gcd(&p("x^2 + 1"), &p("x + 1")), p("1"));
    }

    #[test]
    fn resultant_known_values() {
        // res(x^2 + 1, x + 1) = (-1)^2 + 1 = 2 up to sign conventions;
        // the Sylvester determinant gives exactly 2 here.
        assert_eq!(p("x^2 + 1").resultant(&p("x + 1")), BigInt::from(2));
        // res(x^2 - 2, 2x) = 2^2 * (-2) * ... : direct determinant = -8.
        // Shared roots force zero:
        let a = &p("x - 5") * &p("x + 1");
        let b = &p("x - 5") * &p("x - 2");
        assert_eq!(a.resultant(&b), BigInt::zero());
        // Discriminant-style use: res(x^2+1, 2x) = 4.
        assert_eq!(p("x^2 + 1").resultant(&p("2x")), BigInt::from(4));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let h = p("x^5 + x^4 + x^3 - 19*x^2 - 19*x - 19");
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(
            text,
            "{\"coeffs\":[-19,-19,-19,1,1,1]}"
        );
        let back: IntPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
        // Coefficients beyond u64 survive the round trip digit for digit.
        let big: IntPolynomial = serde_json::from_str(
            "{\"coeffs\":[123456789012345678901234567890, -1]}",
        )
        .unwrap();
        assert_eq!(
            big.coefficient(0).to_string(),
            "123456789012345678901234567890"
        );
        let again: IntPolynomial =
            serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(again, big);
        // Non-integer coefficients are rejected.
        assert!(serde_json::from_str::<IntPolynomial>("{\"coeffs\":[1.5]}").is_err());
    }

    #[test]
    fn zero_serializes_with_one_coefficient() {
        let z = IntPolynomial::zero();
        assert_eq!(serde_json::to_string(&z).unwrap(), "{\"coeffs\":[0]}");
        let back: IntPolynomial = serde_json::from_str("{\"coeffs\":[0]}").unwrap();
        assert!(back.is_zero());
    }
}
