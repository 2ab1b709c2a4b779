//! Exact and floating-point toolkit for symmetric generalized arithmetic
//! progressions and polynomial values: residue-root certification,
//! discrete Fourier analysis on `Z_d`, exponential-sum bounds, prime log
//! sums, and extremal searches.
//!
//! Exact subsystems (polynomials, residue trees, enumeration, integer
//! convolution) run on arbitrary-precision or checked machine integers.
//! Transform and phase-summation kernels are generic over a floating
//! scalar; `f64` aliases are exported at the crate root.

pub mod corpus;
pub mod error;
pub mod experiments;
pub mod expsum;
pub mod fourier;
pub mod gap;
pub mod intersective;
pub mod limits;
pub mod poly;
pub mod primes;
pub mod scalar;

pub use error::{Error, Result};
pub use limits::Limits;
pub use poly::IntPolynomial;
pub use scalar::Real;

/// Default-precision function on `Z_d`.
pub type Zd = fourier::ZdFunction<f64>;

use serde::{Deserialize, Serialize};

/// Which inputs feed the polynomial: all integers, or primes only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputMode {
    Integers,
    Primes,
}

impl std::fmt::Display for InputMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputMode::Integers => write!(f, "integers"),
            InputMode::Primes => write!(f, "primes"),
        }
    }
}

impl std::str::FromStr for InputMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integers" => Ok(InputMode::Integers),
            "primes" => Ok(InputMode::Primes),
            other => Err(Error::InvalidInput(format!(
                "input mode must be integers or primes, got {other}"
            ))),
        }
    }
}
