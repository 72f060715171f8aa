//! Scalars over the real or complex field.
//!
//! Every scalar is stored as a [`Complex64`]; the [`Field`] marker records
//! whether a computation is meant over `R` (imaginary parts stay zero) or
//! over `C`.

use std::fmt;

pub use num_complex::Complex64;

use crate::{Error, Result};

pub type Scalar = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "real" | "R" => Ok(Field::Real),
            "complex" | "C" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

pub fn real(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

/// `|z|`, computed without intermediate overflow.
pub fn modulus(z: Scalar) -> f64 {
    z.re.hypot(z.im)
}

/// Unit-modulus phase of `z`, or zero when `z = 0`.
pub fn phase(z: Scalar) -> Scalar {
    let r = modulus(z);
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / r
    }
}

/// Formats a scalar as `re`, `re+imi` or `re-imi`.
///
/// Real and imaginary parts use the shortest representation that parses
/// back to the same `f64`.
pub fn format_scalar(z: Scalar) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Inverse of [`format_scalar`]; also accepts a bare imaginary part `bi`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad scalar `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(real).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            let im = body[k..].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        }
        None => {
            let im = body.parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(0.0, im))
        }
    }
}
