use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// An exponent `p ∈ [1, ∞]`.
///
/// `1` and `∞` are distinguished variants, and an exponent strictly between
/// them carries its conjugate, so conjugation is an exact involution.
#[derive(Debug, Clone, Copy)]
pub enum Exponent {
    One,
    Between { p: f64, q: f64 },
    Infinity,
}

impl PartialEq for Exponent {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl Exponent {
    pub const ONE: Exponent = Exponent::One;
    pub const TWO: Exponent = Exponent::Between { p: 2.0, q: 2.0 };
    pub const INF: Exponent = Exponent::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p == 1.0 {
            Ok(Exponent::One)
        } else if p.is_finite() && p > 1.0 {
            Ok(Exponent::Between {
                p,
                q: p / (p - 1.0),
            })
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    /// Exponent from its reciprocal `1/p ∈ [0, 1]`.
    pub fn from_recip(s: f64) -> Result<Self> {
        if s == 0.0 {
            Ok(Exponent::Infinity)
        } else if s > 0.0 && s <= 1.0 {
            Exponent::new(1.0 / s)
        } else {
            Err(Error::InvalidExponent(1.0 / s))
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Between { p, .. } => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::One => Exponent::Infinity,
            Exponent::Infinity => Exponent::One,
            Exponent::Between { p, q } => Exponent::Between { p: q, q: p },
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Between { p, .. } => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `Some(p)` unless `p = ∞`.
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Infinity => None,
            e => Some(e.value()),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_one(self) -> bool {
        matches!(self, Exponent::One)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => f.write_str("inf"),
            e => write!(f, "{}", e.value()),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => {
                let p = t
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad exponent `{t}`")))?;
                Exponent::new(p)
            }
        }
    }
}
