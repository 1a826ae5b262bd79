use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The quadrinomial parameter κ.
///
/// Integer and `a/b` inputs are kept exact so that limit cases such as
/// `κ = N/(N-2)` can be recognized without float comparisons. Decimal input
/// is stored as a float and never matches a limit case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Kappa {
    Exact(Rational64),
    Float(f64),
}

impl Kappa {
    pub fn exact(numer: i64, denom: i64) -> Self {
        Kappa::Exact(Rational64::new(numer, denom))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Kappa::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Kappa::Float(x) => x,
        }
    }

    pub fn as_exact(&self) -> Option<Rational64> {
        match *self {
            Kappa::Exact(r) => Some(r),
            Kappa::Float(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value().is_finite()
    }
}

impl From<f64> for Kappa {
    fn from(x: f64) -> Self {
        Kappa::Float(x)
    }
}

impl From<Rational64> for Kappa {
    fn from(r: Rational64) -> Self {
        Kappa::Exact(r)
    }
}

impl FromStr for Kappa {
    type Err = Error;

    /// Accepts `INT`, `INT/INT`, or a decimal float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse kappa from {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(Error::InvalidArgument("kappa denominator is zero".into()));
            }
            return Ok(Kappa::Exact(Rational64::new(num, den)));
        }
        if let Ok(int) = s.parse::<i64>() {
            return Ok(Kappa::Exact(Rational64::from_integer(int)));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        Ok(Kappa::Float(x))
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Kappa::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Kappa::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl From<Kappa> for String {
    fn from(k: Kappa) -> Self {
        k.to_string()
    }
}

impl TryFrom<String> for Kappa {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
