use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// An exact value of the p-adic absolute value: either `0` or `p^k`.
///
/// Norms are compared and multiplied exactly through their exponents. The
/// text form is `"0"` or `"p^k"` with the numeric prime, e.g. `"13^-2"`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Norm {
    p: u64,
    exponent: Option<i64>,
}

impl Norm {
    pub fn zero(p: u64) -> Self {
        Self { p, exponent: None }
    }

    pub fn one(p: u64) -> Self {
        Self::power(p, 0)
    }

    /// `p^exponent`.
    pub fn power(p: u64, exponent: i64) -> Self {
        Self {
            p,
            exponent: Some(exponent),
        }
    }

    /// Norm of an element with the given valuation (`None` is zero).
    pub fn from_valuation(p: u64, valuation: Option<i64>) -> Self {
        Self {
            p,
            exponent: valuation.map(|v| -v),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `log_p` of the norm, `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Norm) -> Norm {
        debug_assert_eq!(self.p, other.p);
        match (self.exponent, other.exponent) {
            (Some(a), Some(b)) => Norm::power(self.p, a + b),
            _ => Norm::zero(self.p),
        }
    }

    /// `self / other`; `None` when dividing by zero.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Norm) -> Option<Norm> {
        debug_assert_eq!(self.p, other.p);
        let d = other.exponent?;
        Some(match self.exponent {
            Some(a) => Norm::power(self.p, a - d),
            None => Norm::zero(self.p),
        })
    }

    pub fn powi(self, n: u32) -> Norm {
        match self.exponent {
            Some(a) => Norm::power(self.p, a * n as i64),
            None if n == 0 => Norm::one(self.p),
            None => self,
        }
    }

    /// The norm as an exact rational number.
    pub fn to_rational(&self) -> BigRational {
        match self.exponent {
            None => BigRational::zero(),
            Some(k) => {
                let pk = BigInt::from(self.p).pow(k.unsigned_abs() as u32);
                if k >= 0 {
                    BigRational::from_integer(pk)
                } else {
                    BigRational::new(BigInt::one(), pk)
                }
            }
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.p, other.p);
        match (self.exponent, other.exponent) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            None => write!(f, "0"),
            Some(k) => write!(f, "{}^{}", self.p, k),
        }
    }
}

impl fmt::Debug for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Norm({self})")
    }
}

impl Serialize for Norm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
