use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{PadicError, PadicNumber, PrimeContext};

/// Text form of a p-adic input: `"m/n"`, `"m"` or `"v;d0,d1,..."`, the last
/// meaning `p^v (d0 + d1 p + ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadicLiteral {
    Rational(BigRational),
    Digits { valuation: i64, digits: Vec<u64> },
}

impl PadicLiteral {
    /// Exact rational value; digit literals need `p` to be interpreted.
    pub fn to_rational(&self, p: u64) -> Result<BigRational, PadicError> {
        match self {
            PadicLiteral::Rational(q) => Ok(q.clone()),
            PadicLiteral::Digits { valuation, digits } => {
                if let Some(&d) = digits.iter().find(|&&d| d >= p) {
                    return Err(PadicError::InvalidDigit { digit: d, p });
                }
                let pb = BigInt::from(p);
                let mut acc = BigInt::zero();
                for &d in digits.iter().rev() {
                    acc = acc * &pb + BigInt::from(d);
                }
                let scale = pb.pow(valuation.unsigned_abs() as u32);
                Ok(if *valuation >= 0 {
                    BigRational::from_integer(acc * scale)
                } else {
                    BigRational::new(acc, scale)
                })
            }
        }
    }

    pub fn to_padic(&self, ctx: &PrimeContext) -> Result<PadicNumber, PadicError> {
        match self {
            PadicLiteral::Rational(q) => Ok(PadicNumber::from_ratio(q, ctx)),
            PadicLiteral::Digits { valuation, digits } => {
                PadicNumber::from_digits(*valuation, digits, ctx)
            }
        }
    }
}

impl FromStr for PadicLiteral {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || PadicError::Parse(s.to_string());
        if let Some((v, ds)) = s.split_once(';') {
            let valuation: i64 = v.trim().parse().map_err(|_| bad())?;
            let digits = if ds.trim().is_empty() {
                Vec::new()
            } else {
                ds.split(',')
                    .map(|d| d.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            return Ok(PadicLiteral::Digits { valuation, digits });
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        Ok(PadicLiteral::Rational(BigRational::new(num, den)))
    }
}

impl fmt::Display for PadicLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicLiteral::Rational(q) if q.denom().is_positive() && q.is_integer() => {
                write!(f, "{}", q.numer())
            }
            PadicLiteral::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            PadicLiteral::Digits { valuation, digits } => {
                let ds: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                write!(f, "{valuation};{}", ds.join(","))
            }
        }
    }
}
