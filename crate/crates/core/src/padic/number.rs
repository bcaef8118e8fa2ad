use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Norm, PadicError, PrimeContext};

/// A p-adic number `p^v (x_0 + x_1 p + ... + x_{N-1} p^{N-1})` carried to
/// `N` significant digits.
///
/// The unit part is kept as an integer in `[1, p^N)` not divisible by `p`, so
/// multiplication and division are exact on valuations and the norm is
/// always exact.
#[derive(Clone)]
pub struct PadicNumber {
    ctx: PrimeContext,
    sig: Option<Significand>,
}

#[derive(Clone, PartialEq, Eq)]
struct Significand {
    valuation: i64,
    unit: BigUint,
}

impl PadicNumber {
    pub fn zero(ctx: &PrimeContext) -> Self {
        Self {
            ctx: ctx.clone(),
            sig: None,
        }
    }

    pub fn one(ctx: &PrimeContext) -> Self {
        Self::from_i64(1, ctx)
    }

    pub fn from_i64(n: i64, ctx: &PrimeContext) -> Self {
        Self::from_bigint(&BigInt::from(n), ctx)
    }

    pub fn from_bigint(n: &BigInt, ctx: &PrimeContext) -> Self {
        Self::from_ratio_parts(n, &BigInt::one(), ctx).expect("denominator is one")
    }

    /// `p^k`.
    pub fn p_power(k: i64, ctx: &PrimeContext) -> Self {
        Self::from_unit(k, BigUint::one(), ctx)
    }

    /// The canonical expansion of `m / n`.
    pub fn from_rational(m: i64, n: i64, ctx: &PrimeContext) -> Result<Self, PadicError> {
        Self::from_ratio_parts(&BigInt::from(m), &BigInt::from(n), ctx)
    }

    pub fn from_ratio(q: &num_rational::BigRational, ctx: &PrimeContext) -> Self {
        Self::from_ratio_parts(q.numer(), q.denom(), ctx).expect("rational has nonzero denominator")
    }

    pub fn from_ratio_parts(
        m: &BigInt,
        n: &BigInt,
        ctx: &PrimeContext,
    ) -> Result<Self, PadicError> {
        if n.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if m.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let (vm, m_rest) = strip_p(m.magnitude(), ctx.p_big());
        let (vn, n_rest) = strip_p(n.magnitude(), ctx.p_big());
        let modulus = ctx.modulus();
        let n_inv = (&n_rest % modulus)
            .modinv(modulus)
            .expect("p-free integer is invertible mod p^N");
        let mut unit = (&m_rest % modulus) * n_inv % modulus;
        let negative = (m.sign() == Sign::Minus) != (n.sign() == Sign::Minus);
        if negative {
            unit = modulus - unit;
        }
        Ok(Self::from_unit(vm as i64 - vn as i64, unit, ctx))
    }

    /// Builds `p^valuation * (d_0 + d_1 p + ...)`; leading zero digits are
    /// absorbed into the valuation and digits past `N` are dropped.
    pub fn from_digits(
        valuation: i64,
        digits: &[u64],
        ctx: &PrimeContext,
    ) -> Result<Self, PadicError> {
        let p = ctx.p();
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(PadicError::InvalidDigit { digit: d, p });
        }
        let mut acc = BigUint::zero();
        for &d in digits.iter().rev() {
            acc = acc * ctx.p_big() + BigUint::from(d);
        }
        if acc.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let (shift, rest) = strip_p(&acc, ctx.p_big());
        Ok(Self::from_unit(
            valuation + shift as i64,
            rest % ctx.modulus(),
            ctx,
        ))
    }

    /// `p^valuation * unit` with `unit` already coprime to `p`.
    pub(crate) fn from_unit(valuation: i64, unit: BigUint, ctx: &PrimeContext) -> Self {
        let unit = if &unit >= ctx.modulus() {
            unit % ctx.modulus()
        } else {
            unit
        };
        debug_assert!(!(&unit % ctx.p_big()).is_zero());
        Self {
            ctx: ctx.clone(),
            sig: Some(Significand { valuation, unit }),
        }
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn is_zero(&self) -> bool {
        self.sig.is_none()
    }

    /// `ord_p(x)`; `None` encodes `+inf` (the zero element).
    pub fn valuation(&self) -> Option<i64> {
        self.sig.as_ref().map(|s| s.valuation)
    }

    /// The unit integer `x_0 + x_1 p + ...` (zero for the zero element).
    pub fn unit(&self) -> BigUint {
        self.sig
            .as_ref()
            .map(|s| s.unit.clone())
            .unwrap_or_default()
    }

    /// First digit `x_0` of the unit part (zero for zero).
    pub fn leading_digit(&self) -> u64 {
        match &self.sig {
            Some(s) => (&s.unit % self.ctx.p_big()).to_u64().unwrap_or(0),
            None => 0,
        }
    }

    /// All `N` digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let n = self.ctx.precision() as usize;
        let mut out = Vec::with_capacity(n);
        let mut rest = self.unit();
        let p = self.ctx.p_big();
        for _ in 0..n {
            let (q, r) = rest.div_rem(p);
            out.push(r.to_u64().unwrap_or(0));
            rest = q;
        }
        out
    }

    /// Digits with the trailing zeros removed.
    pub fn significant_digits(&self) -> Vec<u64> {
        let mut d = self.digits();
        while d.last() == Some(&0) {
            d.pop();
        }
        d
    }

    pub fn norm(&self) -> Norm {
        Norm::from_valuation(self.p(), self.valuation())
    }

    /// Same value reinterpreted in `ctx` (same prime). Lowering precision
    /// truncates; raising it pads the expansion with zero digits.
    pub fn with_context(&self, ctx: &PrimeContext) -> Self {
        assert_eq!(self.p(), ctx.p(), "context change must keep the prime");
        match &self.sig {
            None => Self::zero(ctx),
            Some(s) => Self::from_unit(s.valuation, s.unit.clone(), ctx),
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), PadicError> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(PadicError::ContextMismatch)
        }
    }

    /// Sum of two numbers. Cancellation that leaves fewer than `g`
    /// significant digits is reported as `PrecisionExhausted`; cancellation of
    /// all `N` digits yields zero.
    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_ctx(other)?;
        Self::sum(&self.ctx, [self, other])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        match &self.sig {
            None => self.clone(),
            Some(s) => Self::from_unit(s.valuation, self.ctx.modulus() - &s.unit, &self.ctx),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.ctx.same_field(&other.ctx));
        match (&self.sig, &other.sig) {
            (Some(a), Some(b)) => Self::from_unit(
                a.valuation + b.valuation,
                (&a.unit * &b.unit) % self.ctx.modulus(),
                &self.ctx,
            ),
            _ => Self::zero(&self.ctx),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_ctx(other)?;
        let inv = other.inv()?;
        Ok(self.mul(&inv))
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        let s = self.sig.as_ref().ok_or(PadicError::DivisionByZero)?;
        let inv = s
            .unit
            .modinv(self.ctx.modulus())
            .expect("unit is invertible mod p^N");
        Ok(Self::from_unit(-s.valuation, inv, &self.ctx))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, PadicError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        match &self.sig {
            None if e == 0 => Ok(Self::one(&self.ctx)),
            None => Ok(self.clone()),
            Some(s) => {
                let unit = s.unit.modpow(&BigUint::from(e as u64), self.ctx.modulus());
                Ok(Self::from_unit(s.valuation * e, unit, &self.ctx))
            }
        }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n, &self.ctx))
    }

    /// Sum of any number of terms, aligned once at the smallest valuation so
    /// the result does not depend on the order of the terms.
    pub fn sum<'a, I>(ctx: &PrimeContext, terms: I) -> Result<Self, PadicError>
    where
        I: IntoIterator<Item = &'a PadicNumber>,
    {
        let aligned = align(ctx, terms)?;
        let Some((vmin, total)) = aligned else {
            return Ok(Self::zero(ctx));
        };
        let n = ctx.precision();
        let total = total % ctx.modulus();
        if total.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let (k, rest) = strip_p(&total, ctx.p_big());
        if n - k < ctx.guard() {
            return Err(PadicError::PrecisionExhausted {
                cancelled: k,
                precision: n,
            });
        }
        Ok(Self::from_unit(vmin + k as i64, rest, ctx))
    }

    /// Norm of `terms` summed at working precision, never failing: a sum that
    /// vanishes in all `N` digits has norm zero.
    pub fn sum_norm<'a, I>(ctx: &PrimeContext, terms: I) -> Norm
    where
        I: IntoIterator<Item = &'a PadicNumber>,
    {
        match align(ctx, terms) {
            Ok(Some((vmin, total))) => {
                let total = total % ctx.modulus();
                if total.is_zero() {
                    Norm::zero(ctx.p())
                } else {
                    let (k, _) = strip_p(&total, ctx.p_big());
                    Norm::power(ctx.p(), -(vmin + k as i64))
                }
            }
            _ => Norm::zero(ctx.p()),
        }
    }

    /// `|self - other|_p` measured at working precision; never fails.
    pub fn distance(&self, other: &Self) -> Norm {
        Self::sum_norm(&self.ctx, [self, &other.neg()])
    }

    /// True iff `|x - y|_p <= p^-(v + d)` where `v` is the smaller valuation
    /// of the two (the common leading valuation).
    pub fn eq_to_precision(&self, other: &Self, digits: u32) -> bool {
        let vmin = match (self.valuation(), other.valuation()) {
            (None, None) => return true,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        let bound = Norm::power(self.p(), -(vmin + digits as i64));
        self.distance(other) <= bound
    }

    /// `|x|_p <= 1`.
    pub fn in_zp(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// `|x|_p = 1`.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// `|x - 1|_p < 1`.
    pub fn in_ep(&self) -> bool {
        self.is_unit() && self.leading_digit() == 1
    }

    /// Exact value of the stored expansion as a rational number.
    pub fn to_rational(&self) -> num_rational::BigRational {
        use num_rational::BigRational;
        match &self.sig {
            None => BigRational::zero(),
            Some(s) => {
                let unit = BigInt::from(s.unit.clone());
                let pk = BigInt::from(self.p()).pow(s.valuation.unsigned_abs() as u32);
                if s.valuation >= 0 {
                    BigRational::from_integer(unit * pk)
                } else {
                    BigRational::new(unit, pk)
                }
            }
        }
    }
}

/// Aligns all nonzero terms at the smallest valuation and sums their units
/// (terms that fall past `N` digits are dropped).
fn align<'a, I>(ctx: &PrimeContext, terms: I) -> Result<Option<(i64, BigUint)>, PadicError>
where
    I: IntoIterator<Item = &'a PadicNumber>,
{
    let terms: Vec<&Significand> = terms
        .into_iter()
        .map(|t| {
            if t.ctx.same_field(ctx) {
                Ok(t.sig.as_ref())
            } else {
                Err(PadicError::ContextMismatch)
            }
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let Some(vmin) = terms.iter().map(|s| s.valuation).min() else {
        return Ok(None);
    };
    let n = ctx.precision() as i64;
    let mut total = BigUint::zero();
    for s in terms {
        let shift = s.valuation - vmin;
        if shift >= n {
            continue;
        }
        if shift == 0 {
            total += &s.unit;
        } else {
            total += &s.unit * ctx.pow_ref(shift as u32);
        }
    }
    Ok(Some((vmin, total)))
}

/// Splits `n` as `p^k * rest` with `p` not dividing `rest` (`n` nonzero).
pub(crate) fn strip_p(n: &BigUint, p: &BigUint) -> (u32, BigUint) {
    let mut k = 0;
    let mut rest = n.clone();
    if rest.is_zero() {
        return (0, rest);
    }
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.sig == other.sig
    }
}

impl Eq for PadicNumber {}

impl fmt::Display for PadicNumber {
    /// Digit literal `v;d0,d1,...` (trailing zero digits omitted), `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            None => write!(f, "0"),
            Some(v) => {
                let digits: Vec<String> = self
                    .significant_digits()
                    .iter()
                    .map(|d| d.to_string())
                    .collect();
                write!(f, "{v};{}", digits.join(","))
            }
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber(p={}, {})", self.p(), self)
    }
}
