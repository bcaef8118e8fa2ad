use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::PadicError;

pub const DEFAULT_PRECISION: u32 = 64;
pub const DEFAULT_GUARD: u32 = 8;

/// The prime, working precision (significant digits) and guard digits
/// shared by every number of a computation.
///
/// Cloning is cheap; the powers of `p` used by the arithmetic are cached.
#[derive(Clone)]
pub struct PrimeContext {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    precision: u32,
    guard: u32,
    p_big: BigUint,
    // p^0 ..= p^precision
    powers: Vec<BigUint>,
}

impl PrimeContext {
    pub fn new(p: u64, precision: u32, guard: u32) -> Result<Self, PadicError> {
        if p < 3 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(PadicError::InvalidPrime(p));
        }
        if guard < 1 || precision <= guard {
            return Err(PadicError::InvalidPrecision { precision, guard });
        }
        let p_big = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=precision {
            powers.push(acc.clone());
            acc *= &p_big;
        }
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                precision,
                guard,
                p_big,
                powers,
            }),
        })
    }

    /// Context with the default precision (64 digits) and guard (8 digits).
    pub fn with_prime(p: u64) -> Result<Self, PadicError> {
        Self::new(p, DEFAULT_PRECISION, DEFAULT_GUARD)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn guard(&self) -> u32 {
        self.inner.guard
    }

    /// Digits that every residual test is required to match: `N - g`.
    pub fn tolerance_digits(&self) -> u32 {
        self.inner.precision - self.inner.guard
    }

    /// Same prime and guard with `extra` more significant digits.
    pub fn lifted(&self, extra: u32) -> Self {
        Self::new(self.p(), self.precision() + extra, self.guard())
            .expect("lifting a valid context stays valid")
    }

    pub(crate) fn p_big(&self) -> &BigUint {
        &self.inner.p_big
    }

    /// `p^N`, the modulus of every unit.
    pub(crate) fn modulus(&self) -> &BigUint {
        &self.inner.powers[self.inner.precision as usize]
    }

    /// `p^k` for `k <= N`.
    pub(crate) fn pow_ref(&self, k: u32) -> &BigUint {
        &self.inner.powers[k as usize]
    }

    pub(crate) fn same_field(&self, other: &PrimeContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self == other
    }
}

impl PartialEq for PrimeContext {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p()
            && self.precision() == other.precision()
            && self.guard() == other.guard()
    }
}

impl Eq for PrimeContext {}

impl fmt::Debug for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeContext")
            .field("p", &self.p())
            .field("precision", &self.precision())
            .field("guard", &self.guard())
            .finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
