use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{PadicError, PadicNumber};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

fn is_qr(a: u64, p: u64) -> bool {
    powmod(a, (p - 1) / 2, p) == 1
}

/// A square root of the quadratic residue `a` modulo the odd prime `p`.
pub fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if !is_qr(a, p) {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| !is_qr(z, p))?;
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

impl PadicNumber {
    /// Whether `x` is a square in `Q_p`: even valuation and a quadratic
    /// residue as leading digit.
    pub fn sqrt_exists(&self) -> Result<bool, PadicError> {
        let v = self.valuation().ok_or(PadicError::ZeroInput)?;
        Ok(v % 2 == 0 && is_qr(self.leading_digit(), self.p()))
    }

    /// The square root whose leading digit lies in `1..=(p-1)/2`.
    pub fn sqrt(&self) -> Result<PadicNumber, PadicError> {
        if !self.sqrt_exists()? {
            return Err(PadicError::NotASquare);
        }
        let ctx = self.ctx();
        let p = ctx.p();
        let v = self.valuation().expect("nonzero");
        let unit = self.unit();
        let modulus = ctx.modulus();
        let r0 = tonelli_shanks(self.leading_digit(), p).ok_or(PadicError::NotASquare)?;
        let two_inv = BigUint::from(2u32).modinv(modulus).expect("p is odd");
        let mut y = BigUint::from(r0);
        let mut correct = 1u32;
        while correct < ctx.precision() {
            correct = (2 * correct).min(ctx.precision());
            let md = ctx.pow_ref(correct);
            let y_inv = y.modinv(md).expect("root is a unit");
            y = (&y + &unit * y_inv) % md * &two_inv % md;
        }
        debug_assert_eq!(&y * &y % modulus, unit);
        if (&y % ctx.p_big()).to_u64().unwrap_or(0) > (p - 1) / 2 {
            y = modulus - y;
        }
        Ok(PadicNumber::from_unit(v / 2, y, ctx))
    }

    /// Both square roots, canonical branch first.
    pub fn sqrt_both(&self) -> Result<(PadicNumber, PadicNumber), PadicError> {
        let r = self.sqrt()?;
        let n = r.neg();
        Ok((r, n))
    }
}
