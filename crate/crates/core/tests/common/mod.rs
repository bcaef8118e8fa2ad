#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use padic_ising::padic::{Norm, PadicNumber, PrimeContext};
use padic_ising::MapParams;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `ord_p` of a nonzero integer, by repeated division.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quo, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        n = quo;
        v += 1;
    }
}

/// `ord_p` of a rational; `None` for zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
    }
}

pub fn norm_of(x: &BigRational, p: u64) -> Norm {
    Norm::from_valuation(p, vp(x, p))
}

/// `n mod p^k` for a rational with denominator prime to `p`.
pub fn residue(x: &BigRational, p: u64, k: u32) -> BigInt {
    let m = BigInt::from(p).pow(k);
    let d = x.denom().mod_floor(&m);
    let inv = d.modpow(&(phi(p, k) - BigInt::one()), &m);
    (x.numer() * inv).mod_floor(&m)
}

fn phi(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k - 1) * BigInt::from(p - 1)
}

/// Random rational `p^e * n / d` with `n`, `d` prime to `p`.
pub fn random_rational(rng: &mut ChaCha8Rng, p: u64, emin: i64, emax: i64) -> BigRational {
    let unit = |rng: &mut ChaCha8Rng| loop {
        let n: i64 = rng.gen_range(1..1_000_000);
        if !(n as u64).is_multiple_of(p) {
            return n;
        }
    };
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let e = rng.gen_range(emin..=emax);
    let pe = BigRational::from_integer(BigInt::from(p)).pow(e as i32);
    BigRational::new((sign * unit(rng)).into(), unit(rng).into()) * pe
}

/// Strict-regime parameters `a = 1 + p^(m+1) t`, `b = 1 + p^m s` with
/// `p` not dividing `s`.
pub fn strict_params(rng: &mut ChaCha8Rng, p: u64, m: u32) -> (i64, i64) {
    let pm = (p as i64).pow(m);
    loop {
        let s: i64 = rng.gen_range(-40..40);
        let t: i64 = rng.gen_range(-40..40);
        if s % p as i64 == 0 {
            continue;
        }
        return (1 + pm * p as i64 * t, 1 + pm * s);
    }
}

/// Twenty strict-regime parameter sets at `p`: seventeen with
/// `ord_p(b - 1) = 1` and three with `ord_p(b - 1) = 2`.
pub fn strict_samples(p: u64, seed: u64) -> Vec<MapParams> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PrimeContext::with_prime(p).unwrap();
    (0..20)
        .map(|i| {
            let m = if i < 17 { 1 } else { 2 };
            let (a, b) = strict_params(&mut rng, p, m);
            MapParams::from_i64(&ctx, a, b).unwrap()
        })
        .collect()
}

/// A random element of the open ball of radius `p^radius_exp` around `c`.
pub fn random_in_ball(rng: &mut ChaCha8Rng, c: &PadicNumber, radius_exp: i64) -> PadicNumber {
    let ctx = c.ctx();
    let p = ctx.p();
    let shift = -radius_exp + 1 + rng.gen_range(0..6);
    let digits: Vec<u64> = (0..20).map(|_| rng.gen_range(0..p)).collect();
    let mut digits = digits;
    digits[0] = rng.gen_range(1..p);
    let eps = PadicNumber::from_digits(shift, &digits, ctx).unwrap();
    c.add(&eps).unwrap()
}

/// Clauses (i)-(vii) of the fixed-point lemma that fail for `rep`, each
/// recomputed directly from the points.
pub fn failed_clauses(
    params: &MapParams,
    rep: &padic_ising::fixed_points::FixedPointReport,
) -> Vec<&'static str> {
    let ctx = params.ctx();
    let p = ctx.p();
    let r = params.r();
    let one = PadicNumber::one(ctx);
    let b2 = params.b2();
    let x0 = &rep.x0;
    let mut bad = Vec::new();
    let Some((x1, x2)) = rep.roots.clone() else {
        return vec!["roots"];
    };
    if x0.distance(params.a()) >= r {
        bad.push("i");
    }
    for x in [&x1, &x2] {
        let shift = params.a().mul(b2).sub(x0).unwrap().mul(x);
        let ii = PadicNumber::sum_norm(ctx, &[b2.clone(), one.neg(), shift]);
        if ii != r {
            bad.push("ii");
        }
        let sq = x.square().distance(&b2.neg());
        if sq != r {
            bad.push("iii");
        }
        let other = x.square().mul(b2).distance(&one.neg());
        if sq.mul(other) != sq.powi(2) || sq.powi(2) > Norm::power(p, -2) {
            bad.push("v");
        }
    }
    let s0 = x0.square().distance(&b2.neg());
    let t0 = x0.square().mul(b2).distance(&one.neg());
    if s0.mul(t0) != Norm::one(p) {
        bad.push("iv");
    }
    if x0.distance(&one) >= r {
        bad.push("vi");
    }
    let d4 = rep.delta.distance(&PadicNumber::from_i64(-4, ctx));
    let two_m = 2 * params.m() as i64;
    let deep_enough = d4.exponent().is_none_or(|e| -e >= two_m);
    if !deep_enough || rep.delta.leading_digit() != (p - 4 % p) % p {
        bad.push("vii");
    }
    bad.dedup();
    bad
}
