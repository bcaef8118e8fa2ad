//! Fixed points of `g_{a,b}` and their classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::MapParams;
use crate::padic::{Norm, PadicNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Attracting,
    Indifferent,
    Repelling,
}

/// Outcome of each clause of the fixed-point lemma. `None` means the clause
/// does not apply (no repelling roots, or not in the strict regime).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointIdentities {
    pub i: bool,
    pub ii: Option<bool>,
    pub iii: Option<bool>,
    pub iv: bool,
    pub v: Option<bool>,
    pub vi: Option<bool>,
    pub vii: Option<bool>,
    /// `ord_p(delta + 4) - 2m`, the observed `l`.
    pub vii_l: Option<i64>,
}

impl FixedPointIdentities {
    /// True when every applicable clause holds.
    pub fn all_hold(&self) -> bool {
        self.i
            && self.iv
            && [self.ii, self.iii, self.v, self.vi, self.vii]
                .iter()
                .all(|c| c.unwrap_or(true))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub x0: PadicNumber,
    pub roots: Option<(PadicNumber, PadicNumber)>,
    pub delta: PadicNumber,
    pub classifications: Vec<Classification>,
    pub identities: FixedPointIdentities,
}

impl FixedPointReport {
    pub fn x1(&self) -> Option<&PadicNumber> {
        self.roots.as_ref().map(|r| &r.0)
    }

    pub fn x2(&self) -> Option<&PadicNumber> {
        self.roots.as_ref().map(|r| &r.1)
    }

    /// `x0` followed by the repelling roots when present.
    pub fn points(&self) -> Vec<&PadicNumber> {
        let mut v = vec![&self.x0];
        if let Some((x1, x2)) = &self.roots {
            v.push(x1);
            v.push(x2);
        }
        v
    }
}

fn tolerance(params: &MapParams) -> Norm {
    let ctx = params.ctx();
    Norm::power(ctx.p(), -(ctx.tolerance_digits() as i64))
}

/// The unique fixed point in `E_p`, by iterating the contraction from 1.
pub fn find_x0(params: &MapParams) -> Result<PadicNumber> {
    let ctx = params.ctx();
    let budget = (ctx.precision() + ctx.guard()) as usize;
    let mut u = PadicNumber::one(ctx);
    for _ in 0..=budget {
        let next = params.eval_g(&u)?;
        if next.eq_to_precision(&u, ctx.tolerance_digits()) {
            return Ok(next);
        }
        u = next;
    }
    Err(Error::NoConvergence {
        what: "fixed point iteration from 1".to_string(),
        iterations: budget,
    })
}

/// `(B, C)` with `x^3 - a b^2 x^2 + b^2 x - a = (x - x0)(x^2 + B x + C)`.
pub fn quadratic_coeffs(
    params: &MapParams,
    x0: &PadicNumber,
) -> Result<(PadicNumber, PadicNumber)> {
    let big_b = x0.sub(params.ab2())?;
    let big_c = params.a().div(x0)?;
    // a / x0 = x0^2 - a b^2 x0 + b^2
    let rhs = PadicNumber::sum(
        params.ctx(),
        &[x0.square(), params.ab2().mul(x0).neg(), params.b2().clone()],
    )?;
    if !big_c.eq_to_precision(&rhs, params.ctx().tolerance_digits()) {
        return Err(Error::Consistency(format!(
            "a/x0 differs from x0^2 - ab^2 x0 + b^2 by {}",
            big_c.distance(&rhs)
        )));
    }
    Ok((big_b, big_c))
}

/// `-3 x0^2 + 2 a b^2 x0 - 4 b^2 + a^2 b^4`.
pub fn discriminant(params: &MapParams, x0: &PadicNumber) -> Result<PadicNumber> {
    let terms = [
        x0.square().mul_i64(-3),
        params.ab2().mul(x0).mul_i64(2),
        params.b2().mul_i64(-4),
        params.ab2().square(),
    ];
    Ok(PadicNumber::sum(params.ctx(), &terms)?)
}

/// `x_{1,2} = (a b^2 - x0 +- sqrt(delta)) / 2` when `delta` is a square.
pub fn repelling_roots(
    params: &MapParams,
    x0: &PadicNumber,
    delta: &PadicNumber,
) -> Result<Option<(PadicNumber, PadicNumber)>> {
    let p = params.ctx().p();
    if !delta.sqrt_exists()? {
        if p % 4 == 1 {
            return Err(Error::Consistency(
                "discriminant is not a square although p = 1 mod 4".to_string(),
            ));
        }
        return Ok(None);
    }
    if p % 4 == 3 {
        return Err(Error::Consistency(
            "discriminant is a square although p = 3 mod 4".to_string(),
        ));
    }
    let (s1, s2) = delta.sqrt_both()?;
    let base = params.ab2().sub(x0)?;
    let two = PadicNumber::from_i64(2, params.ctx());
    let x1 = base.add(&s1)?.div(&two)?;
    let x2 = base.add(&s2)?.div(&two)?;
    Ok(Some((x1, x2)))
}

/// `|g(x) - x|_p`.
pub fn residual(params: &MapParams, x: &PadicNumber) -> Result<Norm> {
    Ok(params.eval_g(x)?.distance(x))
}

/// `|x^3 - a b^2 x^2 + b^2 x - a|_p`.
pub fn cubic_residual(params: &MapParams, x: &PadicNumber) -> Norm {
    let terms = [
        x.square().mul(x),
        params.ab2().mul(&x.square()).neg(),
        params.b2().mul(x),
        params.a().neg(),
    ];
    PadicNumber::sum_norm(params.ctx(), &terms)
}

pub fn classify(params: &MapParams, x: &PadicNumber) -> Result<Classification> {
    let res = residual(params, x)?;
    if res > tolerance(params) {
        return Err(Error::NotAFixedPoint { residual: res });
    }
    let d = params.deriv_g_norm(x)?;
    let one = Norm::one(params.ctx().p());
    Ok(match d.cmp(&one) {
        std::cmp::Ordering::Less => Classification::Attracting,
        std::cmp::Ordering::Equal => Classification::Indifferent,
        std::cmp::Ordering::Greater => Classification::Repelling,
    })
}

/// Evaluates every clause as an exact comparison of norms.
pub fn check_fixed_point_identities(
    params: &MapParams,
    x0: &PadicNumber,
    roots: Option<&(PadicNumber, PadicNumber)>,
    delta: &PadicNumber,
) -> FixedPointIdentities {
    let ctx = params.ctx();
    let p = ctx.p();
    let r = params.r();
    let one = PadicNumber::one(ctx);
    let b2 = params.b2();
    let both = |f: &dyn Fn(&PadicNumber) -> bool| roots.map(|(x1, x2)| f(x1) && f(x2));

    let i = x0.distance(params.a()) < r;
    let ii = both(&|x| {
        // b^2 - 1 + (b^2 a - x0) x
        let t = params.ab2().sub(x0).map(|c| c.mul(x));
        match t {
            Ok(t) => PadicNumber::sum_norm(ctx, &[b2.clone(), one.neg(), t]) == r,
            Err(_) => false,
        }
    });
    let sq_plus_b2 = |x: &PadicNumber| x.square().distance(&b2.neg());
    let iii = both(&|x| sq_plus_b2(x) == r);
    let prod = |x: &PadicNumber| {
        let x2 = x.square();
        sq_plus_b2(x).mul(x2.mul(b2).distance(&one.neg()))
    };
    let iv = prod(x0) == Norm::one(p);
    let v = both(&|x| prod(x) <= Norm::power(p, -2));
    let (vi, vii, vii_l) = if params.strict_regime() {
        let vi = x0.distance(&one) < r;
        let shifted = PadicNumber::sum_norm(ctx, &[delta.clone(), PadicNumber::from_i64(4, ctx)]);
        let two_m = 2 * params.m() as i64;
        let l = shifted.exponent().map(|e| -e - two_m);
        let leading_ok = delta.is_unit() && delta.leading_digit() == minus_four_mod(p);
        let vii = leading_ok && l.is_none_or(|l| l >= 0);
        (Some(vi), Some(vii), l)
    } else {
        (None, None, None)
    };
    FixedPointIdentities {
        i,
        ii,
        iii,
        iv,
        v,
        vi,
        vii,
        vii_l,
    }
}

/// `-4 mod p`, the expected leading digit of the discriminant.
pub fn minus_four_mod(p: u64) -> u64 {
    (p - 4 % p) % p
}

/// Fixed points, discriminant, classifications and lemma checks.
pub fn analyze(params: &MapParams) -> Result<FixedPointReport> {
    let x0 = find_x0(params)?;
    quadratic_coeffs(params, &x0)?;
    let delta = discriminant(params, &x0)?;
    let roots = repelling_roots(params, &x0, &delta)?;
    let mut classifications = vec![classify(params, &x0)?];
    if let Some((x1, x2)) = &roots {
        classifications.push(classify(params, x1)?);
        classifications.push(classify(params, x2)?);
    }
    let identities = check_fixed_point_identities(params, &x0, roots.as_ref(), &delta);
    Ok(FixedPointReport {
        x0,
        roots,
        delta,
        classifications,
        identities,
    })
}
