//! The maps `f_{a,b}`, `g_{a,b}`, `k_{a,b}` and the conjugacy `u -> a u`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{Norm, PadicError, PadicLiteral, PadicNumber, PrimeContext};

/// Exact description of a parameter, kept so it can be re-evaluated at a
/// higher precision.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamSource {
    Value(BigRational),
    /// `exp_p` of a coupling constant.
    Exp(BigRational),
}

impl ParamSource {
    pub fn realize(&self, ctx: &PrimeContext) -> Result<PadicNumber> {
        match self {
            ParamSource::Value(q) => Ok(PadicNumber::from_ratio(q, ctx)),
            ParamSource::Exp(j) => Ok(PadicNumber::from_ratio(j, ctx).exp()?),
        }
    }

    pub fn from_literal(lit: &PadicLiteral, p: u64) -> Result<Self> {
        Ok(ParamSource::Value(lit.to_rational(p)?))
    }
}

/// Parameters `a, b` in `E_p` with `b != 1`.
#[derive(Clone, Debug)]
pub struct MapParams {
    ctx: PrimeContext,
    a_src: ParamSource,
    b_src: ParamSource,
    a: PadicNumber,
    b: PadicNumber,
    b2: PadicNumber,
    ab2: PadicNumber,
    m: u32,
    strict: bool,
}

impl MapParams {
    pub fn new(ctx: &PrimeContext, a_src: ParamSource, b_src: ParamSource) -> Result<Self> {
        let a = a_src.realize(ctx)?;
        let b = b_src.realize(ctx)?;
        if !a.in_ep() || !b.in_ep() {
            return Err(Error::InvalidParams(format!(
                "a and b must satisfy |x - 1|_p < 1 (a = {a}, b = {b})"
            )));
        }
        let one = PadicNumber::one(ctx);
        let bm1 = b.sub(&one).map_err(|_| bad_b())?;
        let m = match bm1.valuation() {
            Some(v) => v as u32,
            None => return Err(bad_b()),
        };
        let am1 = a.distance(&one);
        let strict = am1 < bm1.norm();
        let b2 = b.square();
        let ab2 = a.mul(&b2);
        Ok(Self {
            ctx: ctx.clone(),
            a_src,
            b_src,
            a,
            b,
            b2,
            ab2,
            m,
            strict,
        })
    }

    pub fn from_rationals(ctx: &PrimeContext, a: &BigRational, b: &BigRational) -> Result<Self> {
        Self::new(
            ctx,
            ParamSource::Value(a.clone()),
            ParamSource::Value(b.clone()),
        )
    }

    pub fn from_i64(ctx: &PrimeContext, a: i64, b: i64) -> Result<Self> {
        Self::from_rationals(
            ctx,
            &BigRational::from_integer(a.into()),
            &BigRational::from_integer(b.into()),
        )
    }

    /// `a = exp_p(J)`, `b = exp_p(J1)`.
    pub fn from_couplings(ctx: &PrimeContext, j: &BigRational, j1: &BigRational) -> Result<Self> {
        Self::new(
            ctx,
            ParamSource::Exp(j.clone()),
            ParamSource::Exp(j1.clone()),
        )
    }

    /// The same parameters evaluated with `extra` more digits.
    pub fn lifted(&self, extra: u32) -> Result<Self> {
        Self::new(
            &self.ctx.lifted(extra),
            self.a_src.clone(),
            self.b_src.clone(),
        )
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn a(&self) -> &PadicNumber {
        &self.a
    }

    pub fn b(&self) -> &PadicNumber {
        &self.b
    }

    pub fn b2(&self) -> &PadicNumber {
        &self.b2
    }

    pub fn ab2(&self) -> &PadicNumber {
        &self.ab2
    }

    pub fn sources(&self) -> (&ParamSource, &ParamSource) {
        (&self.a_src, &self.b_src)
    }

    /// `m = ord_p(b - 1)`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `r = |b - 1|_p`.
    pub fn r(&self) -> Norm {
        Norm::power(self.ctx.p(), -(self.m as i64))
    }

    /// `|a - 1|_p < |b - 1|_p`.
    pub fn strict_regime(&self) -> bool {
        self.strict
    }

    fn one(&self) -> PadicNumber {
        PadicNumber::one(&self.ctx)
    }

    /// Smallest norm a denominator may have before it counts as a pole.
    fn pole_floor(&self) -> Norm {
        Norm::power(self.ctx.p(), -(self.ctx.tolerance_digits() as i64))
    }

    fn checked_denominator(
        &self,
        d: std::result::Result<PadicNumber, PadicError>,
        what: &str,
    ) -> Result<PadicNumber> {
        match d {
            Ok(d) if !d.is_zero() && d.norm() >= self.pole_floor() => Ok(d),
            Ok(_) | Err(PadicError::PrecisionExhausted { .. }) => {
                Err(Error::Pole(format!("{what} vanishes at working precision")))
            }
            Err(e) => Err(e.into()),
        }
    }

    /// `((a b u)^2 + 1) / (b^2 + a^2 u^2)`.
    pub fn eval_f(&self, u: &PadicNumber) -> Result<PadicNumber> {
        let au = self.a.mul(u);
        let au2 = au.square();
        let num = self.b2.mul(&au2).add(&self.one())?;
        let den = self.checked_denominator(self.b2.add(&au2), "b^2 + a^2 u^2")?;
        Ok(num.div(&den)?)
    }

    /// `a (b^2 u^2 + 1) / (b^2 + u^2)`.
    pub fn eval_g(&self, u: &PadicNumber) -> Result<PadicNumber> {
        self.eval_h(&u.square())
    }

    /// `a (b^2 y + 1) / (b^2 + y)`, so that `g(u) = h(u^2)` and `k = h^2`.
    pub fn eval_h(&self, y: &PadicNumber) -> Result<PadicNumber> {
        let num = self.b2.mul(y).add(&self.one())?;
        let den = self.checked_denominator(self.b2.add(y), "b^2 + y")?;
        Ok(self.a.mul(&num).div(&den)?)
    }

    /// `(a (b^2 x + 1) / (b^2 + x))^2`.
    pub fn eval_k(&self, x: &PadicNumber) -> Result<PadicNumber> {
        Ok(self.eval_h(x)?.square())
    }

    /// The conjugacy `u -> a u`, with `g(a u) = a f(u)`.
    pub fn conjugate_f_to_g(&self, u: &PadicNumber) -> PadicNumber {
        self.a.mul(u)
    }

    /// `|g'(x)|_p = |2a|_p |x|_p |b^4 - 1|_p / |b^2 + x^2|_p^2`, from the norms
    /// of the factors.
    pub fn deriv_g_norm(&self, x: &PadicNumber) -> Result<Norm> {
        let p = self.ctx.p();
        let den = self.checked_denominator(self.b2.add(&x.square()), "b^2 + x^2")?;
        // |2a| = 1 and |b^4 - 1| = |b - 1| for b in E_p, but take them as computed
        let two_a = self.a.mul_i64(2).norm();
        let b4m1 = self.b2.square().distance(&self.one());
        let num = two_a.mul(x.norm()).mul(b4m1);
        Ok(num.div(den.norm().powi(2)).unwrap_or_else(|| Norm::zero(p)))
    }
}

fn bad_b() -> Error {
    Error::InvalidParams("b = 1 at working precision".to_string())
}
