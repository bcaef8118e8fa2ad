//! The repeller of `k_{a,b}`, its coding by words over `{1, 2}`, periodic
//! points and the basin of the attracting fixed point.

mod basin;
mod word;

pub use basin::{
    basin_status, k_membership, steps_to_attractor, BallTag, BasinOutcome, BasinStatus,
};
pub use word::Word;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fixed_points::{analyze, FixedPointReport};
use crate::maps::MapParams;
use crate::padic::{Ball, Norm, PadicError, PadicNumber};

/// Balls and exponents describing the repeller.
#[derive(Clone, Debug, Serialize)]
pub struct RepellerGeometry {
    /// Square roots of -1, canonical branch first.
    pub alpha1: PadicNumber,
    pub alpha2: PadicNumber,
    pub x1: PadicNumber,
    pub x2: PadicNumber,
    pub x1sq: PadicNumber,
    pub x2sq: PadicNumber,
    pub r: Norm,
    /// `m = ord_p(b - 1)`.
    pub m: u32,
    /// `k` multiplies distances inside each ball by `p^expansion_exponent`.
    pub expansion_exponent: u32,
    /// `-log_p |x1^2 - x2^2|_p`.
    pub kappa: i64,
}

/// A synthesized periodic point of `k` together with its certificate.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicPoint {
    pub word: Word,
    pub point: PadicNumber,
    /// `|k^m(x) - x|_p`, measured before truncation to the working context.
    pub residual: Norm,
}

/// A periodic point of `g` obtained as a square root of a periodic point
/// of `k`.
#[derive(Clone, Debug, Serialize)]
pub struct GPeriodicPoint {
    pub word: Word,
    pub point: PadicNumber,
    pub residual: Norm,
    /// Whether the point lies in `B_r(x_{w_1})` (otherwise in `B_r(-x_{w_1})`).
    pub in_first_ball: bool,
    /// The orbit `s, g(s), ..., g^{m-1}(s)`.
    pub orbit: Vec<PadicNumber>,
}

/// `g_{a,b}` with three fixed points in the strict regime, together with
/// the repeller geometry of `k_{a,b}`.
#[derive(Clone, Debug)]
pub struct IsingDynamics {
    params: MapParams,
    report: FixedPointReport,
    geom: RepellerGeometry,
}

impl IsingDynamics {
    /// Requires `p = 1 mod 4` and `|a - 1|_p < |b - 1|_p`.
    pub fn new(params: MapParams) -> Result<Self> {
        if !params.strict_regime() {
            return Err(Error::InvalidParams(
                "repeller coding needs |a - 1|_p < |b - 1|_p".to_string(),
            ));
        }
        let report = analyze(&params)?;
        let Some((x1, x2)) = report.roots.clone() else {
            return Err(Error::InvalidParams(
                "repeller coding needs p = 1 mod 4".to_string(),
            ));
        };
        let ctx = params.ctx();
        let (alpha1, alpha2) = PadicNumber::from_i64(-1, ctx).sqrt_both()?;
        let x1sq = x1.square();
        let x2sq = x2.square();
        let kappa = -x1sq
            .distance(&x2sq)
            .exponent()
            .ok_or_else(|| Error::Consistency("x1^2 = x2^2".to_string()))?;
        let m = params.m();
        let geom = RepellerGeometry {
            alpha1,
            alpha2,
            x1,
            x2,
            x1sq,
            x2sq,
            r: params.r(),
            m,
            expansion_exponent: m,
            kappa,
        };
        Ok(Self {
            params,
            report,
            geom,
        })
    }

    /// The same system rebuilt with `extra` more digits.
    pub fn lifted(&self, extra: u32) -> Result<Self> {
        Self::new(self.params.lifted(extra)?)
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn report(&self) -> &FixedPointReport {
        &self.report
    }

    pub fn geometry(&self) -> &RepellerGeometry {
        &self.geom
    }

    pub fn x0(&self) -> &PadicNumber {
        &self.report.x0
    }

    fn m_i64(&self) -> i64 {
        self.geom.m as i64
    }

    fn tolerance(&self) -> Norm {
        let ctx = self.params.ctx();
        Norm::power(ctx.p(), -(ctx.tolerance_digits() as i64))
    }

    /// `B_r(x_j^2)`.
    pub fn k_ball(&self, j: u8) -> Ball {
        let c = if j == 1 {
            &self.geom.x1sq
        } else {
            &self.geom.x2sq
        };
        Ball::new(c.clone(), -self.m_i64())
    }

    /// `B_r(x_j)`.
    pub fn g_ball(&self, j: u8) -> Ball {
        let c = if j == 1 { &self.geom.x1 } else { &self.geom.x2 };
        Ball::new(c.clone(), -self.m_i64())
    }

    /// `1` or `2` for the ball of `X` containing `x`.
    pub fn symbol_of(&self, x: &PadicNumber) -> Option<u8> {
        if self.k_ball(1).contains(x) {
            Some(1)
        } else if self.k_ball(2).contains(x) {
            Some(2)
        } else {
            None
        }
    }

    /// The preimage of `x` under `k` lying in `B_r(x_j^2)`:
    /// `(a - b^2 s) / (s - a b^2)` for the square root `s` of `x` that lands
    /// there.
    pub fn inverse_branch(&self, j: u8, x: &PadicNumber) -> Result<PadicNumber> {
        if self.symbol_of(x).is_none() {
            return Err(Error::Padic(PadicError::DomainError(
                "inverse branches are defined on B_r(x1^2) and B_r(x2^2)".to_string(),
            )));
        }
        let target = self.k_ball(j);
        let (s1, s2) = x.sqrt_both()?;
        let a = self.params.a();
        let b2 = self.params.b2();
        let ab2 = self.params.ab2();
        for s in [s1, s2] {
            let num = a.sub(&b2.mul(&s))?;
            let den = s.sub(ab2)?;
            if den.is_zero() {
                continue;
            }
            let y = num.div(&den)?;
            if target.contains(&y) {
                return Ok(y);
            }
        }
        Err(Error::Branch(format!("inverse branch {j}")))
    }

    /// `k_{w_1}^{-1} o ... o k_{w_n}^{-1}` applied to `x`.
    pub fn inverse_composition(&self, w: &[u8], x: &PadicNumber) -> Result<PadicNumber> {
        let mut z = x.clone();
        for &j in w.iter().rev() {
            z = self.inverse_branch(j, &z)?;
        }
        Ok(z)
    }

    /// Fixed point of the inverse composition of `w` in the current context,
    /// without forward verification.
    fn raw_periodic_point(&self, w: &Word) -> Result<PadicNumber> {
        let first = w
            .first()
            .ok_or_else(|| Error::InvalidParams("empty word".to_string()))?;
        let ctx = self.params.ctx();
        let per_pass = self.geom.m as usize * w.len();
        let passes = (ctx.precision() as usize).div_ceil(per_pass) + 1;
        let mut z = self.k_ball(first).center;
        for pass in 0..passes + 8 {
            let next = self.inverse_composition(w.symbols(), &z)?;
            let settled = pass + 1 >= passes && next.distance(&z) <= self.tolerance();
            z = next;
            if settled {
                return Ok(z);
            }
        }
        Err(Error::NoConvergence {
            what: format!("inverse composition for word {w}"),
            iterations: passes + 8,
        })
    }

    /// `|k^n(x) - x|_p`.
    pub fn k_residual(&self, x: &PadicNumber, n: usize) -> Result<Norm> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.params.eval_k(&y)?;
        }
        Ok(y.distance(x))
    }

    /// Digits to add so that `steps` forward steps of `k` or `g` near the
    /// repeller keep `N` digits.
    pub fn lift_for(&self, steps: usize) -> u32 {
        self.geom.m * steps as u32 + self.params.ctx().guard()
    }

    /// The periodic point of `k` coded by `w`, synthesized and checked in a
    /// lifted context (`k^m(x) = x` and itinerary `w`), then truncated.
    pub fn periodic_point_k(&self, w: &Word) -> Result<PeriodicPoint> {
        let up = self.lifted(self.lift_for(w.len()))?;
        self.periodic_point_k_in(&up, w)
    }

    fn periodic_point_k_in(&self, up: &IsingDynamics, w: &Word) -> Result<PeriodicPoint> {
        let x = up.raw_periodic_point(w)?;
        let residual = up.k_residual(&x, w.len())?;
        if residual > self.tolerance() {
            return Err(Error::Verification(format!(
                "k^{}(x) - x has norm {residual} for word {w}",
                w.len()
            )));
        }
        let code = up.itinerary(&x, w.len())?;
        if &code != w {
            return Err(Error::Verification(format!(
                "periodic point for {w} has itinerary {code}"
            )));
        }
        Ok(PeriodicPoint {
            word: w.clone(),
            point: x.with_context(self.params.ctx()),
            residual,
        })
    }

    /// All `2^len` periodic points of `k` of period dividing `len`, in
    /// lexicographic word order.
    pub fn periodic_census(&self, len: usize, exec: Exec) -> Result<Vec<PeriodicPoint>> {
        let up = self.lifted(self.lift_for(len))?;
        let words = Word::all(len);
        exec.map(&words, |w| self.periodic_point_k_in(&up, w))
            .into_iter()
            .collect()
    }

    /// The periodic point of `g` over the periodic point of `k` coded by `w`:
    /// of the two square roots, the one with `g^m(s) = s`.
    pub fn periodic_point_g(&self, w: &Word) -> Result<GPeriodicPoint> {
        let up = self.lifted(self.lift_for(2 * w.len()))?;
        let g = up.periodic_point_g_in_place(w)?;
        if g.residual > self.tolerance() {
            return Err(Error::Verification(format!(
                "g^{}(s) - s has norm {} for word {w}",
                w.len(),
                g.residual
            )));
        }
        let ctx = self.params.ctx();
        Ok(GPeriodicPoint {
            point: g.point.with_context(ctx),
            orbit: g.orbit.iter().map(|x| x.with_context(ctx)).collect(),
            ..g
        })
    }

    /// Like `periodic_point_g` but computed entirely in this context.
    fn periodic_point_g_in_place(&self, w: &Word) -> Result<GPeriodicPoint> {
        let y = self.raw_periodic_point(w)?;
        let first = w.first().expect("nonempty word");
        let (s1, s2) = y.sqrt_both()?;
        let mut best: Option<GPeriodicPoint> = None;
        for s in [s1, s2] {
            let mut orbit = vec![s.clone()];
            let mut cur = s.clone();
            for _ in 0..w.len() {
                cur = self.params.eval_g(&cur)?;
                orbit.push(cur.clone());
            }
            orbit.pop();
            let residual = cur.distance(&s);
            let cand = GPeriodicPoint {
                word: w.clone(),
                in_first_ball: self.g_ball(first).contains(&s),
                point: s,
                residual,
                orbit,
            };
            if best.as_ref().is_none_or(|b| cand.residual < b.residual) {
                best = Some(cand);
            }
        }
        Ok(best.expect("two candidates"))
    }

    /// Iterates a periodic point of `g` under `g` for `budget` steps at a
    /// precision high enough to keep the orbit exact, and reports its basin
    /// status.
    pub fn certify_g_orbit(&self, w: &Word, budget: usize) -> Result<BasinStatus> {
        let up = self.lifted(self.lift_for(budget + 2 * w.len()))?;
        let g = up.periodic_point_g_in_place(w)?;
        basin_status(up.params(), up.x0(), &g.point, budget)
    }

    /// Symbols of `x, k(x), ..., k^{len-1}(x)`; fails at the first iterate
    /// outside `X`.
    pub fn itinerary(&self, x: &PadicNumber, len: usize) -> Result<Word> {
        let mut out = Vec::with_capacity(len);
        let mut cur = x.clone();
        for step in 0..len {
            let s = self.symbol_of(&cur).ok_or(Error::Escape { step })?;
            out.push(s);
            if step + 1 < len {
                cur = self.params.eval_k(&cur)?;
            }
        }
        Word::new(out)
    }

    /// `p^-(n tau + kappa)` where `n` is the first index where the words
    /// differ; zero for equal words.
    pub fn subshift_metric(&self, u: &Word, v: &Word) -> Result<Norm> {
        let p = self.params.ctx().p();
        if u.len() != v.len() {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        Ok(match u.first_difference(v) {
            None => Norm::zero(p),
            Some(n) => Norm::power(
                p,
                -(n as i64 * self.geom.expansion_exponent as i64 + self.geom.kappa),
            ),
        })
    }

    /// Entry `(i, j)` is 1 when the branch into ball `j` is defined at the
    /// center of ball `i`.
    pub fn incidence_matrix(&self) -> [[u8; 2]; 2] {
        let mut a = [[0u8; 2]; 2];
        for i in 1..=2u8 {
            let center = self.k_ball(i).center;
            for j in 1..=2u8 {
                let ok = self
                    .inverse_branch(j, &center)
                    .map(|y| self.k_ball(j).contains(&y))
                    .unwrap_or(false);
                a[i as usize - 1][j as usize - 1] = ok as u8;
            }
        }
        a
    }

    /// The `2^depth` cylinder balls: for `w`, the image of `B_r(x_{w_d}^2)`
    /// under `k_{w_1}^{-1} o ... o k_{w_{d-1}}^{-1}`.
    pub fn julia_cylinders(&self, depth: usize, exec: Exec) -> Result<Vec<(Word, Ball)>> {
        if depth == 0 {
            return Err(Error::InvalidParams("depth must be at least 1".to_string()));
        }
        let words = Word::all(depth);
        let radius_exp =
            -(self.geom.m as i64) - (depth as i64 - 1) * self.geom.expansion_exponent as i64;
        exec.map(&words, |w| {
            let s = w.symbols();
            let last = s[depth - 1];
            let center = self.inverse_composition(&s[..depth - 1], &self.k_ball(last).center)?;
            Ok((w.clone(), Ball::new(center, radius_exp)))
        })
        .into_iter()
        .collect()
    }
}

/// `trace(A^n)` for a 2x2 matrix.
pub fn trace_power(a: [[u8; 2]; 2], n: u32) -> u64 {
    let mut acc = [[1u64, 0], [0, 1]];
    let a64 = a.map(|row| row.map(u64::from));
    for _ in 0..n {
        let mut next = [[0u64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = (0..2).map(|k| acc[i][k] * a64[k][j]).sum();
            }
        }
        acc = next;
    }
    acc[0][0] + acc[1][1]
}
