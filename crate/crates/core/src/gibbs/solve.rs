use serde::Serialize;

use super::{Couplings, EdgeField};
use crate::error::{Error, Result};
use crate::padic::{Norm, PadicNumber, PrimeContext};

/// `a = exp_p(J)`, `b = exp_p(J1)` and the products the boundary equations
/// use.
#[derive(Clone, Debug)]
pub struct BoundaryConstants {
    pub a: PadicNumber,
    pub b: PadicNumber,
    a2: PadicNumber,
    b2: PadicNumber,
    ab_sq: PadicNumber,
}

impl BoundaryConstants {
    pub fn new(couplings: &Couplings) -> Result<Self> {
        let a = couplings.a()?;
        let b = couplings.b()?;
        let a2 = a.square();
        let b2 = b.square();
        let ab_sq = a2.mul(&b2);
        Ok(Self {
            a,
            b,
            a2,
            b2,
            ab_sq,
        })
    }

    fn ctx(&self) -> &PrimeContext {
        self.a.ctx()
    }

    /// `((ab)^2 t + 1) / (a^2 t + b^2)`.
    pub fn ratio(&self, t: &PadicNumber) -> Result<PadicNumber> {
        let num = self.ab_sq.mul(t).add(&PadicNumber::one(self.ctx()))?;
        let den = self.a2.mul(t).add(&self.b2)?;
        Ok(num.div(&den)?)
    }

    /// Right-hand sides of the three equations for the edges below `y`.
    pub fn rhs(&self, children: &[&EdgeField]) -> Result<[PadicNumber; 3]> {
        let ctx = self.ctx();
        let one = PadicNumber::one(ctx);
        let mut out = [one.clone(), one.clone(), one];
        for h in children {
            let u = self.ratio(&h.pp.mul(&h.mp))?;
            let v = self.ratio(&h.mm.mul(&h.pm))?;
            let w_num = self
                .ab_sq
                .mul(&h.pp.mul(&h.mp))
                .add(&PadicNumber::one(ctx))?
                .mul(&h.mp);
            let w_den = self.a2.mul(&h.mm.mul(&h.mp)).add(&self.b2)?.mul(&h.pm);
            let w = w_num.div(&w_den)?;
            out[0] = out[0].mul(&u);
            out[1] = out[1].mul(&v);
            out[2] = out[2].mul(&w);
        }
        Ok(out)
    }

    /// Left-hand sides `h_{++} h_{-+}`, `h_{--} h_{+-}`, `h_{++} h_{+-}`.
    pub fn lhs(parent: &EdgeField) -> [PadicNumber; 3] {
        [
            parent.pp.mul(&parent.mp),
            parent.mm.mul(&parent.pm),
            parent.pp.mul(&parent.pm),
        ]
    }

    /// Largest `|lhs - rhs|_p` over the three equations, and whether all
    /// three agree to `N - g` digits.
    pub fn residual(&self, parent: &EdgeField, children: &[&EdgeField]) -> Result<(Norm, bool)> {
        let l = Self::lhs(parent);
        let r = self.rhs(children)?;
        let digits = self.ctx().tolerance_digits();
        let mut worst = Norm::zero(self.ctx().p());
        let mut ok = true;
        for (x, y) in l.iter().zip(&r) {
            worst = worst.max(x.distance(y));
            ok &= x.eq_to_precision(y, digits);
        }
        Ok((worst, ok))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub field: EdgeField,
    pub iterations: usize,
    pub residual: Norm,
}

/// Translation-invariant solution of the boundary equations on the tree of
/// order `k`, by iterating them from `initial`. The component `h_{+-}` of
/// `initial` fixes the normalization and is kept throughout.
pub fn solve_boundary_equations(
    couplings: &Couplings,
    k: usize,
    initial: &EdgeField,
) -> Result<Solution> {
    let consts = BoundaryConstants::new(couplings)?;
    let ctx = couplings.ctx();
    let digits = ctx.tolerance_digits();
    let budget = 4 * (ctx.precision() + ctx.guard()) as usize;
    let t = initial.pm.clone();
    let mut h = initial.clone();
    for it in 1..=budget {
        let children = vec![&h; k];
        let [u, v, w] = consts.rhs(&children)?;
        let pp = w.div(&t)?;
        let mp = u.div(&pp)?;
        let mm = v.div(&t)?;
        let next = EdgeField::new(mm, mp, t.clone(), pp);
        let stable = next
            .components()
            .iter()
            .zip(h.components())
            .all(|(x, y)| x.eq_to_precision(y, digits));
        h = next;
        if stable {
            let (residual, ok) = consts.residual(&h, &vec![&h; k])?;
            if ok {
                return Ok(Solution {
                    field: h,
                    iterations: it,
                    residual,
                });
            }
        }
    }
    let (residual, _) = consts.residual(&h, &vec![&h; k])?;
    Err(Error::NoConvergence {
        what: format!("boundary equations (residual {residual})"),
        iterations: budget,
    })
}
