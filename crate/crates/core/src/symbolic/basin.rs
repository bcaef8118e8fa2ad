use serde::Serialize;

use crate::error::Result;
use crate::maps::MapParams;
use crate::padic::{PadicNumber, PrimeContext};

/// Which component of `K` an iterate visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BallTag {
    /// Closed ball of radius `r` around the canonical square root of -1.
    Alpha1,
    /// Closed ball around the other square root of -1.
    Alpha2,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BasinOutcome {
    /// The iterate with this index was the first outside `K`.
    InBasin { steps: usize },
    /// All iterates up to the budget stayed in `K`; evidence, not proof.
    StaysInK { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasinStatus {
    #[serde(flatten)]
    pub outcome: BasinOutcome,
    pub trail: Vec<BallTag>,
}

/// `K = {x : |x - x0|_p = 1, |x^2 + 1|_p <= |b^2 - 1|_p}`.
pub fn k_membership(params: &MapParams, x0: &PadicNumber, x: &PadicNumber) -> bool {
    let ctx = params.ctx();
    let one = PadicNumber::one(ctx);
    let b2m1 = params.b2().distance(&one);
    x.distance(x0) == crate::padic::Norm::one(ctx.p()) && x.square().distance(&one.neg()) <= b2m1
}

fn square_roots_of_minus_one(ctx: &PrimeContext) -> Option<(PadicNumber, PadicNumber)> {
    PadicNumber::from_i64(-1, ctx).sqrt_both().ok()
}

fn tag(
    params: &MapParams,
    x0: &PadicNumber,
    alphas: Option<&(PadicNumber, PadicNumber)>,
    x: &PadicNumber,
) -> BallTag {
    if !k_membership(params, x0, x) {
        return BallTag::Outside;
    }
    match alphas {
        Some((a1, _)) if x.distance(a1) <= params.r() => BallTag::Alpha1,
        Some(_) => BallTag::Alpha2,
        None => BallTag::Outside,
    }
}

/// Iterates `g` from `x` until an iterate leaves `K` or `max_iter`
/// applications have been made.
///
/// Iterates inside `K` lose `ord_p(b - 1)` digits per step, so long budgets
/// need a lifted context.
pub fn basin_status(
    params: &MapParams,
    x0: &PadicNumber,
    x: &PadicNumber,
    max_iter: usize,
) -> Result<BasinStatus> {
    let alphas = square_roots_of_minus_one(params.ctx());
    let mut trail = Vec::new();
    let mut cur = x.clone();
    for step in 0..=max_iter {
        let t = tag(params, x0, alphas.as_ref(), &cur);
        trail.push(t);
        if t == BallTag::Outside {
            return Ok(BasinStatus {
                outcome: BasinOutcome::InBasin { steps: step },
                trail,
            });
        }
        if step < max_iter {
            cur = params.eval_g(&cur)?;
        }
    }
    Ok(BasinStatus {
        outcome: BasinOutcome::StaysInK { budget: max_iter },
        trail,
    })
}

/// Number of applications of `g` until the iterate agrees with `x0` to
/// `N - g` digits, if that happens within `budget` steps.
pub fn steps_to_attractor(
    params: &MapParams,
    x0: &PadicNumber,
    x: &PadicNumber,
    budget: usize,
) -> Result<Option<usize>> {
    let digits = params.ctx().tolerance_digits();
    let mut cur = x.clone();
    for step in 0..=budget {
        if cur.eq_to_precision(x0, digits) {
            return Ok(Some(step));
        }
        if step < budget {
            cur = params.eval_g(&cur)?;
        }
    }
    Ok(None)
}
