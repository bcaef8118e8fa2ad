use serde::Serialize;

use super::{
    check_compatibility_to, is_h_periodic, orbit_levels, periodic_field_from_orbit, CayleyTree,
    CompatibilityReport, Couplings, Placement, PlacementDiagnostic,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maps::MapParams;
use crate::padic::PadicNumber;
use crate::symbolic::{IsingDynamics, Word};

#[derive(Clone, Debug, Serialize)]
pub struct PlacementOutcome {
    pub placement: Placement,
    pub compatibility: CompatibilityReport,
    pub h_periodic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicGibbsReport {
    /// `None` for the attracting fixed point.
    pub word: Option<Word>,
    pub period: usize,
    /// `h_0, ..., h_{m-1}` with `h_i = g(h_{i+1})`.
    pub orbit: Vec<PadicNumber>,
    pub working_precision: u32,
    pub placements: Vec<PlacementDiagnostic>,
    pub outcomes: Vec<PlacementOutcome>,
}

impl PeriodicGibbsReport {
    pub fn all_compatible(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(|o| o.compatibility.holds)
    }
}

/// Digits lost to cancellation when `sum_omega` runs over `k^n` boundary
/// spins whose weights nearly cancel in pairs, each pair costing
/// `ord_p(b - 1)` digits, with the same again for the partition function.
pub fn compatibility_lift(tree: &CayleyTree, n: usize, m: u32, guard: u32) -> u32 {
    2 * tree.level_size(n) as u32 * m.max(1) + guard
}

/// Periodic orbit of `g_{a,b}` (`a = exp_p(J)`, `b = exp_p(J1)`) coded by
/// `word`, or the fixed point `x0` when `word` is `None`, turned into
/// level-periodic boundary fields and checked for compatibility at depth `n`.
///
/// Everything runs in a lifted context; agreement is required to the
/// `N - g` digits of the caller's context.
pub fn periodic_gibbs(
    tree: &CayleyTree,
    couplings: &Couplings,
    word: Option<&Word>,
    n: usize,
    exec: Exec,
) -> Result<PeriodicGibbsReport> {
    let base = couplings.ctx();
    let [j, j1, _] = couplings.sources();
    let params = MapParams::from_couplings(base, j, j1)?;
    let lift = compatibility_lift(tree, n, params.m(), base.guard());
    let up = couplings.lifted(lift);
    let params_up = MapParams::from_couplings(up.ctx(), j, j1)?;
    let forward = match word {
        None => vec![crate::fixed_points::find_x0(&params_up)?],
        Some(w) => IsingDynamics::new(params_up)?.periodic_point_g(w)?.orbit,
    };
    let orbit = orbit_levels(&forward);
    let scan = periodic_field_from_orbit(tree, &up, &orbit)?;
    let mut outcomes = Vec::new();
    for pf in &scan.valid {
        let field = pf.field(tree, n.max(1));
        let compatibility =
            check_compatibility_to(tree, &up, &field, n, base.tolerance_digits(), exec)?;
        outcomes.push(PlacementOutcome {
            placement: pf.placement,
            compatibility,
            h_periodic: is_h_periodic(tree, &field, pf.period(), n.max(1)),
        });
    }
    if outcomes.is_empty() {
        return Err(Error::NoValidPlacement("no placement survived".to_string()));
    }
    Ok(PeriodicGibbsReport {
        word: word.cloned(),
        period: orbit.len(),
        orbit: orbit.iter().map(|h| h.with_context(base)).collect(),
        working_precision: up.ctx().precision(),
        placements: scan.diagnostics,
        outcomes,
    })
}
