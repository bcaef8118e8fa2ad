use std::fmt;

use serde::Serialize;

use super::{BoundaryConstants, CayleyTree, Couplings, EdgeField, GibbsField};
use crate::error::{Error, Result};
use crate::padic::{Norm, PadicNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Component {
    MM,
    MP,
    PM,
    PP,
}

/// How a scalar orbit value `h_i` becomes the four-component vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Placement {
    /// `h_i` in one component, the others equal to 1.
    Single(Component),
    /// `h_{++} = h_{--} = (h_i / a)^2`, `h_{-+} = h_{+-} = 1`.
    DiagonalSquare,
}

impl Placement {
    pub const ALL: [Placement; 5] = [
        Placement::Single(Component::MM),
        Placement::Single(Component::MP),
        Placement::Single(Component::PM),
        Placement::Single(Component::PP),
        Placement::DiagonalSquare,
    ];

    pub fn vector(&self, h: &PadicNumber, a: &PadicNumber) -> Result<EdgeField> {
        let mut v = EdgeField::ones(h.ctx());
        match self {
            Placement::Single(c) => {
                let slot = match c {
                    Component::MM => &mut v.mm,
                    Component::MP => &mut v.mp,
                    Component::PM => &mut v.pm,
                    Component::PP => &mut v.pp,
                };
                *slot = h.clone();
            }
            Placement::DiagonalSquare => {
                let t = h.div(a)?.square();
                v.mm = t.clone();
                v.pp = t;
            }
        }
        Ok(v)
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placement::Single(c) => write!(f, "single:{c:?}"),
            Placement::DiagonalSquare => write!(f, "diagonal-square"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlacementDiagnostic {
    pub placement: Placement,
    /// Worst residual of the boundary equations over one period of levels.
    pub residual: Norm,
    pub valid: bool,
}

/// A level-periodic field: edges into `W_l` carry `levels[l mod m]`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicField {
    pub placement: Placement,
    pub levels: Vec<EdgeField>,
}

impl PeriodicField {
    pub fn period(&self) -> usize {
        self.levels.len()
    }

    pub fn field(&self, tree: &CayleyTree, depth: usize) -> GibbsField {
        GibbsField::from_levels(tree, depth, |l| self.levels[l % self.period()].clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlacementScan {
    pub valid: Vec<PeriodicField>,
    pub diagnostics: Vec<PlacementDiagnostic>,
}

/// Builds the candidate fields `h_x = vector(h_{d(x, x^0) mod m})` from an
/// orbit with `h_i = g(h_{i+1})` and keeps the placements for which the
/// boundary equations hold on every level of one period.
pub fn periodic_field_from_orbit(
    tree: &CayleyTree,
    couplings: &Couplings,
    orbit: &[PadicNumber],
) -> Result<PlacementScan> {
    let m = orbit.len();
    if m == 0 {
        return Err(Error::InvalidParams("empty orbit".to_string()));
    }
    let consts = BoundaryConstants::new(couplings)?;
    let mut valid = Vec::new();
    let mut diagnostics = Vec::new();
    for placement in Placement::ALL {
        let levels: Vec<EdgeField> = orbit
            .iter()
            .map(|h| placement.vector(h, &consts.a))
            .collect::<Result<_>>()?;
        let mut worst = Norm::zero(couplings.ctx().p());
        let mut ok = true;
        for l in 1..=m {
            let parent = &levels[l % m];
            let child = &levels[(l + 1) % m];
            match consts.residual(parent, &vec![child; tree.k()]) {
                Ok((r, holds)) => {
                    worst = worst.max(r);
                    ok &= holds;
                }
                Err(_) => {
                    worst = Norm::one(couplings.ctx().p());
                    ok = false;
                }
            }
        }
        diagnostics.push(PlacementDiagnostic {
            placement,
            residual: worst,
            valid: ok,
        });
        if ok {
            valid.push(PeriodicField { placement, levels });
        }
    }
    if valid.is_empty() {
        let diag: Vec<String> = diagnostics
            .iter()
            .map(|d| format!("{} residual {}", d.placement, d.residual))
            .collect();
        return Err(Error::NoValidPlacement(diag.join("; ")));
    }
    Ok(PlacementScan { valid, diagnostics })
}

/// Orbit in the indexing `h_i = g(h_{i+1})` from a forward orbit
/// `s, g(s), ..., g^{m-1}(s)`.
pub fn orbit_levels(forward: &[PadicNumber]) -> Vec<PadicNumber> {
    let m = forward.len();
    (0..m).map(|i| forward[(m - i) % m].clone()).collect()
}

/// `h_{tau_g(x)} = h_x` for every `g` with `d(g, x^0) = 0 mod m` and every
/// edge with both ends inside `V_depth`.
pub fn is_h_periodic(tree: &CayleyTree, field: &GibbsField, m: usize, depth: usize) -> bool {
    for x in 1..tree.size(depth) {
        let dx = tree.depth(x);
        let mut dg = m;
        while dg + dx <= depth {
            for g in tree.level(dg) {
                let gx = tree.compose(g, x);
                if field.edges.get(&gx) != field.edges.get(&x) {
                    return false;
                }
            }
            dg += m;
        }
    }
    true
}
