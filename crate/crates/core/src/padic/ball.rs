use serde::Serialize;

use super::{Norm, PadicNumber};

/// The ball `{x : |x - center|_p < p^radius_exp}`; the closed variant uses
/// `<=`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub center: PadicNumber,
    pub radius_exp: i64,
}

impl Ball {
    pub fn new(center: PadicNumber, radius_exp: i64) -> Self {
        Self { center, radius_exp }
    }

    pub fn radius(&self) -> Norm {
        Norm::power(self.center.p(), self.radius_exp)
    }

    /// Open ball membership.
    pub fn contains(&self, x: &PadicNumber) -> bool {
        self.center.distance(x) < self.radius()
    }

    /// Closed ball membership.
    pub fn contains_closed(&self, x: &PadicNumber) -> bool {
        self.center.distance(x) <= self.radius()
    }

    /// Sphere `|x - center|_p = p^radius_exp`.
    pub fn on_sphere(&self, x: &PadicNumber) -> bool {
        self.center.distance(x) == self.radius()
    }

    /// Ultrametric balls are either nested or disjoint.
    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !self.contains(&other.center) && !other.contains(&self.center)
    }
}
