use std::collections::BTreeMap;
use std::collections::HashMap;

use num_rational::BigRational;
use serde::Serialize;

use super::CayleyTree;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Norm, PadicNumber, PrimeContext};

/// Coupling constants `J`, `J1`, `J0`, each of norm at most `1/p`.
#[derive(Clone, Debug)]
pub struct Couplings {
    ctx: PrimeContext,
    sources: [BigRational; 3],
    values: [PadicNumber; 3],
}

impl Couplings {
    pub fn new(
        ctx: &PrimeContext,
        j: BigRational,
        j1: BigRational,
        j0: BigRational,
    ) -> Result<Self> {
        let values = [&j, &j1, &j0].map(|q| PadicNumber::from_ratio(q, ctx));
        for (name, v) in ["J", "J1", "J0"].iter().zip(&values) {
            if v.valuation().is_some_and(|e| e < 1) {
                return Err(Error::InvalidParams(format!(
                    "coupling {name} = {v} must satisfy |{name}|_p <= 1/p"
                )));
            }
        }
        Ok(Self {
            ctx: ctx.clone(),
            sources: [j, j1, j0],
            values,
        })
    }

    /// The same couplings with `extra` more digits.
    pub fn lifted(&self, extra: u32) -> Self {
        let [j, j1, j0] = self.sources.clone();
        Self::new(&self.ctx.lifted(extra), j, j1, j0).expect("lifting keeps the norms")
    }

    pub fn zero(ctx: &PrimeContext) -> Self {
        let z = BigRational::from_integer(0.into());
        Self::new(ctx, z.clone(), z.clone(), z).expect("zero couplings are valid")
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn j(&self) -> &PadicNumber {
        &self.values[0]
    }

    pub fn j1(&self) -> &PadicNumber {
        &self.values[1]
    }

    pub fn j0(&self) -> &PadicNumber {
        &self.values[2]
    }

    /// Exact rationals `(J, J1, J0)`.
    pub fn sources(&self) -> &[BigRational; 3] {
        &self.sources
    }

    /// `a = exp_p(J)`.
    pub fn a(&self) -> Result<PadicNumber> {
        Ok(self.j().exp()?)
    }

    /// `b = exp_p(J1)`.
    pub fn b(&self) -> Result<PadicNumber> {
        Ok(self.j1().exp()?)
    }
}

/// The four values `h_{xy,--}, h_{xy,-+}, h_{xy,+-}, h_{xy,++}` on one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeField {
    pub mm: PadicNumber,
    pub mp: PadicNumber,
    pub pm: PadicNumber,
    pub pp: PadicNumber,
}

impl EdgeField {
    pub fn new(mm: PadicNumber, mp: PadicNumber, pm: PadicNumber, pp: PadicNumber) -> Self {
        Self { mm, mp, pm, pp }
    }

    pub fn ones(ctx: &PrimeContext) -> Self {
        let one = PadicNumber::one(ctx);
        Self::new(one.clone(), one.clone(), one.clone(), one)
    }

    /// Component for parent spin `s` and child spin `t`.
    pub fn get(&self, s: i8, t: i8) -> &PadicNumber {
        match (s > 0, t > 0) {
            (false, false) => &self.mm,
            (false, true) => &self.mp,
            (true, false) => &self.pm,
            (true, true) => &self.pp,
        }
    }

    pub fn get_mut(&mut self, s: i8, t: i8) -> &mut PadicNumber {
        match (s > 0, t > 0) {
            (false, false) => &mut self.mm,
            (false, true) => &mut self.mp,
            (true, false) => &mut self.pm,
            (true, true) => &mut self.pp,
        }
    }

    /// Components in the order `--, -+, +-, ++`.
    pub fn components(&self) -> [&PadicNumber; 4] {
        [&self.mm, &self.mp, &self.pm, &self.pp]
    }

    pub fn with_context(&self, ctx: &PrimeContext) -> Self {
        Self::new(
            self.mm.with_context(ctx),
            self.mp.with_context(ctx),
            self.pm.with_context(ctx),
            self.pp.with_context(ctx),
        )
    }
}

/// Boundary field keyed by the child vertex of each edge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GibbsField {
    pub edges: BTreeMap<usize, EdgeField>,
}

impl GibbsField {
    /// The same values on every edge of `V_depth`.
    pub fn uniform(tree: &CayleyTree, depth: usize, h: &EdgeField) -> Self {
        Self::from_levels(tree, depth, |_| h.clone())
    }

    /// Every edge into `W_l` gets `level(l)`, for `1 <= l <= depth`.
    pub fn from_levels(
        tree: &CayleyTree,
        depth: usize,
        level: impl Fn(usize) -> EdgeField,
    ) -> Self {
        let mut edges = BTreeMap::new();
        for l in 1..=depth {
            let h = level(l);
            for v in tree.level(l) {
                edges.insert(v, h.clone());
            }
        }
        Self { edges }
    }

    pub fn edge(&self, child: usize) -> Result<&EdgeField> {
        self.edges.get(&child).ok_or_else(|| {
            Error::InvalidParams(format!(
                "field has no value on the edge into vertex {child}"
            ))
        })
    }

    fn check_units(&self) -> Result<()> {
        for (v, h) in &self.edges {
            if h.components().iter().any(|c| c.is_zero()) {
                return Err(Error::InvalidParams(format!(
                    "field vanishes on the edge into {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A spin assignment on `V_n`: bit `v` set means `sigma(v) = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    pub bits: u64,
    pub len: usize,
}

impl Configuration {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 63, "configurations are limited to 63 vertices");
        Self {
            bits: bits & mask(len),
            len,
        }
    }

    pub fn all_plus(len: usize) -> Self {
        Self::new(u64::MAX, len)
    }

    pub fn spin(&self, v: usize) -> i8 {
        if self.bits >> v & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// `sigma v omega`: `self` on `V_{n-1}` followed by `omega` on `W_n`.
    pub fn concat(&self, omega: u64, omega_len: usize) -> Self {
        Self::new(
            self.bits | (omega & mask(omega_len)) << self.len,
            self.len + omega_len,
        )
    }

    pub fn flipped(&self) -> Self {
        Self::new(!self.bits, self.len)
    }

    /// Restriction to the first `len` vertices.
    pub fn restrict(&self, len: usize) -> Self {
        Self::new(self.bits, len)
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Integer coefficients of `J`, `J1`, `J0` in `H_n(sigma)`.
pub fn hamiltonian_coeffs(tree: &CayleyTree, n: usize, sigma: &Configuration) -> (i64, i64, i64) {
    let prod = |x: usize, y: usize| (sigma.spin(x) * sigma.spin(y)) as i64;
    let cj = tree.edges(n).map(|(x, y)| prod(x, y)).sum();
    let cj1 = tree.prolonged_pairs(n).map(|(x, y)| prod(x, y)).sum();
    let cj0 = tree
        .one_level_pairs(n)
        .iter()
        .map(|&(x, y)| prod(x, y))
        .sum();
    (cj, cj1, cj0)
}

/// `H_n(sigma)` over nearest, prolonged and one-level next-nearest pairs.
pub fn hamiltonian(
    tree: &CayleyTree,
    couplings: &Couplings,
    n: usize,
    sigma: &Configuration,
) -> PadicNumber {
    let (a, b, c) = hamiltonian_coeffs(tree, n, sigma);
    combine(couplings, (a, b, c))
}

fn combine(couplings: &Couplings, (a, b, c): (i64, i64, i64)) -> PadicNumber {
    let ctx = couplings.ctx();
    PadicNumber::sum(
        ctx,
        &[
            couplings.j().mul_i64(a),
            couplings.j1().mul_i64(b),
            couplings.j0().mul_i64(c),
        ],
    )
    .unwrap_or_else(|_| PadicNumber::zero(ctx))
}

/// Unnormalized weights of `mu_h^(n)` for every configuration on `V_n`.
pub struct Weights {
    pub n: usize,
    pub weights: Vec<PadicNumber>,
    pub partition: PadicNumber,
}

/// Exact enumeration of all `2^|V_n|` weights
/// `exp_p(H_n) prod (h_{xy, sigma(x) sigma(y)})^{sigma(x) sigma(y)}`.
pub fn weights(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    exec: Exec,
) -> Result<Weights> {
    let ctx = couplings.ctx();
    let size = tree.size(n);
    if size > 30 {
        return Err(Error::InvalidParams(format!(
            "|V_n| = {size} is too large for exhaustive enumeration"
        )));
    }
    field.check_units()?;
    let boundary: Vec<(usize, usize)> = if n == 0 {
        Vec::new()
    } else {
        tree.level(n).map(|y| ((y - 1) / tree.k(), y)).collect()
    };
    // h and 1/h for every boundary edge
    let mut factors = Vec::with_capacity(boundary.len());
    for &(x, y) in &boundary {
        let h = field.edge(y)?;
        let inv_mp = h.mp.inv()?;
        let inv_pm = h.pm.inv()?;
        factors.push((x, y, [h.mm.clone(), inv_mp, inv_pm, h.pp.clone()]));
    }
    let count = 1u64 << size;
    let coeffs = exec.map_range(count, |bits| {
        hamiltonian_coeffs(tree, n, &Configuration::new(bits, size))
    });
    let mut distinct: Vec<(i64, i64, i64)> = coeffs.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let exps: Vec<Result<PadicNumber>> = exec.map(&distinct, |&c| Ok(combine(couplings, c).exp()?));
    let mut table = HashMap::with_capacity(distinct.len());
    for (c, e) in distinct.into_iter().zip(exps) {
        table.insert(c, e?);
    }
    let weights = exec.map_range(count, |bits| {
        let sigma = Configuration::new(bits, size);
        let mut w = table[&coeffs[bits as usize]].clone();
        for (x, y, f) in &factors {
            let idx = match (sigma.spin(*x) > 0, sigma.spin(*y) > 0) {
                (false, false) => 0,
                (false, true) => 1,
                (true, false) => 2,
                (true, true) => 3,
            };
            w = w.mul(&f[idx]);
        }
        w
    });
    let partition = PadicNumber::sum(ctx, &weights)?;
    let floor = Norm::power(ctx.p(), -(ctx.tolerance_digits() as i64));
    if partition.is_zero() || partition.norm() < floor {
        return Err(Error::ZeroPartitionFunction);
    }
    Ok(Weights {
        n,
        weights,
        partition,
    })
}

impl Weights {
    pub fn measure(&self, sigma: &Configuration) -> Result<PadicNumber> {
        Ok(self.weights[sigma.bits as usize].div(&self.partition)?)
    }

    /// `sum_sigma mu(sigma)`.
    pub fn total(&self) -> Result<PadicNumber> {
        let ctx = self.partition.ctx();
        let ms: Vec<PadicNumber> = self
            .weights
            .iter()
            .map(|w| w.div(&self.partition))
            .collect::<std::result::Result<_, _>>()?;
        Ok(PadicNumber::sum(ctx, &ms)?)
    }
}

/// Weight of a single configuration on `V_n`.
pub fn measure_weight(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    sigma: &Configuration,
) -> Result<PadicNumber> {
    let mut w = hamiltonian(tree, couplings, n, sigma).exp()?;
    if n > 0 {
        for y in tree.level(n) {
            let x = (y - 1) / tree.k();
            let (s, t) = (sigma.spin(x), sigma.spin(y));
            let h = field.edge(y)?.get(s, t);
            w = if s * t > 0 { w.mul(h) } else { w.div(h)? };
        }
    }
    Ok(w)
}

pub fn partition_fn(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    exec: Exec,
) -> Result<PadicNumber> {
    Ok(weights(tree, couplings, field, n, exec)?.partition)
}

pub fn measure(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    sigma: &Configuration,
    exec: Exec,
) -> Result<PadicNumber> {
    weights(tree, couplings, field, n, exec)?.measure(sigma)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    pub sigma: u64,
    pub residual: Norm,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub n: usize,
    pub holds: bool,
    pub max_residual: Norm,
    pub base_configurations: usize,
    pub boundary_configurations: usize,
    pub residuals: Vec<ResidualEntry>,
}

/// Checks `sum_omega mu^(n)(sigma v omega) = mu^(n-1)(sigma)` for every
/// `sigma` on `V_{n-1}` to `N - g` digits. `field` must cover the edges into
/// `W_{n-1}` and `W_n`.
pub fn check_compatibility(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    exec: Exec,
) -> Result<CompatibilityReport> {
    let digits = couplings.ctx().tolerance_digits();
    check_compatibility_to(tree, couplings, field, n, digits, exec)
}

/// As [`check_compatibility`], requiring agreement to `digits` digits. Used
/// when the computation runs in a lifted context but the claim is about
/// fewer digits.
pub fn check_compatibility_to(
    tree: &CayleyTree,
    couplings: &Couplings,
    field: &GibbsField,
    n: usize,
    digits: u32,
    exec: Exec,
) -> Result<CompatibilityReport> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "compatibility needs n >= 1".to_string(),
        ));
    }
    let ctx = couplings.ctx();
    let fine = weights(tree, couplings, field, n, exec)?;
    let coarse = weights(tree, couplings, field, n - 1, exec)?;
    let base_len = tree.size(n - 1);
    let omega_len = tree.level_size(n);
    let sigmas: Vec<u64> = (0..1u64 << base_len).collect();
    let rows: Vec<Result<(bool, ResidualEntry)>> = exec.map(&sigmas, |&bits| {
        let sigma = Configuration::new(bits, base_len);
        let parts: Vec<&PadicNumber> = (0..1u64 << omega_len)
            .map(|omega| &fine.weights[sigma.concat(omega, omega_len).bits as usize])
            .collect();
        let lhs = PadicNumber::sum(ctx, parts)?.div(&fine.partition)?;
        let rhs = coarse.measure(&sigma)?;
        Ok((
            lhs.eq_to_precision(&rhs, digits),
            ResidualEntry {
                sigma: bits,
                residual: lhs.distance(&rhs),
            },
        ))
    });
    let mut holds = true;
    let mut residuals = Vec::with_capacity(rows.len());
    for row in rows {
        let (ok, entry) = row?;
        holds &= ok;
        residuals.push(entry);
    }
    let max_residual = residuals
        .iter()
        .map(|e| e.residual)
        .max()
        .unwrap_or_else(|| Norm::zero(ctx.p()));
    Ok(CompatibilityReport {
        n,
        holds,
        max_residual,
        base_configurations: sigmas.len(),
        boundary_configurations: 1 << omega_len,
        residuals,
    })
}
