mod common;

use std::collections::BTreeSet;

use common::q;
use padic_ising::error::Error;
use padic_ising::gibbs::{
    check_compatibility, hamiltonian_coeffs, is_h_periodic, measure_weight,
    periodic_field_from_orbit, periodic_gibbs, solve_boundary_equations, weights, CayleyTree,
    Configuration, Couplings, EdgeField, GibbsField, Placement,
};
use padic_ising::padic::{Norm, PadicNumber, PrimeContext};
use padic_ising::{fixed_points, Exec, MapParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vertices of `V_n` as coordinate sequences, level by level, each level
/// in lexicographic order.
fn vertices(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut level = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &level {
            for i in 1..=k {
                let mut w: Vec<usize> = v.clone();
                w.push(i);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn dist(x: &[usize], y: &[usize]) -> usize {
    let common = x.iter().zip(y).take_while(|(a, b)| a == b).count();
    x.len() + y.len() - 2 * common
}

struct Pairs {
    nearest: BTreeSet<(usize, usize)>,
    prolonged: BTreeSet<(usize, usize)>,
    one_level: BTreeSet<(usize, usize)>,
}

fn pairs(k: usize, n: usize) -> Pairs {
    let vs = vertices(k, n);
    let mut p = Pairs {
        nearest: BTreeSet::new(),
        prolonged: BTreeSet::new(),
        one_level: BTreeSet::new(),
    };
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            match dist(&vs[i], &vs[j]) {
                1 => {
                    p.nearest.insert((i, j));
                }
                2 if vs[i].len() != vs[j].len() => {
                    p.prolonged.insert((i, j));
                }
                2 => {
                    p.one_level.insert((i, j));
                }
                _ => {}
            }
        }
    }
    p
}

fn couplings(p: u64, j: (i64, i64), j1: (i64, i64), j0: (i64, i64)) -> Couplings {
    let ctx = PrimeContext::with_prime(p).unwrap();
    Couplings::new(&ctx, q(j.0, j.1), q(j1.0, j1.1), q(j0.0, j0.1)).unwrap()
}

fn spin(bits: u64, v: usize) -> i64 {
    if bits >> v & 1 == 1 {
        1
    } else {
        -1
    }
}

/// `exp_p(H_n(sigma)) prod h^{sigma sigma}` straight from the definitions.
fn oracle_weight(
    c: &Couplings,
    k: usize,
    n: usize,
    field: &[(usize, usize, EdgeField)],
    bits: u64,
) -> PadicNumber {
    let ps = pairs(k, n);
    let sum = |set: &BTreeSet<(usize, usize)>| -> i64 {
        set.iter()
            .map(|&(x, y)| spin(bits, x) * spin(bits, y))
            .sum()
    };
    let h = PadicNumber::sum(
        c.ctx(),
        &[
            c.j().mul_i64(sum(&ps.nearest)),
            c.j1().mul_i64(sum(&ps.prolonged)),
            c.j0().mul_i64(sum(&ps.one_level)),
        ],
    )
    .unwrap_or_else(|_| PadicNumber::zero(c.ctx()));
    let mut w = h.exp().unwrap();
    for (x, y, e) in field {
        let (s, t) = (spin(bits, *x), spin(bits, *y));
        let comp = match (s, t) {
            (-1, -1) => &e.mm,
            (-1, 1) => &e.mp,
            (1, -1) => &e.pm,
            _ => &e.pp,
        };
        w = if s * t > 0 {
            w.mul(comp)
        } else {
            w.div(comp).unwrap()
        };
    }
    w
}

/// Boundary edges `(x, y)` of `V_n` with `x` in `W_{n-1}`, in vertex-list
/// indices, carrying the field value of level `n`.
fn boundary(k: usize, n: usize, h: &EdgeField) -> Vec<(usize, usize, EdgeField)> {
    let vs = vertices(k, n);
    let mut out = Vec::new();
    for (j, y) in vs.iter().enumerate() {
        if y.len() == n && n > 0 {
            let x = vs.iter().position(|v| v[..] == y[..n - 1]).unwrap();
            out.push((x, j, h.clone()));
        }
    }
    out
}

fn solver_field(c: &Couplings, k: usize) -> EdgeField {
    let one = EdgeField::ones(c.ctx());
    solve_boundary_equations(c, k, &one).unwrap().field
}

#[test]
fn tree_indexing_matches_coordinates() {
    for k in 1..=3 {
        let t = CayleyTree::new(k);
        let vs = vertices(k, 3);
        assert_eq!(t.size(3), vs.len());
        for (i, v) in vs.iter().enumerate() {
            assert_eq!(t.coords(i), *v);
            assert_eq!(t.index(v), i);
            assert_eq!(t.depth(i), v.len());
        }
        let ps = pairs(k, 3);
        let lib: BTreeSet<_> = t.edges(3).collect();
        assert_eq!(lib, ps.nearest);
        let lib: BTreeSet<_> = t.prolonged_pairs(3).collect();
        assert_eq!(lib, ps.prolonged);
        let lib: BTreeSet<_> = t.one_level_pairs(3).into_iter().collect();
        assert_eq!(lib, ps.one_level);
    }
    let t = CayleyTree::new(2);
    assert_eq!(
        t.compose(t.index(&[2]), t.index(&[1, 2])),
        t.index(&[2, 1, 2])
    );
    assert_eq!(t.level(2), 3..7);
}

#[test]
fn hamiltonian_of_the_all_plus_configuration() {
    let t = CayleyTree::new(2);
    let sigma = Configuration::all_plus(t.size(1));
    assert_eq!(hamiltonian_coeffs(&t, 1, &sigma), (2, 0, 1));
    let sigma = Configuration::all_plus(t.size(2));
    assert_eq!(hamiltonian_coeffs(&t, 2, &sigma), (6, 4, 3));
}

#[test]
fn weights_match_the_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = couplings(5, (5, 2), (-5, 3), (25, 7));
    let ctx = c.ctx().clone();
    let unit = |rng: &mut ChaCha8Rng| loop {
        let n: i64 = rng.gen_range(1..10_000);
        if n % 5 != 0 {
            return PadicNumber::from_i64(n, &ctx);
        }
    };
    let h = EdgeField::new(
        unit(&mut rng),
        unit(&mut rng),
        unit(&mut rng),
        unit(&mut rng),
    );
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 2, &h);
    let w = weights(&t, &c, &field, 2, Exec::Sequential).unwrap();
    let b = boundary(2, 2, &h);
    for bits in 0..1u64 << 7 {
        let want = oracle_weight(&c, 2, 2, &b, bits);
        assert!(
            w.weights[bits as usize].eq_to_precision(&want, 56),
            "sigma {bits:07b}"
        );
        let single = measure_weight(&t, &c, &field, 2, &Configuration::new(bits, 7)).unwrap();
        assert!(single.eq_to_precision(&want, 56));
    }
    assert!(w
        .total()
        .unwrap()
        .eq_to_precision(&PadicNumber::one(&ctx), 56));
    let par = weights(&t, &c, &field, 2, Exec::default()).unwrap();
    assert_eq!(par.weights, w.weights);
    assert_eq!(par.partition, w.partition);
}

#[test]
fn solver_field_is_compatible_by_independent_summation() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    let h = solver_field(&c, 2);
    for comp in h.components() {
        assert!(comp.in_ep());
    }
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 2, &h);
    let rep = check_compatibility(&t, &c, &field, 2, Exec::default()).unwrap();
    assert!(rep.holds);
    assert_eq!(rep.base_configurations, 8);
    assert_eq!(rep.boundary_configurations, 16);
    // recompute sum_omega mu_2(sigma v omega) = mu_1(sigma) from scratch
    let fine: Vec<PadicNumber> = (0..1u64 << 7)
        .map(|b| oracle_weight(&c, 2, 2, &boundary(2, 2, &h), b))
        .collect();
    let coarse: Vec<PadicNumber> = (0..1u64 << 3)
        .map(|b| oracle_weight(&c, 2, 1, &boundary(2, 1, &h), b))
        .collect();
    let z2 = PadicNumber::sum(c.ctx(), &fine).unwrap();
    let z1 = PadicNumber::sum(c.ctx(), &coarse).unwrap();
    for sigma in 0..8u64 {
        let parts: Vec<&PadicNumber> = (0..16u64)
            .map(|w| &fine[(sigma | w << 3) as usize])
            .collect();
        let lhs = PadicNumber::sum(c.ctx(), parts).unwrap().div(&z2).unwrap();
        let rhs = coarse[sigma as usize].div(&z1).unwrap();
        assert!(lhs.eq_to_precision(&rhs, 56), "sigma {sigma:03b}");
    }
}

#[test]
fn compatibility_at_depth_three_and_other_branchings() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    for (k, n) in [(2, 3), (1, 2), (1, 4), (3, 2)] {
        let h = solver_field(&c, k);
        let t = CayleyTree::new(k);
        let field = GibbsField::uniform(&t, n, &h);
        let rep = check_compatibility(&t, &c, &field, n, Exec::default()).unwrap();
        assert!(rep.holds, "k={k} n={n} residual {}", rep.max_residual);
    }
}

#[test]
fn sibling_coupling_breaks_compatibility() {
    let c = couplings(5, (5, 2), (-5, 3), (5, 7));
    let h = solver_field(&c, 2);
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 2, &h);
    let rep = check_compatibility(&t, &c, &field, 2, Exec::default()).unwrap();
    assert!(!rep.holds);
    assert_eq!(rep.max_residual, Norm::power(5, -3));
}

#[test]
fn perturbing_one_edge_breaks_compatibility() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    let h = solver_field(&c, 2);
    let t = CayleyTree::new(2);
    let mut field = GibbsField::uniform(&t, 2, &h);
    let e = field.edges.get_mut(&4).unwrap();
    e.pp = e.pp.mul_i64(2);
    let rep = check_compatibility(&t, &c, &field, 2, Exec::default()).unwrap();
    assert!(!rep.holds);
}

#[test]
fn asymmetric_start_does_not_converge() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    let mut init = EdgeField::ones(c.ctx());
    init.mp = PadicNumber::from_i64(6, c.ctx());
    assert!(matches!(
        solve_boundary_equations(&c, 2, &init),
        Err(Error::NoConvergence { .. })
    ));
}

#[test]
fn zero_couplings_with_unit_field_give_uniform_measure() {
    let ctx = PrimeContext::with_prime(7).unwrap();
    let c = Couplings::zero(&ctx);
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 1, &EdgeField::ones(&ctx));
    let w = weights(&t, &c, &field, 1, Exec::Sequential).unwrap();
    assert_eq!(w.partition, PadicNumber::from_i64(8, &ctx));
    let eighth = PadicNumber::from_rational(1, 8, &ctx).unwrap();
    assert_eq!(w.measure(&Configuration::new(5, 3)).unwrap(), eighth);
}

#[test]
fn enumeration_limits_and_missing_edges() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 4, &EdgeField::ones(c.ctx()));
    assert!(matches!(
        weights(&t, &c, &field, 4, Exec::Sequential),
        Err(Error::InvalidParams(_))
    ));
    let short = GibbsField::uniform(&t, 1, &EdgeField::ones(c.ctx()));
    assert!(check_compatibility(&t, &c, &short, 2, Exec::Sequential).is_err());
    assert!(check_compatibility(&t, &c, &short, 0, Exec::Sequential).is_err());
    let ctx = c.ctx();
    assert!(Couplings::new(ctx, q(1, 2), q(0, 1), q(0, 1)).is_err());
}

#[test]
fn only_the_diagonal_square_placement_survives() {
    let c = couplings(5, (25, 3), (5, 2), (0, 1));
    let params = MapParams::from_couplings(c.ctx(), &q(25, 3), &q(5, 2)).unwrap();
    let x0 = fixed_points::find_x0(&params).unwrap();
    let t = CayleyTree::new(2);
    let scan = periodic_field_from_orbit(&t, &c, std::slice::from_ref(&x0)).unwrap();
    assert_eq!(scan.valid.len(), 1);
    assert_eq!(scan.valid[0].placement, Placement::DiagonalSquare);
    assert_eq!(scan.diagnostics.len(), 5);
    for d in &scan.diagnostics {
        assert_eq!(d.valid, d.placement == Placement::DiagonalSquare);
    }
    // the surviving vector is (x0/a)^2 on the diagonal
    let v = &scan.valid[0].levels[0];
    let want = x0.div(params.a()).unwrap().square();
    assert_eq!(v.pp, want);
    assert_eq!(v.mm, want);
    assert_eq!(v.mp, PadicNumber::one(c.ctx()));
    // a value that is not a fixed point of g fails every placement
    let bad = PadicNumber::from_i64(2, c.ctx());
    assert!(matches!(
        periodic_field_from_orbit(&t, &c, &[bad]),
        Err(Error::NoValidPlacement(_))
    ));
}

#[test]
fn periodic_fields_from_orbits() {
    let c = couplings(5, (25, 3), (5, 2), (0, 1));
    let t = CayleyTree::new(2);
    for w in [None, Some("1"), Some("12"), Some("21")] {
        let word = w.map(|s| s.parse().unwrap());
        let rep = periodic_gibbs(&t, &c, word.as_ref(), 2, Exec::default()).unwrap();
        assert_eq!(rep.period, w.map_or(1, str::len));
        assert!(rep.all_compatible(), "{w:?}");
        assert!(rep.outcomes.iter().all(|o| o.h_periodic));
        assert_eq!(rep.orbit[0].ctx().precision(), 64);
    }
}

#[test]
fn level_periodicity() {
    let ctx = PrimeContext::with_prime(5).unwrap();
    let t = CayleyTree::new(2);
    let two = EdgeField::new(
        PadicNumber::from_i64(2, &ctx),
        PadicNumber::one(&ctx),
        PadicNumber::one(&ctx),
        PadicNumber::one(&ctx),
    );
    let one = EdgeField::ones(&ctx);
    let alternating =
        GibbsField::from_levels(
            &t,
            4,
            |l| if l % 2 == 0 { two.clone() } else { one.clone() },
        );
    assert!(is_h_periodic(&t, &alternating, 2, 4));
    assert!(!is_h_periodic(&t, &alternating, 1, 4));
    let mut broken = alternating.clone();
    broken.edges.insert(t.index(&[2, 1, 1]), two.clone());
    assert!(!is_h_periodic(&t, &broken, 2, 4));
}

#[test]
fn compatibility_report_json() {
    let c = couplings(5, (5, 2), (-5, 3), (0, 1));
    let t = CayleyTree::new(2);
    let field = GibbsField::uniform(&t, 1, &solver_field(&c, 2));
    let rep = check_compatibility(&t, &c, &field, 1, Exec::Sequential).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["base_configurations"], 2);
    assert_eq!(v["boundary_configurations"], 4);
    assert_eq!(v["residuals"].as_array().unwrap().len(), 2);
}
