//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit status if
//! any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{failed_clauses, q, random_in_ball, random_rational, strict_samples};
use padic_ising::fixed_points::{analyze, minus_four_mod};
use padic_ising::gibbs::{
    check_compatibility, periodic_gibbs, solve_boundary_equations, CayleyTree, Couplings,
    EdgeField, GibbsField,
};
use padic_ising::padic::{Norm, PadicNumber, PrimeContext};
use padic_ising::symbolic::{
    basin_status, steps_to_attractor, trace_power, BasinOutcome, IsingDynamics, Word,
};
use padic_ising::{Error, Exec, MapParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Digits that must agree: `N - g` with `N = 64`, `g = 8`.
const DIGITS: u32 = 56;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn tol(p: u64) -> Norm {
    Norm::power(p, -(DIGITS as i64))
}

fn arithmetic_suite() -> Outcome {
    let mut failures = Vec::new();
    for (i, p) in [3u64, 5, 7, 13].into_iter().enumerate() {
        let ctx = PrimeContext::with_prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        let pairs: Vec<_> = (0..1000)
            .map(|_| {
                (
                    random_rational(&mut rng, p, -5, 5),
                    random_rational(&mut rng, p, -5, 5),
                    random_rational(&mut rng, p, 1, 4),
                )
            })
            .collect();
        let bad: usize = Exec::default()
            .map(&pairs, |(x, y, s)| {
                let px = PadicNumber::from_ratio(x, &ctx);
                let py = PadicNumber::from_ratio(y, &ctx);
                let sum = px.add(&py).unwrap();
                let mut ok = sum.norm() <= px.norm().max(py.norm());
                ok &= sum.norm() == common::norm_of(&(x + y), p);
                ok &= px.mul(&py).norm() == px.norm().mul(py.norm());
                ok &= px.mul(&py).norm() == common::norm_of(&(x * y), p);
                // exp/log on B_1(0)
                let ps = PadicNumber::from_ratio(s, &ctx);
                let one = PadicNumber::one(&ctx);
                let e = ps.exp().unwrap();
                ok &= e.norm() == Norm::one(p);
                ok &= e.distance(&one) == ps.norm();
                let onep = one.add(&ps).unwrap();
                let l = onep.log().unwrap();
                ok &= l.norm() == ps.norm();
                ok &= e.log().unwrap().eq_to_precision(&ps, DIGITS);
                ok &= l.exp().unwrap().eq_to_precision(&onep, DIGITS);
                usize::from(!ok)
            })
            .into_iter()
            .sum();
        if bad > 0 {
            failures.push(format!("p={p}: {bad} failing pairs"));
        }
    }
    if failures.is_empty() {
        outcome(
            true,
            "4000 pairs, norms exact, exp/log round trips to 56 digits",
        )
    } else {
        outcome(false, failures.join(", "))
    }
}

fn sqrt_oracle() -> Outcome {
    let mut checked = 0;
    for p in [3u64, 5, 7, 13] {
        let ctx = PrimeContext::with_prime(p).unwrap();
        let p2 = p * p;
        let mut square = vec![false; p2 as usize];
        for y in 0..p2 {
            square[(y * y % p2) as usize] = true;
        }
        for x in 1..p2 {
            let got = PadicNumber::from_i64(x as i64, &ctx).sqrt_exists().unwrap();
            if got != square[x as usize] {
                return outcome(false, format!("p={p} residue {x}: sqrt_exists={got}"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} nonzero residue classes mod p^2"))
}

fn fixed_point_structure() -> Outcome {
    for p in [5u64, 13] {
        for (i, params) in strict_samples(p, 3000 + p).iter().enumerate() {
            let rep = analyze(params).unwrap();
            let pts = rep.points();
            if pts.len() != 3 {
                return outcome(
                    false,
                    format!("p={p} sample {i}: {} fixed points", pts.len()),
                );
            }
            for x in pts {
                let res = params.eval_g(x).unwrap().distance(x);
                if res > tol(p) {
                    return outcome(false, format!("p={p} sample {i}: residual {res}"));
                }
            }
            if rep.delta.leading_digit() != minus_four_mod(p) {
                return outcome(false, format!("p={p} sample {i}: leading digit of delta"));
            }
        }
    }
    for p in [3u64, 7] {
        for (i, params) in strict_samples(p, 3000 + p).iter().enumerate() {
            let rep = analyze(params).unwrap();
            let ok = rep.points().len() == 1
                && !rep.delta.sqrt_exists().unwrap()
                && rep.delta.leading_digit() == minus_four_mod(p)
                && params.eval_g(&rep.x0).unwrap().distance(&rep.x0) <= tol(p);
            if !ok {
                return outcome(false, format!("p={p} sample {i}"));
            }
        }
    }
    outcome(
        true,
        "20 samples each: 3 points at p=5,13; 1 point at p=3,7; residual <= p^-56",
    )
}

fn classification() -> Outcome {
    for p in [5u64, 13] {
        for (i, params) in strict_samples(p, 3000 + p).iter().enumerate() {
            let rep = analyze(params).unwrap();
            let one = PadicNumber::one(params.ctx());
            let b4m1 = params.b2().square().distance(&one);
            let r = params.r();
            let d0 = params.deriv_g_norm(&rep.x0).unwrap();
            let mut ok = d0 == b4m1 && d0 <= Norm::power(p, -1);
            for x in [rep.x1().unwrap(), rep.x2().unwrap()] {
                let d = params.deriv_g_norm(x).unwrap();
                ok &= d.mul(r) == Norm::one(p) && d >= Norm::power(p, 1);
            }
            if !ok {
                return outcome(false, format!("p={p} sample {i}"));
            }
        }
    }
    outcome(
        true,
        "40 samples, |g'(x0)| = |b^4-1| and |g'(x1,2)| = 1/|b-1| exactly",
    )
}

fn lemma_suite() -> Outcome {
    let mut ls = Vec::new();
    for p in [5u64, 13] {
        for (i, params) in strict_samples(p, 3000 + p).iter().enumerate() {
            let rep = analyze(params).unwrap();
            let bad = failed_clauses(params, &rep);
            if !bad.is_empty() || !rep.identities.all_hold() {
                return outcome(false, format!("p={p} sample {i}: clauses {bad:?}"));
            }
            ls.push(rep.identities.vii_l.unwrap_or(-1));
        }
    }
    ls.sort();
    ls.dedup();
    outcome(
        true,
        format!("40 samples, clauses (i)-(vii) hold; observed l in {ls:?}"),
    )
}

/// Pairs in `B_r(x_i^2)` with the ratio `|k(x) - k(y)| / |x - y|` recorded.
fn scaling_pairs() -> Vec<(u64, Norm, Norm, Norm)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [5u64, 13] {
        for params in strict_samples(p, 3000 + p).iter().take(5) {
            let rep = analyze(params).unwrap();
            let (x1, x2) = rep.roots.clone().unwrap();
            let m = params.m() as i64;
            let mut n = 0;
            while n < 200 {
                let c = if n % 2 == 0 { x1.square() } else { x2.square() };
                let x = random_in_ball(&mut rng, &c, -m);
                let y = random_in_ball(&mut rng, &c, -m);
                if x == y {
                    continue;
                }
                let dk = params
                    .eval_k(&x)
                    .unwrap()
                    .distance(&params.eval_k(&y).unwrap());
                out.push((p, params.r(), dk, x.distance(&y)));
                n += 1;
            }
        }
    }
    out
}

fn k_scaling() -> Outcome {
    let pairs = scaling_pairs();
    let total = pairs.len();
    let squared = pairs
        .iter()
        .filter(|(_, r, dk, dxy)| dk.mul(r.powi(2)) == *dxy)
        .count();
    let linear = pairs
        .iter()
        .filter(|(_, r, dk, dxy)| dk.mul(*r) == *dxy)
        .count();
    outcome(
        squared == total,
        format!(
            "|k(x)-k(y)| r^2 = |x-y| on {squared}/{total} pairs; |k(x)-k(y)| r = |x-y| on {linear}/{total}"
        ),
    )
}

fn subshift_conjugacy() -> Outcome {
    let ctx = PrimeContext::with_prime(13).unwrap();
    let sets = [(1 + 169 * 5, 1 + 13 * 7), (1 + 13 * 13 * 13, 1 + 169 * 2)];
    let mut pairs = 0;
    for (a, b) in sets {
        let d = IsingDynamics::new(MapParams::from_i64(&ctx, a, b).unwrap()).unwrap();
        let mat = d.incidence_matrix();
        for len in 1..=5usize {
            let census = match d.periodic_census(len, Exec::default()) {
                Ok(c) => c,
                Err(e) => return outcome(false, format!("a={a} b={b} len={len}: {e}")),
            };
            if census.len() as u64 != trace_power(mat, len as u32) || census.len() != 1 << len {
                return outcome(
                    false,
                    format!("a={a} b={b} len={len}: {} points", census.len()),
                );
            }
            for (i, pt) in census.iter().enumerate() {
                if pt.residual > tol(13)
                    || d.itinerary(&pt.point, len).ok().as_ref() != Some(&pt.word)
                {
                    return outcome(false, format!("a={a} b={b} word {}", pt.word));
                }
                for other in &census[i + 1..] {
                    if pt.point.eq_to_precision(&other.point, DIGITS) {
                        return outcome(false, format!("{} and {} coincide", pt.word, other.word));
                    }
                    let metric = d.subshift_metric(&pt.word, &other.word).unwrap();
                    if pt.point.distance(&other.point) != metric {
                        return outcome(
                            false,
                            format!("metric differs for {} {}", pt.word, other.word),
                        );
                    }
                    pairs += 1;
                }
            }
        }
    }
    outcome(
        true,
        format!("p=13, m=1 and m=2, words up to length 5, {pairs} pairs with exact metric"),
    )
}

fn basin_dichotomy() -> Outcome {
    let ctx = PrimeContext::with_prime(13).unwrap();
    let d =
        IsingDynamics::new(MapParams::from_i64(&ctx, 1 + 169 * 5, 1 + 13 * 7).unwrap()).unwrap();
    let params = d.params();
    let budget = (ctx.precision() + ctx.guard()) as usize;
    let one = PadicNumber::one(&ctx);
    let Some(s1) = steps_to_attractor(params, d.x0(), &one, budget).unwrap() else {
        return outcome(false, "x = 1 did not reach x0");
    };
    let alpha = d.geometry().alpha1.clone();
    let st = basin_status(params, d.x0(), &alpha, 10).unwrap();
    let BasinOutcome::InBasin { steps } = st.outcome else {
        return outcome(false, "alpha1 stayed in K");
    };
    if steps > 2 {
        return outcome(false, format!("alpha1 exits K after {steps} steps"));
    }
    let mut exit = alpha.clone();
    for _ in 0..steps {
        exit = params.eval_g(&exit).unwrap();
    }
    let Some(s2) = steps_to_attractor(params, d.x0(), &exit, budget).unwrap() else {
        return outcome(false, "alpha1 orbit does not converge");
    };
    let mut certified = 0;
    for len in 1..=3 {
        for w in Word::all(len) {
            match d.certify_g_orbit(&w, 100) {
                Ok(st) if st.outcome == BasinOutcome::StaysInK { budget: 100 } => certified += 1,
                Ok(st) => return outcome(false, format!("word {w}: {:?}", st.outcome)),
                Err(e) => return outcome(false, format!("word {w}: {e}")),
            }
        }
    }
    outcome(
        true,
        format!(
            "1 -> x0 in {s1} steps; alpha1 exits after {steps}, then {s2} steps; {certified} periodic points stay in K for 100 steps"
        ),
    )
}

fn gibbs_compatibility() -> Outcome {
    let ctx = PrimeContext::with_prime(5).unwrap();
    let c = Couplings::new(&ctx, q(5, 2), q(-5, 3), q(0, 1)).unwrap();
    let sol = match solve_boundary_equations(&c, 2, &EdgeField::ones(&ctx)) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("solver: {e}")),
    };
    let tree = CayleyTree::new(2);
    let field = GibbsField::uniform(&tree, 2, &sol.field);
    let rep = check_compatibility(&tree, &c, &field, 2, Exec::default()).unwrap();
    if !rep.holds || rep.base_configurations != 8 || rep.boundary_configurations != 16 {
        return outcome(
            false,
            format!(
                "solver field: holds={} residual {}",
                rep.holds, rep.max_residual
            ),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let edges: Vec<usize> = field.edges.keys().copied().collect();
    let mut broken = 0;
    for _ in 0..100 {
        let mut f = field.clone();
        let v = edges[rng.gen_range(0..edges.len())];
        let u = loop {
            let n: i64 = rng.gen_range(2..5i64.pow(8));
            if n % 5 != 0 {
                break PadicNumber::from_i64(n, &ctx);
            }
        };
        let e = f.edges.get_mut(&v).unwrap();
        let slot = match rng.gen_range(0..4) {
            0 => &mut e.mm,
            1 => &mut e.mp,
            2 => &mut e.pm,
            _ => &mut e.pp,
        };
        *slot = slot.mul(&u);
        if !check_compatibility(&tree, &c, &f, 2, Exec::default())
            .unwrap()
            .holds
        {
            broken += 1;
        }
    }
    outcome(
        broken >= 95,
        format!(
            "solver converged in {} iterations, residual {} over 8 x 16 configurations; {broken}/100 perturbations break compatibility",
            sol.iterations, rep.max_residual
        ),
    )
}

fn periodic_pipeline() -> Outcome {
    let ctx = PrimeContext::with_prime(5).unwrap();
    let c = Couplings::new(&ctx, q(25, 3), q(5, 2), q(0, 1)).unwrap();
    let tree = CayleyTree::new(2);
    let mut lines = Vec::new();
    for w in ["1", "12"] {
        let word: Word = w.parse().unwrap();
        let run = || periodic_gibbs(&tree, &c, Some(&word), 2, Exec::default());
        match (run(), run()) {
            (Ok(a), Ok(b)) => {
                let same = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
                if !same || !a.all_compatible() || a.outcomes.iter().any(|o| !o.h_periodic) {
                    return outcome(
                        false,
                        format!(
                            "word {w}: compatible={} deterministic={same}",
                            a.all_compatible()
                        ),
                    );
                }
                let names: Vec<String> =
                    a.outcomes.iter().map(|o| o.placement.to_string()).collect();
                lines.push(format!("m={} {}", a.period, names.join("+")));
            }
            (Err(Error::NoValidPlacement(d1)), Err(Error::NoValidPlacement(d2))) if d1 == d2 => {
                lines.push(format!("m={} no valid placement ({d1})", word.len()));
            }
            (a, b) => {
                return outcome(false, format!("word {w}: {:?} / {:?}", a.err(), b.err()));
            }
        }
    }
    outcome(true, format!("{}; compatible at n=2", lines.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ultrametric and arithmetic suite", arithmetic_suite),
        ("square-root criterion vs squares mod p^2", sqrt_oracle),
        ("fixed-point structure", fixed_point_structure),
        ("classification of fixed points", classification),
        ("fixed-point lemma clauses", lemma_suite),
        ("exact scaling of k on B_r(x_i^2) by 1/r^2", k_scaling),
        ("subshift conjugacy", subshift_conjugacy),
        ("basin dichotomy", basin_dichotomy),
        ("Gibbs compatibility", gibbs_compatibility),
        ("periodic Gibbs pipeline", periodic_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| outcome(false, "panicked"));
        let status = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!(
            "criterion {:>2} {status} {name}: {} [{:.1}s]",
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
