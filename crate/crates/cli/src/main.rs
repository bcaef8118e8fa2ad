use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use padic_ising::fixed_points::{analyze, classify, cubic_residual};
use padic_ising::gibbs::{
    check_compatibility, periodic_gibbs, solve_boundary_equations, CayleyTree, Couplings,
    EdgeField, GibbsField,
};
use padic_ising::padic::{Norm, PadicLiteral, PadicNumber, PrimeContext};
use padic_ising::symbolic::{basin_status, steps_to_attractor, IsingDynamics, Word};
use padic_ising::{Error, Exec, MapParams, ParamSource, Result};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "padic-ising",
    version,
    about = "p-adic dynamics of the Ising-Vannimenus model"
)]
struct Cli {
    /// The prime.
    #[arg(long, global = true, default_value_t = 13)]
    p: u64,
    /// Significant digits carried by every number.
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    /// Digits reserved for cancellation; checks use precision - guard digits.
    #[arg(long, global = true, default_value_t = 8)]
    guard: u32,
    /// Run independent jobs on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

/// Either `--a`/`--b` directly or couplings `--j`/`--j1` with
/// `a = exp_p(J)`, `b = exp_p(J1)`. Values are `m/n`, `m` or `v;d0,d1,...`.
#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, visible_alias = "J", allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    j: Option<String>,
    #[arg(long, visible_alias = "J1", allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    j1: Option<String>,
}

#[derive(Args)]
struct CouplingArgs {
    #[arg(long, visible_alias = "J", allow_hyphen_values = true)]
    j: Option<String>,
    #[arg(long, visible_alias = "J1", allow_hyphen_values = true)]
    j1: Option<String>,
    #[arg(
        long,
        visible_alias = "J0",
        allow_hyphen_values = true,
        default_value = "0"
    )]
    j0: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapChoice {
    G,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldChoice {
    /// Translation-invariant solution of the boundary equations.
    Solve,
    /// Every component equal to 1.
    Ones,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed points of g, the discriminant and their classification.
    FixedPoints(ParamArgs),
    /// Classify a fixed point of g by the norm of the derivative.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Iterate g or k from a starting point.
    Orbit {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value = "g")]
        map: MapChoice,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Whether g drives a point out of K, and how fast it reaches x0.
    Basin {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Symbols of x, k(x), k^2(x), ...
    Itinerary {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 8)]
        len: usize,
    },
    /// Periodic point of k (or g) coded by a word over {1, 2}.
    Periodic {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value = "k")]
        map: MapChoice,
        /// With --map g, also follow the orbit for this many steps.
        #[arg(long)]
        certify: Option<usize>,
    },
    /// Cylinder balls of the repeller at a given depth.
    Cylinders {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Fixed-point identities and the observed scaling of k near x1^2, x2^2.
    Lemmas(ParamArgs),
    /// Gibbs measures on the Cayley tree.
    #[command(subcommand)]
    Gibbs(GibbsCommand),
}

#[derive(Subcommand)]
enum GibbsCommand {
    /// Translation-invariant boundary field.
    Solve {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Compatibility of the finite-volume measures at depth n.
    Verify {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "solve")]
        field: FieldChoice,
        /// JSON job; its entries replace the command-line values.
        #[arg(long)]
        job: Option<PathBuf>,
    },
    /// Level-periodic fields from a periodic orbit of g (x0 without --word).
    Periodic {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

/// `gibbs verify --job` input.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Job {
    p: Option<u64>,
    precision: Option<u32>,
    guard: Option<u32>,
    k: Option<usize>,
    n: Option<usize>,
    #[serde(alias = "J")]
    j: Option<String>,
    #[serde(alias = "J1")]
    j1: Option<String>,
    #[serde(alias = "J0")]
    j0: Option<String>,
    field: Option<JobField>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JobField {
    Named(String),
    Explicit {
        mm: String,
        mp: String,
        pm: String,
        pp: String,
    },
}

/// A command's JSON output and whether its check passed.
struct Outcome {
    value: Value,
    verified: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome {
            value,
            verified: true,
        }
    }
}

fn literal(s: &str) -> Result<PadicLiteral> {
    Ok(s.parse::<PadicLiteral>()?)
}

fn rational(s: &str, p: u64) -> Result<BigRational> {
    Ok(literal(s)?.to_rational(p)?)
}

fn number(s: &str, ctx: &PrimeContext) -> Result<PadicNumber> {
    Ok(literal(s)?.to_padic(ctx)?)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn map_params(args: &ParamArgs, ctx: &PrimeContext) -> Result<MapParams> {
    let p = ctx.p();
    match (&args.a, &args.b, &args.j, &args.j1) {
        (Some(a), Some(b), None, None) => MapParams::new(
            ctx,
            ParamSource::from_literal(&literal(a)?, p)?,
            ParamSource::from_literal(&literal(b)?, p)?,
        ),
        (None, None, Some(j), Some(j1)) => {
            MapParams::from_couplings(ctx, &rational(j, p)?, &rational(j1, p)?)
        }
        _ => Err(Error::InvalidParams(
            "give either --a and --b or --j and --j1".into(),
        )),
    }
}

fn couplings(args: &CouplingArgs, ctx: &PrimeContext) -> Result<Couplings> {
    let p = ctx.p();
    let need = |v: &Option<String>, name: &str| {
        v.as_deref()
            .ok_or_else(|| Error::InvalidParams(format!("--{name} is required")))
            .and_then(|s| rational(s, p))
    };
    Couplings::new(
        ctx,
        need(&args.j, "j")?,
        need(&args.j1, "j1")?,
        rational(&args.j0, p)?,
    )
}

fn word(s: &str) -> Result<Word> {
    s.parse()
}

fn fixed_points(params: &MapParams) -> Result<Outcome> {
    let rep = analyze(params)?;
    Ok(Outcome::ok(json!({
        "p": params.ctx().p(),
        "a": params.a(),
        "b": params.b(),
        "m": params.m(),
        "strict_regime": params.strict_regime(),
        "x0": rep.x0,
        "x1": rep.x1(),
        "x2": rep.x2(),
        "delta": rep.delta,
        "classifications": rep.classifications,
    })))
}

fn orbit(params: &MapParams, x: &str, map: MapChoice, steps: usize) -> Result<Outcome> {
    let base = params.ctx();
    let per_step = match map {
        MapChoice::G => 1,
        MapChoice::K => 2,
    };
    let up = params.lifted(params.m().max(1) * (per_step * steps) as u32 + base.guard())?;
    let mut cur = number(x, up.ctx())?;
    let mut points = vec![cur.with_context(base)];
    for _ in 0..steps {
        cur = match map {
            MapChoice::G => up.eval_g(&cur)?,
            MapChoice::K => up.eval_k(&cur)?,
        };
        points.push(cur.with_context(base));
    }
    Ok(Outcome::ok(
        json!({ "map": map_name(map), "points": points }),
    ))
}

fn map_name(map: MapChoice) -> &'static str {
    match map {
        MapChoice::G => "g",
        MapChoice::K => "k",
    }
}

fn basin(params: &MapParams, x: &str, budget: usize) -> Result<Outcome> {
    let base = params.ctx();
    let up = params.lifted(params.m().max(1) * budget as u32 + base.guard())?;
    let x0_up = analyze(&up)?.x0;
    let status = basin_status(&up, &x0_up, &number(x, up.ctx())?, budget)?;
    let x0 = analyze(params)?.x0;
    let attractor_budget = 4 * (base.precision() + base.guard()) as usize;
    let steps = steps_to_attractor(params, &x0, &number(x, base)?, attractor_budget)?;
    Ok(Outcome::ok(json!({
        "x0": x0,
        "basin": status,
        "steps_to_attractor": steps,
    })))
}

fn itinerary(params: MapParams, x: &str, len: usize) -> Result<Outcome> {
    let d = IsingDynamics::new(params)?;
    let up = d.lifted(d.lift_for(len))?;
    let w = up.itinerary(&number(x, up.params().ctx())?, len)?;
    Ok(Outcome::ok(json!({ "itinerary": w })))
}

fn periodic(params: MapParams, w: &str, map: MapChoice, certify: Option<usize>) -> Result<Outcome> {
    let d = IsingDynamics::new(params)?;
    let w = word(w)?;
    match map {
        MapChoice::K => Ok(Outcome::ok(to_json(&d.periodic_point_k(&w)?))),
        MapChoice::G => {
            let point = d.periodic_point_g(&w)?;
            let status = certify
                .map(|budget| d.certify_g_orbit(&w, budget))
                .transpose()?;
            Ok(Outcome::ok(
                json!({ "point": point, "certificate": status }),
            ))
        }
    }
}

fn cylinders(params: MapParams, depth: usize, exec: Exec) -> Result<Outcome> {
    let d = IsingDynamics::new(params)?;
    let balls: Vec<Value> = d
        .julia_cylinders(depth, exec)?
        .into_iter()
        .map(|(w, ball)| json!({ "word": w, "ball": ball }))
        .collect();
    Ok(Outcome::ok(json!({
        "depth": depth,
        "geometry": d.geometry(),
        "cylinders": balls,
    })))
}

/// Pairs `c + p^(m+1) s`, `c + p^(m+1+e) t` in the ball of radius `r`
/// around `x1^2` and `x2^2`, with the exponent `e'` in
/// `|k(x) - k(y)| = p^e' |x - y|` recorded for each.
fn k_scaling(d: &IsingDynamics) -> Result<Value> {
    let params = d.params();
    let ctx = params.ctx();
    let m = params.m() as i64;
    let geom = d.geometry();
    let mut exponents = std::collections::BTreeMap::<i64, usize>::new();
    let mut pairs = 0;
    for c in [&geom.x1sq, &geom.x2sq] {
        for s in 1..=6i64 {
            for (e, t) in [(0i64, 7i64), (1, 2), (2, -3), (4, 11)] {
                let x = c.add(&PadicNumber::p_power(m + 1, ctx).mul_i64(s))?;
                let y = c.add(&PadicNumber::p_power(m + 1 + e, ctx).mul_i64(t))?;
                let dxy = x.distance(&y);
                if dxy.is_zero() {
                    continue;
                }
                let dk = params.eval_k(&x)?.distance(&params.eval_k(&y)?);
                let (Some(ek), Some(ex)) = (dk.exponent(), dxy.exponent()) else {
                    continue;
                };
                *exponents.entry(ek - ex).or_default() += 1;
                pairs += 1;
            }
        }
    }
    let r = params.r();
    let law = |pow: u32| {
        let want = Norm::one(ctx.p())
            .div(r.powi(pow))
            .and_then(|n| n.exponent());
        exponents.len() == 1 && exponents.keys().next().copied() == want
    };
    Ok(json!({
        "pairs": pairs,
        "ratio_exponents": exponents,
        "inverse_r": law(1),
        "inverse_r_squared": law(2),
    }))
}

fn lemmas(params: MapParams) -> Result<Outcome> {
    let rep = analyze(&params)?;
    let residual = cubic_residual(&params, &rep.x0);
    let scaling = if params.strict_regime() && rep.roots.is_some() {
        Some(k_scaling(&IsingDynamics::new(params.clone())?)?)
    } else {
        None
    };
    let verified = rep.identities.all_hold();
    Ok(Outcome {
        value: json!({
            "m": params.m(),
            "strict_regime": params.strict_regime(),
            "identities": rep.identities,
            "all_hold": verified,
            "x0_residual": residual,
            "k_scaling": scaling,
        }),
        verified,
    })
}

fn classify_point(params: &MapParams, x: &str) -> Result<Outcome> {
    let x = number(x, params.ctx())?;
    let class = classify(params, &x)?;
    Ok(Outcome::ok(json!({
        "x": x,
        "classification": class,
        "derivative_norm": params.deriv_g_norm(&x)?,
    })))
}

fn edge_field(field: &JobField, c: &Couplings, k: usize) -> Result<EdgeField> {
    let ctx = c.ctx();
    match field {
        JobField::Named(name) => match name.as_str() {
            "solve" => Ok(solve_boundary_equations(c, k, &EdgeField::ones(ctx))?.field),
            "ones" => Ok(EdgeField::ones(ctx)),
            other => Err(Error::InvalidParams(format!("unknown field {other:?}"))),
        },
        JobField::Explicit { mm, mp, pm, pp } => Ok(EdgeField::new(
            number(mm, ctx)?,
            number(mp, ctx)?,
            number(pm, ctx)?,
            number(pp, ctx)?,
        )),
    }
}

fn verify(
    cli: &Cli,
    args: &CouplingArgs,
    k: usize,
    n: usize,
    field: FieldChoice,
    job: Option<&PathBuf>,
    exec: Exec,
) -> Result<Outcome> {
    let job: Option<Job> = match job {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidParams(format!("job file: {e}")))?,
            )
        }
        None => None,
    };
    let job = job.unwrap_or(Job {
        p: None,
        precision: None,
        guard: None,
        k: None,
        n: None,
        j: None,
        j1: None,
        j0: None,
        field: None,
    });
    let ctx = PrimeContext::new(
        job.p.unwrap_or(cli.p),
        job.precision.unwrap_or(cli.precision),
        job.guard.unwrap_or(cli.guard),
    )?;
    let args = CouplingArgs {
        j: job.j.or_else(|| args.j.clone()),
        j1: job.j1.or_else(|| args.j1.clone()),
        j0: job.j0.unwrap_or_else(|| args.j0.clone()),
    };
    let c = couplings(&args, &ctx)?;
    let k = job.k.unwrap_or(k);
    let n = job.n.unwrap_or(n);
    let field = job.field.unwrap_or(JobField::Named(
        match field {
            FieldChoice::Solve => "solve",
            FieldChoice::Ones => "ones",
        }
        .to_string(),
    ));
    let h = edge_field(&field, &c, k)?;
    let tree = CayleyTree::new(k);
    let report = check_compatibility(
        &tree,
        &c,
        &GibbsField::uniform(&tree, n.max(1), &h),
        n,
        exec,
    )?;
    Ok(Outcome {
        verified: report.holds,
        value: json!({ "k": k, "field": h, "compatibility": report }),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = PrimeContext::new(cli.p, cli.precision, cli.guard)?;
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match &cli.command {
        Command::FixedPoints(args) => fixed_points(&map_params(args, &ctx)?),
        Command::Classify { params, x } => classify_point(&map_params(params, &ctx)?, x),
        Command::Orbit {
            params,
            x,
            map,
            steps,
        } => orbit(&map_params(params, &ctx)?, x, *map, *steps),
        Command::Basin { params, x, budget } => basin(&map_params(params, &ctx)?, x, *budget),
        Command::Itinerary { params, x, len } => itinerary(map_params(params, &ctx)?, x, *len),
        Command::Periodic {
            params,
            word,
            map,
            certify,
        } => periodic(map_params(params, &ctx)?, word, *map, *certify),
        Command::Cylinders { params, depth } => cylinders(map_params(params, &ctx)?, *depth, exec),
        Command::Lemmas(args) => lemmas(map_params(args, &ctx)?),
        Command::Gibbs(GibbsCommand::Solve { couplings: args, k }) => {
            let c = couplings(args, &ctx)?;
            Ok(Outcome::ok(to_json(&solve_boundary_equations(
                &c,
                *k,
                &EdgeField::ones(&ctx),
            )?)))
        }
        Command::Gibbs(GibbsCommand::Verify {
            couplings: args,
            k,
            n,
            field,
            job,
        }) => verify(cli, args, *k, *n, *field, job.as_ref(), exec),
        Command::Gibbs(GibbsCommand::Periodic {
            couplings: args,
            word: w,
            k,
            n,
        }) => {
            let c = couplings(args, &ctx)?;
            let w = w.as_deref().map(word).transpose()?;
            let report = periodic_gibbs(&CayleyTree::new(*k), &c, w.as_ref(), *n, exec)?;
            Ok(Outcome {
                verified: report.all_compatible(),
                value: to_json(&report),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.value).expect("serializable")
            );
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
