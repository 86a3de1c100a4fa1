use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

use cv_uncertainty::covariance::{MomentTriple, ADMISSIBILITY_TOL};
use cv_uncertainty::functional::{
    brute_force_minimize, BruteForceOptions, MinimizeOptions, SolverOptions,
};
use cv_uncertainty::inequalities::{
    build, detect_entanglement, CatalogParams, InequalitySpec, SolveRoute, Verdict,
};
use cv_uncertainty::region::{convex_decompose, hole_witness, HyperboloidSheet};
use cv_uncertainty::symplectic::{symplectic_residual, williamson};
use cv_uncertainty::Error;

use crate::input::CovarianceFile;
use crate::report::{float, floats, fmt_float, matrix, Format, Report};
use crate::{
    Cli, Command, EntangleArgs, FileArg, FunctionalParams, MinimizeArgs, Outcome, RegionCommand,
    EXIT_ENTANGLED, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_PHYSICS, EXIT_USAGE,
};

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
        Some(err) if err.is_physics() => EXIT_PHYSICS,
        _ => EXIT_USAGE,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check(args) => check(cli, args),
        Command::Minimize(args) => minimize(cli, args),
        Command::Entangle(args) => entangle(cli, args),
        Command::Region(RegionCommand::Slice { n, vmax, steps }) => slice(cli, *n, *vmax, *steps),
        Command::Region(RegionCommand::Decompose { u, v, w, angle }) => {
            decompose(cli, MomentTriple::new(*u, *v, *w), *angle)
        }
        Command::Region(RegionCommand::HoleWitness(args)) => witness(cli, args),
        Command::Williamson(args) => williamson_cmd(cli, args),
    }
}

fn render(report: &Report, format: Format, code: u8) -> Result<Outcome> {
    let mut body = Vec::new();
    report.write(format, &mut body)?;
    Ok(Outcome { body, code })
}

fn catalog_params(p: &FunctionalParams, n_modes: Option<usize>) -> CatalogParams {
    CatalogParams {
        a: p.a,
        b: p.b,
        c: p.c,
        n: p.n,
        n_modes: p.modes.or(n_modes),
    }
}

fn params_value(spec: &InequalitySpec) -> Value {
    let mut m = Map::new();
    for (k, v) in &spec.params {
        m.insert(k.to_string(), float(*v));
    }
    Value::Object(m)
}

fn opt_float(x: Option<f64>) -> Value {
    x.map(float).unwrap_or(Value::Null)
}

fn check(cli: &Cli, args: &FileArg) -> Result<Outcome> {
    let c = CovarianceFile::read(&args.file)?.covariance(cli.hbar)?;
    let tol = ADMISSIBILITY_TOL * c.hbar();
    let eigs = c.symplectic_eigenvalues()?;
    let admissible = c.is_admissible(tol)?;
    let mut r = Report::new("check");
    r.int("n_modes", c.n_modes() as u64)
        .num("hbar", c.hbar())
        .put("symplectic_eigenvalues", floats(&eigs))
        .num("determinant", c.determinant())
        .flag("admissible", admissible)
        .flag("pure", c.is_pure_gaussian(tol)?)
        .flag("boundary", c.on_boundary(tol)?);
    render(
        &r,
        cli.format,
        if admissible { EXIT_OK } else { EXIT_PHYSICS },
    )
}

fn minimize(cli: &Cli, args: &MinimizeArgs) -> Result<Outcome> {
    let hbar = cli.hbar.unwrap_or(1.0);
    let spec = build(
        args.functional.kind(),
        hbar,
        catalog_params(&args.params, None),
    )?;
    let opts = MinimizeOptions {
        solver: SolverOptions {
            max_iter: args.max_iter,
            tol: args.tol,
            ..SolverOptions::default()
        },
        check_excited: args.check_excited,
    };
    let bound = spec.solved_bound();
    let unattained = bound == 0.0;
    let res = spec.solve(&opts).with_context(|| {
        if unattained {
            "the infimum 0 is not attained by any finite covariance matrix".to_string()
        } else {
            format!("solving '{}'", spec.kind.name())
        }
    })?;
    let mut r = Report::new("minimize");
    r.str("functional", spec.kind.name())
        .str("label", &spec.label)
        .put("params", params_value(&spec))
        .num("hbar", hbar)
        .str(
            "route",
            match spec.route {
                SolveRoute::General => "general",
                SolveRoute::Product => "product",
            },
        )
        .num("bound", bound)
        .num("global_bound", spec.bound)
        .put("separable_bound", opt_float(spec.separable_bound))
        .num("value", res.value)
        .num("bound_gap", res.value - bound)
        .num("residual", res.residual)
        .int("iterations", res.iterations as u64)
        .num("trace_identity_gap", res.trace_identity_gap())
        .put("f_symplectic_eigenvalues", floats(&res.f_sympl_eigs))
        .put("covariance", matrix(res.covariance.matrix()));
    if args.check_excited {
        let excited = res
            .excited
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("levels".into(), Value::from(e.qn.as_slice().to_vec()));
                m.insert("value".into(), opt_float(e.value));
                m.insert(
                    "larger".into(),
                    e.larger.map(Value::Bool).unwrap_or(Value::Null),
                );
                Value::Object(m)
            })
            .collect();
        r.put("excited", Value::Array(excited));
    }
    if args.oracle {
        let bf = BruteForceOptions {
            product_only: spec.route == SolveRoute::Product,
            ..BruteForceOptions::new(args.restarts, args.seed)
        };
        let (oracle, _) = brute_force_minimize(&spec.functional, &bf);
        r.num("oracle_value", oracle)
            .num("oracle_gap", oracle - res.value)
            .int("oracle_restarts", args.restarts as u64)
            .int("oracle_seed", args.seed);
    }
    render(&r, cli.format, EXIT_OK)
}

fn entangle(cli: &Cli, args: &EntangleArgs) -> Result<Outcome> {
    let c = CovarianceFile::read(&args.file)?.covariance(cli.hbar)?;
    let spec = build(
        args.criterion.kind(),
        c.hbar(),
        catalog_params(&args.params, Some(c.n_modes())),
    )?;
    let Some(sep) = spec.separable_bound else {
        bail!(
            "'{}' has no separable bound and cannot witness entanglement",
            spec.kind.name()
        );
    };
    let verdict = detect_entanglement(&c, &spec, args.tol)?;
    let lhs = spec.functional.evaluate(&c);
    let mut r = Report::new("entangle");
    r.str("criterion", spec.kind.name())
        .str("label", &spec.label)
        .put("params", params_value(&spec))
        .num("hbar", c.hbar())
        .num("lhs", lhs)
        .num("separable_bound", sep)
        .num("global_bound", spec.bound)
        .num("margin", lhs - sep)
        .str(
            "verdict",
            match verdict {
                Verdict::Entangled => "entangled",
                Verdict::Inconclusive => "inconclusive",
            },
        );
    let code = if verdict == Verdict::Entangled {
        EXIT_ENTANGLED
    } else {
        EXIT_OK
    };
    render(&r, cli.format, code)
}

fn slice(cli: &Cli, n: u32, vmax: f64, steps: usize) -> Result<Outcome> {
    if !(vmax.is_finite() && vmax >= 0.0) {
        bail!("--vmax must be a non-negative number");
    }
    let hbar = cli.hbar.unwrap_or(1.0);
    if !(hbar.is_finite() && hbar > 0.0) {
        bail!("hbar must be positive");
    }
    let rows = HyperboloidSheet::new(n, hbar).slice(vmax, steps);
    if cli.format == Format::Json {
        let (u, v): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
        let mut r = Report::new("region slice");
        r.int("n", n as u64)
            .num("hbar", hbar)
            .put("u", floats(&u))
            .put("v", floats(&v));
        return render(&r, Format::Json, EXIT_OK);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "v"])?;
    for (u, v) in rows {
        w.write_record([fmt_float(u), fmt_float(v)])?;
    }
    Ok(Outcome {
        body: w.into_inner()?,
        code: EXIT_OK,
    })
}

fn triple_value(t: &MomentTriple) -> Value {
    floats(&t.as_array())
}

fn decompose(cli: &Cli, target: MomentTriple, angle: f64) -> Result<Outcome> {
    let hbar = cli.hbar.unwrap_or(1.0);
    let d = convex_decompose(&target, angle, hbar)?;
    let mix = d.mixture();
    let err = mix
        .as_array()
        .iter()
        .zip(target.as_array())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut r = Report::new("region decompose");
    r.num("hbar", hbar)
        .put("target", triple_value(&target))
        .num("angle", angle)
        .put("phi", triple_value(&d.phi))
        .put("psi", triple_value(&d.psi))
        .num("t0", d.t0)
        .num("reconstruction_error", err);
    render(&r, cli.format, EXIT_OK)
}

fn witness(cli: &Cli, args: &FileArg) -> Result<Outcome> {
    let c = CovarianceFile::read(&args.file)?.covariance(cli.hbar)?;
    let w = hole_witness(&c)?;
    let err = (w.reconstruct() - c.matrix()).amax();
    let mut r = Report::new("region hole-witness");
    r.num("hbar", c.hbar())
        .int("m", w.m as u64)
        .put("t", floats(&w.t))
        .put("symplectic_eigenvalues", floats(&w.s))
        .put(
            "superposition_variances",
            floats(&w.superposition_variances()?),
        )
        .put("sigma", matrix(w.sigma.matrix()))
        .num("reconstruction_error", err);
    render(&r, cli.format, EXIT_OK)
}

fn williamson_cmd(cli: &Cli, args: &FileArg) -> Result<Outcome> {
    let file = CovarianceFile::read(&args.file)?;
    let m = file.dense()?;
    let w = williamson(&m)?;
    let mut r = Report::new("williamson");
    r.int("n_modes", file.n_modes as u64)
        .put("symplectic_eigenvalues", floats(&w.sympl_eigs))
        .put("sigma", matrix(w.sigma.matrix()))
        .num("reconstruction_error", (w.reconstruct() - &m).amax())
        .num(
            "symplectic_residual",
            symplectic_residual(w.sigma.matrix())?,
        );
    render(&r, cli.format, EXIT_OK)
}
