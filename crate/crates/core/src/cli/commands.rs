//! The five command entry points. Every command prints one JSON document
//! to stdout and, when an output directory is given, writes its artifacts
//! (meshes, reports, sampled-check CSV) there.

use crate::cli::checks::{
    connection_products, det_drift_sample, overlap_samples, period_residual,
    wronskian_samples, write_samples_csv, CheckRow, SampleRow, VerificationReport,
};
use crate::cli::config::{input_form, InputForm, Mode, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::{
    classify_triple, frame_angles, lines_from_config, signed_distance, FrameAngles,
    TripleConfig,
};
use crate::solver::{
    epsilon_sign, hat_lambda_values, normalize_lambda_mu, solve_pqr_for_ends, EndParams,
    PqrSolution,
};
use crate::specfun::{connection_matrices, ConnectionMatrices, ExponentSet};
use crate::surface::{
    fd_mean_curvature, fit_boundary_lines, generate_mesh, write_obj, write_ply, EndIndex,
    WeierstrassEvaluator,
};
use crate::trinoid::{
    closed_forms, double_mesh, fit_boundary_planes, growth_readoff, trinoid_diagnostics,
    trinoid_evaluator, trinoid_mesh, trinoid_pqr, trinoid_rhs, write_trinoid_obj,
    write_trinoid_ply, ClosedForms, ModelKind, TrinoidSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

/// Dispatch on the configured mode.
pub fn run(cfg: &RunConfig) -> Result<()> {
    match cfg.mode() {
        Mode::Classify => cmd_classify(cfg),
        Mode::Solve => cmd_solve(cfg),
        Mode::BuildSurface => cmd_build_surface(cfg),
        Mode::BuildTrinoid => cmd_build_trinoid(cfg),
        Mode::Verify => cmd_verify(cfg),
    }
}

fn emit(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn ensure_out(run: &RunConfig) -> Result<Option<PathBuf>> {
    match &run.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn end_name(end: EndIndex) -> &'static str {
    match end {
        EndIndex::Zero => "0",
        EndIndex::One => "1",
        EndIndex::Infinity => "inf",
    }
}

/// Measure a triple of lines and report its seven invariants.
pub fn cmd_classify(run: &RunConfig) -> Result<()> {
    let InputForm::Lines(lines) = input_form(run)? else {
        return Err(Error::invalid("classify needs a line triple as input"));
    };
    let cfg = classify_triple(&lines)?;
    let mut value = json!({ "config": cfg });
    if run.emit_lines.unwrap_or(false) {
        let rebuilt = lines_from_config(&cfg)?;
        value["lines"] = serde_json::to_value(rebuilt)?;
    }
    if let Some(dir) = ensure_out(run)? {
        write_json(&dir.join("config.json"), &value["config"])?;
        if run.emit_lines.unwrap_or(false) {
            write_json(&dir.join("lines.json"), &value["lines"])?;
        }
    }
    emit(&value)
}

/// Everything the period stage needs, resolved from any input form.
struct SolveContext {
    cfg: TripleConfig,
    ends: EndParams,
    frame: FrameAngles,
    exps: ExponentSet,
    conn: ConnectionMatrices,
    eps: i8,
    /// Present when the input was trinoid end data.
    trinoid: Option<(TrinoidSpec, ClosedForms)>,
}

fn context_from_config(run: &RunConfig, cfg: TripleConfig) -> Result<SolveContext> {
    let ends = match run.lifts {
        Some(l) => EndParams::with_lifts(&cfg, l)?,
        None => EndParams::from_config(&cfg)?,
    };
    let frame = frame_angles(&cfg)?;
    let exps = ExponentSet::new(ends.alpha, ends.beta, ends.gamma)?;
    let conn = connection_matrices(&exps)?;
    let eps = epsilon_sign(ends.eps0, ends.alpha, &conn)?;
    Ok(SolveContext { cfg, ends, frame, exps, conn, eps, trinoid: None })
}

fn solve_context(run: &RunConfig) -> Result<SolveContext> {
    match input_form(run)? {
        InputForm::Lines(lines) => context_from_config(run, classify_triple(&lines)?),
        InputForm::Config(cfg) => context_from_config(run, cfg),
        InputForm::Mu(spec) => {
            let te = trinoid_rhs(&spec)?;
            let cf = closed_forms(te.lifts[0], te.lifts[1], te.lifts[2])?;
            let frame = frame_angles(&te.cfg)?;
            let exps = ExponentSet::new(te.ends.alpha, te.ends.beta, te.ends.gamma)?;
            let conn = connection_matrices(&exps)?;
            Ok(SolveContext {
                cfg: te.cfg,
                ends: te.ends,
                frame,
                exps,
                conn,
                eps: te.eps,
                trinoid: Some((spec, cf)),
            })
        }
    }
}

/// True when s equals ±t componentwise within a solver-scale tolerance.
fn matches_mod_sign(s: &PqrSolution, t: [f64; 3]) -> bool {
    let a = [s.p, s.q, s.r];
    let scale = 1.0 + t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dev = |sign: f64| {
        (0..3)
            .map(|k| (a[k] - sign * t[k]).abs())
            .fold(0.0, f64::max)
    };
    dev(1.0).min(dev(-1.0)) <= 1e-9 * scale
}

/// Solve the period system for the configured input and report every real
/// solution (deduplicated modulo sign by the solver).
pub fn cmd_solve(run: &RunConfig) -> Result<()> {
    let ctx = solve_context(run)?;
    let sols = solve_pqr_for_ends(&ctx.ends, ctx.eps)?;
    if sols.is_empty() {
        return Err(Error::empty(format!(
            "the ε = {:+} period system has no real solution",
            ctx.eps
        )));
    }
    let (lambda, mu_scale) = normalize_lambda_mu(ctx.eps, ctx.ends.alpha, ctx.frame.t, &ctx.conn)?;
    let angles = [ctx.ends.alpha, ctx.ends.beta, ctx.ends.gamma];
    let rows: Vec<Value> = sols
        .iter()
        .map(|s| {
            let hat = hat_lambda_values(ctx.eps, angles, s.p, s.q, s.r);
            let mut tags: Vec<&str> = Vec::new();
            if let Some((_, cf)) = &ctx.trinoid {
                if cf.good_eps == ctx.eps && matches_mod_sign(s, cf.good) {
                    tags.push("trinoid_admissible");
                }
                if ctx.eps == -1 && cf.half.iter().any(|h| matches_mod_sign(s, *h)) {
                    tags.push("half_solution");
                }
            }
            json!({
                "p": s.p,
                "q": s.q,
                "r": s.r,
                "y": s.y,
                "branch": s.branch,
                "residual": s.residual,
                "hat_lambda": [hat.0, hat.1],
                "tags": tags,
            })
        })
        .collect();
    let value = json!({
        "eps": ctx.eps,
        "lambda": [lambda.re, lambda.im],
        "mu_scale": mu_scale,
        "count": rows.len(),
        "solutions": rows,
    });
    if let Some(dir) = ensure_out(run)? {
        write_json(&dir.join("solutions.json"), &value)?;
    }
    emit(&value)
}

/// Build the Euclidean minimal surface of a configuration: mesh files plus
/// a report with boundary-line fits, end fits and a curvature probe.
pub fn cmd_build_surface(run: &RunConfig) -> Result<()> {
    let ctx = solve_context(run)?;
    let sols = solve_pqr_for_ends(&ctx.ends, ctx.eps)?;
    if sols.is_empty() {
        return Err(Error::empty(format!(
            "the ε = {:+} period system has no real solution",
            ctx.eps
        )));
    }
    let idx = run.solution_index.unwrap_or(0);
    let ev = WeierstrassEvaluator::from_ends(ctx.ends, ctx.frame, idx, run.flip())?;
    let mesh = generate_mesh(&ev, run.resolution(), &run.window(), run.r_excl())?;
    let (blines, ratios) = fit_boundary_lines(&mesh)?;
    let measured = classify_triple(&blines).ok();
    let distances = [
        signed_distance(&blines[0], &blines[1])?,
        signed_distance(&blines[2], &blines[0])?,
        signed_distance(&blines[1], &blines[2])?,
    ];
    let curvature = fd_mean_curvature(&ev, &mesh)?;
    let targets = [ctx.cfg.dist_a, ctx.cfg.dist_c, ctx.cfg.dist_b];
    let mut end_fits = Vec::new();
    for (end, target) in [EndIndex::Zero, EndIndex::One, EndIndex::Infinity]
        .into_iter()
        .zip(targets)
    {
        let fit = ev.fit_end_asymptotics(end)?;
        end_fits.push(json!({
            "end": end_name(end),
            "fitted": fit.fitted,
            "target": target,
            "residual": fit.residual,
        }));
    }
    let value = json!({
        "resolution": run.resolution(),
        "h": mesh.h,
        "integration_error": mesh.integration_error,
        "vertices": mesh.vertices.len(),
        "faces": mesh.faces.len(),
        "collinearity_ratios": ratios,
        "signed_distances": distances,
        "config": ctx.cfg,
        "measured_config": measured,
        "end_fits": end_fits,
        "curvature": curvature,
    });
    if let Some(dir) = ensure_out(run)? {
        write_obj(&mesh, &dir.join("surface.obj"))?;
        write_ply(&mesh, &dir.join("surface.ply"))?;
        write_json(&dir.join("surface_report.json"), &value)?;
    }
    emit(&value)
}

/// Build the hyperbolic cousin of trinoid end data: half-space and ball
/// meshes plus the diagnostics document.
pub fn cmd_build_trinoid(run: &RunConfig) -> Result<()> {
    let InputForm::Mu(spec) = input_form(run)? else {
        return Err(Error::invalid("build-trinoid needs mu input"));
    };
    let ev = trinoid_evaluator(&spec, run.flip())?;
    let mesh = trinoid_mesh(&ev, run.resolution(), &run.window(), run.r_excl())?;
    let diag = trinoid_diagnostics(&spec, &ev, &mesh)?;
    let fits = fit_boundary_planes(&mesh)?;
    let doubled = diag.plane_coincidence < run.tolerances().plane;
    let export = if doubled {
        double_mesh(&mesh, &fits[0].kind)
    } else {
        mesh.clone()
    };
    let mut files: Vec<String> = Vec::new();
    if let Some(dir) = ensure_out(run)? {
        for (name, model) in [
            ("trinoid.halfspace.obj", ModelKind::HalfSpace),
            ("trinoid.ball.obj", ModelKind::Ball),
        ] {
            write_trinoid_obj(&export, model, &dir.join(name))?;
            files.push(name.to_string());
        }
        for (name, model) in [
            ("trinoid.halfspace.ply", ModelKind::HalfSpace),
            ("trinoid.ball.ply", ModelKind::Ball),
        ] {
            write_trinoid_ply(&export, model, &dir.join(name))?;
            files.push(name.to_string());
        }
        write_json(
            &dir.join("trinoid_diagnostics.json"),
            &serde_json::to_value(&diag)?,
        )?;
        files.push("trinoid_diagnostics.json".to_string());
    }
    let value = json!({
        "diagnostics": diag,
        "planes": fits,
        "doubled": doubled,
        "vertices": export.vertices.len(),
        "faces": export.faces.len(),
        "files": files,
    });
    emit(&value)
}

/// Run the invariant suite for the configured input and emit a
/// [`VerificationReport`]; any failing check makes the process exit with
/// the numerical-failure code.
pub fn cmd_verify(run: &RunConfig) -> Result<()> {
    let ctx = solve_context(run)?;
    let tol = run.tolerances();
    let seed = run.seed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<SampleRow> = Vec::new();
    let mut checks: Vec<CheckRow> = Vec::new();

    let (w_max, rows) = wronskian_samples(&ctx.exps, &ctx.conn, 150, &mut rng)?;
    samples.extend(rows);
    checks.push(CheckRow::error("wronskian_identity", w_max, tol.wronskian));

    let (plain, hat) = connection_products(&ctx.conn, ctx.frame.t, ctx.frame.t_hat);
    checks.push(CheckRow::error("connection_product", plain, tol.connection));
    checks.push(CheckRow::error("connection_product_hat", hat, tol.connection));

    let (o_max, rows) = overlap_samples(&ctx.exps, &ctx.conn)?;
    samples.extend(rows);
    checks.push(CheckRow::error("continuation_overlap", o_max, tol.overlap));

    // The period triple under test: an explicit override (fault injection),
    // the closed-form trinoid solution, or the best solver output.
    let angles = [ctx.ends.alpha, ctx.ends.beta, ctx.ends.gamma];
    let pqr = match (run.pqr, &ctx.trinoid) {
        (Some(p), _) => p,
        (None, Some((spec, _))) => {
            let ts = trinoid_pqr(spec)?;
            [ts.solution.p, ts.solution.q, ts.solution.r]
        }
        (None, None) => {
            let sols = solve_pqr_for_ends(&ctx.ends, ctx.eps)?;
            let best = sols.iter().min_by(|a, b| {
                period_residual(&ctx.ends, ctx.eps, [a.p, a.q, a.r])
                    .partial_cmp(&period_residual(&ctx.ends, ctx.eps, [b.p, b.q, b.r]))
                    .unwrap()
            });
            match best {
                Some(s) => [s.p, s.q, s.r],
                None => {
                    return Err(Error::empty(
                        "no period solution to verify (and no pqr override given)",
                    ))
                }
            }
        }
    };
    checks.push(CheckRow::error(
        "period_residual",
        period_residual(&ctx.ends, ctx.eps, pqr),
        tol.residual,
    ));

    if let Some((spec, _)) = &ctx.trinoid {
        let hat = hat_lambda_values(ctx.eps, angles, pqr[0], pqr[1], pqr[2]);
        checks.push(CheckRow::error(
            "hat_lambda",
            hat.0.abs().max(hat.1.abs()),
            tol.hat_lambda,
        ));
        let ev = trinoid_evaluator(spec, run.flip())?;
        checks.push(CheckRow::error(
            "det_drift",
            det_drift_sample(&ev)?,
            tol.det_drift,
        ));
        let growths = spec.growths();
        let mut g_max = 0.0f64;
        for (k, end) in [EndIndex::Zero, EndIndex::One, EndIndex::Infinity]
            .into_iter()
            .enumerate()
        {
            g_max = g_max.max((growth_readoff(&ev, end)? - growths[k]).abs());
        }
        checks.push(CheckRow::error("growth_readoff", g_max, tol.growth));
    }

    let lines = lines_from_config(&ctx.cfg)?;
    let back = classify_triple(&lines)?;
    let c = &ctx.cfg;
    let mut rt = [
        (back.alpha0 - c.alpha0).abs(),
        (back.beta0 - c.beta0).abs(),
        (back.gamma0 - c.gamma0).abs(),
        (back.dist_a - c.dist_a).abs() / c.dist_a.abs(),
        (back.dist_b - c.dist_b).abs() / c.dist_b.abs(),
        (back.dist_c - c.dist_c).abs() / c.dist_c.abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    if back.eps0 != c.eps0 {
        rt = f64::INFINITY;
    }
    checks.push(CheckRow::error("geometry_round_trip", rt, tol.round_trip));

    let report = VerificationReport::new(seed, tol, checks);
    if let Some(dir) = ensure_out(run)? {
        write_json(&dir.join("verify_report.json"), &serde_json::to_value(&report)?)?;
        write_samples_csv(&dir.join("verify_samples.csv"), &samples)?;
    }
    emit(&serde_json::to_value(&report)?)?;
    if !report.overall {
        return Err(Error::numerical(format!(
            "verification failed: {}",
            report.failed_names().join(", ")
        )));
    }
    Ok(())
}
