use std::io::Write;

use littlewood_core::experiment::{timestamp_now, write_records_jsonl, ARTIFACT_VERSION, RECORD_SCHEMA_VERSION};
use littlewood_core::number::STATISTIC_START;
use littlewood_core::{
    batch_liminf, certify_cover_with, compare_deterministic, condition_trace, coverage_sweep_with,
    epsilon_feasible, eqfast_check, liminf_trajectory, region_area_exact, region_area_mc,
    CertifyOptions, Error, GridSpec, PointSpec, Region, Result, RunConfig, RunRecord, SweepOptions,
    Target, Verdict,
};
use serde_json::json;

use crate::output::{open, write_json, Echo, Format};
use crate::{
    AreaArgs, BatchArgs, Cli, Command, ConditionArgs, CoverArgs, Global, LiminfArgs, Outcome,
    TargetArg,
};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Area(a) => area(g, a),
        Command::Cover(c) => cover(g, c),
        Command::Liminf(l) => liminf(g, l),
        Command::Batch(b) => batch(g, b),
        Command::Condition(c) => condition(g, c),
    }
}

fn echo(g: &Global, command: &str) -> Echo {
    let mut e = Echo::new(command);
    e.set("seed", g.seed)
        .set("shifts", if g.debug_zero_shifts { "zero (debug, not random)" } else { "seeded" })
        .set("budget", g.budget)
        .set("precision", g.precision);
    e
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e)
}

fn area(g: &Global, a: &AreaArgs) -> Result<Outcome> {
    a.psi.validate()?;
    littlewood_core::error::check_budget(a.samples as u128, g.budget as u128)?;
    let region = Region::full(a.n, &g.shifts(), &a.psi)?;
    let psi_n = a.psi.eval(a.n);
    let exact = region_area_exact(psi_n.min(0.25))?;
    let est = region_area_mc(&region, a.samples, g.seed)?;
    let z = est.z_score(exact);
    let mut e = echo(g, "area");
    e.set("psi", a.psi.to_string()).set("n", a.n).set("samples", a.samples);
    let result = json!({
        "n": a.n,
        "psi_n": psi_n,
        "formula": exact,
        "mc_mean": est.mean,
        "mc_std_error": est.std_error,
        "z": z,
    });
    let mut out = open(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            e.write_comments(&mut out)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["n", "psi_n", "formula", "mc_mean", "mc_std_error", "z"]).map_err(csv_err)?;
            w.write_record([
                a.n.to_string(),
                format!("{psi_n:e}"),
                exact.to_string(),
                est.mean.to_string(),
                format!("{:e}", est.std_error),
                format!("{z:.4}"),
            ])
            .map_err(csv_err)?;
            w.flush()?;
        }
        f => write_json(&mut out, &e, &result, f)?,
    }
    out.flush()?;
    eprintln!("area: formula {exact}, Monte Carlo {} +/- {:e} ({z:.2} standard errors)", est.mean, est.std_error);
    Ok(Outcome::Done)
}

fn parse_grid(s: &str, offset: f64) -> Result<GridSpec> {
    let grid = if let Some(h) = s.strip_prefix("spacing:") {
        let h: f64 = h.parse().map_err(|_| Error::Parse(format!("bad grid spacing {h:?}")))?;
        GridSpec::spacing(h)
    } else {
        let q = littlewood_core::experiment::parse_count(s)
            .ok_or_else(|| Error::Parse(format!("bad grid {s:?} (expected Q or spacing:H)")))?;
        GridSpec::resolution(q)
    };
    let grid = grid.with_offset(offset);
    grid.validate()?;
    Ok(grid)
}

fn cover(g: &Global, c: &CoverArgs) -> Result<Outcome> {
    let shifts = g.shifts();
    let mut e = echo(g, "cover");
    e.set("N", c.n).set("psi", c.psi.to_string()).set("from", c.from).set("offset", c.offset);
    let mut out = open(g.out.as_deref())?;
    if c.certify {
        let opts = CertifyOptions {
            margin: c.margin,
            min_index: c.from,
            budget: g.budget as u128,
            offset: c.offset,
            ..Default::default()
        };
        e.set("mode", "certify").set("margin", c.margin);
        let cert = certify_cover_with(c.n, &shifts, &c.psi, &opts)?;
        match g.format {
            Format::Csv => {
                e.write_comments(&mut out)?;
                for line in cert.to_text().lines() {
                    writeln!(out, "# {line}")?;
                }
                writeln!(out, "verdict,witness_alpha,witness_beta")?;
                match cert.verdict {
                    Verdict::Certified => writeln!(out, "certified,,")?,
                    Verdict::Failed { witness } => writeln!(out, "failed,{},{}", witness.0, witness.1)?,
                }
            }
            f => write_json(&mut out, &e, &cert, f)?,
        }
        out.flush()?;
        match cert.verdict {
            Verdict::Certified => eprintln!("cover: CERTIFIED at N = {} ({} grid points)", cert.n_max, cert.grid_points),
            Verdict::Failed { witness } => {
                eprintln!("cover: FAILED, witness ({}, {}) lies outside every shrunk region", witness.0, witness.1)
            }
        }
        return Ok(if cert.is_certified() { Outcome::Done } else { Outcome::Negative });
    }

    let grid = parse_grid(&c.grid, c.offset)?;
    let target = match c.target {
        TargetArg::Full => Target::Full,
        TargetArg::Shrunk => Target::Shrunk,
    };
    e.set("mode", "sweep").set("grid", grid).set("target", target);
    let opts = SweepOptions { min_index: c.from, budget: g.budget as u128, ..Default::default() };
    let r = coverage_sweep_with(c.n, &shifts, &c.psi, &grid, target, &opts)?;
    match g.format {
        Format::Csv => {
            e.set("total_points", r.total_points)
                .set("covered", r.covered_count)
                .set("uncovered", r.uncovered_count);
            e.write_comments(&mut out)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["i", "j", "alpha", "beta", "nearest_m", "product", "threshold"]).map_err(csv_err)?;
            for wt in &r.witnesses {
                let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
                w.write_record([
                    wt.grid_index.0.to_string(),
                    wt.grid_index.1.to_string(),
                    wt.point.0.to_string(),
                    wt.point.1.to_string(),
                    wt.nearest_m.map(|m| m.to_string()).unwrap_or_default(),
                    opt(wt.product),
                    opt(wt.threshold),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        f => write_json(&mut out, &e, &r, f)?,
    }
    out.flush()?;
    eprintln!("cover: {} of {} grid points uncovered", r.uncovered_count, r.total_points);
    Ok(if r.uncovered_count == 0 { Outcome::Done } else { Outcome::Negative })
}

fn liminf(g: &Global, l: &LiminfArgs) -> Result<Outcome> {
    let spec_text = match (&l.named, &l.alpha, &l.beta) {
        (Some(n), _, _) => n.clone(),
        (None, Some(a), Some(b)) => format!("{a},{b}"),
        _ => return Err(Error::Parse("give --alpha and --beta, or --named".into())),
    };
    let spec: PointSpec = spec_text.parse()?;
    if matches!(spec, PointSpec::Random { .. }) {
        return Err(Error::Parse("liminf takes a single point; use batch for random sets".into()));
    }
    let point = spec.resolve()?.remove(0);
    let stride = l.stride.unwrap_or_else(|| (l.n / 1000).max(1));
    let shifts = g.shifts();
    let budget = g.budget as u128;
    let mut e = echo(g, "liminf");
    e.set("point", &point.label)
        .set("alpha", point.alpha)
        .set("beta", point.beta)
        .set("N", l.n)
        .set("stride", stride)
        .set("statistic_start", STATISTIC_START);
    let mut out = open(g.out.as_deref())?;

    if l.compare_deterministic {
        let t = compare_deterministic(&point, &shifts, l.n, stride, g.precision, budget)?;
        match g.format {
            Format::Csv => {
                e.set("min_randomized", t.min_randomized)
                    .set("min_deterministic", t.min_deterministic)
                    .set("min_gallagher", t.min_gallagher);
                e.write_comments(&mut out)?;
                t.write_csv(&mut out)?;
            }
            f => write_json(&mut out, &e, &t, f)?,
        }
        out.flush()?;
        eprintln!(
            "liminf: randomized min {:e} at n = {}, unshifted min {:e} at n = {}",
            t.min_randomized.value, t.min_randomized.argmin_n, t.min_deterministic.value, t.min_deterministic.argmin_n
        );
        return Ok(Outcome::Done);
    }

    let started = timestamp_now();
    let t = liminf_trajectory(&point, &shifts, l.n, stride, g.precision, budget)?;
    let s = &t.summary;
    match g.format {
        Format::Csv => {
            e.set("final_running_min", s.final_running_min)
                .set("argmin_n", s.argmin_n)
                .set("window_min", s.window_min)
                .set("window_start", s.window_start);
            e.write_comments(&mut out)?;
            t.write_csv(&mut out)?;
        }
        Format::Json => write_json(&mut out, &e, &t, Format::Json)?,
        Format::Jsonl => {
            let record = RunRecord {
                schema_version: RECORD_SCHEMA_VERSION,
                artifact_version: ARTIFACT_VERSION.to_string(),
                config: RunConfig {
                    psi: l.psi.clone(),
                    shifts,
                    n_max: l.n,
                    point: point.clone(),
                    statistic_start: STATISTIC_START,
                    precision: g.precision,
                },
                summary: s.clone(),
                started_at_unix: started,
                finished_at_unix: timestamp_now(),
            };
            write_records_jsonl(&mut out, &[record])?;
        }
    }
    out.flush()?;
    eprintln!("liminf: running min {:e} at n = {}, window min {:e}", s.final_running_min, s.argmin_n, s.window_min);
    Ok(Outcome::Done)
}

fn batch(g: &Global, b: &BatchArgs) -> Result<Outcome> {
    let points: PointSpec = b.points.parse()?;
    let budget = g.budget as u128;
    let report = if g.debug_zero_shifts {
        littlewood_core::experiment::batch_with_streams(
            &points,
            &[littlewood_core::ShiftStream::zero()],
            b.n,
            b.threshold,
            &b.psi,
            g.precision,
            budget,
        )?
    } else {
        batch_liminf(&points, &b.seeds.0, b.n, b.threshold, &b.psi, g.precision, budget)?
    };
    let mut e = echo(g, "batch");
    e.set("points", &b.points)
        .set("seeds", &b.seeds.0)
        .set("N", b.n)
        .set("threshold", b.threshold)
        .set("psi", b.psi.to_string());
    let mut out = open(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            e.set("cells", report.cells)
                .set("fraction_below", report.fraction_below)
                .set("quantiles", report.quantiles);
            if let Some(f) = report.fraction_improved_after(1000) {
                e.set("fraction_improved_after_1000", f);
            }
            e.write_comments(&mut out)?;
            report.write_csv(&mut out)?;
        }
        Format::Json => write_json(&mut out, &e, &report, Format::Json)?,
        Format::Jsonl => write_records_jsonl(&mut out, &report.records)?,
    }
    out.flush()?;
    eprintln!(
        "batch: {} cells, fraction with running min <= {} is {}, median {:e}",
        report.cells, b.threshold, report.fraction_below, report.quantiles.median
    );
    Ok(Outcome::Done)
}

fn condition(g: &Global, c: &ConditionArgs) -> Result<Outcome> {
    let mut out = open(g.out.as_deref())?;
    if c.feasible {
        let delta = c.delta.ok_or_else(|| Error::Parse("--feasible needs --delta".into()))?;
        let interval = epsilon_feasible(delta)?;
        let mut e = Echo::new("condition --feasible");
        e.set("delta", delta);
        match g.format {
            Format::Csv => {
                e.write_comments(&mut out)?;
                writeln!(out, "{interval}")?;
            }
            f => write_json(&mut out, &e, &interval, f)?,
        }
        out.flush()?;
        return Ok(Outcome::Done);
    }
    let (Some(psi), Some(eps), Some(n_max)) = (&c.psi, c.epsilon, c.n_max) else {
        return Err(Error::Parse("condition needs --psi, --epsilon and --Nmax".into()));
    };
    littlewood_core::error::check_budget(n_max as u128, g.budget as u128)?;
    let trace = condition_trace(psi, eps, n_max)?;
    let eq = eqfast_check(&trace, psi);
    let records = trace.records().count();
    let slope = if n_max >= 20 { trace.log_slope(n_max / 10, n_max).ok() } else { None };
    let mut e = Echo::new("condition");
    e.set("psi", psi.to_string()).set("epsilon", eps).set("Nmax", n_max);
    match g.format {
        Format::Csv => {
            e.set("records", records).set("eqfast_largest_violation", eq.largest_violation);
            if let Some(s) = slope {
                e.set("log_u_slope_last_decade", s);
            }
            e.write_comments(&mut out)?;
            trace.write_csv(&mut out)?;
        }
        f => {
            let result = json!({ "trace": trace, "eqfast": eq, "log_u_slope_last_decade": slope });
            write_json(&mut out, &e, &result, f)?;
        }
    }
    out.flush()?;
    match slope {
        Some(s) => eprintln!("condition: {records} records; ln u_n slope over the last decade {s:.4} (a finite trace is only consistent with divergence, never a proof)"),
        None => eprintln!("condition: {records} records"),
    }
    Ok(Outcome::Done)
}
