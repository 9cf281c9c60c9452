//! End-to-end liminf experiments: trajectories of the shifted statistic,
//! batches over random points and seeds, comparisons with the unshifted
//! statistics, and persistent run records.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, domain, Error, Result};
use crate::number::{n_log_n, shifted_norm_unchecked, StatisticPoint, STATISTIC_START};
use crate::precise::{ExactMultiple, ExactReal, FixedFrac};
use crate::psi::PsiSpec;
use crate::stream::{KeyedUniform, ShiftStream, DOMAIN_POINTS};

/// Version of the run-record file schema.
pub const RECORD_SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Double,
    /// 192-bit fixed-point norms; slow, for oracle runs.
    High,
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "high" => Ok(Precision::High),
            _ => Err(Error::Parse(format!("unknown precision {s:?} (expected double or high)"))),
        }
    }
}

/// Which (α, β) to run.
///
/// Textual forms: `0.3,0.7` (explicit), `golden,silver` or `1/3,2/7`
/// (named, evaluated symbolically), `random:COUNT` or `random:COUNT:SEED`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSpec {
    Explicit { alpha: f64, beta: f64 },
    Named { alpha: ExactReal, beta: ExactReal },
    Random { count: u64, seed: u64 },
}

/// A concrete point with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedPoint {
    pub label: String,
    pub alpha: f64,
    pub beta: f64,
    /// Symbolic coordinates, used by the high-precision path.
    pub exact: (ExactReal, ExactReal),
}

impl ResolvedPoint {
    pub fn explicit(alpha: f64, beta: f64) -> Result<Self> {
        let ea = ExactReal::Double { value: alpha };
        let eb = ExactReal::Double { value: beta };
        Ok(ResolvedPoint {
            label: format!("{alpha},{beta}"),
            alpha: ea.to_f64()?,
            beta: eb.to_f64()?,
            exact: (ea, eb),
        })
    }

    pub fn named(alpha: ExactReal, beta: ExactReal) -> Result<Self> {
        Ok(ResolvedPoint {
            label: format!("{alpha},{beta}"),
            alpha: alpha.to_f64()?,
            beta: beta.to_f64()?,
            exact: (alpha, beta),
        })
    }
}

impl PointSpec {
    pub fn resolve(&self) -> Result<Vec<ResolvedPoint>> {
        match *self {
            PointSpec::Explicit { alpha, beta } => Ok(vec![ResolvedPoint::explicit(alpha, beta)?]),
            PointSpec::Named { alpha, beta } => Ok(vec![ResolvedPoint::named(alpha, beta)?]),
            PointSpec::Random { count, seed } => {
                if count == 0 {
                    return domain("random point set must be nonempty");
                }
                let u = KeyedUniform::new(seed, DOMAIN_POINTS);
                (0..count)
                    .map(|i| {
                        let (a, b) = u.point(i);
                        let mut p = ResolvedPoint::explicit(a, b)?;
                        p.label = format!("random:{seed}#{i}");
                        Ok(p)
                    })
                    .collect()
            }
        }
    }
}

fn parse_exact(tok: &str) -> Option<ExactReal> {
    match tok {
        "golden" => Some(ExactReal::Golden),
        "silver" => Some(ExactReal::Silver),
        "cbrt2" => Some(ExactReal::Cbrt2),
        _ => {
            let (p, q) = tok.split_once('/')?;
            Some(ExactReal::Rational { p: p.trim().parse().ok()?, q: q.trim().parse().ok()? })
        }
    }
}

impl FromStr for PointSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad point spec {s:?}"));
        if let Some(rest) = s.strip_prefix("random:") {
            let mut it = rest.split(':');
            let count = it.next().and_then(parse_count).ok_or_else(bad)?;
            let seed = match it.next() {
                Some(t) => t.parse().map_err(|_| bad())?,
                None => 0,
            };
            if it.next().is_some() {
                return Err(bad());
            }
            return Ok(PointSpec::Random { count, seed });
        }
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let (a, b) = (a.trim(), b.trim());
        if let (Some(ea), Some(eb)) = (parse_exact(a), parse_exact(b)) {
            return Ok(PointSpec::Named { alpha: ea, beta: eb });
        }
        let alpha: f64 = a.parse().map_err(|_| bad())?;
        let beta: f64 = b.parse().map_err(|_| bad())?;
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(bad());
        }
        Ok(PointSpec::Explicit { alpha, beta })
    }
}

/// Parses a nonnegative integer, also accepting exact scientific notation
/// such as `1e6`.
pub fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let f: f64 = s.parse().ok()?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Some(f as u64)
    } else {
        None
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::Explicit { alpha, beta } => write!(f, "{alpha},{beta}"),
            PointSpec::Named { alpha, beta } => write!(f, "{alpha},{beta}"),
            PointSpec::Random { count, seed } => write!(f, "random:{count}:{seed}"),
        }
    }
}

/// Evaluates the two shifted norms ‖nα − γ_n‖, ‖nβ − δ_n‖ at each n.
enum NormEval {
    Double { alpha: f64, beta: f64 },
    High { alpha: ExactMultiple, beta: ExactMultiple },
}

impl NormEval {
    fn new(point: &ResolvedPoint, precision: Precision) -> Result<Self> {
        Ok(match precision {
            Precision::Double => NormEval::Double { alpha: point.alpha, beta: point.beta },
            Precision::High => NormEval::High {
                alpha: ExactMultiple::new(&point.exact.0)?,
                beta: ExactMultiple::new(&point.exact.1)?,
            },
        })
    }

    #[inline]
    fn norms(&self, n: u64, shifts: (f64, f64)) -> (f64, f64) {
        match self {
            NormEval::Double { alpha, beta } => (
                shifted_norm_unchecked(n, *alpha, shifts.0),
                shifted_norm_unchecked(n, *beta, shifts.1),
            ),
            NormEval::High { alpha, beta } => {
                // Shifts come from [0, 1) doubles, so conversion cannot fail.
                let g = FixedFrac::from_f64(shifts.0).expect("finite shift");
                let d = FixedFrac::from_f64(shifts.1).expect("finite shift");
                (alpha.shifted_norm(n, &g), beta.shifted_norm(n, &d))
            }
        }
    }
}

/// Visits s_n for n = 2..=n_max.
fn scan_statistic<F: FnMut(u64, f64)>(
    point: &ResolvedPoint,
    shifts: &ShiftStream,
    n_max: u64,
    precision: Precision,
    mut visit: F,
) -> Result<()> {
    let eval = NormEval::new(point, precision)?;
    let sampler = shifts.sampler();
    for n in STATISTIC_START..=n_max {
        let (a, b) = eval.norms(n, sampler.pair(n));
        visit(n, n_log_n(n) * a * b);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub running_min: f64,
}

/// Tail-oriented summary of one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub n_max: u64,
    /// min_{2 ≤ n ≤ N} s_n
    pub final_running_min: f64,
    pub argmin_n: u64,
    /// min over the window [⌈N/2⌉, N]
    pub window_min: f64,
    pub window_start: u64,
    /// Running minimum at n = 10, 100, 1000, ... ≤ N.
    pub decade_minima: Vec<Checkpoint>,
}

impl TrajectorySummary {
    /// Running minimum at a decade checkpoint, if recorded.
    pub fn running_min_at(&self, n: u64) -> Option<f64> {
        if n == self.n_max {
            return Some(self.final_running_min);
        }
        self.decade_minima.iter().find(|c| c.n == n).map(|c| c.running_min)
    }
}

struct SummaryBuilder {
    n_max: u64,
    window_start: u64,
    best: f64,
    argmin: u64,
    window_min: f64,
    next_decade: u64,
    decades: Vec<Checkpoint>,
}

impl SummaryBuilder {
    fn new(n_max: u64) -> Self {
        SummaryBuilder {
            n_max,
            window_start: n_max.div_ceil(2).max(STATISTIC_START),
            best: f64::INFINITY,
            argmin: STATISTIC_START,
            window_min: f64::INFINITY,
            next_decade: 10,
            decades: Vec::new(),
        }
    }

    #[inline]
    fn push(&mut self, n: u64, s: f64) -> f64 {
        if s < self.best {
            self.best = s;
            self.argmin = n;
        }
        if n >= self.window_start && s < self.window_min {
            self.window_min = s;
        }
        if n == self.next_decade {
            self.decades.push(Checkpoint { n, running_min: self.best });
            self.next_decade = self.next_decade.saturating_mul(10);
        }
        self.best
    }

    fn finish(self) -> TrajectorySummary {
        TrajectorySummary {
            n_max: self.n_max,
            final_running_min: self.best,
            argmin_n: self.argmin,
            window_min: self.window_min,
            window_start: self.window_start,
            decade_minima: self.decades,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub stride: u64,
    pub points: Vec<StatisticPoint>,
    pub summary: TrajectorySummary,
}

impl Trajectory {
    /// CSV with header `n,s_n,running_min`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "s_n", "running_min"])?;
        for p in &self.points {
            w.write_record([p.n.to_string(), format!("{:e}", p.value), format!("{:e}", p.running_min)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_n_max(n_max: u64) -> Result<()> {
    if n_max < STATISTIC_START {
        return domain(format!("trajectory needs N >= {STATISTIC_START}, got {n_max}"));
    }
    Ok(())
}

/// Scans every n in [2, N]; emits checkpoints at n = 2, 2 + stride, ... and
/// always at N.
pub fn liminf_trajectory(
    point: &ResolvedPoint,
    shifts: &ShiftStream,
    n_max: u64,
    stride: u64,
    precision: Precision,
    budget: u128,
) -> Result<Trajectory> {
    check_n_max(n_max)?;
    if stride < 1 {
        return domain("stride must be >= 1");
    }
    check_budget(n_max as u128, budget)?;
    let mut b = SummaryBuilder::new(n_max);
    let mut points = Vec::new();
    scan_statistic(point, shifts, n_max, precision, |n, s| {
        let running_min = b.push(n, s);
        if (n - STATISTIC_START).is_multiple_of(stride) || n == n_max {
            points.push(StatisticPoint { n, value: s, running_min });
        }
    })?;
    Ok(Trajectory { stride, points, summary: b.finish() })
}

/// The summary alone, without storing checkpoints.
pub fn summarize_trajectory(
    point: &ResolvedPoint,
    shifts: &ShiftStream,
    n_max: u64,
    precision: Precision,
) -> Result<TrajectorySummary> {
    check_n_max(n_max)?;
    let mut b = SummaryBuilder::new(n_max);
    scan_statistic(point, shifts, n_max, precision, |n, s| {
        b.push(n, s);
    })?;
    Ok(b.finish())
}

/// Everything needed to replay a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub psi: PsiSpec,
    pub shifts: ShiftStream,
    pub n_max: u64,
    pub point: ResolvedPoint,
    pub statistic_start: u64,
    pub precision: Precision,
}

impl RunConfig {
    pub fn replay(&self) -> Result<TrajectorySummary> {
        if self.statistic_start != STATISTIC_START {
            return domain(format!(
                "run record uses statistic start {}, this build uses {STATISTIC_START}",
                self.statistic_start
            ));
        }
        summarize_trajectory(&self.point, &self.shifts, self.n_max, self.precision)
    }
}

/// One line of a JSONL run-record file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub artifact_version: String,
    pub config: RunConfig,
    pub summary: TrajectorySummary,
    pub started_at_unix: u64,
    pub finished_at_unix: u64,
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set, for
/// reproducible output files.
pub fn timestamp_now() -> u64 {
    if let Some(v) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return v;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunRecord {
    pub fn run(config: RunConfig) -> Result<Self> {
        let started_at_unix = timestamp_now();
        let summary = config.replay()?;
        Ok(RunRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            artifact_version: ARTIFACT_VERSION.to_string(),
            config,
            summary,
            started_at_unix,
            finished_at_unix: timestamp_now(),
        })
    }
}

pub fn write_records_jsonl<W: Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records_jsonl<R: BufRead>(input: R) -> Result<Vec<RunRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RunRecord = serde_json::from_str(&line)?;
        if rec.schema_version != RECORD_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "run record schema version {} is not supported (expected {RECORD_SCHEMA_VERSION})",
                rec.schema_version
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear-interpolation quantiles of a nonempty sample.
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Quantiles { min: v[0], q25: q(0.25), median: q(0.5), q75: q(0.75), max: v[v.len() - 1] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub threshold: f64,
    pub n_max: u64,
    pub cells: u64,
    /// Fraction of (point, seed) cells with final running min ≤ threshold.
    pub fraction_below: f64,
    pub quantiles: Quantiles,
    /// Sorted by (point index, seed index).
    pub records: Vec<RunRecord>,
}

impl BatchReport {
    pub fn fraction_at(&self, threshold: f64) -> f64 {
        fraction_below(&self.records, threshold)
    }

    /// Fraction of cells whose running min at N is strictly below the one at
    /// checkpoint `n` (a decade).
    pub fn fraction_improved_after(&self, n: u64) -> Option<f64> {
        let mut hits = 0;
        for r in &self.records {
            let early = r.summary.running_min_at(n)?;
            if r.summary.final_running_min < early {
                hits += 1;
            }
        }
        Some(hits as f64 / self.records.len() as f64)
    }

    /// One row per cell; no timestamps, so output is reproducible.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["point", "alpha", "beta", "seed", "final_running_min", "argmin_n", "window_min", "window_start"])?;
        for r in &self.records {
            let s = &r.summary;
            w.write_record([
                r.config.point.label.clone(),
                format!("{:e}", r.config.point.alpha),
                format!("{:e}", r.config.point.beta),
                r.config.shifts.seed().map(|x| x.to_string()).unwrap_or_else(|| "zero".into()),
                format!("{:e}", s.final_running_min),
                s.argmin_n.to_string(),
                format!("{:e}", s.window_min),
                s.window_start.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn fraction_below(records: &[RunRecord], threshold: f64) -> f64 {
    let hits = records.iter().filter(|r| r.summary.final_running_min <= threshold).count();
    hits as f64 / records.len() as f64
}

/// Runs every (point, seed) cell. The statistic does not involve ψ; `psi` is
/// recorded for provenance only.
#[allow(clippy::too_many_arguments)]
pub fn batch_liminf(
    points: &PointSpec,
    seeds: &[u64],
    n_max: u64,
    threshold: f64,
    psi: &PsiSpec,
    precision: Precision,
    budget: u128,
) -> Result<BatchReport> {
    let stream = |seed| ShiftStream::new(seed);
    batch_with_streams(points, &seeds.iter().map(|&s| stream(s)).collect::<Vec<_>>(), n_max, threshold, psi, precision, budget)
}

/// As [`batch_liminf`], with explicit shift streams.
pub fn batch_with_streams(
    points: &PointSpec,
    streams: &[ShiftStream],
    n_max: u64,
    threshold: f64,
    psi: &PsiSpec,
    precision: Precision,
    budget: u128,
) -> Result<BatchReport> {
    check_n_max(n_max)?;
    if streams.is_empty() {
        return domain("batch needs at least one seed");
    }
    if threshold.is_nan() {
        return domain("threshold is NaN");
    }
    let resolved = points.resolve()?;
    let cells = (resolved.len() * streams.len()) as u64;
    check_budget(cells as u128 * n_max as u128, budget)?;

    let configs: Vec<RunConfig> = resolved
        .iter()
        .flat_map(|p| {
            streams.iter().map(move |s| RunConfig {
                psi: psi.clone(),
                shifts: *s,
                n_max,
                point: p.clone(),
                statistic_start: STATISTIC_START,
                precision,
            })
        })
        .collect();
    let records = configs
        .into_par_iter()
        .with_max_len(1)
        .map(RunRecord::run)
        .collect::<Result<Vec<_>>>()?;
    let finals: Vec<f64> = records.iter().map(|r| r.summary.final_running_min).collect();
    Ok(BatchReport {
        threshold,
        n_max,
        cells,
        fraction_below: fraction_below(&records, threshold),
        quantiles: Quantiles::of(&finals),
        records,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u64,
    /// n ln n ‖nα − γ_n‖‖nβ − δ_n‖
    pub randomized: f64,
    /// n ln n ‖nα‖‖nβ‖
    pub deterministic: f64,
    /// n ln² n ‖nα‖‖nβ‖
    pub gallagher: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnMin {
    pub value: f64,
    pub argmin_n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub n_max: u64,
    pub shifts: ShiftStream,
    pub rows: Vec<ComparisonRow>,
    pub min_randomized: ColumnMin,
    pub min_deterministic: ColumnMin,
    pub min_gallagher: ColumnMin,
}

impl ComparisonTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "randomized", "deterministic", "gallagher"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                format!("{:e}", r.randomized),
                format!("{:e}", r.deterministic),
                format!("{:e}", r.gallagher),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn update_min(m: &mut ColumnMin, n: u64, v: f64) {
    if v < m.value {
        *m = ColumnMin { value: v, argmin_n: n };
    }
}

/// Randomized and unshifted statistics side by side; minima are taken over
/// every n in [2, N], rows are emitted at stride checkpoints and at N.
pub fn compare_deterministic(
    point: &ResolvedPoint,
    shifts: &ShiftStream,
    n_max: u64,
    stride: u64,
    precision: Precision,
    budget: u128,
) -> Result<ComparisonTable> {
    check_n_max(n_max)?;
    if stride < 1 {
        return domain("stride must be >= 1");
    }
    check_budget(2 * n_max as u128, budget)?;
    let eval = NormEval::new(point, precision)?;
    let sampler = shifts.sampler();
    let empty = ColumnMin { value: f64::INFINITY, argmin_n: STATISTIC_START };
    let (mut mr, mut md, mut mg) = (empty, empty, empty);
    let mut rows = Vec::new();
    for n in STATISTIC_START..=n_max {
        let w = n_log_n(n);
        let (a, b) = eval.norms(n, sampler.pair(n));
        let (c, d) = eval.norms(n, (0.0, 0.0));
        let randomized = w * a * b;
        let deterministic = w * c * d;
        let gallagher = deterministic * (n as f64).ln();
        update_min(&mut mr, n, randomized);
        update_min(&mut md, n, deterministic);
        update_min(&mut mg, n, gallagher);
        if (n - STATISTIC_START).is_multiple_of(stride) || n == n_max {
            rows.push(ComparisonRow { n, randomized, deterministic, gallagher });
        }
    }
    Ok(ComparisonTable {
        n_max,
        shifts: *shifts,
        rows,
        min_randomized: mr,
        min_deterministic: md,
        min_gallagher: mg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::DEFAULT_BUDGET;
    use crate::number::littlewood_statistic;

    #[test]
    fn point_spec_parsing() {
        assert_eq!("0.5,0.25".parse::<PointSpec>().unwrap(), PointSpec::Explicit { alpha: 0.5, beta: 0.25 });
        assert_eq!(
            "golden,silver".parse::<PointSpec>().unwrap(),
            PointSpec::Named { alpha: ExactReal::Golden, beta: ExactReal::Silver }
        );
        assert_eq!(
            "1/3,cbrt2".parse::<PointSpec>().unwrap(),
            PointSpec::Named { alpha: ExactReal::Rational { p: 1, q: 3 }, beta: ExactReal::Cbrt2 }
        );
        assert_eq!("random:1e2".parse::<PointSpec>().unwrap(), PointSpec::Random { count: 100, seed: 0 });
        assert_eq!("random:5:9".parse::<PointSpec>().unwrap(), PointSpec::Random { count: 5, seed: 9 });
        assert!("random:x".parse::<PointSpec>().is_err());
        assert!("0.5".parse::<PointSpec>().is_err());
        assert!("golden,nan".parse::<PointSpec>().is_err());
    }

    #[test]
    fn resolved_coordinates_in_unit_interval() {
        let pts = PointSpec::Random { count: 500, seed: 4 }.resolve().unwrap();
        assert_eq!(pts.len(), 500);
        for p in &pts {
            assert!((0.0..1.0).contains(&p.alpha) && (0.0..1.0).contains(&p.beta));
        }
        let p = &PointSpec::Explicit { alpha: 2.75, beta: -0.25 }.resolve().unwrap()[0];
        assert_eq!((p.alpha, p.beta), (0.75, 0.75));
    }

    #[test]
    fn rational_point_with_zero_shifts_hits_zero_at_q() {
        let p = ResolvedPoint::named(ExactReal::Rational { p: 2, q: 5 }, ExactReal::Rational { p: 1, q: 5 }).unwrap();
        for precision in [Precision::Double, Precision::High] {
            let t = liminf_trajectory(&p, &ShiftStream::zero(), 100, 1, precision, DEFAULT_BUDGET).unwrap();
            let at5 = t.points.iter().find(|x| x.n == 5).unwrap();
            assert!(at5.running_min < 1e-12);
            assert!(t.points.iter().filter(|x| x.n < 5).all(|x| x.running_min > 0.1));
        }
    }

    #[test]
    fn half_half_min_at_two() {
        let p = ResolvedPoint::explicit(0.5, 0.5).unwrap();
        let t = liminf_trajectory(&p, &ShiftStream::zero(), 100, 1, Precision::Double, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.summary.final_running_min, 0.0);
        assert_eq!(t.summary.argmin_n, 2);
    }

    #[test]
    fn trajectory_matches_direct_statistic() {
        let p = ResolvedPoint::named(ExactReal::Golden, ExactReal::Silver).unwrap();
        let s = ShiftStream::new(11);
        let t = liminf_trajectory(&p, &s, 5000, 7, Precision::Double, DEFAULT_BUDGET).unwrap();
        for pt in &t.points {
            let direct = littlewood_statistic(pt.n, p.alpha, p.beta, s.pair(pt.n)).unwrap();
            assert_eq!(pt.value, direct);
        }
        assert_eq!(t.points.last().unwrap().n, 5000);
        for w in t.points.windows(2) {
            assert!(w[1].running_min <= w[0].running_min);
        }
    }

    #[test]
    fn high_precision_agrees_with_double() {
        let p = ResolvedPoint::named(ExactReal::Golden, ExactReal::Cbrt2).unwrap();
        let s = ShiftStream::new(2);
        let a = liminf_trajectory(&p, &s, 3000, 1, Precision::Double, DEFAULT_BUDGET).unwrap();
        let b = liminf_trajectory(&p, &s, 3000, 1, Precision::High, DEFAULT_BUDGET).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert!((x.value - y.value).abs() < 1e-9 * x.n as f64, "n = {}", x.n);
        }
    }

    #[test]
    fn budget_and_domain_errors() {
        let p = ResolvedPoint::explicit(0.1, 0.2).unwrap();
        let s = ShiftStream::new(0);
        assert!(matches!(liminf_trajectory(&p, &s, 1, 1, Precision::Double, 10), Err(Error::Domain(_))));
        assert!(matches!(liminf_trajectory(&p, &s, 100, 0, Precision::Double, 1000), Err(Error::Domain(_))));
        assert!(matches!(liminf_trajectory(&p, &s, 100, 1, Precision::Double, 10), Err(Error::Budget { .. })));
    }

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!((q.min, q.q25, q.median, q.q75, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let q = Quantiles::of(&[1.0, 2.0]);
        assert_eq!(q.median, 1.5);
    }

    #[test]
    fn comparison_columns() {
        let p = ResolvedPoint::named(ExactReal::Rational { p: 1, q: 4 }, ExactReal::Rational { p: 3, q: 8 }).unwrap();
        let t = compare_deterministic(&p, &ShiftStream::new(1), 200, 1, Precision::High, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.min_deterministic.value, 0.0);
        assert_eq!(t.min_deterministic.argmin_n, 4);
        for r in t.rows.iter().filter(|r| r.n >= 3) {
            assert!(r.gallagher >= r.deterministic);
        }
    }
}
