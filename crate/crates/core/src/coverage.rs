//! Grid sweeps testing whether `∪ A_m` (or `∪ B_m^(N)`) covers the unit
//! square, and the cover certificate built on the separation radius.
//!
//! Rows of the grid are split into a fixed number of chunks that depends
//! only on the grid size, processed in parallel and merged in row order, so
//! reports are bit-identical for any thread count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, domain, Result};
use crate::number::nearest_int_dist;
use crate::psi::PsiSpec;
use crate::region::{separation_radius, shrink_offset};
use crate::stream::ShiftStream;

/// Default cap on point-region membership tests per request.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;
/// Absolute slack on the product inequality used by certificates.
pub const CERTIFICATE_SLACK: f64 = 1e-12;
/// Relative margin by which certificate spacing undercuts the radius bound.
pub const CERTIFICATE_MARGIN: f64 = 0.01;
/// Default number of uncovered witnesses retained by a sweep.
pub const DEFAULT_WITNESS_CAP: usize = 16;

/// The sample lattice of a sweep.
///
/// `Resolution { q }` is the lattice `((a + η)/q, (b + η)/q)`, `a, b < q`.
/// `Spacing { h }` uses the same construction with `q = ⌈1/h⌉`, i.e. pitch
/// `1/q ≤ h`, so that the lattice closes up on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GridSpec {
    Resolution { q: u64, offset: f64 },
    Spacing { h: f64, offset: f64 },
}

impl GridSpec {
    pub fn resolution(q: u64) -> Self {
        GridSpec::Resolution { q, offset: 0.0 }
    }

    pub fn spacing(h: f64) -> Self {
        GridSpec::Spacing { h, offset: 0.0 }
    }

    pub fn with_offset(self, eta: f64) -> Self {
        match self {
            GridSpec::Resolution { q, .. } => GridSpec::Resolution { q, offset: eta },
            GridSpec::Spacing { h, .. } => GridSpec::Spacing { h, offset: eta },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let offset = match *self {
            GridSpec::Resolution { q, offset } => {
                if q < 2 {
                    return domain(format!("grid resolution must be >= 2, got {q}"));
                }
                offset
            }
            GridSpec::Spacing { h, offset } => {
                if !(h.is_finite() && h > 0.0) {
                    return domain(format!("grid spacing must be > 0, got {h}"));
                }
                if (1.0 / h).ceil() > u32::MAX as f64 {
                    return domain(format!("grid spacing {h} is too fine"));
                }
                offset
            }
        };
        if !(0.0..1.0).contains(&offset) {
            return domain(format!("grid offset must lie in [0, 1), got {offset}"));
        }
        Ok(())
    }

    /// Points per axis.
    pub fn side(&self) -> u64 {
        match *self {
            GridSpec::Resolution { q, .. } => q,
            GridSpec::Spacing { h, .. } => ((1.0 / h).ceil() as u64).max(1),
        }
    }

    pub fn pitch(&self) -> f64 {
        1.0 / self.side() as f64
    }

    pub fn offset(&self) -> f64 {
        match *self {
            GridSpec::Resolution { offset, .. } | GridSpec::Spacing { offset, .. } => offset,
        }
    }

    pub fn point_count(&self) -> u128 {
        let s = self.side() as u128;
        s * s
    }

    #[inline]
    pub fn coord(&self, i: u64) -> f64 {
        (i as f64 + self.offset()) / self.side() as f64
    }

    #[inline]
    pub fn point(&self, i: u64, j: u64) -> (f64, f64) {
        (self.coord(i), self.coord(j))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// The regions `A_m`.
    Full,
    /// The regions `B_m^(N)`, N being the sweep's largest index.
    Shrunk,
}

/// Tunables of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Smallest region index included; the union runs over `m_min ≤ m ≤ N`.
    pub min_index: u64,
    pub budget: u128,
    pub witness_cap: usize,
    /// A point is covered by a region when product ≤ threshold − slack.
    pub slack: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            min_index: 1,
            budget: DEFAULT_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
            slack: 0.0,
        }
    }
}

/// An uncovered grid point and its nearest miss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: (f64, f64),
    pub grid_index: (u64, u64),
    /// Region with the smallest excess `product − threshold`, if any region
    /// is nonempty.
    pub nearest_m: Option<u64>,
    pub product: Option<f64>,
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n_max: u64,
    pub min_index: u64,
    pub shifts: ShiftStream,
    pub psi: PsiSpec,
    pub target: Target,
    pub grid: GridSpec,
    pub slack: f64,
    pub total_points: u64,
    pub covered_count: u64,
    pub uncovered_count: u64,
    /// Lexicographically smallest uncovered points.
    pub witnesses: Vec<Witness>,
    /// `first_cover[k]` counts points whose smallest covering index is
    /// `min_index + k`.
    pub first_cover: Vec<u64>,
}

impl CoverageReport {
    pub fn first_cover_of(&self, m: u64) -> u64 {
        if m < self.min_index {
            return 0;
        }
        self.first_cover
            .get((m - self.min_index) as usize)
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug)]
struct PreparedRegion {
    m: u64,
    slot: usize,
    gamma: f64,
    delta: f64,
    threshold: f64,
    /// threshold − slack
    limit: f64,
}

fn prepare_regions(
    n_max: u64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    target: Target,
    opts: &SweepOptions,
) -> Result<Vec<PreparedRegion>> {
    let offset = match target {
        Target::Full => 0.0,
        Target::Shrunk => shrink_offset(n_max)?,
    };
    let sampler = shifts.sampler();
    let mut out = Vec::new();
    for m in opts.min_index..=n_max {
        let raw = psi.eval(m) - offset;
        let empty = match target {
            Target::Full => false,
            Target::Shrunk => raw <= 0.0,
        };
        if empty {
            continue;
        }
        let threshold = raw.max(0.0);
        let (gamma, delta) = sampler.pair(m);
        out.push(PreparedRegion {
            m,
            slot: (m - opts.min_index) as usize,
            gamma,
            delta,
            threshold,
            limit: threshold - opts.slack,
        });
    }
    Ok(out)
}

struct ChunkResult {
    covered: u64,
    uncovered: u64,
    witnesses: Vec<(u64, u64)>,
    first_cover: Vec<u64>,
}

/// Classifies every grid point by membership in `∪_{m_min ≤ m ≤ N}` of the
/// target regions, stopping at the first covering `m` (ascending).
pub fn coverage_sweep(
    n_max: u64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    grid: &GridSpec,
    target: Target,
) -> Result<CoverageReport> {
    coverage_sweep_with(n_max, shifts, psi, grid, target, &SweepOptions::default())
}

pub fn coverage_sweep_with(
    n_max: u64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    grid: &GridSpec,
    target: Target,
    opts: &SweepOptions,
) -> Result<CoverageReport> {
    if n_max < 1 {
        return domain("coverage sweep needs N >= 1");
    }
    if opts.min_index < 1 || opts.min_index > n_max {
        return domain(format!(
            "smallest region index must lie in [1, N], got {} with N = {n_max}",
            opts.min_index
        ));
    }
    if target == Target::Shrunk && n_max < 2 {
        return domain("shrunk regions need N >= 2");
    }
    grid.validate()?;
    psi.validate()?;

    let regions = prepare_regions(n_max, shifts, psi, target, opts)?;
    let side = grid.side();
    let needed = grid.point_count() * (regions.len().max(1) as u128);
    check_budget(needed, opts.budget)?;

    let slots = (n_max - opts.min_index + 1) as usize;
    let chunk_rows = (side / 256).max(1);
    let n_chunks = side.div_ceil(chunk_rows);
    let cap = opts.witness_cap;

    let chunks: Vec<ChunkResult> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut res = ChunkResult {
                covered: 0,
                uncovered: 0,
                witnesses: Vec::new(),
                first_cover: vec![0; slots],
            };
            let mut row_norms = vec![0.0f64; regions.len()];
            let rows = (c * chunk_rows)..((c + 1) * chunk_rows).min(side);
            for i in rows {
                let alpha = grid.coord(i);
                for (s, r) in row_norms.iter_mut().zip(&regions) {
                    *s = nearest_int_dist(r.m as f64 * alpha - r.gamma);
                }
                for j in 0..side {
                    let beta = grid.coord(j);
                    let hit = regions.iter().zip(&row_norms).find(|(r, &s)| {
                        s * nearest_int_dist(r.m as f64 * beta - r.delta) <= r.limit
                    });
                    match hit {
                        Some((r, _)) => {
                            res.covered += 1;
                            res.first_cover[r.slot] += 1;
                        }
                        None => {
                            res.uncovered += 1;
                            if res.witnesses.len() < cap {
                                res.witnesses.push((i, j));
                            }
                        }
                    }
                }
            }
            res
        })
        .collect();

    let mut covered = 0;
    let mut uncovered = 0;
    let mut first_cover = vec![0u64; slots];
    let mut witness_idx = Vec::new();
    for ch in chunks {
        covered += ch.covered;
        uncovered += ch.uncovered;
        for (acc, v) in first_cover.iter_mut().zip(&ch.first_cover) {
            *acc += v;
        }
        for w in ch.witnesses {
            if witness_idx.len() < cap {
                witness_idx.push(w);
            }
        }
    }

    let witnesses = witness_idx
        .into_iter()
        .map(|(i, j)| nearest_miss(grid, i, j, &regions))
        .collect();

    Ok(CoverageReport {
        n_max,
        min_index: opts.min_index,
        shifts: *shifts,
        psi: psi.clone(),
        target,
        grid: *grid,
        slack: opts.slack,
        total_points: (side * side),
        covered_count: covered,
        uncovered_count: uncovered,
        witnesses,
        first_cover,
    })
}

fn nearest_miss(grid: &GridSpec, i: u64, j: u64, regions: &[PreparedRegion]) -> Witness {
    let point = grid.point(i, j);
    let best = regions
        .iter()
        .map(|r| {
            let p = nearest_int_dist(r.m as f64 * point.0 - r.gamma)
                * nearest_int_dist(r.m as f64 * point.1 - r.delta);
            (p - r.threshold, r, p)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0));
    Witness {
        point,
        grid_index: (i, j),
        nearest_m: best.map(|b| b.1.m),
        product: best.map(|b| b.2),
        threshold: best.map(|b| b.1.threshold),
    }
}

/// ⌊n^{2+ε/2}⌋, the resolution of the grid used in the covering argument.
pub fn proof_grid_resolution(n: u64, epsilon: f64) -> Result<u64> {
    if n < 2 {
        return domain(format!("proof grid needs n >= 2, got {n}"));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return domain(format!("proof grid needs epsilon > 0, got {epsilon}"));
    }
    let q = (n as f64).powf(2.0 + epsilon / 2.0).floor();
    if q > u32::MAX as f64 {
        return domain(format!("proof grid resolution {q} is too large"));
    }
    Ok(q as u64)
}

/// Sweeps the lattice `(a/Q, b/Q)`, `Q = ⌊n^{2+ε/2}⌋`, against
/// `B_1^(n), ..., B_n^(n)`. Every uncovered point is one of the "bad grid
/// point" events whose probability the covering argument bounds.
pub fn proof_grid_experiment(
    n: u64,
    epsilon: f64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
) -> Result<CoverageReport> {
    proof_grid_experiment_with(n, epsilon, shifts, psi, &SweepOptions::default())
}

pub fn proof_grid_experiment_with(
    n: u64,
    epsilon: f64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    opts: &SweepOptions,
) -> Result<CoverageReport> {
    let q = proof_grid_resolution(n, epsilon)?;
    check_budget((q as u128) * (q as u128) * n as u128, opts.budget)?;
    coverage_sweep_with(n, shifts, psi, &GridSpec::resolution(q), Target::Shrunk, opts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub margin: f64,
    pub min_index: u64,
    pub budget: u128,
    pub slack: f64,
    pub offset: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            margin: CERTIFICATE_MARGIN,
            min_index: 1,
            budget: DEFAULT_BUDGET,
            slack: CERTIFICATE_SLACK,
            offset: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed { witness: (f64, f64) },
}

/// Outcome of [`certify_cover`]. `Certified` means every point of the
/// torus lies in `∪_{m_min ≤ m ≤ N} A_m`, modulo floating-point membership
/// evaluated with the recorded slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n_max: u64,
    pub min_index: u64,
    pub seed: Option<u64>,
    pub shifts: ShiftStream,
    pub psi: PsiSpec,
    pub n_ambient: u64,
    pub separation_radius: f64,
    pub margin: f64,
    /// Nominal spacing r·√2·(1 − margin).
    pub h: f64,
    /// Pitch actually used, 1/⌈1/h⌉ ≤ h.
    pub pitch: f64,
    pub grid_offset: f64,
    pub grid_points: u64,
    pub slack: f64,
    pub uncovered_count: u64,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Human-readable block listing every parameter.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cover certificate");
        let _ = writeln!(s, "  N                  {}", self.n_max);
        let _ = writeln!(s, "  regions            {} <= m <= {}", self.min_index, self.n_max);
        match self.seed {
            Some(seed) => {
                let _ = writeln!(s, "  seed               {seed}");
            }
            None => {
                let _ = writeln!(s, "  shifts             zero (non-random)");
            }
        }
        let _ = writeln!(s, "  psi                {}", self.psi);
        let _ = writeln!(s, "  n_ambient          {}", self.n_ambient);
        let _ = writeln!(s, "  separation radius  {:e}", self.separation_radius);
        let _ = writeln!(s, "  margin             {}", self.margin);
        let _ = writeln!(s, "  h                  {:e}", self.h);
        let _ = writeln!(s, "  pitch              {:e}", self.pitch);
        let _ = writeln!(s, "  grid offset        {}", self.grid_offset);
        let _ = writeln!(s, "  grid points        {}", self.grid_points);
        let _ = writeln!(s, "  membership slack   {:e}", self.slack);
        let _ = writeln!(s, "  uncovered points   {}", self.uncovered_count);
        match self.verdict {
            Verdict::Certified => {
                let _ = writeln!(s, "  verdict            CERTIFIED (every point lies in the union of A_m, up to the slack above)");
            }
            Verdict::Failed { witness } => {
                let _ = writeln!(
                    s,
                    "  verdict            FAILED (grid point ({}, {}) lies outside every B_m)",
                    witness.0, witness.1
                );
            }
        }
        s
    }
}

/// Attempts to certify that `∪_{m ≤ N} A_m` is the whole torus.
pub fn certify_cover(n_max: u64, shifts: &ShiftStream, psi: &PsiSpec) -> Result<Certificate> {
    certify_cover_with(n_max, shifts, psi, &CertifyOptions::default())
}

/// Sweeps a lattice of pitch at most `h = r(N)·√2·(1 − margin)` against
/// `B_m^(N)`. Every point of the torus is within `h·√2/2 < r(N)` of a
/// lattice point, so if all lattice points lie in `∪ B_m^(N)`, no point can
/// lie outside `∪ A_m`.
pub fn certify_cover_with(
    n_max: u64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if n_max < 2 {
        return domain(format!("certification needs N >= 2, got {n_max}"));
    }
    if !(0.0..1.0).contains(&opts.margin) {
        return domain(format!("certificate margin must lie in [0, 1), got {}", opts.margin));
    }
    let r = separation_radius(n_max)?;
    let h = r * std::f64::consts::SQRT_2 * (1.0 - opts.margin);
    let grid = GridSpec::spacing(h).with_offset(opts.offset);
    let sweep_opts = SweepOptions {
        min_index: opts.min_index,
        budget: opts.budget,
        witness_cap: 1,
        slack: opts.slack,
    };
    let report = coverage_sweep_with(n_max, shifts, psi, &grid, Target::Shrunk, &sweep_opts)?;
    let verdict = match report.witnesses.first() {
        None => Verdict::Certified,
        Some(w) => Verdict::Failed { witness: w.point },
    };
    Ok(Certificate {
        n_max,
        min_index: opts.min_index,
        seed: shifts.seed(),
        shifts: *shifts,
        psi: psi.clone(),
        n_ambient: n_max,
        separation_radius: r,
        margin: opts.margin,
        h,
        pitch: grid.pitch(),
        grid_offset: opts.offset,
        grid_points: report.total_points,
        slack: opts.slack,
        uncovered_count: report.uncovered_count,
        verdict,
    })
}

/// Scans N = max(2, m_min), ... upward and returns the first certificate
/// that succeeds, or `None` when `n_limit` is reached or the next grid no
/// longer fits the budget.
pub fn smallest_certified(
    shifts: &ShiftStream,
    psi: &PsiSpec,
    opts: &CertifyOptions,
    n_limit: u64,
) -> Result<Option<Certificate>> {
    let start = opts.min_index.max(2);
    for n in start..=n_limit {
        match certify_cover_with(n, shifts, psi, opts) {
            Ok(c) if c.is_certified() => return Ok(Some(c)),
            Ok(_) => continue,
            Err(crate::Error::Budget { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
