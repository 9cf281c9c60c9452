//! The shifted hyperbolic neighbourhoods `A_n` and their shrunken variants
//! `B_m^(n)`.
//!
//! Scaling the defining inequality by n² turns membership of (α, β) in `A_n`
//! into ‖nα − γ_n‖·‖nβ − δ_n‖ ≤ ψ(n), with the nearest integers playing the
//! role of the numerators a, b. All geometry below works in those scaled
//! local coordinates `(s, t) = (nα − γ_n − a, nβ − δ_n − b)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::number::shifted_norm_unchecked;
use crate::psi::PsiSpec;
use crate::stream::{KeyedUniform, ShiftStream, DOMAIN_AREA_MC};

/// Threshold at or above which a region is the whole torus.
pub const FULL_COVER_PSI: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionKind {
    Full,
    Shrunk { ambient: u64 },
}

/// One region: index, shifts, and the threshold on the norm product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub n: u64,
    pub gamma: f64,
    pub delta: f64,
    /// Right-hand side of the scaled inequality; clamped at 0.
    pub threshold: f64,
    pub kind: RegionKind,
    empty: bool,
}

/// 1/(n ln² n), the amount by which `B_m^(n)` lowers ψ(m).
pub fn shrink_offset(ambient: u64) -> Result<f64> {
    if ambient < 2 {
        return domain(format!("shrink offset needs n >= 2, got {ambient}"));
    }
    let x = ambient as f64;
    let l = x.ln();
    Ok(1.0 / (x * l * l))
}

impl Region {
    /// A full region with an explicit threshold.
    pub fn new(n: u64, shifts: (f64, f64), threshold: f64) -> Result<Self> {
        if n < 1 {
            return domain("region index must be >= 1");
        }
        if !(threshold.is_finite() && threshold >= 0.0) {
            return domain(format!("region threshold must be finite and >= 0, got {threshold}"));
        }
        check_shift(shifts.0)?;
        check_shift(shifts.1)?;
        Ok(Region {
            n,
            gamma: shifts.0,
            delta: shifts.1,
            threshold,
            kind: RegionKind::Full,
            empty: false,
        })
    }

    /// `A_n` for the given stream and ψ.
    pub fn full(n: u64, shifts: &ShiftStream, psi: &PsiSpec) -> Result<Self> {
        Region::new(n, shifts.pair(n), psi.eval(n))
    }

    /// `B_m^(ambient)`, with threshold ψ(m) − 1/(ambient·ln² ambient).
    ///
    /// A nonpositive shrunk threshold yields the empty region.
    pub fn shrunk(m: u64, ambient: u64, shifts: &ShiftStream, psi: &PsiSpec) -> Result<Self> {
        if m < 1 || m > ambient {
            return domain(format!("shrunk region needs 1 <= m <= n, got m = {m}, n = {ambient}"));
        }
        let raw = psi.eval(m) - shrink_offset(ambient)?;
        let (gamma, delta) = shifts.pair(m);
        Ok(Region {
            n: m,
            gamma,
            delta,
            threshold: raw.max(0.0),
            kind: RegionKind::Shrunk { ambient },
            empty: raw <= 0.0,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Whether the region is the whole torus.
    pub fn is_full_cover(&self) -> bool {
        !self.empty && self.threshold >= FULL_COVER_PSI
    }

    /// ‖nα − γ‖·‖nβ − δ‖.
    #[inline]
    pub fn norm_product(&self, point: (f64, f64)) -> f64 {
        shifted_norm_unchecked(self.n, point.0, self.gamma)
            * shifted_norm_unchecked(self.n, point.1, self.delta)
    }

    /// Closed membership test.
    #[inline]
    pub fn contains(&self, point: (f64, f64)) -> bool {
        !self.empty && self.norm_product(point) <= self.threshold
    }

    /// Membership with the product required to clear the threshold by
    /// `slack` (a positive slack makes the test conservative).
    #[inline]
    pub fn contains_with_slack(&self, point: (f64, f64), slack: f64) -> bool {
        !self.empty && self.norm_product(point) <= self.threshold - slack
    }

    /// Lebesgue measure given by the closed-form area formula.
    pub fn area(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            area_formula(self.threshold)
        }
    }
}

fn check_shift(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return domain(format!("shift {x} is not in [0, 1)"));
    }
    Ok(())
}

/// λ(A) = 4ψ ln(1/ψ) − 4(ln 4 − 1)ψ for ψ < 1/4, and 1 from 1/4 on.
pub fn region_area_exact(psi: f64) -> Result<f64> {
    if psi.is_nan() || psi < 0.0 {
        return domain(format!("area needs psi >= 0, got {psi}"));
    }
    Ok(area_formula(psi))
}

#[inline]
pub(crate) fn area_formula(psi: f64) -> f64 {
    if psi >= FULL_COVER_PSI {
        1.0
    } else if psi == 0.0 {
        0.0
    } else {
        let v = 4.0 * psi * (-psi.ln()) - 4.0 * (4f64.ln() - 1.0) * psi;
        v.clamp(0.0, 1.0)
    }
}

/// A Bernoulli Monte Carlo area estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl AreaEstimate {
    pub fn from_hits(hits: u64, samples: u64) -> Self {
        let mean = hits as f64 / samples as f64;
        AreaEstimate {
            mean,
            std_error: (mean * (1.0 - mean) / samples as f64).sqrt(),
            samples,
        }
    }

    /// |mean − value| in units of the standard error (0 when both agree
    /// exactly, +∞ when they differ with zero standard error).
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Uniform-sampling estimate of the area of `region`. Sample `i` is the
/// `i`-th point of a keyed stream, so the result does not depend on how the
/// work is split across threads.
pub fn region_area_mc(region: &Region, samples: u64, seed: u64) -> Result<AreaEstimate> {
    if samples == 0 {
        return domain("Monte Carlo area needs at least one sample");
    }
    let sampler = KeyedUniform::new(seed, DOMAIN_AREA_MC);
    const BLOCK: u64 = 1 << 16;
    let hits: u64 = (0..samples.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let end = ((b + 1) * BLOCK).min(samples);
            (b * BLOCK..end).filter(|&i| region.contains(sampler.point(i))).count() as u64
        })
        .sum();
    Ok(AreaEstimate::from_hits(hits, samples))
}

/// r(n) = 1/(n² ln² n).
pub fn separation_radius(n: u64) -> Result<f64> {
    if n < 2 {
        return domain(format!("separation radius needs n >= 2, got {n}"));
    }
    let x = n as f64;
    let l = x.ln();
    Ok(1.0 / (x * x * l * l))
}

/// Result of a boundary-gap probe sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGap {
    /// Smallest distance found from the boundary of `A_m` to `B_m^(n)`,
    /// in (α, β) units. +∞ when the question is vacuous.
    pub gap: f64,
    /// Arg-min on the boundary of `A_m`, in scaled local coordinates
    /// `(s, t)` of the quadrant `s, t ≥ 0`.
    pub argmin_local: Option<(f64, f64)>,
    /// The same arg-min mapped to the torus through the cell a = b = 0.
    pub argmin_point: Option<(f64, f64)>,
    pub probes: usize,
}

/// Probes the distance between the boundary of `A_m` and `B_m^(n)`.
///
/// In scaled coordinates the part of `B` nearest to any point of the
/// quadrant `[0, 1/2]²` is the piece under the hyperbola `st = ψ'` clipped
/// to that quadrant (reflections across the axes and across the cell edges
/// only move points further away). The boundary of `A` in the same quadrant
/// is `st = ψ`, `s ∈ [2ψ, 1/2]`, which is probed at `probes` log-spaced
/// abscissae so that both tails are sampled equally densely. Distances are
/// divided by m to return to (α, β) units.
pub fn min_boundary_gap(
    m: u64,
    n: u64,
    shifts: &ShiftStream,
    psi: &PsiSpec,
    probes: usize,
) -> Result<BoundaryGap> {
    if probes == 0 {
        return domain("boundary gap needs at least one probe");
    }
    let outer = Region::full(m, shifts, psi)?;
    let inner = Region::shrunk(m, n, shifts, psi)?;
    let vacuous = BoundaryGap {
        gap: f64::INFINITY,
        argmin_local: None,
        argmin_point: None,
        probes,
    };
    if inner.is_empty() || outer.is_full_cover() {
        return Ok(vacuous);
    }
    let c_out = outer.threshold;
    let c_in = inner.threshold;

    let (lo, hi) = ((2.0 * c_out).ln(), 0.5f64.ln());
    let probe_at = |k: usize| -> f64 {
        if probes == 1 {
            0.5
        } else {
            (lo + (hi - lo) * k as f64 / (probes - 1) as f64).exp()
        }
    };

    let (best, k_best) = (0..probes)
        .into_par_iter()
        .with_min_len(1024)
        .map(|k| {
            let s = probe_at(k);
            (distance_to_hyperbola((s, c_out / s), c_in), k)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );

    let s = probe_at(k_best);
    let t = c_out / s;
    let mf = m as f64;
    let wrap = |x: f64| x - x.floor();
    Ok(BoundaryGap {
        gap: best / mf,
        argmin_local: Some((s, t)),
        argmin_point: Some((wrap((s + outer.gamma) / mf), wrap((t + outer.delta) / mf))),
        probes,
    })
}

/// Euclidean distance from `p` to the arc `{(s, c/s) : s ∈ [2c, 1/2]}`.
///
/// Newton iteration on the stationarity condition, started from the point
/// of the arc on the same ray through the origin, plus both arc endpoints.
pub(crate) fn distance_to_hyperbola(p: (f64, f64), c: f64) -> f64 {
    let (s0, t0) = p;
    let (lo, hi) = (2.0 * c, 0.5);
    let dist = |s: f64| {
        let t = c / s;
        ((s - s0).powi(2) + (t - t0).powi(2)).sqrt()
    };
    let mut s = (s0 * (c / (s0 * t0)).sqrt()).clamp(lo, hi);
    for _ in 0..50 {
        let t = c / s;
        let dt = -c / (s * s);
        let ddt = 2.0 * c / (s * s * s);
        let g = (s - s0) + (t - t0) * dt;
        let h = 1.0 + dt * dt + (t - t0) * ddt;
        if h.is_nan() || h <= 0.0 {
            break;
        }
        let next = (s - g / h).clamp(lo, hi);
        if (next - s).abs() <= 1e-16 * s.max(1e-300) {
            s = next;
            break;
        }
        s = next;
    }
    dist(s).min(dist(lo)).min(dist(hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let whole = Region::new(1, (0.3, 0.9), 0.25).unwrap();
        for &(a, b) in &[(0.0, 0.0), (0.5, 0.5), (0.8, 0.4), (0.999, 0.001)] {
            assert!(whole.contains((a, b)));
        }
        let r = Region::new(2, (0.0, 0.0), 0.01).unwrap();
        assert!(r.contains((0.5, 0.5)));
        assert!(!r.contains((0.25, 0.25)));
        assert!(Region::new(0, (0.0, 0.0), 0.1).is_err());
        assert!(Region::new(2, (1.0, 0.0), 0.1).is_err());
        assert!(Region::new(2, (0.0, 0.0), -0.1).is_err());
    }

    #[test]
    fn shrunk_threshold_and_emptiness() {
        let psi = PsiSpec::constant(0.25).unwrap();
        let s = ShiftStream::new(0);
        let b = Region::shrunk(5, 20, &s, &psi).unwrap();
        let expected = 0.25 - 1.0 / (20.0 * 20f64.ln().powi(2));
        assert!((b.threshold - expected).abs() < 1e-15);
        assert!((b.threshold - 0.2444).abs() < 1e-4);
        // 0.25 − 1/(2 ln² 2) < 0.
        let e = Region::shrunk(1, 2, &s, &psi).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.threshold, 0.0);
        assert!(!e.contains((0.0, 0.0)));
        assert!(Region::shrunk(3, 2, &s, &psi).is_err());
        assert!(Region::shrunk(1, 1, &s, &psi).is_err());
    }

    #[test]
    fn area_examples() {
        assert_eq!(region_area_exact(0.0).unwrap(), 0.0);
        assert_eq!(region_area_exact(0.25).unwrap(), 1.0);
        assert_eq!(region_area_exact(3.0).unwrap(), 1.0);
        assert!((region_area_exact(0.1).unwrap() - 0.766_517).abs() < 1e-6);
        assert!(region_area_exact(-1e-9).is_err());
        assert!(region_area_exact(f64::NAN).is_err());
        // Continuity at the branch point.
        let below = region_area_exact(0.25 - 1e-12).unwrap();
        assert!((below - 1.0).abs() < 1e-10);
    }

    #[test]
    fn monte_carlo_trivial_cases() {
        let full = Region::new(3, (0.1, 0.2), 0.3).unwrap();
        let est = region_area_mc(&full, 10_000, 1).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
        let null = Region::new(3, (0.1, 0.2), 0.0).unwrap();
        assert_eq!(region_area_mc(&null, 10_000, 1).unwrap().mean, 0.0);
        assert!(region_area_mc(&full, 0, 1).is_err());
    }

    #[test]
    fn monte_carlo_matches_formula_n7() {
        let r = Region::new(7, (0.41, 0.77), 0.05).unwrap();
        let est = region_area_mc(&r, 1_000_000, 0).unwrap();
        let exact = region_area_exact(0.05).unwrap();
        assert!(est.z_score(exact) <= 3.0, "{est:?} vs {exact}");
    }

    #[test]
    fn separation_radius_examples() {
        assert!((separation_radius(3).unwrap() - 0.0921).abs() < 1e-4);
        assert!((separation_radius(2).unwrap() - 0.5204).abs() < 1e-4);
        assert!(separation_radius(1).is_err());
        let mut prev = separation_radius(2).unwrap();
        for n in 3..10_000 {
            let r = separation_radius(n).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn hyperbola_distance_simple() {
        // Point on the curve.
        assert!(distance_to_hyperbola((0.2, 0.05), 0.01) < 1e-15);
        // Straight above the endpoint (1/2, 2c): nearest point is interior,
        // closer than the vertical gap.
        let d = distance_to_hyperbola((0.5, 0.03), 0.01);
        assert!(d < 0.01 && d > 0.009);
    }

    #[test]
    fn gap_is_vacuous_when_shrunk_region_is_empty() {
        let psi = PsiSpec::constant(0.001).unwrap();
        let g = min_boundary_gap(3, 10, &ShiftStream::new(0), &psi, 100).unwrap();
        assert_eq!(g.gap, f64::INFINITY);
        assert!(g.argmin_local.is_none());
    }
}
