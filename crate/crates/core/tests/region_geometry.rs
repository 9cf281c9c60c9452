use littlewood_core::{
    min_boundary_gap, region_area_exact, region_area_mc, separation_radius, PsiSpec, Region,
    ShiftStream,
};
use proptest::prelude::*;

/// 4·∫_0^{1/2} min(1/2, ψ/s) ds by composite Simpson on [2ψ, 1/2]: the
/// probability that a product of two independent U[0, 1/2] variables is at
/// most ψ.
fn area_by_quadrature(psi: f64) -> f64 {
    if psi >= 0.25 {
        return 1.0;
    }
    let (a, b) = (2.0 * psi, 0.5);
    let k = 200_000;
    let h = (b - a) / k as f64;
    let f = |s: f64| psi / s;
    let mut acc = f(a) + f(b);
    for i in 1..k {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    4.0 * (0.5 * a + acc * h / 3.0)
}

#[test]
fn area_formula_matches_quadrature() {
    for psi in [1e-3, 0.01, 0.05, 0.1, 0.2, 0.249, 0.25] {
        let exact = region_area_exact(psi).unwrap();
        let quad = area_by_quadrature(psi);
        assert!((exact - quad).abs() < 1e-9, "psi = {psi}: {exact} vs {quad}");
    }
}

#[test]
fn area_formula_at_named_points() {
    assert_eq!(region_area_exact(0.25).unwrap(), 1.0);
    let v = 0.4 * 10f64.ln() - 0.4 * (4f64.ln() - 1.0);
    assert!((region_area_exact(0.1).unwrap() - v).abs() < 1e-15);
    assert!((v - 0.766_517).abs() < 1e-6);
}

#[test]
fn monte_carlo_tracks_formula_across_indices() {
    for &psi in &[0.01, 0.05, 0.1, 0.2] {
        for &n in &[3u64, 10, 97] {
            let r = Region::new(n, (0.123, 0.456), psi).unwrap();
            let est = region_area_mc(&r, 1_000_000, 17).unwrap();
            let exact = region_area_exact(psi).unwrap();
            assert!(est.z_score(exact) <= 3.0, "psi={psi} n={n}: {est:?} vs {exact}");
        }
    }
}

#[test]
fn monte_carlo_is_deterministic_per_seed() {
    let r = Region::new(5, (0.3, 0.6), 0.07).unwrap();
    let a = region_area_mc(&r, 200_000, 3).unwrap();
    let b = region_area_mc(&r, 200_000, 3).unwrap();
    assert_eq!(a, b);
    let c = region_area_mc(&r, 200_000, 4).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn area_estimate_is_shift_independent() {
    let exact = region_area_exact(0.08).unwrap();
    for (g, d) in [(0.0, 0.0), (0.5, 0.25), (0.9, 0.1)] {
        let r = Region::new(13, (g, d), 0.08).unwrap();
        let est = region_area_mc(&r, 500_000, 8).unwrap();
        assert!(est.z_score(exact) <= 3.5, "{est:?}");
    }
}

/// Brute-force gap in (α, β) space: boundary lattice points of `B` against
/// boundary lattice points of the complement of `A`.
fn brute_force_gap(outer: &Region, inner: &Region, side: usize) -> f64 {
    let step = 1.0 / side as f64;
    let at = |i: usize, j: usize| (i as f64 * step, j as f64 * step);
    let mut in_b = vec![false; side * side];
    let mut out_a = vec![false; side * side];
    for i in 0..side {
        for j in 0..side {
            in_b[i * side + j] = inner.contains(at(i, j));
            out_a[i * side + j] = !outer.contains(at(i, j));
        }
    }
    let edge = |mask: &[bool], i: usize, j: usize| {
        let nb = [((i + 1) % side, j), ((i + side - 1) % side, j), (i, (j + 1) % side), (i, (j + side - 1) % side)];
        mask[i * side + j] && nb.iter().any(|&(a, b)| !mask[a * side + b])
    };
    let mut bs = Vec::new();
    let mut cs = Vec::new();
    for i in 0..side {
        for j in 0..side {
            if edge(&in_b, i, j) {
                bs.push(at(i, j));
            }
            if edge(&out_a, i, j) {
                cs.push(at(i, j));
            }
        }
    }
    let mut best = f64::INFINITY;
    for p in &cs {
        for q in &bs {
            let dx = (p.0 - q.0).abs().min(1.0 - (p.0 - q.0).abs());
            let dy = (p.1 - q.1).abs().min(1.0 - (p.1 - q.1).abs());
            best = best.min(dx * dx + dy * dy);
        }
    }
    best.sqrt()
}

#[test]
fn boundary_gap_matches_brute_force() {
    let s = ShiftStream::new(21);
    for (m, n, psi) in [(3u64, 5u64, 0.2), (4, 6, 0.12), (2, 4, 0.24)] {
        let spec = PsiSpec::constant(psi).unwrap();
        let g = min_boundary_gap(m, n, &s, &spec, 20_000).unwrap();
        let outer = Region::full(m, &s, &spec).unwrap();
        let inner = Region::shrunk(m, n, &s, &spec).unwrap();
        let pitch = 600;
        let brute = brute_force_gap(&outer, &inner, pitch);
        let tol = 2.0 * std::f64::consts::SQRT_2 / pitch as f64;
        assert!((g.gap - brute).abs() <= tol, "m={m} n={n}: probe {} vs brute {brute}", g.gap);
    }
}

#[test]
fn separation_at_one_thousand() {
    let psi = PsiSpec::paper(0.5).unwrap();
    let r = separation_radius(1000).unwrap();
    let g = min_boundary_gap(1000, 1000, &ShiftStream::new(0), &psi, 100_000).unwrap();
    assert!(g.gap.is_finite());
    assert!(g.gap >= r, "{} < {r}", g.gap);
}

#[test]
fn gap_minimum_sits_on_a_tail() {
    // With the paper family A_2 is the whole torus, so use a constant ψ for
    // a nonvacuous m = 2.
    let psi = PsiSpec::constant(0.1).unwrap();
    let g = min_boundary_gap(2, 1000, &ShiftStream::new(0), &psi, 100_000).unwrap();
    let (s, t) = g.argmin_local.unwrap();
    assert!((s - 0.5).abs() < 1e-9 || (t - 0.5).abs() < 1e-9, "argmin ({s}, {t})");
    // Within 1/(2m) of a half-integer offset from a/m along α or β.
    let (a, b) = g.argmin_point.unwrap();
    let (gamma, delta) = ShiftStream::new(0).pair(2);
    let off = |x: f64, sh: f64| {
        let y = 2.0 * x - sh;
        (y - y.floor() - 0.5).abs()
    };
    assert!(off(a, gamma) < 1e-6 || off(b, delta) < 1e-6);
}

#[test]
fn paper_family_small_indices_are_vacuous() {
    let psi = PsiSpec::paper(0.5).unwrap();
    for m in 1..=3 {
        let g = min_boundary_gap(m, 1000, &ShiftStream::new(0), &psi, 10).unwrap();
        assert_eq!(g.gap, f64::INFINITY, "m = {m}");
    }
}

proptest! {
    #[test]
    fn membership_is_monotone_in_threshold(
        n in 1u64..500, g in 0.0f64..1.0, d in 0.0f64..1.0,
        t1 in 0.0f64..0.3, t2 in 0.0f64..0.3, a in 0.0f64..1.0, b in 0.0f64..1.0,
    ) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let small = Region::new(n, (g, d), lo).unwrap();
        let big = Region::new(n, (g, d), hi).unwrap();
        prop_assert!(!small.contains((a, b)) || big.contains((a, b)));
    }

    #[test]
    fn shrunk_lies_inside_full(seed in any::<u64>(), m in 1u64..300, extra in 0u64..300, a in 0.0f64..1.0, b in 0.0f64..1.0, delta in 0.05f64..3.0) {
        let n = (m + extra).max(2);
        let s = ShiftStream::new(seed);
        let psi = PsiSpec::paper(delta).unwrap();
        let full = Region::full(m, &s, &psi).unwrap();
        let shrunk = Region::shrunk(m, n, &s, &psi).unwrap();
        prop_assert!(shrunk.threshold <= full.threshold);
        prop_assert!(!shrunk.contains((a, b)) || full.contains((a, b)));
    }

    #[test]
    fn membership_is_periodic_and_translation_invariant(
        n in 1u64..200, g in 0.0f64..1.0, d in 0.0f64..1.0, t in 0.0f64..1.0,
        a in 0.0f64..1.0, b in 0.0f64..1.0, psi in 0.0f64..0.25,
    ) {
        let r = Region::new(n, (g, d), psi).unwrap();
        let base = r.norm_product((a, b));
        prop_assert!((base - r.norm_product((a + 1.0, b - 3.0))).abs() < 1e-9);
        let g2 = (g + t).fract();
        let moved = Region::new(n, (g2, d), psi).unwrap();
        let a2 = (a + t / n as f64).fract();
        prop_assert!((base - moved.norm_product((a2, b))).abs() < 1e-9);
    }
}
