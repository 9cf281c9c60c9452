//! Fixed workloads shared by the criterion benches in `benches/`.

use littlewood_core::{ExactReal, GridSpec, PsiSpec, ResolvedPoint, ShiftStream};

pub fn paper_psi() -> PsiSpec {
    PsiSpec::paper(0.5).expect("valid delta")
}

pub fn seed_zero() -> ShiftStream {
    ShiftStream::new(0)
}

/// Lattice used for the membership sweep: `q × q` points.
pub fn sweep_grid(q: u64) -> GridSpec {
    GridSpec::resolution(q).with_offset(0.5)
}

pub fn golden_silver() -> ResolvedPoint {
    ResolvedPoint::named(ExactReal::Golden, ExactReal::Silver).expect("named constants resolve")
}
