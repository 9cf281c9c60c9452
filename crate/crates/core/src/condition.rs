//! Diagnostics for the divergence condition: the log-domain sequence
//! log u_n, its record set Λ, the lower bound on ψ along Λ, and the two
//! forms of the failure-probability bound.
//!
//! A finite trace can only be *consistent with* divergence; nothing here
//! proves it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::psi::PsiSpec;
use crate::region::{area_formula, shrink_offset};

/// x·ln(1/x), with the value 0 at x = 0. Negative for x > 1.
#[inline]
pub fn entropy_term(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: u64,
    /// S_n = Σ_{m ≤ n} ψ(m) ln(1/ψ(m))
    pub partial_sum: f64,
    /// ln u_n = −(4 + ε) ln n + (4 − ε) S_n
    pub log_u: f64,
    pub is_record: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionTrace {
    pub epsilon: f64,
    pub psi: PsiSpec,
    pub rows: Vec<TraceRow>,
}

impl ConditionTrace {
    /// The record indices Λ.
    pub fn records(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(|r| r.is_record).map(|r| r.n)
    }

    pub fn row(&self, n: u64) -> Option<&TraceRow> {
        if n == 0 {
            return None;
        }
        self.rows.get((n - 1) as usize)
    }

    /// Least-squares slope of ln u_n against ln n over `lo ≤ n ≤ hi`.
    pub fn log_slope(&self, lo: u64, hi: u64) -> Result<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.n >= lo && r.n <= hi)
            .map(|r| ((r.n as f64).ln(), r.log_u))
            .collect();
        least_squares_slope(&pts)
    }

    /// CSV with header `n,S_n,log_u_n,is_record`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "S_n", "log_u_n", "is_record"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                format!("{:e}", r.partial_sum),
                format!("{:e}", r.log_u),
                (r.is_record as u8).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> Result<f64> {
    if pts.len() < 2 {
        return domain("slope fit needs at least two points");
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return domain("slope fit over a single abscissa");
    }
    Ok(sxy / sxx)
}

/// Computes ln u_n for n = 1..=n_max and marks prefix-maximum records.
/// u_n itself is never formed.
pub fn condition_trace(psi: &PsiSpec, epsilon: f64, n_max: u64) -> Result<ConditionTrace> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return domain(format!("epsilon must be > 0, got {epsilon}"));
    }
    if n_max < 1 {
        return domain("condition trace needs N_max >= 1");
    }
    psi.validate()?;
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut sum = CompensatedSum::default();
    let mut best = f64::NEG_INFINITY;
    for n in 1..=n_max {
        sum.add(entropy_term(psi.eval(n)));
        let s = sum.value();
        let log_u = -(4.0 + epsilon) * (n as f64).ln() + (4.0 - epsilon) * s;
        let is_record = log_u >= best;
        if is_record {
            best = log_u;
        }
        rows.push(TraceRow { n, partial_sum: s, log_u, is_record });
    }
    Ok(ConditionTrace { epsilon, psi: psi.clone(), rows })
}

/// The open interval of ε for which the paper family with parameter δ
/// satisfies (4 − ε)(1 + δ) > 4 + ε, i.e. `0 < ε < 4δ/(2 + δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibleInterval {
    pub lower: f64,
    pub upper: f64,
}

impl FeasibleInterval {
    pub fn contains(&self, eps: f64) -> bool {
        eps > self.lower && eps < self.upper
    }

    pub fn is_empty(&self) -> bool {
        self.upper <= self.lower
    }
}

impl std::fmt::Display for FeasibleInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

pub fn epsilon_feasible(delta: f64) -> Result<FeasibleInterval> {
    if !(delta.is_finite() && delta > 0.0) {
        return domain(format!("delta must be > 0, got {delta}"));
    }
    Ok(FeasibleInterval { lower: 0.0, upper: 4.0 * delta / (2.0 + delta) })
}

/// Asymptotic slope of ln u_n against ln n for the paper family:
/// (4 − ε)(1 + δ) − (4 + ε).
pub fn asymptotic_log_slope(delta: f64, epsilon: f64) -> f64 {
    (4.0 - epsilon) * (1.0 + delta) - (4.0 + epsilon)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqfastRow {
    pub n: u64,
    pub psi: f64,
    /// (1 + ε/4)/(n ln n)
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqfastReport {
    pub epsilon: f64,
    pub rows: Vec<EqfastRow>,
    /// Largest record index at which the bound fails: the measured
    /// "sufficiently large" threshold.
    pub largest_violation: Option<u64>,
}

/// Checks ψ(n) ≥ (1 + ε/4)/(n ln n) at every record n ≥ 3.
pub fn eqfast_check(trace: &ConditionTrace, psi: &PsiSpec) -> EqfastReport {
    let eps = trace.epsilon;
    let rows: Vec<EqfastRow> = trace
        .records()
        .filter(|&n| n >= 3)
        .map(|n| {
            let x = n as f64;
            let bound = (1.0 + eps / 4.0) / (x * x.ln());
            let v = psi.eval(n);
            EqfastRow { n, psi: v, bound, holds: v >= bound }
        })
        .collect();
    let largest_violation = rows.iter().rev().find(|r| !r.holds).map(|r| r.n);
    EqfastReport { epsilon: eps, rows, largest_violation }
}

/// Both forms of the failure-measure bound, as natural logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureBound {
    pub n: u64,
    pub ambient: u64,
    /// ln[n^{4+ε} Π_{m ≤ n} (1 − λ(B_m^(ambient)))]; −∞ if some factor is 0.
    pub log_product_form: f64,
    /// The same product restricted to factors with λ(B) < 1.
    pub log_product_nonfull: f64,
    /// Number of factors with λ(B) = 1.
    pub full_factors: u64,
    /// ln[n^{4+ε} exp(−(4 − ε) S_n)]
    pub log_exp_form: f64,
}

pub fn failure_bound(n: u64, psi: &PsiSpec, epsilon: f64, ambient: u64) -> Result<FailureBound> {
    if n < 2 {
        return domain(format!("failure bound needs n >= 2, got {n}"));
    }
    if ambient < n {
        return domain(format!("shrink ambient {ambient} must be >= n = {n}"));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return domain(format!("epsilon must be > 0, got {epsilon}"));
    }
    psi.validate()?;
    let eta = shrink_offset(ambient)?;
    let lead = (4.0 + epsilon) * (n as f64).ln();
    let mut log_prod = CompensatedSum::default();
    let mut s = CompensatedSum::default();
    let mut full = 0;
    for m in 1..=n {
        let p = psi.eval(m);
        s.add(entropy_term(p));
        let raw = p - eta;
        let area = if raw <= 0.0 { 0.0 } else { area_formula(raw) };
        if area >= 1.0 {
            full += 1;
        } else {
            log_prod.add((-area).ln_1p());
        }
    }
    let nonfull = lead + log_prod.value();
    Ok(FailureBound {
        n,
        ambient,
        log_product_form: if full > 0 { f64::NEG_INFINITY } else { nonfull },
        log_product_nonfull: nonfull,
        full_factors: full,
        log_exp_form: lead - (4.0 - epsilon) * s.value(),
    })
}
