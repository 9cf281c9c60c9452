//! Approximation functions ψ: ℕ → [0, ∞).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A nonincreasing, nonnegative approximation function, chosen by family.
///
/// Textual form (used by the CLI and in run records):
///
/// ```text
/// paper:<delta>            (1 + delta) / (n ln(n + 1)),   delta > 0
/// constant:<c>             c,                              c >= 0
/// custom:<v1>,<v2>,...     v_n for n <= len, 0 afterwards
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PsiSpec {
    Paper { delta: f64 },
    Constant { c: f64 },
    Custom { table: Vec<f64> },
}

impl PsiSpec {
    pub fn paper(delta: f64) -> Result<Self> {
        let p = PsiSpec::Paper { delta };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(c: f64) -> Result<Self> {
        let p = PsiSpec::Constant { c };
        p.validate()?;
        Ok(p)
    }

    pub fn custom(table: Vec<f64>) -> Result<Self> {
        let p = PsiSpec::Custom { table };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PsiSpec::Paper { delta } => {
                if !(delta.is_finite() && *delta > 0.0) {
                    return domain(format!("paper family needs delta > 0, got {delta}"));
                }
            }
            PsiSpec::Constant { c } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return domain(format!("constant psi must be finite and >= 0, got {c}"));
                }
            }
            PsiSpec::Custom { table } => {
                if table.is_empty() {
                    return domain("custom psi table is empty");
                }
                for (i, v) in table.iter().enumerate() {
                    if !(v.is_finite() && *v >= 0.0) {
                        return domain(format!("custom psi value #{} = {v} is not finite and >= 0", i + 1));
                    }
                }
                if let Some(i) = table.windows(2).position(|w| w[1] > w[0]) {
                    return domain(format!("custom psi table increases at n = {}", i + 2));
                }
            }
        }
        Ok(())
    }

    /// ψ(n) for n ≥ 1. `n = 0` is treated as `n = 1`.
    #[inline]
    pub fn eval(&self, n: u64) -> f64 {
        let n = n.max(1);
        match self {
            PsiSpec::Paper { delta } => {
                let x = n as f64;
                (1.0 + delta) / (x * (x + 1.0).ln())
            }
            PsiSpec::Constant { c } => *c,
            PsiSpec::Custom { table } => table.get((n - 1) as usize).copied().unwrap_or(0.0),
        }
    }

    /// The δ parameter of the paper family, if this is one.
    pub fn delta(&self) -> Option<f64> {
        match self {
            PsiSpec::Paper { delta } => Some(*delta),
            _ => None,
        }
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::Paper { delta } => write!(f, "paper:{delta}"),
            PsiSpec::Constant { c } => write!(f, "constant:{c}"),
            PsiSpec::Custom { table } => {
                write!(f, "custom:")?;
                for (i, v) in table.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PsiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected family:params, got {s:?}")))?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in psi spec {s:?}")))
        };
        match family.trim() {
            "paper" => PsiSpec::paper(num(params)?),
            "constant" => PsiSpec::constant(num(params)?),
            "custom" => PsiSpec::custom(params.split(',').map(num).collect::<Result<_>>()?),
            other => Err(Error::Parse(format!(
                "unknown psi family {other:?} (expected paper, constant or custom)"
            ))),
        }
    }
}
