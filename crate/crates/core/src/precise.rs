//! Fixed-point evaluation of ‖n·x − γ‖ with 192 fractional bits.
//!
//! Inputs are given symbolically (quadratic and cubic irrationals,
//! rationals, or an exact double), reduced mod 1, and stored as
//! `floor(frac(x) · 2^192)`. Products `n · x` are then reduced exactly, so
//! the only error is the truncation of `x` itself, below `n · 2^-192`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Number of fractional bits carried by [`FixedFrac`].
pub const FRAC_BITS: u32 = 192;

/// A real number specified exactly, to be evaluated mod 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactReal {
    /// (√5 − 1)/2
    Golden,
    /// √2 − 1
    Silver,
    /// 2^{1/3} − 1
    Cbrt2,
    /// p/q
    Rational { p: i64, q: u64 },
    /// The exact binary value of a double.
    Double { value: f64 },
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Golden => write!(f, "golden"),
            ExactReal::Silver => write!(f, "silver"),
            ExactReal::Cbrt2 => write!(f, "cbrt2"),
            ExactReal::Rational { p, q } => write!(f, "{p}/{q}"),
            ExactReal::Double { value } => write!(f, "{value}"),
        }
    }
}

impl ExactReal {
    /// The fractional part in fixed point.
    pub fn to_fixed(&self) -> Result<FixedFrac> {
        let one = BigUint::one() << FRAC_BITS;
        let raw = match *self {
            ExactReal::Golden => {
                // floor(√5 · 2^F) = isqrt(5 · 4^F)
                let r = (BigUint::from(5u32) << (2 * FRAC_BITS)).sqrt();
                (r - &one) >> 1u32
            }
            ExactReal::Silver => {
                let r = (BigUint::from(2u32) << (2 * FRAC_BITS)).sqrt();
                r - &one
            }
            ExactReal::Cbrt2 => {
                let r = (BigUint::from(2u32) << (3 * FRAC_BITS)).cbrt();
                r - &one
            }
            ExactReal::Rational { p, q } => {
                if q == 0 {
                    return domain("rational with zero denominator");
                }
                let r = (p as i128).rem_euclid(q as i128) as u64;
                (BigUint::from(r) << FRAC_BITS) / BigUint::from(q)
            }
            ExactReal::Double { value } => return FixedFrac::from_f64(value),
        };
        Ok(FixedFrac(raw))
    }

    /// Nearest double to the fractional part.
    pub fn to_f64(&self) -> Result<f64> {
        Ok(self.to_fixed()?.to_f64())
    }
}

/// A value in `[0, 1)` scaled by `2^FRAC_BITS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedFrac(BigUint);

impl FixedFrac {
    /// Exact fractional part of a finite double (truncated below 2^-192).
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return domain(format!("non-finite value {x}"));
        }
        let frac = x - x.floor();
        if frac == 0.0 {
            return Ok(FixedFrac(BigUint::zero()));
        }
        let bits = frac.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let (mantissa, exp2) = if exp == 0 {
            (bits & ((1u64 << 52) - 1), -1074i64)
        } else {
            ((bits & ((1u64 << 52) - 1)) | (1u64 << 52), exp - 1075)
        };
        let shift = FRAC_BITS as i64 + exp2;
        let m = BigUint::from(mantissa);
        let raw = if shift >= 0 { m << shift as u64 } else { m >> (-shift) as u64 };
        Ok(FixedFrac(raw))
    }

    pub fn raw(&self) -> &BigUint {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        scale_down(&self.0)
    }

    /// ‖n·self − shift‖, exact up to the stored truncation.
    pub fn shifted_norm(&self, n: u64, shift: &FixedFrac) -> f64 {
        let one = BigUint::one() << FRAC_BITS;
        let mask = &one - 1u32;
        let prod = (&self.0 * n) & &mask;
        let y = if prod >= shift.0 {
            prod - &shift.0
        } else {
            prod + &one - &shift.0
        };
        let other = &one - &y;
        let d = if y <= other { y } else { other };
        scale_down(&d)
    }
}

/// Evaluates ‖nx − γ‖ for an exact real x. Rationals are reduced exactly
/// mod 1 at each n, so they vanish at multiples of the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactMultiple {
    Fixed(FixedFrac),
    Rational { p: i128, q: u64 },
}

impl ExactMultiple {
    pub fn new(x: &ExactReal) -> Result<Self> {
        match *x {
            ExactReal::Rational { q: 0, .. } => domain("rational with zero denominator"),
            ExactReal::Rational { p, q } => Ok(ExactMultiple::Rational { p: p as i128, q }),
            _ => Ok(ExactMultiple::Fixed(x.to_fixed()?)),
        }
    }

    pub fn shifted_norm(&self, n: u64, shift: &FixedFrac) -> f64 {
        match self {
            ExactMultiple::Fixed(f) => f.shifted_norm(n, shift),
            ExactMultiple::Rational { p, q } => {
                let r = (p * n as i128).rem_euclid(*q as i128) as u64;
                let f = FixedFrac((BigUint::from(r) << FRAC_BITS) / BigUint::from(*q));
                f.shifted_norm(1, shift)
            }
        }
    }
}

fn scale_down(v: &BigUint) -> f64 {
    // Keep 64 significant bits before converting so that the final division
    // by a power of two stays exact.
    let bits = v.bits();
    if bits == 0 {
        return 0.0;
    }
    let drop = bits.saturating_sub(64);
    let top = (v >> drop).to_u64().unwrap_or(u64::MAX) as f64;
    top * 2f64.powi(drop as i32 - FRAC_BITS as i32)
}
