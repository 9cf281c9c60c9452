//! Counter-addressed uniform streams.
//!
//! Every value is a pure function of `(key, index)`: a SplitMix64 generator
//! evaluated at an arbitrary position. Queries can therefore be issued in
//! any order, from any thread, and always see the same numbers.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

// Domain-separation tags so that shift streams, Monte Carlo samplers and
// random point sets never share a key even under the same user seed.
pub(crate) const DOMAIN_SHIFTS: u64 = 0x5348_4946_5453_0001;
pub(crate) const DOMAIN_AREA_MC: u64 = 0x4152_4541_4d43_0002;
pub(crate) const DOMAIN_POINTS: u64 = 0x504f_494e_5453_0003;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps the top 53 bits of `x` onto `[0, 1)`.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (x >> 11) as f64 * SCALE
}

/// A keyed, index-addressable source of uniform doubles on `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyedUniform {
    key: u64,
}

impl KeyedUniform {
    pub fn new(seed: u64, domain: u64) -> Self {
        Self {
            key: mix64(seed ^ domain).wrapping_add(mix64(domain)),
        }
    }

    /// Raw 64-bit output at position `index`.
    #[inline]
    pub fn bits(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform double at position `index`.
    #[inline]
    pub fn at(&self, index: u64) -> f64 {
        unit_f64(self.bits(index))
    }

    /// The `index`-th uniform point of the unit square.
    #[inline]
    pub fn point(&self, index: u64) -> (f64, f64) {
        (self.at(2 * index), self.at(2 * index + 1))
    }
}

/// The random shift pairs `(γ_n, δ_n)`, addressed by `n`.
///
/// `Zero` is the degenerate all-zero stream used to reproduce the unshifted
/// problem and hand-checkable cases; it is not random.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftStream {
    Seeded { seed: u64 },
    Zero,
}

impl ShiftStream {
    pub fn new(seed: u64) -> Self {
        ShiftStream::Seeded { seed }
    }

    pub fn zero() -> Self {
        ShiftStream::Zero
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ShiftStream::Seeded { seed } => Some(*seed),
            ShiftStream::Zero => None,
        }
    }

    /// Returns `(γ_n, δ_n)`. The two components come from distinct
    /// stream positions `2n` and `2n + 1`.
    #[inline]
    pub fn pair(&self, n: u64) -> (f64, f64) {
        match self {
            ShiftStream::Seeded { seed } => {
                KeyedUniform::new(*seed, DOMAIN_SHIFTS).point(n)
            }
            ShiftStream::Zero => (0.0, 0.0),
        }
    }

    /// A sampler bound to this stream's key, for hot loops that query many
    /// indices.
    #[inline]
    pub fn sampler(&self) -> ShiftSampler {
        match self {
            ShiftStream::Seeded { seed } => {
                ShiftSampler(Some(KeyedUniform::new(*seed, DOMAIN_SHIFTS)))
            }
            ShiftStream::Zero => ShiftSampler(None),
        }
    }
}

/// Pre-keyed form of [`ShiftStream`].
#[derive(Clone, Copy, Debug)]
pub struct ShiftSampler(Option<KeyedUniform>);

impl ShiftSampler {
    #[inline]
    pub fn pair(&self, n: u64) -> (f64, f64) {
        match &self.0 {
            Some(u) => u.point(n),
            None => (0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_stream_is_zero() {
        let s = ShiftStream::zero();
        assert_eq!(s.pair(1), (0.0, 0.0));
        assert_eq!(s.pair(u64::MAX / 4), (0.0, 0.0));
    }

    #[test]
    fn values_lie_in_unit_interval() {
        let u = KeyedUniform::new(7, DOMAIN_SHIFTS);
        for i in 0..10_000 {
            let x = u.at(i);
            assert!((0.0..1.0).contains(&x));
        }
        assert_eq!(unit_f64(u64::MAX), 1.0 - f64::EPSILON / 2.0);
        assert_eq!(unit_f64(0), 0.0);
    }

    #[test]
    fn order_independent() {
        let s = ShiftStream::new(42);
        let forward: Vec<_> = (1..500).map(|n| s.pair(n)).collect();
        let backward: Vec<_> = (1..500).rev().map(|n| s.pair(n)).collect();
        for (a, b) in forward.iter().zip(backward.iter().rev()) {
            assert_eq!(a, b);
        }
        assert_eq!(s.sampler().pair(123), s.pair(123));
    }

    #[test]
    fn seeds_and_domains_differ() {
        assert_ne!(ShiftStream::new(0).pair(1), ShiftStream::new(1).pair(1));
        let a = KeyedUniform::new(0, DOMAIN_SHIFTS).at(5);
        let b = KeyedUniform::new(0, DOMAIN_AREA_MC).at(5);
        assert_ne!(a, b);
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&ShiftStream::new(3)).unwrap();
        assert_eq!(s, r#"{"kind":"seeded","seed":3}"#);
        let z: ShiftStream = serde_json::from_str(r#"{"kind":"zero"}"#).unwrap();
        assert_eq!(z, ShiftStream::Zero);
    }
}
