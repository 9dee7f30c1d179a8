//! Deterministic random streams.
//!
//! Every run owns one [`Rng`]. The generator is ChaCha with 8 rounds
//! (`rand_chacha::ChaCha8Rng`), seeded from a 64-bit value expanded with
//! SplitMix64 into the 32-byte key. The derived quantities use only
//! `next_u64`, so a reimplementation in another language needs ChaCha8 plus
//! the four recipes below:
//!
//! * uniform in `[0,1)`: `(next_u64 >> 11) * 2^-53`
//! * uniform index in `0..n`: `((next_u64 as u128 * n) >> 64)`
//! * standard normal: Box–Muller, `sqrt(-2 ln(1-u1)) * cos(2 pi u2)`,
//!   one normal per pair of uniforms (the sine branch is discarded)
//! * per-run seed: `splitmix64(master ^ (0x9E3779B97F4A7C15 * (run_index+1)))`

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// One step of the SplitMix64 generator, used for seed expansion.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_index` under `master_seed`.
pub fn derive_seed(master_seed: u64, run_index: u64) -> u64 {
    let mut s = master_seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(run_index.wrapping_add(1));
    splitmix64(&mut s)
}

#[derive(Clone, Debug)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`. Panics when `n == 0`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    #[inline]
    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        mean + std * self.standard_normal()
    }

    /// `k` distinct indices from `0..n` (partial Fisher–Yates), in draw order.
    pub fn sample_without_replacement(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct items from {n}");
        if k == 0 {
            return Vec::new();
        }
        // dense pool when the draw is a large fraction of the range
        if k * 4 >= n {
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = i + self.index(n - i);
                pool.swap(i, j);
            }
            pool.truncate(k);
            return pool;
        }
        // sparse Fisher–Yates: same draws as the dense version
        let mut swapped: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let j = i + self.index(n - i);
            let vj = *swapped.get(&j).unwrap_or(&j);
            let vi = *swapped.get(&i).unwrap_or(&i);
            swapped.insert(j, vi);
            out.push(vj);
        }
        out
    }
}
