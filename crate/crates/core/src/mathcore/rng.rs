use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{domain, Result};

/// A counter-based random stream addressed by `(seed, stream_index)`.
///
/// Backed by ChaCha8, whose 64-bit stream selector gives independent
/// sequences for distinct indices and identical sequences on every platform
/// for identical ones. Parallel work fans out with [`RngStream::fork`], never
/// by sharing a stream between tasks.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// A fresh stream for sub-task `child`, independent of the parent's position.
    pub fn fork(&self, child: u64) -> Self {
        Self::new(self.seed, stream_id(&[self.stream_index, child]))
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn poisson(&mut self, mean: f64) -> Result<u64> {
        if !(mean >= 0.0) || !mean.is_finite() {
            return domain(format!("Poisson mean must be finite and non-negative, got {mean}"));
        }
        if mean == 0.0 {
            return Ok(0);
        }
        let dist = Poisson::new(mean)
            .map_err(|e| crate::Error::Domain(format!("Poisson mean {mean}: {e}")))?;
        Ok(dist.sample(&mut self.rng) as u64)
    }

    /// Uniform point on the unit sphere of `R^n`.
    pub fn unit_sphere(&mut self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        self.fill_unit_sphere(&mut v);
        v
    }

    /// Writes a uniform unit vector into `out`.
    pub fn fill_unit_sphere(&mut self, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        loop {
            let mut norm2 = 0.0;
            for x in out.iter_mut() {
                *x = self.gaussian();
                norm2 += *x * *x;
            }
            if norm2 > 1e-200 {
                let inv = norm2.sqrt().recip();
                out.iter_mut().for_each(|x| *x *= inv);
                return;
            }
        }
    }

    /// Uniform point in the ball of radius `radius` in `R^n`.
    pub fn fill_uniform_ball(&mut self, out: &mut [f64], radius: f64) {
        if out.is_empty() {
            return;
        }
        self.fill_unit_sphere(out);
        let scale = radius * self.uniform().powf(1.0 / out.len() as f64);
        out.iter_mut().for_each(|x| *x *= scale);
    }
}

/// Mixes task coordinates (worker id, scene index, ...) into a stream index.
pub fn stream_id(parts: &[u64]) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for &p in parts {
        h = splitmix(h ^ splitmix(p));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
