//! Reproducible random streams.
//!
//! Every random draw is keyed by `(seed, stream)`: the seed selects a
//! ChaCha20 key and the stream index selects an independent keystream, so
//! work split across threads reproduces bit for bit.

use crate::error::{Error, Result};
use crate::geometry::Ball;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Identifier recorded in sample metadata.
pub const RNG_ALGORITHM: &str = "chacha20:seed_from_u64:stream=index";

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Recipe for a random ball configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomBalls {
    pub dim: usize,
    pub count: usize,
    /// Lower corner of the box containing the centers.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub radius_min: f64,
    pub radius_max: f64,
    pub seed: u64,
}

impl RandomBalls {
    /// Centers uniform in the cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, count: usize, lo: f64, hi: f64, radius_min: f64, radius_max: f64, seed: u64) -> Self {
        Self {
            dim,
            count,
            lo: vec![lo; dim],
            hi: vec![hi; dim],
            radius_min,
            radius_max,
            seed,
        }
    }

    pub fn generate(&self) -> Result<Vec<Ball>> {
        if self.dim == 0 || self.lo.len() != self.dim || self.hi.len() != self.dim {
            return Err(Error::domain("random ball box must match the dimension"));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| !(a <= b)) {
            return Err(Error::domain("random ball box has lo > hi"));
        }
        if !(self.radius_min > 0.0 && self.radius_min <= self.radius_max) {
            return Err(Error::domain("random ball radii need 0 < radius_min <= radius_max"));
        }
        let mut rng = stream_rng(self.seed, 0);
        (0..self.count)
            .map(|_| {
                let center = (0..self.dim)
                    .map(|k| uniform(&mut rng, self.lo[k], self.hi[k]))
                    .collect();
                let r = uniform(&mut rng, self.radius_min, self.radius_max);
                Ball::new(center, r)
            })
            .collect()
    }
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}
