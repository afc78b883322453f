//! Seeded instance generators.
//!
//! Every trial draws from its own ChaCha stream (`seed`, `stream = trial`),
//! so trials can run in any order and still reproduce.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use weaklp::embeddings::{p_project, LevelStack};
use weaklp::{AtomicVector, DyadicStep, Params};

/// Shape of the random entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Independent `U(-1, 1)`.
    Uniform,
    /// Random sign times a Pareto(1.5) magnitude, to stress rearrangement tails.
    HeavyTail,
    /// `ceil(len / 4)` nonzero `U(-1, 1)` entries at random positions.
    Sparse,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [Distribution::Uniform, Distribution::HeavyTail, Distribution::Sparse];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::HeavyTail => "heavy_tail",
            Distribution::Sparse => "sparse",
        }
    }

    pub fn pick<R: Rng>(rng: &mut R) -> Self {
        Self::ALL[rng.random_range(0..Self::ALL.len())]
    }
}

const PARETO_ALPHA: f64 = 1.5;

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `len` reals drawn from `dist`.
pub fn random_values<R: Rng>(rng: &mut R, len: usize, dist: Distribution) -> Vec<f64> {
    match dist {
        Distribution::Uniform => (0..len).map(|_| rng.random_range(-1.0..1.0)).collect(),
        Distribution::HeavyTail => (0..len)
            .map(|_| {
                let u: f64 = 1.0 - rng.random::<f64>();
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * u.powf(-1.0 / PARETO_ALPHA)
            })
            .collect(),
        Distribution::Sparse => {
            let mut out = vec![0.0; len];
            for i in sample(rng, len, len.div_ceil(4)) {
                out[i] = rng.random_range(-1.0..1.0);
            }
            out
        }
    }
}

pub fn gen_atoms(seed: u64, len: usize, dist: Distribution) -> AtomicVector {
    AtomicVector::new(random_values(&mut trial_rng(seed, 0), len, dist))
}

pub fn random_step<R: Rng>(rng: &mut R, k: usize, level: usize, dist: Distribution) -> DyadicStep {
    DyadicStep::new(k, level, random_values(rng, k << level, dist)).expect("generated step has the right length")
}

pub fn random_stack<R: Rng>(rng: &mut R, k: usize, top_level: usize, dist: Distribution) -> LevelStack {
    let levels = (0..=top_level).map(|n| random_values(rng, k << n, dist)).collect();
    LevelStack::new(k, top_level, levels).expect("generated stack has the right shape")
}

/// Random stack; with `consistent` set it is pushed through `P_k` so the
/// result lies in the dyadically consistent subspace.
pub fn gen_stack(
    seed: u64,
    k: usize,
    top_level: usize,
    dist: Distribution,
    consistent: Option<Params>,
) -> LevelStack {
    let x = random_stack(&mut trial_rng(seed, 0), k, top_level, dist);
    match consistent {
        Some(params) => p_project(&x, params),
        None => x,
    }
}
