//! Measured constants of every link in the embedding chain, per truncation
//! size. Uniform boundedness across sizes stands in for the
//! infinite-dimensional isomorphism.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use weaklp::embeddings::{self as emb, BlockRunVector, LevelStack};
use weaklp::{rearrange, weak_norm, Params};

use crate::error::{HarnessError, Result};
use crate::generate::{random_stack, random_step, random_values, trial_rng, Distribution};

/// Slack on link bounds and on the no-growth comparison.
pub const CHAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub p: f64,
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Random samples per link and size, on top of the fixed probes.
    pub trials: usize,
}

impl ChainConfig {
    pub fn new(p: f64, sizes: Vec<usize>) -> Self {
        Self { p, sizes, seed: 0, trials: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeConstant {
    #[serde(rename = "N")]
    pub top_level: usize,
    pub constant: f64,
    /// Samples with a nonzero denominator.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub link: String,
    pub description: String,
    pub bound: f64,
    pub constants: Vec<SizeConstant>,
    pub max: f64,
    /// Max over sizes not exceeding half of the largest size.
    pub max_half: f64,
    pub within_bound: bool,
    pub no_growth: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub p: f64,
    pub q: f64,
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub links: Vec<LinkReport>,
    pub pass: bool,
}

/// Largest `max(r, 1/r)` over samples, skipping `0/0`.
#[derive(Default)]
struct Distortion {
    worst: f64,
    samples: usize,
}

impl Distortion {
    fn two_sided(&mut self, num: f64, den: f64) {
        if num > 0.0 && den > 0.0 {
            let r = num / den;
            self.worst = self.worst.max(r.max(1.0 / r));
            self.samples += 1;
        }
    }

    fn one_sided(&mut self, num: f64, den: f64) {
        if den > 0.0 {
            self.worst = self.worst.max(num / den);
            self.samples += 1;
        }
    }
}

struct Link {
    name: &'static str,
    description: &'static str,
    bound: fn(Params) -> f64,
    measure: fn(&mut ChaCha8Rng, usize, usize, Params) -> Result<Distortion>,
}

const LINKS: &[Link] = &[
    Link {
        name: "restrict_tower",
        description: "max_k ‖f χ[0,k]‖ / ‖f‖ (isometry)",
        bound: |_| 1.0,
        measure: measure_tower,
    },
    Link {
        name: "t_embed",
        description: "two-sided distortion of T_k on level-N steps",
        bound: |p| p.q(),
        measure: measure_t,
    },
    Link {
        name: "p_project",
        description: "‖P_k x‖ / ‖x‖",
        bound: |p| p.q() * p.q(),
        measure: measure_p,
    },
    Link {
        name: "r_embed",
        description: "two-sided distortion of R on k = 1 stacks",
        bound: |p| (1.0 + p.inv_p()).exp2(),
        measure: measure_r,
    },
    Link {
        name: "w_project",
        description: "‖W a‖ / ‖a‖",
        bound: |_| 1.0,
        measure: measure_w,
    },
];

fn pick_dyadic_k(rng: &mut ChaCha8Rng) -> usize {
    [1, 2, 4][rng.random_range(0..3)]
}

fn measure_tower(rng: &mut ChaCha8Rng, top: usize, trials: usize, params: Params) -> Result<Distortion> {
    let mut d = Distortion::default();
    for _ in 0..trials {
        let k = rng.random_range(1..=4);
        let dist = Distribution::pick(rng);
        let f = random_step(rng, k, top, dist);
        let nf = weak_norm(&rearrange(&f), params);
        let max = emb::restrict_tower(&f)
            .iter()
            .map(|c| weak_norm(&rearrange(c), params))
            .fold(0.0, f64::max);
        d.two_sided(max, nf);
    }
    Ok(d)
}

fn measure_t(rng: &mut ChaCha8Rng, top: usize, trials: usize, params: Params) -> Result<Distortion> {
    let mut d = Distortion::default();
    for _ in 0..trials {
        let k = pick_dyadic_k(rng);
        let dist = Distribution::pick(rng);
        let f = random_step(rng, k, top, dist);
        let x = emb::t_embed(&f, params);
        d.two_sided(emb::stack_norm(&x, params), weak_norm(&rearrange(&f), params));
    }
    Ok(d)
}

fn measure_p(rng: &mut ChaCha8Rng, top: usize, trials: usize, params: Params) -> Result<Distortion> {
    let mut d = Distortion::default();
    for t in 0..trials {
        let k = pick_dyadic_k(rng);
        let dist = Distribution::pick(rng);
        let mut x = random_stack(rng, k, top, dist);
        if t == 0 {
            // An element of the range, where the ratio is exactly 1.
            x = emb::p_project(&x, params);
        }
        let y = emb::p_project(&x, params);
        d.one_sided(emb::stack_norm(&y, params), emb::stack_norm(&x, params));
    }
    Ok(d)
}

/// Fixed k = 1 stacks measured at every size: one unit spike per level,
/// and the unit stack `u`.
fn r_probes(top: usize, params: Params) -> Result<Vec<LevelStack>> {
    let mut spikes = LevelStack::zeros(1, top)?;
    for n in 0..=top {
        spikes.level_mut(n)[0] = 1.0;
    }
    Ok(vec![spikes, LevelStack::unit(1, top, params)?])
}

fn measure_r(rng: &mut ChaCha8Rng, top: usize, trials: usize, params: Params) -> Result<Distortion> {
    let layout = emb::build_layout(top)?;
    let mut d = Distortion::default();
    let mut stacks = r_probes(top, params)?;
    for _ in 0..trials {
        let dist = Distribution::pick(rng);
        stacks.push(random_stack(rng, 1, top, dist));
    }
    for x in &stacks {
        let nr = weak_norm(&emb::r_embed_profile(x, &layout, params)?, params);
        d.two_sided(nr, emb::stack_norm(x, params));
    }
    Ok(d)
}

fn measure_w(rng: &mut ChaCha8Rng, top: usize, trials: usize, params: Params) -> Result<Distortion> {
    let layout = emb::build_layout(top)?;
    let mut d = Distortion::default();
    for t in 0..trials {
        let dist = Distribution::pick(rng);
        let runs = layout
            .blocks()
            .map(|(_, _, _, len)| {
                let pieces = if t == 0 { 1 } else { rng.random_range(1..=3usize).min(len) };
                let values = random_values(rng, pieces, dist);
                let mut cuts: Vec<usize> = (0..pieces - 1).map(|_| rng.random_range(1..len)).collect();
                cuts.sort_unstable();
                cuts.dedup();
                let mut bounds = vec![0];
                bounds.extend(cuts);
                bounds.push(len);
                bounds.windows(2).zip(values).map(|(w, v)| (v, w[1] - w[0])).collect()
            })
            .collect();
        let a = BlockRunVector::new(&layout, runs)?;
        d.one_sided(weak_norm(&a.projected_profile(), params), weak_norm(&a.profile(), params));
    }
    Ok(d)
}

/// Measures each link at each size and checks the bound and the absence of
/// growth: the maximum over all sizes may not exceed the maximum over sizes
/// up to half the largest one (the smallest size if none qualifies).
pub fn chain_report(config: &ChainConfig) -> Result<ChainReport> {
    let params = Params::new(config.p)?;
    if config.sizes.is_empty() {
        return Err(HarnessError::Config("at least one size is required".into()));
    }
    if config.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    let largest = *config.sizes.iter().max().expect("nonempty");
    let smallest = *config.sizes.iter().min().expect("nonempty");
    let half = largest / 2;

    let mut links = Vec::new();
    for (li, link) in LINKS.iter().enumerate() {
        let bound = (link.bound)(params);
        let mut constants = Vec::new();
        for &top in &config.sizes {
            let stream = ((li as u64) << 32) | top as u64;
            let mut rng = trial_rng(config.seed, stream);
            let d = (link.measure)(&mut rng, top, config.trials, params)?;
            constants.push(SizeConstant { top_level: top, constant: d.worst, samples: d.samples });
        }
        let max = constants.iter().map(|c| c.constant).fold(0.0, f64::max);
        let max_half = constants
            .iter()
            .filter(|c| c.top_level <= half.max(smallest))
            .map(|c| c.constant)
            .fold(0.0, f64::max);
        let within_bound = max <= bound + CHAIN_SLACK;
        let no_growth = max <= max_half + CHAIN_SLACK;
        links.push(LinkReport {
            link: link.name.to_string(),
            description: link.description.to_string(),
            bound,
            constants,
            max,
            max_half,
            within_bound,
            no_growth,
            pass: within_bound && no_growth,
        });
    }
    let pass = links.iter().all(|l| l.pass);
    Ok(ChainReport {
        p: params.p(),
        q: params.q(),
        seed: config.seed,
        trials: config.trials,
        sizes: config.sizes.clone(),
        links,
        pass,
    })
}
