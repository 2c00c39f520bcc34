//! Deterministic, splittable random streams.
//!
//! Every stream is derived by keyed hashing of a root seed and a path of
//! split indices, so a parallel run draws exactly the same numbers no matter
//! how work is scheduled across threads. Chunked Monte Carlo sums use
//! compensated accumulation and merge partial results in chunk order, which
//! makes serial and parallel execution bit-identical.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::stats::RunningMoments;
use crate::Result;

/// Root seed used when the caller does not supply one.
pub const DEFAULT_ROOT_SEED: u64 = 0x4761_7465_6175_7821;

/// Number of samples drawn from one derived stream in chunked Monte Carlo.
pub const MONTE_CARLO_CHUNK: u64 = 4096;

/// Identifies a random stream: a root seed plus a path of split indices.
///
/// Equal paths give identical streams; distinct paths give streams that are
/// independent for every practical purpose.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedPath {
    root: u64,
    path: Vec<u64>,
}

impl SeedPath {
    pub fn new(root: u64) -> Self {
        SeedPath {
            root,
            path: Vec::new(),
        }
    }

    /// The stream one level down the split tree.
    pub fn child(&self, index: u64) -> SeedPath {
        let mut path = self.path.clone();
        path.push(index);
        SeedPath {
            root: self.root,
            path,
        }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Derives the stream for this path by hashing `(root, path)`.
    pub fn stream(&self) -> RandomStream {
        let mut hasher = Sha256::new();
        hasher.update(b"gateaux.stream.v1");
        hasher.update(self.root.to_le_bytes());
        hasher.update((self.path.len() as u64).to_le_bytes());
        for part in &self.path {
            hasher.update(part.to_le_bytes());
        }
        let digest = hasher.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        RandomStream {
            rng: ChaCha8Rng::from_seed(seed),
        }
    }
}

impl Default for SeedPath {
    fn default() -> Self {
        SeedPath::new(DEFAULT_ROOT_SEED)
    }
}

/// A deterministic random stream (uniform 64-bit words, uniform doubles,
/// ziggurat Gaussians).
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn fill_standard_normal(&mut self, out: &mut [f64]) {
        for slot in out.iter_mut() {
            *slot = self.rng.sample(StandardNormal);
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Neumaier-compensated floating point sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Mean, spread and raw moments of one chunked Monte Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloOutcome {
    /// Compensated sample mean.
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(samples).
    pub std_error: f64,
    pub moments: RunningMoments,
}

/// Averages `eval` over `samples` draws.
///
/// Sample `i` in chunk `c` sees the stream derived from `seed.child(c)`;
/// chunks are evaluated in parallel and merged in index order, so the result
/// does not depend on the number of worker threads. The first failing sample
/// (in index order) aborts the run with its index attached.
pub fn monte_carlo_mean<F>(seed: &SeedPath, samples: u64, eval: F) -> Result<MonteCarloOutcome>
where
    F: Fn(&mut RandomStream, u64) -> Result<f64> + Sync,
{
    if samples == 0 {
        return Err(Error::EmptySamples);
    }
    let chunks = samples.div_ceil(MONTE_CARLO_CHUNK);
    let partials: Vec<Result<(CompensatedSum, RunningMoments)>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut stream = seed.child(chunk).stream();
            let lo = chunk * MONTE_CARLO_CHUNK;
            let hi = (lo + MONTE_CARLO_CHUNK).min(samples);
            let mut sum = CompensatedSum::new();
            let mut moments = RunningMoments::new();
            for index in lo..hi {
                let value = eval(&mut stream, index).map_err(|e| Error::at_sample(index, e))?;
                sum.add(value);
                moments.push(value);
            }
            Ok((sum, moments))
        })
        .collect();

    let mut total = CompensatedSum::new();
    let mut moments = RunningMoments::new();
    for partial in partials {
        let (sum, part) = partial?;
        total.add(sum.sum);
        total.add(sum.compensation);
        moments = moments.merge(&part);
    }
    let mean = total.value() / samples as f64;
    let std_error = moments.std_error();
    Ok(MonteCarloOutcome {
        mean,
        std_error,
        moments,
    })
}

/// Runs `task` once per replication, each with its own derived stream, and
/// returns the outputs in replication order. Parallel, deterministic.
pub fn replicate<T, F>(seed: &SeedPath, replications: u64, task: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RandomStream, u64) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..replications)
        .into_par_iter()
        .map(|index| {
            let mut stream = seed.child(index).stream();
            task(&mut stream, index).map_err(|e| Error::at_sample(index, e))
        })
        .collect();
    results.into_iter().collect()
}
