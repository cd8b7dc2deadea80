//! Monte Carlo estimation of triangle class probabilities.
//!
//! Samples are split into fixed-size shards. Shard `k` draws from a ChaCha8
//! stream seeded with the master seed and stream number `k`, and shard
//! counts are summed in shard order, so estimates are bit-identical for any
//! number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dist::{DistributionSpec, Sampler};
use crate::error::{Error, Result};
use crate::geom::{classify_with_margin, ClassCounts, DEFAULT_TOL};

/// Triples per shard.
pub const SHARD_SIZE: u64 = 1 << 16;

/// Random stream for one shard.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Run `job(shard, first_index, count)` over all shards and return the results in shard order.
pub fn run_shards<T, F>(samples: u64, workers: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64, u64) -> Result<T> + Sync + Send,
{
    map_indexed(samples.div_ceil(SHARD_SIZE), workers, |k| {
        let first = k * SHARD_SIZE;
        job(k, first, SHARD_SIZE.min(samples - first))
    })
}

/// Evaluate `f(0..count)` on up to `workers` threads, results in index order.
///
/// The first error by index wins, whatever the scheduling.
pub fn map_indexed<T, F>(count: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::invalid("workers", "must be at least 1"));
    }
    let results: Vec<Result<T>> = if workers == 1 || count <= 1 {
        (0..count).map(f).collect()
    } else {
        parallel_map(count, workers, f)?
    };
    results.into_iter().collect()
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(count: u64, workers: usize, f: F) -> Result<Vec<Result<T>>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(count: u64, _workers: usize, f: F) -> Result<Vec<Result<T>>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    Ok((0..count).map(f).collect())
}

/// Two-sided Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    if successes > trials {
        return Err(Error::invalid("successes", "exceeds trials"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid("confidence", "must lie in (0, 1)"));
    }
    let z = Normal::standard().inverse_cdf(0.5 + 0.5 * confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    Ok((lo, hi))
}

/// Settings of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub tol: f64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            workers: 1,
            tol: DEFAULT_TOL,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Estimated probability that a random triple is obtuse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub spec: DistributionSpec,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub counts: ClassCounts,
    /// Obtuse fraction.
    pub p_hat: f64,
    /// 95% Wilson interval for `p_hat`.
    pub ci95: [f64; 2],
}

impl Estimate {
    pub fn acute_rate(&self) -> f64 {
        self.counts.acute as f64 / self.samples as f64
    }

    pub fn std_err(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.samples as f64).sqrt()
    }
}

/// Draw `cfg.samples` independent triples from `spec` and count classes.
pub fn estimate(spec: &DistributionSpec, cfg: &McConfig) -> Result<Estimate> {
    if cfg.samples == 0 {
        return Err(Error::invalid("samples", "must be positive"));
    }
    let sampler = Sampler::new(spec)?;
    let counts = count_triples(&sampler, cfg)?;
    let (lo, hi) = wilson_interval(counts.obtuse, cfg.samples, 0.95)?;
    Ok(Estimate {
        spec: spec.clone(),
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.tol,
        counts,
        p_hat: counts.obtuse as f64 / cfg.samples as f64,
        ci95: [lo, hi],
    })
}

/// Class counts of `cfg.samples` random triples.
pub fn count_triples(sampler: &Sampler, cfg: &McConfig) -> Result<ClassCounts> {
    if !(cfg.tol >= 0.0) {
        return Err(Error::invalid("tol", "must be non-negative"));
    }
    let d = sampler.dim();
    let shards = run_shards(cfg.samples, cfg.workers, |shard, first, count| {
        let mut rng = shard_rng(cfg.seed, shard);
        let (mut a, mut b, mut c) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        let mut counts = ClassCounts::default();
        for i in 0..count {
            sampler.sample_into(&mut a, &mut rng);
            sampler.sample_into(&mut b, &mut rng);
            sampler.sample_into(&mut c, &mut rng);
            let class = classify_with_margin(&a, &b, &c, cfg.tol).map_err(|e| Error::Sample {
                index: first + i,
                source: Box::new(e),
            })?;
            counts.add(class.class);
        }
        Ok(counts)
    })?;
    let mut total = ClassCounts::default();
    shards.iter().for_each(|s| total.merge(s));
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::SphereParams;

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((lo - 0.403_831_530_365_995_6).abs() < 1e-12);
        assert!((hi - 0.596_168_469_634_004_4).abs() < 1e-12);
        let (lo, hi) = wilson_interval(0, 10, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.277_532_799_862_889_26).abs() < 1e-12);
        assert_eq!(wilson_interval(10, 10, 0.95).unwrap().1, 1.0);
    }

    #[test]
    fn wilson_rejects_bad_input() {
        assert!(wilson_interval(1, 0, 0.95).is_err());
        assert!(wilson_interval(3, 2, 0.95).is_err());
        assert!(wilson_interval(1, 2, 1.0).is_err());
    }

    #[test]
    fn shards_cover_every_sample_once() {
        let n = 3 * SHARD_SIZE + 17;
        let sizes = run_shards(n, 1, |_, first, count| Ok((first, count))).unwrap();
        assert_eq!(sizes.len(), 4);
        assert_eq!(sizes.iter().map(|s| s.1).sum::<u64>(), n);
        assert_eq!(sizes[3], (3 * SHARD_SIZE, 17));
    }

    #[test]
    fn small_sphere_run() {
        let spec = DistributionSpec::Sphere(SphereParams { dim: 3 });
        let e = estimate(&spec, &McConfig::new(20_000, 7)).unwrap();
        assert_eq!(e.counts.total(), 20_000);
        assert!(e.ci95[0] <= e.p_hat && e.p_hat <= e.ci95[1]);
        assert!((e.p_hat - 0.5).abs() < 0.03);
    }
}
