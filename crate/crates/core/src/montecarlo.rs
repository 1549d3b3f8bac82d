//! Seeded Monte Carlo estimates of `h_N(xi)` and of the volume of the
//! reciprocal star body.
//!
//! Samples are drawn uniformly from a product of disks that provably
//! contains the target set: a monic polynomial of degree `2N` and Mahler
//! measure `mu` has `|a_j| <= C(2N, j) mu`. The stream is split into
//! fixed-size chunks, each with its own ChaCha stream keyed by the seed and
//! the chunk index, so results do not depend on the worker count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::NumericError;
use crate::measure::{mu_rec, nu_rec, DEFAULT_TOL};
use crate::polynomial::{MonicRecip, RecipLaurent};

pub const CHUNK_SIZE: u64 = 1 << 14;
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub region_volume: f64,
    pub hits: u64,
    /// Samples the root finder could not classify; counted as misses.
    pub rejected: u64,
}

impl McEstimate {
    fn from_tally(tally: Tally, samples: u64, seed: u64, region_volume: f64) -> Self {
        let p = tally.hits as f64 / samples as f64;
        Self {
            mean: region_volume * p,
            std_error: region_volume * (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            seed,
            region_volume,
            hits: tally.hits,
            rejected: tally.rejected,
        }
    }

    pub fn z_score(&self, target: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == target {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - target) / self.std_error
        }
    }

    pub fn covers(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target).abs() <= sigmas
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    hits: u64,
    rejected: u64,
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Radius for `|b_n|`, `n = 0..N-1`: `C(2N, N - n) * xi`.
pub fn bounding_radii(size: usize, xi: f64) -> Vec<f64> {
    let two_n = 2 * size as u64;
    (0..size as u64)
        .map(|n| binomial_f64(two_n, size as u64 - n) * xi)
        .collect()
}

/// Radii for `|v_n|`, `n = 0..N`, containing `{mu_rec(v) <= 1}`.
pub fn volume_radii(size: usize) -> Vec<f64> {
    let two_n = 2 * size as u64;
    (0..=size as u64)
        .map(|n| binomial_f64(two_n, size as u64 - n))
        .collect()
}

fn disks_volume(radii: &[f64]) -> f64 {
    radii.iter().map(|r| PI * r * r).product()
}

fn sample_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let u: f64 = rng.gen();
    let t: f64 = rng.gen();
    Complex64::from_polar(radius * u.sqrt(), 2.0 * PI * t)
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `classify` on `samples` uniform points in the product of disks and
/// tallies hits. `classify` returns `Some(hit)` or `None` for a rejection.
fn run<F>(
    radii: &[f64],
    samples: u64,
    seed: u64,
    workers: usize,
    classify: F,
) -> Result<Tally, NumericError>
where
    F: Fn(&[Complex64]) -> Option<bool> + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    let work = |chunk: u64| {
        let mut rng = chunk_rng(seed, chunk);
        let start = chunk * CHUNK_SIZE;
        let end = (start + CHUNK_SIZE).min(samples);
        let mut point = vec![Complex64::new(0.0, 0.0); radii.len()];
        let mut tally = Tally::default();
        for _ in start..end {
            for (p, &r) in point.iter_mut().zip(radii) {
                *p = sample_disk(&mut rng, r);
            }
            match classify(&point) {
                Some(true) => tally.hits += 1,
                Some(false) => {}
                None => tally.rejected += 1,
            }
        }
        tally
    };
    let tallies: Vec<Tally> = if workers <= 1 {
        (0..chunks).map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| NumericError::InvalidArgument(e.to_string()))?;
        pool.install(|| (0..chunks).into_par_iter().map(work).collect())
    };
    Ok(tallies.into_iter().fold(Tally::default(), |a, t| Tally {
        hits: a.hits + t.hits,
        rejected: a.rejected + t.rejected,
    }))
}

fn check_samples(samples: u64) -> Result<(), NumericError> {
    if samples < MIN_SAMPLES {
        return Err(NumericError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

/// Estimate of `h_N(xi) = lambda_2N{ b : nu_rec(b) <= xi }`.
pub fn mc_hn(
    size: usize,
    xi: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, NumericError> {
    check_samples(samples)?;
    if size == 0 || xi.is_nan() || xi < 1.0 {
        return Err(NumericError::InvalidArgument(format!(
            "need N >= 1 and xi >= 1, got N = {size}, xi = {xi}"
        )));
    }
    let radii = bounding_radii(size, xi);
    let tally = run(&radii, samples, seed, workers, |b| {
        let p = MonicRecip::new(b.to_vec()).ok()?;
        nu_rec(&p, DEFAULT_TOL).ok().map(|nu| nu <= xi)
    })?;
    Ok(McEstimate::from_tally(tally, samples, seed, disks_volume(&radii)))
}

/// Estimate of the volume of `{ v in C^(N+1) : mu_rec(v) <= 1 }`.
pub fn mc_volume(
    size: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, NumericError> {
    check_samples(samples)?;
    if size == 0 {
        return Err(NumericError::InvalidArgument("need N >= 1".into()));
    }
    let radii = volume_radii(size);
    let tally = run(&radii, samples, seed, workers, |v| {
        let p = RecipLaurent::new(v.to_vec()).ok()?;
        mu_rec(&p, DEFAULT_TOL).ok().map(|mu| mu <= 1.0)
    })?;
    Ok(McEstimate::from_tally(tally, samples, seed, disks_volume(&radii)))
}

/// Samples an `inflation`-times larger product of disks and counts points
/// with `nu_rec <= xi` that fall outside the nominal bounding region.
/// Returns `(inside_hits, outside_hits)`.
pub fn containment_check(
    size: usize,
    xi: f64,
    samples: u64,
    seed: u64,
    inflation: f64,
) -> Result<(u64, u64), NumericError> {
    let nominal = bounding_radii(size, xi);
    let inflated: Vec<f64> = nominal.iter().map(|r| r * inflation).collect();
    let outside = run(&inflated, samples, seed, 1, |b| {
        let outside = b.iter().zip(&nominal).any(|(z, r)| z.norm() > *r);
        if !outside {
            return Some(false);
        }
        let p = MonicRecip::new(b.to_vec()).ok()?;
        nu_rec(&p, DEFAULT_TOL).ok().map(|nu| nu <= xi)
    })?;
    let inside = run(&inflated, samples, seed, 1, |b| {
        if b.iter().zip(&nominal).any(|(z, r)| z.norm() > *r) {
            return Some(false);
        }
        let p = MonicRecip::new(b.to_vec()).ok()?;
        nu_rec(&p, DEFAULT_TOL).ok().map(|nu| nu <= xi)
    })?;
    Ok((inside.hits, outside.hits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_examples() {
        assert_eq!(bounding_radii(1, 1.5), vec![3.0]);
        assert_eq!(bounding_radii(2, 1.0), vec![6.0, 4.0]);
        assert_eq!(bounding_radii(1, 1.0), vec![2.0]);
        assert_eq!(volume_radii(2), vec![6.0, 4.0, 1.0]);
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_hn(1, 1.5, 100, 1, 1).is_err());
        assert!(mc_volume(1, 100, 1, 1).is_err());
        assert!(mc_hn(1, 0.5, 20_000, 1, 1).is_err());
    }

    #[test]
    fn h_at_one_is_tiny() {
        let e = mc_hn(1, 1.0, 20_000, 7, 1).unwrap();
        // The set {nu_rec <= 1} is the segment b in [-2, 2]: measure zero.
        assert_eq!(e.hits, 0);
        assert_eq!(e.mean, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let a = mc_hn(1, 1.5, 40_000, 11, 1).unwrap();
        let b = mc_hn(1, 1.5, 40_000, 11, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn std_error_formula() {
        let e = mc_volume(1, 20_000, 3, 1).unwrap();
        let p = e.hits as f64 / e.samples as f64;
        let expected = e.region_volume * (p * (1.0 - p) / e.samples as f64).sqrt();
        assert_eq!(e.std_error, expected);
    }
}
