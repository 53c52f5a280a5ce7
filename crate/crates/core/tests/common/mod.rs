//! Shared generators for the integration suites.
#![allow(dead_code)]

use std::ops::RangeInclusive;
use std::sync::Arc;

use focal_core::{FrameOfDiscernment, MassFunction, Role, SetFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn frame(n: usize) -> Arc<FrameOfDiscernment> {
    Arc::new(FrameOfDiscernment::with_size(n).unwrap())
}

/// Random subset of an `n`-element frame, each element kept with probability `p`.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> u64 {
    (0..n).filter(|_| rng.random_bool(p)).fold(0u64, |m, i| m | 1 << i)
}

/// Extra sets forced into a random support.
#[derive(Clone, Copy, Debug, Default)]
pub struct Forced {
    pub omega: bool,
    pub empty: bool,
}

/// Random mass with a number of distinct focal sets drawn from `k`, values drawn in
/// `(0.05, 1]` then normalized.
pub fn random_mass(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: RangeInclusive<usize>,
    forced: Forced,
) -> MassFunction {
    let fr = frame(n);
    let k = rng.random_range(k);
    let p = rng.random_range(0.2..0.8);
    let mut sets: Vec<u64> = (0..k).map(|_| random_set(rng, n, p)).collect();
    if forced.omega {
        sets.push(fr.omega());
    }
    if forced.empty {
        sets.push(0);
    }
    sets.sort_unstable();
    sets.dedup();
    let raw: Vec<f64> = sets.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    MassFunction::new(fr, sets.into_iter().zip(raw.into_iter().map(|v| v / total))).unwrap()
}

/// Random signed additive function (values in `[-1, 1]`).
pub fn random_signed(rng: &mut ChaCha8Rng, n: usize, k: usize) -> SetFunction {
    let fr = frame(n);
    let p = rng.random_range(0.2..0.8);
    let entries: Vec<(u64, f64)> = (0..k)
        .map(|_| (random_set(rng, n, p), rng.random_range(-1.0..1.0)))
        .collect();
    SetFunction::new(fr, Role::Additive, entries).unwrap()
}

pub fn max_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
