//! Weighted k-means with k-means++ seeding.
//!
//! Shared by palette extraction (Lab space), size clustering (width/height)
//! and colour piles. Every run is seeded, so identical inputs give identical
//! clusterings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    /// Number of independently seeded runs; the lowest-inertia run wins.
    pub n_init: usize,
    pub max_iter: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig { k, seed, n_init: 8, max_iter: 300 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<const D: usize> {
    pub centroids: Vec<[f64; D]>,
    /// Cluster index per input point.
    pub assignment: Vec<usize>,
    /// Weighted sum of squared distances to the assigned centroid.
    pub inertia: f64,
}

pub fn squared_distance<const D: usize>(p: &[f64; D], q: &[f64; D]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Index of the nearest centroid; equidistant centroids resolve to the lowest index.
pub fn nearest<const D: usize>(point: &[f64; D], centroids: &[[f64; D]]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn inertia<const D: usize>(
    points: &[[f64; D]],
    weights: &[f64],
    centroids: &[[f64; D]],
    assignment: &[usize],
) -> f64 {
    points
        .iter()
        .zip(weights)
        .zip(assignment)
        .map(|((p, w), &c)| w * squared_distance(p, &centroids[c]))
        .sum()
}

/// Clusters weighted points.
///
/// Returns at most `config.k` clusters, and exactly `config.k` whenever the
/// input holds at least that many distinct points. Weights must be positive.
pub fn fit<const D: usize>(points: &[[f64; D]], weights: &[f64], config: KMeansConfig) -> Clustering<D> {
    assert_eq!(points.len(), weights.len());
    assert!(config.k >= 1 && !points.is_empty());

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<Clustering<D>> = None;
    for _ in 0..config.n_init.max(1) {
        let seeds = plus_plus_init(points, weights, config.k, &mut rng);
        let run = lloyd(points, weights, seeds, config.max_iter);
        if best.as_ref().map_or(true, |b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    best.expect("at least one run")
}

fn plus_plus_init<const D: usize>(
    points: &[[f64; D]],
    weights: &[f64],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<[f64; D]> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[sample_index(weights, rng)]);

    let mut dist: Vec<f64> = points.iter().map(|p| squared_distance(p, &centroids[0])).collect();
    while centroids.len() < k {
        let scores: Vec<f64> = dist.iter().zip(weights).map(|(d, w)| d * w).collect();
        if scores.iter().sum::<f64>() <= 0.0 {
            // Every point coincides with a chosen centroid.
            break;
        }
        let next = points[sample_index(&scores, rng)];
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, &next));
        }
        centroids.push(next);
    }
    centroids
}

fn sample_index(scores: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = scores.iter().sum();
    let mut target = rng.gen::<f64>() * total;
    let mut last_positive = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s <= 0.0 {
            continue;
        }
        last_positive = i;
        if target < s {
            return i;
        }
        target -= s;
    }
    last_positive
}

fn lloyd<const D: usize>(
    points: &[[f64; D]],
    weights: &[f64],
    mut centroids: Vec<[f64; D]>,
    max_iter: usize,
) -> Clustering<D> {
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    for _ in 0..max_iter {
        centroids = weighted_means(points, weights, &assignment, &centroids);
        repair_empty(points, weights, &mut centroids, &mut assignment);
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    centroids = weighted_means(points, weights, &assignment, &centroids);
    let inertia = inertia(points, weights, &centroids, &assignment);
    Clustering { centroids, assignment, inertia }
}

/// Weighted mean of each cluster; clusters without members keep their previous centre.
pub(crate) fn weighted_means<const D: usize>(
    points: &[[f64; D]],
    weights: &[f64],
    assignment: &[usize],
    previous: &[[f64; D]],
) -> Vec<[f64; D]> {
    let mut sums = vec![[0.0; D]; previous.len()];
    let mut mass = vec![0.0; previous.len()];
    for ((p, &w), &c) in points.iter().zip(weights).zip(assignment) {
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += w * x;
        }
        mass[c] += w;
    }
    sums.into_iter()
        .zip(mass)
        .zip(previous)
        .map(|((mut s, m), prev)| {
            if m > 0.0 {
                s.iter_mut().for_each(|x| *x /= m);
                s
            } else {
                *prev
            }
        })
        .collect()
}

/// Moves centroids that lost all their points onto the point that is
/// currently worst served, so no cluster stays empty while distinct points
/// remain to fill it.
fn repair_empty<const D: usize>(
    points: &[[f64; D]],
    weights: &[f64],
    centroids: &mut [[f64; D]],
    assignment: &mut [usize],
) {
    loop {
        let mut counts = vec![0usize; centroids.len()];
        for &c in assignment.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return;
        };
        let worst = points
            .iter()
            .enumerate()
            .filter(|(i, _)| counts[assignment[*i]] > 1)
            .map(|(i, p)| (i, weights[i] * squared_distance(p, &centroids[assignment[i]])))
            .filter(|(_, d)| *d > 0.0)
            .fold(None::<(usize, f64)>, |acc, (i, d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((i, d)),
            });
        let Some((i, _)) = worst else {
            return;
        };
        centroids[empty] = points[i];
        assignment[i] = empty;
    }
}
