use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::AnalyticsError;
use crate::ingest::Dataset;
use crate::props::MISSING;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// Cluster of each input, `None` for records left out (all days missing).
    pub assignments: Vec<Option<usize>>,
    /// Lloyd iterations performed.
    pub iterations: usize,
    pub converged: bool,
    /// Total squared distance after each assignment step.
    pub distortion_history: Vec<f64>,
}

/// Replaces missing days by the mean of the present ones; `None` if every
/// day is missing.
pub fn impute(positions: &[f64]) -> Option<Vec<f64>> {
    let present: Vec<f64> = positions
        .iter()
        .copied()
        .filter(|p| *p != MISSING)
        .collect();
    if present.is_empty() {
        return None;
    }
    let mean = present.iter().sum::<f64>() / present.len() as f64;
    Some(
        positions
            .iter()
            .map(|&p| if p == MISSING { mean } else { p })
            .collect(),
    )
}

/// k-means over the imputed position vectors of a dataset.
pub fn cluster_kmeans(
    dataset: &Dataset,
    k: usize,
    max_iters: usize,
    seed: u64,
) -> Result<KMeansResult, AnalyticsError> {
    let imputed: Vec<Option<Vec<f64>>> = dataset
        .records()
        .iter()
        .map(|r| impute(&r.positions))
        .collect();
    let points: Vec<Vec<f64>> = imputed.iter().flatten().cloned().collect();
    let inner = kmeans(&points, k, max_iters, seed)?;
    let mut cluster = inner.assignments.into_iter();
    let assignments = imputed
        .iter()
        .map(|p| p.as_ref().and_then(|_| cluster.next().flatten()))
        .collect();
    Ok(KMeansResult {
        assignments,
        ..inner
    })
}

/// Lloyd's algorithm seeded with `k` distinct input points. A cluster that
/// loses all members keeps its previous centroid.
pub fn kmeans(
    points: &[Vec<f64>],
    k: usize,
    max_iters: usize,
    seed: u64,
) -> Result<KMeansResult, AnalyticsError> {
    if k == 0 || k > points.len() {
        return Err(AnalyticsError::InvalidK {
            k,
            points: points.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = rand::seq::index::sample(&mut rng, points.len(), k).into_vec();
    chosen.sort_unstable();
    let mut centroids: Vec<Vec<f64>> = chosen.iter().map(|&i| points[i].clone()).collect();

    let (mut assignments, distortion) = assign(points, &centroids);
    let mut history = vec![distortion];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        update(points, &assignments, &mut centroids);
        let (next, distortion) = assign(points, &centroids);
        history.push(distortion);
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;
    }
    Ok(KMeansResult {
        k,
        centroids,
        assignments: assignments.into_iter().map(Some).collect(),
        iterations,
        converged,
        distortion_history: history,
    })
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid per point (lowest index on ties) and total distortion.
fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let nearest: Vec<(usize, f64)> = points
        .par_iter()
        .map(|p| {
            centroids
                .iter()
                .enumerate()
                .map(|(c, centroid)| (c, squared_distance(p, centroid)))
                .fold(
                    (0, f64::INFINITY),
                    |best, cur| {
                        if cur.1 < best.1 {
                            cur
                        } else {
                            best
                        }
                    },
                )
        })
        .collect();
    // Sequential sum: the same order for any thread count.
    let distortion = nearest.iter().map(|(_, d)| d).sum();
    (nearest.into_iter().map(|(c, _)| c).collect(), distortion)
}

fn update(points: &[Vec<f64>], assignments: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = centroids[0].len();
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    let mut counts = vec![0usize; centroids.len()];
    for (p, &c) in points.iter().zip(assignments) {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(p) {
            *s += v;
        }
    }
    for ((centroid, sum), count) in centroids.iter_mut().zip(sums).zip(counts) {
        if count > 0 {
            *centroid = sum.into_iter().map(|s| s / count as f64).collect();
        }
    }
}
