//! Cluster-validity indices: silhouette widths and the gap statistic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::DistanceMatrix;
use crate::hclust::{cut_tree, hierarchical_cluster, ClusterError, Linkage};
use crate::par::{self, Execution};

#[derive(Debug, Error, PartialEq)]
pub enum ValidityError {
    #[error("silhouette needs at least two clusters")]
    SingleCluster,
    #[error("{labels} labels for {points} points")]
    LengthMismatch { labels: usize, points: usize },
    #[error("data has {distinct} distinct points; need at least {needed}")]
    DegenerateData { distinct: usize, needed: usize },
    #[error("points have inconsistent dimensions")]
    Ragged,
    #[error("no k values to choose from")]
    EmptyCurves,
    #[error("silhouette and gap curves cover different k values")]
    CurveMismatch,
    #[error("k range {k_min}..={k_max} is empty or starts below 2")]
    BadRange { k_min: usize, k_max: usize },
    #[error("gap statistic needs at least one reference replicate")]
    NoReplicates,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    pub values: Vec<f64>,
    pub average: f64,
}

/// Per-point silhouette widths. Points alone in their cluster score 0.
pub fn silhouette(labels: &[usize], d: &DistanceMatrix) -> Result<Silhouette, ValidityError> {
    let n = d.len();
    if labels.len() != n {
        return Err(ValidityError::LengthMismatch {
            labels: labels.len(),
            points: n,
        });
    }
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() < 2 {
        return Err(ValidityError::SingleCluster);
    }
    let dense: Vec<usize> = labels.iter().map(|l| ids.binary_search(l).unwrap()).collect();
    let k = ids.len();
    let mut sizes = vec![0usize; k];
    for &c in &dense {
        sizes[c] += 1;
    }
    let mut values = Vec::with_capacity(n);
    let mut sums = vec![0.0; k];
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if j != i {
                sums[dense[j]] += d.get(i, j);
            }
        }
        let own = dense[i];
        if sizes[own] == 1 {
            values.push(0.0);
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        values.push(if m > 0.0 { (b - a) / m } else { 0.0 });
    }
    let average = values.iter().sum::<f64>() / n as f64;
    Ok(Silhouette { values, average })
}

/// Pooled within-cluster sum of squared distances to cluster centroids,
/// `W_k = sum_r D_r / (2 n_r)`.
pub fn within_dispersion(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let dim = points.first().map_or(0, Vec::len);
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(p) {
            *s += v;
        }
    }
    let centroids: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| s.into_iter().map(|v| if c > 0 { v / c as f64 } else { 0.0 }).collect())
        .collect();
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| {
            p.iter()
                .zip(&centroids[l])
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapConfig {
    pub k_min: usize,
    pub k_max: usize,
    /// Number of uniform reference data sets `B`.
    pub iterations: usize,
    pub seed: u64,
    pub linkage: Linkage,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            k_min: 2,
            k_max: 15,
            iterations: 100,
            seed: 42,
            linkage: Linkage::Ward,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub k: usize,
    pub log_w: f64,
    pub expected_log_w: f64,
    pub gap: f64,
    /// `sd_k * sqrt(1 + 1/B)`.
    pub s: f64,
}

/// Largest usable k: beyond `distinct - 1` some partition is all ties and
/// `W_k` can vanish.
pub fn usable_k_max(points: &[Vec<f64>], k_max: usize) -> usize {
    k_max.min(count_distinct(points).saturating_sub(1))
}

pub fn count_distinct(points: &[Vec<f64>]) -> usize {
    let mut keys: Vec<Vec<u64>> = points
        .iter()
        .map(|p| p.iter().map(|v| v.to_bits()).collect())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn log_dispersions(
    points: &[Vec<f64>],
    ks: &[usize],
    linkage: Linkage,
    exec: Execution,
) -> Result<Vec<f64>, ValidityError> {
    let d = DistanceMatrix::from_points(points, exec);
    let tree = hierarchical_cluster(&d, linkage)?;
    ks.iter()
        .map(|&k| Ok(within_dispersion(points, &cut_tree(&tree, k)?).ln()))
        .collect()
}

/// One uniform reference sample over the bounding box of `points`. Replicate
/// `b` draws from ChaCha8 seeded with `seed` on stream `b`, row by row.
pub fn reference_sample(points: &[Vec<f64>], seed: u64, replicate: u64) -> Vec<Vec<f64>> {
    let dim = points.first().map_or(0, Vec::len);
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for (c, &v) in p.iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    (0..points.len())
        .map(|_| {
            (0..dim)
                .map(|c| lo[c] + rng.random::<f64>() * (hi[c] - lo[c]))
                .collect()
        })
        .collect()
}

pub fn gap_statistic(points: &[Vec<f64>], cfg: &GapConfig) -> Result<Vec<GapPoint>, ValidityError> {
    let dim = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != dim) {
        return Err(ValidityError::Ragged);
    }
    if cfg.iterations == 0 {
        return Err(ValidityError::NoReplicates);
    }
    if cfg.k_min < 2 || cfg.k_max < cfg.k_min {
        return Err(ValidityError::BadRange {
            k_min: cfg.k_min,
            k_max: cfg.k_max,
        });
    }
    let k_hi = usable_k_max(points, cfg.k_max);
    if k_hi < cfg.k_min {
        return Err(ValidityError::DegenerateData {
            distinct: count_distinct(points),
            needed: cfg.k_min + 1,
        });
    }
    let ks: Vec<usize> = (cfg.k_min..=k_hi).collect();
    let observed = log_dispersions(points, &ks, cfg.linkage, cfg.exec)?;
    let reference: Vec<Vec<f64>> = par::map_range(cfg.exec, cfg.iterations, |b| {
        let sample = reference_sample(points, cfg.seed, b as u64);
        log_dispersions(&sample, &ks, cfg.linkage, Execution::Sequential)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let bf = cfg.iterations as f64;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(idx, &k)| {
            let mean = reference.iter().map(|r| r[idx]).sum::<f64>() / bf;
            let sd = if cfg.iterations > 1 {
                (reference.iter().map(|r| (r[idx] - mean).powi(2)).sum::<f64>() / (bf - 1.0)).sqrt()
            } else {
                0.0
            };
            GapPoint {
                k,
                log_w: observed[idx],
                expected_log_w: mean,
                gap: mean - observed[idx],
                s: sd * (1.0 + 1.0 / bf).sqrt(),
            }
        })
        .collect())
}

/// Smallest k with `Gap(k) >= Gap(k+1) - s_{k+1}`.
pub fn gap_choice(curve: &[GapPoint]) -> Option<usize> {
    curve
        .windows(2)
        .find(|w| w[0].gap >= w[1].gap - w[1].s)
        .map(|w| w[0].k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SilhouettePoint {
    pub k: usize,
    pub average: f64,
}

/// Silhouette average for every k in `ks` from one tree.
pub fn silhouette_curve(
    d: &DistanceMatrix,
    tree: &crate::hclust::Dendrogram,
    ks: &[usize],
    exec: Execution,
) -> Result<Vec<SilhouettePoint>, ValidityError> {
    par::map_slice(exec, ks, |&k| {
        let labels = cut_tree(tree, k)?;
        Ok(SilhouettePoint {
            k,
            average: silhouette(&labels, d)?.average,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub k: usize,
    pub gap_k: Option<usize>,
    pub agreement: bool,
}

/// k with the highest average silhouette (smallest k on ties), together with
/// whether the gap criterion picks the same k.
pub fn select_k(sil: &[SilhouettePoint], gap: &[GapPoint]) -> Result<Selection, ValidityError> {
    if sil.is_empty() {
        return Err(ValidityError::EmptyCurves);
    }
    if !gap.is_empty() && (gap.len() != sil.len() || gap.iter().zip(sil).any(|(g, s)| g.k != s.k)) {
        return Err(ValidityError::CurveMismatch);
    }
    let mut best = sil[0];
    for p in &sil[1..] {
        if p.average > best.average {
            best = *p;
        }
    }
    let gap_k = gap_choice(gap);
    Ok(Selection {
        k: best.k,
        gap_k,
        agreement: gap_k == Some(best.k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(xs: &[f64]) -> DistanceMatrix {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        DistanceMatrix::from_points(&pts, Execution::Sequential)
    }

    #[test]
    fn silhouette_basics() {
        let d = dm(&[0.0, 1.0, 10.0, 11.0]);
        let s = silhouette(&[0, 0, 1, 1], &d).unwrap();
        // a = 1, b = mean(10, 11) = 10.5 for point 0
        assert!((s.values[0] - 9.5 / 10.5).abs() < 1e-12);
        assert!(s.average > 0.85);
        assert_eq!(silhouette(&[3, 3, 3, 3], &d), Err(ValidityError::SingleCluster));
        let single = silhouette(&[0, 1, 1, 1], &d).unwrap();
        assert_eq!(single.values[0], 0.0);
        assert!(matches!(silhouette(&[0, 1], &d), Err(ValidityError::LengthMismatch { .. })));
    }

    #[test]
    fn dispersion_matches_pairwise_form() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![5.0, 5.0], vec![5.0, 7.0], vec![6.0, 6.0]];
        let labels = [0, 0, 1, 1, 1];
        let mut pairwise = 0.0;
        for r in 0..2 {
            let members: Vec<&Vec<f64>> = pts.iter().zip(&labels).filter(|(_, &l)| l == r).map(|(p, _)| p).collect();
            let mut dsum = 0.0;
            for a in &members {
                for b in &members {
                    dsum += a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
                }
            }
            pairwise += dsum / (2.0 * members.len() as f64);
        }
        assert!((within_dispersion(&pts, &labels) - pairwise).abs() < 1e-12);
    }

    #[test]
    fn gap_rule() {
        let p = |k, gap, s| GapPoint { k, log_w: 0.0, expected_log_w: 0.0, gap, s };
        assert_eq!(gap_choice(&[p(2, 0.1, 0.01), p(3, 0.5, 0.01), p(4, 0.49, 0.02), p(5, 0.3, 0.0)]), Some(3));
        assert_eq!(gap_choice(&[p(2, 0.1, 0.0), p(3, 0.2, 0.0)]), None);
    }

    #[test]
    fn selection_ties_prefer_small_k() {
        let s = |k, average| SilhouettePoint { k, average };
        let sel = select_k(&[s(2, 0.5), s(3, 0.7), s(4, 0.7)], &[]).unwrap();
        assert_eq!(sel.k, 3);
        assert!(!sel.agreement);
        assert_eq!(select_k(&[], &[]), Err(ValidityError::EmptyCurves));
    }

    #[test]
    fn degenerate_inputs() {
        let same = vec![vec![1.0, 2.0]; 10];
        assert!(matches!(
            gap_statistic(&same, &GapConfig { iterations: 2, ..Default::default() }),
            Err(ValidityError::DegenerateData { distinct: 1, .. })
        ));
    }
}
