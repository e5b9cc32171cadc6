//! Agglomerative hierarchical clustering via Lance–Williams updates.
//!
//! Each active cluster lives in the slot of its smallest leaf index. Among
//! pairs at the minimal distance the one with the smallest `(slot_a, slot_b)`
//! merges first, so the result never depends on iteration order. Every row
//! caches its nearest neighbour among higher slots, which keeps the typical
//! cost near `O(n^2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::DistanceMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("need at least two points to cluster, got {0}")]
    FewerThanTwoPoints(usize),
    #[error("k = {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("unknown linkage '{0}' (expected ward, complete or average)")]
    UnknownLinkage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    /// Minimum increase in within-cluster sum of squares; heights follow the
    /// usual `sqrt(2 |A||B| / (|A|+|B|)) * |cA - cB|` convention.
    #[default]
    Ward,
    Complete,
    Average,
}

impl Linkage {
    pub const ALL: [Linkage; 3] = [Linkage::Ward, Linkage::Complete, Linkage::Average];

    pub fn as_str(self) -> &'static str {
        match self {
            Linkage::Ward => "ward",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        }
    }

    fn update(self, dki: f64, dkj: f64, dij: f64, ni: f64, nj: f64, nk: f64) -> f64 {
        match self {
            Linkage::Ward => ((nk + ni) * dki + (nk + nj) * dkj - nk * dij) / (ni + nj + nk),
            Linkage::Complete => dki.max(dkj),
            Linkage::Average => (ni * dki + nj * dkj) / (ni + nj),
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Linkage {
    type Err = ClusterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ward" | "ward.d2" => Ok(Linkage::Ward),
            "complete" => Ok(Linkage::Complete),
            "average" | "upgma" => Ok(Linkage::Average),
            _ => Err(ClusterError::UnknownLinkage(s.to_string())),
        }
    }
}

/// One agglomeration step. Leaves are nodes `0..n`; the cluster formed at
/// step `s` is node `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: usize,
    pub linkage: Linkage,
    pub merges: Vec<Merge>,
}

pub fn hierarchical_cluster(d: &DistanceMatrix, linkage: Linkage) -> Result<Dendrogram, ClusterError> {
    let n = d.len();
    if n < 2 {
        return Err(ClusterError::FewerThanTwoPoints(n));
    }
    let mut w = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = d.get(i, j);
            w[i * n + j] = if linkage == Linkage::Ward { v * v } else { v };
        }
    }
    let mut active = vec![true; n];
    let mut node = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut nn = vec![usize::MAX; n];
    let mut nn_dist = vec![f64::INFINITY; n];

    let scan = |w: &[f64], active: &[bool], i: usize| -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in i + 1..n {
            if active[j] && w[i * n + j] < best.1 {
                best = (j, w[i * n + j]);
            }
        }
        best
    };
    for i in 0..n {
        (nn[i], nn_dist[i]) = scan(&w, &active, i);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut i = usize::MAX;
        let mut best = f64::INFINITY;
        for k in 0..n {
            if active[k] && nn[k] != usize::MAX && (i == usize::MAX || nn_dist[k] < best) {
                i = k;
                best = nn_dist[k];
            }
        }
        let j = nn[i];
        let dij = w[i * n + j];
        let (a, b) = (node[i].min(node[j]), node[i].max(node[j]));
        merges.push(Merge {
            left: a,
            right: b,
            height: if linkage == Linkage::Ward { dij.sqrt() } else { dij },
            size: size[i] + size[j],
        });

        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for k in 0..n {
            if !active[k] || k == i || k == j {
                continue;
            }
            let v = linkage.update(w[k * n + i], w[k * n + j], dij, ni, nj, size[k] as f64);
            w[k * n + i] = v;
            w[i * n + k] = v;
        }
        active[j] = false;
        size[i] += size[j];
        node[i] = n + step;

        for k in 0..i {
            if !active[k] {
                continue;
            }
            if nn[k] == i || nn[k] == j {
                (nn[k], nn_dist[k]) = scan(&w, &active, k);
            } else {
                let v = w[k * n + i];
                if v < nn_dist[k] || (v == nn_dist[k] && i < nn[k]) {
                    nn[k] = i;
                    nn_dist[k] = v;
                }
            }
        }
        for k in i + 1..j {
            if active[k] && nn[k] == j {
                (nn[k], nn_dist[k]) = scan(&w, &active, k);
            }
        }
        (nn[i], nn_dist[i]) = scan(&w, &active, i);
    }
    Ok(Dendrogram {
        leaves: n,
        linkage,
        merges,
    })
}

impl Dendrogram {
    /// Flat labels for `k` clusters, numbered `0..k` in order of each
    /// cluster's first leaf.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>, ClusterError> {
        cut_tree(self, k)
    }
}

pub fn cut_tree(dendrogram: &Dendrogram, k: usize) -> Result<Vec<usize>, ClusterError> {
    let n = dendrogram.leaves;
    if k == 0 || k > n {
        return Err(ClusterError::KOutOfRange { k, n });
    }
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (step, m) in dendrogram.merges.iter().take(n - k).enumerate() {
        let id = n + step;
        let a = find(&mut parent, m.left);
        let b = find(&mut parent, m.right);
        parent[a] = id;
        parent[b] = id;
    }
    let mut label_of_root = vec![usize::MAX; 2 * n - 1];
    let mut next = 0;
    let mut labels = Vec::with_capacity(n);
    for leaf in 0..n {
        let r = find(&mut parent, leaf);
        if label_of_root[r] == usize::MAX {
            label_of_root[r] = next;
            next += 1;
        }
        labels.push(label_of_root[r]);
    }
    Ok(labels)
}
