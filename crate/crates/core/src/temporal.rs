//! End-to-end temporal clustering of researcher profiles: period counts,
//! compositions, CLR coordinates, agglomeration, k selection and centroids.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositional::{
    bin_counts, clr, to_composition, Composition, CompositionError, DistanceMatrix, PeriodWindows,
    WindowError, ZeroReplacement,
};
use crate::hclust::{cut_tree, hierarchical_cluster, ClusterError, Dendrogram, Linkage};
use crate::par::Execution;
use crate::resolve::ResearcherProfile;
use crate::validity::{
    count_distinct, gap_statistic, select_k, silhouette_curve, usable_k_max, GapConfig, GapPoint,
    SilhouettePoint, ValidityError,
};

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error("need at least two clusterable profiles, got {0}")]
    TooFewProfiles(usize),
    #[error("cluster {0} has no members")]
    EmptyCluster(usize),
    #[error("{assignments} assignments for {compositions} compositions")]
    LengthMismatch { assignments: usize, compositions: usize },
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Validity(#[from] ValidityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub windows: PeriodWindows,
    pub linkage: Linkage,
    pub zero_replacement: ZeroReplacement,
    pub k_min: usize,
    pub k_max: usize,
    pub gap_iterations: usize,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            windows: PeriodWindows::default(),
            linkage: Linkage::Ward,
            zero_replacement: ZeroReplacement::default(),
            k_min: 2,
            k_max: 15,
            gap_iterations: 100,
            seed: 42,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCentroid {
    /// 1-based, largest cluster first.
    pub cluster: usize,
    pub size: usize,
    pub percentage: f64,
    pub centroid: Vec<f64>,
}

/// Mean raw composition per cluster. `assignments` must use labels `0..k`.
pub fn cluster_centroids(
    assignments: &[usize],
    k: usize,
    compositions: &[Composition],
) -> Result<Vec<ClusterCentroid>, PipelineError> {
    if assignments.len() != compositions.len() {
        return Err(PipelineError::LengthMismatch {
            assignments: assignments.len(),
            compositions: compositions.len(),
        });
    }
    let dim = compositions.first().map_or(0, Composition::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut sizes = vec![0usize; k];
    for (&a, c) in assignments.iter().zip(compositions) {
        if a >= k {
            return Err(PipelineError::EmptyCluster(a));
        }
        sizes[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(c.parts()) {
            *s += v;
        }
    }
    let total = assignments.len() as f64;
    (0..k)
        .map(|c| {
            if sizes[c] == 0 {
                return Err(PipelineError::EmptyCluster(c));
            }
            Ok(ClusterCentroid {
                cluster: c + 1,
                size: sizes[c],
                percentage: 100.0 * sizes[c] as f64 / total,
                centroid: sums[c].iter().map(|s| s / sizes[c] as f64).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedProfile {
    pub profile_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub profile_id: String,
    pub counts: [u64; 3],
    pub composition: Composition,
    pub clr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSolution {
    pub k: usize,
    pub gap_k: Option<usize>,
    pub agreement: bool,
    pub config: PipelineConfig,
    /// profile id to 1-based cluster label, clusters numbered by size
    pub assignments: BTreeMap<String, usize>,
    pub clusters: Vec<ClusterCentroid>,
    pub silhouette: Vec<SilhouettePoint>,
    pub gap: Vec<GapPoint>,
    pub excluded: Vec<ExcludedProfile>,
    pub points: Vec<ProfilePoint>,
    pub dendrogram: Dendrogram,
}

impl ClusterSolution {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<ClusterSolution> {
        serde_json::from_str(s)
    }

    /// Labels in the order of `points`.
    pub fn labels(&self) -> Vec<usize> {
        self.points.iter().map(|p| self.assignments[&p.profile_id]).collect()
    }
}

/// Builds the per-profile points, skipping profiles without publications.
pub fn profile_points(
    profiles: &[ResearcherProfile],
    config: &PipelineConfig,
) -> Result<(Vec<ProfilePoint>, Vec<ExcludedProfile>), PipelineError> {
    config.windows.validate()?;
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for p in profiles {
        let counts = match bin_counts(&p.pubs_by_year, &config.windows) {
            Ok(c) => c,
            Err(CompositionError::AllZero) => {
                excluded.push(ExcludedProfile {
                    profile_id: p.profile_id.clone(),
                    reason: "no publications".into(),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let replaced = to_composition(&counts, config.zero_replacement)?;
        points.push(ProfilePoint {
            profile_id: p.profile_id.clone(),
            counts,
            composition: Composition::from_counts(&counts)?,
            clr: clr(&replaced)?.into_inner(),
        });
    }
    Ok((points, excluded))
}

pub fn run_pipeline(profiles: &[ResearcherProfile], config: &PipelineConfig) -> Result<ClusterSolution, PipelineError> {
    let (points, excluded) = profile_points(profiles, config)?;
    cluster_points(points, excluded, config)
}

/// Clusters prepared points; exposed so callers can feed counts directly.
pub fn cluster_points(
    points: Vec<ProfilePoint>,
    excluded: Vec<ExcludedProfile>,
    config: &PipelineConfig,
) -> Result<ClusterSolution, PipelineError> {
    if points.len() < 2 {
        return Err(PipelineError::TooFewProfiles(points.len()));
    }
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.clr.clone()).collect();
    let k_hi = usable_k_max(&coords, config.k_max);
    if k_hi < config.k_min.max(2) {
        return Err(ValidityError::DegenerateData {
            distinct: count_distinct(&coords),
            needed: config.k_min.max(2) + 1,
        }
        .into());
    }
    let ks: Vec<usize> = (config.k_min..=k_hi).collect();
    let d = DistanceMatrix::from_points(&coords, config.exec);
    let tree = hierarchical_cluster(&d, config.linkage)?;
    let sil = silhouette_curve(&d, &tree, &ks, config.exec)?;
    let gap = gap_statistic(
        &coords,
        &GapConfig {
            k_min: config.k_min,
            k_max: k_hi,
            iterations: config.gap_iterations,
            seed: config.seed,
            linkage: config.linkage,
            exec: config.exec,
        },
    )?;
    let selection = select_k(&sil, &gap)?;
    let raw_labels = cut_tree(&tree, selection.k)?;

    // renumber so the largest cluster is 0; ties keep first-leaf order
    let mut sizes = vec![0usize; selection.k];
    for &l in &raw_labels {
        sizes[l] += 1;
    }
    let mut order: Vec<usize> = (0..selection.k).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut rank = vec![0usize; selection.k];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let labels: Vec<usize> = raw_labels.iter().map(|&l| rank[l]).collect();

    let comps: Vec<Composition> = points.iter().map(|p| p.composition.clone()).collect();
    let clusters = cluster_centroids(&labels, selection.k, &comps)?;
    let assignments = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| (p.profile_id.clone(), l + 1))
        .collect();
    Ok(ClusterSolution {
        k: selection.k,
        gap_k: selection.gap_k,
        agreement: selection.agreement,
        config: *config,
        assignments,
        clusters,
        silhouette: sil,
        gap,
        excluded,
        points,
        dendrogram: tree,
    })
}
