//! Independent reference implementations and fixture loaders shared by the
//! integration tests. Nothing here calls the code it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::PathBuf;

use papertrail::corpus::read_corpus_file;
use papertrail::funding::{read_grants_csv, RatesTable};
use papertrail::hclust::{Dendrogram, Linkage};
use papertrail::model::{GrantRecord, PublicationRecord};
use papertrail::resolve::{read_careers_csv, CareerRow, MergeMap};
use papertrail::trust::Registry;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub struct CaseStudy {
    pub records: Vec<PublicationRecord>,
    pub merges: MergeMap,
    pub careers: Vec<CareerRow>,
    pub grants: Vec<GrantRecord>,
    pub rates: RatesTable,
    pub registry: Registry,
    /// profile id -> planted archetype (1-based)
    pub truth: BTreeMap<String, usize>,
}

pub fn case_study() -> CaseStudy {
    let dir = fixture("case_study");
    let open = |f: &str| File::open(dir.join(f)).unwrap();
    let mut truth = BTreeMap::new();
    let mut r = csv::Reader::from_reader(open("truth.csv"));
    for row in r.records() {
        let row = row.unwrap();
        truth.insert(row[0].to_string(), row[1].parse().unwrap());
    }
    CaseStudy {
        records: read_corpus_file(&dir.join("corpus.csv")).unwrap().records,
        merges: MergeMap::read_csv(open("merges.csv")).unwrap(),
        careers: read_careers_csv(open("careers.csv")).unwrap(),
        grants: read_grants_csv(open("grants.csv")).unwrap(),
        rates: RatesTable::read_csv(open("rates.csv")).unwrap(),
        registry: Registry::read_csv(open("registry.csv")).unwrap(),
        truth,
    }
}

/// Aitchison distance from the full set of pairwise log-ratios:
/// `d^2 = 1/(2D) sum_i sum_j (ln(x_i/x_j) - ln(y_i/y_j))^2`.
pub fn aitchison_direct(x: &[f64], y: &[f64]) -> f64 {
    let d = x.len();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            let t = (x[i] / x[j]).ln() - (y[i] / y[j]).ln();
            acc += t * t;
        }
    }
    (acc / (2.0 * d as f64)).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn centroid(points: &[Vec<f64>], members: &BTreeSet<usize>) -> Vec<f64> {
    let mut c = vec![0.0; points[0].len()];
    for &m in members {
        for (ci, v) in c.iter_mut().zip(&points[m]) {
            *ci += v;
        }
    }
    c.iter().map(|v| v / members.len() as f64).collect()
}

/// Linkage distance between two clusters computed from its definition.
pub fn linkage_distance(points: &[Vec<f64>], a: &BTreeSet<usize>, b: &BTreeSet<usize>, linkage: Linkage) -> f64 {
    match linkage {
        Linkage::Complete => a
            .iter()
            .flat_map(|&i| b.iter().map(move |&j| (i, j)))
            .map(|(i, j)| dist(&points[i], &points[j]))
            .fold(0.0, f64::max),
        Linkage::Average => {
            let s: f64 = a
                .iter()
                .flat_map(|&i| b.iter().map(move |&j| (i, j)))
                .map(|(i, j)| dist(&points[i], &points[j]))
                .sum();
            s / (a.len() * b.len()) as f64
        }
        Linkage::Ward => {
            let (na, nb) = (a.len() as f64, b.len() as f64);
            (2.0 * na * nb / (na + nb)).sqrt() * dist(&centroid(points, a), &centroid(points, b))
        }
    }
}

pub type MergeStep = (BTreeSet<usize>, BTreeSet<usize>, f64);

/// Naive agglomeration: every step recomputes all cluster-pair distances.
pub fn brute_force_agglomerate(points: &[Vec<f64>], linkage: Linkage) -> Vec<MergeStep> {
    let mut clusters: Vec<BTreeSet<usize>> = (0..points.len()).map(|i| BTreeSet::from([i])).collect();
    let mut steps = Vec::new();
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let d = linkage_distance(points, &clusters[i], &clusters[j], linkage);
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        let (i, j, d) = best;
        let b = clusters.remove(j);
        let a = clusters[i].clone();
        clusters[i].extend(b.iter().copied());
        steps.push(ordered(a, b, d));
    }
    steps
}

fn ordered(a: BTreeSet<usize>, b: BTreeSet<usize>, d: f64) -> MergeStep {
    if a.first() < b.first() {
        (a, b, d)
    } else {
        (b, a, d)
    }
}

/// Merge steps of a dendrogram expressed as leaf sets.
pub fn dendrogram_steps(tree: &Dendrogram) -> Vec<MergeStep> {
    let n = tree.leaves;
    let mut members: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    let mut steps = Vec::new();
    for m in &tree.merges {
        let a = members[m.left].clone();
        let b = members[m.right].clone();
        let mut u = a.clone();
        u.extend(b.iter().copied());
        members.push(u);
        steps.push(ordered(a, b, m.height));
    }
    steps
}

/// Distinct unordered author pairs over all papers.
pub fn brute_force_pairs(author_lists: &[Vec<String>]) -> BTreeSet<(String, String)> {
    let mut pairs = BTreeSet::new();
    for list in author_lists {
        for a in list {
            for b in list {
                if a < b {
                    pairs.insert((a.clone(), b.clone()));
                }
            }
        }
    }
    pairs
}

/// Fraction of neighbour pairs that are themselves linked.
pub fn brute_force_clustering(pairs: &BTreeSet<(String, String)>, node: &str) -> f64 {
    let linked = |a: &str, b: &str| {
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        pairs.contains(&(x.to_string(), y.to_string()))
    };
    let nbrs: Vec<String> = pairs
        .iter()
        .filter_map(|(a, b)| {
            if a == node {
                Some(b.clone())
            } else if b == node {
                Some(a.clone())
            } else {
                None
            }
        })
        .collect();
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut closed = 0;
    for i in 0..k {
        for j in i + 1..k {
            if linked(&nbrs[i], &nbrs[j]) {
                closed += 1;
            }
        }
    }
    closed as f64 / (k * (k - 1) / 2) as f64
}
