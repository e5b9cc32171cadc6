//! Co-authorship graph, local clustering, citation summaries and author-count
//! outliers.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::PublicationRecord;
use crate::par::{self, Execution};
use crate::resolve::{ProfileIndex, ResearcherProfile};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("node '{0}' is not in the graph")]
    NodeNotFound(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("threshold must be at least 1")]
    BadThreshold,
    #[error("edges.csv line {line}: {reason}")]
    MalformedEdge { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected weighted graph; weights count shared papers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoauthorGraph {
    adjacency: BTreeMap<String, BTreeMap<String, u32>>,
}

impl CoauthorGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: &str) {
        self.adjacency.entry(node.to_string()).or_default();
    }

    /// Adds `weight` to the edge between two distinct nodes.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: u32) {
        if a == b || weight == 0 {
            return;
        }
        *self.adjacency.entry(a.to_string()).or_default().entry(b.to_string()).or_default() += weight;
        *self.adjacency.entry(b.to_string()).or_default().entry(a.to_string()).or_default() += weight;
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.adjacency.keys().map(String::as_str)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.adjacency.contains_key(node)
    }

    pub fn neighbors(&self, node: &str) -> Result<&BTreeMap<String, u32>, NetworkError> {
        self.adjacency
            .get(node)
            .ok_or_else(|| NetworkError::NodeNotFound(node.to_string()))
    }

    pub fn degree(&self, node: &str) -> Result<usize, NetworkError> {
        Ok(self.neighbors(node)?.len())
    }

    pub fn weight(&self, a: &str, b: &str) -> u32 {
        self.adjacency.get(a).and_then(|n| n.get(b)).copied().unwrap_or(0)
    }

    /// Edges as `(a, b, weight)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(&str, &str, u32)> {
        let mut out = Vec::new();
        for (a, nbrs) in &self.adjacency {
            for (b, &w) in nbrs.range::<String, _>((std::ops::Bound::Excluded(a), std::ops::Bound::Unbounded)) {
                out.push((a.as_str(), b.as_str(), w));
            }
        }
        out
    }

    pub fn write_edges_csv<W: Write>(&self, out: W) -> Result<(), NetworkError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["profile_a", "profile_b", "weight"])?;
        for (a, b, weight) in self.edges() {
            w.write_record([a, b, &weight.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_edges_csv<R: Read>(source: R) -> Result<CoauthorGraph, NetworkError> {
        let mut r = csv::Reader::from_reader(source);
        let mut g = CoauthorGraph::new();
        for row in r.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let bad = |reason: &str| NetworkError::MalformedEdge {
                line,
                reason: reason.to_string(),
            };
            if row.len() != 3 {
                return Err(bad("expected 3 fields"));
            }
            let weight: u32 = row[2].trim().parse().map_err(|_| bad("weight is not a positive integer"))?;
            if weight == 0 || row[0] == row[1] {
                return Err(bad("self-loop or zero weight"));
            }
            g.add_edge(row[0].trim(), row[1].trim(), weight);
        }
        Ok(g)
    }
}

/// Nodes are profiles (or mention keys for unresolved authors); each paper
/// links every pair of its distinct authors once.
pub fn build_coauthor_graph(records: &[PublicationRecord], profiles: &[ResearcherProfile]) -> CoauthorGraph {
    let index = ProfileIndex::new(profiles);
    let mut g = CoauthorGraph::new();
    for r in records {
        let ids: BTreeSet<String> = r.authors.iter().map(|m| index.profile_id_or_key(m)).collect();
        let ids: Vec<&String> = ids.iter().collect();
        for (i, a) in ids.iter().enumerate() {
            g.add_node(a);
            for b in &ids[i + 1..] {
                g.add_edge(a, b, 1);
            }
        }
    }
    g
}

/// `2 T / (deg (deg - 1))`, zero for degree below two.
pub fn local_clustering_coefficient(graph: &CoauthorGraph, node: &str) -> Result<f64, NetworkError> {
    let nbrs = graph.neighbors(node)?;
    let deg = nbrs.len();
    if deg < 2 {
        return Ok(0.0);
    }
    let mut links = 0usize;
    for u in nbrs.keys() {
        let un = &graph.adjacency[u];
        links += nbrs.keys().filter(|v| *v > u && un.contains_key(*v)).count();
    }
    Ok(2.0 * links as f64 / (deg * (deg - 1)) as f64)
}

/// Mean local coefficient over all nodes; zero for an empty graph.
pub fn average_clustering(graph: &CoauthorGraph, exec: Execution) -> f64 {
    let nodes: Vec<&str> = graph.nodes().collect();
    if nodes.is_empty() {
        return 0.0;
    }
    let cs = par::map_slice(exec, &nodes, |n| local_clustering_coefficient(graph, n).unwrap_or(0.0));
    cs.iter().sum::<f64>() / nodes.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub total: i64,
    pub uncited_count: usize,
    /// Cited fewer than ten times, uncited included.
    pub low_cited_count: usize,
}

pub fn citation_stats(records: &[PublicationRecord]) -> Result<CitationStats, NetworkError> {
    if records.is_empty() {
        return Err(NetworkError::EmptyCorpus);
    }
    let mut cites: Vec<i64> = records.iter().map(|r| r.times_cited).collect();
    cites.sort_unstable();
    let n = cites.len();
    let total: i64 = cites.iter().sum();
    let median = if n % 2 == 1 {
        cites[n / 2] as f64
    } else {
        (cites[n / 2 - 1] + cites[n / 2]) as f64 / 2.0
    };
    Ok(CitationStats {
        count: n,
        mean: total as f64 / n as f64,
        median,
        total,
        uncited_count: cites.iter().filter(|&&c| c == 0).count(),
        low_cited_count: cites.iter().filter(|&&c| c < 10).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorCountReport {
    pub threshold: usize,
    /// author count -> number of papers
    pub histogram: BTreeMap<usize, usize>,
    pub flagged: Vec<String>,
    pub mean_authors: f64,
    pub field_norm: Option<f64>,
    /// mean author count divided by the supplied field norm
    pub ratio_to_norm: Option<f64>,
}

pub fn author_count_anomalies(
    records: &[PublicationRecord],
    threshold: usize,
    field_norm: Option<f64>,
) -> Result<AuthorCountReport, NetworkError> {
    if threshold == 0 {
        return Err(NetworkError::BadThreshold);
    }
    let mut histogram = BTreeMap::new();
    let mut flagged = Vec::new();
    let mut sum = 0usize;
    for r in records {
        let n = r.authors.len();
        sum += n;
        *histogram.entry(n).or_default() += 1;
        if n > threshold {
            flagged.push(r.publication_id.clone());
        }
    }
    let mean_authors = if records.is_empty() { 0.0 } else { sum as f64 / records.len() as f64 };
    Ok(AuthorCountReport {
        threshold,
        histogram,
        flagged,
        mean_authors,
        field_norm,
        ratio_to_norm: field_norm.filter(|&f| f > 0.0 && !records.is_empty()).map(|f| mean_authors / f),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub profile_id: String,
    pub degree: usize,
    pub strength: u32,
    pub clustering: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_clustering: f64,
    pub mean_degree: f64,
    /// degree -> number of nodes
    pub degree_histogram: BTreeMap<usize, usize>,
    pub citations: Option<CitationStats>,
    pub author_counts: AuthorCountReport,
    pub nodes: Vec<NodeMetrics>,
}

/// All network features for one corpus. Author-count flags are computed on
/// `flag_records`, which may be the unscreened corpus.
pub fn network_report(
    records: &[PublicationRecord],
    flag_records: &[PublicationRecord],
    profiles: &[ResearcherProfile],
    threshold: usize,
    field_norm: Option<f64>,
    exec: Execution,
) -> Result<(NetworkReport, CoauthorGraph), NetworkError> {
    let graph = build_coauthor_graph(records, profiles);
    let names: Vec<&str> = graph.nodes().collect();
    let nodes: Vec<NodeMetrics> = par::map_slice(exec, &names, |n| {
        let nbrs = &graph.adjacency[*n];
        NodeMetrics {
            profile_id: n.to_string(),
            degree: nbrs.len(),
            strength: nbrs.values().sum(),
            clustering: local_clustering_coefficient(&graph, n).unwrap_or(0.0),
        }
    });
    let mut degree_histogram = BTreeMap::new();
    for n in &nodes {
        *degree_histogram.entry(n.degree).or_default() += 1;
    }
    let count = nodes.len().max(1) as f64;
    let report = NetworkReport {
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        average_clustering: nodes.iter().map(|n| n.clustering).sum::<f64>() / count,
        mean_degree: nodes.iter().map(|n| n.degree as f64).sum::<f64>() / count,
        degree_histogram,
        citations: citation_stats(records).ok(),
        author_counts: author_count_anomalies(flag_records, threshold, field_norm)?,
        nodes,
    };
    Ok((report, graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AuthorMention, DocumentType};

    fn paper(id: &str, authors: &[&str], cites: i64) -> PublicationRecord {
        let mut r = PublicationRecord::new(id, 2020, DocumentType::ResearchArticle);
        r.authors = authors.iter().map(|a| AuthorMention::new(*a).with_id(*a)).collect();
        r.times_cited = cites;
        r
    }

    #[test]
    fn triangle_and_disjoint_pairs() {
        let g = build_coauthor_graph(&[paper("p", &["a", "b", "c"], 0)], &[]);
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
        assert_eq!(local_clustering_coefficient(&g, "a").unwrap(), 1.0);
        let g = build_coauthor_graph(&[paper("p", &["a", "b"], 0), paper("q", &["c", "d"], 0)], &[]);
        assert_eq!((g.node_count(), g.edge_count()), (4, 2));
    }

    #[test]
    fn weights_count_shared_papers() {
        let g = build_coauthor_graph(&[paper("p", &["a", "b"], 0), paper("q", &["b", "a", "a"], 0)], &[]);
        assert_eq!(g.weight("a", "b"), 2);
        assert_eq!(g.edges(), vec![("a", "b", 2)]);
    }

    #[test]
    fn star_center_has_zero_clustering() {
        let g = build_coauthor_graph(
            &[paper("1", &["c", "l1"], 0), paper("2", &["c", "l2"], 0), paper("3", &["c", "l3"], 0), paper("4", &["c", "l4"], 0)],
            &[],
        );
        assert_eq!(local_clustering_coefficient(&g, "c").unwrap(), 0.0);
        assert_eq!(local_clustering_coefficient(&g, "l1").unwrap(), 0.0);
        assert!(matches!(local_clustering_coefficient(&g, "zz"), Err(NetworkError::NodeNotFound(_))));
    }

    #[test]
    fn citation_arithmetic() {
        let s = citation_stats(&[paper("a", &["x"], 0), paper("b", &["x"], 41), paper("c", &["x"], 100)]).unwrap();
        assert_eq!((s.mean, s.median, s.total, s.uncited_count), (47.0, 41.0, 141, 1));
        let s = citation_stats(&[paper("a", &["x"], 0), paper("b", &["x"], 0)]).unwrap();
        assert_eq!((s.mean, s.uncited_count), (0.0, 2));
        let s = citation_stats(&[paper("a", &["x"], 3), paper("b", &["x"], 8)]).unwrap();
        assert_eq!(s.median, 5.5);
        assert!(matches!(citation_stats(&[]), Err(NetworkError::EmptyCorpus)));
    }

    #[test]
    fn author_flags() {
        let r = author_count_anomalies(&[paper("a", &["x", "y"], 0)], 25, None).unwrap();
        assert!(r.flagged.is_empty());
        assert_eq!(r.histogram[&2], 1);
        let r = author_count_anomalies(&[], 25, Some(5.0)).unwrap();
        assert!(r.histogram.is_empty());
        assert!(author_count_anomalies(&[], 0, None).is_err());
    }

    #[test]
    fn edges_csv_round_trip() {
        let g = build_coauthor_graph(&[paper("p", &["a", "b", "c"], 0), paper("q", &["a", "b"], 0)], &[]);
        let mut buf = Vec::new();
        g.write_edges_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "profile_a,profile_b,weight\na,b,2\na,c,1\nb,c,1\n");
        assert_eq!(CoauthorGraph::read_edges_csv(&buf[..]).unwrap(), g);
    }
}
