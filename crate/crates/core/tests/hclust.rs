mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use papertrail::compositional::DistanceMatrix;
use papertrail::hclust::{cut_tree, hierarchical_cluster, ClusterError, Linkage};
use papertrail::par::Execution;

use common::{brute_force_agglomerate, dendrogram_steps};

fn points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect()
}

#[test]
fn merge_sequences_match_brute_force_on_clustered_data() {
    // blobs stress the nearest-neighbour cache more than uniform noise
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let n = rng.random_range(10..=25);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let c = (i % 3) as f64 * 4.0;
                vec![c + rng.random::<f64>(), c - rng.random::<f64>()]
            })
            .collect();
        let d = DistanceMatrix::from_points(&pts, Execution::Sequential);
        for linkage in Linkage::ALL {
            let ours = dendrogram_steps(&hierarchical_cluster(&d, linkage).unwrap());
            let oracle = brute_force_agglomerate(&pts, linkage);
            for (a, b) in ours.iter().zip(&oracle) {
                assert_eq!((&a.0, &a.1), (&b.0, &b.1), "{linkage:?}");
                assert!((a.2 - b.2).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn merge_ids_follow_step_numbering() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let pts = points(&mut rng, 12, 2);
    let d = DistanceMatrix::from_points(&pts, Execution::Sequential);
    let tree = hierarchical_cluster(&d, Linkage::Average).unwrap();
    let n = tree.leaves;
    let mut used = BTreeSet::new();
    for (step, m) in tree.merges.iter().enumerate() {
        assert!(m.left < m.right && m.right < n + step);
        assert!(used.insert(m.left) && used.insert(m.right), "node merged twice");
    }
    assert_eq!(tree.merges.last().unwrap().size, n);
}

#[test]
fn ties_resolve_to_the_smallest_pair() {
    // every pair at the same distance; a merged cluster keeps its smallest
    // leaf's slot, so it keeps absorbing the next leaf
    let d = DistanceMatrix::from_rows(4, vec![0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
    for linkage in [Linkage::Complete, Linkage::Average] {
        let tree = hierarchical_cluster(&d, linkage).unwrap();
        assert_eq!((tree.merges[0].left, tree.merges[0].right), (0, 1));
        assert_eq!((tree.merges[1].left, tree.merges[1].right), (2, 4));
        assert_eq!((tree.merges[2].left, tree.merges[2].right), (3, 5));
    }
}

#[test]
fn errors() {
    let one = DistanceMatrix::from_points(&[vec![0.0]], Execution::Sequential);
    assert_eq!(hierarchical_cluster(&one, Linkage::Ward), Err(ClusterError::FewerThanTwoPoints(1)));
    let two = DistanceMatrix::from_points(&[vec![0.0], vec![1.0]], Execution::Sequential);
    let tree = hierarchical_cluster(&two, Linkage::Ward).unwrap();
    assert_eq!(cut_tree(&tree, 3), Err(ClusterError::KOutOfRange { k: 3, n: 2 }));
    assert_eq!(cut_tree(&tree, 0), Err(ClusterError::KOutOfRange { k: 0, n: 2 }));
    assert!("single".parse::<Linkage>().is_err());
    assert_eq!("Ward.D2".parse::<Linkage>().unwrap(), Linkage::Ward);
}

proptest! {
    #[test]
    fn cuts_are_nested_partitions(seed in 0u64..1000, n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = points(&mut rng, n, 3);
        let d = DistanceMatrix::from_points(&pts, Execution::Sequential);
        let tree = hierarchical_cluster(&d, Linkage::Ward).unwrap();
        let mut prev: Option<Vec<usize>> = None;
        for k in (1..=n).rev() {
            let labels = cut_tree(&tree, k).unwrap();
            let distinct: BTreeSet<usize> = labels.iter().copied().collect();
            prop_assert_eq!(distinct.len(), k);
            // labels appear in order of first leaf
            let mut next = 0;
            for &l in &labels {
                prop_assert!(l <= next);
                if l == next { next += 1; }
            }
            // coarser cut never splits a finer cluster
            if let Some(p) = &prev {
                for i in 0..n {
                    for j in 0..n {
                        if p[i] == p[j] {
                            prop_assert_eq!(labels[i], labels[j]);
                        }
                    }
                }
            }
            prev = Some(labels);
        }
    }

    #[test]
    fn heights_are_monotone_for_every_linkage(seed in 0u64..1000, n in 2usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = points(&mut rng, n, 2);
        let d = DistanceMatrix::from_points(&pts, Execution::Sequential);
        for linkage in Linkage::ALL {
            let tree = hierarchical_cluster(&d, linkage).unwrap();
            prop_assert!(tree.merges.windows(2).all(|w| w[0].height <= w[1].height + 1e-12));
        }
    }
}
