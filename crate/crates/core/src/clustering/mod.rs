//! Threshold clustering of object types.
//!
//! Two object types end up in the same cluster when they are connected by a
//! chain of pairs whose similarity reaches the threshold.

mod tuning;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SimilarityMatrix;

pub use tuning::{distinct_cluster_sets, tune_clusters, tune_with, Threshold, TuneMode, TuningResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(f64),
}

fn check_threshold(threshold: f64) -> Result<(), ClusterError> {
    if (0.0..=1.0).contains(&threshold) {
        Ok(())
    } else {
        Err(ClusterError::ThresholdOutOfRange(threshold))
    }
}

/// A partition of object types into disjoint, non-empty clusters.
///
/// Clusters iterate in order of their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClusterSet(BTreeSet<BTreeSet<String>>);

impl ClusterSet {
    pub fn new(clusters: impl IntoIterator<Item = BTreeSet<String>>) -> Self {
        Self(clusters.into_iter().filter(|c| !c.is_empty()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<String>> {
        self.0.iter()
    }

    pub fn cluster_of(&self, member: &str) -> Option<&BTreeSet<String>> {
        self.0.iter().find(|c| c.contains(member))
    }

    /// Every cluster of `self` lies inside some cluster of `coarser`.
    pub fn refines(&self, coarser: &ClusterSet) -> bool {
        self.0
            .iter()
            .all(|c| coarser.0.iter().any(|d| c.is_subset(d)))
    }

    pub fn to_vecs(&self) -> Vec<Vec<String>> {
        self.0.iter().map(|c| c.iter().cloned().collect()).collect()
    }
}

/// `{a,b}|{c}`
impl fmt::Display for ClusterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, cluster) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str("{")?;
            for (j, member) in cluster.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(member)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// JSON form `{"threshold":x,"clusters":[["a","b"],["c"]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub threshold: f64,
    pub clusters: Vec<Vec<String>>,
}

impl ClusterJson {
    pub fn new(threshold: f64, clusters: &ClusterSet) -> Self {
        Self {
            threshold,
            clusters: clusters.to_vecs(),
        }
    }

    pub fn cluster_set(&self) -> ClusterSet {
        ClusterSet::new(self.clusters.iter().map(|c| c.iter().cloned().collect()))
    }
}

/// All unordered pairs `(i, j)` with `i <= j`, self-pairs included.
pub fn type_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Clusters the object types of `sim` at `threshold`.
pub fn discover_clusters(sim: &SimilarityMatrix, threshold: f64) -> Result<ClusterSet, ClusterError> {
    discover_clusters_with_pairs(sim, threshold, type_pairs(sim.len()))
}

/// Clusters by visiting the given index pairs in order.
///
/// For each pair meeting the threshold, every cluster holding either member
/// is removed and replaced by their union plus the pair. Self-pairs have
/// similarity 1 and place each visited type in a cluster.
pub fn discover_clusters_with_pairs(
    sim: &SimilarityMatrix,
    threshold: f64,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<ClusterSet, ClusterError> {
    check_threshold(threshold)?;
    let mut clusters: Vec<BTreeSet<usize>> = Vec::new();
    for (a, b) in pairs {
        if sim.value(a, b) >= threshold {
            let (touched, mut kept): (Vec<_>, Vec<_>) = clusters
                .into_iter()
                .partition(|c| c.contains(&a) || c.contains(&b));
            let mut merged: BTreeSet<usize> = touched.into_iter().flatten().collect();
            merged.insert(a);
            merged.insert(b);
            kept.push(merged);
            clusters = kept;
        }
    }
    Ok(ClusterSet::new(clusters.into_iter().map(|c| {
        c.into_iter()
            .map(|i| sim.order()[i].clone())
            .collect::<BTreeSet<_>>()
    })))
}

/// Connected components of the thresholded similarity graph, found by
/// repeatedly expanding a seed set with every type linked to a member.
pub fn brute_force_clusters(sim: &SimilarityMatrix, threshold: f64) -> Result<ClusterSet, ClusterError> {
    check_threshold(threshold)?;
    let n = sim.len();
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();
    for seed in 0..n {
        if assigned[seed] {
            continue;
        }
        let mut component = BTreeSet::from([seed]);
        loop {
            let grown: BTreeSet<usize> = (0..n)
                .filter(|&j| component.iter().any(|&i| i == j || sim.value(i, j) >= threshold))
                .collect();
            if grown.len() == component.len() {
                break;
            }
            component = grown;
        }
        for &i in &component {
            assigned[i] = true;
        }
        clusters.push(component.into_iter().map(|i| sim.order()[i].clone()).collect());
    }
    Ok(ClusterSet::new(clusters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&[&str]]) -> ClusterSet {
        ClusterSet::new(
            items
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect()),
        )
    }

    pub(crate) fn running_example_matrix() -> SimilarityMatrix {
        let s = 252.0 / 333.0;
        SimilarityMatrix::new(
            vec!["i".into(), "o".into(), "p".into()],
            vec![vec![1.0, s, 0.0], vec![s, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn running_example_thresholds() {
        let sim = running_example_matrix();
        assert_eq!(discover_clusters(&sim, 0.0).unwrap(), set(&[&["i", "o", "p"]]));
        assert_eq!(discover_clusters(&sim, 0.01).unwrap(), set(&[&["i", "o"], &["p"]]));
        assert_eq!(
            discover_clusters(&sim, 0.77).unwrap(),
            set(&[&["i"], &["o"], &["p"]])
        );
    }

    #[test]
    fn threshold_range() {
        let sim = running_example_matrix();
        for bad in [-0.01, 1.01, f64::NAN] {
            assert!(discover_clusters(&sim, bad).is_err());
            assert!(brute_force_clusters(&sim, bad).is_err());
        }
    }

    #[test]
    fn brute_force_extremes() {
        let sim = running_example_matrix();
        assert_eq!(brute_force_clusters(&sim, 0.0).unwrap().len(), 1);
        let above = sim.max_off_diagonal().unwrap() + 1e-9;
        assert_eq!(brute_force_clusters(&sim, above).unwrap().len(), 3);
    }

    #[test]
    fn display_and_json() {
        let clusters = set(&[&["p"], &["o", "i"]]);
        assert_eq!(clusters.to_string(), "{i,o}|{p}");
        let json = serde_json::to_string(&ClusterJson::new(0.01, &clusters)).unwrap();
        assert_eq!(json, r#"{"threshold":0.01,"clusters":[["i","o"],["p"]]}"#);
        let back: ClusterJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.cluster_set(), clusters);
    }

    #[test]
    fn refinement() {
        let fine = set(&[&["i"], &["o"], &["p"]]);
        let coarse = set(&[&["i", "o"], &["p"]]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
    }

    #[test]
    fn empty_matrix() {
        let sim = SimilarityMatrix::new(vec![], vec![]).unwrap();
        assert!(discover_clusters(&sim, 0.5).unwrap().is_empty());
    }
}
