//! Threshold tuning by half-interval search.
//!
//! Thresholds live on the two-decimal grid `0.00..=1.00` and are stored as
//! integer hundredths, so midpoints round exactly (half away from zero) and
//! the search visits at most 101 thresholds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::Serialize;

use super::{discover_clusters, ClusterSet};
use crate::matrix::SimilarityMatrix;

/// A threshold on the two-decimal grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Threshold(u8);

impl Threshold {
    pub const ZERO: Threshold = Threshold(0);
    pub const HALF: Threshold = Threshold(50);
    pub const ONE: Threshold = Threshold(100);

    pub fn from_hundredths(hundredths: u8) -> Option<Self> {
        (hundredths <= 100).then_some(Self(hundredths))
    }

    /// Every grid threshold in ascending order.
    pub fn grid() -> impl Iterator<Item = Threshold> {
        (0..=100).map(Threshold)
    }

    pub fn hundredths(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 100.0
    }

    /// `round((self + other) / 2, 2)` with halves rounded away from zero.
    pub fn midpoint(self, other: Threshold) -> Threshold {
        Threshold((u16::from(self.0) + u16::from(other.0)).div_ceil(2) as u8)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl FromStr for Threshold {
    type Err = String;

    /// Accepts values in `[0, 1]` with at most two decimals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
        let hundredths = (value * 100.0).round();
        if !(0.0..=100.0).contains(&hundredths) || (hundredths - value * 100.0).abs() > 1e-6 {
            return Err(format!("`{s}` is not a two-decimal threshold in [0, 1]"));
        }
        Ok(Threshold(hundredths as u8))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TuneMode {
    /// Bisect recursively until neighboring thresholds agree or are adjacent on the grid.
    #[default]
    Recursive,
    /// Evaluate the midpoints next to 0.5 once, without recursing.
    Literal,
}

/// Cluster sets for every threshold evaluated during tuning.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TuningResult {
    entries: BTreeMap<Threshold, ClusterSet>,
}

impl TuningResult {
    pub fn entries(&self) -> &BTreeMap<Threshold, ClusterSet> {
        &self.entries
    }

    pub fn get(&self, threshold: Threshold) -> Option<&ClusterSet> {
        self.entries.get(&threshold)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct cluster counts across all entries.
    pub fn cluster_counts(&self) -> BTreeSet<usize> {
        self.entries.values().map(ClusterSet::len).collect()
    }

    fn count_at(&self, threshold: Threshold) -> usize {
        self.entries[&threshold].len()
    }

    /// Rows `threshold,num_clusters,clusters`, e.g. `0.50,2,"{a,b}|{c}"`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["threshold", "num_clusters", "clusters"])?;
        for (threshold, clusters) in &self.entries {
            out.write_record([
                threshold.to_string(),
                clusters.len().to_string(),
                clusters.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rows `threshold,num_clusters` for plotting the step curve.
    pub fn write_step_curve<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["threshold", "num_clusters"])?;
        for (threshold, clusters) in &self.entries {
            out.write_record([threshold.to_string(), clusters.len().to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Vec<TuningEntryJson> {
        self.entries
            .iter()
            .map(|(t, c)| TuningEntryJson {
                threshold: t.value(),
                num_clusters: c.len(),
                clusters: c.to_vecs(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct TuningEntryJson {
    pub threshold: f64,
    pub num_clusters: usize,
    pub clusters: Vec<Vec<String>>,
}

/// Tunes the threshold for the object types of `sim`.
pub fn tune_clusters(sim: &SimilarityMatrix, mode: TuneMode) -> TuningResult {
    tune_with(mode, |t| {
        discover_clusters(sim, t.value()).expect("grid thresholds lie in [0, 1]")
    })
}

/// Tuning driven by an arbitrary clustering function of the threshold.
///
/// Seeds the result with thresholds 0 and 1, then starts the search at 0.5.
/// Cluster counts never decrease with the threshold, so when both ends agree
/// every threshold gives the same count and the search is skipped.
pub fn tune_with(mode: TuneMode, mut discover: impl FnMut(Threshold) -> ClusterSet) -> TuningResult {
    let mut result = TuningResult::default();
    result.entries.insert(Threshold::ZERO, discover(Threshold::ZERO));
    result.entries.insert(Threshold::ONE, discover(Threshold::ONE));
    if result.count_at(Threshold::ZERO) != result.count_at(Threshold::ONE) {
        tune_at(&mut result, Threshold::HALF, mode, &mut discover);
    }
    result
}

fn tune_at(
    result: &mut TuningResult,
    threshold: Threshold,
    mode: TuneMode,
    discover: &mut impl FnMut(Threshold) -> ClusterSet,
) {
    if result.entries.contains_key(&threshold) {
        return;
    }
    let current = discover(threshold);
    let count = current.len();
    result.entries.insert(threshold, current);

    let upper = result
        .entries
        .range(threshold..)
        .map(|(t, _)| *t)
        .find(|t| *t > threshold);
    let lower = result
        .entries
        .range(..threshold)
        .next_back()
        .map(|(t, _)| *t);

    for neighbor in [upper, lower].into_iter().flatten() {
        if result.count_at(neighbor) != count {
            let mid = threshold.midpoint(neighbor);
            match mode {
                TuneMode::Recursive => tune_at(result, mid, mode, discover),
                TuneMode::Literal => {
                    result.entries.entry(mid).or_insert_with(|| discover(mid));
                }
            }
        }
    }
}

/// One entry per distinct cluster set, keyed by the smallest threshold producing it.
pub fn distinct_cluster_sets(result: &TuningResult) -> Vec<(Threshold, ClusterSet)> {
    let mut seen = BTreeSet::new();
    result
        .entries
        .iter()
        .filter(|(_, clusters)| seen.insert((*clusters).clone()))
        .map(|(t, c)| (*t, c.clone()))
        .collect()
}
