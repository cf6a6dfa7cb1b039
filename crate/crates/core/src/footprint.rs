//! Footprint matrices of case-centric logs and their comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::flatten::{flatten, FlattenError, FlattenedLog};
use crate::matrix::SimilarityMatrix;
use crate::ocel::OcelLog;

/// Relation between two activities in a footprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FootprintRelation {
    /// `a -> b`: a directly followed by b, never the reverse.
    Causal,
    /// `a <- b`
    Inverse,
    /// `a || b`: directly follows in both directions.
    Parallel,
    /// `a # b`: never adjacent.
    Unrelated,
}

impl fmt::Display for FootprintRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FootprintRelation::Causal => "->",
            FootprintRelation::Inverse => "<-",
            FootprintRelation::Parallel => "||",
            FootprintRelation::Unrelated => "#",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Footprint {
    activities: BTreeSet<String>,
    follows: BTreeSet<(String, String)>,
}

impl Footprint {
    pub fn from_traces<I, T, S>(traces: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut activities = BTreeSet::new();
        let mut follows = BTreeSet::new();
        for trace in traces {
            let mut previous: Option<String> = None;
            for activity in trace {
                let activity = activity.as_ref().to_string();
                if let Some(prev) = previous.take() {
                    follows.insert((prev, activity.clone()));
                }
                activities.insert(activity.clone());
                previous = Some(activity);
            }
        }
        Self {
            activities,
            follows,
        }
    }

    pub fn activities(&self) -> &BTreeSet<String> {
        &self.activities
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    /// Relation of `a` to `b`; activities outside the alphabet are unrelated to everything.
    pub fn relation(&self, a: &str, b: &str) -> FootprintRelation {
        let key = |x: &str, y: &str| (x.to_string(), y.to_string());
        match (
            self.follows.contains(&key(a, b)),
            self.follows.contains(&key(b, a)),
        ) {
            (true, false) => FootprintRelation::Causal,
            (false, true) => FootprintRelation::Inverse,
            (true, true) => FootprintRelation::Parallel,
            (false, false) => FootprintRelation::Unrelated,
        }
    }

    /// Full relation table over the alphabet, keyed by (row, column).
    pub fn table(&self) -> BTreeMap<(String, String), FootprintRelation> {
        let mut table = BTreeMap::new();
        for a in &self.activities {
            for b in &self.activities {
                table.insert((a.clone(), b.clone()), self.relation(a, b));
            }
        }
        table
    }
}

pub fn footprint_of(flat: &FlattenedLog) -> Result<Footprint, FlattenError> {
    if flat.is_empty() {
        return Err(FlattenError::EmptyLog);
    }
    Ok(Footprint::from_traces(flat.traces()))
}

/// `1 - differing cells / |A|^2` over the union alphabet `A`; 1 when `A` is empty.
pub fn footprint_similarity(a: &Footprint, b: &Footprint) -> f64 {
    let alphabet: BTreeSet<&str> = a
        .activities
        .iter()
        .chain(&b.activities)
        .map(String::as_str)
        .collect();
    if alphabet.is_empty() {
        return 1.0;
    }
    // cells where both are unrelated agree, so only pairs present in either follows set can differ
    let candidates: BTreeSet<(&str, &str)> = a
        .follows
        .iter()
        .chain(&b.follows)
        .flat_map(|(x, y)| [(x.as_str(), y.as_str()), (y.as_str(), x.as_str())])
        .collect();
    let differing = candidates
        .into_iter()
        .filter(|(x, y)| a.relation(x, y) != b.relation(x, y))
        .count();
    let cells = (alphabet.len() * alphabet.len()) as f64;
    1.0 - differing as f64 / cells
}

/// Footprint similarity between the logs flattened on each single object type.
pub fn footprint_matrix(log: &OcelLog) -> SimilarityMatrix {
    let types: Vec<String> = log.object_types().into_iter().collect();
    let footprints: Vec<Footprint> = types
        .iter()
        .map(|t| {
            let flat = flatten(log, &[t.as_str()]).expect("type comes from the log");
            Footprint::from_traces(flat.traces())
        })
        .collect();
    SimilarityMatrix::from_upper_triangle(types, |i, j| {
        footprint_similarity(&footprints[i], &footprints[j])
    })
}
