//! Directly-follows multigraphs.
//!
//! A [`Dfm`] records, per object type, how often one task was immediately
//! followed by another in the event sequence of an object of that type.

mod export;
mod markov;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ocel::OcelLog;

pub use export::{export_dot, DfmJson, RelationJson};
pub use markov::{pairwise_similarity, MarkovDfm, TransitionMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfmError {
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("unknown object type `{0}`")]
    UnknownObjectType(String),
    #[error("relation {0} has zero frequency")]
    ZeroFrequency(Relation),
    #[error("relation {0} references a task or object type outside the graph")]
    DanglingRelation(Relation),
}

/// An edge `source --otype--> target` of the multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub source: String,
    pub otype: String,
    pub target: String,
}

impl Relation {
    pub fn new(source: impl Into<String>, otype: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            otype: otype.into(),
            target: target.into(),
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.otype, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dfm {
    object_types: BTreeSet<String>,
    tasks: BTreeSet<String>,
    freq: BTreeMap<Relation, u64>,
}

impl Dfm {
    pub fn new(
        object_types: BTreeSet<String>,
        tasks: BTreeSet<String>,
        freq: BTreeMap<Relation, u64>,
    ) -> Result<Self, DfmError> {
        for (relation, &f) in &freq {
            if f == 0 {
                return Err(DfmError::ZeroFrequency(relation.clone()));
            }
            if !tasks.contains(&relation.source)
                || !tasks.contains(&relation.target)
                || !object_types.contains(&relation.otype)
            {
                return Err(DfmError::DanglingRelation(relation.clone()));
            }
        }
        Ok(Self {
            object_types,
            tasks,
            freq,
        })
    }

    pub fn object_types(&self) -> &BTreeSet<String> {
        &self.object_types
    }

    pub fn tasks(&self) -> &BTreeSet<String> {
        &self.tasks
    }

    /// Relations with their frequencies, sorted by (source, otype, target).
    pub fn frequencies(&self) -> &BTreeMap<Relation, u64> {
        &self.freq
    }

    pub fn frequency(&self, source: &str, otype: &str, target: &str) -> Option<u64> {
        self.freq.get(&Relation::new(source, otype, target)).copied()
    }

    pub fn relation_count(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object_types.is_empty() && self.tasks.is_empty()
    }

    fn check_query(&self, task: &str, thetas: &[&str]) -> Result<(), DfmError> {
        if !self.tasks.contains(task) {
            return Err(DfmError::UnknownTask(task.to_string()));
        }
        if let Some(t) = thetas.iter().find(|t| !self.object_types.contains(**t)) {
            return Err(DfmError::UnknownObjectType(t.to_string()));
        }
        Ok(())
    }

    /// Tasks with a relation into `task` for any of the object types in `thetas`.
    pub fn preset(&self, task: &str, thetas: &[&str]) -> Result<BTreeSet<String>, DfmError> {
        self.check_query(task, thetas)?;
        Ok(self
            .freq
            .keys()
            .filter(|r| r.target == task && thetas.contains(&r.otype.as_str()))
            .map(|r| r.source.clone())
            .collect())
    }

    /// Tasks reached by a relation from `task` for any of the object types in `thetas`.
    pub fn postset(&self, task: &str, thetas: &[&str]) -> Result<BTreeSet<String>, DfmError> {
        self.check_query(task, thetas)?;
        Ok(self
            .freq
            .keys()
            .filter(|r| r.source == task && thetas.contains(&r.otype.as_str()))
            .map(|r| r.target.clone())
            .collect())
    }

    /// Relations leaving `task` for object type `otype`, in target order.
    pub(crate) fn outgoing<'a>(
        &'a self,
        task: &'a str,
        otype: &'a str,
    ) -> impl Iterator<Item = (&'a Relation, u64)> + 'a {
        let lower = Relation::new(task, otype, "");
        self.freq
            .range(lower..)
            .take_while(move |(r, _)| r.source == task && r.otype == otype)
            .map(|(r, &f)| (r, f))
    }
}

/// Discovers the multigraph of the whole log.
///
/// Every pair of consecutive events in an object's ordered event sequence adds
/// one to the relation `(activity, object type, next activity)`.
pub fn discover_dfm(log: &OcelLog) -> Dfm {
    discover(log, log.object_types(), log.activities())
}

/// Discovers the multigraph restricted to the given object types.
///
/// Only events that reference an object of a selected type contribute tasks.
pub fn discover_dfm_for_types(log: &OcelLog, types: &[&str]) -> Result<Dfm, DfmError> {
    let known = log.object_types();
    if let Some(t) = types.iter().find(|t| !known.contains(**t)) {
        return Err(DfmError::UnknownObjectType(t.to_string()));
    }
    let selected: BTreeSet<String> = types.iter().map(|t| t.to_string()).collect();
    let tasks = log
        .events()
        .iter()
        .filter(|e| {
            e.omap
                .iter()
                .any(|o| log.object(o).is_some_and(|obj| selected.contains(&obj.otype)))
        })
        .map(|e| e.activity.clone())
        .collect();
    Ok(discover(log, selected, tasks))
}

fn discover(log: &OcelLog, object_types: BTreeSet<String>, tasks: BTreeSet<String>) -> Dfm {
    let mut freq: BTreeMap<Relation, u64> = BTreeMap::new();
    let events = log.events();
    for object in log.objects() {
        if !object_types.contains(&object.otype) {
            continue;
        }
        for pair in log.object_event_indices(&object.id).windows(2) {
            let relation = Relation::new(
                events[pair[0]].activity.as_str(),
                object.otype.as_str(),
                events[pair[1]].activity.as_str(),
            );
            *freq.entry(relation).or_default() += 1;
        }
    }
    Dfm {
        object_types,
        tasks,
        freq,
    }
}
