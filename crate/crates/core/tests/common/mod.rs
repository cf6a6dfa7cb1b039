//! Random instance generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{TimeZone, Utc};
use indexmap::IndexMap;
use mdfm_core::{
    brute_force_clusters, ClusterSet, Dfm, Event, ObjectInstance, OcelLog, Relation, SimilarityMatrix,
    Threshold,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("t{i}")).collect()
}

/// Symmetric matrix mixing zeros, ones, exact grid values, and arbitrary reals.
pub fn random_similarity_matrix(rng: &mut impl Rng, n: usize) -> SimilarityMatrix {
    let mut values = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = match rng.gen_range(0..10) {
                0 | 1 => 0.0,
                2 => 1.0,
                3 | 4 => f64::from(rng.gen_range(0u8..=100)) / 100.0,
                _ => rng.gen::<f64>(),
            };
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    SimilarityMatrix::new(labels(n), values).unwrap()
}

/// Cluster count at every grid threshold, using the connected-components oracle.
pub fn sweep_counts(sim: &SimilarityMatrix) -> BTreeMap<Threshold, usize> {
    Threshold::grid()
        .map(|t| (t, brute_force_clusters(sim, t.value()).unwrap().len()))
        .collect()
}

pub fn shuffled_pairs(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            // either orientation is a valid visit of the unordered pair
            pairs.push(if rng.gen() { (i, j) } else { (j, i) });
        }
    }
    pairs.shuffle(rng);
    pairs
}

pub fn is_partition(clusters: &ClusterSet, labels: &[String]) -> bool {
    let mut seen = BTreeSet::new();
    for cluster in clusters.iter() {
        if cluster.is_empty() {
            return false;
        }
        for member in cluster {
            if !seen.insert(member.clone()) {
                return false;
            }
        }
    }
    seen == labels.iter().cloned().collect()
}

/// Random multigraph: some object types may have no relations.
pub fn random_dfm(rng: &mut impl Rng) -> Dfm {
    let n_types = rng.gen_range(1..=5);
    let n_tasks = rng.gen_range(1..=6);
    let types: Vec<String> = (0..n_types).map(|i| format!("ot{i}")).collect();
    let tasks: Vec<String> = (0..n_tasks).map(|i| format!("task{i}")).collect();
    let mut freq = BTreeMap::new();
    for otype in &types {
        if rng.gen_bool(0.15) {
            continue;
        }
        for _ in 0..rng.gen_range(1..=8) {
            let s = tasks.choose(rng).unwrap();
            let t = tasks.choose(rng).unwrap();
            freq.insert(Relation::new(s.as_str(), otype.as_str(), t.as_str()), rng.gen_range(1..=20));
        }
    }
    Dfm::new(types.into_iter().collect(), tasks.into_iter().collect(), freq).unwrap()
}

/// Random log with multi-object events, tied timestamps and idle objects.
pub fn random_log(rng: &mut impl Rng, max_events: usize) -> OcelLog {
    let n_objects = rng.gen_range(0..=5);
    let type_names = ["order", "item", "package"];
    let objects: Vec<ObjectInstance> = (0..n_objects)
        .map(|i| ObjectInstance {
            id: format!("o{i}"),
            otype: type_names.choose(rng).unwrap().to_string(),
            ovmap: IndexMap::new(),
        })
        .collect();
    let activities = ["A", "B", "C", "D"];
    let n_events = rng.gen_range(0..=max_events);
    let events = (0..n_events)
        .map(|i| {
            let mut omap: Vec<String> = objects
                .iter()
                .filter(|_| rng.gen_bool(0.4))
                .map(|o| o.id.clone())
                .collect();
            omap.shuffle(rng);
            let mut vmap = IndexMap::new();
            if rng.gen_bool(0.3) {
                vmap.insert("amount".to_string(), serde_json::json!(rng.gen_range(0..100)));
            }
            Event {
                id: format!("ev{i}"),
                activity: activities.choose(rng).unwrap().to_string(),
                timestamp: Utc
                    .timestamp_opt(1_600_000_000 + rng.gen_range(0..6) * 60, rng.gen_range(0..3) * 1000)
                    .unwrap(),
                omap,
                vmap,
            }
        })
        .collect();
    let declared = if rng.gen_bool(0.5) {
        ["package".to_string(), "route".to_string()].into_iter().collect()
    } else {
        BTreeSet::new()
    };
    OcelLog::new("1.0", vec![], declared, events, objects).unwrap()
}

/// Directly-follows counts re-derived pairwise: for every object and every two
/// events of it, count the pair when no other event of the object lies strictly
/// between them in (timestamp, document position) order.
pub fn brute_force_frequencies(log: &OcelLog) -> BTreeMap<Relation, u64> {
    let events = log.events();
    let before = |a: usize, b: usize| (events[a].timestamp, a) < (events[b].timestamp, b);
    let mut freq = BTreeMap::new();
    for object in log.objects() {
        let mine: Vec<usize> = (0..events.len())
            .filter(|&i| events[i].omap.contains(&object.id))
            .collect();
        for &a in &mine {
            for &b in &mine {
                if a == b || !before(a, b) {
                    continue;
                }
                let gap = mine.iter().any(|&c| before(a, c) && before(c, b));
                if !gap {
                    *freq
                        .entry(Relation::new(
                            events[a].activity.as_str(),
                            object.otype.as_str(),
                            events[b].activity.as_str(),
                        ))
                        .or_insert(0) += 1;
                }
            }
        }
    }
    freq
}
