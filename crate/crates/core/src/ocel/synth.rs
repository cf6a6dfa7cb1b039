//! Deterministic synthetic OCEL generation.

use std::collections::BTreeSet;

use chrono::{DateTime, TimeDelta, Utc};
use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Event, ObjectInstance, OcelError, OcelLog};

/// Every object of a type follows one of its templates; `count` objects are created per template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceTemplate {
    pub activities: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectTypeSpec {
    pub name: String,
    pub templates: Vec<TraceTemplate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub object_types: Vec<ObjectTypeSpec>,
    #[serde(default)]
    pub seed: u64,
    /// Upper bound for the random gap between two consecutive events of one object.
    #[serde(default = "default_max_gap_secs")]
    pub max_gap_secs: u32,
}

fn default_max_gap_secs() -> u32 {
    3_600
}

const START_SECS: i64 = 1_577_836_800; // 2020-01-01T00:00:00Z

impl SyntheticSpec {
    pub fn new(object_types: Vec<ObjectTypeSpec>, seed: u64) -> Self {
        Self {
            object_types,
            seed,
            max_gap_secs: default_max_gap_secs(),
        }
    }

    fn validate(&self) -> Result<(), OcelError> {
        if self.object_types.is_empty() {
            return Err(OcelError::InvalidSpec("no object types".into()));
        }
        if self.max_gap_secs == 0 {
            return Err(OcelError::InvalidSpec("max_gap_secs must be positive".into()));
        }
        let mut names = BTreeSet::new();
        for ot in &self.object_types {
            if ot.name.is_empty() {
                return Err(OcelError::InvalidSpec("empty object type name".into()));
            }
            if !names.insert(ot.name.as_str()) {
                return Err(OcelError::InvalidSpec(format!(
                    "object type `{}` declared twice",
                    ot.name
                )));
            }
            if ot.templates.is_empty() {
                return Err(OcelError::InvalidSpec(format!(
                    "object type `{}` has no trace templates",
                    ot.name
                )));
            }
            for template in &ot.templates {
                if template.activities.is_empty() || template.activities.iter().any(String::is_empty) {
                    return Err(OcelError::InvalidSpec(format!(
                        "object type `{}` has an empty template or activity",
                        ot.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds a log where each event references exactly one object.
///
/// Objects start at random offsets and advance by random gaps, so traces of
/// different objects interleave. Event ids follow timestamp order.
pub fn generate_synthetic_log(spec: &SyntheticSpec) -> Result<OcelLog, OcelError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let max_gap = i64::from(spec.max_gap_secs);
    let start = DateTime::<Utc>::from_timestamp(START_SECS, 0).expect("valid start");

    let mut objects = Vec::new();
    // (timestamp, activity, object index)
    let mut raw_events: Vec<(DateTime<Utc>, &str, usize)> = Vec::new();
    for ot in &spec.object_types {
        let mut serial = 0usize;
        for template in &ot.templates {
            for _ in 0..template.count {
                serial += 1;
                let object_index = objects.len();
                objects.push(ObjectInstance {
                    id: format!("{}-{serial}", ot.name),
                    otype: ot.name.clone(),
                    ovmap: IndexMap::new(),
                });
                let mut ts = start + TimeDelta::seconds(rng.gen_range(0..max_gap * 4));
                for activity in &template.activities {
                    raw_events.push((ts, activity.as_str(), object_index));
                    ts += TimeDelta::seconds(rng.gen_range(1..=max_gap));
                }
            }
        }
    }
    raw_events.sort_by_key(|(ts, _, _)| *ts);

    let events = raw_events
        .into_iter()
        .enumerate()
        .map(|(i, (timestamp, activity, object_index))| Event {
            id: format!("e{}", i + 1),
            activity: activity.to_string(),
            timestamp,
            omap: vec![objects[object_index].id.clone()],
            vmap: IndexMap::new(),
        })
        .collect();
    let declared = spec.object_types.iter().map(|t| t.name.clone()).collect();
    OcelLog::new("1.0", Vec::new(), declared, events, objects)
}

fn template(activities: &[&str], count: usize) -> TraceTemplate {
    TraceTemplate {
        activities: activities.iter().map(|a| a.to_string()).collect(),
        count,
    }
}

fn object_type(name: &str, templates: Vec<TraceTemplate>) -> ObjectTypeSpec {
    ObjectTypeSpec {
        name: name.to_string(),
        templates,
    }
}

/// Three object types `o`, `i`, `p` over tasks `po`, `ca`, `pi`, `sp`, `sr`.
///
/// The discovered multigraph has frequencies po-o-ca 3, po-i-ca 6, ca-o-ca 3,
/// ca-i-ca 3, ca-o-pi 6, ca-i-pi 6, pi-o-ca 3 and sp-p-sr 2.
pub fn running_example_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec::new(
        vec![
            object_type("o", vec![template(&["po", "ca", "pi", "ca", "ca", "pi"], 3)]),
            object_type(
                "i",
                vec![template(&["po", "ca", "pi"], 3), template(&["po", "ca", "ca", "pi"], 3)],
            ),
            object_type("p", vec![template(&["sp", "sr"], 2)]),
        ],
        seed,
    )
}

/// Four object types (item, order, package, route) forming two behavioral groups,
/// which yields four distinct cluster counts under threshold tuning.
pub fn toy_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec::new(
        vec![
            object_type(
                "item",
                vec![
                    template(&["place_order", "check_availability", "pick_item"], 3),
                    template(
                        &["place_order", "check_availability", "check_availability", "pick_item"],
                        3,
                    ),
                ],
            ),
            object_type(
                "order",
                vec![template(
                    &[
                        "place_order",
                        "check_availability",
                        "pick_item",
                        "check_availability",
                        "check_availability",
                        "pick_item",
                    ],
                    3,
                )],
            ),
            object_type(
                "package",
                vec![template(&["create_package", "send_package", "package_delivered"], 2)],
            ),
            object_type(
                "route",
                vec![
                    template(&["send_package", "package_delivered", "end_route"], 1),
                    template(&["send_package", "end_route"], 1),
                ],
            ),
        ],
        seed,
    )
}

pub const FIXTURE_NAMES: [&str; 2] = ["running-example", "toy"];

/// Built-in fixture by name.
pub fn fixture(name: &str, seed: u64) -> Option<SyntheticSpec> {
    match name {
        "running-example" => Some(running_example_spec(seed)),
        "toy" => Some(toy_spec(seed)),
        _ => None,
    }
}
