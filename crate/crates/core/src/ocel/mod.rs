//! Object-centric event logs.
//!
//! An [`OcelLog`] holds events that each reference any number of objects, and
//! objects that each carry one object type. Every downstream computation reads
//! the per-object event sequences through [`OcelLog::ordered_events_for_object`],
//! which sorts by timestamp and breaks ties by document order.

mod json;
mod synth;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use chrono::{DateTime, DurationRound, TimeDelta, Utc};
use indexmap::IndexMap;
use thiserror::Error;

pub use json::{parse_ocel, write_ocel, write_ocel_to_string};
pub use synth::{
    fixture, generate_synthetic_log, running_example_spec, toy_spec, ObjectTypeSpec, SyntheticSpec,
    TraceTemplate, FIXTURE_NAMES,
};

/// Attribute value attached to an event (`vmap`) or object (`ovmap`).
pub type AttributeValue = serde_json::Value;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OcelError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("unsupported log format: {0}")]
    UnsupportedFormat(String),
    #[error("missing required key `{key}` in {context}")]
    MissingRequiredKey { key: String, context: String },
    #[error("invalid value at {path}: expected {expected}")]
    InvalidValue { path: String, expected: String },
    #[error("event `{event}` references unknown object `{object}`")]
    DanglingObjectRef { event: String, object: String },
    #[error("event `{event}` has unparseable timestamp `{value}`")]
    BadTimestamp { event: String, value: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("invalid synthetic log spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: String,
    pub activity: String,
    pub timestamp: DateTime<Utc>,
    pub omap: Vec<String>,
    pub vmap: IndexMap<String, AttributeValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    pub id: String,
    pub otype: String,
    pub ovmap: IndexMap<String, AttributeValue>,
}

/// A validated object-centric event log. Immutable after construction.
#[derive(Debug, Clone)]
pub struct OcelLog {
    version: String,
    attribute_names: Vec<String>,
    declared_object_types: BTreeSet<String>,
    events: Vec<Event>,
    objects: IndexMap<String, ObjectInstance>,
    // object id -> event indices sorted by (timestamp, document order)
    object_events: HashMap<String, Vec<usize>>,
}

impl PartialEq for OcelLog {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version
            && self.attribute_names == other.attribute_names
            && self.declared_object_types == other.declared_object_types
            && self.events == other.events
            && self.objects == other.objects
    }
}

impl OcelLog {
    /// Validates and indexes a log. Timestamps are truncated to microseconds.
    pub fn new(
        version: impl Into<String>,
        attribute_names: Vec<String>,
        declared_object_types: BTreeSet<String>,
        mut events: Vec<Event>,
        objects: Vec<ObjectInstance>,
    ) -> Result<Self, OcelError> {
        let mut object_map = IndexMap::with_capacity(objects.len());
        for object in objects {
            if object.otype.is_empty() {
                return Err(OcelError::InvalidValue {
                    path: format!("ocel:objects.{}.ocel:type", object.id),
                    expected: "non-empty object type".into(),
                });
            }
            if object_map.contains_key(&object.id) {
                return Err(OcelError::DuplicateId {
                    kind: "object",
                    id: object.id,
                });
            }
            object_map.insert(object.id.clone(), object);
        }

        let mut seen_events = HashSet::with_capacity(events.len());
        let mut object_events: HashMap<String, Vec<usize>> = HashMap::new();
        for (index, event) in events.iter_mut().enumerate() {
            if !seen_events.insert(event.id.clone()) {
                return Err(OcelError::DuplicateId {
                    kind: "event",
                    id: event.id.clone(),
                });
            }
            if event.activity.is_empty() {
                return Err(OcelError::InvalidValue {
                    path: format!("ocel:events.{}.ocel:activity", event.id),
                    expected: "non-empty activity".into(),
                });
            }
            event.timestamp = truncate_to_micros(event.timestamp);
            let mut in_event = HashSet::with_capacity(event.omap.len());
            for object_id in &event.omap {
                if !in_event.insert(object_id.as_str()) {
                    return Err(OcelError::DuplicateId {
                        kind: "omap entry",
                        id: object_id.clone(),
                    });
                }
                if !object_map.contains_key(object_id) {
                    return Err(OcelError::DanglingObjectRef {
                        event: event.id.clone(),
                        object: object_id.clone(),
                    });
                }
                object_events
                    .entry(object_id.clone())
                    .or_default()
                    .push(index);
            }
        }
        // indices were pushed in document order, so a stable sort keeps ties in that order
        for indices in object_events.values_mut() {
            indices.sort_by_key(|&i| events[i].timestamp);
        }

        Ok(Self {
            version: version.into(),
            attribute_names,
            declared_object_types,
            events,
            objects: object_map,
            object_events,
        })
    }

    pub fn empty() -> Self {
        Self::new("1.0", Vec::new(), BTreeSet::new(), Vec::new(), Vec::new())
            .expect("empty log is valid")
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn declared_object_types(&self) -> &BTreeSet<String> {
        &self.declared_object_types
    }

    /// Events in document order.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = &ObjectInstance> {
        self.objects.values()
    }

    pub fn object(&self, id: &str) -> Option<&ObjectInstance> {
        self.objects.get(id)
    }

    /// Declared object types together with the type of every object in the log.
    pub fn object_types(&self) -> BTreeSet<String> {
        let mut types = self.declared_object_types.clone();
        types.extend(self.objects.values().map(|o| o.otype.clone()));
        types
    }

    pub fn activities(&self) -> BTreeSet<String> {
        self.events.iter().map(|e| e.activity.clone()).collect()
    }

    /// Number of objects per object type, including zero for declared types without objects.
    pub fn objects_per_type(&self) -> BTreeMap<String, usize> {
        let mut counts: BTreeMap<String, usize> = self
            .object_types()
            .into_iter()
            .map(|t| (t, 0))
            .collect();
        for object in self.objects.values() {
            *counts.entry(object.otype.clone()).or_default() += 1;
        }
        counts
    }

    /// Earliest and latest event timestamp.
    pub fn time_span(&self) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
        let min = self.events.iter().map(|e| e.timestamp).min()?;
        let max = self.events.iter().map(|e| e.timestamp).max()?;
        Some((min, max))
    }

    /// Events referencing `object_id`, sorted by timestamp with ties kept in document order.
    pub fn ordered_events_for_object(&self, object_id: &str) -> Result<Vec<&Event>, OcelError> {
        if !self.objects.contains_key(object_id) {
            return Err(OcelError::UnknownObject(object_id.to_string()));
        }
        Ok(self
            .object_event_indices(object_id)
            .iter()
            .map(|&i| &self.events[i])
            .collect())
    }

    pub(crate) fn object_event_indices(&self, object_id: &str) -> &[usize] {
        self.object_events
            .get(object_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn truncate_to_micros(ts: DateTime<Utc>) -> DateTime<Utc> {
    ts.duration_trunc(TimeDelta::microseconds(1)).unwrap_or(ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn ts(secs: i64) -> DateTime<Utc> {
        Utc.timestamp_opt(1_600_000_000 + secs, 0).unwrap()
    }

    fn event(id: &str, activity: &str, secs: i64, omap: &[&str]) -> Event {
        Event {
            id: id.into(),
            activity: activity.into(),
            timestamp: ts(secs),
            omap: omap.iter().map(|s| s.to_string()).collect(),
            vmap: IndexMap::new(),
        }
    }

    fn object(id: &str, otype: &str) -> ObjectInstance {
        ObjectInstance {
            id: id.into(),
            otype: otype.into(),
            ovmap: IndexMap::new(),
        }
    }

    fn three_event_log() -> OcelLog {
        OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![
                event("e1", "A", 0, &["o1"]),
                event("e2", "B", 1, &["o1", "o2"]),
                event("e3", "C", 2, &["o2"]),
            ],
            vec![object("o1", "order"), object("o2", "item")],
        )
        .unwrap()
    }

    #[test]
    fn ordered_events_follow_timestamps() {
        let log = three_event_log();
        let ids = |o| {
            log.ordered_events_for_object(o)
                .unwrap()
                .iter()
                .map(|e| e.id.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(ids("o1"), ["e1", "e2"]);
        assert_eq!(ids("o2"), ["e2", "e3"]);
    }

    #[test]
    fn timestamp_ties_keep_document_order() {
        let log = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![
                event("e5", "X", 10, &["o"]),
                event("e4", "Y", 10, &["o"]),
                event("e3", "Z", 5, &["o"]),
            ],
            vec![object("o", "t")],
        )
        .unwrap();
        let ids: Vec<_> = log
            .ordered_events_for_object("o")
            .unwrap()
            .into_iter()
            .map(|e| e.id.as_str())
            .collect();
        assert_eq!(ids, ["e3", "e5", "e4"]);
    }

    #[test]
    fn unknown_object_is_rejected() {
        let log = three_event_log();
        assert_eq!(
            log.ordered_events_for_object("nope").unwrap_err(),
            OcelError::UnknownObject("nope".into())
        );
    }

    #[test]
    fn validation_errors() {
        let dangling = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![event("e1", "A", 0, &["ox"])],
            vec![object("o1", "order")],
        );
        assert!(matches!(
            dangling,
            Err(OcelError::DanglingObjectRef { ref object, .. }) if object == "ox"
        ));

        let dup_event = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![event("e1", "A", 0, &[]), event("e1", "B", 0, &[])],
            vec![],
        );
        assert!(matches!(dup_event, Err(OcelError::DuplicateId { kind: "event", .. })));

        let dup_object = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![],
            vec![object("o", "a"), object("o", "b")],
        );
        assert!(matches!(dup_object, Err(OcelError::DuplicateId { kind: "object", .. })));

        let empty_type = OcelLog::new("1.0", vec![], BTreeSet::new(), vec![], vec![object("o", "")]);
        assert!(matches!(empty_type, Err(OcelError::InvalidValue { .. })));

        let empty_activity = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![event("e1", "", 0, &[])],
            vec![],
        );
        assert!(matches!(empty_activity, Err(OcelError::InvalidValue { .. })));
    }

    #[test]
    fn object_types_union_declared_and_used() {
        let log = OcelLog::new(
            "1.0",
            vec![],
            ["package".to_string()].into_iter().collect(),
            vec![],
            vec![object("o1", "order")],
        )
        .unwrap();
        assert_eq!(
            log.object_types().into_iter().collect::<Vec<_>>(),
            ["order", "package"]
        );
        assert_eq!(log.objects_per_type()["package"], 0);
    }

    #[test]
    fn events_with_empty_omap_are_accepted() {
        let log = OcelLog::new(
            "1.0",
            vec![],
            BTreeSet::new(),
            vec![event("e1", "A", 0, &[])],
            vec![],
        )
        .unwrap();
        assert_eq!(log.events().len(), 1);
        assert_eq!(log.activities().len(), 1);
    }
}
