//! Flattening an object-centric log onto a set of object types.
//!
//! Each selected object becomes a case whose trace is the object's ordered
//! event sequence. An event referencing several selected objects is copied
//! into each of their cases.

use std::collections::{BTreeMap, BTreeSet};
use std::io;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::ocel::OcelLog;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("unknown object type `{0}`")]
    UnknownObjectType(String),
    #[error("no object types selected")]
    EmptyTypeSet,
    #[error("flattened log has no cases")]
    EmptyLog,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatEvent {
    pub event_id: String,
    pub activity: String,
    pub timestamp: DateTime<Utc>,
}

/// A case-centric log: case id (object id) to its non-empty trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlattenedLog {
    cases: BTreeMap<String, Vec<FlatEvent>>,
    source_types: BTreeSet<String>,
}

impl FlattenedLog {
    pub fn cases(&self) -> &BTreeMap<String, Vec<FlatEvent>> {
        &self.cases
    }

    pub fn source_types(&self) -> &BTreeSet<String> {
        &self.source_types
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Activity sequences, one per case in case-id order.
    pub fn traces(&self) -> impl Iterator<Item = Vec<&str>> {
        self.cases
            .values()
            .map(|events| events.iter().map(|e| e.activity.as_str()).collect())
    }

    pub fn event_count(&self) -> usize {
        self.cases.values().map(Vec::len).sum()
    }

    /// CSV `case_id,activity,timestamp,position` sorted by case id then position.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["case_id", "activity", "timestamp", "position"])?;
        for (case_id, events) in &self.cases {
            for (position, event) in events.iter().enumerate() {
                out.write_record([
                    case_id.as_str(),
                    event.activity.as_str(),
                    &event.timestamp.to_rfc3339_opts(SecondsFormat::Micros, true),
                    &position.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

pub fn flatten(log: &OcelLog, types: &[&str]) -> Result<FlattenedLog, FlattenError> {
    if types.is_empty() {
        return Err(FlattenError::EmptyTypeSet);
    }
    let known = log.object_types();
    if let Some(t) = types.iter().find(|t| !known.contains(**t)) {
        return Err(FlattenError::UnknownObjectType(t.to_string()));
    }
    let source_types: BTreeSet<String> = types.iter().map(|t| t.to_string()).collect();
    let events = log.events();
    let mut cases = BTreeMap::new();
    for object in log.objects() {
        if !source_types.contains(&object.otype) {
            continue;
        }
        let trace: Vec<FlatEvent> = log
            .object_event_indices(&object.id)
            .iter()
            .map(|&i| FlatEvent {
                event_id: events[i].id.clone(),
                activity: events[i].activity.clone(),
                timestamp: events[i].timestamp,
            })
            .collect();
        if !trace.is_empty() {
            cases.insert(object.id.clone(), trace);
        }
    }
    Ok(FlattenedLog {
        cases,
        source_types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ocel::parse_ocel;

    fn log() -> OcelLog {
        parse_ocel(
            br#"{"ocel:global-log":{"ocel:object-types":["order","item","package"]},
            "ocel:events":{
              "e1":{"ocel:activity":"A","ocel:timestamp":"2020-01-01T00:00:01Z","ocel:omap":["o1"]},
              "e2":{"ocel:activity":"B","ocel:timestamp":"2020-01-01T00:00:02Z","ocel:omap":["o1","o2"]},
              "e3":{"ocel:activity":"C","ocel:timestamp":"2020-01-01T00:00:03Z","ocel:omap":["o2"]}},
            "ocel:objects":{"o1":{"ocel:type":"order"},"o2":{"ocel:type":"item"},"o3":{"ocel:type":"item"}}}"#,
        )
        .unwrap()
    }

    fn traces(flat: &FlattenedLog) -> Vec<(String, Vec<String>)> {
        flat.cases()
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|e| e.activity.clone()).collect()))
            .collect()
    }

    #[test]
    fn single_type() {
        let flat = flatten(&log(), &["order"]).unwrap();
        assert_eq!(traces(&flat), [("o1".to_string(), vec!["A".to_string(), "B".to_string()])]);
    }

    #[test]
    fn convergence_duplicates_shared_events() {
        let flat = flatten(&log(), &["order", "item"]).unwrap();
        assert_eq!(flat.cases().len(), 2);
        assert_eq!(flat.cases()["o2"].iter().map(|e| e.activity.as_str()).collect::<Vec<_>>(), ["B", "C"]);
        let b_count = flat.traces().flatten().filter(|a| *a == "B").count();
        assert_eq!(b_count, 2);
        // o3 has no events and produces no case
        assert!(!flat.cases().contains_key("o3"));
        assert_eq!(flat, {
            let mut with_empty = flatten(&log(), &["order", "item", "package"]).unwrap();
            with_empty.source_types = flat.source_types.clone();
            with_empty
        });
    }

    #[test]
    fn errors() {
        assert_eq!(flatten(&log(), &[]).unwrap_err(), FlattenError::EmptyTypeSet);
        assert_eq!(
            flatten(&log(), &["route"]).unwrap_err(),
            FlattenError::UnknownObjectType("route".into())
        );
    }

    #[test]
    fn csv_rows() {
        let flat = flatten(&log(), &["order", "item"]).unwrap();
        let mut buf = Vec::new();
        flat.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "case_id,activity,timestamp,position");
        assert_eq!(lines[1], "o1,A,2020-01-01T00:00:01.000000Z,0");
        assert_eq!(lines.len(), 5);
    }
}
