//! JSON-OCEL reading and writing.
//!
//! The document is first read into an order-preserving tree that keeps
//! duplicate keys, so event order follows the document and repeated event or
//! object ids can be reported instead of silently overwritten.

use std::collections::BTreeSet;
use std::fmt;

use chrono::{DateTime, NaiveDate, NaiveDateTime, SecondsFormat, Utc};
use indexmap::IndexMap;
use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{Map, Value};

use super::{AttributeValue, Event, ObjectInstance, OcelError, OcelLog};

const EVENTS: &str = "ocel:events";
const OBJECTS: &str = "ocel:objects";
const GLOBAL_LOG: &str = "ocel:global-log";
const OBJECT_TYPES: &str = "ocel:object-types";
const ATTRIBUTE_NAMES: &str = "ocel:attribute-names";
const VERSION: &str = "ocel:version";
const ACTIVITY: &str = "ocel:activity";
const TIMESTAMP: &str = "ocel:timestamp";
const OMAP: &str = "ocel:omap";
const VMAP: &str = "ocel:vmap";
const TYPE: &str = "ocel:type";
const OVMAP: &str = "ocel:ovmap";

enum Node {
    Null,
    Bool(bool),
    Number(serde_json::Number),
    String(String),
    Array(Vec<Node>),
    Object(Vec<(String, Node)>),
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(NodeVisitor)
    }
}

struct NodeVisitor;

impl<'de> Visitor<'de> for NodeVisitor {
    type Value = Node;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("any JSON value")
    }

    fn visit_bool<E>(self, v: bool) -> Result<Node, E> {
        Ok(Node::Bool(v))
    }

    fn visit_i64<E>(self, v: i64) -> Result<Node, E> {
        Ok(Node::Number(v.into()))
    }

    fn visit_u64<E>(self, v: u64) -> Result<Node, E> {
        Ok(Node::Number(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Node, E> {
        serde_json::Number::from_f64(v)
            .map(Node::Number)
            .ok_or_else(|| E::custom("non-finite number"))
    }

    fn visit_str<E>(self, v: &str) -> Result<Node, E> {
        Ok(Node::String(v.to_owned()))
    }

    fn visit_string<E>(self, v: String) -> Result<Node, E> {
        Ok(Node::String(v))
    }

    fn visit_unit<E>(self) -> Result<Node, E> {
        Ok(Node::Null)
    }

    fn visit_none<E>(self) -> Result<Node, E> {
        Ok(Node::Null)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Node, A::Error> {
        let mut items = Vec::new();
        while let Some(item) = seq.next_element()? {
            items.push(item);
        }
        Ok(Node::Array(items))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Node, A::Error> {
        let mut entries = Vec::new();
        while let Some((key, value)) = map.next_entry::<String, Node>()? {
            entries.push((key, value));
        }
        Ok(Node::Object(entries))
    }
}

impl Node {
    fn kind(&self) -> &'static str {
        match self {
            Node::Null => "null",
            Node::Bool(_) => "boolean",
            Node::Number(_) => "number",
            Node::String(_) => "string",
            Node::Array(_) => "array",
            Node::Object(_) => "object",
        }
    }

    fn into_value(self) -> Value {
        match self {
            Node::Null => Value::Null,
            Node::Bool(b) => Value::Bool(b),
            Node::Number(n) => Value::Number(n),
            Node::String(s) => Value::String(s),
            Node::Array(items) => Value::Array(items.into_iter().map(Node::into_value).collect()),
            Node::Object(entries) => Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, v.into_value()))
                    .collect(),
            ),
        }
    }
}

fn invalid(path: impl Into<String>, expected: &str, found: &Node) -> OcelError {
    OcelError::InvalidValue {
        path: path.into(),
        expected: format!("{expected}, found {}", found.kind()),
    }
}

fn into_object(node: Node, path: &str) -> Result<Vec<(String, Node)>, OcelError> {
    match node {
        Node::Object(entries) => Ok(entries),
        other => Err(invalid(path, "object", &other)),
    }
}

fn into_string(node: Node, path: &str) -> Result<String, OcelError> {
    match node {
        Node::String(s) => Ok(s),
        other => Err(invalid(path, "string", &other)),
    }
}

fn into_string_list(node: Node, path: &str) -> Result<Vec<String>, OcelError> {
    match node {
        Node::Array(items) => items
            .into_iter()
            .enumerate()
            .map(|(i, item)| into_string(item, &format!("{path}[{i}]")))
            .collect(),
        other => Err(invalid(path, "array of strings", &other)),
    }
}

fn into_attributes(node: Node, path: &str) -> Result<IndexMap<String, AttributeValue>, OcelError> {
    Ok(into_object(node, path)?
        .into_iter()
        .map(|(k, v)| (k, v.into_value()))
        .collect())
}

/// Removes every entry for `key`, returning the last one (later keys win, as in most JSON readers).
fn take(entries: &mut Vec<(String, Node)>, key: &str) -> Option<Node> {
    let mut found = None;
    let mut i = 0;
    while i < entries.len() {
        if entries[i].0 == key {
            found = Some(entries.remove(i).1);
        } else {
            i += 1;
        }
    }
    found
}

fn require(entries: &mut Vec<(String, Node)>, key: &str, context: &str) -> Result<Node, OcelError> {
    take(entries, key).ok_or_else(|| OcelError::MissingRequiredKey {
        key: key.to_string(),
        context: context.to_string(),
    })
}

/// Parses an ISO-8601 timestamp. Inputs without an offset are taken as UTC.
pub(crate) fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if let Ok(ts) = DateTime::parse_from_rfc3339(raw) {
        return Some(ts.with_timezone(&Utc));
    }
    const WITH_OFFSET: [&str; 4] = [
        "%Y-%m-%dT%H:%M:%S%.f%:z",
        "%Y-%m-%d %H:%M:%S%.f%:z",
        "%Y-%m-%dT%H:%M:%S%.f%z",
        "%Y-%m-%d %H:%M:%S%.f%z",
    ];
    for format in WITH_OFFSET {
        if let Ok(ts) = DateTime::parse_from_str(raw, format) {
            return Some(ts.with_timezone(&Utc));
        }
    }
    let naive = raw.strip_suffix('Z').unwrap_or(raw);
    for format in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"] {
        if let Ok(ts) = NaiveDateTime::parse_from_str(naive, format) {
            return Some(ts.and_utc());
        }
    }
    NaiveDate::parse_from_str(naive, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|ts| ts.and_utc())
}

fn looks_like_xml(bytes: &[u8]) -> bool {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    bytes
        .iter()
        .find(|b| !b.is_ascii_whitespace())
        .is_some_and(|&b| b == b'<')
}

/// Parses a JSON-OCEL document.
pub fn parse_ocel(bytes: &[u8]) -> Result<OcelLog, OcelError> {
    if looks_like_xml(bytes) {
        return Err(OcelError::UnsupportedFormat(
            "XML-OCEL is not supported; convert the log to JSON-OCEL".into(),
        ));
    }
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let root: Node =
        serde_json::from_slice(bytes).map_err(|e| OcelError::MalformedJson(e.to_string()))?;
    let mut root = into_object(root, "$")?;

    let mut global = into_object(require(&mut root, GLOBAL_LOG, "top level")?, GLOBAL_LOG)?;
    let declared_object_types: BTreeSet<String> = into_string_list(
        require(&mut global, OBJECT_TYPES, GLOBAL_LOG)?,
        &format!("{GLOBAL_LOG}.{OBJECT_TYPES}"),
    )?
    .into_iter()
    .collect();
    let attribute_names = match take(&mut global, ATTRIBUTE_NAMES) {
        Some(node) => into_string_list(node, &format!("{GLOBAL_LOG}.{ATTRIBUTE_NAMES}"))?,
        None => Vec::new(),
    };
    let version = match take(&mut global, VERSION) {
        Some(node) => into_string(node, &format!("{GLOBAL_LOG}.{VERSION}"))?,
        None => String::new(),
    };

    let raw_events = into_object(require(&mut root, EVENTS, "top level")?, EVENTS)?;
    let raw_objects = into_object(require(&mut root, OBJECTS, "top level")?, OBJECTS)?;

    let mut objects = Vec::with_capacity(raw_objects.len());
    for (id, node) in raw_objects {
        let path = format!("{OBJECTS}.{id}");
        let mut fields = into_object(node, &path)?;
        let otype = into_string(require(&mut fields, TYPE, &path)?, &format!("{path}.{TYPE}"))?;
        let ovmap = match take(&mut fields, OVMAP) {
            Some(node) => into_attributes(node, &format!("{path}.{OVMAP}"))?,
            None => IndexMap::new(),
        };
        objects.push(ObjectInstance { id, otype, ovmap });
    }

    let mut events = Vec::with_capacity(raw_events.len());
    for (id, node) in raw_events {
        let path = format!("{EVENTS}.{id}");
        let mut fields = into_object(node, &path)?;
        let activity = into_string(
            require(&mut fields, ACTIVITY, &path)?,
            &format!("{path}.{ACTIVITY}"),
        )?;
        let raw_ts = into_string(
            require(&mut fields, TIMESTAMP, &path)?,
            &format!("{path}.{TIMESTAMP}"),
        )?;
        let timestamp = parse_timestamp(&raw_ts).ok_or_else(|| OcelError::BadTimestamp {
            event: id.clone(),
            value: raw_ts.clone(),
        })?;
        let mut omap = into_string_list(require(&mut fields, OMAP, &path)?, &format!("{path}.{OMAP}"))?;
        // repeated references to one object collapse to the first occurrence
        let mut seen = BTreeSet::new();
        omap.retain(|o| seen.insert(o.clone()));
        let vmap = match take(&mut fields, VMAP) {
            Some(node) => into_attributes(node, &format!("{path}.{VMAP}"))?,
            None => IndexMap::new(),
        };
        events.push(Event {
            id,
            activity,
            timestamp,
            omap,
            vmap,
        });
    }

    OcelLog::new(version, attribute_names, declared_object_types, events, objects)
}

fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Micros, true)
}

fn attributes_to_value(attrs: &IndexMap<String, AttributeValue>) -> Value {
    Value::Object(attrs.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
}

fn to_json_value(log: &OcelLog) -> Value {
    let mut global = Map::new();
    global.insert(VERSION.into(), Value::String(log.version().to_string()));
    global.insert(
        ATTRIBUTE_NAMES.into(),
        Value::Array(
            log.attribute_names()
                .iter()
                .cloned()
                .map(Value::String)
                .collect(),
        ),
    );
    global.insert(
        OBJECT_TYPES.into(),
        Value::Array(
            log.declared_object_types()
                .iter()
                .cloned()
                .map(Value::String)
                .collect(),
        ),
    );

    let mut events = Map::new();
    for event in log.events() {
        let mut fields = Map::new();
        fields.insert(ACTIVITY.into(), Value::String(event.activity.clone()));
        fields.insert(TIMESTAMP.into(), Value::String(format_timestamp(&event.timestamp)));
        fields.insert(
            OMAP.into(),
            Value::Array(event.omap.iter().cloned().map(Value::String).collect()),
        );
        fields.insert(VMAP.into(), attributes_to_value(&event.vmap));
        events.insert(event.id.clone(), Value::Object(fields));
    }

    let mut objects = Map::new();
    for object in log.objects() {
        let mut fields = Map::new();
        fields.insert(TYPE.into(), Value::String(object.otype.clone()));
        fields.insert(OVMAP.into(), attributes_to_value(&object.ovmap));
        objects.insert(object.id.clone(), Value::Object(fields));
    }

    let mut root = Map::new();
    root.insert(GLOBAL_LOG.into(), Value::Object(global));
    root.insert(EVENTS.into(), Value::Object(events));
    root.insert(OBJECTS.into(), Value::Object(objects));
    Value::Object(root)
}

/// Writes `log` as pretty-printed JSON-OCEL.
pub fn write_ocel<W: std::io::Write>(log: &OcelLog, writer: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(writer, &to_json_value(log))
}

pub fn write_ocel_to_string(log: &OcelLog) -> String {
    serde_json::to_string_pretty(&to_json_value(log)).expect("in-memory JSON serialization")
}
