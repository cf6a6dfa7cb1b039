//! Graphviz and JSON renderings of a multigraph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Dfm, DfmError, MarkovDfm, Relation};

const PALETTE: [&str; 12] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
    "#1b9e77", "#d95f02", "#7570b3", "#66a61e",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `dfm` as a DOT digraph, one edge per relation colored by object type.
///
/// Colors are assigned by the object type's position in sorted order, cycling
/// through a fixed palette. Pass the Markov form to add `p=` labels.
pub fn export_dot(dfm: &Dfm, probabilities: Option<&MarkovDfm>) -> String {
    let colors: BTreeMap<&str, &str> = dfm
        .object_types()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), PALETTE[i % PALETTE.len()]))
        .collect();

    let mut out = String::from("digraph dfm {\n");
    for task in dfm.tasks() {
        let _ = writeln!(out, "  {} [shape=box];", quote(task));
    }
    for (relation, freq) in dfm.frequencies() {
        let mut label = format!("{}: f={freq}", relation.otype);
        if let Some(p) = probabilities.and_then(|m| m.probabilities().get(relation)) {
            let _ = write!(label, " p={p:.2}");
        }
        let color = colors[relation.otype.as_str()];
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, color=\"{color}\", fontcolor=\"{color}\"];",
            quote(&relation.source),
            quote(&relation.target),
            quote(&label),
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub source: String,
    pub otype: String,
    pub target: String,
    pub freq: u64,
    pub prob: f64,
}

/// JSON form of a Markov multigraph. Arrays are sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfmJson {
    pub object_types: Vec<String>,
    pub tasks: Vec<String>,
    pub relations: Vec<RelationJson>,
}

impl From<&MarkovDfm> for DfmJson {
    fn from(m: &MarkovDfm) -> Self {
        let dfm = m.dfm();
        Self {
            object_types: dfm.object_types().iter().cloned().collect(),
            tasks: dfm.tasks().iter().cloned().collect(),
            relations: dfm
                .frequencies()
                .iter()
                .map(|(r, &freq)| RelationJson {
                    source: r.source.clone(),
                    otype: r.otype.clone(),
                    target: r.target.clone(),
                    freq,
                    prob: m.probabilities()[r],
                })
                .collect(),
        }
    }
}

impl DfmJson {
    /// Rebuilds the multigraph; probabilities are recomputed from frequencies.
    pub fn to_dfm(&self) -> Result<Dfm, DfmError> {
        let freq = self
            .relations
            .iter()
            .map(|r| (Relation::new(&*r.source, &*r.otype, &*r.target), r.freq))
            .collect();
        Dfm::new(
            self.object_types.iter().cloned().collect::<BTreeSet<_>>(),
            self.tasks.iter().cloned().collect(),
            freq,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfm::tests::running_example;

    #[test]
    fn empty_graph() {
        let dot = export_dot(&Dfm::default(), None);
        let compact: String = dot.split_whitespace().collect::<Vec<_>>().join(" ");
        assert_eq!(compact, "digraph dfm { }");
    }

    #[test]
    fn running_example_shape() {
        let dfm = running_example();
        let markov = dfm.to_markov();
        let dot = export_dot(&dfm, Some(&markov));
        let nodes = dot.lines().filter(|l| l.contains("[shape=box]")).count();
        let edges: Vec<_> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(nodes, 5);
        assert_eq!(edges.len(), 8);
        let colors: BTreeSet<_> = edges
            .iter()
            .map(|l| l.split("color=\"").nth(1).unwrap().split('"').next().unwrap())
            .collect();
        assert_eq!(colors.len(), 3);
        assert!(dot.contains(r#""ca" -> "pi" [label="o: f=6 p=0.67""#));
        assert_eq!(dot, export_dot(&dfm, Some(&markov)));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
    }

    #[test]
    fn json_round_trip() {
        let markov = running_example().to_markov();
        let json = serde_json::to_string(&DfmJson::from(&markov)).unwrap();
        let back: DfmJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_dfm().unwrap(), *markov.dfm());
        assert_eq!(back.relations.len(), 8);
    }
}
