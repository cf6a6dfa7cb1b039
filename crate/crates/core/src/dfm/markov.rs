//! Markov conversion and object-type similarity.
//!
//! Each relation's probability is its frequency divided by the total frequency
//! leaving the same task for the same object type. Two object types are
//! compared through their sparse transition matrices `P1`, `P2`:
//!
//! ```text
//! sim = sum(P1 .* P2) / ((sum(P1 .^ 2) + sum(P2 .^ 2)) / 2)
//! ```
//!
//! Missing entries are zero, so both sums only need the stored relations.

use std::collections::BTreeMap;

use super::{Dfm, DfmError, Relation};
use crate::matrix::SimilarityMatrix;

/// Row-stochastic transition probabilities of a single object type, keyed by (source, target).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionMatrix {
    entries: BTreeMap<(String, String), f64>,
    squared_sum: f64,
}

impl TransitionMatrix {
    pub fn from_entries(entries: BTreeMap<(String, String), f64>) -> Self {
        // fold from +0.0; `sum` starts at -0.0 and an empty matrix would print as "-0"
        let squared_sum = entries.values().fold(0.0, |acc, p| acc + p * p);
        Self {
            entries,
            squared_sum,
        }
    }

    pub fn entries(&self) -> &BTreeMap<(String, String), f64> {
        &self.entries
    }

    pub fn get(&self, source: &str, target: &str) -> f64 {
        self.entries
            .get(&(source.to_string(), target.to_string()))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Similarity of two transition matrices; 0 when both are empty.
///
/// The dot product is accumulated in key order over the shared entries, so
/// swapping the arguments gives a bit-identical result.
pub fn pairwise_similarity(a: &TransitionMatrix, b: &TransitionMatrix) -> f64 {
    let denominator = (a.squared_sum + b.squared_sum) / 2.0;
    if denominator == 0.0 {
        return 0.0;
    }
    let numerator = a
        .entries
        .iter()
        .filter_map(|(key, pa)| b.entries.get(key).map(|pb| pa * pb))
        .fold(0.0, |acc, x| acc + x);
    (numerator / denominator).clamp(0.0, 1.0)
}

/// A multigraph with relation probabilities and the object-type similarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovDfm {
    dfm: Dfm,
    prob: BTreeMap<Relation, f64>,
    matrices: BTreeMap<String, TransitionMatrix>,
    similarity: SimilarityMatrix,
}

impl MarkovDfm {
    pub fn from_dfm(dfm: Dfm) -> Self {
        let mut prob = BTreeMap::new();
        let mut per_type: BTreeMap<String, BTreeMap<(String, String), f64>> = dfm
            .object_types()
            .iter()
            .map(|t| (t.clone(), BTreeMap::new()))
            .collect();

        let mut rows: BTreeMap<(&str, &str), u64> = BTreeMap::new();
        for (r, &f) in dfm.frequencies() {
            *rows.entry((r.source.as_str(), r.otype.as_str())).or_default() += f;
        }
        for ((source, otype), total) in rows {
            for (relation, f) in dfm.outgoing(source, otype) {
                let p = f as f64 / total as f64;
                prob.insert(relation.clone(), p);
                per_type
                    .get_mut(otype)
                    .expect("relation object type is in the graph")
                    .insert((relation.source.clone(), relation.target.clone()), p);
            }
        }

        let matrices: BTreeMap<String, TransitionMatrix> = per_type
            .into_iter()
            .map(|(t, entries)| (t, TransitionMatrix::from_entries(entries)))
            .collect();
        let order: Vec<String> = matrices.keys().cloned().collect();
        let similarity = SimilarityMatrix::from_upper_triangle(order.clone(), |i, j| {
            pairwise_similarity(&matrices[&order[i]], &matrices[&order[j]])
        });

        Self {
            dfm,
            prob,
            matrices,
            similarity,
        }
    }

    pub fn dfm(&self) -> &Dfm {
        &self.dfm
    }

    pub fn probabilities(&self) -> &BTreeMap<Relation, f64> {
        &self.prob
    }

    pub fn probability(&self, source: &str, otype: &str, target: &str) -> Option<f64> {
        self.prob.get(&Relation::new(source, otype, target)).copied()
    }

    pub fn transition_matrix(&self, otype: &str) -> Option<&TransitionMatrix> {
        self.matrices.get(otype)
    }

    /// Similarity of two object types; 1 for a type with itself.
    pub fn pairwise_similarity(&self, a: &str, b: &str) -> Result<f64, DfmError> {
        let ma = self
            .matrices
            .get(a)
            .ok_or_else(|| DfmError::UnknownObjectType(a.to_string()))?;
        let mb = self
            .matrices
            .get(b)
            .ok_or_else(|| DfmError::UnknownObjectType(b.to_string()))?;
        if a == b {
            return Ok(1.0);
        }
        Ok(pairwise_similarity(ma, mb))
    }

    pub fn similarity_matrix(&self) -> &SimilarityMatrix {
        &self.similarity
    }
}

impl Dfm {
    pub fn to_markov(&self) -> MarkovDfm {
        MarkovDfm::from_dfm(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::dfm::tests::running_example;

    #[test]
    fn running_example_probabilities() {
        let m = running_example().to_markov();
        assert_eq!(m.probability("ca", "o", "pi"), Some(6.0 / 9.0));
        assert_eq!(m.probability("ca", "o", "ca"), Some(3.0 / 9.0));
        assert_eq!(m.probability("po", "o", "ca"), Some(1.0));
        assert_eq!(m.probability("sp", "p", "sr"), Some(1.0));
        assert_eq!(m.probabilities().len(), m.dfm().relation_count());
    }

    #[test]
    fn running_example_similarity() {
        let m = running_example().to_markov();
        let sim_io = m.pairwise_similarity("i", "o").unwrap();
        assert!((sim_io - 252.0 / 333.0).abs() < 1e-12);
        assert_eq!(format!("{sim_io:.2}"), "0.76");
        assert_eq!(m.pairwise_similarity("i", "p").unwrap(), 0.0);
        assert_eq!(m.pairwise_similarity("o", "p").unwrap(), 0.0);
        assert_eq!(m.pairwise_similarity("o", "o").unwrap(), 1.0);
        assert_eq!(
            m.pairwise_similarity("o", "zz").unwrap_err(),
            DfmError::UnknownObjectType("zz".into())
        );
        let sm = m.similarity_matrix();
        assert_eq!(sm.order(), ["i", "o", "p"]);
        assert_eq!(sm.get("o", "i"), Some(sim_io));
    }

    #[test]
    fn relation_less_types() {
        let types: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
        let dfm = Dfm::new(types, BTreeSet::new(), BTreeMap::new()).unwrap();
        let m = dfm.to_markov();
        assert_eq!(m.pairwise_similarity("a", "b").unwrap(), 0.0);
        assert_eq!(m.pairwise_similarity("a", "a").unwrap(), 1.0);
        assert_eq!(m.similarity_matrix().rows(), [vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn single_type_matrix() {
        let types: BTreeSet<String> = ["a".to_string()].into();
        let m = Dfm::new(types, BTreeSet::new(), BTreeMap::new()).unwrap().to_markov();
        assert_eq!(m.similarity_matrix().rows(), [vec![1.0]]);
    }
}
