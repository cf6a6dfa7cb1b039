//! Labeled symmetric similarity matrices.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("expected a {expected}x{expected} matrix")]
    Shape { expected: usize },
    #[error("entry ({row}, {col}) = {value} is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("entries ({0}, {1}) and ({1}, {0}) differ")]
    Asymmetric(usize, usize),
    #[error("diagonal entry {0} is not 1")]
    Diagonal(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}

/// Symmetric matrix over a list of labels with unit diagonal and entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    order: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn new(order: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let n = order.len();
        if values.len() != n || values.iter().any(|row| row.len() != n) {
            return Err(MatrixError::Shape { expected: n });
        }
        for (i, label) in order.iter().enumerate() {
            if order[..i].contains(label) {
                return Err(MatrixError::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            if values[i][i] != 1.0 {
                return Err(MatrixError::Diagonal(i));
            }
            for j in 0..n {
                let value = values[i][j];
                if !(0.0..=1.0).contains(&value) {
                    return Err(MatrixError::OutOfRange { row: i, col: j, value });
                }
                if value != values[j][i] {
                    return Err(MatrixError::Asymmetric(i, j));
                }
            }
        }
        Ok(Self { order, values })
    }

    /// Fills the upper triangle with `f(i, j)` for `i < j` and mirrors it.
    pub(crate) fn from_upper_triangle(
        order: Vec<String>,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let n = order.len();
        let mut values = vec![vec![0.0; n]; n];
        for i in 0..n {
            values[i][i] = 1.0;
            for j in i + 1..n {
                let v = f(i, j);
                values[i][j] = v;
                values[j][i] = v;
            }
        }
        Self { order, values }
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.order.iter().position(|l| l == label)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.values[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Largest entry off the diagonal, or `None` for fewer than two labels.
    pub fn max_off_diagonal(&self) -> Option<f64> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.values[i][j])
            .reduce(f64::max)
    }

    /// CSV with a header row and a label column, cells printed with `decimals` places.
    pub fn write_csv<W: io::Write>(&self, writer: W, decimals: usize) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec![String::new()];
        header.extend(self.order.iter().cloned());
        out.write_record(&header)?;
        for (label, row) in self.order.iter().zip(&self.values) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(|v| format!("{v:.decimals$}")));
            out.write_record(&record)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, decimals: usize) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, decimals).expect("in-memory CSV");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("t{i}")).collect()
    }

    #[test]
    fn validation() {
        assert!(SimilarityMatrix::new(labels(2), vec![vec![1.0, 0.5], vec![0.5, 1.0]]).is_ok());
        assert_eq!(
            SimilarityMatrix::new(labels(2), vec![vec![1.0, 0.5], vec![0.4, 1.0]]),
            Err(MatrixError::Asymmetric(0, 1))
        );
        assert_eq!(
            SimilarityMatrix::new(labels(2), vec![vec![0.9, 0.5], vec![0.5, 1.0]]),
            Err(MatrixError::Diagonal(0))
        );
        assert!(matches!(
            SimilarityMatrix::new(labels(2), vec![vec![1.0, 1.5], vec![1.5, 1.0]]),
            Err(MatrixError::OutOfRange { .. })
        ));
        assert_eq!(
            SimilarityMatrix::new(labels(2), vec![vec![1.0]]),
            Err(MatrixError::Shape { expected: 2 })
        );
        assert!(matches!(
            SimilarityMatrix::new(vec!["a".into(), "a".into()], vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(MatrixError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let m = SimilarityMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 0.25], vec![0.25, 1.0]],
        )
        .unwrap();
        assert_eq!(m.to_csv_string(2), ",a,b\na,1.00,0.25\nb,0.25,1.00\n");
        assert_eq!(m.max_off_diagonal(), Some(0.25));
    }
}
