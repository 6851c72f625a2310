//! Sparse feature vectors with a fixed declared dimension.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SparseError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("indices must be strictly increasing (at position {0})")]
    Unsorted(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Index/value pairs sorted by index, without explicit zeros.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from strictly increasing `(index, value)` pairs; zero values are dropped.
    pub fn from_sorted(dim: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self, SparseError> {
        let mut v = SparseVector::zeros(dim);
        for (pos, (index, value)) in entries.into_iter().enumerate() {
            if index >= dim {
                return Err(SparseError::IndexOutOfRange { index, dim });
            }
            if v.indices.last().is_some_and(|&last| last >= index) {
                return Err(SparseError::Unsorted(pos));
            }
            if value != 0.0 {
                v.indices.push(index);
                v.values.push(value);
            }
        }
        Ok(v)
    }

    /// Builds from unordered entries, summing duplicates.
    pub fn from_unsorted(dim: usize, mut entries: Vec<(usize, f64)>) -> Result<Self, SparseError> {
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some((last, acc)) if *last == i => *acc += v,
                _ => merged.push((i, v)),
            }
        }
        SparseVector::from_sorted(dim, merged)
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let mut v = SparseVector::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            if x != 0.0 {
                v.indices.push(i);
                v.values.push(x);
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    /// Dot product with a dense vector of the same dimension.
    pub fn dot_dense(&self, dense: &[f64]) -> Result<f64, SparseError> {
        if dense.len() != self.dim {
            return Err(SparseError::DimensionMismatch {
                left: self.dim,
                right: dense.len(),
            });
        }
        Ok(self.iter().map(|(i, v)| v * dense[i]).sum())
    }

    /// `index:value` lines, one per stored entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.iter() {
            out.push_str(&format!("{i}:{v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_checks() {
        assert!(matches!(
            SparseVector::from_sorted(4, [(4, 1.0)]),
            Err(SparseError::IndexOutOfRange { index: 4, dim: 4 })
        ));
        assert!(matches!(
            SparseVector::from_sorted(4, [(2, 1.0), (2, 1.0)]),
            Err(SparseError::Unsorted(1))
        ));
        let v = SparseVector::from_sorted(4, [(0, 0.0), (3, 2.0)]).unwrap();
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.get(3), 2.0);
        assert_eq!(v.get(1), 0.0);
    }

    #[test]
    fn unsorted_merges_duplicates() {
        let v = SparseVector::from_unsorted(5, vec![(3, 1.0), (1, 2.0), (3, 1.5), (2, 1.0), (2, -1.0)]).unwrap();
        assert_eq!(v.indices(), &[1, 3]);
        assert_eq!(v.values(), &[2.0, 2.5]);
    }

    #[test]
    fn text_dump() {
        let v = SparseVector::from_sorted(10, [(3, 2.0), (7, -1.5)]).unwrap();
        assert_eq!(v.to_text(), "3:2\n7:-1.5\n");
    }

    proptest! {
        #[test]
        fn dense_round_trip(values in proptest::collection::vec(prop_oneof![Just(0.0), -10.0..10.0f64], 0..40)) {
            let v = SparseVector::from_dense(&values);
            prop_assert_eq!(v.to_dense(), values.clone());
            prop_assert!(v.indices().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(v.values().iter().all(|&x| x != 0.0));
            let dot = v.dot_dense(&values).unwrap();
            let dense_dot: f64 = values.iter().map(|x| x * x).sum();
            prop_assert!((dot - dense_dot).abs() <= 1e-12 * (1.0 + dense_dot));
        }
    }
}
