use crate::error::{Error, Result};

/// Sparse feature vector with strictly ascending indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRow {
    /// Builds a row from `(index, value)` pairs; pairs are sorted by index.
    /// Duplicate indices are rejected.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|p| p.0);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidConfig(format!(
                "duplicate feature index {}",
                w[0].0
            )));
        }
        if pairs.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::NonFinite("feature value".into()));
        }
        let (indices, values) = pairs.into_iter().unzip();
        Ok(SparseRow { indices, values })
    }

    pub fn from_dense(x: &[f64]) -> Self {
        let (indices, values) = x
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        SparseRow { indices, values }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Largest index plus one (0 for an empty row).
    pub fn extent(&self) -> usize {
        self.indices.last().map_or(0, |i| i + 1)
    }

    #[inline]
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, v)| v * x[i])
            .sum()
    }

    /// `acc += t * self`
    #[inline]
    pub fn add_scaled_to(&self, t: f64, acc: &mut [f64]) {
        for (&i, v) in self.indices.iter().zip(&self.values) {
            acc[i] += t * v;
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.add_scaled_to(1.0, &mut out);
        out
    }
}

/// Labeled samples `(w_i, z_i)` with `z_i ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_features: usize,
    rows: Vec<SparseRow>,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn new(n_features: usize, rows: Vec<SparseRow>, labels: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: labels.len(),
            });
        }
        if let Some(z) = labels.iter().find(|z| **z != 1.0 && **z != -1.0) {
            return Err(Error::InvalidConfig(format!("label {z} is not ±1")));
        }
        if let Some(r) = rows.iter().find(|r| r.extent() > n_features) {
            return Err(Error::InvalidConfig(format!(
                "feature index {} exceeds dimension {n_features}",
                r.extent() - 1
            )));
        }
        if n_features == 0 {
            return Err(Error::InvalidConfig("feature dimension is zero".into()));
        }
        Ok(Dataset {
            n_features,
            rows,
            labels,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> (&SparseRow, f64) {
        (&self.rows[i], self.labels[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_row_sorts_and_dots() {
        let r = SparseRow::from_pairs(vec![(2, 2.0), (0, 0.5)]).unwrap();
        assert_eq!(r.indices(), &[0, 2]);
        assert_eq!(r.dot(&[1.0, 10.0, 3.0]), 6.5);
        assert_eq!(r.to_dense(3), vec![0.5, 0.0, 2.0]);
        assert!(SparseRow::from_pairs(vec![(1, 1.0), (1, 2.0)]).is_err());
    }

    #[test]
    fn dataset_validates() {
        let row = SparseRow::from_dense(&[1.0, 0.0]);
        assert!(Dataset::new(2, vec![row.clone()], vec![1.0]).is_ok());
        assert!(Dataset::new(2, vec![row.clone()], vec![0.0]).is_err());
        assert!(Dataset::new(2, vec![row.clone()], vec![]).is_err());
        assert!(Dataset::new(2, vec![], vec![]).is_err());
        let wide = SparseRow::from_pairs(vec![(4, 1.0)]).unwrap();
        assert!(Dataset::new(2, vec![wide], vec![1.0]).is_err());
    }
}
