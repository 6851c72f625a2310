//! Bayesian least squares with a Gaussian prior over a sparse design matrix.
//!
//! For rows `φ_i` and targets `y_i` the posterior over `w` has precision
//! `P = I / prior_variance + ΦᵀΦ / σ²` and mean `P⁻¹ Φᵀy / σ²`. The Gram
//! matrix `ΦᵀΦ` is block diagonal over connected components of the feature
//! co-occurrence graph (features appearing together in some row), and features
//! that never appear keep the prior. Each component is factored densely and the
//! factor is cached until a new row touches the component, so a refit with new
//! targets costs one triangular solve per component.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{LearnerError, RlsviHyper, TransitionRecord, WeightVector};
use crate::sparse::SparseVector;

/// Posterior mean and per-weight variance (diagonal of the covariance).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    pub mean: WeightVector,
    pub variance: Vec<f64>,
}

impl Posterior {
    pub fn prior(dim: usize, prior_variance: f64) -> Self {
        Posterior {
            mean: WeightVector::zeros(dim),
            variance: vec![prior_variance; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Draws `ŵ_j = mean_j + sqrt(variance_j) z_j` with independent standard normal `z_j`.
pub fn sample_policy<R: Rng + ?Sized>(p: &Posterior, rng: &mut R) -> WeightVector {
    WeightVector(
        p.mean
            .0
            .iter()
            .zip(&p.variance)
            .map(|(&m, &v)| {
                let z: f64 = rng.sample(StandardNormal);
                m + v.sqrt() * z
            })
            .collect(),
    )
}

struct Factor {
    features: Vec<usize>,
    chol: Cholesky<f64, Dyn>,
    variance: Vec<f64>,
}

/// Incrementally maintained sparse Bayesian least-squares problem.
pub struct SparseBayesLs {
    dim: usize,
    noise_precision: f64,
    prior_precision: f64,
    rows: Vec<SparseVector>,
    parent: Vec<usize>,
    component_rows: BTreeMap<usize, Vec<usize>>,
    factors: BTreeMap<usize, Factor>,
    dirty: BTreeSet<usize>,
}

impl SparseBayesLs {
    pub fn new(dim: usize, sigma: f64, prior_variance: f64) -> Result<Self, LearnerError> {
        if !(sigma > 0.0 && sigma.is_finite()) || !(prior_variance > 0.0 && prior_variance.is_finite()) {
            return Err(LearnerError::InvalidConfig(
                "sigma and prior_variance must be positive and finite".into(),
            ));
        }
        Ok(SparseBayesLs {
            dim,
            noise_precision: 1.0 / (sigma * sigma),
            prior_precision: 1.0 / prior_variance,
            rows: Vec::new(),
            parent: (0..dim).collect(),
            component_rows: BTreeMap::new(),
            factors: BTreeMap::new(),
            dirty: BTreeSet::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of connected feature components touched by data.
    pub fn components(&self) -> usize {
        self.component_rows.len()
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[gone] = keep;
        if let Some(moved) = self.component_rows.remove(&gone) {
            self.component_rows.entry(keep).or_default().extend(moved);
        }
        self.factors.remove(&gone);
        self.dirty.remove(&gone);
        self.factors.remove(&keep);
        self.dirty.insert(keep);
        keep
    }

    /// Appends a design row.
    pub fn push(&mut self, phi: &SparseVector) -> Result<(), LearnerError> {
        if phi.dim() != self.dim {
            return Err(LearnerError::DimensionMismatch {
                weights: self.dim,
                features: phi.dim(),
            });
        }
        let row = self.rows.len();
        self.rows.push(phi.clone());
        let Some(&first) = phi.indices().first() else {
            return Ok(());
        };
        let mut root = self.find(first);
        for &i in &phi.indices()[1..] {
            root = self.union(root, i);
        }
        self.component_rows.entry(root).or_default().push(row);
        self.factors.remove(&root);
        self.dirty.insert(root);
        Ok(())
    }

    fn refresh(&mut self) -> Result<(), LearnerError> {
        let dirty: Vec<usize> = std::mem::take(&mut self.dirty).into_iter().collect();
        for root in dirty {
            let rows = &self.component_rows[&root];
            let features: Vec<usize> = rows
                .iter()
                .flat_map(|&r| self.rows[r].indices().iter().copied())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let k = features.len();
            let mut precision = DMatrix::<f64>::from_diagonal_element(k, k, self.prior_precision);
            for &r in rows {
                let row = &self.rows[r];
                let local: Vec<(usize, f64)> = row
                    .iter()
                    .map(|(i, v)| (features.binary_search(&i).expect("feature in component"), v))
                    .collect();
                for &(a, va) in &local {
                    for &(b, vb) in &local {
                        precision[(a, b)] += self.noise_precision * va * vb;
                    }
                }
            }
            let chol = Cholesky::new(precision)
                .ok_or_else(|| LearnerError::Numerical(format!("precision block of size {k} is not positive definite")))?;
            let inverse = chol.inverse();
            let variance: Vec<f64> = (0..k).map(|i| inverse[(i, i)]).collect();
            if variance.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(LearnerError::Numerical("non-finite posterior variance".into()));
            }
            self.factors.insert(
                root,
                Factor {
                    features,
                    chol,
                    variance,
                },
            );
        }
        Ok(())
    }

    /// Posterior for the given targets, one per pushed row.
    pub fn solve(&mut self, targets: &[f64]) -> Result<Posterior, LearnerError> {
        if targets.len() != self.rows.len() {
            return Err(LearnerError::InvalidConfig(format!(
                "{} targets for {} rows",
                targets.len(),
                self.rows.len()
            )));
        }
        if let Err(e) = self.refresh() {
            // leave the failed components marked for the next attempt
            self.dirty.extend(self.component_rows.keys().filter(|r| !self.factors.contains_key(r)));
            return Err(e);
        }
        let mut posterior = Posterior::prior(self.dim, 1.0 / self.prior_precision);
        for (root, factor) in &self.factors {
            let mut rhs = DVector::<f64>::zeros(factor.features.len());
            for &r in &self.component_rows[root] {
                let y = targets[r] * self.noise_precision;
                for (i, v) in self.rows[r].iter() {
                    let local = factor.features.binary_search(&i).expect("feature in component");
                    rhs[local] += v * y;
                }
            }
            let mean = factor.chol.solve(&rhs);
            for (local, &feature) in factor.features.iter().enumerate() {
                posterior.mean.0[feature] = mean[local];
                posterior.variance[feature] = factor.variance[local];
            }
        }
        if !posterior.mean.is_finite() {
            return Err(LearnerError::Numerical("non-finite posterior mean".into()));
        }
        Ok(posterior)
    }
}

/// Fits the posterior over `w` from remembered transitions.
///
/// Targets are `r_i + γ max_a' w_bootᵀ φ(s'_i, a')`, or `r_i` for terminal records.
pub fn rlsvi_fit(memory: &[TransitionRecord], h: &RlsviHyper, w_boot: &WeightVector) -> Result<Posterior, LearnerError> {
    h.validate()?;
    let dim = w_boot.len();
    let mut ls = SparseBayesLs::new(dim, h.sigma, h.prior_variance)?;
    let mut targets = Vec::with_capacity(memory.len());
    for record in memory {
        ls.push(&record.phi)?;
        targets.push(record.target(&w_boot.0, h.gamma)?);
    }
    ls.solve(&targets)
}
