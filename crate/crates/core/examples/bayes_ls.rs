//! Sparse Bayesian least squares on a small regression problem.
//!
//! cargo run --example bayes_ls

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slingshot::learners::{sample_policy, SparseBayesLs};
use slingshot::sparse::SparseVector;

fn main() {
    let truth = [2.0, -1.0, 0.0, 0.5, 3.0, 0.0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // prior N(0, 100 I), noise sd 0.5
    let mut ls = SparseBayesLs::new(truth.len(), 0.5, 100.0).unwrap();
    let mut targets = Vec::new();
    for _ in 0..40 {
        // features 0-2 and 3-4 never co-occur, feature 5 is never seen;
        // 0 and 2 always appear together, so only their sum is pinned down
        let row = if rng.random::<bool>() {
            vec![(0, 1.0), (1, rng.random_range(0.0..2.0)), (2, 1.0)]
        } else {
            vec![(3, rng.random_range(-1.0..1.0)), (4, 1.0)]
        };
        let phi = SparseVector::from_sorted(truth.len(), row).unwrap();
        let y: f64 = phi.iter().map(|(i, v)| truth[i] * v).sum::<f64>() + rng.random_range(-0.5..0.5);
        ls.push(&phi).unwrap();
        targets.push(y);
    }
    let posterior = ls.solve(&targets).unwrap();
    println!("{} independent components", ls.components());
    for i in 0..truth.len() {
        println!(
            "w[{i}] truth {:>5.2}  mean {:>7.3}  sd {:>7.3}",
            truth[i],
            posterior.mean.0[i],
            posterior.variance[i].sqrt()
        );
    }
    let draw = sample_policy(&posterior, &mut rng);
    println!("one posterior draw: {:?}", draw.0.iter().map(|w| format!("{w:.2}")).collect::<Vec<_>>());
}
