//! Shared fixtures for the criterion benches.

use bfgp_core::domains::{build_suite, Domain};
use bfgp_core::{GpProblem, Instance};

/// The domain's default training problem for seed 1.
pub fn training_problem(domain: Domain) -> GpProblem {
    let suite = build_suite(domain, usize::MAX, 0, 1).expect("suite builds");
    GpProblem::from_specs(&suite.training, domain.schemas(), domain.pointers())
        .expect("problem builds")
}

/// The domain's validation instances for seed 1.
pub fn validation_instances(domain: Domain, count: usize) -> Vec<Instance> {
    let suite = build_suite(domain, 0, count, 1).expect("suite builds");
    suite
        .validation
        .iter()
        .map(|s| s.extend(domain.pointers()).expect("instance extends"))
        .collect()
}
