//! Exact finite-time law of the walk on the integers.

mod hypergeometric;
mod paths;
mod pmf;

pub use hypergeometric::hyp2f1_terminating;
pub use paths::{xi, xi_bruteforce, xi_raw_bruteforce, PathCount, ENUMERATION_BUDGET};
pub use pmf::{
    distribution, distribution_by_evolution, evolve_chirality, probability_bruteforce,
    Distribution, InitialDistribution, PmfMethod,
};

pub(crate) use pmf::{extremes, interior_terms, interior_weights};
