//! Applications and instance generators: cut functions of weighted
//! complete graphs, p/q-submodularity, weighted matroid intersection
//! under the minimum rank oracle, clique-detection instances, and seeded
//! random k-distant instance generation for tests.

pub mod clique;
pub mod cut;
pub mod matroid;
pub mod pq;
pub mod random;

pub use clique::{gen_clique_function, Graph};
pub use cut::{check_cut_condition, gen_cut_function, WeightedCompleteGraph};
pub use matroid::{
    build_min_rank, solve_weighted_matroid_intersection, Matroid, MinRankInstance,
};
pub use pq::{gen_indicator, is_pq_submodular, pq_to_distant, PqVerdict};
pub use random::{gen_random_kdistant, Strategy};
