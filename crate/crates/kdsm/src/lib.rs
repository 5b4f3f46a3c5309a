//! Exact solvers for k-distant submodular set functions.
//!
//! A set function f on a ground set S is k-distant submodular when the
//! submodular inequality `f(X) + f(Y) >= f(X | Y) + f(X & Y)` holds for
//! every pair of subsets whose symmetric difference has at least k
//! elements. This crate provides, all over exact rational arithmetic:
//!
//! * verification, normalization, value bounds and shift transforms for
//!   such functions ([`set_function`]);
//! * the restricted constraint family that makes linear optimization over
//!   `P(f) = {x : x(T) <= f(T) for all T}` tractable in n^k ([`family`]);
//! * a two-phase exact simplex with Bland's rule ([`ratlp`]);
//! * linear maximization over P(f) with weight perturbation and dual
//!   certificates ([`optimizer`]);
//! * minimization of integer-valued functions via separation, binary
//!   search and an ellipsoid membership test ([`minimizer`]);
//! * instance generators and application solvers: cut functions of
//!   complete graphs, p/q-submodularity, weighted matroid intersection
//!   under the minimum rank oracle, and clique-based hardness instances
//!   ([`apps`]);
//! * brute-force reference oracles for all of the above ([`reference`]).

pub mod apps;
pub mod error;
pub mod family;
pub mod io;
pub mod minimizer;
pub mod optimizer;
pub mod ratlp;
pub mod rational;
pub mod reference;
pub mod set_function;
pub mod subset;

pub use error::Error;
pub use rational::Rational;
pub use set_function::SetFunction;
pub use subset::{GroundSet, Subset};
