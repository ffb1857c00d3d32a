//! Exact tools for studying how many value queries submodular function
//! minimization needs: hard instance families with their adversaries,
//! weight-based functions and their cut dimension, perturbation witnesses,
//! reference solvers, and graph learning from cut queries.

pub mod cli;
pub mod cut_dimension;
pub mod error;
pub mod games;
pub mod generators;
pub mod graph_learning;
pub mod hard_instances;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod perturbation;
pub mod rational;
pub mod solvers;
pub mod subset;
pub mod weight_based;

pub use error::{Error, Result};
pub use oracle::{QueryOracle, SetFunction, ValueOracle};
pub use rational::Rational;
pub use subset::Subset;
