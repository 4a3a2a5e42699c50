//! Quadratic embedding constants of graphs, with exact solvers for joins with
//! empty graphs and for fan graphs.

pub mod cheb_poly;
pub mod error;
pub mod fan;
pub mod graphs;
pub mod join_qec;
pub mod spectra;

pub use cheb_poly::IntPoly;
pub use error::{QecError, Result};
pub use fan::{fan_embedding, fan_lambda_sets, qec_fan, solve_recurrence, Embedding, RecurrenceSolution};
pub use graphs::{distance_matrix, family, join, parse_graph_expr, DistanceMatrix, FamilyKind, Graph};
pub use join_qec::{compute_lambda_sets, qec_join_empty, qec_k1_regular, LambdaSets};
pub use spectra::{qec_oracle, QecResult, Source, StationaryWitness};
