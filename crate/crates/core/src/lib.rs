//! Exact tools for defective 2-coloring with per-vertex capacities.
//!
//! Vertex `v` colored `i` may have at most `c_i(v)` neighbours of color `i`,
//! with `-1 <= c1 <= 1` and `-1 <= c2 <= 3`. The crate provides an exact
//! solver and criticality test, the potential function
//! `rho(A) = sum(1 + 4 c1 + 3 c2) - 9 e(A)` with exact minimisation, maximum
//! average degree and `(a,b)`-sparseness by min-cut, the discharging audit,
//! the quasi-edge extraction colorer, self-checking certificates, and an
//! exhaustive survey over small graphs.

pub mod certificate;
pub mod coloring;
pub mod discharging;
pub mod enumerate;
pub mod error;
pub mod flow;
pub mod graph;
pub mod graph6;
pub mod potential;
pub mod proof_colorer;
pub mod sparsity;
pub mod survey;

pub use coloring::{is_critical, solve, solve_13, verify_coloring, Capacity, CapacityMap, CapacitySpec, Color, Coloring};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use graph6::{parse_graph6, write_graph6};
pub use potential::{min_potential, rho_set, rho_vertex, SubsetFilter};
pub use sparsity::{mad, max_excess, Rational};
