//! Partitions of sparse graphs into an independent set and a forest of small
//! components: exact maximum average degree, an exhaustive partition solver,
//! constructive solvers for sparse graphs, a discharging auditor, and the
//! gadget machinery behind the NP-completeness results.

pub mod discharge;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod mad;
pub mod partition;
pub mod thm1;
pub mod thm2;
