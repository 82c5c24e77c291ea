//! Hardness apparatus for `k ≥ 3`: restricted CNF instances, forcing and
//! transmitter gadgets certified by exhaustive search, a gadget miner, and
//! the reduction graph `J` whose partitionability matches satisfiability.

mod catalog;
mod cnf;
mod construct;
mod gadget;
mod mine;
mod reduction;

use thiserror::Error;

pub use catalog::{load_catalog, load_records, store_record, CatalogRecord};
pub use cnf::{
    balanced_cnf_corpus, parse_dimacs, random_restricted_cnf, validate_cnf, Literal, Occurrence,
    RestrictedCnf, VariableOccurrences,
};
pub use construct::{attach, build_a_prime, build_h, APrimeGadgets, HCase, HGadgets};
pub use gadget::{
    certify_gadget, certify_gadget_with_limit, Certificate, Gadget, GadgetRole, Truth,
    CERTIFY_LIMIT, PORT_E, PORT_S, PORT_V,
};
pub use mine::{
    mine_gadget, mine_minimal_witness, MineOutcome, MineRequest, MinedGadget, EXHAUSTIVE_ORDER,
};
pub use reduction::{
    build_reduction, soundness_check, Catalog, ReductionMap, TransmitterCopy, SOUNDNESS_LIMIT,
};

use crate::partition::Coloring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HardnessError {
    #[error("clause {clause} has {size} literals, expected 2 or 3")]
    ClauseSizeViolation { clause: usize, size: usize },
    #[error("variable {var}: {detail}")]
    OccurrenceViolation { var: usize, detail: String },
    #[error("the witness has a valid coloring")]
    WitnessSatisfiable,
    #[error("no single edge removal makes the witness satisfiable")]
    NoRemovableEdge,
    #[error("{size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("gadget fails its role: {reason}")]
    RoleViolated {
        reason: String,
        witness: Option<Coloring>,
    },
    #[error("no certified {0} gadget in the catalog")]
    MissingGadget(GadgetRole),
    #[error("unsupported spec: {0}")]
    BadSpec(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("catalog store: {0}")]
    Store(String),
}
