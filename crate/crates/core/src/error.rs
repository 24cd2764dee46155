use thiserror::Error;

use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice has no elements")]
    EmptyLattice,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a lattice: {0}")]
    NotALattice(ValidationReport),

    #[error("table does not cover element `{0}`")]
    IncompleteTable(String),
    #[error("table has {found} entries but the lattice has {expected} elements")]
    TableSize { expected: usize, found: usize },
    #[error("not a space function: {0}")]
    NotSpaceFunction(ValidationReport),
    #[error("invalid agents: {}", fmt_agent_reports(.0))]
    InvalidAgents(Vec<(String, ValidationReport)>),
    #[error("an scs needs at least one agent")]
    NoAgents,
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("functions live on different lattices")]
    CarrierMismatch,

    #[error("lattice is not distributive (witness {0}, {1}, {2}); use the oracle")]
    FrameRequired(String, String, String),
    #[error("group is empty")]
    EmptyGroup,
    #[error("delta result was computed for group {found:?}, not {expected:?}")]
    GroupMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("enumeration cap exceeded: {join_irreducibles} join-irreducibles, cap is {cap}")]
    CapExceeded {
        join_irreducibles: usize,
        cap: usize,
    },

    #[error("not surjective: `{0}` has no preimage")]
    NotSurjective(String),
    #[error("does not preserve meets at ({0}, {1})")]
    NotMeetPreserving(String, String),
    #[error("does not map top to top")]
    TopNotPreserved,
    #[error("extrusion axiom fails at `{0}`")]
    ExtrusionAxiom(String),

    #[error("powerset size {0} is out of range 0..=6")]
    PowersetRange(usize),
    #[error("invalid partition for agent `{agent}`: {reason}")]
    InvalidPartition { agent: String, reason: String },
    #[error("{0} states exceed the limit of {1}")]
    TooManyStates(usize, usize),

    #[error("no random space function found within the attempt budget")]
    GeneratorExhausted,

    #[error("malformed model: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_agent_reports(reports: &[(String, ValidationReport)]) -> String {
    reports
        .iter()
        .map(|(a, r)| format!("agent {a}: {r}"))
        .collect::<Vec<_>>()
        .join("; ")
}
