//! Finite spatial constraint systems.
//!
//! A constraint system is a finite lattice ordered by entailment. Each agent
//! owns a *space function*, a join-homomorphism describing what the agent
//! holds. This crate computes, for a group of agents, the *distributed space*
//! `Δ_I` (the greatest space function below every member's), the projections
//! that extract agent and group information from a constraint, and right
//! inverses (extrusions) of space functions.
//!
//! ```
//! use scs_core::{delta_table, instances::m2_scs, Variant};
//!
//! let scs = m2_scs();
//! let group = scs.group(&["1", "2"]).unwrap();
//! let delta = delta_table(&scs, &group, Variant::Part3).unwrap();
//! let l = scs.lattice();
//! assert_eq!(l.name(delta.apply(l.elem("p").unwrap())), "np");
//! ```

pub mod distributed;
pub mod dot;
mod enumerate;
pub mod error;
pub mod extrusion;
pub mod instances;
pub mod lattice;
pub mod model;
pub mod random;
pub mod report;
pub mod space;

pub use distributed::{
    agent_projection, count_space_functions, delta, delta_empty, delta_oracle, delta_part,
    delta_table, finite_witness, group_projection, join_projection, Algorithm, CallTrace,
    DeltaEngine, DeltaResult, OpCounts, OracleLimits, Variant,
};
pub use enumerate::DEFAULT_JOIN_IRREDUCIBLE_CAP;
pub use error::{Error, Result};
pub use extrusion::{
    extrusion_external, extrusion_inf, extrusion_sup, has_right_inverse_precheck, is_surjective,
    preserves_meets, unreached, verify_extrusion_law, ExtrusionFunction, ExtrusionMethod,
    MeetFailure,
};
pub use lattice::{Elem, Lattice};
pub use report::{Rule, ValidationReport, Violation};
pub use space::{check_space_axioms, Agent, Group, Scs, SpaceFunction};
