//! Distributed spaces `Δ_I`, projections and finite witnesses.
//!
//! `Δ_I` is the greatest space function below every `δ_i` with `i ∈ I`. Two
//! independent routes compute it:
//!
//! * [`delta_oracle`] enumerates every space function below the agents and
//!   joins them pointwise. Works on any finite lattice, exponential in the
//!   number of join-irreducibles.
//! * [`delta_part`] / [`delta_table`] split the group in halves and recombine
//!   the halves with one of three meet formulas. Requires a distributive
//!   lattice and runs in polynomial time.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{for_each_below, greatest_below, DEFAULT_JOIN_IRREDUCIBLE_CAP};
use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::space::{same_carrier, Agent, Group, Scs, SpaceFunction};

/// Recombination formula used when splitting a group into `J` and `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `⨅{Δ_J(a) ⊔ Δ_K(b) | a ⊔ b ⊒ c}`
    Part1,
    /// `⨅{Δ_J(a) ⊔ Δ_K(a → c) | a ∈ Con}`
    Part2,
    /// `⨅{Δ_J(a) ⊔ Δ_K(a → c) | a ⊑ c}`
    Part3,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Part1, Variant::Part2, Variant::Part3];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Oracle,
    Part(Variant),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Part(Variant::Part1) => "part1",
            Algorithm::Part(Variant::Part2) => "part2",
            Algorithm::Part(Variant::Part3) => "part3",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(Algorithm::Oracle),
            "part1" => Ok(Algorithm::Part(Variant::Part1)),
            "part2" => Ok(Algorithm::Part(Variant::Part2)),
            "part3" => Ok(Algorithm::Part(Variant::Part3)),
            other => Err(format!(
                "unknown algorithm `{other}` (expected oracle|part1|part2|part3)"
            )),
        }
    }
}

/// Operation tallies for one Δ computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub joins: u64,
    pub meets: u64,
    pub implications: u64,
    /// Every invocation of the recursive evaluator, memo hits included.
    pub recursive_calls: u64,
    pub memo_hits: u64,
    /// Terms entering a meet (recursive variants) or completed tables probed (oracle).
    pub meet_candidates: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleLimits {
    /// Maximum number of join-irreducibles the enumeration accepts.
    pub max_join_irreducibles: usize,
}

impl OracleLimits {
    pub const DEFAULT: OracleLimits = OracleLimits {
        max_join_irreducibles: DEFAULT_JOIN_IRREDUCIBLE_CAP,
    };
}

/// A full `Δ_I` table plus how it was obtained.
#[derive(Clone, Debug)]
pub struct DeltaResult {
    pub group: Group,
    pub algorithm: Algorithm,
    pub table: SpaceFunction,
    pub op_counts: OpCounts,
}

impl DeltaResult {
    pub fn apply(&self, c: Elem) -> Elem {
        self.table.apply(c)
    }

    /// Canonical JSON: `{"algorithm", "group", "op_counts", "table"}` with sorted keys.
    pub fn to_json(&self, scs: &Scs) -> Value {
        json!({
            "algorithm": self.algorithm.to_string(),
            "group": scs.group_names(&self.group),
            "op_counts": serde_json::to_value(self.op_counts).expect("plain struct"),
            "table": serde_json::to_value(self.table.to_names()).expect("string map"),
        })
    }
}

/// `Δ_∅ = λ_⊤`.
pub fn delta_empty(scs: &Scs) -> SpaceFunction {
    SpaceFunction::lambda_top(scs.lattice().clone())
}

/// Search-based `Δ_I`: the greatest space function below every `δ_i`, `i ∈ I`,
/// found by exhaustive search over join-irreducible images rather than by
/// the recursive formulas.
///
/// The empty group is accepted and yields the join of all space functions.
pub fn delta_oracle(scs: &Scs, group: &Group, limits: OracleLimits) -> Result<DeltaResult> {
    let l = scs.lattice();
    let upper: Vec<Elem> = l
        .elements()
        .map(|c| l.meet_all(group.members().iter().map(|&i| scs.apply(i, c))))
        .collect();
    let mut counts = OpCounts {
        meets: (l.len() * group.len()) as u64,
        ..OpCounts::default()
    };
    let (acc, probes) = greatest_below(l, &upper, limits.max_join_irreducibles)?;
    counts.meet_candidates = probes;
    Ok(DeltaResult {
        group: group.clone(),
        algorithm: Algorithm::Oracle,
        table: SpaceFunction::new(l.clone(), acc)?,
        op_counts: counts,
    })
}

/// One non-base evaluation performed by a [`DeltaEngine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CallTrace {
    /// Half-open range of the canonical group being evaluated.
    pub lo: usize,
    pub hi: usize,
    pub at: Elem,
    pub candidates: u64,
}

/// Memoized divide-and-conquer evaluator for `Δ_I(c)`.
///
/// The group is split as `J = first ⌊|I|/2⌋ members`, `K = the rest`, so
/// every subgroup reached is a contiguous slice of the canonical member list
/// and memo entries are keyed by `(lo, hi, element)`.
pub struct DeltaEngine<'a> {
    scs: &'a Scs,
    members: Vec<Agent>,
    variant: Variant,
    memo: HashMap<(usize, usize, Elem), Elem>,
    counts: OpCounts,
    trace: Vec<CallTrace>,
}

impl<'a> DeltaEngine<'a> {
    pub fn new(scs: &'a Scs, group: &Group, variant: Variant) -> Result<Self> {
        if !scs.lattice().is_distributive() {
            return Err(scs.lattice().frame_required());
        }
        if group.is_empty() {
            return Err(Error::EmptyGroup);
        }
        Ok(Self {
            scs,
            members: group.members().to_vec(),
            variant,
            memo: HashMap::new(),
            counts: OpCounts::default(),
            trace: Vec::new(),
        })
    }

    /// `Δ_I(c)` for the whole group.
    pub fn eval(&mut self, c: Elem) -> Elem {
        self.part(0, self.members.len(), c)
    }

    pub fn counts(&self) -> OpCounts {
        self.counts
    }

    pub fn trace(&self) -> &[CallTrace] {
        &self.trace
    }

    fn part(&mut self, lo: usize, hi: usize, c: Elem) -> Elem {
        self.counts.recursive_calls += 1;
        if hi - lo == 1 {
            return self.scs.apply(self.members[lo], c);
        }
        if let Some(&v) = self.memo.get(&(lo, hi, c)) {
            self.counts.memo_hits += 1;
            return v;
        }
        let l = self.scs.lattice().clone();
        let mid = lo + (hi - lo) / 2;
        let mut acc = l.top();
        let mut candidates = 0u64;
        match self.variant {
            Variant::Part1 => {
                for a in l.elements() {
                    for b in l.elements() {
                        self.counts.joins += 1;
                        if !l.leq(c, l.join(a, b)) {
                            continue;
                        }
                        let term = l.join(self.part(lo, mid, a), self.part(mid, hi, b));
                        self.counts.joins += 1;
                        acc = l.meet(acc, term);
                        self.counts.meets += 1;
                        candidates += 1;
                    }
                }
            }
            Variant::Part2 | Variant::Part3 => {
                let bounded = self.variant == Variant::Part3;
                for a in l.elements() {
                    if bounded && !l.leq(a, c) {
                        continue;
                    }
                    let rest = l.implies_unchecked(a, c);
                    self.counts.implications += 1;
                    let term = l.join(self.part(lo, mid, a), self.part(mid, hi, rest));
                    self.counts.joins += 1;
                    acc = l.meet(acc, term);
                    self.counts.meets += 1;
                    candidates += 1;
                }
            }
        }
        self.counts.meet_candidates += candidates;
        self.trace.push(CallTrace {
            lo,
            hi,
            at: c,
            candidates,
        });
        self.memo.insert((lo, hi, c), acc);
        acc
    }
}

/// `Δ_I(c)` by the recursive algorithm.
pub fn delta_part(scs: &Scs, group: &Group, c: Elem, variant: Variant) -> Result<Elem> {
    let mut engine = DeltaEngine::new(scs, group, variant)?;
    Ok(engine.eval(c))
}

/// Full `Δ_I` table by the recursive algorithm, sharing one memo across elements.
pub fn delta_table(scs: &Scs, group: &Group, variant: Variant) -> Result<DeltaResult> {
    let mut engine = DeltaEngine::new(scs, group, variant)?;
    let table: Vec<Elem> = scs.lattice().elements().map(|c| engine.eval(c)).collect();
    Ok(DeltaResult {
        group: group.clone(),
        algorithm: Algorithm::Part(variant),
        table: SpaceFunction::new(scs.lattice().clone(), table)?,
        op_counts: engine.counts(),
    })
}

/// Computes `Δ_I` with the requested algorithm; the empty group yields `λ_⊤`
/// for every algorithm.
pub fn delta(
    scs: &Scs,
    group: &Group,
    algorithm: Algorithm,
    limits: OracleLimits,
) -> Result<DeltaResult> {
    match algorithm {
        Algorithm::Part(_) if group.is_empty() => Ok(DeltaResult {
            group: group.clone(),
            algorithm,
            table: delta_empty(scs),
            op_counts: OpCounts::default(),
        }),
        Algorithm::Oracle => delta_oracle(scs, group, limits),
        Algorithm::Part(v) => delta_table(scs, group, v),
    }
}

/// `Δ_I(c)` by the cheapest correct route for this lattice.
fn delta_at(scs: &Scs, group: &Group, c: Elem) -> Result<Elem> {
    if group.is_empty() {
        return Ok(delta_empty(scs).apply(c));
    }
    if scs.lattice().is_distributive() {
        delta_part(scs, group, c, Variant::Part3)
    } else {
        Ok(delta_oracle(scs, group, OracleLimits::DEFAULT)?.apply(c))
    }
}

/// `π_i(c) = ⨆{e | δ_i(e) ⊑ c}`.
pub fn agent_projection(scs: &Scs, agent: Agent, c: Elem) -> Elem {
    let l = scs.lattice();
    l.join_all(l.elements().filter(|&e| l.leq(scs.apply(agent, e), c)))
}

/// `π_I(c) = ⨆{π_i(c) | i ∈ I}`; bottom for the empty group.
pub fn join_projection(scs: &Scs, group: &Group, c: Elem) -> Elem {
    scs.lattice()
        .join_all(group.members().iter().map(|&i| agent_projection(scs, i, c)))
}

/// `Π_I(c) = ⨆{e | Δ_I(e) ⊑ c}` using a precomputed `Δ_I`.
pub fn group_projection(scs: &Scs, group: &Group, c: Elem, delta: &DeltaResult) -> Result<Elem> {
    if &delta.group != group {
        return Err(Error::GroupMismatch {
            expected: scs.group_names(group),
            found: scs.group_names(&delta.group),
        });
    }
    if !same_carrier(scs.lattice(), delta.table.lattice()) {
        return Err(Error::CarrierMismatch);
    }
    Ok(projection_of(scs.lattice(), &delta.table, c))
}

/// Right adjoint of a space function: `c ↦ ⨆{e | f(e) ⊑ c}`.
pub(crate) fn projection_of(l: &Lattice, f: &SpaceFunction, c: Elem) -> Elem {
    l.join_all(l.elements().filter(|&e| l.leq(f.apply(e), c)))
}

/// Smallest subgroup `J ⊆ I` with `c ⊒ Δ_J(e)`, ties broken lexicographically.
///
/// Returns `None` when even `J = I` fails.
pub fn finite_witness(scs: &Scs, group: &Group, c: Elem, e: Elem) -> Result<Option<Group>> {
    let l = scs.lattice();
    if !l.leq(delta_at(scs, group, e)?, c) {
        return Ok(None);
    }
    for sub in group.subgroups() {
        if l.leq(delta_at(scs, &sub, e)?, c) {
            return Ok(Some(sub));
        }
    }
    unreachable!("the full group qualifies")
}

/// Number of space functions on `lattice`.
pub fn count_space_functions(lattice: &Lattice, limits: OracleLimits) -> Result<u64> {
    let upper = vec![lattice.top(); lattice.len()];
    for_each_below(lattice, &upper, limits.max_join_irreducibles, |_| {})
}
