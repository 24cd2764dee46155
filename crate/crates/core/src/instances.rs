//! Ready-made lattices and systems: the four-element diamond with its two
//! agents, powersets, chains, the non-distributive M3/N5, down-set lattices
//! of finite posets, and Aumann structures.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::space::Scs;

/// Largest state count accepted for Aumann models (the lattice has `2^|S|` elements).
pub const MAX_AUMANN_STATES: usize = 6;

/// `{bot, p, np, top}` with `bot ⊏ p, np ⊏ top`. `bot` reads `p ∨ ¬p`, `top` reads `p ∧ ¬p`.
pub fn m2_lattice() -> Lattice {
    Lattice::build(
        &["bot", "p", "np", "top"],
        &[("bot", "p"), ("bot", "np"), ("p", "top"), ("np", "top")],
    )
    .expect("M2 is a lattice")
}

/// The running two-agent example: agent 1 swaps `p` and `np`, agent 2 sends
/// `p` to `top` and fixes everything else.
pub fn m2_scs() -> Scs {
    let l = Arc::new(m2_lattice());
    let t = |names: [&str; 4]| -> Vec<Elem> { names.iter().map(|n| l.elem(n).unwrap()).collect() };
    let d1 = t(["bot", "np", "p", "top"]);
    let d2 = t(["bot", "top", "np", "top"]);
    Scs::new(l.clone(), vec![("1", d1), ("2", d2)]).expect("M2 agents are space functions")
}

fn subset_name(members: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", members.into_iter().collect::<Vec<_>>().join(","))
}

/// Subsets of `{1..k}` under inclusion, indexed by bitmask.
pub fn powerset_lattice(k: usize) -> Result<Lattice> {
    if k > 6 {
        return Err(Error::PowersetRange(k));
    }
    let n = 1usize << k;
    let names = (0..n)
        .map(|m| {
            subset_name(
                (0..k)
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| (b + 1).to_string()),
            )
        })
        .collect();
    let mut order = Vec::new();
    for m in 0..n {
        for b in 0..k {
            if m >> b & 1 == 0 {
                order.push((m, m | 1 << b));
            }
        }
    }
    Lattice::from_indexed(names, &order)
}

/// Chain `0 ⊏ 1 ⊏ … ⊏ n-1`.
pub fn chain_lattice(n: usize) -> Lattice {
    let names = (0..n).map(|i| i.to_string()).collect();
    let order: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Lattice::from_indexed(names, &order).expect("chains are lattices")
}

/// Diamond with three pairwise incomparable atoms `a, b, c`.
pub fn m3_lattice() -> Lattice {
    Lattice::build(
        &["bot", "a", "b", "c", "top"],
        &[
            ("bot", "a"),
            ("bot", "b"),
            ("bot", "c"),
            ("a", "top"),
            ("b", "top"),
            ("c", "top"),
        ],
    )
    .expect("M3 is a lattice")
}

/// Pentagon `bot ⊏ a ⊏ b ⊏ top`, `bot ⊏ c ⊏ top`.
pub fn n5_lattice() -> Lattice {
    Lattice::build(
        &["bot", "a", "b", "c", "top"],
        &[
            ("bot", "a"),
            ("a", "b"),
            ("b", "top"),
            ("bot", "c"),
            ("c", "top"),
        ],
    )
    .expect("N5 is a lattice")
}

/// Down-sets of a finite poset ordered by inclusion; always distributive.
///
/// `relations` holds pairs `(lower, upper)` of poset element indices.
pub fn downset_lattice(points: &[String], relations: &[(usize, usize)]) -> Result<Lattice> {
    let k = points.len();
    if k > 16 {
        return Err(Error::Schema(format!("poset of {k} points is too large")));
    }
    let mut below = vec![0u32; k];
    for (i, mask) in below.iter_mut().enumerate() {
        *mask |= 1 << i;
    }
    for &(lo, hi) in relations {
        if lo >= k || hi >= k {
            return Err(Error::UnknownElement(format!("#{}", lo.max(hi))));
        }
        below[hi] |= 1 << lo;
    }
    // Transitive closure on the "strictly below" masks.
    loop {
        let mut changed = false;
        for i in 0..k {
            let mut m = below[i];
            for (j, &under) in below.iter().enumerate() {
                if m >> j & 1 == 1 {
                    m |= under;
                }
            }
            if m != below[i] {
                below[i] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let downsets: Vec<u32> = (0..1u32 << k)
        .filter(|&m| (0..k).all(|i| m >> i & 1 == 0 || below[i] & m == below[i]))
        .collect();
    let position: HashMap<u32, usize> = downsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let names = downsets
        .iter()
        .map(|&m| {
            subset_name(
                (0..k)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| points[i].clone()),
            )
        })
        .collect();
    let mut order = Vec::new();
    for (i, &m) in downsets.iter().enumerate() {
        for b in 0..k {
            if let Some(&j) = position.get(&(m | 1 << b)) {
                if j != i {
                    order.push((i, j));
                }
            }
        }
    }
    Lattice::from_indexed(names, &order)
}

/// States plus one partition of the states per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AumannModel {
    states: Vec<String>,
    agents: Vec<String>,
    /// `cell[agent][state]`: bitmask of the block containing the state.
    cell: Vec<Vec<u64>>,
}

impl AumannModel {
    pub fn new(states: Vec<String>, partitions: Vec<(String, Vec<Vec<String>>)>) -> Result<Self> {
        if states.len() > MAX_AUMANN_STATES {
            return Err(Error::TooManyStates(states.len(), MAX_AUMANN_STATES));
        }
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(s.clone()));
            }
        }
        let full: u64 = (1u64 << states.len()) - 1;
        let mut agents = Vec::with_capacity(partitions.len());
        let mut cell = Vec::with_capacity(partitions.len());
        for (agent, blocks) in partitions {
            let invalid = |reason: String| Error::InvalidPartition {
                agent: agent.clone(),
                reason,
            };
            if agents.contains(&agent) {
                return Err(Error::DuplicateAgent(agent));
            }
            let mut covered = 0u64;
            let mut of_state = vec![0u64; states.len()];
            for block in &blocks {
                if block.is_empty() {
                    return Err(invalid("empty block".into()));
                }
                let mut mask = 0u64;
                for s in block {
                    let &i = index
                        .get(s.as_str())
                        .ok_or_else(|| invalid(format!("unknown state `{s}`")))?;
                    if (covered | mask) >> i & 1 == 1 {
                        return Err(invalid(format!("state `{s}` appears twice")));
                    }
                    mask |= 1 << i;
                }
                for (i, slot) in of_state.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *slot = mask;
                    }
                }
                covered |= mask;
            }
            if covered != full {
                let missing = (0..states.len()).find(|i| covered >> i & 1 == 0).unwrap();
                return Err(invalid(format!(
                    "state `{}` is not covered",
                    states[missing]
                )));
            }
            agents.push(agent);
            cell.push(of_state);
        }
        Ok(Self {
            states,
            agents,
            cell,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn full_event(&self) -> u64 {
        (1u64 << self.states.len()) - 1
    }

    /// Blocks of an agent's partition as state-bitmasks, in first-state order.
    pub fn blocks(&self, agent: usize) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for &m in &self.cell[agent] {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }

    /// `K_i(e) = {s | P_i(s) ⊆ e}`.
    pub fn knowledge(&self, agent: usize, event: u64) -> u64 {
        self.distributed(&[agent], event)
    }

    /// `D_I(e) = {s | ⋂_{i∈I} P_i(s) ⊆ e}`.
    pub fn distributed(&self, agents: &[usize], event: u64) -> u64 {
        let mut out = 0u64;
        for s in 0..self.states.len() {
            let joint = agents
                .iter()
                .fold(self.full_event(), |acc, &i| acc & self.cell[i][s]);
            if joint & !event == 0 {
                out |= 1 << s;
            }
        }
        out
    }

    /// Canonical element name: state names sorted lexicographically.
    pub fn event_name(&self, event: u64) -> String {
        let mut members: Vec<&str> = (0..self.states.len())
            .filter(|i| event >> i & 1 == 1)
            .map(|i| self.states[i].as_str())
            .collect();
        members.sort();
        subset_name(members.into_iter().map(str::to_string))
    }

    pub fn event<S: AsRef<str>>(&self, states: &[S]) -> Result<u64> {
        states.iter().try_fold(0u64, |acc, s| {
            let i = self
                .states
                .iter()
                .position(|x| x == s.as_ref())
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))?;
            Ok(acc | 1 << i)
        })
    }

    fn agent_index(&self, name: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    /// Name-level distributed knowledge: returns the sorted states of `D_I(e)`.
    pub fn distributed_knowledge<A: AsRef<str>, S: AsRef<str>>(
        &self,
        group: &[A],
        event: &[S],
    ) -> Result<Vec<String>> {
        let agents = group
            .iter()
            .map(|a| self.agent_index(a.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let d = self.distributed(&agents, self.event(event)?);
        let mut out: Vec<String> = (0..self.states.len())
            .filter(|i| d >> i & 1 == 1)
            .map(|i| self.states[i].clone())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn partitions_by_name(&self) -> BTreeMap<String, Vec<Vec<String>>> {
        (0..self.agents.len())
            .map(|a| {
                let blocks = self
                    .blocks(a)
                    .into_iter()
                    .map(|m| {
                        (0..self.states.len())
                            .filter(|i| m >> i & 1 == 1)
                            .map(|i| self.states[i].clone())
                            .collect()
                    })
                    .collect();
                (self.agents[a].clone(), blocks)
            })
            .collect()
    }
}

/// Events under reverse inclusion (`e1 ⊑ e2` iff `e2 ⊆ e1`) with `δ_i = K_i`.
///
/// Element `i` is the event with bitmask `i`; join is intersection, meet is
/// union, bottom is the full state set and top is the empty event.
pub fn aumann_scs(model: &AumannModel) -> Result<Scs> {
    let n = 1usize << model.states.len();
    let names = (0..n as u64).map(|m| model.event_name(m)).collect();
    let mut order = Vec::new();
    for m in 0..n {
        for b in 0..model.states.len() {
            if m >> b & 1 == 1 {
                // Removing a state strengthens the event.
                order.push((m, m & !(1 << b)));
            }
        }
    }
    let lattice = Arc::new(Lattice::from_indexed(names, &order)?);
    let agents = (0..model.agents.len())
        .map(|a| {
            let table = (0..n as u64)
                .map(|e| Elem(model.knowledge(a, e) as usize))
                .collect();
            (model.agents[a].clone(), table)
        })
        .collect();
    Scs::new(lattice, agents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceFunction;

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn sample() -> AumannModel {
        AumannModel::new(
            strs(&["s1", "s2", "s3"]),
            vec![
                ("1".into(), vec![strs(&["s1", "s2"]), strs(&["s3"])]),
                ("2".into(), vec![strs(&["s1"]), strs(&["s2", "s3"])]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn m2_instance() {
        let scs = m2_scs();
        assert_eq!(scs.apply_space("1", "p").unwrap(), "np");
        assert_eq!(scs.apply_space("2", "np").unwrap(), "np");
        assert_eq!(scs.lattice().name(scs.lattice().bottom()), "bot");
    }

    #[test]
    fn powersets() {
        let p2 = powerset_lattice(2).unwrap();
        assert_eq!(p2.len(), 4);
        assert_eq!(p2.covers().len(), 4);
        assert_eq!(powerset_lattice(0).unwrap().len(), 1);
        let p3 = powerset_lattice(3).unwrap();
        assert!(p3.is_distributive());
        let j = p3.join(p3.elem("{1}").unwrap(), p3.elem("{2}").unwrap());
        assert_eq!(p3.name(j), "{1,2}");
        assert!(matches!(powerset_lattice(7), Err(Error::PowersetRange(7))));
    }

    #[test]
    fn non_distributive_witnesses() {
        assert!(!m3_lattice().is_distributive());
        assert!(!n5_lattice().is_distributive());
    }

    #[test]
    fn downsets() {
        // Antichain of two points gives the 4-element Boolean lattice.
        let l = downset_lattice(&strs(&["x", "y"]), &[]).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.is_distributive());
        // Two-point chain gives a 3-chain.
        let l = downset_lattice(&strs(&["x", "y"]), &[(0, 1)]).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.names(), ["{}", "{x}", "{x,y}"]);
    }

    #[test]
    fn knowledge_operators() {
        let m = sample();
        let scs = aumann_scs(&m).unwrap();
        assert_eq!(scs.apply_space("1", "{s1,s2}").unwrap(), "{s1,s2}");
        assert_eq!(scs.apply_space("2", "{s1}").unwrap(), "{s1}");
        assert_eq!(scs.apply_space("1", "{s1}").unwrap(), "{}");
        assert_eq!(scs.apply_space("1", "{s1,s2,s3}").unwrap(), "{s1,s2,s3}");
        let l = scs.lattice();
        assert_eq!(l.name(l.bottom()), "{s1,s2,s3}");
        assert_eq!(l.name(l.top()), "{}");
        assert!(l.is_distributive());
        let j = l.join(l.elem("{s1,s2}").unwrap(), l.elem("{s2,s3}").unwrap());
        assert_eq!(l.name(j), "{s2}");
    }

    #[test]
    fn distributed_knowledge_direct() {
        let m = sample();
        assert_eq!(
            m.distributed_knowledge(&["1", "2"], &["s2"]).unwrap(),
            ["s2"]
        );
        assert_eq!(
            m.distributed_knowledge(&["1"], &["s1"]).unwrap(),
            Vec::<String>::new()
        );
        assert_eq!(
            m.distributed_knowledge(&["1", "2"], &["s1", "s2", "s3"])
                .unwrap(),
            ["s1", "s2", "s3"]
        );
        for e in 0..8 {
            assert_eq!(m.distributed(&[0], e), m.knowledge(0, e));
        }
        assert!(matches!(
            m.distributed_knowledge(&["9"], &["s1"]),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn knowledge_is_union_of_blocks() {
        let m = sample();
        for a in 0..2 {
            let blocks = m.blocks(a);
            for e in 0..8 {
                let k = m.knowledge(a, e);
                assert!(blocks.iter().all(|&b| b & k == 0 || b & k == b));
            }
        }
    }

    #[test]
    fn invalid_partitions() {
        let bad =
            |p: Vec<Vec<String>>| AumannModel::new(strs(&["s1", "s2"]), vec![("1".into(), p)]);
        assert!(matches!(
            bad(vec![strs(&["s1"])]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            bad(vec![strs(&["s1", "s2"]), strs(&["s2"])]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            bad(vec![strs(&["s1", "s2"]), vec![]]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            bad(vec![strs(&["s1", "s9"])]),
            Err(Error::InvalidPartition { .. })
        ));
        let many: Vec<String> = (0..7).map(|i| format!("s{i}")).collect();
        assert!(matches!(
            AumannModel::new(many, vec![]),
            Err(Error::TooManyStates(7, MAX_AUMANN_STATES))
        ));
    }

    #[test]
    fn identity_is_a_space_function_everywhere() {
        let l = Arc::new(downset_lattice(&strs(&["a", "b", "c"]), &[(0, 2)]).unwrap());
        SpaceFunction::new(l.clone(), l.elements().collect()).unwrap();
    }
}
