//! Space functions, spatial constraint systems and agent groups.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::report::{Rule, ValidationReport};

/// Checks S.1 (`f(bottom) = bottom`) and S.2 (`f(c ⊔ d) = f(c) ⊔ f(d)` on
/// every pair) for a raw table indexed by element.
pub fn check_space_axioms(lattice: &Lattice, table: &[Elem]) -> Result<ValidationReport> {
    if table.len() != lattice.len() {
        return Err(Error::TableSize {
            expected: lattice.len(),
            found: table.len(),
        });
    }
    if let Some(bad) = table.iter().find(|e| e.0 >= lattice.len()) {
        return Err(Error::UnknownElement(bad.to_string()));
    }
    let f = |x: Elem| table[x.0];
    let mut report = ValidationReport::new();
    let bottom = lattice.bottom();
    if f(bottom) != bottom {
        report.push(
            Rule::PreservesBottom,
            vec![
                lattice.name(bottom).to_string(),
                lattice.name(f(bottom)).to_string(),
            ],
        );
    }
    for c in lattice.elements() {
        for d in lattice.elements().filter(|&d| d > c) {
            if f(lattice.join(c, d)) != lattice.join(f(c), f(d)) {
                report.push(
                    Rule::PreservesJoin,
                    vec![lattice.name(c).to_string(), lattice.name(d).to_string()],
                );
            }
        }
    }
    Ok(report)
}

/// A validated join-homomorphism on a finite lattice.
#[derive(Clone, Debug)]
pub struct SpaceFunction {
    lattice: Arc<Lattice>,
    table: Vec<Elem>,
}

impl PartialEq for SpaceFunction {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.lattice, &other.lattice) && self.table == other.table
    }
}

impl Eq for SpaceFunction {}

pub(crate) fn same_carrier(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl SpaceFunction {
    pub fn new(lattice: Arc<Lattice>, table: Vec<Elem>) -> Result<Self> {
        let report = check_space_axioms(&lattice, &table)?;
        if !report.ok() {
            return Err(Error::NotSpaceFunction(report));
        }
        Ok(Self { lattice, table })
    }

    /// Builds from an element-name map, which must cover every element.
    pub fn from_names(lattice: Arc<Lattice>, map: &BTreeMap<String, String>) -> Result<Self> {
        let table = table_from_names(&lattice, map)?;
        Self::new(lattice, table)
    }

    /// Skips validation; callers guarantee S.1/S.2.
    pub(crate) fn trusted(lattice: Arc<Lattice>, table: Vec<Elem>) -> Self {
        debug_assert!(check_space_axioms(&lattice, &table)
            .map(|r| r.ok())
            .unwrap_or(false));
        Self { lattice, table }
    }

    pub fn identity(lattice: Arc<Lattice>) -> Self {
        let table = lattice.elements().collect();
        Self { lattice, table }
    }

    /// `λ_⊥`: every element goes to bottom.
    pub fn lambda_bot(lattice: Arc<Lattice>) -> Self {
        let table = vec![lattice.bottom(); lattice.len()];
        Self { lattice, table }
    }

    /// `λ_⊤`: bottom stays bottom, everything else goes to top.
    pub fn lambda_top(lattice: Arc<Lattice>) -> Self {
        let (bottom, top) = (lattice.bottom(), lattice.top());
        let table = lattice
            .elements()
            .map(|c| if c == bottom { bottom } else { top })
            .collect();
        Self { lattice, table }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    #[inline]
    pub fn apply(&self, c: Elem) -> Elem {
        self.table[c.0]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Pointwise order `f ⊑̇ g`.
    pub fn leq(&self, other: &SpaceFunction) -> Result<bool> {
        self.check_carrier(other)?;
        Ok(self
            .lattice
            .elements()
            .all(|c| self.lattice.leq(self.apply(c), other.apply(c))))
    }

    /// Pointwise join; again a space function.
    ///
    /// There is intentionally no pointwise meet: it is not a join-homomorphism
    /// in general. The meet of space functions is the distributed space.
    pub fn join(&self, other: &SpaceFunction) -> Result<SpaceFunction> {
        self.check_carrier(other)?;
        let l = &self.lattice;
        let table = l
            .elements()
            .map(|c| l.join(self.apply(c), other.apply(c)))
            .collect();
        Ok(Self::trusted(self.lattice.clone(), table))
    }

    fn check_carrier(&self, other: &SpaceFunction) -> Result<()> {
        if same_carrier(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    pub fn to_names(&self) -> BTreeMap<String, String> {
        self.lattice
            .elements()
            .map(|c| {
                (
                    self.lattice.name(c).to_string(),
                    self.lattice.name(self.apply(c)).to_string(),
                )
            })
            .collect()
    }
}

pub(crate) fn table_from_names(
    lattice: &Lattice,
    map: &BTreeMap<String, String>,
) -> Result<Vec<Elem>> {
    for key in map.keys() {
        lattice.elem(key)?;
    }
    lattice
        .elements()
        .map(|c| {
            let image = map
                .get(lattice.name(c))
                .ok_or_else(|| Error::IncompleteTable(lattice.name(c).to_string()))?;
            lattice.elem(image)
        })
        .collect()
}

/// Dense index of an agent inside its [`Scs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Agent(pub usize);

/// A lattice together with one space function per agent.
#[derive(Clone, Debug)]
pub struct Scs {
    lattice: Arc<Lattice>,
    names: Vec<String>,
    spaces: Vec<SpaceFunction>,
}

impl Scs {
    /// Validates every agent table and collects all failures.
    pub fn new<S: Into<String>>(
        lattice: Arc<Lattice>,
        agents: Vec<(S, Vec<Elem>)>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::NoAgents);
        }
        let mut names: Vec<String> = Vec::with_capacity(agents.len());
        let mut spaces = Vec::with_capacity(agents.len());
        let mut failures = Vec::new();
        for (name, table) in agents {
            let name = name.into();
            if names.contains(&name) {
                return Err(Error::DuplicateAgent(name));
            }
            let report = check_space_axioms(&lattice, &table)?;
            if report.ok() {
                spaces.push(SpaceFunction {
                    lattice: lattice.clone(),
                    table,
                });
            } else {
                failures.push((name.clone(), report));
            }
            names.push(name);
        }
        if !failures.is_empty() {
            return Err(Error::InvalidAgents(failures));
        }
        Ok(Self {
            lattice,
            names,
            spaces,
        })
    }

    /// Builds from already validated space functions over `lattice`.
    pub fn from_spaces<S: Into<String>>(
        lattice: Arc<Lattice>,
        agents: Vec<(S, SpaceFunction)>,
    ) -> Result<Self> {
        let tables = agents
            .into_iter()
            .map(|(n, f)| {
                if same_carrier(&lattice, f.lattice()) {
                    Ok((n, f.table))
                } else {
                    Err(Error::CarrierMismatch)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, tables)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn agent_count(&self) -> usize {
        self.names.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = Agent> + Clone {
        (0..self.names.len()).map(Agent)
    }

    pub fn agent(&self, name: &str) -> Result<Agent> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Agent)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn agent_name(&self, agent: Agent) -> &str {
        &self.names[agent.0]
    }

    pub fn space(&self, agent: Agent) -> &SpaceFunction {
        &self.spaces[agent.0]
    }

    /// `δ_i(c)`.
    pub fn apply(&self, agent: Agent, c: Elem) -> Elem {
        self.spaces[agent.0].apply(c)
    }

    /// Name-level `δ_i(c)`.
    pub fn apply_space(&self, agent: &str, c: &str) -> Result<&str> {
        let a = self.agent(agent)?;
        let c = self.lattice.elem(c)?;
        Ok(self.lattice.name(self.apply(a, c)))
    }

    /// Resolves agent names into a canonical group.
    pub fn group<S: AsRef<str>>(&self, names: &[S]) -> Result<Group> {
        let members = names
            .iter()
            .map(|n| self.agent(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Group::new(members))
    }

    /// Every agent of the system.
    pub fn all_agents(&self) -> Group {
        Group::new(self.agents().collect())
    }

    pub fn group_names(&self, group: &Group) -> Vec<String> {
        group
            .members()
            .iter()
            .map(|&a| self.agent_name(a).to_string())
            .collect()
    }
}

/// Sorted, duplicate-free set of agents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group(Vec<Agent>);

impl Group {
    pub fn new(mut members: Vec<Agent>) -> Self {
        members.sort();
        members.dedup();
        Self(members)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn members(&self) -> &[Agent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, agent: Agent) -> bool {
        self.0.binary_search(&agent).is_ok()
    }

    pub fn is_subset(&self, other: &Group) -> bool {
        self.0.iter().all(|&a| other.contains(a))
    }

    /// All subgroups, by increasing size and lexicographically within a size.
    pub fn subgroups(&self) -> impl Iterator<Item = Group> + '_ {
        use itertools::Itertools;
        (0..=self.len()).flat_map(move |k| self.0.iter().copied().combinations(k).map(Group))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a.0)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{m2_lattice, m2_scs};

    fn tab(l: &Lattice, names: [&str; 4]) -> Vec<Elem> {
        names.iter().map(|n| l.elem(n).unwrap()).collect()
    }

    #[test]
    fn m2_agent_tables() {
        let l = m2_lattice();
        let d1 = tab(&l, ["bot", "np", "p", "top"]);
        assert!(check_space_axioms(&l, &d1).unwrap().ok());

        let bad_bottom = tab(&l, ["p", "p", "np", "top"]);
        let r = check_space_axioms(&l, &bad_bottom).unwrap();
        assert!(r.has(Rule::PreservesBottom));

        let bad_join = tab(&l, ["bot", "p", "np", "p"]);
        let r = check_space_axioms(&l, &bad_join).unwrap();
        assert!(!r.has(Rule::PreservesBottom));
        assert!(r
            .violations()
            .iter()
            .any(|v| v.rule == Rule::PreservesJoin && v.witness == ["p", "np"]));
    }

    #[test]
    fn table_must_be_total() {
        let l = m2_lattice();
        assert!(matches!(
            check_space_axioms(&l, &[l.bottom()]),
            Err(Error::TableSize {
                expected: 4,
                found: 1
            })
        ));
        let mut map: BTreeMap<String, String> = [("bot", "bot"), ("p", "p"), ("np", "np")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let err = SpaceFunction::from_names(Arc::new(l), &map).unwrap_err();
        assert!(matches!(err, Error::IncompleteTable(ref m) if m == "top"));
        map.insert("zz".into(), "p".into());
        let err = SpaceFunction::from_names(Arc::new(m2_lattice()), &map).unwrap_err();
        assert!(matches!(err, Error::UnknownElement(ref m) if m == "zz"));
    }

    #[test]
    fn build_scs_aggregates_failures() {
        let l = Arc::new(m2_lattice());
        let d1 = tab(&l, ["bot", "np", "p", "top"]);
        // Sending np to p instead of np still satisfies S.1/S.2 on every pair.
        let d2_np_to_p = tab(&l, ["bot", "top", "p", "top"]);
        assert!(check_space_axioms(&l, &d2_np_to_p).unwrap().ok());
        // Sending top to np breaks S.2 at (p, np): f(top) = np but f(p) ⊔ f(np) = top.
        let d2_bad = tab(&l, ["bot", "top", "np", "np"]);
        let err = Scs::new(l.clone(), vec![("1", d1.clone()), ("2", d2_bad)]).unwrap_err();
        let Error::InvalidAgents(failures) = err else {
            panic!()
        };
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].0, "2");
        assert!(failures[0].1.has(Rule::PreservesJoin));

        let one = Scs::new(l.clone(), vec![("1", d1)]).unwrap();
        assert_eq!(one.agent_count(), 1);
        assert!(matches!(Scs::new::<&str>(l, vec![]), Err(Error::NoAgents)));
    }

    #[test]
    fn m2_application() {
        let scs = m2_scs();
        assert_eq!(scs.apply_space("2", "p").unwrap(), "top");
        assert_eq!(scs.apply_space("1", "bot").unwrap(), "bot");
        assert_eq!(scs.apply_space("1", "np").unwrap(), "p");
        assert!(matches!(
            scs.apply_space("3", "p"),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn pointwise_order_and_join() {
        let scs = m2_scs();
        let l = scs.lattice().clone();
        let d1 = scs.space(scs.agent("1").unwrap());
        let d2 = scs.space(scs.agent("2").unwrap());
        assert!(d1.leq(d1).unwrap());
        let j = d1.join(d2).unwrap();
        assert_eq!(j.apply(l.elem("p").unwrap()), l.top());
        assert!(check_space_axioms(&l, j.table()).unwrap().ok());

        let bot = SpaceFunction::lambda_bot(l.clone());
        let top = SpaceFunction::lambda_top(l.clone());
        assert!(bot.leq(d2).unwrap() && d2.leq(&top).unwrap());
        assert_eq!(top.apply(l.elem("p").unwrap()), l.top());
        assert_eq!(top.apply(l.bottom()), l.bottom());
        assert_eq!(bot.apply(l.top()), l.bottom());

        let other = SpaceFunction::identity(Arc::new(crate::instances::m3_lattice()));
        assert!(matches!(d1.leq(&other), Err(Error::CarrierMismatch)));
    }

    #[test]
    fn groups_are_canonical() {
        let g = Group::new(vec![Agent(2), Agent(0), Agent(2)]);
        assert_eq!(g.members(), [Agent(0), Agent(2)]);
        let subs: Vec<_> = g.subgroups().collect();
        assert_eq!(subs.len(), 4);
        assert!(subs[0].is_empty());
        assert_eq!(subs[1].members(), [Agent(0)]);
        assert_eq!(subs[3], g);
    }
}
