//! Hasse diagrams in Graphviz DOT.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::lattice::Lattice;
use crate::space::Scs;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One `digraph` with covering edges drawn upward and nodes ranked by height.
/// When `agents` is given, each space function adds one dashed edge per element.
pub fn export(lattice: &Lattice, agents: Option<&Scs>) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
    let mut ranks: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for e in lattice.elements() {
        ranks
            .entry(lattice.height(e))
            .or_default()
            .push(lattice.name(e));
        writeln!(out, "  {};", quote(lattice.name(e))).unwrap();
    }
    for (height, nodes) in &ranks {
        let names: Vec<String> = nodes.iter().map(|n| quote(n)).collect();
        writeln!(
            out,
            "  {{ rank=same; /* height {height} */ {}; }}",
            names.join("; ")
        )
        .unwrap();
    }
    for (a, b) in lattice.covers() {
        writeln!(
            out,
            "  {} -> {} [arrowhead=none];",
            quote(lattice.name(a)),
            quote(lattice.name(b))
        )
        .unwrap();
    }
    if let Some(scs) = agents {
        for agent in scs.agents() {
            let f = scs.space(agent);
            for c in lattice.elements() {
                writeln!(
                    out,
                    "  {} -> {} [style=dashed, constraint=false, label={}];",
                    quote(lattice.name(c)),
                    quote(lattice.name(f.apply(c))),
                    quote(scs.agent_name(agent))
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{chain_lattice, m2_scs, powerset_lattice};

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn m2_diagram() {
        let scs = m2_scs();
        let dot = export(scs.lattice(), Some(&scs));
        assert!(dot.starts_with("digraph"));
        assert_eq!(count(&dot, "arrowhead=none"), 4);
        assert_eq!(count(&dot, "style=dashed"), 8);
        assert_eq!(count(&dot, "rank=same"), 3);
    }

    #[test]
    fn trivial_and_powerset() {
        let dot = export(&chain_lattice(1), None);
        assert_eq!(count(&dot, "->"), 0);
        assert_eq!(dot.lines().filter(|l| l.trim() == "\"0\";").count(), 1);
        let dot = export(&powerset_lattice(2).unwrap(), None);
        assert_eq!(count(&dot, "arrowhead=none"), 4);
    }
}
