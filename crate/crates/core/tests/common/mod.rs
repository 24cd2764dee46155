//! Test-only reference implementations. Nothing here calls the library's
//! Δ, projection or enumeration code; only lattice tables are shared.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use scs_core::instances::{m2_scs, powerset_lattice};
use scs_core::random::{random_distributive_lattice, random_scs, rng};
use scs_core::{Elem, Group, Lattice, Scs};

/// Every total map on the lattice, as index vectors, in odometer order.
pub fn all_maps(l: &Lattice) -> Vec<Vec<Elem>> {
    let n = l.len();
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let e = Elem(code % n);
                    code /= n;
                    e
                })
                .collect()
        })
        .collect()
}

/// S.1 and S.2 checked over every ordered pair, written independently of the library.
pub fn is_join_hom(l: &Lattice, f: &[Elem]) -> bool {
    if f[l.bottom().0] != l.bottom() {
        return false;
    }
    for a in l.elements() {
        for b in l.elements() {
            if f[l.join(a, b).0] != l.join(f[a.0], f[b.0]) {
                return false;
            }
        }
    }
    true
}

/// All space functions by full map enumeration; only viable for n ≤ 5.
pub fn all_space_functions(l: &Lattice) -> Vec<Vec<Elem>> {
    all_maps(l)
        .into_iter()
        .filter(|f| is_join_hom(l, f))
        .collect()
}

/// `c → d` by scanning every candidate `e` with `c ⊔ e ⊒ d` and meeting them.
pub fn implies_scan(l: &Lattice, c: Elem, d: Elem) -> Elem {
    let mut acc = l.top();
    for e in l.elements() {
        if l.leq(d, l.join(c, e)) {
            acc = l.meet(acc, e);
        }
    }
    acc
}

/// `⨆{e | f(e) ⊑ c}` by direct scan.
pub fn adjoint_scan(l: &Lattice, f: &[Elem], c: Elem) -> Elem {
    let mut acc = l.bottom();
    for e in l.elements() {
        if l.leq(f[e.0], c) {
            acc = l.join(acc, e);
        }
    }
    acc
}

/// Bitmask subsets of a group in increasing size, lexicographic within a size.
pub fn subgroups(group: &Group) -> Vec<Group> {
    let m = group.len();
    let mut out: Vec<Vec<usize>> = (0u32..1 << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter()
        .map(|idx| Group::new(idx.into_iter().map(|i| group.members()[i]).collect()))
        .collect()
}

pub struct Instance {
    pub label: String,
    pub scs: Scs,
}

/// The seeded instance family used by the equivalence and property criteria:
/// M2 with its two agents first, then powersets (k ≤ 3), M2's carrier and
/// down-set lattices of random posets on at most four points, each with one
/// to three random space functions.
pub fn instance_family(count: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = vec![Instance {
        label: "M2 (reference agents)".into(),
        scs: m2_scs(),
    }];
    while out.len() < count {
        let i = out.len();
        let (label, lattice) = match i % 3 {
            0 => {
                let k = r.gen_range(0..=3);
                (format!("powerset k={k}"), powerset_lattice(k).unwrap())
            }
            1 => ("M2".to_string(), scs_core::instances::m2_lattice()),
            _ => {
                let l = random_distributive_lattice(4, &mut r);
                (format!("down-sets, n={}", l.len()), l)
            }
        };
        let m = r.gen_range(1..=3);
        let scs = random_scs(Arc::new(lattice), m, &mut r).unwrap();
        out.push(Instance {
            label: format!("#{i} {label}, m={m}"),
            scs,
        });
    }
    out
}

pub fn table_names(l: &Lattice, f: &[Elem]) -> BTreeMap<String, String> {
    l.elements()
        .map(|c| (l.name(c).to_string(), l.name(f[c.0]).to_string()))
        .collect()
}
