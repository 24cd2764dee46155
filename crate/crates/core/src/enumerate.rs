//! Enumeration of space functions through their values on join-irreducibles.
//!
//! Every element of a finite lattice is the join of the join-irreducibles
//! below it, so a join-homomorphism is fixed by its restriction to them.
//! Restrictions are generated monotonically (a necessary condition), the
//! rest of the table is completed by joins, and each completed table is
//! then checked against S.1/S.2 in full. Partial assignments are pruned as
//! soon as an element's image, or a pair's join, is fully determined.

use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};

/// Default cap on the number of join-irreducibles the enumerator accepts.
pub const DEFAULT_JOIN_IRREDUCIBLE_CAP: usize = 10;

/// Calls `visit` on every space function `f` with `f(x) ⊑ upper[x]` for all `x`.
///
/// Returns the number of functions visited.
pub(crate) fn for_each_below(
    lattice: &Lattice,
    upper: &[Elem],
    cap: usize,
    mut visit: impl FnMut(&[Elem]),
) -> Result<u64> {
    let mut state = Search::new(lattice, upper, cap)?;
    let mut visited = 0;
    if state.prefix_ok(None) {
        state.descend(0, &mut |f| {
            visited += 1;
            visit(f);
            true
        });
    }
    Ok(visited)
}

/// The greatest space function below `upper`, plus the number of completed
/// tables examined on the way.
///
/// Space functions below a bound are closed under pointwise join, so the
/// join of all of them is itself one of them. It is found one
/// join-irreducible at a time: candidates are tried from the top down, and
/// the first one that still admits a completion is the largest achievable
/// value at that position.
pub(crate) fn greatest_below(
    lattice: &Lattice,
    upper: &[Elem],
    cap: usize,
) -> Result<(Vec<Elem>, u64)> {
    let mut state = Search::new(lattice, upper, cap)?;
    let mut by_height: Vec<Elem> = lattice.elements().collect();
    by_height.sort_by_key(|&x| std::cmp::Reverse(lattice.height(x)));
    let mut probes = 0;
    assert!(state.prefix_ok(None), "λ_⊥ lies below every bound");
    for pos in 0..state.irreducibles.len() {
        let floor = state.floor(pos);
        let ceiling = upper[state.irreducibles[pos].0];
        let mut fixed = false;
        for &x in &by_height {
            if !(lattice.leq(floor, x) && lattice.leq(x, ceiling)) {
                continue;
            }
            state.assignment[pos] = x;
            if !state.prefix_ok(Some(pos)) {
                continue;
            }
            let mut found = false;
            state.descend(pos + 1, &mut |_| {
                probes += 1;
                found = true;
                false
            });
            if found {
                fixed = true;
                break;
            }
        }
        assert!(fixed, "λ_⊥ extends every feasible prefix");
    }
    assert!(state.complete());
    Ok((state.table, probes))
}

struct Search<'a> {
    lattice: &'a Lattice,
    upper: &'a [Elem],
    irreducibles: Vec<Elem>,
    below: Vec<Vec<usize>>,
    support: Vec<Vec<usize>>,
    /// Elements whose image is determined once position `p` is assigned;
    /// index `0` of `ready_pairs`/`ready` covers the empty prefix.
    ready: Vec<Vec<Elem>>,
    ready_pairs: Vec<Vec<(Elem, Elem)>>,
    assignment: Vec<Elem>,
    table: Vec<Elem>,
}

impl<'a> Search<'a> {
    fn new(lattice: &'a Lattice, upper: &'a [Elem], cap: usize) -> Result<Self> {
        let mut irreducibles = lattice.join_irreducibles();
        if irreducibles.len() > cap {
            return Err(Error::CapExceeded {
                join_irreducibles: irreducibles.len(),
                cap,
            });
        }
        irreducibles.sort_by_key(|&j| (lattice.height(j), j));
        let k = irreducibles.len();
        let below = irreducibles
            .iter()
            .map(|&j| (0..k).filter(|&i| lattice.lt(irreducibles[i], j)).collect())
            .collect();
        let support: Vec<Vec<usize>> = lattice
            .elements()
            .map(|x| {
                (0..k)
                    .filter(|&i| lattice.leq(irreducibles[i], x))
                    .collect()
            })
            .collect();
        // Stage 0 is the empty prefix, stage p + 1 follows assigning position p.
        let stage = |x: Elem| support[x.0].iter().max().map_or(0, |&p| p + 1);
        let mut ready = vec![Vec::new(); k + 1];
        for x in lattice.elements() {
            ready[stage(x)].push(x);
        }
        let mut ready_pairs = vec![Vec::new(); k + 1];
        for a in lattice.elements() {
            for b in lattice.elements().filter(|&b| b > a) {
                let at = stage(a).max(stage(b)).max(stage(lattice.join(a, b)));
                ready_pairs[at].push((a, b));
            }
        }
        Ok(Search {
            lattice,
            upper,
            irreducibles,
            below,
            support,
            ready,
            ready_pairs,
            assignment: vec![lattice.bottom(); k],
            table: vec![lattice.bottom(); lattice.len()],
        })
    }

    fn floor(&self, pos: usize) -> Elem {
        self.lattice
            .join_all(self.below[pos].iter().map(|&k| self.assignment[k]))
    }

    /// Fills in and checks everything determined by positions `..=pos`
    /// (`None` for the empty prefix).
    fn prefix_ok(&mut self, pos: Option<usize>) -> bool {
        let l = self.lattice;
        let stage = pos.map_or(0, |p| p + 1);
        for &x in &self.ready[stage] {
            let y = l.join_all(self.support[x.0].iter().map(|&k| self.assignment[k]));
            if !l.leq(y, self.upper[x.0]) {
                return false;
            }
            self.table[x.0] = y;
        }
        let f = &self.table;
        self.ready_pairs[stage]
            .iter()
            .all(|&(a, b)| f[l.join(a, b).0] == l.join(f[a.0], f[b.0]))
    }

    /// Visits completions of the current prefix; stops when `visit` returns false.
    fn descend(&mut self, pos: usize, visit: &mut impl FnMut(&[Elem]) -> bool) -> bool {
        let l = self.lattice;
        if pos == self.irreducibles.len() {
            return if self.complete() {
                visit(&self.table)
            } else {
                true
            };
        }
        let floor = self.floor(pos);
        let ceiling = self.upper[self.irreducibles[pos].0];
        for x in l.elements() {
            if l.leq(floor, x) && l.leq(x, ceiling) {
                self.assignment[pos] = x;
                if self.prefix_ok(Some(pos)) && !self.descend(pos + 1, visit) {
                    return false;
                }
            }
        }
        true
    }

    /// Full S.1/S.2 and bound check of the completed table.
    fn complete(&mut self) -> bool {
        let l = self.lattice;
        for x in l.elements() {
            self.table[x.0] = l.join_all(self.support[x.0].iter().map(|&k| self.assignment[k]));
        }
        let f = &self.table;
        if f[l.bottom().0] != l.bottom() {
            return false;
        }
        if l.elements().any(|x| !l.leq(f[x.0], self.upper[x.0])) {
            return false;
        }
        l.elements().all(|a| {
            l.elements()
                .filter(|&b| b > a)
                .all(|b| f[l.join(a, b).0] == l.join(f[a.0], f[b.0]))
        })
    }
}
