//! Finite lattices with precomputed operation tables.
//!
//! Elements are identified by dense indices assigned in input order. The
//! order is given by any generating set of pairs `(a, b)` meaning `a ⊑ b`;
//! the builder closes it reflexively and transitively and then checks that
//! every pair has a unique least upper and greatest lower bound.
//!
//! Orientation follows the constraint-system reading: `⊑` is entailment,
//! the bottom element is the empty constraint `true` and the top is the
//! inconsistent constraint `false`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::{Rule, ValidationReport};

/// Index of an element inside its [`Lattice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    implies: Option<Vec<Elem>>,
    non_distributive: Option<(Elem, Elem, Elem)>,
    bottom: Elem,
    top: Elem,
}

impl Lattice {
    /// Builds a lattice from element names and generating order pairs `(lower, upper)`.
    ///
    /// Returns [`Error::NotALattice`] with a report when the closed order is
    /// not antisymmetric or some pair lacks a unique join or meet.
    pub fn build<S, P>(elements: &[S], order: &[(P, P)]) -> Result<Self>
    where
        S: AsRef<str>,
        P: AsRef<str>,
    {
        if elements.is_empty() {
            return Err(Error::EmptyLattice);
        }
        let n = elements.len();
        let mut index = HashMap::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            let name = e.as_ref().to_string();
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name));
            }
            names.push(name);
        }
        let mut pairs = Vec::with_capacity(order.len());
        for (a, b) in order {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::UnknownElement(s.to_string()))
            };
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indexed(names, &pairs)
    }

    /// Same as [`Lattice::build`] with pairs given as indices into `names`.
    pub fn from_indexed(names: Vec<String>, order: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in order {
            if a >= n {
                return Err(Error::UnknownElement(format!("#{a}")));
            }
            if b >= n {
                return Err(Error::UnknownElement(format!("#{b}")));
            }
            leq[a * n + b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }

        let mut report = ValidationReport::new();
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    report.push(Rule::Antisymmetry, vec![names[a].clone(), names[b].clone()]);
                }
            }
        }
        if !report.ok() {
            return Err(Error::NotALattice(report));
        }

        let le = |a: usize, b: usize| leq[a * n + b];
        let mut join = vec![Elem(0); n * n];
        let mut meet = vec![Elem(0); n * n];
        for a in 0..n {
            for b in a..n {
                let uppers: Vec<usize> = (0..n).filter(|&u| le(a, u) && le(b, u)).collect();
                match extremal(&uppers, le) {
                    Ok(u) => {
                        join[a * n + b] = Elem(u);
                        join[b * n + a] = Elem(u);
                    }
                    Err(minimal) => {
                        let mut witness = vec![names[a].clone(), names[b].clone()];
                        let rule = if minimal.is_empty() {
                            Rule::MissingLub
                        } else {
                            witness.extend(minimal.iter().map(|&m| names[m].clone()));
                            Rule::AmbiguousLub
                        };
                        report.push(rule, witness);
                    }
                }
                let lowers: Vec<usize> = (0..n).filter(|&l| le(l, a) && le(l, b)).collect();
                match extremal(&lowers, |y, x| le(x, y)) {
                    Ok(l) => {
                        meet[a * n + b] = Elem(l);
                        meet[b * n + a] = Elem(l);
                    }
                    Err(maximal) => {
                        let mut witness = vec![names[a].clone(), names[b].clone()];
                        let rule = if maximal.is_empty() {
                            Rule::MissingGlb
                        } else {
                            witness.extend(maximal.iter().map(|&m| names[m].clone()));
                            Rule::AmbiguousGlb
                        };
                        report.push(rule, witness);
                    }
                }
            }
        }
        if !report.ok() {
            return Err(Error::NotALattice(report));
        }

        let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x))).map(Elem);
        let top = (0..n).find(|&t| (0..n).all(|x| le(x, t))).map(Elem);
        // A finite poset with all binary joins and meets is bounded.
        let (bottom, top) = (bottom.expect("bounded"), top.expect("bounded"));

        let mut lattice = Lattice {
            names,
            index,
            leq,
            join,
            meet,
            implies: None,
            non_distributive: None,
            bottom,
            top,
        };
        lattice.non_distributive = lattice.scan_distributivity();
        if lattice.non_distributive.is_none() {
            lattice.implies = Some(lattice.implication_table());
        }
        Ok(lattice)
    }

    fn scan_distributivity(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let lhs = self.join(a, self.meet(b, c));
                    let rhs = self.meet(self.join(a, b), self.join(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    fn implication_table(&self) -> Vec<Elem> {
        let n = self.len();
        let mut table = vec![self.top; n * n];
        for c in self.elements() {
            for d in self.elements() {
                table[c.0 * n + d.0] =
                    self.meet_all(self.elements().filter(|&e| self.leq(d, self.join(c, e))));
            }
        }
        table
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator + Clone {
        (0..self.names.len()).map(Elem)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.0]
    }

    /// Looks an element up by name.
    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.index
            .get(name)
            .map(|&i| Elem(i))
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.0 * self.len() + b.0]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.0 * self.len() + b.0]
    }

    /// Join of a finite set; the empty join is bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a finite set; the empty meet is top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn is_distributive(&self) -> bool {
        self.non_distributive.is_none()
    }

    /// First triple `(a, b, c)` in index order with `a ⊔ (b ⊓ c) != (a ⊔ b) ⊓ (a ⊔ c)`.
    pub fn distributivity_witness(&self) -> Option<(Elem, Elem, Elem)> {
        self.non_distributive
    }

    /// Heyting implication `c → d`, the meet of all `e` with `c ⊔ e ⊒ d`.
    ///
    /// Only defined on distributive lattices.
    pub fn implies(&self, c: Elem, d: Elem) -> Result<Elem> {
        match &self.implies {
            Some(t) => Ok(t[c.0 * self.len() + d.0]),
            None => Err(self.frame_required()),
        }
    }

    pub(crate) fn implies_unchecked(&self, c: Elem, d: Elem) -> Elem {
        self.implies.as_ref().expect("distributive lattice")[c.0 * self.len() + d.0]
    }

    pub(crate) fn frame_required(&self) -> Error {
        let (a, b, c) = self
            .non_distributive
            .unwrap_or((self.bottom, self.bottom, self.bottom));
        Error::FrameRequired(
            self.name(a).to_string(),
            self.name(b).to_string(),
            self.name(c).to_string(),
        )
    }

    /// Covering pairs `(a, b)`: `a ⊏ b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|m| self.lt(a, m) && self.lt(m, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements other than bottom with exactly one lower cover, in index order.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&x| x != self.bottom)
            .filter(|&x| {
                let lower_covers = self
                    .elements()
                    .filter(|&a| {
                        self.lt(a, x) && !self.elements().any(|m| self.lt(a, m) && self.lt(m, x))
                    })
                    .count();
                lower_covers == 1
            })
            .collect()
    }

    /// Length of the longest chain from bottom to `e`.
    pub fn height(&self, e: Elem) -> usize {
        let mut heights = vec![0usize; self.len()];
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| self.elements().filter(|&y| self.leq(y, x)).count());
        for &x in &order {
            heights[x.0] = self
                .elements()
                .filter(|&y| self.lt(y, x))
                .map(|y| heights[y.0] + 1)
                .max()
                .unwrap_or(0);
        }
        heights[e.0]
    }
}

/// Finds the unique element of `set` not beaten by another, where
/// `beats(y, x)` means y is preferred over x. On failure returns all extremal candidates (empty if
/// the set itself is empty).
fn extremal(
    set: &[usize],
    beats: impl Fn(usize, usize) -> bool,
) -> std::result::Result<usize, Vec<usize>> {
    let candidates: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&x| !set.iter().any(|&y| y != x && beats(y, x)))
        .collect();
    if candidates.len() == 1 {
        Ok(candidates[0])
    } else {
        Err(candidates)
    }
}
