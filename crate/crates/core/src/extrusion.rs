//! Extrusion functions: right inverses `↑` of space functions, `δ(↑(c)) = c`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::space::{same_carrier, table_from_names, Agent, Scs, SpaceFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtrusionMethod {
    /// `c ↦ ⨆ f⁻¹(c)`
    SupPreimage,
    /// `c ↦ ⨅ f⁻¹(c)`
    InfPreimage,
    /// A user-supplied choice of preimages.
    External,
}

impl fmt::Display for ExtrusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtrusionMethod::SupPreimage => "sup_preimage",
            ExtrusionMethod::InfPreimage => "inf_preimage",
            ExtrusionMethod::External => "external",
        })
    }
}

/// A right inverse of some space function. Not itself required to be a
/// space function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtrusionFunction {
    lattice: Arc<Lattice>,
    table: Vec<Elem>,
    method: ExtrusionMethod,
}

impl ExtrusionFunction {
    pub fn apply(&self, c: Elem) -> Elem {
        self.table[c.0]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn method(&self) -> ExtrusionMethod {
        self.method
    }

    /// First element where `f(self(c)) != c`.
    pub fn right_inverse_failure(&self, f: &SpaceFunction) -> Option<Elem> {
        self.lattice
            .elements()
            .find(|&c| f.apply(self.apply(c)) != c)
    }

    pub fn preserves_binary_meets(&self) -> bool {
        let l = &self.lattice;
        self.apply(l.top()) == l.top()
            && l.elements().all(|a| {
                l.elements()
                    .all(|b| self.apply(l.meet(a, b)) == l.meet(self.apply(a), self.apply(b)))
            })
    }

    pub fn preserves_binary_joins(&self) -> bool {
        let l = &self.lattice;
        self.apply(l.bottom()) == l.bottom()
            && l.elements().all(|a| {
                l.elements()
                    .all(|b| self.apply(l.join(a, b)) == l.join(self.apply(a), self.apply(b)))
            })
    }

    pub fn to_json(&self) -> Value {
        let table: BTreeMap<&str, &str> = self
            .lattice
            .elements()
            .map(|c| (self.lattice.name(c), self.lattice.name(self.apply(c))))
            .collect();
        json!({ "method": self.method.to_string(), "table": table })
    }
}

/// First element with an empty preimage under `f`.
pub fn unreached(f: &SpaceFunction) -> Option<Elem> {
    let l = f.lattice();
    let mut hit = vec![false; l.len()];
    for c in l.elements() {
        hit[f.apply(c).0] = true;
    }
    l.elements().find(|c| !hit[c.0])
}

pub fn is_surjective(f: &SpaceFunction) -> bool {
    unreached(f).is_none()
}

/// Necessary condition for a right inverse: `f(top) = top`.
pub fn has_right_inverse_precheck(f: &SpaceFunction) -> bool {
    let l = f.lattice();
    f.apply(l.top()) == l.top()
}

/// Why a function fails to preserve meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeetFailure {
    /// `f(top) != top` (the empty meet).
    Top,
    Pair(Elem, Elem),
}

/// Checks `f(a ⊓ b) = f(a) ⊓ f(b)` on all pairs and `f(top) = top`.
pub fn preserves_meets(f: &SpaceFunction) -> Result<(), MeetFailure> {
    let l = f.lattice();
    if f.apply(l.top()) != l.top() {
        return Err(MeetFailure::Top);
    }
    for a in l.elements() {
        for b in l.elements().filter(|&b| b > a) {
            if f.apply(l.meet(a, b)) != l.meet(f.apply(a), f.apply(b)) {
                return Err(MeetFailure::Pair(a, b));
            }
        }
    }
    Ok(())
}

fn preimage_extrusion(
    f: &SpaceFunction,
    method: ExtrusionMethod,
    combine: impl Fn(&Lattice, Vec<Elem>) -> Elem,
) -> Result<ExtrusionFunction> {
    let l = f.lattice();
    if let Some(c) = unreached(f) {
        return Err(Error::NotSurjective(l.name(c).to_string()));
    }
    let table = l
        .elements()
        .map(|c| combine(l, l.elements().filter(|&x| f.apply(x) == c).collect()))
        .collect();
    let ext = ExtrusionFunction {
        lattice: l.clone(),
        table,
        method,
    };
    if let Some(c) = ext.right_inverse_failure(f) {
        return Err(Error::ExtrusionAxiom(l.name(c).to_string()));
    }
    Ok(ext)
}

/// `c ↦ ⨆ f⁻¹(c)`; a meet-preserving right inverse of any surjective space function.
pub fn extrusion_sup(f: &SpaceFunction) -> Result<ExtrusionFunction> {
    preimage_extrusion(f, ExtrusionMethod::SupPreimage, |l, pre| l.join_all(pre))
}

/// `c ↦ ⨅ f⁻¹(c)`; a join-preserving right inverse when `f` is surjective and preserves meets.
pub fn extrusion_inf(f: &SpaceFunction) -> Result<ExtrusionFunction> {
    let l = f.lattice();
    if let Some(c) = unreached(f) {
        return Err(Error::NotSurjective(l.name(c).to_string()));
    }
    match preserves_meets(f) {
        Ok(()) => {}
        Err(MeetFailure::Top) => return Err(Error::TopNotPreserved),
        Err(MeetFailure::Pair(a, b)) => {
            return Err(Error::NotMeetPreserving(
                l.name(a).to_string(),
                l.name(b).to_string(),
            ))
        }
    }
    preimage_extrusion(f, ExtrusionMethod::InfPreimage, |l, pre| l.meet_all(pre))
}

/// Accepts any user table as an extrusion for `f`, provided it is a right inverse.
pub fn extrusion_external(
    f: &SpaceFunction,
    map: &BTreeMap<String, String>,
) -> Result<ExtrusionFunction> {
    let l = f.lattice();
    let ext = ExtrusionFunction {
        lattice: l.clone(),
        table: table_from_names(l, map)?,
        method: ExtrusionMethod::External,
    };
    if let Some(c) = ext.right_inverse_failure(f) {
        return Err(Error::ExtrusionAxiom(l.name(c).to_string()));
    }
    Ok(ext)
}

/// Evaluates `δ_i(c ⊔ ↑(d)) = δ_i(c) ⊔ d`.
pub fn verify_extrusion_law(
    scs: &Scs,
    agent: Agent,
    ext: &ExtrusionFunction,
    c: Elem,
    d: Elem,
) -> Result<bool> {
    let f = scs.space(agent);
    if !same_carrier(scs.lattice(), &ext.lattice) {
        return Err(Error::CarrierMismatch);
    }
    if let Some(bad) = ext.right_inverse_failure(f) {
        return Err(Error::ExtrusionAxiom(scs.lattice().name(bad).to_string()));
    }
    let l = scs.lattice();
    Ok(f.apply(l.join(c, ext.apply(d))) == l.join(f.apply(c), d))
}
