use std::fmt;

use serde::Serialize;

/// Name of the structural rule a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Two distinct elements are below each other after closing the order.
    Antisymmetry,
    /// A pair has no upper bound at all.
    MissingLub,
    /// A pair has several minimal upper bounds.
    AmbiguousLub,
    MissingGlb,
    AmbiguousGlb,
    /// `f(bottom) != bottom`.
    #[serde(rename = "S.1")]
    PreservesBottom,
    /// `f(c ⊔ d) != f(c) ⊔ f(d)`.
    #[serde(rename = "S.2")]
    PreservesJoin,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Antisymmetry => "antisymmetry",
            Rule::MissingLub => "missing-lub",
            Rule::AmbiguousLub => "ambiguous-lub",
            Rule::MissingGlb => "missing-glb",
            Rule::AmbiguousGlb => "ambiguous-glb",
            Rule::PreservesBottom => "S.1",
            Rule::PreservesJoin => "S.2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    /// Element names that exhibit the failure, in rule-specific order.
    pub witness: Vec<String>,
}

/// Outcome of a structural check. `ok()` holds exactly when no violation was recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: Rule, witness: Vec<String>) {
        self.violations.push(Violation { rule, witness });
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} ({})", v.rule, v.witness.join(", "))?;
        }
        Ok(())
    }
}
