//! JSON model files.
//!
//! Three shapes are accepted:
//!
//! ```text
//! {"lattice": {"elements": [..], "order": [[lower, upper], ..]}}
//! {"lattice": {..}, "agents": {"<id>": {"<elem>": "<elem>", ..}, ..}}
//! {"aumann": {"states": [..], "partitions": {"<agent>": [[state, ..], ..], ..}}}
//! ```
//!
//! Unknown fields are rejected. Agent tables must cover every element.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{aumann_scs, AumannModel};
use crate::lattice::{Elem, Lattice};
use crate::space::{table_from_names, Scs};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AumannSpec {
    pub states: Vec<String>,
    pub partitions: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aumann: Option<AumannSpec>,
}

/// A loaded model.
#[derive(Clone, Debug)]
pub enum Model {
    Lattice(Arc<Lattice>),
    Scs(Scs),
    Aumann { model: AumannModel, scs: Scs },
}

impl Model {
    pub fn lattice(&self) -> &Arc<Lattice> {
        match self {
            Model::Lattice(l) => l,
            Model::Scs(s) | Model::Aumann { scs: s, .. } => s.lattice(),
        }
    }

    pub fn scs(&self) -> Option<&Scs> {
        match self {
            Model::Lattice(_) => None,
            Model::Scs(s) | Model::Aumann { scs: s, .. } => Some(s),
        }
    }
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        match (&file.lattice, &file.agents, &file.aumann) {
            (None, None, None) => Err(Error::Schema(
                "expected a `lattice` or `aumann` section".into(),
            )),
            (_, _, Some(_)) if file.lattice.is_some() || file.agents.is_some() => Err(
                Error::Schema("`aumann` cannot be combined with `lattice` or `agents`".into()),
            ),
            (None, Some(_), None) => Err(Error::Schema(
                "`agents` requires a `lattice` section".into(),
            )),
            _ => Ok(file),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn aumann_model(&self) -> Result<Option<AumannModel>> {
        self.aumann
            .as_ref()
            .map(|a| AumannModel::new(a.states.clone(), a.partitions.clone().into_iter().collect()))
            .transpose()
    }

    /// Builds the carrier lattice (for Aumann files, the event lattice).
    pub fn build_lattice(&self) -> Result<Arc<Lattice>> {
        if let Some(model) = self.aumann_model()? {
            return Ok(aumann_scs(&model)?.lattice().clone());
        }
        let spec = self.lattice.as_ref().expect("checked by parse");
        let order: Vec<(&str, &str)> = spec
            .order
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Ok(Arc::new(Lattice::build(&spec.elements, &order)?))
    }

    /// Resolves agent tables by name without checking S.1/S.2.
    pub fn agent_tables(&self, lattice: &Lattice) -> Result<Vec<(String, Vec<Elem>)>> {
        let Some(agents) = &self.agents else {
            return Ok(Vec::new());
        };
        agents
            .iter()
            .map(|(name, map)| Ok((name.clone(), table_from_names(lattice, map)?)))
            .collect()
    }

    pub fn into_model(self) -> Result<Model> {
        if let Some(model) = self.aumann_model()? {
            let scs = aumann_scs(&model)?;
            return Ok(Model::Aumann { model, scs });
        }
        let lattice = self.build_lattice()?;
        if self.agents.is_none() {
            return Ok(Model::Lattice(lattice));
        }
        let tables = self.agent_tables(&lattice)?;
        Ok(Model::Scs(Scs::new(lattice, tables)?))
    }

    /// Serializes a lattice by its covering pairs.
    pub fn from_lattice(lattice: &Lattice) -> Self {
        let order = lattice
            .covers()
            .into_iter()
            .map(|(a, b)| (lattice.name(a).to_string(), lattice.name(b).to_string()))
            .collect();
        ModelFile {
            lattice: Some(LatticeSpec {
                elements: lattice.names().to_vec(),
                order,
            }),
            ..Default::default()
        }
    }

    pub fn from_scs(scs: &Scs) -> Self {
        let mut file = Self::from_lattice(scs.lattice());
        file.agents = Some(
            scs.agents()
                .map(|a| (scs.agent_name(a).to_string(), scs.space(a).to_names()))
                .collect(),
        );
        file
    }

    pub fn from_aumann(model: &AumannModel) -> Self {
        ModelFile {
            aumann: Some(AumannSpec {
                states: model.states().to_vec(),
                partitions: model.partitions_by_name(),
            }),
            ..Default::default()
        }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json_string(&self) -> String {
        let value = serde_json::to_value(self).expect("plain data");
        serde_json::to_string_pretty(&value).expect("plain data")
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Model> {
    ModelFile::read(path)?.into_model()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::m2_scs;

    const M2: &str = r#"{
        "lattice": {"elements": ["bot", "p", "np", "top"],
                    "order": [["bot", "p"], ["bot", "np"], ["p", "top"], ["np", "top"]]},
        "agents": {
            "1": {"bot": "bot", "p": "np", "np": "p", "top": "top"},
            "2": {"bot": "bot", "p": "top", "np": "np", "top": "top"}
        }
    }"#;

    #[test]
    fn parses_m2() {
        let model = ModelFile::parse(M2).unwrap().into_model().unwrap();
        let Model::Scs(scs) = model else { panic!() };
        let reference = m2_scs();
        for a in reference.agents() {
            assert_eq!(scs.space(a), reference.space(a));
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"lattice": {"elements": ["x"], "order": [], "extra": 1}}"#;
        assert!(matches!(ModelFile::parse(text), Err(Error::Json(_))));
        let text = r#"{"lattice": {"elements": ["x"], "order": []}, "other": 1}"#;
        assert!(matches!(ModelFile::parse(text), Err(Error::Json(_))));
    }

    #[test]
    fn partial_table_names_missing_element() {
        let text = M2.replace(r#", "top": "top"}"#, "}");
        let err = ModelFile::parse(&text).unwrap().into_model().unwrap_err();
        assert!(matches!(err, Error::IncompleteTable(ref e) if e == "top"));
    }

    #[test]
    fn round_trip() {
        let scs = m2_scs();
        let text = ModelFile::from_scs(&scs).to_json_string();
        let back = ModelFile::parse(&text).unwrap().into_model().unwrap();
        let back = back.scs().unwrap();
        assert_eq!(back.lattice().names(), scs.lattice().names());
        for a in scs.agents() {
            assert_eq!(back.space(a).table(), scs.space(a).table());
        }
        assert_eq!(ModelFile::from_scs(back).to_json_string(), text);
    }

    #[test]
    fn aumann_file() {
        let text = r#"{"aumann": {"states": ["s1", "s2", "s3"],
            "partitions": {"1": [["s1", "s2"], ["s3"]], "2": [["s1"], ["s2", "s3"]]}}}"#;
        let model = ModelFile::parse(text).unwrap().into_model().unwrap();
        let scs = model.scs().unwrap();
        assert_eq!(scs.lattice().len(), 8);
        assert_eq!(scs.apply_space("2", "{s1}").unwrap(), "{s1}");
        assert!(ModelFile::parse(r#"{"agents": {}}"#).is_err());
        assert!(ModelFile::parse("{}").is_err());
    }
}
