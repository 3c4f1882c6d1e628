//! JSON instance files.
//!
//! A file carries either a full distance table (`dist`) or point
//! coordinates (`coords`, Euclidean); tables are rebuilt exactly from
//! either. Floats are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::FairInstance;
use crate::metric::{MetricKind, MetricSpace};
use crate::PointId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub kind: MetricKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub k: usize,
    pub groups: Vec<Vec<PointId>>,
    pub requirements: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

impl InstanceFile {
    /// Stores `coords` when given (they must generate `inst`'s metric),
    /// otherwise the distance table.
    pub fn from_instance(
        inst: &FairInstance,
        coords: Option<Vec<Vec<f64>>>,
        meta: Option<InstanceMeta>,
    ) -> Self {
        let dist = coords.is_none().then(|| inst.metric().to_table());
        Self {
            n: inst.n(),
            k: inst.k(),
            groups: inst.groups().to_vec(),
            requirements: inst.requirements().to_vec(),
            coords,
            dist,
            meta,
        }
    }

    pub fn to_instance(&self) -> Result<FairInstance> {
        let metric = match (&self.coords, &self.dist) {
            (Some(c), None) => MetricSpace::from_points(c)?,
            (None, Some(d)) => MetricSpace::from_table(d)?,
            _ => {
                return Err(Error::Format(
                    "exactly one of `coords` and `dist` must be present".into(),
                ))
            }
        };
        if metric.len() != self.n {
            return Err(Error::Format(format!(
                "declared n = {} but the metric has {} points",
                self.n,
                metric.len()
            )));
        }
        FairInstance::new(
            metric,
            self.k,
            self.groups.clone(),
            self.requirements.clone(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_instance(path: &Path, file: &InstanceFile) -> Result<()> {
    let mut json = file.to_json()?;
    json.push('\n');
    std::fs::write(path, json).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&s)
}
