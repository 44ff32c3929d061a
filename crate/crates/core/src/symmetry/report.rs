use serde::{Deserialize, Serialize};

use crate::geometry::{AdjacencyMatrix, Cluster, Partition, Vec3};
use crate::groups::{PIGroup, PIOperation, Provenance};
use crate::manifold::PathConfig;
use crate::{Error, Result};

pub const REPORT_VERSION: u32 = 1;

/// Status of one element of `𝒢 × C₂` in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementStatus {
    Rotation,
    Path,
    Closure,
    NotFound,
}

impl From<Provenance> for ElementStatus {
    fn from(p: Provenance) -> Self {
        match p {
            Provenance::Rotation => ElementStatus::Rotation,
            Provenance::Path => ElementStatus::Path,
            Provenance::Closure => ElementStatus::Closure,
        }
    }
}

/// Outcome of a path search for one element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub found: bool,
    pub attempts: usize,
    pub points: usize,
    pub seed: u64,
    /// Distance from the path's last point to the target image.
    pub endpoint_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    /// Cycle notation, `*` marking δ = −1.
    pub element: String,
    pub status: ElementStatus,
    /// Excluded without a search because it lies in a double coset of a
    /// failed element.
    #[serde(default)]
    pub inferred: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverify: Option<SearchRecord>,
}

/// Options of the symmetry pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryOptions {
    pub path: PathConfig,
    pub include_inversions: bool,
    pub fix_com: bool,
    pub eps_contact: f64,
    pub eps_d: f64,
    pub max_vertices: usize,
    /// Skip candidates lying in `H f H` for a failed element `f`.
    pub prune_negative: bool,
    /// Search closure-inferred elements again with fresh seeds.
    pub reverify_closure: bool,
    /// Sampling steps (β = 0) applied to the input before the analysis.
    pub sample_steps: usize,
    /// Searches launched together; 1 runs them strictly in order.
    pub jobs: usize,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            path: PathConfig {
                record: false,
                ..PathConfig::default()
            },
            include_inversions: true,
            fix_com: true,
            eps_contact: crate::geometry::DEFAULT_EPS_CONTACT,
            eps_d: crate::groups::DEFAULT_EPS_D,
            max_vertices: crate::groups::DEFAULT_MAX_VERTICES,
            prune_negative: true,
            reverify_closure: false,
            sample_steps: 0,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterData {
    pub positions: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
}

impl ClusterData {
    pub fn from_cluster(c: &Cluster) -> Self {
        Self {
            positions: c.positions().iter().map(|p| [p.x, p.y, p.z]).collect(),
            radii: c.radii().to_vec(),
        }
    }

    pub fn to_cluster(&self) -> Result<Cluster> {
        Cluster::new(
            self.positions.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
            self.radii.clone(),
        )
    }
}

/// Everything the pipeline learned about one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub version: u32,
    pub n: usize,
    /// Embedding actually analysed (centered, polished, possibly sampled).
    pub cluster: ClusterData,
    pub contacts: AdjacencyMatrix,
    /// Class label per sphere used for counting (radii or colors).
    pub partition: Partition,
    pub include_inversions: bool,
    pub automorphism_group: Vec<String>,
    pub point_group: Vec<String>,
    pub sticky_group: Vec<String>,
    pub elements: Vec<ElementRecord>,
    pub sigma: u64,
    pub counting_number: u128,
    pub path_searches: usize,
    pub closure_inferred: usize,
    pub options: SymmetryOptions,
    pub seed: u64,
}

impl SymmetryReport {
    pub fn automorphism_order(&self) -> usize {
        self.automorphism_group.len()
    }

    pub fn point_group_order(&self) -> usize {
        self.point_group.len()
    }

    fn parse_group(&self, list: &[String]) -> Result<PIGroup> {
        let mut els = Vec::with_capacity(list.len());
        for s in list {
            let op = PIOperation::parse(s, self.n)?;
            let prov = self
                .elements
                .iter()
                .find(|e| &e.element == s)
                .and_then(|e| match e.status {
                    ElementStatus::Rotation => Some(Provenance::Rotation),
                    ElementStatus::Path => Some(Provenance::Path),
                    ElementStatus::Closure => Some(Provenance::Closure),
                    ElementStatus::NotFound => None,
                })
                .unwrap_or(Provenance::Rotation);
            els.push((op, prov));
        }
        PIGroup::from_elements(self.n, els)
    }

    pub fn sticky(&self) -> Result<PIGroup> {
        self.parse_group(&self.sticky_group)
    }

    pub fn point(&self) -> Result<PIGroup> {
        self.parse_group(&self.point_group)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        if r.version != REPORT_VERSION {
            return Err(Error::InvalidConfig(format!("unsupported report version {}", r.version)));
        }
        Ok(r)
    }
}
