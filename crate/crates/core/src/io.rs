//! Cluster files: `{"positions": [[x,y,z],…], "radii": [r,…], "colors": [int,…]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Cluster, Partition, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterFile {
    pub positions: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
}

impl ClusterFile {
    pub fn from_cluster(c: &Cluster, colors: Option<&Partition>) -> Self {
        Self {
            positions: c.positions().iter().map(|p| [p.x, p.y, p.z]).collect(),
            radii: c.radii().to_vec(),
            colors: colors.map(|p| p.labels().to_vec()),
        }
    }

    pub fn cluster(&self) -> Result<Cluster> {
        Cluster::new(
            self.positions.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
            self.radii.clone(),
        )
    }

    pub fn colors(&self) -> Result<Option<Partition>> {
        match &self.colors {
            None => Ok(None),
            Some(c) if c.len() != self.radii.len() => Err(Error::DimensionMismatch {
                expected: self.radii.len(),
                found: c.len(),
            }),
            Some(c) => Ok(Some(Partition::from_labels(c.clone()))),
        }
    }
}

pub fn parse_cluster(text: &str) -> Result<(Cluster, Option<Partition>)> {
    let file: ClusterFile = serde_json::from_str(text)?;
    Ok((file.cluster()?, file.colors()?))
}

pub fn read_cluster(path: &Path) -> Result<(Cluster, Option<Partition>)> {
    parse_cluster(&std::fs::read_to_string(path)?)
}

pub fn cluster_to_json(c: &Cluster, colors: Option<&Partition>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ClusterFile::from_cluster(c, colors))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_colors() {
        let (c, colors) = parse_cluster(r#"{"positions": [[0,0,0],[1,0,0]], "radii": [0.5, 0.5]}"#).unwrap();
        assert_eq!(c.len(), 2);
        assert!(colors.is_none());
        let (_, colors) =
            parse_cluster(r#"{"positions": [[0,0,0],[1,0,0]], "radii": [0.5, 0.5], "colors": [3, 7]}"#).unwrap();
        assert_eq!(colors.unwrap().labels(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_cluster("{"), Err(Error::Json(_))));
        assert!(matches!(
            parse_cluster(r#"{"positions": [[0,0,0],[0.2,0,0]], "radii": [0.5, 0.5]}"#),
            Err(Error::Overlap(0, 1))
        ));
        assert!(parse_cluster(r#"{"positions": [[0,0,0]], "radii": [0.5], "colors": [1, 2]}"#).is_err());
    }
}
