//! Text formats for instances and results.
//!
//! Instances are stored as TOML documents with an explicit `dimension`
//! field, `start`/`end` points, an optional default `eps`, a `disjoint`
//! declaration, and a `[[regions]]` array whose entries carry a `type`
//! tag (`ball`, `box`, `polygon`, `segment`, `union`) plus the region's
//! parameters and an optional `fat = { r_h, fatness_bound }` table.
//! Writing then reading a file reproduces the instance exactly: every
//! float is emitted in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{FatMeta, GeomError, Instance, Point, Region, Tour};

#[derive(Debug, Error)]
pub enum IoError {
    /// The document is not valid TOML or does not match the schema; the
    /// message includes the offending line and column.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Geometry(#[from] GeomError),
    #[error("result file violates length >= lower_bound: length {length}, lower_bound {lower_bound}")]
    BoundExceedsLength { length: f64, lower_bound: f64 },
    #[error("i/o error on {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
}

/// One `[[regions]]` entry: a region plus optional fatness metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionEntry {
    #[serde(flatten)]
    pub region: Region,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fat: Option<FatMeta>,
}

/// On-disk form of an [`Instance`], with an optional default accuracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dimension: usize,
    pub start: Point,
    pub end: Point,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub disjoint: bool,
    #[serde(default)]
    pub regions: Vec<RegionEntry>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, eps: Option<f64>) -> Self {
        InstanceFile {
            dimension: instance.dimension,
            start: instance.start.clone(),
            end: instance.end.clone(),
            eps,
            disjoint: instance.disjoint,
            regions: instance
                .regions
                .iter()
                .map(|(region, fat)| RegionEntry {
                    region: region.clone(),
                    fat: *fat,
                })
                .collect(),
        }
    }

    /// Validate and convert to a solver-ready [`Instance`].
    pub fn to_instance(&self) -> Result<Instance, IoError> {
        let regions = self
            .regions
            .iter()
            .map(|entry| (entry.region.clone(), entry.fat))
            .collect();
        Ok(Instance::new(
            self.dimension,
            self.start.clone(),
            self.end.clone(),
            regions,
            self.disjoint,
        )?)
    }
}

/// Outcome of a solve, optionally with certification data attached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub length: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidate_counts: Option<Vec<usize>>,
    pub wall_time_ms: f64,
    pub tour: Vec<Point>,
}

impl ResultFile {
    pub fn new(tour: &Tour, wall_time_ms: f64) -> Self {
        ResultFile {
            length: tour.length,
            lower_bound: None,
            ratio: None,
            candidate_counts: None,
            wall_time_ms,
            tour: tour.points.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if let Some(lb) = self.lower_bound {
            if self.length < lb - 1e-9 {
                return Err(IoError::BoundExceedsLength {
                    length: self.length,
                    lower_bound: lb,
                });
            }
        }
        Ok(())
    }

    pub fn to_tour(&self) -> Tour {
        Tour::from_points(self.tour.clone())
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, IoError> {
    let file: InstanceFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    // surface geometry problems at parse time so callers get one error site
    file.to_instance()?;
    Ok(file)
}

pub fn write_instance(file: &InstanceFile) -> String {
    toml::to_string_pretty(file).expect("instance files always serialize")
}

pub fn parse_result(text: &str) -> Result<ResultFile, IoError> {
    let file: ResultFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    file.validate()?;
    Ok(file)
}

pub fn write_result(file: &ResultFile) -> String {
    toml::to_string_pretty(file).expect("result files always serialize")
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

pub fn write_instance_file(path: &Path, file: &InstanceFile) -> Result<(), IoError> {
    std::fs::write(path, write_instance(file)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_result_file(path: &Path) -> Result<ResultFile, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_result(&text)
}

pub fn write_result_file(path: &Path, file: &ResultFile) -> Result<(), IoError> {
    std::fs::write(path, write_result(file)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}
