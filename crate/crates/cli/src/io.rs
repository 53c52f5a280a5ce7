//! Evidence files: JSON with a `frame` label list and `masses` entries.
//!
//! ```json
//! {"frame": ["a", "b", "c"],
//!  "masses": [{"set": ["a", "b"], "mass": 0.4}, {"set": [], "mass": 0.6}],
//!  "metadata": {"source": "sensor-1"}}
//! ```

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use focal_core::{FrameOfDiscernment, MassFunction, SubsetMask};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Masses read from a file must sum to one within this tolerance.
pub const FILE_TOLERANCE: f64 = 1e-6;

/// Decimal places kept in command outputs.
pub const OUTPUT_DECIMALS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceFile {
    pub frame: Vec<String>,
    pub masses: Vec<MassEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub set: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Evidence {
    pub mass: MassFunction,
    pub metadata: Option<Metadata>,
}

/// A set rendered as its labels in frame order.
pub fn labels(frame: &FrameOfDiscernment, set: u64) -> Vec<String> {
    frame.labels_of(set).into_iter().map(str::to_owned).collect()
}

/// Rounds to [`OUTPUT_DECIMALS`] places; `-0` becomes `0`.
pub fn round_output(v: f64) -> f64 {
    let r: f64 = format!("{v:.OUTPUT_DECIMALS$}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn parse_evidence(text: &str) -> Result<Evidence> {
    let file: EvidenceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    evidence_from_file(file)
}

pub fn evidence_from_file(file: EvidenceFile) -> Result<Evidence> {
    let frame = Arc::new(FrameOfDiscernment::new(file.frame.iter().cloned())?);
    let mut acc: HashMap<u64, f64> = HashMap::new();
    let mut order = Vec::new();
    for (i, entry) in file.masses.iter().enumerate() {
        let set: u64 = frame.mask_of(&entry.set).map_err(|e| match e {
            focal_core::Error::UnknownLabel(l) => {
                CliError::Validation(format!("masses[{i}].set: label `{l}` is not in the frame"))
            }
            other => other.into(),
        })?;
        if entry.mass < 0.0 {
            return Err(CliError::Validation(format!(
                "masses[{i}].mass: negative mass {}",
                entry.mass
            )));
        }
        match acc.get_mut(&set) {
            Some(v) => {
                log::warn!(
                    "masses[{i}]: duplicate entry for {}, masses summed",
                    frame.display(set)
                );
                *v += entry.mass;
            }
            None => {
                acc.insert(set, entry.mass);
                order.push(set);
            }
        }
    }
    let total: f64 = acc.values().sum();
    if (total - 1.0).abs() > FILE_TOLERANCE {
        return Err(CliError::Validation(format!(
            "masses sum to {total}, not 1 (tolerance {FILE_TOLERANCE:e})"
        )));
    }
    let mass = MassFunction::with_tolerance(
        frame,
        order.into_iter().map(|s| (s, acc[&s])),
        FILE_TOLERANCE,
    )?;
    Ok(Evidence {
        mass,
        metadata: file.metadata,
    })
}

pub fn load_evidence(path: &Path) -> Result<Evidence> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_evidence(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// File form of a mass, focal sets in canonical order, values kept exactly.
pub fn evidence_to_file(ev: &Evidence) -> EvidenceFile {
    let frame = ev.mass.frame();
    let mut entries: Vec<(u64, f64)> = ev.mass.iter().collect();
    entries.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    EvidenceFile {
        frame: frame.labels().to_vec(),
        masses: entries
            .into_iter()
            .map(|(s, m)| MassEntry {
                set: labels(frame, s),
                mass: m,
            })
            .collect(),
        metadata: ev.metadata.clone(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn save_evidence(path: &Path, ev: &Evidence) -> Result<()> {
    write_atomic(path, to_json(&evidence_to_file(ev)).as_bytes())
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Validation(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}
