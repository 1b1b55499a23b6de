//! JSONL persistence for instances and a summary manifest per dataset
//! directory. Cases are stored as their canonical atom text, so files stay
//! greppable and diffable; reading parses them back.

use crate::error::CorpusError;
use crate::instance::Instance;
use logic_core::parse_atom;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct InstanceRecord {
    task_id: String,
    positives: Vec<String>,
    negatives: Vec<String>,
    corruption_rate: f64,
}

/// Per-task tallies recorded in the manifest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskCounts {
    pub instances: usize,
    pub positives: usize,
    pub negatives: usize,
}

/// Summary of a generated dataset directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub registry_version: u32,
    pub counts: BTreeMap<String, TaskCounts>,
}

/// Write instances as one JSON object per line.
pub fn write_instances(path: &Path, instances: &[Instance]) -> Result<(), CorpusError> {
    let mut w = BufWriter::new(File::create(path)?);
    for inst in instances {
        let rec = InstanceRecord {
            task_id: inst.task_id.clone(),
            positives: inst.positives.iter().map(|a| a.to_string()).collect(),
            negatives: inst.negatives.iter().map(|a| a.to_string()).collect(),
            corruption_rate: inst.corruption_rate,
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read a JSONL instance file written by [`write_instances`].
pub fn read_instances(path: &Path) -> Result<Vec<Instance>, CorpusError> {
    let r = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: InstanceRecord = serde_json::from_str(&line)?;
        let parse_all = |texts: &[String]| -> Result<Vec<_>, CorpusError> {
            texts.iter().map(|t| Ok(parse_atom(t)?)).collect()
        };
        out.push(Instance {
            task_id: rec.task_id,
            positives: parse_all(&rec.positives)?,
            negatives: parse_all(&rec.negatives)?,
            corruption_rate: rec.corruption_rate,
        });
    }
    Ok(out)
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), CorpusError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, manifest)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Manifest, CorpusError> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
