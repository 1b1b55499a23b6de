//! Self-describing binary checkpoints: a header with the format version,
//! every shape, the clamp bound, the domain name, and the list of task ids
//! the policy was trained on, followed by the flat parameter vector as
//! little-endian 64-bit floats in layout order.

use crate::error::PolicyError;
use crate::params::{Layout, PolicyConfig, PolicyParams};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"MRSP";
const VERSION: u32 = 1;

/// Provenance stored alongside the weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckpointMeta {
    /// Task domain the policy reads encodings of ("mario" or "mnist").
    pub domain: String,
    /// Task ids in the training mixture; empty for untrained parameters.
    pub trained_tasks: Vec<String>,
}

fn write_str(w: &mut impl Write, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_u32(r: &mut impl Read) -> Result<u32, PolicyError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_str(r: &mut impl Read) -> Result<String, PolicyError> {
    let n = read_u32(r)? as usize;
    if n > 1 << 20 {
        return Err(PolicyError::BadCheckpoint(format!(
            "string length {n} is implausible"
        )));
    }
    let mut b = vec![0u8; n];
    r.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|e| PolicyError::BadCheckpoint(e.to_string()))
}

pub fn save_checkpoint(
    path: &Path,
    params: &PolicyParams,
    meta: &CheckpointMeta,
) -> Result<(), PolicyError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for dim in [
        params.cfg.d_model,
        params.cfg.heads,
        params.cfg.vocab,
        params.cfg.n_rules,
        params.cfg.mr_dim,
    ] {
        w.write_all(&(dim as u32).to_le_bytes())?;
    }
    w.write_all(&params.cfg.p_min.to_le_bytes())?;
    write_str(&mut w, &meta.domain)?;
    w.write_all(&(meta.trained_tasks.len() as u32).to_le_bytes())?;
    for t in &meta.trained_tasks {
        write_str(&mut w, t)?;
    }
    w.write_all(&(params.data.len() as u64).to_le_bytes())?;
    for v in &params.data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<(PolicyParams, CheckpointMeta), PolicyError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(PolicyError::BadCheckpoint("wrong magic bytes".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(PolicyError::BadCheckpoint(format!(
            "version {version}, expected {VERSION}"
        )));
    }
    let d_model = read_u32(&mut r)? as usize;
    let heads = read_u32(&mut r)? as usize;
    let vocab = read_u32(&mut r)? as usize;
    let n_rules = read_u32(&mut r)? as usize;
    let mr_dim = read_u32(&mut r)? as usize;
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let p_min = f64::from_le_bytes(b);
    let cfg = PolicyConfig {
        d_model,
        heads,
        vocab,
        n_rules,
        mr_dim,
        p_min,
    };
    if heads == 0 || d_model % heads != 0 || !(0.0..0.5).contains(&p_min) {
        return Err(PolicyError::BadCheckpoint(format!(
            "inconsistent header: d_model {d_model}, heads {heads}, p_min {p_min}"
        )));
    }
    let domain = read_str(&mut r)?;
    let n_tasks = read_u32(&mut r)? as usize;
    if n_tasks > 1 << 16 {
        return Err(PolicyError::BadCheckpoint(format!(
            "task count {n_tasks} is implausible"
        )));
    }
    let mut trained_tasks = Vec::with_capacity(n_tasks);
    for _ in 0..n_tasks {
        trained_tasks.push(read_str(&mut r)?);
    }
    r.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b) as usize;
    let expect = Layout::new(&cfg).total;
    if n != expect {
        return Err(PolicyError::BadCheckpoint(format!(
            "{n} parameters for a layout of {expect}"
        )));
    }
    let mut data = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut b)?;
        data.push(f64::from_le_bytes(b));
    }
    Ok((PolicyParams { cfg, data }, CheckpointMeta { domain, trained_tasks }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_round_trip_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("policy.bin");
        let params = PolicyParams::init(PolicyConfig::default(), 31);
        let meta = CheckpointMeta {
            domain: "mario".into(),
            trained_tasks: vec!["up_priority".into(), "flower".into()],
        };
        save_checkpoint(&path, &params, &meta).unwrap();
        let (back, back_meta) = load_checkpoint(&path).unwrap();
        assert_eq!(back, params);
        assert_eq!(back_meta, meta);
    }

    #[test]
    fn corrupt_headers_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, b"NOPE............").unwrap();
        assert!(matches!(
            load_checkpoint(&path),
            Err(PolicyError::BadCheckpoint(_))
        ));
    }
}
