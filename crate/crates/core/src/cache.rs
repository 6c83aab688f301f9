//! On-disk cache for Monte Carlo cost tables. Entries are keyed by the
//! complete sampling identity (graph, algorithm, sample count, seed), so a
//! hit is bit-identical to recomputing.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::search::{alg_cost_table, Alg, AlgCostTable};

const MAGIC: &[u8; 8] = b"RRTDTBL1";

fn cache_path(dir: &Path, graph_id: &str, alg: Alg, samples: u64, seed: u64) -> PathBuf {
    let mut h = Sha256::new();
    h.update(graph_id.as_bytes());
    h.update([0u8, alg as u8]);
    h.update(samples.to_le_bytes());
    h.update(seed.to_le_bytes());
    let digest = h.finalize();
    let mut name = String::with_capacity(68);
    for b in digest {
        name.push_str(&format!("{b:02x}"));
    }
    name.push_str(".bin");
    dir.join(name)
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// Writes `table` atomically (tempfile + rename) under `dir`, creating the
/// directory if needed.
pub fn store_table(dir: &Path, graph_id: &str, table: &AlgCostTable) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let n = table.n();
    let (reward, sem2) = table.raw();
    let mut buf = Vec::with_capacity(8 + 4 + 1 + 16 + 16 * n * n);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(n as u32).to_le_bytes());
    buf.push(table.alg as u8);
    buf.extend_from_slice(&table.samples.to_le_bytes());
    buf.extend_from_slice(&table.seed.to_le_bytes());
    for x in reward.iter().chain(sem2) {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    let path = cache_path(dir, graph_id, table.alg, table.samples, table.seed);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(&buf).map_err(|e| io_err(&path, e))?;
    tmp.persist(&path).map_err(|e| io_err(&path, e.error))?;
    Ok(())
}

/// Loads a previously stored table. Missing, truncated, or mismatched
/// entries are a miss (`Ok(None)`), never an error: the caller recomputes.
pub fn load_table(
    dir: &Path,
    graph_id: &str,
    n: usize,
    alg: Alg,
    samples: u64,
    seed: u64,
) -> Result<Option<AlgCostTable>> {
    let path = cache_path(dir, graph_id, alg, samples, seed);
    let mut file = match std::fs::File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(&path, e)),
    };
    let mut buf = Vec::new();
    if file.read_to_end(&mut buf).is_err() {
        return Ok(None);
    }
    let cells = n * n;
    let expected = 8 + 4 + 1 + 16 + 16 * cells;
    if buf.len() != expected || &buf[..8] != MAGIC {
        return Ok(None);
    }
    let stored_n = u32::from_le_bytes(buf[8..12].try_into().unwrap()) as usize;
    let stored_alg = buf[12];
    let stored_samples = u64::from_le_bytes(buf[13..21].try_into().unwrap());
    let stored_seed = u64::from_le_bytes(buf[21..29].try_into().unwrap());
    if stored_n != n || stored_alg != alg as u8 || stored_samples != samples || stored_seed != seed
    {
        return Ok(None);
    }
    let mut vals = Vec::with_capacity(2 * cells);
    for chunk in buf[29..].chunks_exact(8) {
        vals.push(f64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let sem2 = vals.split_off(cells);
    Ok(Some(AlgCostTable::from_parts(alg, samples, seed, n, vals, sem2)))
}

/// Cache-through wrapper around [`alg_cost_table`]: `dir = None` always
/// computes; otherwise a hit is returned as-is and a miss is computed and
/// stored.
pub fn table_or_compute(
    dir: Option<&Path>,
    g: &Graph,
    graph_id: &str,
    alg: Alg,
    samples: u64,
    seed: u64,
) -> Result<AlgCostTable> {
    // Exact tables record samples = 0; normalize so their key is stable no
    // matter what sample count the caller configured.
    let samples = if alg.is_exact() { 0 } else { samples };
    if let Some(dir) = dir {
        if let Some(table) = load_table(dir, graph_id, g.n(), alg, samples, seed)? {
            return Ok(table);
        }
    }
    let table = alg_cost_table(g, graph_id, alg, samples, seed)?;
    if let Some(dir) = dir {
        store_table(dir, graph_id, &table)?;
    }
    Ok(table)
}
