//! Append-only JSON-lines store of class records, keyed by normal form.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use fano_mirror::census::Census;
use fano_mirror::mutation::GraphBounds;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    /// The polygon whose mutation graph first reached this class.
    pub seed: Vec<[i64; 2]>,
    pub box_size: i64,
    pub bounds: GraphBounds,
    pub timestamp: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub normal_form: Vec<[i64; 2]>,
    pub content: String,
    pub degree: String,
    pub mm_dimension: usize,
    pub mm_depth: usize,
    pub mm_stabilized: bool,
    pub period_degree_profile: Vec<Option<u32>>,
    pub period_values: Option<Vec<String>>,
    pub members: usize,
    pub discovery: Discovery,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn records(c: &Census, deterministic: bool) -> Vec<ClassRecord> {
    let timestamp = (!deterministic).then(now);
    c.clusters
        .iter()
        .map(|cl| {
            let sig = cl.signature.as_ref().expect("census computes signatures");
            let seed = cl.members.first().expect("clusters are nonempty");
            ClassRecord {
                normal_form: cl.representative.vertices().iter().map(|v| [v.x, v.y]).collect(),
                content: cl.content.to_string(),
                degree: cl.degree.clone(),
                mm_dimension: sig.dimension,
                mm_depth: sig.depth,
                mm_stabilized: sig.stabilized,
                period_degree_profile: sig.degree_profile.clone(),
                period_values: sig.values.clone(),
                members: cl.members.len(),
                discovery: Discovery {
                    seed: seed.vertices().iter().map(|v| [v.x, v.y]).collect(),
                    box_size: c.config.box_size,
                    bounds: c.config.bounds,
                    timestamp,
                },
            }
        })
        .collect()
}

pub fn load_keys(path: &Path) -> io::Result<HashSet<Vec<[i64; 2]>>> {
    let mut keys = HashSet::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(keys),
        Err(e) => return Err(e),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: ClassRecord = serde_json::from_str(&line)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        keys.insert(r.normal_form);
    }
    Ok(keys)
}

/// Appends the records whose key is new, in one write. Returns how many were added.
pub fn append(path: &Path, records: &[ClassRecord]) -> io::Result<usize> {
    let mut keys = load_keys(path)?;
    let mut buf = String::new();
    let mut added = 0;
    for r in records {
        if keys.insert(r.normal_form.clone()) {
            buf.push_str(&serde_json::to_string(r).expect("serialisable"));
            buf.push('\n');
            added += 1;
        }
    }
    if added > 0 {
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        f.write_all(buf.as_bytes())?;
        f.flush()?;
    }
    Ok(added)
}
