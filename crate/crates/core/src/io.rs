//! File formats: ball CSV, kernel-matrix CSV, binary sample batches and
//! their JSON sidecars.
//!
//! Floats are written in Rust's shortest round-trip form, so a value read
//! back is bit-identical and repeated runs produce identical bytes.

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SampleBatch};
use crate::geometry::Ball;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Read, Write};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {line}: cannot parse {s:?} as a number ({e})")))
}

pub fn balls_csv_header(d: usize) -> String {
    let mut cols = vec!["dim".to_string(), "t".to_string()];
    cols.extend((1..d).map(|k| format!("x{k}")));
    cols.push("radius".into());
    cols.join(",")
}

pub fn write_balls_csv<W: Write>(mut w: W, balls: &[Ball]) -> Result<()> {
    let d = balls.first().map_or(1, |b| b.dim());
    writeln!(w, "{}", balls_csv_header(d))?;
    for b in balls {
        let mut row = vec![b.dim().to_string()];
        row.extend(b.center().iter().map(|&c| fmt_f64(c)));
        row.push(fmt_f64(b.radius()));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Read balls from CSV; blank lines and lines starting with `#` are skipped.
pub fn read_balls_csv<R: BufRead>(r: R) -> Result<Vec<Ball>> {
    let mut lines = r
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.starts_with('#')));
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty ball file".into()))?;
    let header = header?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "dim" || cols[1] != "t" || cols[cols.len() - 1] != "radius" {
        return Err(Error::Parse(format!("unexpected ball CSV header {header:?}")));
    }
    let d = cols.len() - 2;
    if header.trim() != balls_csv_header(d) {
        return Err(Error::Parse(format!("expected header {:?}", balls_csv_header(d))));
    }
    let mut balls = Vec::new();
    for (line, text) in lines {
        let text = text?;
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != d + 2 {
            return Err(Error::Parse(format!("line {line}: expected {} fields, got {}", d + 2, fields.len())));
        }
        let dim: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: bad dim {:?}", fields[0])))?;
        if dim != d {
            return Err(Error::Parse(format!("line {line}: dim {dim} does not match header dimension {d}")));
        }
        let center = fields[1..=d].iter().map(|f| parse_f64(f, line)).collect::<Result<Vec<_>>>()?;
        let radius = parse_f64(fields[d + 1], line)?;
        balls.push(Ball::new(center, radius).map_err(|e| Error::Parse(format!("line {line}: {e}")))?);
    }
    Ok(balls)
}

/// Kernel matrix as CSV: header `n,d,kernel,params`, the header values,
/// then `n` rows of entries. `trailer` lines are appended as `# ` comments.
pub fn write_kernel_csv<W: Write>(mut w: W, m: &CovarianceMatrix, kernel: &str, params: &str, trailer: &[String]) -> Result<()> {
    writeln!(w, "n,d,kernel,params")?;
    writeln!(w, "{},{},{},{}", m.order(), m.dim(), kernel, params)?;
    let n = m.order();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| fmt_f64(m.get(i, j))).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    for t in trailer {
        writeln!(w, "# {t}")?;
    }
    Ok(())
}

/// Parsed kernel CSV: the matrix plus the kernel name and parameter string.
pub fn read_kernel_csv<R: BufRead>(r: R) -> Result<(CovarianceMatrix, String, String)> {
    let lines: Vec<String> = r
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .collect();
    if lines.len() < 2 || lines[0].trim() != "n,d,kernel,params" {
        return Err(Error::Parse("missing kernel CSV header".into()));
    }
    let meta: Vec<&str> = lines[1].splitn(4, ',').collect();
    if meta.len() != 4 {
        return Err(Error::Parse("kernel CSV metadata line needs 4 fields".into()));
    }
    let n: usize = meta[0].parse().map_err(|_| Error::Parse("bad n".into()))?;
    let d: usize = meta[1].parse().map_err(|_| Error::Parse("bad d".into()))?;
    if lines.len() != n + 2 {
        return Err(Error::Parse(format!("expected {n} matrix rows, found {}", lines.len() - 2)));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (k, row) in lines[2..].iter().enumerate() {
        let vals = row.split(',').map(|f| parse_f64(f, k + 3)).collect::<Result<Vec<_>>>()?;
        if vals.len() != n {
            return Err(Error::Parse(format!("row {k} has {} entries, expected {n}", vals.len())));
        }
        entries.extend(vals);
    }
    Ok((CovarianceMatrix::from_entries(n, d, entries)?, meta[2].to_string(), meta[3].to_string()))
}

pub const BATCH_MAGIC: [u8; 8] = *b"BALLFLD\0";
pub const BATCH_VERSION: u32 = 1;
const FLAG_TRANSFORMED: u32 = 1;

/// Fixed 64-byte header of the binary sample container.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchHeader {
    pub version: u32,
    pub flags: u32,
    pub n: u64,
    pub d: u64,
    pub n_samples: u64,
    pub seed: u64,
}

impl BatchHeader {
    pub fn to_bytes(&self) -> [u8; 64] {
        let mut b = [0u8; 64];
        b[0..8].copy_from_slice(&BATCH_MAGIC);
        b[8..12].copy_from_slice(&self.version.to_le_bytes());
        b[12..16].copy_from_slice(&self.flags.to_le_bytes());
        b[16..24].copy_from_slice(&self.n.to_le_bytes());
        b[24..32].copy_from_slice(&self.d.to_le_bytes());
        b[32..40].copy_from_slice(&self.n_samples.to_le_bytes());
        b[40..48].copy_from_slice(&self.seed.to_le_bytes());
        b
    }

    pub fn from_bytes(b: &[u8; 64]) -> Result<Self> {
        if b[0..8] != BATCH_MAGIC {
            return Err(Error::Parse("not a sample batch file (bad magic)".into()));
        }
        let u32_at = |k: usize| u32::from_le_bytes(b[k..k + 4].try_into().expect("4 bytes"));
        let u64_at = |k: usize| u64::from_le_bytes(b[k..k + 8].try_into().expect("8 bytes"));
        let h = Self {
            version: u32_at(8),
            flags: u32_at(12),
            n: u64_at(16),
            d: u64_at(24),
            n_samples: u64_at(32),
            seed: u64_at(40),
        };
        if h.version != BATCH_VERSION {
            return Err(Error::Parse(format!("unsupported batch version {}", h.version)));
        }
        Ok(h)
    }
}

/// Metadata stored next to the binary values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSidecar {
    pub balls: Vec<Ball>,
    pub n_samples: usize,
    pub seed: u64,
    pub rng_algorithm: String,
    pub kernel: String,
    pub jitter_applied: f64,
    pub transforms: Vec<String>,
    pub extrapolated: bool,
    pub config_hash: String,
    pub version: String,
}

impl BatchSidecar {
    pub fn new(batch: &SampleBatch, config_hash: &str) -> Self {
        Self {
            balls: batch.balls.clone(),
            n_samples: batch.n_samples,
            seed: batch.seed,
            rng_algorithm: batch.rng_algorithm.clone(),
            kernel: batch.kernel.clone(),
            jitter_applied: batch.jitter_applied,
            transforms: batch.transforms.clone(),
            extrapolated: batch.extrapolated,
            config_hash: config_hash.to_string(),
            version: crate::VERSION.to_string(),
        }
    }
}

pub fn write_batch_bin<W: Write>(mut w: W, batch: &SampleBatch) -> Result<()> {
    let header = BatchHeader {
        version: BATCH_VERSION,
        flags: if batch.transforms.is_empty() { 0 } else { FLAG_TRANSFORMED },
        n: batch.order() as u64,
        d: batch.balls.first().map_or(0, |b| b.dim()) as u64,
        n_samples: batch.n_samples as u64,
        seed: batch.seed,
    };
    w.write_all(&header.to_bytes())?;
    let mut buf = Vec::with_capacity(batch.values.len() * 8);
    for v in &batch.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Header and row-major values of a binary batch.
pub fn read_batch_bin<R: Read>(mut r: R) -> Result<(BatchHeader, Vec<f64>)> {
    let mut hb = [0u8; 64];
    r.read_exact(&mut hb)?;
    let h = BatchHeader::from_bytes(&hb)?;
    let count = (h.n * h.n_samples) as usize;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != count * 8 {
        return Err(Error::Parse(format!("expected {} value bytes, found {}", count * 8, raw.len())));
    }
    let values = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok((h, values))
}

/// Reassemble a batch from its binary values and sidecar.
pub fn batch_from_parts(header: &BatchHeader, values: Vec<f64>, side: BatchSidecar) -> Result<SampleBatch> {
    if side.balls.len() as u64 != header.n || side.n_samples as u64 != header.n_samples || side.seed != header.seed {
        return Err(Error::Parse("sidecar does not match the binary header".into()));
    }
    Ok(SampleBatch {
        balls: side.balls,
        n_samples: side.n_samples,
        values,
        seed: side.seed,
        rng_algorithm: side.rng_algorithm,
        kernel: side.kernel,
        jitter_applied: side.jitter_applied,
        transforms: side.transforms,
        extrapolated: side.extrapolated,
    })
}

/// Samples as CSV, one draw per row (`b0,b1,…`).
pub fn write_batch_csv<W: Write>(mut w: W, batch: &SampleBatch) -> Result<()> {
    let header: Vec<String> = (0..batch.order()).map(|i| format!("b{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for k in 0..batch.n_samples {
        let row: Vec<String> = batch.row(k).iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
