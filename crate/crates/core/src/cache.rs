//! Binary kernel-matrix cache, keyed by (N, α, grid fingerprint).
//!
//! Format (version 1, all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic  b"SPSLABK1"
//! 8       4     n      (u32) ambient dimension
//! 12      4     _pad   (zeros)
//! 16      8     m      (u64) grid size
//! 24      8     alpha  (f64)
//! 32      8     r_min  (f64)
//! 40      8     r_max  (f64)
//! 48      8     grid fingerprint (u64), must match the reconstructed grid
//! 56      8*m*m entries, row-major f64
//! ```

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::riesz::{assemble_kernel, KernelMatrix, KERNEL_SIZE_CAP};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 8] = b"SPSLABK1";
const HEADER_LEN: usize = 56;

pub fn encode_kernel(kernel: &KernelMatrix) -> Vec<u8> {
    let grid = kernel.grid();
    let m = grid.len();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m * m);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&grid.dim().to_le_bytes());
    out.extend_from_slice(&[0u8; 4]);
    out.extend_from_slice(&(m as u64).to_le_bytes());
    out.extend_from_slice(&kernel.alpha().to_le_bytes());
    out.extend_from_slice(&grid.r_min().to_le_bytes());
    out.extend_from_slice(&grid.r_max().to_le_bytes());
    out.extend_from_slice(&grid.fingerprint().to_le_bytes());
    for &e in kernel.entries() {
        out.extend_from_slice(&e.to_le_bytes());
    }
    out
}

fn read_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}
fn read_u64(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}
fn read_f64(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

/// Decode a cache blob. Every field is validated; malformed input of any
/// shape returns an error, never panics.
pub fn decode_kernel(bytes: &[u8]) -> Result<KernelMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format("cache blob shorter than the header".into()));
    }
    if &bytes[0..8] != MAGIC {
        return Err(Error::Format("bad magic; not a kernel cache".into()));
    }
    let n = read_u32(bytes, 8);
    let m = read_u64(bytes, 16) as usize;
    let alpha = read_f64(bytes, 24);
    let r_min = read_f64(bytes, 32);
    let r_max = read_f64(bytes, 40);
    let fp = read_u64(bytes, 48);
    if n == 0 || n > 64 {
        return Err(Error::Format(format!("implausible dimension {n}")));
    }
    if m < 16 || m > KERNEL_SIZE_CAP {
        return Err(Error::Format(format!(
            "grid size {m} outside [16, {KERNEL_SIZE_CAP}]"
        )));
    }
    if !(alpha.is_finite() && alpha > 0.0 && alpha < n as f64) {
        return Err(Error::Format(format!("alpha {alpha} outside (0, {n})")));
    }
    if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_max > r_min) {
        return Err(Error::Format("bad grid bounds".into()));
    }
    let want = HEADER_LEN
        .checked_add(
            m.checked_mul(m)
                .and_then(|x| x.checked_mul(8))
                .ok_or_else(|| Error::Format("entry count overflow".into()))?,
        )
        .ok_or_else(|| Error::Format("length overflow".into()))?;
    if bytes.len() != want {
        return Err(Error::Format(format!(
            "payload length {} does not match {want}",
            bytes.len()
        )));
    }
    let grid = RadialGrid::new(r_min, r_max, m, n).map_err(|e| Error::Format(e.to_string()))?;
    if grid.fingerprint() != fp {
        return Err(Error::Format("grid fingerprint mismatch".into()));
    }
    let mut entries = Vec::with_capacity(m * m);
    for k in 0..m * m {
        let v = read_f64(bytes, HEADER_LEN + 8 * k);
        if !v.is_finite() {
            return Err(Error::Format(format!("non-finite entry at index {k}")));
        }
        entries.push(v);
    }
    KernelMatrix::from_raw(grid, alpha, entries)
}

pub fn cache_file_name(grid: &RadialGrid, alpha: f64) -> String {
    format!(
        "kernel-n{}-a{:016x}-g{:016x}.bin",
        grid.dim(),
        alpha.to_bits(),
        grid.fingerprint()
    )
}

pub fn save_kernel(dir: &Path, kernel: &KernelMatrix) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(kernel.grid(), kernel.alpha()));
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&encode_kernel(kernel))?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load the kernel for (grid, α) from the cache directory, assembling and
/// storing it on a miss. With no cache directory it just assembles.
pub fn load_or_assemble(
    dir: Option<&Path>,
    grid: &std::sync::Arc<RadialGrid>,
    alpha: f64,
) -> Result<KernelMatrix> {
    if let Some(dir) = dir {
        let path = dir.join(cache_file_name(grid, alpha));
        if let Ok(bytes) = std::fs::read(&path) {
            if let Ok(kernel) = decode_kernel(&bytes) {
                if kernel.grid().fingerprint() == grid.fingerprint() {
                    return Ok(kernel);
                }
            }
            // fall through: corrupt or stale cache entries are rebuilt
        }
        let kernel = assemble_kernel(grid, alpha)?;
        let _ = save_kernel(dir, &kernel);
        return Ok(kernel);
    }
    assemble_kernel(grid, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn small_kernel() -> KernelMatrix {
        let grid = RadialGrid::new(0.1, 10.0, 24, 3).unwrap();
        assemble_kernel(&grid, 2.0).unwrap()
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let kernel = small_kernel();
        let blob = encode_kernel(&kernel);
        let back = decode_kernel(&blob).unwrap();
        assert_eq!(kernel.entries(), back.entries());
        assert_eq!(kernel.alpha(), back.alpha());
        assert_eq!(kernel.grid().len(), back.grid().len());
    }

    #[test]
    fn decoder_rejects_malformed_input() {
        let kernel = small_kernel();
        let blob = encode_kernel(&kernel);
        assert!(decode_kernel(&[]).is_err());
        assert!(decode_kernel(&blob[..40]).is_err());
        let mut bad_magic = blob.clone();
        bad_magic[0] = b'X';
        assert!(decode_kernel(&bad_magic).is_err());
        let mut truncated = blob.clone();
        truncated.truncate(blob.len() - 8);
        assert!(decode_kernel(&truncated).is_err());
        let mut nan = blob.clone();
        let last = nan.len() - 8;
        nan[last..].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(decode_kernel(&nan).is_err());
        // absurd m
        let mut big = blob.clone();
        big[16..24].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(decode_kernel(&big).is_err());
    }

    #[test]
    fn cache_dir_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Arc::clone(small_kernel().grid());
        let kernel = load_or_assemble(Some(dir.path()), &grid, 2.0).unwrap();
        let path = dir.path().join(cache_file_name(&grid, 2.0));
        assert!(path.exists());
        let again = load_or_assemble(Some(dir.path()), &grid, 2.0).unwrap();
        assert_eq!(kernel.entries(), again.entries());
        // corrupt the file: loader falls back to assembly and repairs it
        std::fs::write(&path, b"garbage").unwrap();
        let repaired = load_or_assemble(Some(dir.path()), &grid, 2.0).unwrap();
        assert_eq!(kernel.entries(), repaired.entries());
    }
}
