//! Field snapshots: a flat little-endian binary file plus a JSON sidecar.
//!
//! Binary layout: 8-byte magic `MBIFLD01`, three `u64` dims, `f64` spacing,
//! `f64` time, `f64` beta, then the six component arrays `Bx By Bz Dx Dy Dz`
//! as `f64`, each in x-fastest order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aether3d::lattice::{Diagnostics, FieldLattice};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"MBIFLD01";
pub const SNAPSHOT_HEADER_BYTES: usize = 8 + 3 * 8 + 3 * 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMetadata {
    pub format: String,
    pub binary_file: String,
    pub byte_order: String,
    pub header_bytes: usize,
    pub dims: [usize; 3],
    pub spacing: f64,
    pub time: f64,
    pub beta: f64,
    pub components: Vec<String>,
    pub diagnostics: Diagnostics,
    pub library_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

/// Paths `<base>.bin` and `<base>.json`.
pub fn snapshot_paths(base: &Path) -> (PathBuf, PathBuf) {
    (base.with_extension("bin"), base.with_extension("json"))
}

/// Write both files and return the sidecar contents.
pub fn write_snapshot<T: Real>(
    lattice: &FieldLattice<T>,
    base: &Path,
    config_hash: Option<&str>,
) -> Result<SnapshotMetadata> {
    let (bin, side) = snapshot_paths(base);
    let mut w = BufWriter::new(File::create(&bin)?);
    w.write_all(SNAPSHOT_MAGIC)?;
    for n in lattice.dims() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    for x in [lattice.h, lattice.time, lattice.beta] {
        w.write_all(&x.to_f64_lossy().to_le_bytes())?;
    }
    for field in [&lattice.b, &lattice.d] {
        for c in 0..3 {
            for v in field.iter() {
                w.write_all(&v[c].to_f64_lossy().to_le_bytes())?;
            }
        }
    }
    w.flush()?;

    let meta = SnapshotMetadata {
        format: "mbi-field-snapshot".into(),
        binary_file: bin
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        byte_order: "little-endian".into(),
        header_bytes: SNAPSHOT_HEADER_BYTES,
        dims: lattice.dims(),
        spacing: lattice.h.to_f64_lossy(),
        time: lattice.time.to_f64_lossy(),
        beta: lattice.beta.to_f64_lossy(),
        components: ["Bx", "By", "Bz", "Dx", "Dy", "Dz"]
            .map(String::from)
            .to_vec(),
        diagnostics: lattice.diagnostics(),
        library_version: crate::VERSION.into(),
        config_hash: config_hash.map(String::from),
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(&side)?), &meta)?;
    Ok(meta)
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

/// Read the binary file written by [`write_snapshot`].
pub fn read_snapshot(path: &Path) -> Result<FieldLattice<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::Invalid(format!(
            "{} is not a field snapshot",
            path.display()
        )));
    }
    let mut dims = [0usize; 3];
    for n in dims.iter_mut() {
        *n = usize::try_from(read_u64(&mut r)?)
            .map_err(|_| Error::Invalid("snapshot dimension overflows usize".into()))?;
    }
    let (h, time, beta) = (read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?);
    let mut lat = FieldLattice::new(dims, h, beta)?;
    lat.time = time;
    for field in [&mut lat.b, &mut lat.d] {
        for c in 0..3 {
            for v in field.iter_mut() {
                v[c] = read_f64(&mut r)?;
            }
        }
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Invalid(
            "trailing bytes after snapshot payload".into(),
        ));
    }
    Ok(lat)
}
