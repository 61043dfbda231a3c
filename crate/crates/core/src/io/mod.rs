//! File formats: CSV point clouds, JSON reports, SVG scatter plots.
//!
//! Every writer goes through [`write_atomic`], so a crashed or concurrent
//! run never leaves a half-written file behind.

mod json;
mod points;
mod svg;

use std::io::Write;
use std::path::Path;

pub use json::{to_canonical_json, write_json};
pub use points::{read_points, read_points_from, write_points, write_points_to};
pub use svg::{emit_scatter_svg, render_scatter_svg, PALETTE};

use crate::error::{Error, Result};

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
