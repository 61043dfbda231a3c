//! CSV point clouds with header `x0,...,x{d-1}[,label]`.
//!
//! Coordinates are written with 17 significant digits, which is enough for
//! every `f64` to survive a write/read cycle unchanged.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::domain::PointCloud;
use crate::error::{Error, Result};

use super::write_atomic;

pub fn read_points(path: &Path) -> Result<PointCloud> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_points_from(file, path)
}

/// Parses a cloud; `origin` only labels error messages.
pub fn read_points_from(reader: impl Read, origin: &Path) -> Result<PointCloud> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: PathBuf::from(origin),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    let has_label = names.last() == Some(&"label");
    let dim = names.len() - usize::from(has_label);
    if dim == 0 {
        return Err(parse_err(1, "header names no coordinate columns".into()));
    }
    for (k, name) in names[..dim].iter().enumerate() {
        if *name != format!("x{k}") {
            return Err(parse_err(1, format!("expected column x{k}, found {name:?}")));
        }
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != names.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", names.len(), record.len()),
            ));
        }
        let mut p = Vec::with_capacity(dim);
        for cell in record.iter().take(dim) {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(line, format!("not a number: {cell:?}")))?;
            p.push(v);
        }
        points.push(p);
        if has_label {
            let cell = &record[dim];
            labels.push(
                cell.parse()
                    .map_err(|_| parse_err(line, format!("not a label: {cell:?}")))?,
            );
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("point file"));
    }
    if has_label {
        PointCloud::with_labels(points, labels)
    } else {
        PointCloud::new(points)
    }
}

pub fn write_points(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut buf = Vec::new();
    write_points_to(&mut buf, cloud)?;
    write_atomic(path, &buf)
}

pub fn write_points_to(mut out: impl Write, cloud: &PointCloud) -> Result<()> {
    let mut text = String::new();
    let header: Vec<String> = (0..cloud.dim()).map(|k| format!("x{k}")).collect();
    text.push_str(&header.join(","));
    if cloud.labels().is_some() {
        text.push_str(",label");
    }
    text.push('\n');
    for (i, p) in cloud.points().iter().enumerate() {
        let cells: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
        text.push_str(&cells.join(","));
        if let Some(labels) = cloud.labels() {
            text.push_str(&format!(",{}", labels[i]));
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<points output>", e))
}
