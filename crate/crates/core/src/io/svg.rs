//! Static scatter plots of a clustering.
//!
//! Cluster `k` (in representative order) is drawn with colour
//! `PALETTE[k % 12]` and one of four marker shapes; representatives are
//! overdrawn with black crosses.

use std::fmt::Write as _;
use std::path::Path;

use crate::clustering::ClusteringResult;
use crate::domain::PointCloud;
use crate::error::{Error, Result};

use super::write_atomic;

pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 24.0;
const R: f64 = 4.0;

fn marker(shape: usize, x: f64, y: f64, colour: &str, cluster: usize) -> String {
    let attrs = format!("class=\"point\" data-cluster=\"{cluster}\" fill=\"{colour}\"");
    match shape {
        0 => format!("<circle {attrs} cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{R}\"/>"),
        1 => format!(
            "<rect {attrs} x=\"{:.3}\" y=\"{:.3}\" width=\"{}\" height=\"{}\"/>",
            x - R,
            y - R,
            2.0 * R,
            2.0 * R
        ),
        2 => format!(
            "<polygon {attrs} points=\"{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}\"/>",
            x,
            y - R,
            x - R,
            y + R,
            x + R,
            y + R
        ),
        _ => format!(
            "<polygon {attrs} points=\"{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}\"/>",
            x,
            y - R,
            x + R,
            y,
            x,
            y + R,
            x - R,
            y
        ),
    }
}

/// Renders the plot as a standalone SVG document.
pub fn render_scatter_svg(points: &PointCloud, result: &ClusteringResult) -> Result<String> {
    if points.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "scatter plots need 2-D points, got dimension {}; project the data first",
            points.dim()
        )));
    }
    if result.assignment.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: result.assignment.len(),
        });
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points.points() {
        xmin = xmin.min(p[0]);
        xmax = xmax.max(p[0]);
        ymin = ymin.min(p[1]);
        ymax = ymax.max(p[1]);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
    let scale = ((WIDTH - 2.0 * MARGIN) / span).min((HEIGHT - 2.0 * MARGIN) / span);
    let to_screen = |p: &[f64]| {
        (
            MARGIN + (p[0] - xmin) * scale,
            HEIGHT - MARGIN - (p[1] - ymin) * scale,
        )
    };

    let labels = result.labels();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (p, &k) in points.points().iter().zip(&labels) {
        let (x, y) = to_screen(p);
        let _ = writeln!(out, "{}", marker((k / PALETTE.len()) % 4, x, y, PALETTE[k % PALETTE.len()], k));
    }
    for &r in &result.representatives {
        let (x, y) = to_screen(points.point(r));
        let d = 1.8 * R;
        let _ = writeln!(
            out,
            "<path class=\"representative\" d=\"M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}\" stroke=\"black\" stroke-width=\"2\"/>",
            x - d,
            y - d,
            x + d,
            y + d,
            x - d,
            y + d,
            x + d,
            y - d
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_scatter_svg(points: &PointCloud, result: &ClusteringResult, path: &Path) -> Result<()> {
    write_atomic(path, render_scatter_svg(points, result)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clustering(assignment: Vec<usize>) -> ClusteringResult {
        let mut reps = assignment.clone();
        reps.sort_unstable();
        reps.dedup();
        ClusteringResult {
            cluster_count: reps.len(),
            representatives: reps,
            assignment,
            empty_rows: vec![],
        }
    }

    #[test]
    fn one_point_one_cross() {
        let cloud = PointCloud::new(vec![vec![1.0, 2.0]]).unwrap();
        let svg = render_scatter_svg(&cloud, &clustering(vec![0])).unwrap();
        assert_eq!(svg.matches("class=\"point\"").count(), 1);
        assert_eq!(svg.matches("class=\"representative\"").count(), 1);
    }

    #[test]
    fn four_clusters_four_styles() {
        let cloud = PointCloud::new((0..8).map(|i| vec![i as f64, 0.0]).collect()).unwrap();
        let svg = render_scatter_svg(&cloud, &clustering(vec![0, 0, 2, 2, 4, 4, 6, 6])).unwrap();
        let used = PALETTE.iter().filter(|c| svg.contains(*c)).count();
        assert_eq!(used, 4);
    }

    #[test]
    fn refuses_three_dimensions() {
        let cloud = PointCloud::new(vec![vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(render_scatter_svg(&cloud, &clustering(vec![0])).is_err());
    }
}
