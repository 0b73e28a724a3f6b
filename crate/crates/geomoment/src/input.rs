//! Reading point clouds from CSV and voxel grids from JSON.

use std::path::Path;

use geomoment_core::{PointCloud, WeightedPoint};

use crate::error::{AppError, Location, Result};
use crate::json::voxel_from_str;

/// Parses `x,y,z[,w]` CSV with a header row; `w` defaults to 1.
pub fn parse_point_csv(src: &str, path: &str) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(src.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| AppError::parse(path, Location { line: Some(1), ..Default::default() }, e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let header_error = |msg: String| AppError::parse(path, Location { line: Some(1), byte: Some(0), row: None }, msg);
    let (Some(x), Some(y), Some(z)) = (column("x"), column("y"), column("z")) else {
        return Err(header_error(format!("header must name columns x,y,z[,w], found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    };
    let w = column("w");
    if let Some(extra) = headers.iter().find(|h| !["x", "y", "z", "w"].contains(h)) {
        return Err(header_error(format!("unexpected column `{extra}`")));
    }
    let mut points = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        let row = n as u64 + 1;
        let record = record.map_err(|e| {
            let pos = e.position();
            let location =
                Location { line: pos.map(|p| p.line()), byte: pos.map(|p| p.byte()), row: Some(row) };
            AppError::parse(path, location, e.to_string())
        })?;
        let pos = record.position();
        let location = Location { line: pos.map(|p| p.line()), byte: pos.map(|p| p.byte()), row: Some(row) };
        let field = |i: usize, name: &str| -> Result<f64> {
            let s = record.get(i).unwrap_or("");
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(AppError::parse(path, location.clone(), format!("column {name}: `{s}` is not a finite number"))),
            }
        };
        let weight = match w {
            Some(i) => field(i, "w")?,
            None => 1.0,
        };
        points.push(WeightedPoint::new(field(x, "x")?, field(y, "y")?, field(z, "z")?, weight));
    }
    Ok(PointCloud::new(points))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| AppError::Io { path: path.display().to_string(), source })
}

/// Loads `.csv` point clouds and `.json` voxel grids (as their cell-center
/// point clouds).
pub fn load_cloud(path: &Path) -> Result<PointCloud> {
    let shown = path.display().to_string();
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("csv") => parse_point_csv(&read(path)?, &shown),
        Some("json") => {
            let grid = voxel_from_str(&read(path)?).map_err(|(pos, msg)| {
                let location = Location { line: pos.map(|p| p.0 as u64), ..Default::default() };
                AppError::parse(&shown, location, msg)
            })?;
            Ok(grid.to_point_cloud())
        }
        _ => Err(AppError::Usage(format!("{shown}: unrecognized input format, expected .csv or .json"))),
    }
}
