//! Curve and transform files.
//!
//! Curves are JSON `{name, closed, vertices: [[x, y], ...], params?}` or a
//! two-column `x,y` CSV. Transforms are CSV rows `t,re,im`, one per
//! segment, keyed by the segment's left breakpoint.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use elastica::{ElasticParams, PlaneCurve, TransformedCurve};

use crate::error::{in_file, CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub name: String,
    #[serde(default)]
    pub closed: bool,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
}

impl CurveFile {
    pub fn from_curve(name: &str, c: &PlaneCurve) -> Self {
        Self {
            name: name.to_string(),
            closed: c.is_closed(),
            vertices: c.vertices().iter().map(|z| [z.re, z.im]).collect(),
            params: Some(c.params().to_vec()),
        }
    }

    pub fn to_curve(&self) -> elastica::Result<PlaneCurve> {
        let vertices: Vec<Complex64> = self.vertices.iter().map(|&[x, y]| Complex64::new(x, y)).collect();
        match (&self.params, self.closed) {
            (Some(params), closed) => PlaneCurve::new(vertices, params.clone(), closed),
            (None, true) => PlaneCurve::closed_from_loop(vertices),
            (None, false) => PlaneCurve::from_vertices(vertices, false),
        }
    }
}

/// A curve read from disk, named after the file when the file has no name.
#[derive(Debug, Clone)]
pub struct NamedCurve {
    pub name: String,
    pub curve: PlaneCurve,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads a JSON or CSV curve file.
pub fn read_curve(path: &Path) -> CliResult<NamedCurve> {
    let text = read_text(path)?;
    let file = if is_csv(path) {
        parse_xy_csv(path, &text)?
    } else {
        serde_json::from_str::<CurveFile>(&text).map_err(|e| CliError::io(path, e))?
    };
    let curve = in_file(path, file.to_curve())?;
    let name = if file.name.is_empty() { stem(path) } else { file.name };
    Ok(NamedCurve { name, curve })
}

/// Two numeric columns, with an optional header row. A final row equal to
/// the first marks the curve closed.
fn parse_xy_csv(path: &Path, text: &str) -> CliResult<CurveFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut vertices = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let parsed: Option<Vec<f64>> = record.iter().take(2).map(|f| f.parse().ok()).collect();
        match parsed {
            Some(xy) if xy.len() == 2 => vertices.push([xy[0], xy[1]]),
            _ if row == 0 => continue,
            _ => return Err(CliError::io(path, format!("row {}: expected two numbers", row + 1))),
        }
    }
    let closed = vertices.len() > 3 && vertices.first() == vertices.last();
    Ok(CurveFile {
        name: stem(path),
        closed,
        vertices,
        params: None,
    })
}

pub fn write_curve(path: &Path, name: &str, c: &PlaneCurve) -> CliResult<()> {
    let json = serde_json::to_string_pretty(&CurveFile::from_curve(name, c)).expect("curve files serialize");
    write_text(path, &(json + "\n"))
}

pub fn write_transform(path: &Path, q: &TransformedCurve) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "re", "im"]).expect("in-memory csv");
    for (t, z) in q.params().iter().zip(q.samples()) {
        w.serialize((t, z.re, z.im)).expect("in-memory csv");
    }
    write_text(
        path,
        &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8"),
    )
}

pub fn read_transform(path: &Path, p: ElasticParams) -> CliResult<TransformedCurve> {
    let text = read_text(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut params = Vec::new();
    let mut samples = Vec::new();
    for record in reader.deserialize::<(f64, f64, f64)>() {
        let (t, re, im) = record.map_err(|e| CliError::io(path, e))?;
        params.push(t);
        samples.push(Complex64::new(re, im));
    }
    params.push(1.0);
    in_file(path, TransformedCurve::new(samples, params, p))
}

/// Writes CSV rows under a header.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    write_text(
        path,
        &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8"),
    )
}

pub fn write_string(path: &Path, text: &str) -> CliResult<()> {
    write_text(path, text)
}

/// Points from a whitespace-delimited text file: the first two numbers of
/// every line with at least two numeric fields. Header lines, count lines
/// and `#` comments are skipped, as are exact repeats of the previous point.
pub fn parse_point_list(path: &Path) -> CliResult<Vec<Complex64>> {
    let text = read_text(path)?;
    let mut points: Vec<Complex64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .map_while(|f| f.parse().ok())
            .collect();
        if fields.len() < 2 {
            continue;
        }
        let z = Complex64::new(fields[0], fields[1]);
        if points.last() != Some(&z) {
            points.push(z);
        }
    }
    if points.len() < 2 {
        return Err(CliError::io(path, format!("found {} usable points", points.len())));
    }
    Ok(points)
}

/// One labeled sample of a dataset.
#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub curve: NamedCurve,
}

fn sorted_entries(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| CliError::io(dir, err)))
        .collect::<CliResult<_>>()?;
    entries.sort();
    Ok(entries)
}

fn is_curve_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json") || e.eq_ignore_ascii_case("csv"))
}

/// Reads `root/<class>/<sample>.{json,csv}` in sorted order.
pub fn read_dataset(root: &Path) -> CliResult<Vec<Sample>> {
    if !root.is_dir() {
        return Err(CliError::input(format!("{}: not a directory", root.display())));
    }
    let mut out = Vec::new();
    for class_dir in sorted_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let label = class_dir.file_name().unwrap().to_string_lossy().into_owned();
        for file in sorted_entries(&class_dir)?.into_iter().filter(|p| is_curve_file(p)) {
            out.push(Sample {
                label: label.clone(),
                curve: read_curve(&file)?,
            });
        }
    }
    if out.is_empty() {
        return Err(CliError::input(format!(
            "{}: no curve files found; expected one subdirectory per class",
            root.display()
        )));
    }
    Ok(out)
}

/// Files under `root`, one level of class directories deep, for ingestion.
pub fn dataset_sources(root: &Path) -> CliResult<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for class_dir in sorted_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let label = class_dir.file_name().unwrap().to_string_lossy().into_owned();
        for file in sorted_entries(&class_dir)?.into_iter().filter(|p| p.is_file()) {
            out.push((label.clone(), file));
        }
    }
    Ok(out)
}
