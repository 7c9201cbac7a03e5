use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use elastica::classify::{arclength_distance, validate_labels, ARCLENGTH_SAMPLES};
use elastica::samples;
use elastica::{
    forward, inverse, leave_one_out, match_curves, project_to_closed, shape_geodesic, ClassificationReport,
    DistanceMatrix, ElasticParams, GeodesicOptions, PlaneCurve, ProjectionOptions,
};

use crate::error::{in_file, CliError, CliResult};
use crate::io::{self, NamedCurve, Sample};
use crate::{svg, ElasticArgs, MatchArgs, Method};

/// Ratios `a/2b` swept by `classify --table`.
const TABLE_RATIOS: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 3.0, 4.0];

pub fn transform(input: &Path, p: ElasticParams, output: &Path) -> CliResult<()> {
    let c = io::read_curve(input)?;
    let q = forward(&c.curve, p);
    io::write_transform(output, &q)?;
    log::info!(
        "{}: {} segments written to {}",
        c.name,
        q.segment_count(),
        output.display()
    );
    Ok(())
}

pub fn invert(input: &Path, p: ElasticParams, output: &Path, name: Option<&str>) -> CliResult<()> {
    let q = io::read_transform(input, p)?;
    let c = in_file(input, inverse(&q))?;
    let fallback = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    io::write_curve(output, name.unwrap_or(&fallback), &c)
}

fn distance_of(m: &elastica::MatchResult, fixed_length: bool) -> f64 {
    if fixed_length {
        m.sphere_distance()
    } else {
        m.distance
    }
}

pub fn match_pair(
    first: &Path,
    second: &Path,
    p: ElasticParams,
    args: &MatchArgs,
    gamma: Option<&Path>,
) -> CliResult<()> {
    let c1 = io::read_curve(first)?;
    let c2 = io::read_curve(second)?;
    let m = match_curves(&c1.curve, &c2.curve, p, &args.options())?;
    println!("dist={:.4}", distance_of(&m, args.fixed_length));
    println!("rotation={:.6}", m.rotation);
    println!("seed={}", m.seed);
    println!("rounds={}", m.rounds);
    if let Some(path) = gamma {
        let rows = m
            .gamma
            .breakpoints()
            .iter()
            .zip(m.gamma.values())
            .map(|(t, g)| vec![format!("{t:?}"), format!("{g:?}")]);
        io::write_table(path, &["t", "gamma"], rows)?;
    }
    Ok(())
}

fn ensure_closed(c: NamedCurve) -> CliResult<NamedCurve> {
    if c.curve.is_closed() {
        return Ok(c);
    }
    let curve = PlaneCurve::closed_from_loop(c.curve.vertices().to_vec())?;
    Ok(NamedCurve { curve, ..c })
}

pub struct GeodesicRequest<'a> {
    pub first: &'a Path,
    pub second: &'a Path,
    pub params: ElasticParams,
    pub matching: MatchArgs,
    pub closed: bool,
    pub steps: usize,
    pub svg: Option<&'a Path>,
    pub out_dir: Option<&'a Path>,
}

pub fn geodesic(req: &GeodesicRequest) -> CliResult<()> {
    let mut c1 = io::read_curve(req.first)?;
    let mut c2 = io::read_curve(req.second)?;
    if req.closed {
        c1 = ensure_closed(c1)?;
        c2 = ensure_closed(c2)?;
    }
    if req.steps < 2 {
        return Err(CliError::input(format!(
            "--steps must be at least 2, got {}",
            req.steps
        )));
    }
    let opts = GeodesicOptions {
        steps: req.steps,
        fixed_length: req.matching.fixed_length,
        matching: req.matching.options(),
        ..GeodesicOptions::default()
    };
    let geo = shape_geodesic(&c1.curve, &c2.curve, req.params, &opts)?;
    let dist = geo.path.distance;
    println!("dist={dist:.4}");
    if geo.straightened {
        log::info!("path straightened in {} sweeps", geo.straightening_sweeps);
    }
    if let Some(dir) = req.out_dir {
        for (k, c) in geo.curves.iter().enumerate() {
            io::write_curve(
                &dir.join(format!("step_{k:02}.json")),
                &format!("{}-{}-{k}", c1.name, c2.name),
                c,
            )?;
        }
    }
    if let Some(path) = req.svg {
        let caption = format!(
            "{} to {}, a={}, b={}: dist={dist:.4}",
            c1.name,
            c2.name,
            req.params.a(),
            req.params.b()
        );
        io::write_string(path, &svg::geodesic_figure(&geo.curves, &geo.matching.gamma, &caption))?;
    }
    Ok(())
}

pub fn close(input: &Path, p: ElasticParams, output: &Path, tol: f64, max_iter: usize) -> CliResult<()> {
    if !(tol > 0.0) {
        return Err(CliError::input(format!("--tol must be positive, got {tol}")));
    }
    let c = io::read_curve(input)?;
    // Start along the positive axis so the inverse stays on the input's branch.
    let heading = c.curve.edge_vectors()[0].arg();
    let q = forward(&c.curve.rotate(-heading), p);
    let opts = ProjectionOptions {
        tol: Some(tol),
        max_iter,
    };
    let projected =
        project_to_closed(&q, opts).map_err(|f| CliError::Elastic(f.error, Some(input.display().to_string())))?;
    let open = inverse(&projected.q)?.rotate(heading).translate(c.curve.vertices()[0]);
    let mut vertices = open.vertices().to_vec();
    let last = vertices.len() - 1;
    vertices[last] = vertices[0];
    let closed = PlaneCurve::new(vertices, open.params().to_vec(), true)?;
    io::write_curve(output, &c.name, &closed)?;
    println!("residual={:.3e}", projected.residual);
    println!("iterations={}", projected.iterations);
    Ok(())
}

pub struct ClassifyRequest<'a> {
    pub root: &'a Path,
    pub elastic: ElasticArgs,
    pub matching: MatchArgs,
    pub method: Method,
    pub jobs: Option<usize>,
    pub matrix: Option<&'a Path>,
    pub report: Option<&'a Path>,
    pub table: bool,
}

/// Distance matrix for `method`, with the elastic one symmetrized. Also
/// returns the largest relative asymmetry before symmetrizing.
fn distance_matrix(
    set: &[Sample],
    method: Method,
    p: ElasticParams,
    args: &MatchArgs,
) -> CliResult<(DistanceMatrix, f64)> {
    let n = set.len();
    let opts = args.options();
    let entries = DistanceMatrix::off_diagonal(n)
        .into_par_iter()
        .map(|(i, j)| {
            let (a, b) = (&set[i].curve, &set[j].curve);
            let d = match method {
                Method::Elastic => {
                    match_curves(&a.curve, &b.curve, p, &opts).map(|m| distance_of(&m, args.fixed_length))
                }
                Method::Arclength => arclength_distance(&a.curve, &b.curve, ARCLENGTH_SAMPLES),
            };
            d.map(|d| (i, j, d))
                .map_err(|e| CliError::Elastic(e, Some(format!("{} vs {}", a.name, b.name))))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let raw = DistanceMatrix::from_entries(n, entries);
    let asymmetry = raw.max_asymmetry();
    Ok((raw.symmetrized(), asymmetry))
}

fn render_report(set: &[Sample], report: &ClassificationReport, header: &str, asymmetry: f64) -> String {
    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    writeln!(out, "samples: {}", set.len()).unwrap();
    writeln!(out, "classes: {}", report.per_class.len()).unwrap();
    writeln!(out, "overall: {:.2}%", 100.0 * report.overall).unwrap();
    writeln!(out, "perfect classes: {} / {}", report.perfect, report.per_class.len()).unwrap();
    writeln!(out, "max asymmetry before symmetrizing: {:.2}%", 100.0 * asymmetry).unwrap();
    for (label, rate) in &report.per_class {
        writeln!(out, "class {label}: {:.2}%", 100.0 * rate).unwrap();
    }
    for (i, s) in set.iter().enumerate() {
        if report.predictions[i] != s.label {
            let j = report.neighbors[i];
            writeln!(
                out,
                "misclassified: {}/{} -> {} (nearest {}/{})",
                s.label, s.curve.name, report.predictions[i], set[j].label, set[j].curve.name
            )
            .unwrap();
        }
    }
    out
}

pub fn classify(req: &ClassifyRequest) -> CliResult<()> {
    let set = io::read_dataset(req.root)?;
    let labels: Vec<String> = set.iter().map(|s| s.label.clone()).collect();
    validate_labels(&labels)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    pool.install(|| {
        if req.table {
            return rate_table(req, &set, &labels);
        }
        let p = req.elastic.params()?;
        let (matrix, asymmetry) = distance_matrix(&set, req.method, p, &req.matching)?;
        let report = leave_one_out(&matrix, &labels)?;
        let header = match req.method {
            Method::Elastic => format!(
                "method: elastic (a={}, b={}, fixed length {})",
                p.a(),
                p.b(),
                req.matching.fixed_length
            ),
            Method::Arclength => "method: arclength".to_string(),
        };
        let text = render_report(&set, &report, &header, asymmetry);
        print!("{text}");
        if let Some(path) = req.report {
            io::write_string(path, &text)?;
        }
        if let Some(path) = req.matrix {
            write_matrix(path, &set, &matrix)?;
        }
        Ok(())
    })
}

fn write_matrix(path: &Path, set: &[Sample], m: &DistanceMatrix) -> CliResult<()> {
    let names: Vec<String> = set.iter().map(|s| format!("{}/{}", s.label, s.curve.name)).collect();
    let mut header = vec!["sample"];
    header.extend(names.iter().map(String::as_str));
    let rows = names.iter().enumerate().map(|(i, name)| {
        std::iter::once(name.clone())
            .chain(m.row(i).iter().map(|d| format!("{d:?}")))
            .collect()
    });
    io::write_table(path, &header, rows)
}

fn rate_table(req: &ClassifyRequest, set: &[Sample], labels: &[String]) -> CliResult<()> {
    let mut rows = Vec::new();
    for rho in TABLE_RATIOS {
        let p = ElasticParams::from_ratio(rho)?;
        let (matrix, _) = distance_matrix(set, Method::Elastic, p, &req.matching)?;
        let report = leave_one_out(&matrix, labels)?;
        rows.push((format!("{rho}"), report));
    }
    let (matrix, _) = distance_matrix(set, Method::Arclength, ElasticParams::srvf(), &req.matching)?;
    rows.push(("arclength".to_string(), leave_one_out(&matrix, labels)?));
    let classes = rows[0].1.per_class.len();
    let mut text = format!("{:<10} {:>8} {:>8}\n", "a/2b", "overall", "perfect");
    for (name, report) in &rows {
        writeln!(
            text,
            "{name:<10} {:>7.2}% {:>4} / {classes}",
            100.0 * report.overall,
            report.perfect
        )
        .unwrap();
    }
    print!("{text}");
    if let Some(path) = req.report {
        io::write_string(path, &text)?;
    }
    Ok(())
}

fn ingest_one(source: &Path, closed: bool, resample: Option<usize>) -> CliResult<PlaneCurve> {
    let mut points = io::parse_point_list(source)?;
    let curve = if closed {
        if points.len() > 2 && points.first() == points.last() {
            points.pop();
        }
        in_file(source, PlaneCurve::closed_from_loop(points))?
    } else {
        in_file(source, PlaneCurve::from_vertices(points, false))?
    };
    match resample {
        Some(n) => in_file(source, curve.resample_arclength(n)),
        None => Ok(curve),
    }
}

pub fn ingest(input: &Path, output: &Path, closed: bool, resample: Option<usize>) -> CliResult<()> {
    let stem = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    if input.is_dir() {
        let sources = io::dataset_sources(input)?;
        if sources.is_empty() {
            return Err(CliError::input(format!(
                "{}: no class subdirectories with files",
                input.display()
            )));
        }
        for (label, source) in &sources {
            let curve = ingest_one(source, closed, resample)?;
            let name = stem(source);
            io::write_curve(&output.join(label).join(format!("{name}.json")), &name, &curve)?;
        }
        println!("ingested {} curves", sources.len());
        return Ok(());
    }
    let curve = ingest_one(input, closed, resample)?;
    io::write_curve(output, &stem(input), &curve)
}

fn catalog() -> Vec<(&'static str, PlaneCurve)> {
    let mut out = vec![
        ("horseshoe", samples::horseshoe(48)),
        ("hook", samples::hook(40)),
        ("wave", samples::wave(48, 0.12, 2.0)),
        ("spiral", samples::spiral(56, 1.2)),
        ("arc", samples::arc(32, 2.5)),
        ("stroke", samples::stroke(44)),
        ("circle", samples::circle(48)),
        ("square", samples::square(48)),
    ];
    out.extend(samples::closed_shapes());
    out
}

const DATASETS: [&str; 2] = ["circles-squares", "bumps"];

pub fn sample(name: Option<&str>, output: Option<&Path>, list: bool, seed: u64, per_class: usize) -> CliResult<()> {
    let curves = catalog();
    if list {
        for (n, c) in &curves {
            println!(
                "{n:<12} {} curve, {} segments",
                if c.is_closed() { "closed" } else { "open" },
                c.segment_count()
            );
        }
        for d in DATASETS {
            println!("{d:<12} dataset");
        }
        return Ok(());
    }
    let name = name.ok_or_else(|| CliError::input("sample name required (see --list)"))?;
    if DATASETS.contains(&name) {
        let dir = output.ok_or_else(|| CliError::input("datasets need --output <dir>"))?;
        let set = if name == "bumps" {
            samples::bump_classes(per_class, 60, seed)
        } else {
            samples::circles_and_squares(per_class, 32, seed)
        };
        for s in &set {
            io::write_curve(&dir.join(&s.label).join(format!("{}.json", s.name)), &s.name, &s.curve)?;
        }
        return Ok(());
    }
    let (_, curve) = curves
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::input(format!("unknown sample '{name}' (see --list)")))?;
    match output {
        Some(path) => io::write_curve(path, name, &curve),
        None => {
            let file = io::CurveFile::from_curve(name, &curve);
            println!(
                "{}",
                serde_json::to_string_pretty(&file).expect("curve files serialize")
            );
            Ok(())
        }
    }
}
