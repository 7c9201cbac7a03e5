//! Deterministic example curves and synthetic labeled datasets.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::PlaneCurve;

fn open_from_fn<F: Fn(f64) -> Complex64>(n: usize, f: F) -> PlaneCurve {
    let vertices = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
    PlaneCurve::from_vertices(vertices, false).expect("sample curves have distinct vertices")
}

fn closed_from_fn<F: Fn(f64) -> Complex64>(n: usize, f: F) -> PlaneCurve {
    let vertices = (0..n).map(|i| f(i as f64 / n as f64)).collect();
    PlaneCurve::closed_from_loop(vertices).expect("sample curves have distinct vertices")
}

/// Circular arc through `sweep` radians.
pub fn arc(n: usize, sweep: f64) -> PlaneCurve {
    open_from_fn(n, |s| Complex64::from_polar(1.0, sweep * (s - 0.5)))
}

/// U-shaped open curve.
pub fn horseshoe(n: usize) -> PlaneCurve {
    open_from_fn(n, |s| {
        let phi = PI * (0.15 + 1.7 * s);
        Complex64::new(phi.cos(), 1.4 * phi.sin())
    })
}

/// Sine wave over the unit interval.
pub fn wave(n: usize, amplitude: f64, frequency: f64) -> PlaneCurve {
    open_from_fn(n, |s| Complex64::new(s, amplitude * (TAU * frequency * s).sin()))
}

/// Archimedean spiral with the given number of turns.
pub fn spiral(n: usize, turns: f64) -> PlaneCurve {
    open_from_fn(n, |s| Complex64::from_polar(0.2 + s, TAU * turns * s))
}

/// Straight shank ending in a curl.
pub fn hook(n: usize) -> PlaneCurve {
    open_from_fn(n, |s| {
        if s < 0.5 {
            Complex64::new(0.0, 2.0 * (0.5 - s))
        } else {
            let phi = PI * 2.4 * (s - 0.5);
            Complex64::new(0.3 - 0.3 * phi.cos(), -0.3 * phi.sin())
        }
    })
}

/// Stylized script stroke: a loop-free cursive "l e".
pub fn stroke(n: usize) -> PlaneCurve {
    open_from_fn(n, |s| {
        let x = 1.5 * s;
        Complex64::new(
            x + 0.12 * (3.0 * TAU * s).sin(),
            0.35 * (2.0 * TAU * s).sin() * (1.0 - 0.5 * s),
        )
    })
}

/// Gaussian bumps on a baseline; `bumps` holds `(center, height)`.
pub fn bumpy_line(n: usize, bumps: &[(f64, f64)], width: f64) -> PlaneCurve {
    open_from_fn(n, |s| {
        let y: f64 = bumps.iter().map(|&(c, h)| h * (-((s - c) / width).powi(2)).exp()).sum();
        Complex64::new(s, y)
    })
}

pub fn circle(n: usize) -> PlaneCurve {
    closed_from_fn(n, |s| Complex64::from_polar(1.0, TAU * s))
}

pub fn ellipse(n: usize, ratio: f64) -> PlaneCurve {
    closed_from_fn(n, |s| Complex64::new((TAU * s).cos(), ratio * (TAU * s).sin()))
}

/// Axis-aligned square with `n` vertices spread evenly along the perimeter.
pub fn square(n: usize) -> PlaneCurve {
    closed_from_fn(n, square_point)
}

fn square_point(s: f64) -> Complex64 {
    let u = 4.0 * s.rem_euclid(1.0);
    let side = (u.floor() as usize).min(3);
    let f = u - side as f64;
    match side {
        0 => Complex64::new(-1.0 + 2.0 * f, -1.0),
        1 => Complex64::new(1.0, -1.0 + 2.0 * f),
        2 => Complex64::new(1.0 - 2.0 * f, 1.0),
        _ => Complex64::new(-1.0, 1.0 - 2.0 * f),
    }
}

/// Radial flower with `petals` lobes of relative depth `depth`.
pub fn flower(n: usize, petals: usize, depth: f64) -> PlaneCurve {
    closed_from_fn(n, |s| {
        Complex64::from_polar(1.0 + depth * (petals as f64 * TAU * s).cos(), TAU * s)
    })
}

/// Star polygon outline with `points` tips.
pub fn star(n: usize, points: usize) -> PlaneCurve {
    closed_from_fn(n, |s| {
        let phase = (points as f64 * s).fract();
        let r = 0.45 + 0.55 * (1.0 - 2.0 * (phase - 0.5).abs());
        Complex64::from_polar(r, TAU * s)
    })
}

/// Bone: a bar with rounded knobs at both ends.
pub fn bone(n: usize) -> PlaneCurve {
    closed_from_fn(n, |s| {
        let phi = TAU * s;
        let knob = 0.35 * (2.0 * phi).cos().powi(2) * (1.0 + (4.0 * phi).cos()) * 0.5;
        Complex64::new(1.6 * phi.cos(), (0.35 + knob) * phi.sin())
    })
}

/// Heart outline.
pub fn heart(n: usize) -> PlaneCurve {
    closed_from_fn(n, |s| {
        let t = TAU * s;
        Complex64::new(
            -16.0 * t.sin().powi(3),
            13.0 * t.cos() - 5.0 * (2.0 * t).cos() - 2.0 * (3.0 * t).cos() - (4.0 * t).cos(),
        ) / 16.0
    })
}

/// Pointed leaf outline.
pub fn leaf(n: usize) -> PlaneCurve {
    closed_from_fn(n, |s| {
        let t = TAU * s;
        Complex64::from_polar(1.0 + 0.35 * t.cos() + 0.12 * (3.0 * t).cos(), t)
    })
}

/// A named pair of curves.
#[derive(Debug, Clone)]
pub struct CurvePair {
    pub name: &'static str,
    pub first: PlaneCurve,
    pub second: PlaneCurve,
}

fn pair(name: &'static str, first: PlaneCurve, second: PlaneCurve) -> CurvePair {
    CurvePair { name, first, second }
}

/// Two dissimilar open pairs used for comparing distances across `rho`.
pub fn figure_pairs() -> Vec<CurvePair> {
    vec![
        pair("horseshoe-hook", horseshoe(48), hook(40)),
        pair("wave-spiral", wave(48, 0.12, 2.0), spiral(56, 1.2)),
    ]
}

/// Open pairs spanning a range of shapes and samplings.
pub fn open_pairs() -> Vec<CurvePair> {
    vec![
        pair("horseshoe-hook", horseshoe(48), hook(40)),
        pair("wave-spiral", wave(48, 0.12, 2.0), spiral(56, 1.2)),
        pair("arc-arc", arc(24, 1.0), arc(30, 2.5)),
        pair("wave-wave", wave(32, 0.1, 1.0), wave(40, 0.2, 1.5)),
        pair("stroke-wave", stroke(50), wave(36, 0.15, 2.0)),
        pair("hook-arc", hook(36), arc(28, 3.5)),
        pair("spiral-spiral", spiral(40, 0.8), spiral(52, 1.5)),
        pair(
            "bumps",
            bumpy_line(40, &[(0.3, 0.2)], 0.08),
            bumpy_line(44, &[(0.6, 0.25)], 0.08),
        ),
        pair("horseshoe-arc", horseshoe(36), arc(36, 4.0)),
        pair("stroke-spiral", stroke(44), spiral(44, 1.0)),
    ]
}

/// Closed outlines for demonstrations.
pub fn closed_shapes() -> Vec<(&'static str, PlaneCurve)> {
    vec![
        ("bone", bone(64)),
        ("flower5", flower(64, 5, 0.25)),
        ("flower3", flower(60, 3, 0.3)),
        ("star", star(60, 5)),
        ("heart", heart(64)),
        ("leaf", leaf(64)),
        ("ellipse", ellipse(48, 0.6)),
    ]
}

/// A curve with its class label.
#[derive(Debug, Clone)]
pub struct LabeledCurve {
    pub label: String,
    pub name: String,
    pub curve: PlaneCurve,
}

/// Random similarity transform of `vertices`.
fn jitter_pose(rng: &mut ChaCha8Rng, vertices: &mut [Complex64]) {
    let rotation = Complex64::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(0.0..TAU));
    let shift = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    vertices.iter_mut().for_each(|z| *z = *z * rotation + shift);
}

/// Jittered circles and squares, `per_class` of each, closed with `vertices` points.
pub fn circles_and_squares(per_class: usize, vertices: usize, seed: u64) -> Vec<LabeledCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * per_class);
    for (label, shape) in [("circle", 0), ("square", 1)] {
        for i in 0..per_class {
            let offset: f64 = rng.gen_range(0.0..1.0);
            let mut pts: Vec<Complex64> = (0..vertices)
                .map(|j| {
                    let s = (j as f64 + offset) / vertices as f64;
                    let base = if shape == 0 {
                        Complex64::from_polar(1.0, TAU * s)
                    } else {
                        square_point(s)
                    };
                    base * (1.0 + rng.gen_range(-0.03..0.03))
                })
                .collect();
            jitter_pose(&mut rng, &mut pts);
            out.push(LabeledCurve {
                label: label.to_string(),
                name: format!("{label}{i:02}"),
                curve: PlaneCurve::closed_from_loop(pts).expect("jittered outlines are valid"),
            });
        }
    }
    out
}

/// Monotone warp of `[0, 1]` used to perturb sampling.
fn random_warp(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let k = rng.gen_range(1..=3) as f64;
    let amp = rng.gen_range(-0.9..0.9) / (k * PI);
    move |s: f64| s + amp * (k * PI * s).sin()
}

/// Open curves with one narrow bump versus two, at random positions and
/// heights, sampled through random monotone warps.
pub fn bump_classes(per_class: usize, vertices: usize, seed: u64) -> Vec<LabeledCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = 0.035;
    let mut out = Vec::with_capacity(2 * per_class);
    for (label, count) in [("one", 1), ("two", 2)] {
        for i in 0..per_class {
            let bumps: Vec<(f64, f64)> = if count == 1 {
                vec![(rng.gen_range(0.3..0.7), rng.gen_range(0.12..0.2))]
            } else {
                let first = rng.gen_range(0.28..0.45);
                let second = first + rng.gen_range(0.2..0.3);
                vec![(first, rng.gen_range(0.12..0.2)), (second, rng.gen_range(0.12..0.2))]
            };
            let warp = random_warp(&mut rng);
            let pts: Vec<Complex64> = (0..=vertices)
                .map(|j| {
                    let s = warp(j as f64 / vertices as f64);
                    let y: f64 = bumps.iter().map(|&(c, h)| h * (-((s - c) / width).powi(2)).exp()).sum();
                    Complex64::new(s, y)
                })
                .collect();
            out.push(LabeledCurve {
                label: label.to_string(),
                name: format!("{label}{i:02}"),
                curve: PlaneCurve::from_vertices(pts, false).expect("bump curves are valid"),
            });
        }
    }
    out
}

/// Random open PL curve with `segments` edges, exterior angles below
/// `max_angle`, edge lengths in `[0.5, 1.5]` and random breakpoints.
///
/// The first edge points within 1.4 rad of the positive real axis, so the
/// canonical branch is recovered by the inverse for every `rho < pi / 1.4`.
pub fn random_open_curve<R: Rng>(rng: &mut R, segments: usize, max_angle: f64) -> PlaneCurve {
    let mut z = Complex64::new(0.0, 0.0);
    let mut heading: f64 = rng.gen_range(-1.4..1.4);
    let mut vertices = vec![z];
    for j in 0..segments {
        if j > 0 {
            heading += rng.gen_range(-max_angle..max_angle);
        }
        z += Complex64::from_polar(rng.gen_range(0.5..1.5), heading);
        vertices.push(z);
    }
    let mut params: Vec<f64> = (0..segments).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = params.iter().sum();
    let mut acc = 0.0;
    let mut breakpoints = vec![0.0];
    for w in params.drain(..) {
        acc += w / total;
        breakpoints.push(acc);
    }
    breakpoints[segments] = 1.0;
    PlaneCurve::new(vertices, breakpoints, false).expect("random curves have positive edges")
}
