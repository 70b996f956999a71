use std::f64::consts::TAU;
use std::fs;
use std::path::PathBuf;

use nrange_core::fov::corners;
use nrange_core::geometry::{omega, DEFAULT_ANGLES};
use nrange_core::linalg::{derive_seed, eigenvalues, svd, SeededRng};
use nrange_core::projrange::{w_higher, w_lower, ProjectorSetting};
use nrange_core::rectrange::wnorm_disc;
use nrange_core::{example_a1, example_a2, ComplexMatrix, Isometry, Region, C64};
use serde::Serialize;

use crate::args::{Figure, ReproduceArgs};
use crate::error::{CliError, CliResult};
use crate::files::write_text;
use crate::svg::{Style, Svg};

const DISC_COLORS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Serialize)]
struct WeightedDisc {
    b: Vec<[f64; 2]>,
    b_norm: f64,
    region: Region,
}

#[derive(Serialize)]
struct FrobeniusFigure {
    figure: &'static str,
    seed: u64,
    frobenius_norm: f64,
    sigma_max: f64,
    all_inside: bool,
    discs: Vec<WeightedDisc>,
}

#[derive(Serialize)]
struct CornerEntry {
    location: C64,
    curve_point: C64,
    normal_cone_width: f64,
}

#[derive(Serialize)]
struct ProjectorFigure {
    figure: &'static str,
    eigenvalues_higher: Vec<C64>,
    corners_lower: Vec<CornerEntry>,
    corners_higher: Vec<CornerEntry>,
}

/// Writes `<figure>.svg` and `<figure>.json` into the output directory.
pub fn run(args: &ReproduceArgs) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let (name, svg, json) = match args.figure {
        Figure::Sec2Example => frobenius_figure(args.seed)?,
        Figure::Sec3Example => projector_figure()?,
    };
    let svg_path = args.out_dir.join(format!("{name}.svg"));
    let json_path = args.out_dir.join(format!("{name}.json"));
    write_text(&svg_path, &svg)?;
    write_text(&json_path, &json)?;
    Ok(vec![svg_path, json_path])
}

/// Six weights `B = s·G/‖G‖_F` with `G` a noisy rotation of `A/‖A‖_F` and
/// `s ∈ [1.05, 2.3]`.
pub fn six_weights(a: &ComplexMatrix, seed: u64) -> Vec<ComplexMatrix> {
    let (m, n) = a.shape();
    let unit = a.scale_real(1.0 / a.frobenius_norm());
    (0..6)
        .map(|j| {
            let mut rng = SeededRng::new(derive_seed(seed, j));
            let phase = omega(-(TAU * j as f64 / 6.0 + rng.uniform_in(0.0, 0.5)));
            let g = &unit.scale(phase) + &rng.gaussian_matrix(m, n).scale_real(0.35 / ((m * n) as f64).sqrt());
            g.scale_real((1.05 + 0.25 * j as f64) / g.frobenius_norm())
        })
        .collect()
}

fn frobenius_figure(seed: u64) -> CliResult<(&'static str, String, String)> {
    let a = example_a1();
    let nf = a.frobenius_norm();
    let sigma_max = svd(&a)?.sigma_max();
    let mut discs = Vec::new();
    for b in six_weights(&a, seed) {
        let region = wnorm_disc(&a, &b)?;
        discs.push(WeightedDisc {
            b: b.data().iter().map(|z| [z.re, z.im]).collect(),
            b_norm: b.frobenius_norm(),
            region,
        });
    }
    let all_inside = discs.iter().all(|d| d.region.outer_radius() <= nf + 1e-9);

    let o = C64::new(0.0, 0.0);
    let mut svg = Svg::new(nf);
    svg.circle(o, nf, Style::outline("#444"));
    for (d, color) in discs.iter().zip(DISC_COLORS) {
        svg.region(&d.region, Style::filled(color, color, 0.12));
    }
    svg.circle(o, sigma_max, Style::dashed("#000"));
    svg.notes(&[
        "Frobenius-norm ranges of A1 for six weights B".to_string(),
        format!("outer circle |z| = ||A1||_F = {nf:.6}"),
        format!("dashed circle |z| = sigma1 = {sigma_max:.6}"),
        format!("seed {seed}"),
    ]);
    let fig = FrobeniusFigure { figure: "sec2-example", seed, frobenius_norm: nf, sigma_max, all_inside, discs };
    Ok(("sec2-example", svg.finish(), to_json(&fig)))
}

fn projector_figure() -> CliResult<(&'static str, String, String)> {
    let a = example_a2();
    let s = ProjectorSetting::new(a, Isometry::trailing(4, 3)?)?;
    let low = w_lower(&s, DEFAULT_ANGLES)?;
    let high = w_higher(&s, DEFAULT_ANGLES)?;
    let entries = |cs: Vec<nrange_core::fov::Corner>| -> Vec<CornerEntry> {
        cs.iter()
            .map(|c| CornerEntry {
                location: c.location(),
                curve_point: c.sharp.location,
                normal_cone_width: c.sharp.normal_cone_width,
            })
            .collect()
    };
    let corners_lower = entries(corners(&s.lower_matrix(), &low)?);
    let corners_higher = entries(corners(&s.higher_matrix(), &high)?);
    let mut eig = eigenvalues(&s.higher_matrix())?;
    for z in eig.iter_mut() {
        *z = C64::new(round_zero(z.re), round_zero(z.im));
    }

    let extent = Region::ConvexBoundary(high.clone()).outer_radius().max(Region::ConvexBoundary(low.clone()).outer_radius());
    let mut svg = Svg::new(extent);
    svg.polygon(&high.points, Style::filled("#1f77b4", "#1f77b4", 0.12));
    svg.polygon(&low.points, Style::filled("#d62728", "#d62728", 0.18));
    for c in &corners_lower {
        svg.halo(c.location, "#d62728");
    }
    for c in &corners_higher {
        svg.halo(c.location, "#1f77b4");
    }
    svg.marker(C64::new(0.0, 0.0), "#000", "0");
    svg.marker(C64::new(0.0, 5.0), "#000", "5i");
    svg.notes(&[
        "projector ranges of A2, H = [0; I3]".to_string(),
        "blue: w_h = F(AH*), red: w_l = F(H*A)".to_string(),
        format!("corners: {} in w_l, {} in w_h (ringed)", corners_lower.len(), corners_higher.len()),
    ]);
    let fig = ProjectorFigure { figure: "sec3-example", eigenvalues_higher: eig, corners_lower, corners_higher };
    Ok(("sec3-example", svg.finish(), to_json(&fig)))
}

fn round_zero(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("figure data always serializes") + "\n"
}
