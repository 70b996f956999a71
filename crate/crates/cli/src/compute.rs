use std::path::PathBuf;

use nrange_core::fov::{fov_region, MIN_ANGLES};
use nrange_core::linalg::singular_values;
use nrange_core::projrange::{w_higher, w_lower, ProjectorSetting};
use nrange_core::rankk::phi_k_region;
use nrange_core::rectrange::{w_disc, wnorm_disc};
use nrange_core::{ComplexMatrix, Isometry, Region};

use crate::args::ComputeArgs;
use crate::error::{CliError, CliResult};
use crate::files::{read_matrix, write_text, RegionFile, SetKind};
use crate::svg::{Style, Svg};

/// Runs `compute` and returns the paths written.
pub fn run(args: &ComputeArgs) -> CliResult<Vec<PathBuf>> {
    check_flags(args)?;
    let a = read_matrix(&args.input)?;
    let region = compute_region(&a, args)?;
    let sigma = singular_values(&a)?;
    let file = RegionFile::new(region, args.set, args.k, sigma);
    write_text(&args.out, &file.to_json())?;
    let mut written = vec![args.out.clone()];
    if let Some(path) = &args.svg {
        write_text(path, &render(&file))?;
        written.push(path.clone());
    }
    Ok(written)
}

fn check_flags(args: &ComputeArgs) -> CliResult<()> {
    if args.angles < MIN_ANGLES {
        return Err(CliError::flags(format!("--angles must be at least {MIN_ANGLES}")));
    }
    let set = args.set;
    if args.k.is_some() && set != SetKind::Phik {
        return Err(CliError::flags("--k only applies to --set phik"));
    }
    if args.h.is_some() && !matches!(set, SetKind::Wl | SetKind::Wh) {
        return Err(CliError::flags("--H only applies to --set wl or --set wh"));
    }
    if args.b.is_some() && set != SetKind::Wnorm {
        return Err(CliError::flags("--B only applies to --set wnorm"));
    }
    match set {
        SetKind::Phik if args.k.unwrap_or(0) == 0 => Err(CliError::flags("--set phik needs --k with k >= 1")),
        SetKind::Wnorm if args.b.is_none() => Err(CliError::flags("--set wnorm needs --B PATH")),
        _ => Ok(()),
    }
}

fn compute_region(a: &ComplexMatrix, args: &ComputeArgs) -> CliResult<Region> {
    Ok(match args.set {
        SetKind::W => {
            let d = w_disc(a)?;
            if let Some(w) = d.warning {
                eprintln!("warning: {w}");
            }
            d.region
        }
        SetKind::Fov => {
            if !a.is_square() {
                return Err(CliError::flags(format!(
                    "the field of values needs a square matrix, input is {}x{}; use --set w for rectangular input",
                    a.rows(),
                    a.cols()
                )));
            }
            fov_region(a, args.angles)?
        }
        SetKind::Wl | SetKind::Wh => {
            let s = match &args.h {
                Some(p) => {
                    let h = read_matrix(p)?;
                    let (m, n) = a.shape();
                    let want = if m >= n { (m, n) } else { (n, m) };
                    if h.shape() != want {
                        return Err(CliError::flags(format!(
                            "--H must be {}x{} for a {m}x{n} input, got {}x{}",
                            want.0,
                            want.1,
                            h.rows(),
                            h.cols()
                        )));
                    }
                    ProjectorSetting::new(a.clone(), Isometry::new(h)?)?
                }
                None => ProjectorSetting::with_leading_frame(a.clone())?,
            };
            let curve = if args.set == SetKind::Wl { w_lower(&s, args.angles)? } else { w_higher(&s, args.angles)? };
            Region::ConvexBoundary(curve)
        }
        SetKind::Phik => phi_k_region(a, args.k.expect("checked"))?.region,
        SetKind::Wnorm => {
            let b = read_matrix(args.b.as_ref().expect("checked"))?;
            if b.shape() != a.shape() {
                return Err(CliError::flags(format!(
                    "--B must have the input's shape {}x{}, got {}x{}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
            wnorm_disc(a, &b)?
        }
    })
}

/// SVG of a region file: the region, axes at `±1.1·outer radius`, singular values.
pub fn render(file: &RegionFile) -> String {
    let sigma_max = file.meta.sigma.first().copied().unwrap_or(0.0);
    let outer = file.region.outer_radius();
    let mut svg = Svg::new(if outer > 0.0 { outer } else { sigma_max });
    svg.region(&file.region, Style::filled("#1f4e9c", "#1f4e9c", 0.15));
    let mut notes = vec![match file.meta.k {
        Some(k) => format!("set {}, k = {k}, {}", file.meta.set.name(), file.region.kind()),
        None => format!("set {}, {}", file.meta.set.name(), file.region.kind()),
    }];
    notes.extend(file.meta.sigma.iter().enumerate().map(|(i, s)| format!("σ{} = {s:.6}", i + 1)));
    svg.notes(&notes);
    svg.finish()
}
