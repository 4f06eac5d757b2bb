//! File formats: body/data ingestion and plot-table emission.
//!
//! All numeric output uses Rust's shortest round-trip float formatting and
//! '.' as the decimal separator, so identical inputs produce byte-identical
//! files.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::geom::{Body, ConvexPolygon, DiscreteMeasure, GeomError, SupportSamples};
use crate::phase_plane::Trajectory;
use crate::solve::{self, PrescribedData, SolveError, SolveResult};
use crate::theta::{ThetaResult, ThetaScan};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: parse error: {detail}")]
    Parse { path: String, detail: String },
    #[error("{path}: {source}")]
    Geom { path: String, source: GeomError },
    #[error("{path}: {source}")]
    Data { path: String, source: SolveError },
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Deserialize)]
struct PolygonFile {
    vertices: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct SupportFile {
    n: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FFile {
    Values { n: usize, values: Vec<f64> },
    Fourier { fourier_cos: Vec<f64> },
}

pub fn read_polygon(path: &Path) -> Result<ConvexPolygon, IoError> {
    let text = read_to_string(path)?;
    let file: PolygonFile = serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    ConvexPolygon::new(file.vertices).map_err(|source| IoError::Geom {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_support(path: &Path) -> Result<SupportSamples, IoError> {
    let text = read_to_string(path)?;
    let file: SupportFile = serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    if file.values.len() != file.n {
        return Err(IoError::Parse {
            path: path.display().to_string(),
            detail: format!("n = {} but {} values given", file.n, file.values.len()),
        });
    }
    SupportSamples::new(file.values).map_err(|source| IoError::Geom {
        path: path.display().to_string(),
        source,
    })
}

/// A body file is either a polygon (`{"vertices": ...}`) or support
/// samples (`{"n": ..., "values": ...}`).
pub fn read_body(path: &Path) -> Result<Body, IoError> {
    let text = read_to_string(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    if value.get("vertices").is_some() {
        read_polygon(path).map(Body::Polygon)
    } else if value.get("values").is_some() {
        read_support(path).map(Body::Support)
    } else {
        Err(IoError::Parse {
            path: path.display().to_string(),
            detail: "expected a \"vertices\" or \"n\"/\"values\" object".into(),
        })
    }
}

/// Prescribed data: explicit samples, or even cosine modes realized on an
/// `n_fourier`-point grid.
pub fn read_f(path: &Path, n_fourier: usize) -> Result<PrescribedData, IoError> {
    let text = read_to_string(path)?;
    let file: FFile = serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let wrap = |source: SolveError| IoError::Data {
        path: path.display().to_string(),
        source,
    };
    match file {
        FFile::Values { n, values } => {
            if values.len() != n {
                return Err(IoError::Parse {
                    path: path.display().to_string(),
                    detail: format!("n = {} but {} values given", n, values.len()),
                });
            }
            solve::validate_f(&values).map_err(wrap)
        }
        FFile::Fourier { fourier_cos } => {
            solve::data_from_fourier_cos(&fourier_cos, n_fourier).map_err(wrap)
        }
    }
}

pub fn measure_json(m: &DiscreteMeasure) -> Value {
    json!({
        "atoms": m.atoms,
        "total": m.total(),
    })
}

pub fn theta_result_json(t: &ThetaResult) -> Value {
    json!({
        "value": if t.value.is_finite() { Value::from(t.value) } else { Value::Null },
        "divergent": t.is_divergent(),
        "est_error": t.est_error,
        "endpoint_flags": [t.endpoint_flags.0, t.endpoint_flags.1],
    })
}

pub fn theta_scan_json(scan: &ThetaScan) -> Value {
    json!({
        "c": scan.c,
        "grid": scan.points.iter().map(|p| p.h0).collect::<Vec<_>>(),
        "theta_values": scan.points.iter().map(|p| p.theta).collect::<Vec<_>>(),
        "est_errors": scan.points.iter().map(|p| p.est_error).collect::<Vec<_>>(),
        "min": scan.min_theta,
        "argmin": {
            "c": scan.argmin.c,
            "h0": scan.argmin.h0,
            "r": scan.argmin.r,
            "energy": scan.argmin.energy,
        },
        "margins": scan.margin,
        "failures": scan.failures,
    })
}

pub fn solve_json(result: &SolveResult) -> Value {
    json!({
        "branch": match result.branch {
            solve::Branch::Small => "small",
            solve::Branch::Large => "large",
        },
        "n": result.h.n(),
        "h_values": result.h.values(),
        "residual_inf": result.residual_inf,
        "gamma2": result.gamma2,
        "perimeter": result.perimeter,
        "c0_used": result.c0_used,
        "t_reached": result.t_reached,
    })
}

fn push_row(out: &mut String, cells: &[f64]) {
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{c}"));
    }
    out.push('\n');
}

/// `h0, r, theta` rows of a scan (the Θ surface slice at fixed c).
pub fn theta_surface_csv(scan: &ThetaScan) -> String {
    let mut out = String::from("h0,r,theta\n");
    for p in &scan.points {
        push_row(&mut out, &[p.h0, p.r, p.theta]);
    }
    out
}

/// `theta, h, hp, drift` rows of a trajectory.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("theta,h,hp,drift\n");
    for s in &traj.samples {
        let drift = (crate::phase_plane::first_integral(traj.c, s.h, s.hp) - traj.e0).abs();
        push_row(&mut out, &[s.theta, s.h, s.hp, drift]);
    }
    out
}

/// `theta, h, density, f` rows of a solve result.
pub fn solution_csv(result: &SolveResult, f: &PrescribedData) -> String {
    let density = crate::geom::density_smooth(&result.h, crate::geom::Normalization::Density)
        .unwrap_or_else(|_| vec![f64::NAN; result.h.n()]);
    let mut out = String::from("theta,h,density,f\n");
    for j in 0..result.h.n() {
        push_row(
            &mut out,
            &[
                result.h.node_angle(j),
                result.h.values()[j],
                density[j],
                f.values()[j],
            ],
        );
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|source| IoError::Io {
                path: dir.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_json(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn polygon_round_trip() {
        let f = temp_json(r#"{"vertices": [[1,-1],[1,1],[-1,1],[-1,-1]]}"#);
        let p = read_polygon(f.path()).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn support_file_checks_length() {
        let f = temp_json(r#"{"n": 4, "values": [1.0, 1.0, 1.0]}"#);
        assert!(matches!(read_support(f.path()), Err(IoError::Parse { .. })));
    }

    #[test]
    fn body_detection() {
        let f = temp_json(r#"{"n": 4, "values": [1.0, 1.0, 1.0, 1.0]}"#);
        assert!(matches!(read_body(f.path()).unwrap(), Body::Support(_)));
        let f = temp_json(r#"{"vertices": [[1,-1],[1,1],[-1,1],[-1,-1]]}"#);
        assert!(matches!(read_body(f.path()).unwrap(), Body::Polygon(_)));
        let f = temp_json(r#"{"nope": 1}"#);
        assert!(read_body(f.path()).is_err());
    }

    #[test]
    fn f_file_variants() {
        let f = temp_json(r#"{"fourier_cos": [0.05, 0.0, 0.015]}"#);
        let data = read_f(f.path(), 64).unwrap();
        assert_eq!(data.n(), 64);
        let f = temp_json(r#"{"fourier_cos": [0.05, 0.01]}"#);
        assert!(matches!(read_f(f.path(), 64), Err(IoError::Data { .. })));
    }

    #[test]
    fn csv_is_deterministic() {
        let mut out1 = String::new();
        let mut out2 = String::new();
        push_row(&mut out1, &[1.0, 0.30000000000000004, 3.5e-12]);
        push_row(&mut out2, &[1.0, 0.30000000000000004, 3.5e-12]);
        assert_eq!(out1, out2);
        assert_eq!(out1, "1,0.30000000000000004,0.0000000000035\n");
    }
}
