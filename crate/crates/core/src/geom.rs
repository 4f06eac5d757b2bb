//! Planar convex bodies and their Gaussian surface-area measures.
//!
//! Two body representations are supported: vertex polygons (counter-
//! clockwise, strictly convex) and periodic support-function samples on
//! the uniform grid. The Gaussian surface-area measure weights boundary
//! length by `e^{-|x|²/2}/2π` and pushes it to the circle of outer
//! normals; for a polygon it is atomic (one atom per edge), for a smooth
//! body it has the density `e^{-(h'²+h²)/2}(h''+h)/2π` in the normal
//! angle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{gauss_segment, normal_pdf, normal_quantile};
use crate::spectral;

/// Absolute dedup tolerance for near-duplicate vertices (half-plane
/// intersections produce these).
pub const VERTEX_DEDUP_TOL: f64 = 1e-12;

/// Strict-convexity tolerance on consecutive edge cross products.
pub const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("a polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices are not in strictly convex counterclockwise order at index {index} (cross = {cross})")]
    NotStrictlyConvex { index: usize, cross: f64 },
    #[error("the origin is not strictly interior to the body")]
    OriginNotInterior,
    #[error("half-plane intersection has empty interior")]
    DegenerateBody,
    #[error("support grid size {0} must be even and at least 4")]
    BadGridSize(usize),
    #[error("support value at node {index} is not positive: {value}")]
    NotPositive { index: usize, value: f64 },
    #[error("discrete convexity violated at node {index}: h'' + h = {value}")]
    ConvexityViolation { index: usize, value: f64 },
}

/// Whether the measure density carries the Gaussian normalization `1/2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `e^{-(h'²+h²)/2}(h''+h)/2π` — the density of the surface-area measure.
    Density,
    /// `e^{-(h'²+h²)/2}(h''+h)` — the 2π-free curvature form.
    TwoPiFree,
}

/// Deterministic pairwise summation (fixed index order, so totals are
/// reproducible regardless of how the terms were produced).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

#[inline]
fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<[f64; 2]>,
}

impl ConvexPolygon {
    /// Validate and build. Near-duplicate vertices (within
    /// [`VERTEX_DEDUP_TOL`]) are merged first.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self, GeomError> {
        let mut vs: Vec<[f64; 2]> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if let Some(last) = vs.last() {
                if (v[0] - last[0]).abs() <= VERTEX_DEDUP_TOL
                    && (v[1] - last[1]).abs() <= VERTEX_DEDUP_TOL
                {
                    continue;
                }
            }
            vs.push(v);
        }
        while vs.len() >= 2 {
            let first = vs[0];
            let last = *vs.last().unwrap();
            if (first[0] - last[0]).abs() <= VERTEX_DEDUP_TOL
                && (first[1] - last[1]).abs() <= VERTEX_DEDUP_TOL
            {
                vs.pop();
            } else {
                break;
            }
        }
        if vs.len() < 3 {
            return Err(GeomError::TooFewVertices(vs.len()));
        }
        let n = vs.len();
        for j in 0..n {
            let c = cross(vs[j], vs[(j + 1) % n], vs[(j + 2) % n]);
            if c <= CONVEXITY_TOL {
                return Err(GeomError::NotStrictlyConvex { index: j, cross: c });
            }
        }
        Ok(ConvexPolygon { vertices: vs })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Support function `h(θ) = max_v v·(cos θ, sin θ)`.
    pub fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.vertices
            .iter()
            .map(|v| v[0] * c + v[1] * s)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support samples on the uniform n-grid (requires the origin inside so
    /// the samples are positive).
    pub fn support_samples(&self, n: usize) -> Result<SupportSamples, GeomError> {
        let values: Vec<f64> = (0..n)
            .map(|j| self.support(2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect();
        SupportSamples::new(values)
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let terms: Vec<f64> = (0..n)
            .map(|j| {
                let a = self.vertices[j];
                let b = self.vertices[(j + 1) % n];
                a[0] * b[1] - a[1] * b[0]
            })
            .collect();
        0.5 * pairwise_sum(&terms)
    }

    /// True if the origin is strictly inside (all edge offsets positive).
    pub fn origin_interior(&self) -> bool {
        self.edges().all(|e| e.offset > CONVEXITY_TOL)
    }

    fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |j| Edge::new(self.vertices[j], self.vertices[(j + 1) % n]))
    }
}

/// One polygon edge with its outward unit normal and scalar geometry.
struct Edge {
    /// Outward unit normal.
    normal: [f64; 2],
    /// Distance of the edge line from the origin (signed; positive when the
    /// origin is on the inner side).
    offset: f64,
    /// Tangential coordinates of the endpoints along the edge direction.
    span: (f64, f64),
}

impl Edge {
    fn new(a: [f64; 2], b: [f64; 2]) -> Self {
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
        let t = [e[0] / len, e[1] / len];
        let normal = [t[1], -t[0]];
        Edge {
            normal,
            offset: normal[0] * a[0] + normal[1] * a[1],
            span: (t[0] * a[0] + t[1] * a[1], t[0] * b[0] + t[1] * b[1]),
        }
    }

    fn normal_angle(&self) -> f64 {
        let ang = self.normal[1].atan2(self.normal[0]);
        if ang < 0.0 {
            ang + 2.0 * std::f64::consts::PI
        } else {
            ang
        }
    }
}

/// Periodic support-function samples `h(2πj/n)`, n even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSamples {
    values: Vec<f64>,
}

impl SupportSamples {
    /// Validate positivity and discrete convexity (circular second
    /// difference plus the value must be positive at every node).
    pub fn new(values: Vec<f64>) -> Result<Self, GeomError> {
        let n = values.len();
        if n < 4 || n % 2 != 0 {
            return Err(GeomError::BadGridSize(n));
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value > 0.0) {
                return Err(GeomError::NotPositive { index, value });
            }
        }
        let curv = spectral::fd_second_difference(&values);
        for (index, (&d2, &h)) in curv.iter().zip(&values).enumerate() {
            let value = d2 + h;
            if value <= 0.0 {
                return Err(GeomError::ConvexityViolation { index, value });
            }
        }
        Ok(SupportSamples { values })
    }

    /// Bypass validation. Only for representing deliberately broken states
    /// in diagnostics and tests; every public constructor validates.
    #[cfg(test)]
    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        SupportSamples { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node_angle(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.values.len() as f64
    }

    /// Antipodal symmetry `h(θ) = h(θ + π)` within `tol`.
    pub fn is_even_body(&self, tol: f64) -> bool {
        let n = self.values.len();
        (0..n / 2).all(|j| (self.values[j] - self.values[j + n / 2]).abs() <= tol)
    }

    /// Wulff shape of the sampled data.
    pub fn wulff(&self) -> Result<ConvexPolygon, GeomError> {
        wulff_shape(&self.values)
    }
}

/// Atomic measure on the circle of normals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    /// `(normal angle in [0, 2π), weight)` per atom.
    pub atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn total(&self) -> f64 {
        let w: Vec<f64> = self.atoms.iter().map(|a| a.1).collect();
        pairwise_sum(&w)
    }
}

/// Intersection of the half-planes `{x·u_j ≤ f_j}` over the grid normals
/// `u_j = (cos 2πj/n, sin 2πj/n)`. Accepts any positive data; where `f`
/// overshoots a support function the excess is cut away (`h_[f] ≤ f`).
pub fn wulff_shape(f: &[f64]) -> Result<ConvexPolygon, GeomError> {
    let n = f.len();
    if n < 3 {
        return Err(GeomError::TooFewVertices(n));
    }
    for (index, &value) in f.iter().enumerate() {
        if !(value > 0.0) {
            return Err(GeomError::NotPositive { index, value });
        }
    }
    // Start from a box that certainly contains the intersection and clip.
    let bound = 2.0 * f.iter().cloned().fold(0.0, f64::max).max(1.0);
    let mut poly: Vec<[f64; 2]> = vec![
        [bound, bound],
        [-bound, bound],
        [-bound, -bound],
        [bound, -bound],
    ];
    for (j, &fj) in f.iter().enumerate() {
        let ang = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let (s, c) = ang.sin_cos();
        poly = clip_half_plane(&poly, [c, s], fj);
        if poly.len() < 3 {
            return Err(GeomError::DegenerateBody);
        }
    }
    // Merge near-duplicate corners, then drop collinear leftovers from
    // redundant planes.
    let mut cleaned: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for v in poly {
        if let Some(last) = cleaned.last() {
            if (v[0] - last[0]).abs() <= VERTEX_DEDUP_TOL && (v[1] - last[1]).abs() <= VERTEX_DEDUP_TOL
            {
                continue;
            }
        }
        cleaned.push(v);
    }
    loop {
        let m = cleaned.len();
        if m < 3 {
            return Err(GeomError::DegenerateBody);
        }
        let mut removed = false;
        let mut j = 0;
        while j < cleaned.len() && cleaned.len() >= 3 {
            let m = cleaned.len();
            let c = cross(cleaned[j], cleaned[(j + 1) % m], cleaned[(j + 2) % m]);
            if c <= CONVEXITY_TOL {
                cleaned.remove((j + 1) % m);
                removed = true;
            } else {
                j += 1;
            }
        }
        if !removed {
            break;
        }
    }
    ConvexPolygon::new(cleaned)
}

/// Sutherland-Hodgman clip of a convex polygon by `{x·u ≤ d}`.
fn clip_half_plane(poly: &[[f64; 2]], u: [f64; 2], d: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    for j in 0..m {
        let a = poly[j];
        let b = poly[(j + 1) % m];
        let da = a[0] * u[0] + a[1] * u[1] - d;
        let db = b[0] * u[0] + b[1] * u[1] - d;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Gaussian surface-area measure of a polygon: per edge `F_i` with outward
/// normal `v_i`, the atom weight is
/// `(1/2π)·e^{-d²/2}·∫_{a}^{b} e^{-s²/2} ds` in the edge's normal/tangent
/// coordinates.
pub fn boundary_measure_polygon(p: &ConvexPolygon) -> DiscreteMeasure {
    let two_pi = 2.0 * std::f64::consts::PI;
    let atoms = p
        .edges()
        .filter(|e| (e.span.1 - e.span.0).abs() > 1e-14)
        .map(|e| {
            let w = (-0.5 * e.offset * e.offset).exp() * gauss_segment(e.span.0, e.span.1) / two_pi;
            (e.normal_angle(), w)
        })
        .collect();
    DiscreteMeasure { atoms }
}

/// Density of the Gaussian surface-area measure of a smooth body at the
/// grid nodes, via spectral derivatives of the support samples.
pub fn density_smooth(h: &SupportSamples, norm: Normalization) -> Result<Vec<f64>, GeomError> {
    let values = h.values();
    let hp = spectral::derivative(values);
    let hpp = spectral::second_derivative(values);
    let factor = match norm {
        Normalization::Density => 0.5 / std::f64::consts::PI,
        Normalization::TwoPiFree => 1.0,
    };
    let mut out = Vec::with_capacity(values.len());
    for index in 0..values.len() {
        let curv = hpp[index] + values[index];
        if curv <= 0.0 {
            return Err(GeomError::ConvexityViolation { index, value: curv });
        }
        let speed_sq = hp[index] * hp[index] + values[index] * values[index];
        out.push(factor * (-0.5 * speed_sq).exp() * curv);
    }
    Ok(out)
}

/// Either body representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Polygon(ConvexPolygon),
    Support(SupportSamples),
}

/// Gaussian measure `γ₂(K) = (1/2π)∫(1 - e^{-ρ(θ)²/2})dθ` via exact polar
/// reduction in the radial direction.
pub fn gaussian_area(body: &Body) -> Result<f64, GeomError> {
    match body {
        Body::Polygon(p) => gaussian_area_polygon(p),
        Body::Support(h) => gaussian_area_support(h),
    }
}

/// Polygon route: the radial function is piecewise `d_i/cos(θ - ψ_i)` per
/// edge sector; each sector integral is done by adaptive Simpson.
pub fn gaussian_area_polygon(p: &ConvexPolygon) -> Result<f64, GeomError> {
    if !p.origin_interior() {
        return Err(GeomError::OriginNotInterior);
    }
    let n = p.vertices.len();
    let mut sector_values = Vec::with_capacity(n);
    for j in 0..n {
        let a = p.vertices[j];
        let b = p.vertices[(j + 1) % n];
        let edge = Edge::new(a, b);
        let alpha0 = a[1].atan2(a[0]);
        let mut width = b[1].atan2(b[0]) - alpha0;
        while width <= 0.0 {
            width += 2.0 * std::f64::consts::PI;
        }
        let psi = edge.normal[1].atan2(edge.normal[0]);
        let d = edge.offset;
        let f = |theta: f64| {
            let rho = d / (theta - psi).cos();
            1.0 - (-0.5 * rho * rho).exp()
        };
        sector_values.push(adaptive_simpson(&f, alpha0, alpha0 + width, 1e-13 * width.max(1e-3)));
    }
    Ok(pairwise_sum(&sector_values) / (2.0 * std::f64::consts::PI))
}

/// Support-samples route: the boundary point at normal angle θ is
/// `h·u + h'·u⊥` with squared radius `h² + h'²`; changing the polar
/// variable to θ brings in the Jacobian `h·(h''+h)/(h²+h'²)` and the
/// integrand becomes smooth and periodic, so the grid mean is spectrally
/// accurate.
pub fn gaussian_area_support(h: &SupportSamples) -> Result<f64, GeomError> {
    let values = h.values();
    let hp = spectral::derivative(values);
    let hpp = spectral::second_derivative(values);
    let mut terms = Vec::with_capacity(values.len());
    for index in 0..values.len() {
        let curv = hpp[index] + values[index];
        if curv <= 0.0 {
            return Err(GeomError::ConvexityViolation { index, value: curv });
        }
        let rho_sq = hp[index] * hp[index] + values[index] * values[index];
        terms.push((1.0 - (-0.5 * rho_sq).exp()) * values[index] * curv / rho_sq);
    }
    Ok(pairwise_sum(&terms) / values.len() as f64)
}

/// O(log n) radial lookup for a polygon with the origin inside.
pub struct RadialProfile<'a> {
    poly: &'a ConvexPolygon,
    /// Unwrapped starting polar angle of each edge sector.
    starts: Vec<f64>,
    base: f64,
}

impl<'a> RadialProfile<'a> {
    pub fn new(poly: &'a ConvexPolygon) -> Result<Self, GeomError> {
        if !poly.origin_interior() {
            return Err(GeomError::OriginNotInterior);
        }
        let n = poly.vertices.len();
        let base = poly.vertices[0][1].atan2(poly.vertices[0][0]);
        let mut starts = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        starts.push(0.0);
        for j in 0..n {
            let a = poly.vertices[j];
            let b = poly.vertices[(j + 1) % n];
            let mut w = b[1].atan2(b[0]) - a[1].atan2(a[0]);
            while w <= 0.0 {
                w += 2.0 * std::f64::consts::PI;
            }
            acc += w;
            starts.push(acc);
        }
        Ok(RadialProfile { poly, starts, base })
    }

    /// Radial function ρ(θ).
    pub fn eval(&self, theta: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut off = (theta - self.base) % two_pi;
        if off < 0.0 {
            off += two_pi;
        }
        let idx = match self
            .starts
            .binary_search_by(|s| s.partial_cmp(&off).unwrap())
        {
            Ok(i) => i.min(self.starts.len() - 2),
            Err(i) => i - 1,
        };
        let n = self.poly.vertices.len();
        let edge = Edge::new(self.poly.vertices[idx % n], self.poly.vertices[(idx + 1) % n]);
        let psi = edge.normal[1].atan2(edge.normal[0]);
        edge.offset / (theta - psi).cos()
    }
}

/// Adaptive Simpson on `[a, b]` with absolute tolerance `eps`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, fa, m, fm, flm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, fm, b, fb, frm, right, 0.5 * eps, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, eps, 40)
}

/// Result of testing the Gaussian isoperimetric inequality
/// `|S| ≥ ψ(Ψ^{-1}(γ₂(K)))` on a body.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IsoperimetricReport {
    pub gamma2: f64,
    pub total_measure: f64,
    /// `ψ(Ψ^{-1}(γ₂))`.
    pub bound: f64,
    /// `total_measure - bound` (nonnegative when the inequality holds).
    pub margin: f64,
    pub holds: bool,
}

pub fn isoperimetric_check(body: &Body) -> Result<IsoperimetricReport, GeomError> {
    let gamma2 = gaussian_area(body)?;
    let total_measure = match body {
        Body::Polygon(p) => boundary_measure_polygon(p).total(),
        Body::Support(h) => {
            let dens = density_smooth(h, Normalization::Density)?;
            pairwise_sum(&dens) * 2.0 * std::f64::consts::PI / dens.len() as f64
        }
    };
    let bound = normal_pdf(normal_quantile(gamma2));
    let margin = total_measure - bound;
    Ok(IsoperimetricReport {
        gamma2,
        total_measure,
        bound,
        margin,
        holds: margin >= -1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::scalar::g_eval;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]).unwrap()
    }

    fn disk_samples(radius: f64, n: usize) -> SupportSamples {
        SupportSamples::new(vec![radius; n]).unwrap()
    }

    #[test]
    fn square_support_values() {
        let p = unit_square();
        assert_relative_eq!(p.support(0.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            p.support(std::f64::consts::FRAC_PI_4),
            std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
    }

    #[test]
    fn support_dominates_vertex_projections() {
        let p = unit_square();
        for j in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let (s, c) = theta.sin_cos();
            let h = p.support(theta);
            for v in p.vertices() {
                assert!(h >= (v[0] * c + v[1] * s).abs() - 1e-14);
            }
        }
    }

    #[test]
    fn polygon_rejects_bad_input() {
        assert!(matches!(
            ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0]]),
            Err(GeomError::TooFewVertices(_))
        ));
        // Clockwise square.
        assert!(matches!(
            ConvexPolygon::new(vec![[1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]),
            Err(GeomError::NotStrictlyConvex { .. })
        ));
        // Collinear triple.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]).is_err());
    }

    #[test]
    fn wulff_of_constant_data_touches_unit_circle() {
        let p = wulff_shape(&vec![1.0; 12]).unwrap();
        assert_eq!(p.vertices().len(), 12);
        for j in 0..12 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 12.0;
            assert_relative_eq!(p.support(theta), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn wulff_recovers_square_from_its_support() {
        let square = unit_square();
        let samples = square.support_samples(64).unwrap();
        let rebuilt = samples.wulff().unwrap();
        assert_eq!(rebuilt.vertices().len(), 4);
        for v in rebuilt.vertices() {
            assert!((v[0].abs() - 1.0).abs() < 1e-12);
            assert!((v[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wulff_truncates_spiked_node() {
        let mut f = vec![1.0; 16];
        f[3] = 1.5; // spike above the neighbors' envelope
        let p = wulff_shape(&f).unwrap();
        let theta3 = 2.0 * std::f64::consts::PI * 3.0 / 16.0;
        assert!(p.support(theta3) < 1.5 - 1e-6);
    }

    #[test]
    fn wulff_idempotent_on_support_samples() {
        let square = unit_square();
        let samples = square.support_samples(32).unwrap();
        let back = samples.wulff().unwrap().support_samples(32).unwrap();
        for (a, b) in samples.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn square_edge_measure_matches_closed_form() {
        // Each edge: (1/2π)·e^{-1/2}·∫_{-1}^{1} e^{-s²/2} ds.
        let measure = boundary_measure_polygon(&unit_square());
        assert_eq!(measure.atoms.len(), 4);
        for &(_, w) in &measure.atoms {
            assert_relative_eq!(w, 0.16519087103401669, epsilon = 1e-14);
        }
    }

    #[test]
    fn polygonal_disk_measure_converges_to_g() {
        let radius = 1.3;
        let mut prev_err = f64::INFINITY;
        for &n in &[64usize, 256, 1024] {
            let gon = wulff_shape(&vec![radius; n]).unwrap();
            let total = boundary_measure_polygon(&gon).total();
            let err = (total - g_eval(radius)).abs();
            assert!(err < prev_err, "error must decay with n: {err} vs {prev_err}");
            prev_err = err;
        }
        assert!(prev_err < 1e-5);
    }

    #[test]
    fn degenerate_short_edges_are_merged() {
        let p = ConvexPolygon::new(vec![
            [1.0, -1.0],
            [1.0, 1.0],
            [1.0 - 0.5e-14, 1.0 + 0.5e-14],
            [-1.0, 1.0],
            [-1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn constant_support_density_is_g_over_2pi() {
        for &radius in &[0.7, 1.0, 1.9] {
            let h = disk_samples(radius, 32);
            let dens = density_smooth(&h, Normalization::Density).unwrap();
            for &d in &dens {
                assert_relative_eq!(
                    d,
                    g_eval(radius) / (2.0 * std::f64::consts::PI),
                    epsilon = 1e-12,
                    max_relative = 1e-11
                );
            }
        }
        // The threshold constant: h ≡ 1 gives e^{-1/2}/(2π).
        let dens = density_smooth(&disk_samples(1.0, 32), Normalization::Density).unwrap();
        assert_relative_eq!(dens[0], 0.09653235263005391, epsilon = 1e-12);
    }

    #[test]
    fn ellipse_density_total_matches_fine_polygon_measure() {
        let n = 256;
        let support: Vec<f64> = (0..n)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let (s, c) = t.sin_cos();
                (1.5 * 1.5 * c * c + 0.8 * 0.8 * s * s).sqrt()
            })
            .collect();
        let h = SupportSamples::new(support).unwrap();
        let dens = density_smooth(&h, Normalization::Density).unwrap();
        let total_smooth = pairwise_sum(&dens) * 2.0 * std::f64::consts::PI / n as f64;

        let fine: Vec<f64> = (0..4096)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 4096.0;
                let (s, c) = t.sin_cos();
                (1.5 * 1.5 * c * c + 0.8 * 0.8 * s * s).sqrt()
            })
            .collect();
        let total_poly = boundary_measure_polygon(&wulff_shape(&fine).unwrap()).total();
        assert_relative_eq!(total_smooth, total_poly, epsilon = 1e-6);
    }

    #[test]
    fn density_flags_nonconvex_data() {
        let n = 32;
        let mut values = vec![1.0; n];
        values[7] = 1.4; // a spike violates h'' + h > 0 next door
        assert!(matches!(
            SupportSamples::new(values.clone()),
            Err(GeomError::ConvexityViolation { .. })
        ));
    }

    #[test]
    fn disk_gaussian_area_closed_form() {
        let half_radius = (2.0 * (2.0f64).ln()).sqrt();
        let area = gaussian_area_support(&disk_samples(half_radius, 64)).unwrap();
        assert_relative_eq!(area, 0.5, epsilon = 1e-12);
        for &radius in &[0.4, 1.0, 2.2] {
            let area = gaussian_area_support(&disk_samples(radius, 64)).unwrap();
            assert_relative_eq!(area, 1.0 - (-0.5 * radius * radius).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn square_gaussian_area_against_product_rule() {
        // Independent 2-D evaluation: the square splits as a product of
        // 1-D integrals, each done by Simpson here.
        let one_d = {
            let f = |s: f64| (-0.5 * s * s).exp();
            let n = 4000;
            let h = 2.0 / n as f64;
            let mut sum = f(-1.0) + f(1.0);
            for j in 1..n {
                sum += if j % 2 == 1 { 4.0 } else { 2.0 } * f(-1.0 + j as f64 * h);
            }
            sum * h / 3.0
        };
        let expected = one_d * one_d / (2.0 * std::f64::consts::PI);
        let area = gaussian_area_polygon(&unit_square()).unwrap();
        assert_relative_eq!(area, expected, epsilon = 1e-10);
    }

    #[test]
    fn gaussian_area_needs_origin_inside() {
        let shifted = ConvexPolygon::new(vec![[3.0, 2.0], [4.0, 2.0], [4.0, 3.0], [3.0, 3.0]]).unwrap();
        assert!(matches!(
            gaussian_area_polygon(&shifted),
            Err(GeomError::OriginNotInterior)
        ));
    }

    #[test]
    fn radial_profile_matches_direct_geometry() {
        let p = unit_square();
        let profile = RadialProfile::new(&p).unwrap();
        assert_relative_eq!(profile.eval(0.0), 1.0, epsilon = 1e-13);
        assert_relative_eq!(
            profile.eval(std::f64::consts::FRAC_PI_4),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        assert_relative_eq!(profile.eval(std::f64::consts::PI), 1.0, epsilon = 1e-13);
        assert_relative_eq!(profile.eval(-std::f64::consts::FRAC_PI_2), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn isoperimetric_on_half_mass_disk() {
        let half_radius = (2.0 * (2.0f64).ln()).sqrt();
        let report =
            isoperimetric_check(&Body::Support(disk_samples(half_radius, 64))).unwrap();
        assert_relative_eq!(report.gamma2, 0.5, epsilon = 1e-12);
        assert_relative_eq!(report.total_measure, g_eval(half_radius), epsilon = 1e-12);
        assert_relative_eq!(report.bound, crate::special::INV_SQRT_2PI, epsilon = 1e-12);
        assert!(report.holds);
        assert_relative_eq!(report.total_measure, 0.5887050112577373, epsilon = 1e-10);
    }

    #[test]
    fn isoperimetric_on_unit_disk() {
        let report = isoperimetric_check(&Body::Support(disk_samples(1.0, 64))).unwrap();
        assert_relative_eq!(report.gamma2, 1.0 - (-0.5f64).exp(), epsilon = 1e-12);
        assert!(report.holds);
        assert!(report.margin > 0.0);
    }

    #[test]
    fn measure_weakly_continuous_under_vertex_perturbation() {
        let base_total = boundary_measure_polygon(&unit_square()).total();
        let mut prev_gap = f64::INFINITY;
        for &eps in &[0.1, 0.01, 0.001] {
            let p = ConvexPolygon::new(vec![
                [1.0 + eps, -1.0],
                [1.0, 1.0],
                [-1.0, 1.0],
                [-1.0, -1.0],
            ])
            .unwrap();
            let gap = (boundary_measure_polygon(&p).total() - base_total).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_benign_data() {
        let xs: Vec<f64> = (0..1000).map(|j| (j as f64 * 0.37).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert_relative_eq!(pairwise_sum(&xs), naive, epsilon = 1e-9);
    }
}
