//! Boundary of the numerical range: support function, tangential curve,
//! corners and flat segments, polar radius, and sampled shape checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cert::{extract_P, normalize, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{
    determinant, hermitian_eigen, hermitian_eigenvalues, hermitian_part, ComplexMatrix,
    DEFAULT_EIG_TOL,
};
use crate::trig::{charpoly_theta, ThetaCharPoly};

/// Step of the symmetric finite-difference fallback for `w'_M`.
pub const FD_STEP: f64 = 1e-5;
/// `|∂T/∂w|` below this (times `max(1,‖A‖)^{d-1}`) counts as a repeated root.
pub const REPEATED_ROOT_TOL: f64 = 1e-8;
/// Top eigenvalues closer than this (times `max(1,‖A‖)`) form a cluster.
pub const CLUSTER_GAP_TOL: f64 = 1e-6;
/// Default threshold on `|P'(w1)|` relative to the coefficients of `P`.
pub const FLAT_DERIV_TOL: f64 = 1e-8;
pub const POLYGON_TOL: f64 = 1e-9;
pub const TERNARY_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFlag {
    Regular,
    /// `w'_M` came from the finite-difference fallback.
    FiniteDifference,
    /// One-sided limit `θ → θ0⁻` at a multiple top eigenvalue.
    LeftLimit,
    /// One-sided limit `θ → θ0⁺`.
    RightLimit,
}

impl SampleFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleFlag::Regular => "regular",
            SampleFlag::FiniteDifference => "finite_difference",
            SampleFlag::LeftLimit => "left_limit",
            SampleFlag::RightLimit => "right_limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub theta: f64,
    #[serde(rename = "wM")]
    pub w_m: f64,
    #[serde(rename = "dwM")]
    pub dw_m: f64,
    pub zeta: Complex64,
    pub flag: SampleFlag,
}

impl BoundarySample {
    fn new(theta: f64, w_m: f64, dw_m: f64, flag: SampleFlag) -> Self {
        let zeta = Complex64::new(w_m, dw_m) * Complex64::cis(theta);
        Self { theta, w_m, dw_m, zeta, flag }
    }
}

/// Largest eigenvalue of `B(θ)`.
pub fn support(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(&hermitian_part(a, theta), DEFAULT_EIG_TOL)?.max())
}

/// Shared per-matrix data for repeated boundary evaluation.
struct Tracer<'a> {
    a: &'a ComplexMatrix,
    charpoly: ThetaCharPoly,
    norm1: f64,
}

impl<'a> Tracer<'a> {
    fn new(a: &'a ComplexMatrix) -> Self {
        Self { a, charpoly: charpoly_theta(a), norm1: a.frobenius_norm().max(1.0) }
    }

    fn repeated_root_scale(&self) -> f64 {
        REPEATED_ROOT_TOL * self.norm1.powi(self.a.dim() as i32 - 1)
    }

    fn central_difference(&self, theta: f64) -> Result<f64> {
        let up = support(self.a, theta + FD_STEP)?;
        let down = support(self.a, theta - FD_STEP)?;
        Ok((up - down) / (2.0 * FD_STEP))
    }

    /// `w'_M = -T_θ / T_w` on `T(θ, w) = det(wI - B(θ))`.
    fn derivative(&self, theta: f64, w: f64) -> Result<(f64, SampleFlag)> {
        let t_w = self.charpoly.at(theta).derivative().eval(w);
        if t_w.abs() < self.repeated_root_scale() {
            return Ok((self.central_difference(theta)?, SampleFlag::FiniteDifference));
        }
        let t_theta = self.charpoly.theta_derivative_at(theta).eval(w);
        Ok((-t_theta / t_w, SampleFlag::Regular))
    }

    /// One sample, or a left/right pair when the top eigenvalue is multiple.
    fn samples_at(&self, theta: f64) -> Result<Vec<BoundarySample>> {
        let (spectrum, vectors) = hermitian_eigen(&hermitian_part(self.a, theta), DEFAULT_EIG_TOL)?;
        let n = self.a.dim();
        let w = spectrum.max();
        let cluster: Vec<usize> = (0..n)
            .filter(|&j| w - spectrum.eigenvalues[j] <= CLUSTER_GAP_TOL * self.norm1)
            .collect();
        if cluster.len() < 2 {
            let (dw, flag) = self.derivative(theta, w)?;
            return Ok(vec![BoundarySample::new(theta, w, dw, flag)]);
        }
        // first-order perturbation of the cluster: slopes are the eigenvalues
        // of V* B'(θ) V, and B'(θ) = B(θ + π/2)
        let dh = hermitian_part(self.a, theta + 0.5 * PI);
        let k = cluster.len();
        let mut compressed = ComplexMatrix::zeros(k);
        for (r, &i) in cluster.iter().enumerate() {
            for (c, &j) in cluster.iter().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for p in 0..n {
                    for q in 0..n {
                        s += vectors[(p, i)].conj() * dh[(p, q)] * vectors[(q, j)];
                    }
                }
                compressed[(r, c)] = s;
            }
        }
        let slopes = hermitian_eigenvalues(&compressed, DEFAULT_EIG_TOL)?;
        Ok(vec![
            BoundarySample::new(theta, w, slopes.min(), SampleFlag::LeftLimit),
            BoundarySample::new(theta, w, slopes.max(), SampleFlag::RightLimit),
        ])
    }
}

/// `w'_M(θ)` by implicit differentiation of the characteristic polynomial,
/// with a central-difference fallback at repeated roots.
pub fn support_derivative(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    let tracer = Tracer::new(a);
    let w = support(a, theta)?;
    Ok(tracer.derivative(theta, w)?.0)
}

/// Like [`support_derivative`] but also reports whether the fallback ran.
pub fn support_derivative_flagged(a: &ComplexMatrix, theta: f64) -> Result<(f64, SampleFlag)> {
    let tracer = Tracer::new(a);
    let w = support(a, theta)?;
    tracer.derivative(theta, w)
}

fn sample_grid(a: &ComplexMatrix, thetas: &[f64]) -> Result<Vec<BoundarySample>> {
    let tracer = Tracer::new(a);
    let chunks: Vec<Vec<BoundarySample>> =
        thetas.par_iter().map(|&t| tracer.samples_at(t)).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// `ζ(θ) = (w_M + i w'_M) e^{iθ}` on `n` uniform angles in `[0, 2π)`.
///
/// Angles with a multiple top eigenvalue contribute a left/right pair.
pub fn boundary_curve(a: &ComplexMatrix, n_samples: usize) -> Result<Vec<BoundarySample>> {
    let min = 8 * a.dim();
    if n_samples < min {
        return Err(Error::InvalidSampleCount { min, got: n_samples });
    }
    let thetas: Vec<f64> = (0..n_samples).map(|j| 2.0 * PI * j as f64 / n_samples as f64).collect();
    sample_grid(a, &thetas)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonReport {
    pub is_polygon: bool,
    /// Solutions of `z^d = (-1)^{d-1} det A`, in order of argument from the principal one.
    pub vertices: Vec<Complex64>,
    pub normality_residual: f64,
    /// `max_{k<d} |trace(A^k)|`.
    pub trace_residual: f64,
    pub power_residual: f64,
}

/// `W(A)` is a regular d-gon iff `A` is normal with spectrum `{z : z^d = (-1)^{d-1} det A}`.
///
/// The spectrum test uses `trace(A^k) = 0` for `k < d` and
/// `A^d = (-1)^{d-1} det(A) I`, which pin the characteristic polynomial to
/// `z^d - (-1)^{d-1} det A` without an eigenvalue solve.
pub fn detect_polygon(a: &ComplexMatrix, tol: f64) -> Result<PolygonReport> {
    let d = a.dim();
    let det = determinant(a);
    let norm1 = a.frobenius_norm().max(1.0);
    if crate::cert::is_singular(a, det) {
        return Err(Error::SingularMatrix { det_abs: det.norm() });
    }
    let adj = a.adjoint();
    let normality_residual = (&(a * &adj) - &(&adj * a)).max_abs();

    let mut power = ComplexMatrix::identity(d);
    let mut trace_residual: f64 = 0.0;
    for _ in 1..d {
        power = &power * a;
        trace_residual = trace_residual.max(power.trace().norm());
    }
    power = &power * a;
    let z0 = if d % 2 == 1 { det } else { -det };
    let power_residual = (&power - &ComplexMatrix::identity(d).scale(z0)).max_abs();

    let r = z0.norm().powf(1.0 / d as f64);
    let vertices = (0..d)
        .map(|k| Complex64::from_polar(r, (z0.arg() + 2.0 * PI * k as f64) / d as f64))
        .collect();
    let is_polygon = normality_residual <= tol * norm1 * norm1
        && trace_residual <= tol * norm1.powi(d as i32 - 1)
        && power_residual <= tol * norm1.powi(d as i32);
    Ok(PolygonReport { is_polygon, vertices, normality_residual, trace_residual, power_residual })
}

/// A straight piece of the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatSegment {
    pub sector: usize,
    /// Distance from the origin to the segment's line.
    pub w1: f64,
    /// `(2^{d-3} P''(w1))^{-1/2}` for the normalized matrix, rescaled to `A`.
    pub gamma1: f64,
    /// Half of the segment length, `(d/2) γ1`.
    pub half_length: f64,
    /// Direction of the outward normal.
    pub normal_angle: f64,
    /// Polar angle of `endpoint_minus` relative to the normal, `π/d - arctan(half_length/w1)`
    /// in the normalized frame.
    pub psi_d: f64,
    pub endpoint_minus: Complex64,
    pub endpoint_plus: Complex64,
}

/// Flat segments of `∂W(A)`, one per sector when present.
///
/// Detection runs on the normalized matrix at `θ = π/d`: a flat part needs
/// both `|P'(w1)| ≤ tol · max(1, max|coeff P|)` and a top eigenvalue gap
/// under [`CLUSTER_GAP_TOL`].
pub fn detect_flat_parts(a: &ComplexMatrix, tol: f64) -> Result<Vec<FlatSegment>> {
    let d = a.dim();
    let (c, an) = normalize(a)?;
    let p = extract_P(&an, DEFAULT_TOL)?.poly;
    let theta1 = PI / d as f64;
    let spectrum = hermitian_eigenvalues(&hermitian_part(&an, theta1), DEFAULT_EIG_TOL)?;
    let w1 = spectrum.max();
    let gap = w1 - spectrum.eigenvalues[d - 2];

    let dp = p.derivative();
    let p1 = dp.eval(w1);
    let norm1 = an.frobenius_norm().max(1.0);
    if p1.abs() > tol * p.max_abs_coeff().max(1.0) || gap > CLUSTER_GAP_TOL * norm1 {
        return Ok(Vec::new());
    }
    let p2 = dp.derivative().eval(w1);
    if p2 <= 0.0 {
        return Err(Error::InconsistentCurvature { value: p2 });
    }
    let gamma1 = (2f64.powi(d as i32 - 3) * p2).powf(-0.5);
    let half = 0.5 * d as f64 * gamma1;
    let psi_d = theta1 - (half / w1).atan();

    let scale = 1.0 / c.norm();
    let back = c.inv();
    Ok((0..d)
        .map(|k| {
            let phi = theta1 + 2.0 * PI * k as f64 / d as f64;
            let rot = Complex64::cis(phi);
            FlatSegment {
                sector: k,
                w1: w1 * scale,
                gamma1: gamma1 * scale,
                half_length: half * scale,
                normal_angle: phi - c.arg(),
                psi_d,
                endpoint_minus: Complex64::new(w1, -half) * rot * back,
                endpoint_plus: Complex64::new(w1, half) * rot * back,
            }
        })
        .collect())
}

/// Radius of `∂W(A)` in direction `ψ`: `min_θ w_M(θ) / cos(ψ - θ)`.
///
/// The sampled minimum is refined by ternary search on the neighbouring
/// grid cells.
pub fn polar_radius(a: &ComplexMatrix, psi: f64, boundary: &[BoundarySample]) -> Result<f64> {
    if let Some(s) = boundary.iter().find(|s| s.w_m <= 0.0) {
        return Err(Error::OriginOutside { theta: s.theta, support: s.w_m });
    }
    let mut best: Option<(f64, f64)> = None;
    for s in boundary {
        let cos = (psi - s.theta).cos();
        if cos <= 0.0 {
            continue;
        }
        let r = s.w_m / cos;
        if best.map_or(true, |(_, b)| r < b) {
            best = Some((s.theta, r));
        }
    }
    let Some((theta0, r0)) = best else {
        return Err(Error::InvalidSampleCount { min: 1, got: 0 });
    };
    let step = grid_step(boundary);
    let ratio = |t: f64| -> Result<f64> {
        let cos = (psi - t).cos();
        if cos <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(support(a, t)? / cos)
    };
    let (mut lo, mut hi) = (theta0 - step, theta0 + step);
    for _ in 0..TERNARY_ITERATIONS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if ratio(m1)? <= ratio(m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    Ok(ratio(0.5 * (lo + hi))?.min(r0))
}

/// Largest gap between consecutive distinct sample angles.
fn grid_step(boundary: &[BoundarySample]) -> f64 {
    let mut thetas: Vec<f64> = boundary.iter().map(|s| s.theta).collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    if thetas.len() < 2 {
        return PI;
    }
    let wrap = thetas[0] + 2.0 * PI - thetas[thetas.len() - 1];
    thetas.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub d: usize,
    /// `c` with `det(cA) = (-1)^{d-1}`; the checks run on `cA`.
    pub normalization: Complex64,
    pub sector_samples: usize,
    pub is_polygon: bool,
    pub has_flat_parts: bool,
    pub evenness_residual: f64,
    pub periodicity_residual: f64,
    /// `w_M` strictly decreasing on the sampled open sector `(0, π/d)`.
    pub support_monotone_on_sector: bool,
    /// `|ζ|` decreasing on the sector; strictly unless `W(A)` is a polygon.
    pub modulus_monotone_on_sector: bool,
    pub arg_monotone: bool,
    /// Total turning of `arg ζ` over one revolution, ideally `2π`.
    pub winding: f64,
    /// `w_M(π/d) - cos(π/d) w_M(0)`.
    pub convexity_margin: f64,
    pub convexity_bound_ok: bool,
    /// `P'(w_M(0))` when `P` is available.
    pub p_prime_at_zero: Option<f64>,
    /// Distance from `e^{2πi/d} ζ(θ)` to the sampled boundary polyline, in the units of `A`.
    pub rotation_distance: f64,
}

impl GeometryReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.evenness_residual < tol
            && self.periodicity_residual < tol
            && self.support_monotone_on_sector
            && self.modulus_monotone_on_sector
            && self.arg_monotone
            && self.convexity_bound_ok
            && self.p_prime_at_zero.is_some_and(|v| v > 0.0)
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Sampled shape checks on the normalized matrix.
///
/// The grid has `sector_samples` interior points in each half-sector of
/// width `π/d`, so `θ`, `-θ` and `θ + 2π/d` are all grid angles and the
/// symmetry residuals compare like with like.
pub fn validate_geometry(a: &ComplexMatrix, sector_samples: usize) -> Result<GeometryReport> {
    let d = a.dim();
    if sector_samples < 2 {
        return Err(Error::InvalidSampleCount { min: 2, got: sector_samples });
    }
    let (c, an) = match normalize(a) {
        Ok(pair) => pair,
        Err(Error::SingularMatrix { .. }) => (Complex64::new(1.0, 0.0), a.clone()),
        Err(e) => return Err(e),
    };
    let cells = sector_samples + 1;
    let n = 2 * d * cells;
    let thetas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let tracer = Tracer::new(&an);
    let per_angle: Vec<Vec<BoundarySample>> =
        thetas.par_iter().map(|&t| tracer.samples_at(t)).collect::<Result<_>>()?;
    let w: Vec<f64> = per_angle.iter().map(|s| s[0].w_m).collect();

    let evenness_residual = (1..n).map(|j| (w[j] - w[n - j]).abs()).fold(0.0, f64::max);
    let shift = 2 * cells;
    let periodicity_residual = (0..n).map(|j| (w[j] - w[(j + shift) % n]).abs()).fold(0.0, f64::max);

    let polygon = detect_polygon(&an, POLYGON_TOL).map(|r| r.is_polygon).unwrap_or(false);
    let flat = !polygon && detect_flat_parts(&an, FLAT_DERIV_TOL).is_ok_and(|v| !v.is_empty());

    let support_monotone_on_sector = (1..cells - 1).all(|j| w[j + 1] < w[j]);
    let interior: Vec<f64> = per_angle[1..cells].iter().flatten().map(|s| s.zeta.norm()).collect();
    let modulus_monotone_on_sector = interior.windows(2).all(|p| {
        if polygon {
            p[1] <= p[0] + 1e-12 * p[0]
        } else {
            p[1] < p[0]
        }
    });

    let curve: Vec<Complex64> = per_angle.iter().flatten().map(|s| s.zeta).collect();
    let mut winding = 0.0;
    let mut arg_monotone = true;
    for j in 0..curve.len() {
        let step = (curve[(j + 1) % curve.len()] / curve[j]).arg();
        if step < -1e-12 {
            arg_monotone = false;
        }
        winding += step;
    }
    arg_monotone &= (winding - 2.0 * PI).abs() < 1e-9;

    let convexity_margin = w[cells] - (PI / d as f64).cos() * w[0];
    let p_prime_at_zero = extract_P(&an, DEFAULT_TOL).ok().map(|p| p.poly.derivative().eval(w[0]));

    let rot = Complex64::cis(2.0 * PI / d as f64);
    let m = curve.len();
    let rotation_distance = curve
        .par_iter()
        .map(|&z| {
            let p = z * rot;
            (0..m)
                .map(|k| point_segment_distance(p, curve[k], curve[(k + 1) % m]))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
        / c.norm();

    Ok(GeometryReport {
        d,
        normalization: c,
        sector_samples,
        is_polygon: polygon,
        has_flat_parts: flat,
        evenness_residual,
        periodicity_residual,
        support_monotone_on_sector,
        modulus_monotone_on_sector,
        arg_monotone,
        winding,
        convexity_margin,
        convexity_bound_ok: convexity_margin >= -1e-9,
        p_prime_at_zero,
        rotation_distance,
    })
}
