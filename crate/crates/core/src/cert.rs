//! Certification of 2π/d rotational symmetry of the numerical range.
//!
//! `W(A)` is invariant under rotation by `2π/d` about the origin whenever
//! `det(wI - B(θ)) = P(w) - (-1/2)^{d-1} Re(e^{-idθ} det A)` for a real
//! polynomial `P`, and for nonsingular `A` this is also necessary. The test
//! is run on the power sums `q_k(θ) = trace(B(θ)^k)`: for `k < d` they must
//! be constant, and `q_d` may only carry the harmonics `0, ±d`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, trace_power, ComplexMatrix};
use crate::poly::RealPolynomial;
use crate::trig::{charpoly_theta, pencil_power_traces, power_sums, TrigPolynomial};

pub const DEFAULT_TOL: f64 = 1e-10;
/// `|det A| ≤ SINGULAR_TOL · ‖A‖^d` is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Gate for a degree-k quantity: `tol · max(1, ‖A‖_F)^k`.
pub fn degree_gate(tol: f64, norm: f64, k: usize) -> f64 {
    tol * norm.max(1.0).powi(k as i32)
}

pub fn is_singular(a: &ComplexMatrix, det: Complex64) -> bool {
    let norm = a.frobenius_norm();
    norm == 0.0 || det.norm() <= SINGULAR_TOL * norm.powi(a.dim() as i32)
}

/// `(-1)^{d-1}` as a float.
fn alternating_sign(d: usize) -> f64 {
    if d % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Scales `A` so that `det(cA) = (-1)^{d-1}`.
///
/// The factor is the real d-th root of `(-1)^{d-1}/det A` when one exists,
/// otherwise the root with argument in `(-π/d, π/d]`. Any other choice
/// differs by a rotation under which a symmetric `W(cA)` is invariant.
pub fn normalize(a: &ComplexMatrix) -> Result<(Complex64, ComplexMatrix)> {
    let d = a.dim();
    let det = determinant(a);
    if is_singular(a, det) {
        return Err(Error::SingularMatrix { det_abs: det.norm() });
    }
    let target = Complex64::new(alternating_sign(d), 0.0) / det;
    let modulus = target.norm().powf(1.0 / d as f64);
    let real_tol = 1e-14 * target.norm();
    let c = if target.im.abs() <= real_tol && target.re > 0.0 {
        Complex64::new(modulus, 0.0)
    } else if target.im.abs() <= real_tol && d % 2 == 1 {
        Complex64::new(-modulus, 0.0)
    } else {
        let arg = target.arg() / d as f64;
        // target.arg() ∈ (-π, π] so arg is already in (-π/d, π/d]
        Complex64::from_polar(modulus, arg)
    };
    Ok((c, a.scale(c)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCertificate {
    pub d: usize,
    pub passes: bool,
    /// Largest non-constant harmonic of `q_k`, `k = 1..d-1`.
    pub residual_qk: Vec<f64>,
    /// Largest harmonic of `q_d` outside `{0, ±d}`.
    pub residual_qd: f64,
    /// `|harmonic_{-d} trace((e^{-iθ}A + e^{iθ}A*)^d) - trace(A^d)|`.
    pub residual_qd_anchor: f64,
    /// `max|A^d - (-1)^{d-1} det(A) I|`.
    pub residual_power_identity: f64,
    pub det: Complex64,
    /// Factor `c` with `det(cA) = (-1)^{d-1}`; absent for singular input.
    pub normalization: Option<Complex64>,
    /// `det A = 0`: the condition is sufficient only, `W(A)` is a disk when it holds.
    pub disk_regime: bool,
    pub norm: f64,
    pub tol: f64,
}

impl SymmetryCertificate {
    pub fn max_residual(&self) -> f64 {
        let mut m = self
            .residual_qk
            .iter()
            .copied()
            .fold(self.residual_qd.max(self.residual_qd_anchor), f64::max);
        if !self.disk_regime {
            m = m.max(self.residual_power_identity);
        }
        m
    }
}

pub fn certify(a: &ComplexMatrix, tol: f64) -> Result<SymmetryCertificate> {
    let d = a.dim();
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    let norm = a.frobenius_norm();
    let traces = pencil_power_traces(a, d as u32);
    let q: Vec<TrigPolynomial> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| t.scale(0.5f64.powi(i as i32 + 1)))
        .collect();
    let di = d as i32;

    let residual_qk: Vec<f64> = q[..d - 1].iter().map(|qk| qk.max_abs_where(|j| j != 0)).collect();
    let residual_qd = q[d - 1].max_abs_where(|j| j != 0 && j.abs() != di);
    let residual_qd_anchor = (traces[d - 1].harmonic(-di) - trace_power(a, d as u32)).norm();

    let det = determinant(a);
    let disk_regime = is_singular(a, det);
    let power = a.pow(d as u32);
    let shifted = &power - &ComplexMatrix::identity(d).scale(det * alternating_sign(d));
    let residual_power_identity = shifted.max_abs();
    let normalization = if disk_regime { None } else { Some(normalize(a)?.0) };

    let mut passes = residual_qk
        .iter()
        .enumerate()
        .all(|(i, &r)| r <= degree_gate(tol, norm, i + 1));
    passes &= residual_qd <= degree_gate(tol, norm, d);
    passes &= residual_qd_anchor <= degree_gate(tol, norm, d);
    if !disk_regime {
        passes &= residual_power_identity <= degree_gate(tol, norm, d);
    }

    Ok(SymmetryCertificate {
        d,
        passes,
        residual_qk,
        residual_qd,
        residual_qd_anchor,
        residual_power_identity,
        det,
        normalization,
        disk_regime,
        norm,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    pub degree: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedConditions {
    pub d: usize,
    pub residuals: Vec<NamedResidual>,
    pub passes: bool,
}

/// The reduced trace conditions for nonsingular `A` with `d ∈ {3, 4, 5}`.
pub fn simplified_conditions(a: &ComplexMatrix, tol: f64) -> Result<SimplifiedConditions> {
    let d = a.dim();
    if !(3..=5).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let det = determinant(a);
    if is_singular(a, det) {
        return Err(Error::SingularMatrix { det_abs: det.norm() });
    }
    let s = a.adjoint();
    let a2 = a * a;
    let a3 = &a2 * a;
    let a4 = &a3 * a;
    let identity_residual = (&a.pow(d as u32)
        - &ComplexMatrix::identity(d).scale(det * alternating_sign(d)))
        .max_abs();

    let identity_name = match d {
        3 => "A^3 - det(A) I",
        4 => "A^4 + det(A) I",
        _ => "A^5 - det(A) I",
    };
    let mut residuals = vec![
        NamedResidual { name: identity_name.into(), degree: d, value: identity_residual },
        NamedResidual { name: "tr(A* A^2)".into(), degree: 3, value: (&s * &a2).trace().norm() },
    ];
    if d >= 4 {
        residuals.push(NamedResidual {
            name: "tr(A* A^3)".into(),
            degree: 4,
            value: (&s * &a3).trace().norm(),
        });
    }
    if d == 5 {
        residuals.push(NamedResidual {
            name: "tr(A* A^4)".into(),
            degree: 5,
            value: (&s * &a4).trace().norm(),
        });
        let s2a3 = (&(&s * &s) * &a3).trace();
        let mixed = (&(&(&s * a) * &s) * &a2).trace();
        residuals.push(NamedResidual {
            name: "tr(A*^2 A^3) + tr(A* A A* A^2)".into(),
            degree: 5,
            value: (s2a3 + mixed).norm(),
        });
    }
    let norm = a.frobenius_norm();
    let passes = residuals.iter().all(|r| r.value <= degree_gate(tol, norm, r.degree));
    Ok(SimplifiedConditions { d, residuals, passes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicResidual {
    pub k: usize,
    /// Largest `|harmonic_j q_k|` with `j ∉ dℤ`.
    pub residual: f64,
}

/// For `d < k ≤ kmax`, how far `q_k` is from containing only harmonics in `dℤ`.
pub fn extended_harmonic_check(a: &ComplexMatrix, kmax: usize) -> Vec<HarmonicResidual> {
    let d = a.dim();
    if kmax <= d {
        return Vec::new();
    }
    let di = d as i32;
    power_sums(a, kmax as u32)
        .iter()
        .enumerate()
        .skip(d)
        .map(|(i, qk)| HarmonicResidual { k: i + 1, residual: qk.max_abs_where(|j| j % di != 0) })
        .collect()
}

/// The polynomial `P` of the symmetry condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedP {
    pub d: usize,
    /// Monic `P(w) = w^d + σ_1 w^{d-1} + … + σ_d`.
    pub poly: RealPolynomial,
    /// `σ_1 .. σ_d`, the constant harmonics of `t_1 .. t_d`.
    pub sigma: Vec<f64>,
    pub det: Complex64,
    /// Whether `det A = (-1)^{d-1}` already held, in which case the largest
    /// root of `P(w) = 2^{1-d} cos(dθ)` is the support function.
    pub normalized: bool,
    /// `|harmonic_{-d} t_d - (-1/2)^d det A|`: how well the computed
    /// oscillating term matches the sign convention of the condition.
    pub oscillation_residual: f64,
}

impl ExtractedP {
    /// `(-1/2)^{d-1} Re(e^{-idθ} det A)`.
    pub fn oscillation(&self, theta: f64) -> f64 {
        let d = self.d as i32;
        (-0.5f64).powi(d - 1) * (Complex64::cis(-(d as f64) * theta) * self.det).re
    }

    /// `det(wI - B(θ))` reconstructed from `P`.
    pub fn charpoly_at(&self, theta: f64) -> RealPolynomial {
        self.poly.add_constant(-self.oscillation(theta))
    }
}

#[allow(non_snake_case)]
pub fn extract_P(a: &ComplexMatrix, tol: f64) -> Result<ExtractedP> {
    let cert = certify(a, tol)?;
    if !cert.passes {
        return Err(Error::NotCertified);
    }
    if cert.disk_regime {
        return Err(Error::SingularMatrix { det_abs: cert.det.norm() });
    }
    let d = cert.d;
    let cp = charpoly_theta(a);
    let sigma: Vec<f64> = cp.coeffs.iter().map(TrigPolynomial::mean).collect();
    let expected = cert.det * (-0.5f64).powi(d as i32);
    let oscillation_residual = (cp.coeffs[d - 1].harmonic(-(d as i32)) - expected).norm();
    let target = Complex64::new(alternating_sign(d), 0.0);
    Ok(ExtractedP {
        d,
        poly: cp.mean_polynomial(),
        sigma,
        det: cert.det,
        normalized: (cert.det - target).norm() <= tol,
        oscillation_residual,
    })
}
