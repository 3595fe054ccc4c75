//! Explicit matrix families with rotationally symmetric numerical range,
//! the closed-form flat-part resultants, and the 3×3 structure invariants.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::support;
use crate::cert::{extract_P, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{determinant, singular_values, spectral_norm, ComplexMatrix};
use crate::poly::{sylvester_resultant, RealPolynomial};

/// `|R| ≤ RESULTANT_TOL · a^{deg/2}` predicts a flat part.
pub const RESULTANT_TOL: f64 = 1e-9;
/// Oracle values below this, after scaling the weights to `max α = 1`, are
/// treated as zero. The oracle vanishes quadratically in the root
/// separation, so its rounding floor sits near `eps²`.
pub const ORACLE_ZERO_TOL: f64 = 1e-24;

/// Sign of `Res(Q, Q')` with rounding-level values mapped to 0.
pub fn oracle_sign(alphas: &[f64], oracle: f64) -> i8 {
    let d = alphas.len() as i32;
    let rho = alphas.iter().copied().fold(0.0, f64::max);
    if oracle.abs() <= ORACLE_ZERO_TOL * rho.powi(d * (d - 1)) {
        0
    } else {
        oracle.signum() as i8
    }
}

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Weights of the cyclically shifted diagonal `M(α) = P_d diag(α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermFamilySpec {
    pub alphas: Vec<Complex64>,
}

/// `M(α) = U* (e^{iθ} M(|α|)) U` with `U = diag(e^{iφ_k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPerm {
    pub phase: f64,
    pub moduli: Vec<f64>,
    pub unitary_phases: Vec<f64>,
}

impl PermFamilySpec {
    pub fn real(alphas: &[f64]) -> Self {
        Self { alphas: alphas.iter().map(|&a| cplx(a)).collect() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.len() < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 weights, got {}", self.alphas.len())));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.norm() > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidSpec(format!("weight {a} must be finite and nonzero")));
        }
        Ok(())
    }

    pub fn canonical(&self) -> Result<CanonicalPerm> {
        self.validate()?;
        let d = self.alphas.len();
        let phase = self.alphas.iter().map(|a| a.arg()).sum::<f64>() / d as f64;
        let mut unitary_phases = vec![0.0; d];
        for k in 0..d - 1 {
            unitary_phases[k + 1] = unitary_phases[k] + self.alphas[k].arg() - phase;
        }
        Ok(CanonicalPerm {
            phase,
            moduli: self.alphas.iter().map(|a| a.norm()).collect(),
            unitary_phases,
        })
    }
}

/// Row `k` carries `α_k` in column `k+1 (mod d)`.
pub fn perm_family(spec: &PermFamilySpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let d = spec.alphas.len();
    let mut m = ComplexMatrix::zeros(d);
    for (k, &a) in spec.alphas.iter().enumerate() {
        m[(k, (k + 1) % d)] = a;
    }
    Ok(m)
}

/// `det(wI - B(θ))` of `M(α1, α2, α3)` in closed form, ascending coefficients.
pub fn d3_charpoly_closed(alphas: &[f64; 3], theta: f64) -> RealPolynomial {
    let a: f64 = alphas.iter().map(|x| x * x).sum();
    let det: f64 = alphas.iter().product();
    RealPolynomial::new(vec![-0.25 * det * (3.0 * theta).cos(), -0.25 * a, 0.0, 1.0])
}

/// `Res(Q, Q')` for `Q(w) = P(w) - P(w_M(π/d))`, the repeated-root test
/// behind flat parts.
pub fn resultant_oracle(alphas: &[f64]) -> Result<(f64, RealPolynomial)> {
    let m = perm_family(&PermFamilySpec::real(alphas))?;
    let p = extract_P(&m, DEFAULT_TOL)?.poly;
    let w1 = support(&m, PI / alphas.len() as f64)?;
    let q = p.add_constant(-p.eval(w1));
    Ok((sylvester_resultant(&q, &q.derivative())?, q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D4Factorization {
    /// `(a + b)((α1-α3)² + (α2-α4)²)³`.
    pub printed: f64,
    /// `((α1-α3)² + (α2-α4)²)((α1+α3)² + (α2+α4)²)`.
    pub computed: f64,
    pub closed_matches_printed: bool,
    pub closed_matches_computed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultantReport {
    pub d: usize,
    pub alphas: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub c: Option<f64>,
    pub closed_form: f64,
    pub oracle: f64,
    pub ratio: f64,
    /// `|closed_form| ≤ RESULTANT_TOL · a^{deg/2}`, `deg` the degree in the weights.
    pub flat_predicted: bool,
    pub derived_q: RealPolynomial,
    /// The `Q` of the closed-form display, coefficient by coefficient.
    pub printed_q: RealPolynomial,
    pub printed_q_residual: f64,
    pub d4_factorization: Option<D4Factorization>,
}

pub fn resultant_closed(d: usize, alphas: &[f64]) -> Result<ResultantReport> {
    if !(3..=5).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if alphas.len() != d {
        return Err(Error::DimensionMismatch { left: d, right: alphas.len() });
    }
    if let Some(x) = alphas.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidSpec(format!("weight {x} must be positive")));
    }
    let sq: Vec<f64> = alphas.iter().map(|x| x * x).collect();
    let a: f64 = sq.iter().sum();
    let (b, c, closed, printed_q, degree) = match d {
        3 => {
            let b: f64 = alphas.iter().product();
            let q = RealPolynomial::new(vec![0.25 * b, -0.25 * a, 0.0, 1.0]);
            (b, None, a.powi(3) - 27.0 * b * b, q, 6)
        }
        4 => {
            let b = (alphas[0] * alphas[2] + alphas[1] * alphas[3]).powi(2);
            let q = RealPolynomial::new(vec![b / 16.0, 0.0, -0.25 * a, 0.0, 1.0]);
            (b, None, a * a - 4.0 * b, q, 4)
        }
        _ => {
            let b: f64 = (0..5).map(|i| sq[i] * sq[(i + 2) % 5]).sum();
            let c: f64 = alphas.iter().product();
            let closed = 3125.0 * c.powi(4) - a * (27.0 * a.powi(4) - 225.0 * a * a * b + 500.0 * b * b) * c * c
                + b.powi(3) * (a * a - 4.0 * b).powi(2);
            // the display has no power of w on the b term; taken literally
            let q = RealPolynomial::new(vec![(b + c) / 16.0, 0.0, 0.0, -0.25 * a, 0.0, 1.0]);
            (b, Some(c), closed, q, 20)
        }
    };
    let (oracle, derived_q) = resultant_oracle(alphas)?;
    let printed_q_residual = (0..=d)
        .map(|k| (derived_q.coeff(k) - printed_q.coeff(k)).abs())
        .fold(0.0, f64::max);
    let scale = a.powi(degree / 2);
    let d4_factorization = (d == 4).then(|| {
        let minus = (alphas[0] - alphas[2]).powi(2) + (alphas[1] - alphas[3]).powi(2);
        let plus = (alphas[0] + alphas[2]).powi(2) + (alphas[1] + alphas[3]).powi(2);
        let printed = (a + b) * minus.powi(3);
        let computed = minus * plus;
        let close = |x: f64| (closed - x).abs() <= RESULTANT_TOL * scale.max(x.abs());
        D4Factorization {
            printed,
            computed,
            closed_matches_printed: close(printed),
            closed_matches_computed: close(computed),
        }
    });
    Ok(ResultantReport {
        d,
        alphas: alphas.to_vec(),
        a,
        b,
        c,
        closed_form: closed,
        oracle,
        ratio: closed / oracle,
        flat_predicted: closed.abs() <= RESULTANT_TOL * scale,
        derived_q,
        printed_q,
        printed_q_residual,
        d4_factorization,
    })
}

/// Parametric families of `A = diag(1, i, -1, -i) + E` with `E` strictly
/// upper triangular and `det A = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum D4FamilySpec {
    BFamily { b: f64 },
    APlus { a: f64 },
    AMinus { a: f64 },
    AlphagammaPlus { alpha: f64, gamma: f64 },
    AlphagammaMinus { alpha: f64, gamma: f64 },
    RhoTheta { rho: f64, theta: f64 },
}

impl D4FamilySpec {
    pub const VARIANTS: [&'static str; 6] =
        ["b-family", "a-plus", "a-minus", "alphagamma-plus", "alphagamma-minus", "rho-theta"];

    pub fn name(&self) -> &'static str {
        match self {
            D4FamilySpec::BFamily { .. } => "b-family",
            D4FamilySpec::APlus { .. } => "a-plus",
            D4FamilySpec::AMinus { .. } => "a-minus",
            D4FamilySpec::AlphagammaPlus { .. } => "alphagamma-plus",
            D4FamilySpec::AlphagammaMinus { .. } => "alphagamma-minus",
            D4FamilySpec::RhoTheta { .. } => "rho-theta",
        }
    }
}

/// Entries of `E`: `α = e12, β = e13, γ = e14, δ = e23, ε = e24, φ = e34`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct D4Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: Complex64,
    pub epsilon: Complex64,
    pub phi: Complex64,
    /// Whether the similarity by `diag(1, 1, -1, 1)` was applied to make `β ≥ 0`.
    pub sign_flipped: bool,
}

impl D4Params {
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::diagonal(&[cplx(1.0), Complex64::i(), cplx(-1.0), -Complex64::i()]);
        m[(0, 1)] = cplx(self.alpha);
        m[(0, 2)] = cplx(self.beta);
        m[(0, 3)] = cplx(self.gamma);
        m[(1, 2)] = self.delta;
        m[(1, 3)] = self.epsilon;
        m[(2, 3)] = self.phi;
        m
    }

    pub fn invariance_residuals(&self) -> (Complex64, Complex64) {
        d4_invariance_residuals(self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.phi)
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("{name} = {x} must be positive")))
    }
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("{name} = {x} must be nonnegative")))
    }
}

pub fn d4_params(spec: &D4FamilySpec) -> Result<D4Params> {
    let zero = cplx(0.0);
    let base = D4Params {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
        delta: zero,
        epsilon: zero,
        phi: zero,
        sign_flipped: false,
    };
    match *spec {
        D4FamilySpec::BFamily { b } => {
            nonnegative("b", b)?;
            Ok(D4Params { beta: b, epsilon: Complex64::new(0.0, b), ..base })
        }
        D4FamilySpec::APlus { a } | D4FamilySpec::AMinus { a } => {
            nonnegative("a", a)?;
            let plus = matches!(spec, D4FamilySpec::APlus { .. });
            if !plus && a >= SQRT_2 {
                return Err(Error::OutOfDomain(format!("a = {a} must be below sqrt(2)")));
            }
            let sign = if plus { 1.0 } else { -1.0 };
            let gamma = (2.0 * a * a / (2.0 + sign * a * a)).sqrt();
            Ok(D4Params {
                alpha: a,
                gamma,
                delta: Complex64::new(0.0, sign * gamma),
                phi: cplx(-a),
                ..base
            })
        }
        D4FamilySpec::AlphagammaPlus { alpha, gamma } | D4FamilySpec::AlphagammaMinus { alpha, gamma } => {
            positive("alpha", alpha)?;
            positive("gamma", gamma)?;
            let sign = if matches!(spec, D4FamilySpec::AlphagammaPlus { .. }) { 1.0 } else { -1.0 };
            let beta = (gamma * gamma - alpha * alpha) / (alpha * gamma);
            let p = D4Params {
                alpha,
                beta,
                gamma,
                delta: cplx(gamma),
                epsilon: cplx(alpha * gamma + sign * beta),
                phi: cplx(-alpha),
                ..base
            };
            if beta >= 0.0 {
                return Ok(p);
            }
            // conjugating by diag(1, 1, -1, 1) flips e13, e23, e34
            Ok(D4Params { beta: -beta, delta: -p.delta, phi: -p.phi, sign_flipped: true, ..p })
        }
        D4FamilySpec::RhoTheta { rho, theta } => {
            positive("rho", rho)?;
            if !(theta > -FRAC_PI_4 && theta < FRAC_PI_4) {
                return Err(Error::OutOfDomain(format!("theta = {theta} must lie in (-pi/4, pi/4)")));
            }
            let epsilon = 2.0 / (2.0 * theta).cos().sqrt();
            let phi = rho * (theta + FRAC_PI_4).tan().sqrt();
            let beta = (rho * rho + epsilon * epsilon + phi * phi).sqrt();
            Ok(D4Params {
                beta,
                delta: Complex64::from_polar(rho, theta),
                epsilon: cplx(epsilon),
                phi: cplx(phi),
                ..base
            })
        }
    }
}

pub fn d4_family(spec: &D4FamilySpec) -> Result<ComplexMatrix> {
    Ok(d4_params(spec)?.matrix())
}

/// The two trace conditions `trace(A* A²)` and `trace(A* A³)` written out
/// in the entries of `E`.
pub fn d4_invariance_residuals(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: Complex64,
    epsilon: Complex64,
    phi: Complex64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let (a, b, g) = (cplx(alpha), cplx(beta), cplx(gamma));
    let (a2, b2, g2) = (alpha * alpha, beta * beta, gamma * gamma);
    let (d2, e2, f2) = (delta.norm_sqr(), epsilon.norm_sqr(), phi.norm_sqr());
    let def = delta * epsilon.conj() * phi;

    let first = cplx(a2 + g2 - d2 - f2) + a * b * delta + a * g * epsilon + b * g * phi + def
        + i * (a2 + d2 - g2 - f2);
    let second = cplx(b2 - e2) + a * g * epsilon - def + a * g * delta * phi
        + i * (cplx(a2 - d2 - g2 + f2) + a * b * delta - b * g * phi);
    (first, second)
}

/// `[[0, 2, 0], [0, 0, 0], [0, 0, a]]`: its numerical range is the unit disk
/// although the symmetry condition fails.
pub fn disk_counterexample(a: f64) -> Result<ComplexMatrix> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::OutOfDomain(format!("a = {a} must lie in (0, 1]")));
    }
    ComplexMatrix::from_real_rows(&[vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, a]])
}

/// Comparison of `‖A²‖` with products of two singular values of `A`, which
/// must agree when `A` is unitarily similar to some `M(α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProductTest {
    pub singular_values: Vec<f64>,
    pub square_norm: f64,
    pub products: Vec<f64>,
    /// `min |‖A²‖ - σ_i σ_j|` over `i < j`.
    pub nearest_gap: f64,
}

pub fn pair_product_test(a: &ComplexMatrix) -> Result<PairProductTest> {
    let singular_values = singular_values(a)?;
    let square_norm = spectral_norm(&(a * a))?;
    let n = singular_values.len();
    let mut products = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            products.push(singular_values[i] * singular_values[j]);
        }
    }
    let nearest_gap = products.iter().map(|p| (p - square_norm).abs()).fold(f64::INFINITY, f64::min);
    Ok(PairProductTest { singular_values, square_norm, products, nearest_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D3StructureReport {
    pub trace_a: f64,
    pub trace_a2: f64,
    pub trace_adj_a2: f64,
    /// `|trace((A*A)² A)|`.
    pub trace_gram2_a: f64,
    pub invariants_hold: bool,
    /// Candidate weights `|α_k|`, descending.
    pub singular_values: Vec<f64>,
    pub det_abs: f64,
    pub det_matches_product: bool,
    pub pair_test: PairProductTest,
    pub square_norm_matches_pair: bool,
}

impl D3StructureReport {
    pub fn passes(&self) -> bool {
        self.invariants_hold && self.det_matches_product && self.square_norm_matches_pair
    }
}

/// Necessary conditions for a 3×3 matrix to be unitarily similar to
/// `e^{iθ} M(α1, α2, α3)`.
pub fn d3_structure_check(a: &ComplexMatrix, tol: f64) -> Result<D3StructureReport> {
    if a.dim() != 3 {
        return Err(Error::UnsupportedDimension(a.dim()));
    }
    let norm1 = a.frobenius_norm().max(1.0);
    let gate = |k: i32| tol * norm1.powi(k);
    let adj = a.adjoint();
    let a2 = a * a;
    let gram = &adj * a;
    let trace_a = a.trace().norm();
    let trace_a2 = a2.trace().norm();
    let trace_adj_a2 = (&adj * &a2).trace().norm();
    let trace_gram2_a = (&(&gram * &gram) * a).trace().norm();
    let invariants_hold = trace_a <= gate(1)
        && trace_a2 <= gate(2)
        && trace_adj_a2 <= gate(3)
        && trace_gram2_a <= gate(5);

    let pair_test = pair_product_test(a)?;
    let det_abs = determinant(a).norm();
    let product: f64 = pair_test.singular_values.iter().product();
    Ok(D3StructureReport {
        trace_a,
        trace_a2,
        trace_adj_a2,
        trace_gram2_a,
        invariants_hold,
        singular_values: pair_test.singular_values.clone(),
        det_abs,
        det_matches_product: (det_abs - product).abs() <= gate(3),
        square_norm_matches_pair: pair_test.nearest_gap <= tol.sqrt() * norm1 * norm1,
        pair_test,
    })
}
