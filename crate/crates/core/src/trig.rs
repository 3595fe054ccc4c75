//! Exact harmonic expansions in `e^{iθ}`.
//!
//! A [`TrigPolynomial`] stores `c_j` for `Σ_j c_j e^{ijθ}`; real-valuedness
//! means `c_{-j} = conj(c_j)`. Powers of `e^{-iθ}A + e^{iθ}A*` are expanded
//! harmonic by harmonic, so "constant in θ" becomes a statement about
//! coefficients rather than samples.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::poly::RealPolynomial;

/// Conjugacy tolerance applied by [`TrigPolynomial::new`].
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Conjugacy tolerance applied by [`trace_trig`].
pub const TRACE_REALNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPolynomial {
    harmonics: BTreeMap<i32, Complex64>,
}

impl TrigPolynomial {
    /// Validates `c_{-j} = conj(c_j)` within `1e-12 · max|c_j|`.
    pub fn new(harmonics: BTreeMap<i32, Complex64>) -> Result<Self> {
        Self::validated(harmonics, CONSTRUCTION_TOL)
    }

    pub fn validated(harmonics: BTreeMap<i32, Complex64>, tol: f64) -> Result<Self> {
        let scale = harmonics.values().map(|z| z.norm()).fold(0.0, f64::max);
        for (&j, &c) in harmonics.range(0..) {
            let partner = harmonics.get(&-j).copied().unwrap_or_default();
            let mismatch = (partner - c.conj()).norm();
            if mismatch > tol * scale {
                return Err(Error::RealvaluednessViolated { harmonic: j, mismatch });
            }
        }
        for (&j, &c) in harmonics.range(..0) {
            if !harmonics.contains_key(&-j) && c.norm() > tol * scale {
                return Err(Error::RealvaluednessViolated { harmonic: j, mismatch: c.norm() });
            }
        }
        Ok(Self::symmetrized(harmonics))
    }

    /// Projects onto the real-valued subspace without checking.
    fn symmetrized(harmonics: BTreeMap<i32, Complex64>) -> Self {
        let top = harmonics.keys().map(|j| j.abs()).max().unwrap_or(0);
        let mut out = BTreeMap::new();
        let c0 = harmonics.get(&0).map_or(0.0, |z| z.re);
        if c0 != 0.0 {
            out.insert(0, Complex64::new(c0, 0.0));
        }
        for j in 1..=top {
            let pos = harmonics.get(&j).copied().unwrap_or_default();
            let neg = harmonics.get(&-j).copied().unwrap_or_default();
            let avg = 0.5 * (pos + neg.conj());
            if avg != Complex64::default() {
                out.insert(j, avg);
                out.insert(-j, avg.conj());
            }
        }
        Self { harmonics: out }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::symmetrized(BTreeMap::from([(0, Complex64::new(c, 0.0))]))
    }

    /// `amplitude · cos(jθ)` expressed with harmonics `±j`.
    pub fn cosine(j: i32, amplitude: f64) -> Self {
        let half = Complex64::new(0.5 * amplitude, 0.0);
        Self::symmetrized(BTreeMap::from([(j, half), (-j, half)]))
    }

    pub fn harmonic(&self, j: i32) -> Complex64 {
        self.harmonics.get(&j).copied().unwrap_or_default()
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.harmonics.iter().map(|(&j, &c)| (j, c))
    }

    /// Constant (harmonic 0) term.
    pub fn mean(&self) -> f64 {
        self.harmonic(0).re
    }

    pub fn is_zero(&self) -> bool {
        self.harmonics.is_empty()
    }

    /// Largest `|c_j|` over all harmonics.
    pub fn magnitude(&self) -> f64 {
        self.harmonics.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|c_j|` over harmonics selected by `keep`.
    pub fn max_abs_where(&self, keep: impl Fn(i32) -> bool) -> f64 {
        self.harmonics
            .iter()
            .filter(|(&j, _)| keep(j))
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|(&j, &c)| (c * Complex64::cis(j as f64 * theta)).re)
            .sum()
    }

    /// `d/dθ` evaluated at `theta`.
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|(&j, &c)| (c * Complex64::new(0.0, j as f64) * Complex64::cis(j as f64 * theta)).re)
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::symmetrized(self.harmonics.iter().map(|(&j, &c)| (j, c * s)).collect())
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.harmonics.clone();
        for (&j, &c) in &other.harmonics {
            *out.entry(j).or_default() += c * sign;
        }
        Self::symmetrized(out)
    }
}

impl Add for &TrigPolynomial {
    type Output = TrigPolynomial;

    fn add(self, rhs: &TrigPolynomial) -> TrigPolynomial {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &TrigPolynomial {
    type Output = TrigPolynomial;

    fn sub(self, rhs: &TrigPolynomial) -> TrigPolynomial {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &TrigPolynomial {
    type Output = TrigPolynomial;

    fn mul(self, rhs: &TrigPolynomial) -> TrigPolynomial {
        let mut out: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (&i, &a) in &self.harmonics {
            for (&j, &b) in &rhs.harmonics {
                *out.entry(i + j).or_default() += a * b;
            }
        }
        TrigPolynomial::symmetrized(out)
    }
}

/// Harmonic map `j ↦ M_j` for `Σ_j M_j e^{ijθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrixPolynomial {
    dim: usize,
    harmonics: BTreeMap<i32, ComplexMatrix>,
}

impl LaurentMatrixPolynomial {
    /// `e^{-iθ}A + e^{iθ}A*`.
    pub fn pencil(a: &ComplexMatrix) -> Self {
        Self {
            dim: a.dim(),
            harmonics: BTreeMap::from([(-1, a.clone()), (1, a.adjoint())]),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn harmonic(&self, j: i32) -> Option<&ComplexMatrix> {
        self.harmonics.get(&j)
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (i32, &ComplexMatrix)> {
        self.harmonics.iter().map(|(&j, m)| (j, m))
    }

    /// Right-multiplies by the pencil `e^{-iθ}A + e^{iθ}A*`.
    fn times_pencil(&self, a: &ComplexMatrix, a_adj: &ComplexMatrix) -> Self {
        let mut out: BTreeMap<i32, ComplexMatrix> = BTreeMap::new();
        for (&j, m) in &self.harmonics {
            let left = m * a;
            let right = m * a_adj;
            accumulate(&mut out, j - 1, left);
            accumulate(&mut out, j + 1, right);
        }
        Self { dim: self.dim, harmonics: out }
    }

    fn traces(&self) -> BTreeMap<i32, Complex64> {
        self.harmonics.iter().map(|(&j, m)| (j, m.trace())).collect()
    }
}

fn accumulate(map: &mut BTreeMap<i32, ComplexMatrix>, j: i32, m: ComplexMatrix) {
    match map.get_mut(&j) {
        Some(existing) => *existing = &*existing + &m,
        None => {
            map.insert(j, m);
        }
    }
}

/// Harmonic expansion of `(e^{-iθ}A + e^{iθ}A*)^k`, `k ≥ 1`.
pub fn laurent_power(a: &ComplexMatrix, k: u32) -> LaurentMatrixPolynomial {
    assert!(k >= 1, "laurent_power needs k >= 1");
    let a_adj = a.adjoint();
    let mut acc = LaurentMatrixPolynomial::pencil(a);
    for _ in 1..k {
        acc = acc.times_pencil(a, &a_adj);
    }
    acc
}

/// Harmonic-wise trace; fails if the result is not real valued.
pub fn trace_trig(l: &LaurentMatrixPolynomial) -> Result<TrigPolynomial> {
    TrigPolynomial::validated(l.traces(), TRACE_REALNESS_TOL)
}

/// `trace((e^{-iθ}A + e^{iθ}A*)^k)` for `k = 1..=kmax` from a single
/// running expansion.
pub fn pencil_power_traces(a: &ComplexMatrix, kmax: u32) -> Vec<TrigPolynomial> {
    let a_adj = a.adjoint();
    let mut out = Vec::with_capacity(kmax as usize);
    let mut acc = LaurentMatrixPolynomial::pencil(a);
    for k in 1..=kmax {
        if k > 1 {
            acc = acc.times_pencil(a, &a_adj);
        }
        out.push(TrigPolynomial::symmetrized(acc.traces()));
    }
    out
}

/// Power sums `q_k(θ) = trace(B(θ)^k)` for `k = 1..=kmax`.
pub fn power_sums(a: &ComplexMatrix, kmax: u32) -> Vec<TrigPolynomial> {
    pencil_power_traces(a, kmax)
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.scale(0.5f64.powi(i as i32 + 1)))
        .collect()
}

/// Converts power sums `q_1..q_d` into the coefficients `t_1..t_d` of the
/// monic polynomial `w^d + t_1 w^{d-1} + … + t_d` whose roots have those
/// power sums, via `k t_k = -Σ_{j=1..k} t_{k-j} q_j` with `t_0 = 1`.
///
/// `t_k` is `(-1)^k` times the k-th elementary symmetric function.
pub fn newton_to_elementary(q: &[TrigPolynomial]) -> Vec<TrigPolynomial> {
    let mut t: Vec<TrigPolynomial> = Vec::with_capacity(q.len());
    for k in 1..=q.len() {
        let mut sum = q[k - 1].clone();
        for j in 1..k {
            sum = &sum + &(&t[k - j - 1] * &q[j - 1]);
        }
        t.push(sum.scale(-1.0 / k as f64));
    }
    t
}

/// `det(wI - B(θ)) = w^d + Σ_k t_k(θ) w^{d-k}` with exact harmonics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaCharPoly {
    /// `t_1 .. t_d`.
    pub coeffs: Vec<TrigPolynomial>,
}

impl ThetaCharPoly {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// The real polynomial in `w` at a fixed angle.
    pub fn at(&self, theta: f64) -> RealPolynomial {
        let d = self.dim();
        let mut asc = vec![0.0; d + 1];
        asc[d] = 1.0;
        for (k, t) in self.coeffs.iter().enumerate() {
            asc[d - k - 1] = t.eval(theta);
        }
        RealPolynomial::new(asc)
    }

    /// `∂/∂θ` of the characteristic polynomial, as a polynomial in `w`.
    pub fn theta_derivative_at(&self, theta: f64) -> RealPolynomial {
        let d = self.dim();
        let mut asc = vec![0.0; d + 1];
        for (k, t) in self.coeffs.iter().enumerate() {
            asc[d - k - 1] = t.eval_derivative(theta);
        }
        RealPolynomial::new(asc)
    }

    /// Polynomial of constant harmonics, `w^d + Σ_k mean(t_k) w^{d-k}`.
    pub fn mean_polynomial(&self) -> RealPolynomial {
        let d = self.dim();
        let mut asc = vec![0.0; d + 1];
        asc[d] = 1.0;
        for (k, t) in self.coeffs.iter().enumerate() {
            asc[d - k - 1] = t.mean();
        }
        RealPolynomial::new(asc)
    }
}

/// Characteristic polynomial of `B(θ)` with coefficients as exact
/// trigonometric polynomials.
pub fn charpoly_theta(a: &ComplexMatrix) -> ThetaCharPoly {
    let q = power_sums(a, a.dim() as u32);
    ThetaCharPoly { coeffs: newton_to_elementary(&q) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, hermitian_part};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cyclic(alphas: &[f64]) -> ComplexMatrix {
        let d = alphas.len();
        let mut m = ComplexMatrix::zeros(d);
        for (k, &a) in alphas.iter().enumerate() {
            m[(k, (k + 1) % d)] = c(a, 0.0);
        }
        m
    }

    fn assert_mat_close(a: &ComplexMatrix, b: &ComplexMatrix) {
        assert!((a - b).max_abs() < 1e-13, "{a:?} vs {b:?}");
    }

    #[test]
    fn laurent_power_low_orders() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.3, 1.0), c(-2.0, 0.5)],
            vec![c(0.0, -1.0), c(1.5, 0.25)],
        ])
        .unwrap();
        let s = a.adjoint();
        let l1 = laurent_power(&a, 1);
        assert_eq!(l1.harmonic(-1), Some(&a));
        assert_eq!(l1.harmonic(1), Some(&s));

        let l2 = laurent_power(&a, 2);
        assert_mat_close(l2.harmonic(-2).unwrap(), &(&a * &a));
        assert_mat_close(l2.harmonic(0).unwrap(), &(&(&a * &s) + &(&s * &a)));
        assert_mat_close(l2.harmonic(2).unwrap(), &(&s * &s));
        assert_eq!(l2.harmonics().count(), 3);

        let l3 = laurent_power(&a, 3);
        let words = &(&(&(&a * &a) * &s) + &(&(&a * &s) * &a)) + &(&(&s * &a) * &a);
        assert_mat_close(l3.harmonic(-1).unwrap(), &words);
        assert_mat_close(l3.harmonic(-3).unwrap(), &a.pow(3));
    }

    #[test]
    fn trace_trig_examples() {
        let zero_trace = ComplexMatrix::from_real_rows(&[vec![1.0, 4.0], vec![2.0, -1.0]]).unwrap();
        assert!(trace_trig(&laurent_power(&zero_trace, 1)).unwrap().is_zero());

        let t = trace_trig(&laurent_power(&cyclic(&[1.0, 1.0, 1.0]), 3)).unwrap();
        assert!((t.harmonic(-3) - c(3.0, 0.0)).norm() < 1e-14);

        let t = trace_trig(&laurent_power(&cyclic(&[1.0, 2.0, 3.0]), 2)).unwrap();
        assert_eq!(t.harmonic(2), c(0.0, 0.0));
        assert_eq!(t.harmonic(-2), c(0.0, 0.0));
        assert!((t.mean() - 28.0).abs() < 1e-13);
    }

    #[test]
    fn trace_trig_rejects_non_hermitian_generated_input() {
        let mut harmonics = BTreeMap::new();
        harmonics.insert(1, ComplexMatrix::identity(2));
        let l = LaurentMatrixPolynomial { dim: 2, harmonics };
        assert!(matches!(trace_trig(&l), Err(Error::RealvaluednessViolated { harmonic: 1, .. })));
    }

    #[test]
    fn newton_examples() {
        let zeros = vec![TrigPolynomial::zero(); 4];
        assert!(newton_to_elementary(&zeros).iter().all(TrigPolynomial::is_zero));

        let t = newton_to_elementary(&[TrigPolynomial::zero(), TrigPolynomial::constant(3.0)]);
        assert!(t[0].is_zero());
        assert!((t[1].mean() + 1.5).abs() < 1e-15);

        // eigenvalues {1, -1/2, -1/2}
        let mu = [1.0, -0.5, -0.5];
        let q: Vec<_> = (1..=3)
            .map(|k| TrigPolynomial::constant(mu.iter().map(|m: &f64| m.powi(k)).sum()))
            .collect();
        let t = newton_to_elementary(&q);
        assert!(t[0].mean().abs() < 1e-15);
        assert!((t[1].mean() + 0.75).abs() < 1e-15);
        assert!((t[2].mean() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn charpoly_of_disk_counterexample() {
        let a = 0.5;
        let m = ComplexMatrix::from_real_rows(&[
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, a],
        ])
        .unwrap();
        // det(B + wI) = w^3 + a cosθ w^2 - w - a cosθ, so with w -> -w:
        // det(wI - B) = w^3 - a cosθ w^2 - w + a cosθ
        let cp = charpoly_theta(&m);
        let t1 = TrigPolynomial::cosine(1, -a);
        let t2 = TrigPolynomial::constant(-1.0);
        let t3 = TrigPolynomial::cosine(1, a);
        for (got, want) in cp.coeffs.iter().zip([t1, t2, t3]) {
            assert!((got - &want).magnitude() < 1e-14, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn charpoly_of_zero_and_cyclic() {
        let cp = charpoly_theta(&ComplexMatrix::zeros(3));
        assert!(cp.coeffs.iter().all(TrigPolynomial::is_zero));

        let cp = charpoly_theta(&cyclic(&[1.0, 1.0, 1.0]));
        assert!(cp.coeffs[0].magnitude() < 1e-15);
        assert!((&cp.coeffs[1] - &TrigPolynomial::constant(-0.75)).magnitude() < 1e-15);
        let t3 = &cp.coeffs[2];
        assert!(t3.mean().abs() < 1e-15);
        assert!(t3.max_abs_where(|j| j.abs() != 3 && j != 0) < 1e-15);
        // sign fixed against the eigensolver: t3(θ) = -cos(3θ)/4
        assert!((t3.harmonic(-3) - c(-0.125, 0.0)).norm() < 1e-15);
        for theta in [0.0, 0.4, 1.3, 2.9] {
            let b = hermitian_part(&cyclic(&[1.0, 1.0, 1.0]), theta);
            let mu = hermitian_eigenvalues(&b, 1e-13).unwrap().eigenvalues;
            let product: f64 = mu.iter().product();
            assert!((t3.eval(theta) + product).abs() < 1e-13);
        }
    }

    #[test]
    fn trig_arithmetic() {
        let a = TrigPolynomial::cosine(1, 2.0);
        let sq = &a * &a; // 4cos² = 2 + 2cos2θ
        assert!((sq.mean() - 2.0).abs() < 1e-15);
        assert!((sq.harmonic(2) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((sq.eval(0.3) - 4.0 * 0.3f64.cos().powi(2)).abs() < 1e-14);
        assert!((a.eval_derivative(0.3) + 2.0 * 0.3f64.sin()).abs() < 1e-15);

        let bad = BTreeMap::from([(2, c(1.0, 0.0)), (-2, c(0.0, 1.0))]);
        assert!(TrigPolynomial::new(bad).is_err());
        let one_sided = BTreeMap::from([(-1, c(1.0, 0.0))]);
        assert!(TrigPolynomial::new(one_sided).is_err());
    }
}
