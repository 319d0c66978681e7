//! Exact algebra of exponential sums `sum c exp(k x + ell y + omega t + delta)`
//! and symbolic application of Hirota-type bilinear operators.
//!
//! A fractional time factor `D_t^alpha` acts on `e^{theta1} . e^{theta2}` through
//! the stored values `sigma_j = omega_j^alpha`, never through complex powers of
//! `omega`. On the dispersion manifold `sigma = -k^3` exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FractionalOrder;
use crate::report::ResidualReport;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative magnitude below which merged coefficients are dropped.
pub const DROP_RELATIVE: f64 = 1e-14;
const DROP_FLOOR: f64 = 1e-300;

/// Phase `k x + ell y + omega t + delta` with the stored frequency power `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    pub k: Complex64,
    pub ell: Complex64,
    pub omega: Complex64,
    pub sigma: Option<Complex64>,
    pub delta: Complex64,
}

impl PhaseVector {
    /// The constant phase; `0^alpha = 0`.
    pub const fn zero() -> Self {
        Self {
            k: ZERO,
            ell: ZERO,
            omega: ZERO,
            sigma: Some(ZERO),
            delta: ZERO,
        }
    }

    pub fn new(
        k: Complex64,
        ell: Complex64,
        omega: Complex64,
        sigma: Option<Complex64>,
        delta: Complex64,
    ) -> Self {
        Self {
            k,
            ell,
            omega,
            sigma,
            delta,
        }
    }

    /// Phase of a product of exponentials; sigma adds only when both are stored.
    pub fn combine(&self, other: &PhaseVector) -> Self {
        Self {
            k: self.k + other.k,
            ell: self.ell + other.ell,
            omega: self.omega + other.omega,
            sigma: self.sigma.zip(other.sigma).map(|(a, b)| a + b),
            delta: self.delta + other.delta,
        }
    }

    pub fn exponent(&self, x: f64, y: f64, t: f64) -> Complex64 {
        self.k * x + self.ell * y + self.omega * t + self.delta
    }

    fn key(&self) -> [f64; 8] {
        // adding +0 maps -0 to +0
        let parts = [self.k, self.ell, self.omega, self.delta];
        let mut key = [0.0; 8];
        for (j, p) in parts.iter().enumerate() {
            key[2 * j] = p.re + 0.0;
            key[2 * j + 1] = p.im + 0.0;
        }
        key
    }

    fn describe(&self) -> String {
        format!("(k = {}, ell = {}, omega = {})", self.k, self.ell, self.omega)
    }
}

/// One term `coeff * exp(phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Complex64,
    #[serde(flatten)]
    pub phase: PhaseVector,
}

#[derive(PartialEq)]
struct Key([f64; 8]);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// A canonical finite exponential sum: one term per distinct phase, sorted by
/// phase, negligible coefficients removed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct ExpSum {
    terms: Vec<Term>,
}

impl From<Vec<Term>> for ExpSum {
    fn from(terms: Vec<Term>) -> Self {
        Self::from_terms(terms)
    }
}

impl From<ExpSum> for Vec<Term> {
    fn from(s: ExpSum) -> Self {
        s.terms
    }
}

fn merge(terms: impl IntoIterator<Item = Term>) -> ExpSum {
    let mut merged: BTreeMap<Key, Term> = BTreeMap::new();
    let mut scale = 0.0f64;
    for t in terms {
        scale = scale.max(t.coeff.norm());
        merged
            .entry(Key(t.phase.key()))
            .and_modify(|m| {
                m.coeff += t.coeff;
                if m.phase.sigma.is_none() {
                    m.phase.sigma = t.phase.sigma;
                }
            })
            .or_insert(t);
    }
    let post = merged.values().map(|t| t.coeff.norm()).fold(0.0, f64::max);
    let threshold = (DROP_RELATIVE * scale.max(post)).max(DROP_FLOOR);
    ExpSum {
        terms: merged
            .into_values()
            .filter(|t| t.coeff.norm() >= threshold)
            .collect(),
    }
}

impl ExpSum {
    pub fn from_terms(terms: Vec<Term>) -> Self {
        merge(terms)
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::from_terms(vec![Term {
            coeff: ONE,
            phase: PhaseVector::zero(),
        }])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-run the merge; a no-op on canonical sums.
    pub fn canonicalize(&self) -> Self {
        merge(self.terms.iter().copied())
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.coeff * term.phase.exponent(x, y, t).exp())
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("exponential sums always serialize")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `coefficient * D_x^nx D_y^ny [D_t^alpha]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub nx: u32,
    pub ny: u32,
    pub use_frac_t: bool,
    pub coefficient: Complex64,
}

impl Monomial {
    pub fn new(nx: u32, ny: u32, use_frac_t: bool, coefficient: f64) -> Self {
        Self {
            nx,
            ny,
            use_frac_t,
            coefficient: Complex64::new(coefficient, 0.0),
        }
    }
}

/// A polynomial in Hirota operators.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearOperatorSpec {
    pub monomials: Vec<Monomial>,
}

impl BilinearOperatorSpec {
    /// `D_x D_t^alpha + D_x^4`.
    pub fn kdv() -> Self {
        Self {
            monomials: vec![Monomial::new(1, 0, true, 1.0), Monomial::new(4, 0, false, 1.0)],
        }
    }

    /// `D_x D_t^alpha + D_x^4 + s D_y^2`.
    pub fn kp(sign: KpSign) -> Self {
        let mut op = Self::kdv();
        op.monomials.push(Monomial::new(0, 2, false, sign.value()));
        op
    }

    /// `D_t^alpha` alone.
    pub fn frac_t() -> Self {
        Self {
            monomials: vec![Monomial::new(0, 0, true, 1.0)],
        }
    }
}

/// `z^n` by left-to-right repeated multiplication.
fn ipow(z: Complex64, n: u32) -> Complex64 {
    let mut acc = ONE;
    for _ in 0..n {
        acc *= z;
    }
    acc
}

/// All pair-by-monomial contributions before merging.
fn contributions(op: &BilinearOperatorSpec, f: &ExpSum, g: &ExpSum) -> Result<Vec<Term>> {
    let mut out = Vec::with_capacity(f.len() * g.len() * op.monomials.len());
    for a in f.terms() {
        for b in g.terms() {
            let phase = a.phase.combine(&b.phase);
            let dk = a.phase.k - b.phase.k;
            let dl = a.phase.ell - b.phase.ell;
            for m in &op.monomials {
                let mut c = m.coefficient * a.coeff * b.coeff * ipow(dk, m.nx) * ipow(dl, m.ny);
                if m.use_frac_t {
                    let sa = a.phase.sigma.ok_or_else(|| Error::MissingSigma(a.phase.describe()))?;
                    let sb = b.phase.sigma.ok_or_else(|| Error::MissingSigma(b.phase.describe()))?;
                    c *= sa - sb;
                }
                out.push(Term { coeff: c, phase });
            }
        }
    }
    Ok(out)
}

/// Symbolic `P(D) F . G`.
pub fn apply_bilinear_symbolic(op: &BilinearOperatorSpec, f: &ExpSum, g: &ExpSum) -> Result<ExpSum> {
    Ok(merge(contributions(op, f, g)?))
}

/// Canonical `P(D) F . F` with its size relative to the largest single contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicResidual {
    pub residual: ExpSum,
    pub max_abs: f64,
    /// Largest pre-cancellation contribution.
    pub scale: f64,
    pub relative: f64,
}

impl SymbolicResidual {
    pub fn report(&self, tolerance: f64) -> ResidualReport {
        let mut r = ResidualReport::new(self.max_abs, self.max_abs, Some(tolerance));
        r.relative = Some(self.relative);
        r.pass = Some(self.relative <= tolerance);
        r.residual_terms = Some(self.residual.len());
        r
    }
}

/// `P(D) F . F`, merged; the relative size compares the largest surviving
/// coefficient with the largest individual contribution.
pub fn bilinear_residual_symbolic(op: &BilinearOperatorSpec, f: &ExpSum) -> Result<SymbolicResidual> {
    let raw = contributions(op, f, f)?;
    let scale = raw.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
    let residual = merge(raw);
    let max_abs = residual.max_coeff();
    let relative = if max_abs == 0.0 { 0.0 } else { max_abs / scale };
    Ok(SymbolicResidual {
        residual,
        max_abs,
        scale,
        relative,
    })
}

/// KdV dispersion data for one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dispersion {
    /// `-k^3`, the stored value of `omega^alpha`.
    pub sigma: Complex64,
    /// Principal-branch `sigma^{1/alpha}`.
    pub omega: Complex64,
    /// `k` real and negative, so `omega > 0` is real.
    pub is_real: bool,
    /// `|omega^alpha - sigma| <= 1e-12 |sigma|` on the principal branch.
    pub branch_consistent: bool,
}

fn is_real(z: Complex64) -> bool {
    z.im == 0.0
}

/// Principal-branch `sigma^{1/alpha}`, real when `sigma` is real and positive.
fn omega_from_sigma(sigma: Complex64, alpha: FractionalOrder) -> (Complex64, bool) {
    if alpha.is_one() {
        return (sigma, true);
    }
    let a = alpha.value();
    if sigma == ZERO {
        return (ZERO, true);
    }
    if is_real(sigma) && sigma.re > 0.0 {
        let w = sigma.re.powf(1.0 / a);
        let back = w.powf(a);
        return (Complex64::new(w, 0.0), (back - sigma.re).abs() <= 1e-12 * sigma.re);
    }
    let w = sigma.powc(Complex64::new(1.0 / a, 0.0));
    let back = w.powc(Complex64::new(a, 0.0));
    (w, (back - sigma).norm() <= 1e-12 * sigma.norm())
}

/// `sigma = -k^3` and the principal-branch frequency.
pub fn dispersion_omega(k: Complex64, alpha: FractionalOrder) -> Result<Dispersion> {
    if k == ZERO {
        return Err(Error::Degenerate("wavenumber k = 0".into()));
    }
    let sigma = -(k * k * k);
    let (omega, branch_consistent) = omega_from_sigma(sigma, alpha);
    Ok(Dispersion {
        sigma,
        omega,
        is_real: is_real(k) && k.re < 0.0,
        branch_consistent,
    })
}

/// `((k1 - k2) / (k1 + k2))^2`.
pub fn interaction_coefficient(k1: Complex64, k2: Complex64) -> Result<Complex64> {
    let s = k1 + k2;
    if s == ZERO {
        return Err(Error::Degenerate(format!(
            "k1 + k2 = 0 is a pole of A12 (k1 = {k1}, k2 = {k2})"
        )));
    }
    let r = (k1 - k2) / s;
    Ok(r * r)
}

/// Parameters of a one- or two-soliton tau-function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonParams {
    pub alpha: FractionalOrder,
    pub k: Vec<Complex64>,
    pub delta: Vec<Complex64>,
    pub sigma: Vec<Complex64>,
    pub omega: Vec<Complex64>,
    pub a12: Option<Complex64>,
    /// `k1 = k2`: `A12 = 0` and the two phases coincide.
    pub degenerate: bool,
}

impl SolitonParams {
    pub fn one(k: Complex64, delta: Complex64, alpha: FractionalOrder) -> Result<Self> {
        let d = dispersion_omega(k, alpha)?;
        Ok(Self {
            alpha,
            k: vec![k],
            delta: vec![delta],
            sigma: vec![d.sigma],
            omega: vec![d.omega],
            a12: None,
            degenerate: false,
        })
    }

    pub fn two(
        k1: Complex64,
        k2: Complex64,
        delta1: Complex64,
        delta2: Complex64,
        alpha: FractionalOrder,
    ) -> Result<Self> {
        let d1 = dispersion_omega(k1, alpha)?;
        let d2 = dispersion_omega(k2, alpha)?;
        let a12 = interaction_coefficient(k1, k2)?;
        Ok(Self {
            alpha,
            k: vec![k1, k2],
            delta: vec![delta1, delta2],
            sigma: vec![d1.sigma, d2.sigma],
            omega: vec![d1.omega, d2.omega],
            a12: Some(a12),
            degenerate: k1 == k2,
        })
    }

    /// Same parameters with a different interaction coefficient.
    pub fn with_a12(mut self, a12: Complex64) -> Self {
        self.a12 = Some(a12);
        self
    }

    pub fn phase(&self, j: usize) -> PhaseVector {
        PhaseVector::new(self.k[j], ZERO, self.omega[j], Some(self.sigma[j]), self.delta[j])
    }

    /// `1 + e^{theta1} [+ e^{theta2} + A12 e^{theta1 + theta2}]`.
    pub fn tau(&self) -> ExpSum {
        let mut terms = vec![Term {
            coeff: ONE,
            phase: PhaseVector::zero(),
        }];
        terms.extend((0..self.k.len()).map(|j| Term {
            coeff: ONE,
            phase: self.phase(j),
        }));
        if let (Some(a12), 2) = (self.a12, self.k.len()) {
            terms.push(Term {
                coeff: a12,
                phase: self.phase(0).combine(&self.phase(1)),
            });
        }
        ExpSum::from_terms(terms)
    }
}

pub fn one_soliton_tau(k: Complex64, delta: Complex64, alpha: FractionalOrder) -> Result<ExpSum> {
    Ok(SolitonParams::one(k, delta, alpha)?.tau())
}

/// Two-soliton tau-function; `k1 = k2` is accepted and reported through
/// [`SolitonParams::degenerate`].
pub fn two_soliton_tau(
    k1: Complex64,
    k2: Complex64,
    delta1: Complex64,
    delta2: Complex64,
    alpha: FractionalOrder,
) -> Result<ExpSum> {
    Ok(SolitonParams::two(k1, k2, delta1, delta2, alpha)?.tau())
}

/// Sign `s` of the `s D_y^2` term of the KP operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KpSign {
    Plus,
    Minus,
}

impl KpSign {
    pub fn value(self) -> f64 {
        match self {
            KpSign::Plus => 1.0,
            KpSign::Minus => -1.0,
        }
    }
}

impl TryFrom<i32> for KpSign {
    type Error = Error;
    fn try_from(v: i32) -> Result<Self> {
        match v {
            1 => Ok(KpSign::Plus),
            -1 => Ok(KpSign::Minus),
            _ => Err(Error::Parameter(format!("KP sign must be +1 or -1, got {v}"))),
        }
    }
}

/// `1 + exp(k x + ell y + omega t + delta)` with `sigma = -(k^4 + s ell^2) / k`.
pub fn kp_one_soliton(
    k: Complex64,
    ell: Complex64,
    sign: KpSign,
    delta: Complex64,
    alpha: FractionalOrder,
) -> Result<ExpSum> {
    if k == ZERO {
        return Err(Error::Degenerate("wavenumber k = 0".into()));
    }
    let sigma = -(ipow(k, 4) + ell * ell * sign.value()) / k;
    let (omega, _) = omega_from_sigma(sigma, alpha);
    Ok(ExpSum::from_terms(vec![
        Term {
            coeff: ONE,
            phase: PhaseVector::zero(),
        },
        Term {
            coeff: ONE,
            phase: PhaseVector::new(k, ell, omega, Some(sigma), delta),
        },
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn phase(k: f64, sigma: f64) -> PhaseVector {
        PhaseVector::new(c(k), ZERO, ZERO, Some(c(sigma)), ZERO)
    }

    #[test]
    fn merging_and_dropping() {
        let p = phase(1.0, 2.0);
        let s = ExpSum::from_terms(vec![
            Term { coeff: c(1.0), phase: p },
            Term { coeff: c(2.0), phase: p },
            Term { coeff: c(1e-20), phase: phase(2.0, 0.0) },
        ]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coeff, c(3.0));
        assert!(ExpSum::from_terms(vec![]).is_empty());
    }

    #[test]
    fn negative_zero_is_the_same_phase() {
        let a = PhaseVector::new(c(-0.0), ZERO, ZERO, None, ZERO);
        let s = ExpSum::from_terms(vec![
            Term { coeff: c(1.0), phase: a },
            Term { coeff: c(1.0), phase: PhaseVector::zero() },
        ]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn frac_t_on_the_diagonal_vanishes() {
        let e = ExpSum::from_terms(vec![Term { coeff: c(1.0), phase: phase(-1.0, 1.0) }]);
        let r = apply_bilinear_symbolic(&BilinearOperatorSpec::frac_t(), &e, &e).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn one_soliton_cross_terms() {
        // 2 (k sigma + k^4) with k = 2, sigma = 3
        let f = ExpSum::from_terms(vec![
            Term { coeff: c(1.0), phase: PhaseVector::zero() },
            Term { coeff: c(1.0), phase: phase(2.0, 3.0) },
        ]);
        let r = apply_bilinear_symbolic(&BilinearOperatorSpec::kdv(), &f, &f).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.terms()[0].coeff, c(2.0 * (6.0 + 16.0)));
        assert_eq!(r.terms()[0].phase.k, c(2.0));
    }

    #[test]
    fn missing_sigma_is_an_error() {
        let f = ExpSum::from_terms(vec![
            Term { coeff: c(1.0), phase: PhaseVector::zero() },
            Term {
                coeff: c(1.0),
                phase: PhaseVector::new(c(1.0), ZERO, c(1.0), None, ZERO),
            },
        ]);
        assert!(matches!(
            apply_bilinear_symbolic(&BilinearOperatorSpec::kdv(), &f, &f),
            Err(Error::MissingSigma(_))
        ));
        // integer-order operators do not need sigma
        let op = BilinearOperatorSpec { monomials: vec![Monomial::new(4, 0, false, 1.0)] };
        assert!(apply_bilinear_symbolic(&op, &f, &f).is_ok());
    }

    #[test]
    fn dispersion_examples() {
        let d = dispersion_omega(c(-1.0), order(0.5)).unwrap();
        assert_eq!((d.sigma, d.omega, d.is_real), (c(1.0), c(1.0), true));
        let d = dispersion_omega(c(-2.0), FractionalOrder::ONE).unwrap();
        assert_eq!((d.sigma, d.omega, d.is_real), (c(8.0), c(8.0), true));
        let d = dispersion_omega(c(-2.0), order(0.5)).unwrap();
        assert_eq!(d.sigma, c(8.0));
        assert!((d.omega - c(64.0)).norm() < 1e-12);
        assert!(d.is_real && d.branch_consistent);
        assert!(dispersion_omega(ZERO, order(0.5)).is_err());
    }

    #[test]
    fn positive_k_breaks_the_principal_round_trip() {
        // sigma = -1, omega = (-1)^{1/0.3} on the principal branch; omega^0.3 != -1
        let d = dispersion_omega(c(1.0), order(0.3)).unwrap();
        assert!(!d.is_real);
        assert!(!d.branch_consistent);
    }

    #[test]
    fn soliton_residuals() {
        for &a in &[0.3, 0.7, 1.0] {
            let f = one_soliton_tau(c(-1.5), c(0.2), order(a)).unwrap();
            let r = bilinear_residual_symbolic(&BilinearOperatorSpec::kdv(), &f).unwrap();
            assert!(r.residual.is_empty());
            assert_eq!(r.relative, 0.0);
        }
        assert_eq!(interaction_coefficient(c(1.0), c(2.0)).unwrap(), c(1.0 / 9.0));
        assert!(two_soliton_tau(c(1.0), c(-1.0), ZERO, ZERO, order(0.5)).is_err());
        let p = SolitonParams::two(c(-1.0), c(-1.0), ZERO, ZERO, order(0.5)).unwrap();
        assert!(p.degenerate);
        assert_eq!(p.tau().len(), 2);
    }

    #[test]
    fn constant_tau_has_zero_residual() {
        let r = bilinear_residual_symbolic(&BilinearOperatorSpec::kdv(), &ExpSum::one()).unwrap();
        assert!(r.residual.is_empty());
        assert_eq!(r.max_abs, 0.0);
    }

    #[test]
    fn kp_examples() {
        let f = kp_one_soliton(c(-1.0), c(1.0), KpSign::Minus, ZERO, FractionalOrder::ONE).unwrap();
        let p = f.terms().iter().find(|t| t.phase.k != ZERO).unwrap().phase;
        assert_eq!(p.sigma, Some(ZERO));
        assert_eq!(p.omega, ZERO);
        let f = kp_one_soliton(c(-1.0), c(1.0), KpSign::Plus, ZERO, FractionalOrder::ONE).unwrap();
        let p = f.terms().iter().find(|t| t.phase.k != ZERO).unwrap().phase;
        assert_eq!(p.sigma, Some(c(2.0)));
        assert_eq!(p.omega, c(2.0));
    }

    #[test]
    fn json_round_trip() {
        let f = two_soliton_tau(c(-1.0), c(-3.0), c(0.5), ZERO, order(0.5)).unwrap();
        let json = f.to_json();
        assert!(json.contains("\"coeff\""));
        assert!(json.find("\"coeff\"").unwrap() < json.find("\"delta\"").unwrap());
        assert_eq!(ExpSum::from_json(&json).unwrap(), f);
        assert!(!ExpSum::one().to_json().contains("null"));
    }
}
