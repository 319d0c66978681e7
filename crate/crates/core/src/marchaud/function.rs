//! Function handles that can be evaluated anywhere on the real line.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{fft_in_place, mode_index, Boundary, GridFunction};

/// Where a handle is non-negligible, as far as quadrature is concerned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|f|` is below double-precision relevance outside `[lo, hi]`.
    Support { lo: f64, hi: f64 },
    /// `f(x + period) = f(x)`.
    Periodic { period: f64 },
    /// No structural information; tails are truncated at `Ymax`.
    Unknown,
}

type Handle = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A scalar function with a sup-norm bound and decay metadata.
#[derive(Clone)]
pub struct AnalyticFunction {
    func: Handle,
    sup_bound: f64,
    decay: Decay,
    label: String,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("label", &self.label)
            .field("sup_bound", &self.sup_bound)
            .field("decay", &self.decay)
            .finish()
    }
}

// exp(-49) ~ 5e-22
const GAUSS_RADIUS: f64 = 7.0;
// 2 exp(-43) ~ 4e-19
const SECH_RADIUS: f64 = 43.0;

impl AnalyticFunction {
    pub fn new(
        label: impl Into<String>,
        sup_bound: f64,
        decay: Decay,
        func: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            func: Arc::new(func),
            sup_bound,
            decay,
            label: label.into(),
        }
    }

    pub fn real(
        label: impl Into<String>,
        sup_bound: f64,
        decay: Decay,
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, sup_bound, decay, move |x| Complex64::new(func(x), 0.0))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.func)(x)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `exp(-(x - c)^2)`.
    pub fn gaussian(center: f64) -> Self {
        Self::real(
            format!("gaussian({center})"),
            1.0,
            Decay::Support {
                lo: center - GAUSS_RADIUS,
                hi: center + GAUSS_RADIUS,
            },
            move |x| (-(x - center) * (x - center)).exp(),
        )
    }

    /// `x exp(-x^2)`.
    pub fn x_gaussian() -> Self {
        Self::real(
            "x*gaussian",
            (0.5f64).sqrt() * (-0.5f64).exp(),
            Decay::Support {
                lo: -GAUSS_RADIUS,
                hi: GAUSS_RADIUS,
            },
            |x| x * (-x * x).exp(),
        )
    }

    /// `sech(x - c)`.
    pub fn sech(center: f64) -> Self {
        Self::real(
            format!("sech({center})"),
            1.0,
            Decay::Support {
                lo: center - SECH_RADIUS,
                hi: center + SECH_RADIUS,
            },
            move |x| {
                let z = (x - center).abs();
                let e = (-z).exp();
                2.0 * e / (1.0 + e * e)
            },
        )
    }

    /// `exp(i k x)`.
    pub fn mode(k: f64) -> Self {
        if k == 0.0 {
            return Self::constant(Complex64::new(1.0, 0.0));
        }
        Self::new(
            format!("mode({k})"),
            1.0,
            Decay::Periodic {
                period: 2.0 * PI / k.abs(),
            },
            move |x| Complex64::new(0.0, k * x).exp(),
        )
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(
            "constant",
            c.norm(),
            Decay::Periodic { period: 1.0 },
            move |_| c,
        )
    }

    /// `2L`-periodic extension of the restriction of `self` to `[-L, L)`.
    pub fn periodized(&self, half_length: f64) -> Self {
        let inner = self.func.clone();
        let period = 2.0 * half_length;
        Self {
            func: Arc::new(move |x| {
                let r = (x + half_length).rem_euclid(period) - half_length;
                inner(r)
            }),
            sup_bound: self.sup_bound,
            decay: Decay::Periodic { period },
            label: format!("periodized[{}](L={half_length})", self.label),
        }
    }

    /// Trigonometric interpolant of grid data, evaluated by direct summation.
    pub fn trig_interpolant(f: &GridFunction) -> Self {
        let n = f.len();
        let l = f.half_length();
        let mut coeffs = f.values().to_vec();
        fft_in_place(&mut coeffs, false);
        let mut terms = Vec::new();
        for (m, c) in coeffs.iter().enumerate() {
            let idx = mode_index(m, n);
            let c = c / n as f64;
            if c.norm() == 0.0 {
                continue;
            }
            if idx == -(n as i64) / 2 {
                // split the Nyquist bin to keep the interpolant real for real data
                let k = PI * idx as f64 / l;
                terms.push((c * 0.5, k));
                terms.push((c * 0.5, -k));
            } else {
                terms.push((c, PI * idx as f64 / l));
            }
        }
        let sup: f64 = terms.iter().map(|(c, _)| c.norm()).sum();
        Self::new(
            format!("trig_interpolant(N={n}, L={l})"),
            sup,
            Decay::Periodic { period: 2.0 * l },
            move |x| {
                terms
                    .iter()
                    .map(|(c, k)| c * Complex64::new(0.0, k * (x + l)).exp())
                    .sum()
            },
        )
    }

    /// Sample onto `[-L, L)`; periodic handles produce periodic grid data.
    pub fn sample(&self, half_length: f64, n: usize) -> Result<GridFunction> {
        let g = GridFunction::sample(half_length, n, |x| self.eval(x))?;
        Ok(match self.decay {
            Decay::Periodic { .. } => g.with_boundary(Boundary::Periodic),
            _ => g,
        })
    }
}
