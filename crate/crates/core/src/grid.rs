//! Uniform periodic grids, the internal FFT pair, the spectral fractional
//! derivative and discrete Sobolev norms.
//!
//! A [`GridFunction`] samples a function on `[-L, L)` at `N` equispaced points
//! `x_j = -L + j h`, `h = 2L/N`. Decaying functions on the real line are
//! represented by their restriction to a large box; exactly periodic data
//! (Fourier modes, band-limited trigonometric polynomials) can be flagged as
//! such so the boundary-decay guard does not apply.
//!
//! Transform convention: `spectrum` returns `f^(k_n) = h * sum_j f(x_j) e^{-i k_n x_j}`,
//! the Riemann-sum approximation of `integral f(x) e^{-ikx} dx`. Multipliers are
//! applied as `IDFT(symbol * DFT(f)) / N`, which is the same operator without the
//! redundant rescaling.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bilinear::{hirota_classical, hirota_frac_commutator};
use crate::error::{Error, Result};

/// Relative magnitude, compared with `max |f|`, a decaying function may keep at the box edge.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Smallest admissible grid size.
pub const MIN_POINTS: usize = 8;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized in-place DFT (`inverse` selects the `e^{+i...}` kernel).
pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    plan.process(buf);
}

/// Signed mode index `n` of FFT slot `m`: `0, 1, ..., N/2-1, -N/2, ..., -1`.
#[inline]
pub(crate) fn mode_index(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Fractional order `alpha` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Parameter(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )))
        }
    }

    /// Order restricted to the open interval `(0, 1)`, as the Marchaud forms require.
    pub fn new_open(alpha: f64) -> Result<Self> {
        let a = Self::new(alpha)?;
        if a.is_one() {
            return Err(Error::Parameter(
                "the Marchaud representation requires alpha < 1".into(),
            ));
        }
        Ok(a)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(a: FractionalOrder) -> f64 {
        a.0
    }
}

/// How the samples relate to the box edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// A decaying function on the real line; must be negligible near `+-L`.
    Decaying,
    /// Exactly `2L`-periodic data.
    Periodic,
}

/// Complex samples on the uniform periodic grid of `[-L, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<Complex64>,
    half_length: f64,
    boundary: Boundary,
}

fn validate_grid(n: usize, half_length: f64) -> Result<()> {
    if n < MIN_POINTS || !n.is_power_of_two() {
        return Err(Error::Parameter(format!(
            "grid size must be a power of two >= {MIN_POINTS}, got {n}"
        )));
    }
    if !(half_length.is_finite() && half_length > 0.0) {
        return Err(Error::Parameter(format!(
            "half length must be positive, got {half_length}"
        )));
    }
    Ok(())
}

impl GridFunction {
    /// Samples of a decaying function.
    pub fn new(values: Vec<Complex64>, half_length: f64) -> Result<Self> {
        validate_grid(values.len(), half_length)?;
        Ok(Self {
            values,
            half_length,
            boundary: Boundary::Decaying,
        })
    }

    /// Samples of exactly periodic data.
    pub fn periodic(values: Vec<Complex64>, half_length: f64) -> Result<Self> {
        let mut g = Self::new(values, half_length)?;
        g.boundary = Boundary::Periodic;
        Ok(g)
    }

    pub fn sample(half_length: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        validate_grid(n, half_length)?;
        let h = 2.0 * half_length / n as f64;
        let values = (0..n).map(|j| f(-half_length + j as f64 * h)).collect();
        Self::new(values, half_length)
    }

    pub fn sample_real(half_length: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::sample(half_length, n, |x| Complex64::new(f(x), 0.0))
    }

    pub fn sample_periodic(
        half_length: f64,
        n: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let mut g = Self::sample(half_length, n, f)?;
        g.boundary = Boundary::Periodic;
        Ok(g)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    /// Same grid and boundary flag, new values.
    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            values,
            half_length: self.half_length,
            boundary: self.boundary,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.values.len() as f64
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn wavenumbers(&self) -> WavenumberGrid {
        WavenumberGrid::new(self.half_length, self.len())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Physical-space L2 norm `(h sum |f_j|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Largest `|f|` over the two samples adjacent to the box edge.
    pub fn boundary_magnitude(&self) -> f64 {
        let n = self.len();
        self.values[0].norm().max(self.values[n - 1].norm())
    }

    /// Errors unless the edge samples are below `tol * max |f|`.
    pub fn check_decay(&self, tol: f64) -> Result<()> {
        let max = self.max_abs();
        let boundary = self.boundary_magnitude();
        if boundary > tol * max {
            return Err(Error::BoundaryDecay {
                boundary,
                max,
                tolerance: tol,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_admissible(&self) -> Result<()> {
        match self.boundary {
            Boundary::Decaying => self.check_decay(BOUNDARY_TOL),
            Boundary::Periodic => Ok(()),
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.len() != other.len() || self.half_length != other.half_length {
            return Err(Error::GridMismatch {
                l1: self.half_length,
                n1: self.len(),
                l2: other.half_length,
                n2: other.len(),
            });
        }
        Ok(())
    }

    /// Max pointwise distance to another function on the same grid.
    pub fn max_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `||self - other||_2 / ||other||_2` in the discrete L2 norm.
    pub fn rel_l2_diff(&self, other: &GridFunction) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }

    fn combine_boundary(&self, other: &GridFunction) -> Boundary {
        if self.boundary == Boundary::Periodic || other.boundary == Boundary::Periodic {
            Boundary::Periodic
        } else {
            Boundary::Decaying
        }
    }

    fn zip_with(&self, other: &GridFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        self.same_grid(other).expect("grid functions on different grids");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
            half_length: self.half_length,
            boundary: self.combine_boundary(other),
        }
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.with_values(self.values.iter().map(|v| -v).collect())
    }
}

impl Mul<Complex64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: Complex64) -> GridFunction {
        self.with_values(self.values.iter().map(|v| v * rhs).collect())
    }
}

/// Wavenumbers `k_n = pi n / L` in FFT ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberGrid {
    modes: Vec<f64>,
    half_length: f64,
}

impl WavenumberGrid {
    pub fn new(half_length: f64, n: usize) -> Self {
        let modes = (0..n)
            .map(|m| PI * mode_index(m, n) as f64 / half_length)
            .collect();
        Self { modes, half_length }
    }

    pub fn modes(&self) -> &[f64] {
        &self.modes
    }

    /// FFT slot holding `n = -N/2`.
    pub fn nyquist_slot(&self) -> usize {
        self.modes.len() / 2
    }

    pub fn is_nyquist(&self, slot: usize) -> bool {
        slot == self.nyquist_slot()
    }

    /// Mode spacing `pi / L`.
    pub fn spacing(&self) -> f64 {
        PI / self.half_length
    }
}

/// `(ik)^alpha` on the principal branch; `0` at `k = 0`.
///
/// For `alpha = 1` this returns `ik` exactly, so the first-order derivative and
/// the fractional derivative at `alpha = 1` share one code path.
pub fn principal_power_ik(k: f64, alpha: FractionalOrder) -> Complex64 {
    if k == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if alpha.is_one() {
        return Complex64::new(0.0, k);
    }
    let a = alpha.value();
    let modulus = k.abs().powf(a);
    let phase = a * FRAC_PI_2;
    Complex64::new(modulus * phase.cos(), modulus * phase.sin() * k.signum())
}

/// `(ik)^m` for integer `m`, computed by repeated multiplication.
pub(crate) fn integer_power_ik(k: f64, m: u32) -> Complex64 {
    let ik = Complex64::new(0.0, k);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        acc *= ik;
    }
    acc
}

/// Multiplier symbol on the FFT slots; the Nyquist slot is always zeroed.
pub(crate) fn symbol_table(
    half_length: f64,
    n: usize,
    symbol: impl Fn(f64) -> Complex64,
) -> Vec<Complex64> {
    let waves = WavenumberGrid::new(half_length, n);
    waves
        .modes()
        .iter()
        .enumerate()
        .map(|(m, &k)| {
            if waves.is_nyquist(m) {
                Complex64::new(0.0, 0.0)
            } else {
                symbol(k)
            }
        })
        .collect()
}

/// `IDFT(symbol * DFT(values)) / N`.
pub(crate) fn apply_symbol(f: &GridFunction, symbol: impl Fn(f64) -> Complex64) -> GridFunction {
    let n = f.len();
    let table = symbol_table(f.half_length(), n, symbol);
    let mut buf = f.values().to_vec();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / n as f64;
    for (b, s) in buf.iter_mut().zip(&table) {
        *b = *b * *s * scale;
    }
    fft_in_place(&mut buf, true);
    f.with_values(buf)
}

/// Integral-convention spectrum `f^(k_n)` in FFT ordering.
pub fn spectrum(f: &GridFunction) -> Vec<Complex64> {
    let n = f.len();
    let h = f.spacing();
    let mut buf = f.values().to_vec();
    fft_in_place(&mut buf, false);
    // x_0 = -L contributes the factor e^{i k_n L} = (-1)^n
    for (m, b) in buf.iter_mut().enumerate() {
        let sign = if mode_index(m, n) % 2 == 0 { 1.0 } else { -1.0 };
        *b *= h * sign;
    }
    buf
}

/// Spectral fractional derivative with symbol `(ik)^alpha`.
pub fn spectral_frac_derivative(f: &GridFunction, alpha: FractionalOrder) -> Result<GridFunction> {
    f.ensure_admissible()?;
    Ok(apply_symbol(f, |k| principal_power_ik(k, alpha)))
}

/// Exact spectral derivative of integer order; order 1 is bitwise the `alpha = 1`
/// fractional derivative.
pub fn spectral_derivative(f: &GridFunction, order: u32) -> Result<GridFunction> {
    f.ensure_admissible()?;
    Ok(match order {
        0 => f.clone(),
        1 => apply_symbol(f, |k| principal_power_ik(k, FractionalOrder::ONE)),
        m => apply_symbol(f, |k| integer_power_ik(k, m)),
    })
}

/// Discrete `H^s` norm: `((1/2pi) sum_n (1 + k_n^2)^s |f^(k_n)|^2 dk)^{1/2}`, `dk = pi/L`.
pub fn sobolev_norm(f: &GridFunction, s: f64) -> f64 {
    let spec = spectrum(f);
    let waves = f.wavenumbers();
    let dk = waves.spacing();
    let sum: f64 = spec
        .iter()
        .zip(waves.modes())
        .map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr())
        .sum();
    (sum * dk / (2.0 * PI)).sqrt()
}

/// One row of [`limit_convergence_check`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LimitRow {
    pub alpha: f64,
    pub distance: f64,
}

/// `||D^alpha f.g - D f.g||_{H^{s-1}}` for each order in `alphas`.
pub fn limit_convergence_check(
    f: &GridFunction,
    g: &GridFunction,
    s: f64,
    alphas: &[FractionalOrder],
) -> Result<Vec<LimitRow>> {
    if s <= 0.5 {
        return Err(Error::Parameter(format!(
            "the classical limit is stated in H^(s-1) with s > 1/2, got s = {s}"
        )));
    }
    let classical = hirota_classical(f, g, 1)?;
    alphas
        .iter()
        .map(|&alpha| {
            let frac = hirota_frac_commutator(f, g, alpha)?;
            Ok(LimitRow {
                alpha: alpha.value(),
                distance: sobolev_norm(&(&frac - &classical), s - 1.0),
            })
        })
        .collect()
}
