//! Fields `u = 2 (ln F)_xx` reconstructed from tau-functions, the closed-form
//! one-soliton profile, two-soliton phase shifts and residuals of
//! `D_t^alpha u + u_xxx + 6 u u_x = 0` on space-time grids.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expsum::{dispersion_omega, interaction_coefficient, ExpSum, SolitonParams};
use crate::grid::{spectral_derivative, Boundary, FractionalOrder, GridFunction, MIN_POINTS};
use crate::marchaud::{marchaud_derivative, AnalyticFunction, Decay, Direction, QuadratureSpec};
use crate::report::{GridMeta, ResidualReport};

/// Relative size of `u` at the box edge below which x-derivatives are taken spectrally.
pub const FIELD_BOUNDARY_TOL: f64 = 1e-9;
/// Gate for the classical residual.
pub const CLASSICAL_RESIDUAL_TOL: f64 = 1e-8;
/// Gate for the closed-form profile comparison.
pub const PROFILE_TOL: f64 = 1e-12;
/// Phases with `|Re theta|` beyond this contribute nothing to `u` in double precision.
const PHASE_CUTOFF: f64 = 50.0;

/// The x-grid of `[-Lx, Lx)` with `Nx` points and a sorted list of times.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeGrid {
    lx: f64,
    nx: usize,
    times: Vec<f64>,
}

impl SpaceTimeGrid {
    pub fn new(lx: f64, nx: usize, times: Vec<f64>) -> Result<Self> {
        if nx < MIN_POINTS || !nx.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "Nx must be a power of two >= {MIN_POINTS}, got {nx}"
            )));
        }
        if !(lx.is_finite() && lx > 0.0) {
            return Err(Error::Parameter(format!("Lx must be positive, got {lx}")));
        }
        if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Parameter("time samples must be finite and non-empty".into()));
        }
        if times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parameter("time samples must be sorted".into()));
        }
        Ok(Self { lx, nx, times })
    }

    /// `nt` equispaced times from `tmin` to `tmax` inclusive.
    pub fn uniform(lx: f64, nx: usize, tmin: f64, tmax: f64, nt: usize) -> Result<Self> {
        let times = match nt {
            0 => Vec::new(),
            1 => vec![tmin],
            _ => (0..nt)
                .map(|j| tmin + (tmax - tmin) * j as f64 / (nt - 1) as f64)
                .collect(),
        };
        Self::new(lx, nx, times)
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.nx).map(|j| -self.lx + j as f64 * h).collect()
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            lx: self.lx,
            nx: self.nx,
            tmin: self.times[0],
            tmax: *self.times.last().expect("grid has times"),
            nt: self.times.len(),
        }
    }
}

/// Field values in time-major order: `values[it * Nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: SpaceTimeGrid,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn at(&self, it: usize, ix: usize) -> Complex64 {
        self.values[it * self.grid.nx + ix]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// CSV with header `x,t,u_re,u_im`.
    pub fn to_csv(&self) -> String {
        let xs = self.grid.xs();
        let mut out = String::from("x,t,u_re,u_im\n");
        for (it, &t) in self.grid.times.iter().enumerate() {
            for (ix, &x) in xs.iter().enumerate() {
                let u = self.at(it, ix);
                out.push_str(&format!("{x:.16e},{t:.16e},{:.16e},{:.16e}\n", u.re, u.im));
            }
        }
        out
    }
}

/// `F` and its exact x- and t-derivatives at one point, all scaled by a common
/// factor `e^{-m}` so that large phases do not overflow.
#[derive(Debug, Clone, Copy)]
struct TauJet {
    f: Complex64,
    fx: Complex64,
    fxx: Complex64,
    fxxx: Complex64,
    ft: Complex64,
    fxt: Complex64,
    fxxt: Complex64,
}

fn max_phase(tau: &ExpSum, x: f64, t: f64) -> f64 {
    tau.terms()
        .iter()
        .map(|term| term.phase.exponent(x, 0.0, t).re)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn tau_jet(tau: &ExpSum, x: f64, t: f64) -> Result<TauJet> {
    let shift = max_phase(tau, x, t);
    let zero = Complex64::new(0.0, 0.0);
    let mut j = TauJet {
        f: zero,
        fx: zero,
        fxx: zero,
        fxxx: zero,
        ft: zero,
        fxt: zero,
        fxxt: zero,
    };
    let mut magnitude = 0.0;
    for term in tau.terms() {
        let (k, w) = (term.phase.k, term.phase.omega);
        let e = term.coeff * (term.phase.exponent(x, 0.0, t) - shift).exp();
        magnitude += e.norm();
        j.f += e;
        j.fx += e * k;
        j.fxx += e * k * k;
        j.fxxx += e * k * k * k;
        j.ft += e * w;
        j.fxt += e * k * w;
        j.fxxt += e * k * k * w;
    }
    if j.f.norm() <= 1e-14 * magnitude || magnitude == 0.0 {
        return Err(Error::Singular {
            x,
            t,
            magnitude: j.f.norm() * shift.exp(),
        });
    }
    Ok(j)
}

/// `u`, `u_x` and `u_t` from the exact derivatives of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet {
    pub u: Complex64,
    pub u_x: Complex64,
    pub u_t: Complex64,
}

pub fn field_jet(tau: &ExpSum, x: f64, t: f64) -> Result<FieldJet> {
    let j = tau_jet(tau, x, t)?;
    let (a, b, c, d) = (j.fx / j.f, j.fxx / j.f, j.fxxx / j.f, j.ft / j.f);
    let (e, g) = (j.fxt / j.f, j.fxxt / j.f);
    // u = 2 (ln F)_xx with (ln F)_x = a
    Ok(FieldJet {
        u: (b - a * a) * 2.0,
        u_x: (c - b * a * 3.0 + a * a * a * 2.0) * 2.0,
        u_t: (g - b * d - a * e * 2.0 + a * a * d * 2.0) * 2.0,
    })
}

/// `u = 2 (F F_xx - F_x^2) / F^2` at one point.
///
/// The numerator is summed as `sum_{i<j} c_i c_j (k_i - k_j)^2 e^{theta_i + theta_j}`,
/// which has no cancellation between large terms.
pub fn field_value(tau: &ExpSum, x: f64, t: f64) -> Result<Complex64> {
    let j = tau_jet(tau, x, t)?;
    let shift = max_phase(tau, x, t);
    let scaled: Vec<(Complex64, Complex64)> = tau
        .terms()
        .iter()
        .map(|term| {
            let e = term.coeff * (term.phase.exponent(x, 0.0, t) - shift).exp();
            (e, term.phase.k)
        })
        .collect();
    let mut num = Complex64::new(0.0, 0.0);
    for (i, &(ei, ki)) in scaled.iter().enumerate() {
        for &(ej, kj) in &scaled[i + 1..] {
            let dk = ki - kj;
            num += ei * ej * dk * dk;
        }
    }
    Ok(num * 2.0 / (j.f * j.f))
}

/// `u = 2 (ln F)_xx` on every grid point.
pub fn u_from_tau(tau: &ExpSum, grid: &SpaceTimeGrid) -> Result<Field> {
    let xs = grid.xs();
    let rows: Vec<Vec<Complex64>> = grid
        .times
        .par_iter()
        .map(|&t| xs.iter().map(|&x| field_value(tau, x, t)).collect())
        .collect::<Result<_>>()?;
    Ok(Field {
        grid: grid.clone(),
        values: rows.concat(),
    })
}

/// `sech^2 z` without overflow.
fn sech2(z: f64) -> f64 {
    let e = (-2.0 * z.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `(k^2 / 2) sech^2(theta / 2)`, the field of `F = 1 + e^theta`.
pub fn soliton_profile(k: f64, omega: f64, delta: f64, x: f64, t: f64) -> f64 {
    0.5 * k * k * sech2(0.5 * (k * x + omega * t + delta))
}

/// Max deviation of the tau-reconstructed one-soliton from its closed form.
pub fn soliton_profile_check(
    k: f64,
    delta: f64,
    alpha: FractionalOrder,
    grid: &SpaceTimeGrid,
) -> Result<ResidualReport> {
    if !(k < 0.0) {
        return Err(Error::Parameter(format!(
            "the real soliton regime needs k < 0, got {k}"
        )));
    }
    let params = SolitonParams::one(Complex64::new(k, 0.0), Complex64::new(delta, 0.0), alpha)?;
    let omega = params.omega[0].re;
    let field = u_from_tau(&params.tau(), grid)?;
    let xs = grid.xs();
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0;
    for (it, &t) in grid.times.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let d = (field.at(it, ix) - soliton_profile(k, omega, delta, x, t)).norm();
            max_abs = max_abs.max(d);
            sum_sq += d * d;
        }
    }
    let l2 = (grid.spacing() * sum_sq / grid.times.len() as f64).sqrt();
    Ok(ResidualReport::new(max_abs, l2, Some(PROFILE_TOL)).with_grid(grid.meta()))
}

/// Location of the maximum of `Re u(., t)` on `[lo, hi]`, refined by bisection on `u_x`.
pub fn peak_location(tau: &ExpSum, t: f64, lo: f64, hi: f64) -> Result<f64> {
    const SCAN: usize = 4000;
    let h = (hi - lo) / SCAN as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for j in 0..=SCAN {
        let x = lo + j as f64 * h;
        let u = field_value(tau, x, t)?.re;
        if u > best.1 {
            best = (x, u);
        }
    }
    let slope = |x: f64| field_jet(tau, x, t).map(|j| j.u_x.re);
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let (sa, sb) = (slope(a)?, slope(b)?);
    if sa < 0.0 || sb > 0.0 {
        return Ok(best.0);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if slope(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Measured and predicted two-soliton phase shifts.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhaseShifts {
    pub measured: [f64; 2],
    pub predicted: [f64; 2],
    /// Max deviation of `u` from the sum of shifted one-soliton profiles at `+-t_far`.
    pub superposition_error: f64,
}

/// Peak displacement of each soliton between `-t_far` and `t_far`, against the
/// free motion `x_j = -(omega_j t + delta_j) / k_j`. Each soliton moves by
/// `-ln(A12) / k1` and `ln(A12) / k2` respectively when `|k1| < |k2|`.
pub fn two_soliton_phase_shifts(
    k1: f64,
    k2: f64,
    delta1: f64,
    delta2: f64,
    alpha: FractionalOrder,
    t_far: f64,
) -> Result<PhaseShifts> {
    if !(k1 < 0.0 && k2 < 0.0 && k1.abs() < k2.abs()) {
        return Err(Error::Parameter(format!(
            "phase shifts need real k1, k2 < 0 with |k1| < |k2|, got {k1}, {k2}"
        )));
    }
    let c = |v: f64| Complex64::new(v, 0.0);
    let params = SolitonParams::two(c(k1), c(k2), c(delta1), c(delta2), alpha)?;
    let tau = params.tau();
    let ln_a = interaction_coefficient(c(k1), c(k2))?.re.ln();
    let ks = [k1, k2];
    let deltas = [delta1, delta2];
    let omegas = [params.omega[0].re, params.omega[1].re];
    let free = |j: usize, t: f64| -(omegas[j] * t + deltas[j]) / ks[j];
    let predicted = [-ln_a / k1, ln_a / k2];
    // soliton 1 is unshifted at -t_far, soliton 2 at +t_far
    let offsets = |t: f64| -> [f64; 2] {
        if t < 0.0 {
            [0.0, -ln_a / k2]
        } else {
            [-ln_a / k1, 0.0]
        }
    };
    let mut shift = [[0.0; 2]; 2];
    let mut superposition_error = 0.0f64;
    for (side, &t) in [-t_far, t_far].iter().enumerate() {
        let off = offsets(t);
        for j in 0..2 {
            let centre = free(j, t) + off[j];
            let width = 4.0 / ks[j].abs();
            let x = peak_location(&tau, t, centre - width, centre + width)?;
            shift[side][j] = x - free(j, t);
        }
        for j in 0..2 {
            let centre = free(j, t) + off[j];
            for s in -200..=200 {
                let x = centre + s as f64 * 0.05;
                let sum: f64 = (0..2)
                    .map(|i| 0.5 * ks[i] * ks[i] * sech2(0.5 * ks[i] * (x - free(i, t) - off[i])))
                    .sum();
                let u = field_value(&tau, x, t)?;
                superposition_error = superposition_error.max((u - sum).norm());
            }
        }
    }
    Ok(PhaseShifts {
        measured: [shift[1][0] - shift[0][0], shift[1][1] - shift[0][1]],
        predicted,
        superposition_error,
    })
}

/// Time handle `t -> u(x, t)` with a support window from the phases.
fn time_slice(tau: &ExpSum, x: f64) -> AnalyticFunction {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut all_static = true;
    let mut windowed = true;
    let mut sup = 0.0f64;
    for term in tau.terms() {
        let p = term.phase;
        sup = sup.max(2.0 * p.k.norm_sqr());
        if p.omega == Complex64::new(0.0, 0.0) {
            continue;
        }
        all_static = false;
        if p.omega.im != 0.0 || p.k.im != 0.0 || p.delta.im != 0.0 {
            windowed = false;
            continue;
        }
        let base = p.k.re * x + p.delta.re;
        let a = (-PHASE_CUTOFF - base) / p.omega.re;
        let b = (PHASE_CUTOFF - base) / p.omega.re;
        lo = lo.min(a.min(b));
        hi = hi.max(a.max(b));
    }
    let decay = if all_static {
        Decay::Periodic { period: 1.0 }
    } else if windowed {
        Decay::Support { lo, hi }
    } else {
        Decay::Unknown
    };
    let tau = tau.clone();
    AnalyticFunction::new(format!("u({x}, t)"), sup, decay, move |t| {
        field_value(&tau, x, t).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// `D_t^alpha u + u_xxx + 6 u u_x` over the grid.
///
/// x-derivatives are spectral on the box-periodic sum `u(x - 2L) + u(x) + u(x + 2L)`,
/// which removes the edge kink of the truncated field. The time term is exact for `alpha = 1` and a
/// Marchaud quadrature in `t` of the exact `u(x, .)` otherwise. For `alpha < 1`
/// the report is diagnostic only. `l2` is `((1/Nt) sum_t h sum_x |r|^2)^{1/2}`.
pub fn pde_residual(
    tau: &ExpSum,
    alpha: FractionalOrder,
    grid: &SpaceTimeGrid,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    let field = u_from_tau(tau, grid)?;
    let nx = grid.nx;
    let nt = grid.times.len();
    let xs = grid.xs();
    let period = 2.0 * grid.lx;
    let wrapped: Vec<Vec<Complex64>> = grid
        .times
        .par_iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| {
                    Ok(field_value(tau, x - period, t)?
                        + field_value(tau, x, t)?
                        + field_value(tau, x + period, t)?)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // time term, laid out like the field
    let mut time_term = vec![Complex64::new(0.0, 0.0); nx * nt];
    let mut quad_error = 0.0f64;
    let mut quality_ok = true;
    if alpha.is_one() {
        let rows: Vec<Vec<Complex64>> = grid
            .times
            .par_iter()
            .map(|&t| {
                xs.iter()
                    .map(|&x| field_jet(tau, x, t).map(|j| j.u_t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        time_term = rows.concat();
    } else {
        let columns: Vec<(Vec<Complex64>, f64, bool)> = xs
            .par_iter()
            .map(|&x| {
                let slice = time_slice(tau, x);
                let out = marchaud_derivative(&slice, &grid.times, alpha, quad, Direction::Backward)?;
                Ok((out.values, out.error_estimate, out.quality_ok))
            })
            .collect::<Result<_>>()?;
        for (ix, (col, err, ok)) in columns.into_iter().enumerate() {
            quad_error = quad_error.max(err);
            quality_ok &= ok;
            for (it, v) in col.into_iter().enumerate() {
                time_term[it * nx + ix] = v;
            }
        }
    }

    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0;
    for it in 0..nt {
        let row = field.values[it * nx..(it + 1) * nx].to_vec();
        GridFunction::new(row, grid.lx)?.check_decay(FIELD_BOUNDARY_TOL)?;
        let u = GridFunction::new(wrapped[it].clone(), grid.lx)?.with_boundary(Boundary::Periodic);
        let ux = spectral_derivative(&u, 1)?;
        let uxxx = spectral_derivative(&u, 3)?;
        for ix in 0..nx {
            let r = time_term[it * nx + ix]
                + uxxx.values()[ix]
                + u.values()[ix] * ux.values()[ix] * 6.0;
            max_abs = max_abs.max(r.norm());
            sum_sq += r.norm_sqr();
        }
    }
    let l2 = (grid.spacing() * sum_sq / nt as f64).sqrt();
    let report = if alpha.is_one() {
        ResidualReport::new(max_abs, l2, Some(CLASSICAL_RESIDUAL_TOL))
    } else {
        let mut notes = String::from("formal regime α<1");
        if !quality_ok {
            notes.push_str(&format!("; quadrature error estimate {quad_error:.3e} above tolerance"));
        }
        ResidualReport::diagnostic(max_abs, l2, notes)
    };
    Ok(report.with_grid(grid.meta()))
}

/// Speed `-omega / k` of the one-soliton peak.
pub fn soliton_speed(k: f64, alpha: FractionalOrder) -> Result<f64> {
    let d = dispersion_omega(Complex64::new(k, 0.0), alpha)?;
    Ok(-d.omega.re / k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::{one_soliton_tau, two_soliton_tau};

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SpaceTimeGrid::new(30.0, 1000, vec![0.0]).is_err());
        assert!(SpaceTimeGrid::new(30.0, 1024, vec![1.0, 0.0]).is_err());
        assert!(SpaceTimeGrid::new(30.0, 1024, vec![]).is_err());
        let g = SpaceTimeGrid::uniform(30.0, 1024, -2.0, 2.0, 5).unwrap();
        assert_eq!(g.times(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn constant_tau_gives_zero_field() {
        let g = SpaceTimeGrid::uniform(10.0, 64, 0.0, 1.0, 3).unwrap();
        let u = u_from_tau(&ExpSum::one(), &g).unwrap();
        assert_eq!(u.max_abs(), 0.0);
    }

    #[test]
    fn soliton_peak_value() {
        let tau = one_soliton_tau(c(-1.0), c(0.0), order(0.5)).unwrap();
        assert!((field_value(&tau, 0.0, 0.0).unwrap() - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn vanishing_tau_is_singular() {
        // 1 - e^{x} vanishes at x = 0
        let mut tau = one_soliton_tau(c(1.0), c(0.0), FractionalOrder::ONE).unwrap();
        let terms: Vec<_> = tau
            .terms()
            .iter()
            .map(|t| {
                let mut t = *t;
                if t.phase.k != c(0.0) {
                    t.coeff = -t.coeff;
                    t.phase.omega = c(0.0);
                }
                t
            })
            .collect();
        tau = ExpSum::from_terms(terms);
        let g = SpaceTimeGrid::new(4.0, 8, vec![0.0]).unwrap();
        assert!(matches!(u_from_tau(&tau, &g), Err(Error::Singular { .. })));
    }

    #[test]
    fn jet_matches_finite_differences() {
        let tau = two_soliton_tau(c(-1.0), c(-2.0), c(0.3), c(-0.4), FractionalOrder::ONE).unwrap();
        let (x, t, h) = (0.4, 0.2, 1e-5);
        let j = field_jet(&tau, x, t).unwrap();
        let ux = (field_value(&tau, x + h, t).unwrap() - field_value(&tau, x - h, t).unwrap()) / (2.0 * h);
        let ut = (field_value(&tau, x, t + h).unwrap() - field_value(&tau, x, t - h).unwrap()) / (2.0 * h);
        assert!((j.u_x - ux).norm() < 1e-8);
        assert!((j.u_t - ut).norm() < 1e-7);
    }

    #[test]
    fn large_phases_do_not_overflow() {
        let tau = one_soliton_tau(c(-1.0), c(0.0), FractionalOrder::ONE).unwrap();
        let u = field_value(&tau, -900.0, 0.0).unwrap();
        assert!(u.re.is_finite() && u.re.abs() < 1e-300);
    }

    #[test]
    fn profile_check_small_grid() {
        let g = SpaceTimeGrid::new(30.0, 256, vec![-1.0, 0.0, 1.0]).unwrap();
        let r = soliton_profile_check(-1.0, 0.0, order(0.5), &g).unwrap();
        assert_eq!(r.pass, Some(true), "{r:?}");
        assert!(soliton_profile_check(1.0, 0.0, order(0.5), &g).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let g = SpaceTimeGrid::new(1.0, 8, vec![0.0, 0.5]).unwrap();
        let tau = one_soliton_tau(c(-1.0), c(0.0), FractionalOrder::ONE).unwrap();
        let csv = u_from_tau(&tau, &g).unwrap().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "x,t,u_re,u_im");
        assert_eq!(lines.len(), 17);
        assert!(lines[1].starts_with("-1.0000000000000000e0,0.0000000000000000e0,"));
    }

    #[test]
    fn classical_residual_small_grid() {
        let tau = one_soliton_tau(c(-1.0), c(0.0), FractionalOrder::ONE).unwrap();
        let g = SpaceTimeGrid::uniform(30.0, 512, -2.0, 2.0, 3).unwrap();
        let r = pde_residual(&tau, FractionalOrder::ONE, &g, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.pass, Some(true), "{r:?}");
    }

    #[test]
    fn undecayed_field_is_rejected() {
        let tau = one_soliton_tau(c(-1.0), c(0.0), FractionalOrder::ONE).unwrap();
        let g = SpaceTimeGrid::uniform(5.0, 64, 0.0, 0.0, 1).unwrap();
        assert!(matches!(
            pde_residual(&tau, FractionalOrder::ONE, &g, &QuadratureSpec::default()),
            Err(Error::BoundaryDecay { .. })
        ));
    }
}
