//! The fractional Hirota bilinear operator in commutator, symbol and kernel
//! form, classical integer-order Hirota operators, and an empirical probe of
//! the Sobolev product bound.
//!
//! Products are dealiased by 2x zero padding: both factors are moved to a grid
//! of `2N` points, multiplied there, and the product is truncated back to the
//! `N` retained modes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{
    fft_in_place, mode_index, principal_power_ik, sobolev_norm, spectral_derivative,
    spectral_frac_derivative, symbol_table, FractionalOrder, GridFunction,
};
use crate::marchaud::{hirota_frac_kernel, AnalyticFunction, Decay, QuadratureSpec};

/// Spectral coefficients `c_m = DFT(values)_m / N` in FFT ordering.
fn coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Values on the `2N` grid of the trigonometric polynomial with coefficients `c`.
fn padded_values(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let mut p = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (m, &cm) in c.iter().enumerate() {
        let idx = mode_index(m, n);
        if idx == -(n as i64) / 2 {
            p[n / 2] += cm * 0.5;
            p[3 * n / 2] += cm * 0.5;
        } else if idx >= 0 {
            p[m] = cm;
        } else {
            p[m + n] = cm;
        }
    }
    fft_in_place(&mut p, true);
    p
}

fn to_padded(f: &GridFunction) -> Vec<Complex64> {
    padded_values(&coefficients(f.values()))
}

/// Truncate `2N` grid values back to the `N` retained modes.
fn from_padded(values: Vec<Complex64>) -> Vec<Complex64> {
    let n = values.len() / 2;
    let d = coefficients(&values);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[0] = d[0];
    for j in 1..n / 2 {
        e[j] = d[j];
        e[n - j] = d[2 * n - j];
    }
    e[n / 2] = d[n / 2] + d[3 * n / 2];
    fft_in_place(&mut e, true);
    e
}

/// `a * b - c * d` on padded grids, truncated.
fn padded_difference(
    a: &[Complex64],
    b: &[Complex64],
    c: &[Complex64],
    d: &[Complex64],
) -> Vec<Complex64> {
    let prod = a
        .iter()
        .zip(b)
        .zip(c.iter().zip(d))
        .map(|((a, b), (c, d))| a * b - c * d)
        .collect();
    from_padded(prod)
}

/// Dealiased pointwise product `f g`.
pub fn dealiased_product(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.same_grid(g)?;
    let prod = to_padded(f)
        .iter()
        .zip(&to_padded(g))
        .map(|(a, b)| a * b)
        .collect();
    Ok(f.with_values(from_padded(prod)))
}

/// `(D^alpha f) g - f (D^alpha g)`.
///
/// Swapping `f` and `g` negates every floating-point operation, so the result is
/// exactly skew-symmetric and vanishes exactly on the diagonal.
pub fn hirota_frac_commutator(
    f: &GridFunction,
    g: &GridFunction,
    alpha: FractionalOrder,
) -> Result<GridFunction> {
    f.same_grid(g)?;
    let df = spectral_frac_derivative(f, alpha)?;
    let dg = spectral_frac_derivative(g, alpha)?;
    let values = padded_difference(&to_padded(&df), &to_padded(g), &to_padded(f), &to_padded(&dg));
    Ok((f + g).with_values(values))
}

/// Bilinear multiplier `[(ik1)^alpha - (ik2)^alpha] f^(k1) g^(k2)`, evaluated as two
/// multiplier passes applied directly to the spectral coefficients.
pub fn hirota_frac_symbol(
    f: &GridFunction,
    g: &GridFunction,
    alpha: FractionalOrder,
) -> Result<GridFunction> {
    f.same_grid(g)?;
    f.ensure_admissible()?;
    g.ensure_admissible()?;
    let table = symbol_table(f.half_length(), f.len(), |k| principal_power_ik(k, alpha));
    let cf = coefficients(f.values());
    let cg = coefficients(g.values());
    let weighted = |c: &[Complex64]| -> Vec<Complex64> {
        c.iter().zip(&table).map(|(c, s)| c * s).collect()
    };
    let values = padded_difference(
        &padded_values(&weighted(&cf)),
        &padded_values(&cg),
        &padded_values(&cf),
        &padded_values(&weighted(&cg)),
    );
    Ok((f + g).with_values(values))
}

fn binomial(n: u32, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Classical Hirota derivative `sum_m (-1)^m C(n, m) (d^{n-m} f)(d^m g)`.
pub fn hirota_classical(f: &GridFunction, g: &GridFunction, n: u32) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::Parameter("Hirota order must be at least 1".into()));
    }
    f.same_grid(g)?;
    let df: Vec<Vec<Complex64>> = (0..=n)
        .map(|m| spectral_derivative(f, m).map(|d| to_padded(&d)))
        .collect::<Result<_>>()?;
    let dg: Vec<Vec<Complex64>> = (0..=n)
        .map(|m| spectral_derivative(g, m).map(|d| to_padded(&d)))
        .collect::<Result<_>>()?;
    let len = 2 * f.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    for m in 0..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binomial(n, m);
        let (a, b) = (&df[(n - m) as usize], &dg[m as usize]);
        for j in 0..len {
            acc[j] += a[j] * b[j] * c;
        }
    }
    Ok((f + g).with_values(from_padded(acc)))
}

/// Which realization of the fractional bilinear operator produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BilinearForm {
    Commutator,
    Kernel,
    Symbol,
}

/// Quadrature quality of a kernel-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureDiagnostics {
    pub error_estimate: f64,
    pub tail_bound: f64,
    pub quality_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearResult {
    pub values: GridFunction,
    pub form_used: BilinearForm,
    pub diagnostics: Option<QuadratureDiagnostics>,
}

/// Fractional bilinear operator of two handles on the grid of `[-L, L)` with `n` points.
///
/// The grid forms act on the box-periodic extension of the handles, so the
/// kernel form is evaluated on that extension too.
pub fn hirota_frac_on_grid(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    half_length: f64,
    n: usize,
    alpha: FractionalOrder,
    form: BilinearForm,
    quad: &QuadratureSpec,
) -> Result<BilinearResult> {
    let fs = f.sample(half_length, n)?;
    let gs = g.sample(half_length, n)?;
    let (values, diagnostics) = match form {
        BilinearForm::Commutator => (hirota_frac_commutator(&fs, &gs, alpha)?, None),
        BilinearForm::Symbol => (hirota_frac_symbol(&fs, &gs, alpha)?, None),
        BilinearForm::Kernel => {
            let fp = box_periodic(f, half_length);
            let gp = box_periodic(g, half_length);
            let out = hirota_frac_kernel(&fp, &gp, &fs.xs(), alpha, quad)?;
            let diag = QuadratureDiagnostics {
                error_estimate: out.error_estimate,
                tail_bound: out.tail_bound,
                quality_ok: out.quality_ok,
            };
            ((&fs + &gs).with_values(out.values), Some(diag))
        }
    };
    Ok(BilinearResult {
        values,
        form_used: form,
        diagnostics,
    })
}

/// Kernel form of two handles evaluated at the points of `like`'s grid.
pub fn hirota_frac_kernel_grid(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    like: &GridFunction,
    alpha: FractionalOrder,
    quad: &QuadratureSpec,
) -> Result<GridFunction> {
    let out = hirota_frac_kernel(f, g, &like.xs(), alpha, quad)?;
    Ok(like.with_values(out.values))
}

fn box_periodic(f: &AnalyticFunction, half_length: f64) -> AnalyticFunction {
    match f.decay() {
        Decay::Periodic { period } if is_box_commensurate(period, half_length) => f.clone(),
        _ => f.periodized(half_length),
    }
}

fn is_box_commensurate(period: f64, half_length: f64) -> bool {
    let r = 2.0 * half_length / period;
    (r - r.round()).abs() < 1e-12 * r.max(1.0)
}

/// Test-function families for [`sobolev_bound_probe`].
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeFamily {
    /// Pairs from [`random_pairs`] with `|n| < base_n / 4`, the same
    /// polynomials sampled at `base_n` and `2 base_n`.
    BandLimited {
        half_length: f64,
        base_n: usize,
        envelope: f64,
        seed: u64,
        /// Use `g = f` in every trial.
        diagonal: bool,
    },
    /// Pairs of single modes `(e^{i pi n1 x / L}, e^{i pi n2 x / L})`.
    SingleModes {
        half_length: f64,
        base_n: usize,
        pairs: Vec<(i64, i64)>,
    },
}

impl ProbeFamily {
    pub fn band_limited(half_length: f64, base_n: usize, seed: u64) -> Self {
        Self::BandLimited {
            half_length,
            base_n,
            envelope: 4.0,
            seed,
            diagonal: false,
        }
    }

    fn grid(&self) -> (f64, usize) {
        match *self {
            Self::BandLimited {
                half_length,
                base_n,
                ..
            }
            | Self::SingleModes {
                half_length,
                base_n,
                ..
            } => (half_length, base_n),
        }
    }
}

/// Outcome of the probe at the base grid and its refinement.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub n_refined: usize,
    pub trials: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub max_ratio_refined: f64,
    /// `(max_refined - max) / max`, or 0 when both vanish.
    pub growth: f64,
    /// Finite maximum that grows by less than 10% under refinement.
    pub refinement_stable: bool,
}

/// A trigonometric polynomial `sum c_n e^{i pi n (x + L) / L}` on `[-L, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    half_length: f64,
    terms: Vec<(i64, Complex64)>,
}

impl TrigPolynomial {
    pub fn new(half_length: f64, terms: Vec<(i64, Complex64)>) -> Self {
        Self { half_length, terms }
    }

    pub fn mode(half_length: f64, n: i64) -> Self {
        Self::new(half_length, vec![(n, Complex64::new(1.0, 0.0))])
    }

    /// Random real polynomial with `|n| < max_mode`, `c_n = (a + ib) exp(-(k_n / envelope)^2)`,
    /// `a, b` standard normal, `c_{-n} = conj(c_n)`.
    pub fn random_real(half_length: f64, max_mode: i64, envelope: f64, rng: &mut ChaCha8Rng) -> Self {
        let mut terms = Vec::with_capacity(2 * max_mode.max(1) as usize);
        let a: f64 = StandardNormal.sample(rng);
        terms.push((0, Complex64::new(a, 0.0)));
        for n in 1..max_mode {
            let k = PI * n as f64 / half_length;
            let env = (-(k / envelope).powi(2)).exp();
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            let c = Complex64::new(a, b) * env;
            terms.push((n, c));
            terms.push((-n, c.conj()));
        }
        Self::new(half_length, terms)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    /// Largest `|n|` present.
    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(n, _)| n.abs()).max().unwrap_or(0)
    }

    /// Exactly periodic samples on `n` points; modes must satisfy `|m| < n / 2`.
    pub fn sample(&self, n: usize) -> Result<GridFunction> {
        if self.degree() >= (n / 2) as i64 {
            return Err(Error::Parameter(format!(
                "degree {} is not resolved on {n} points",
                self.degree()
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for &(m, c) in &self.terms {
            buf[m.rem_euclid(n as i64) as usize] += c;
        }
        fft_in_place(&mut buf, true);
        GridFunction::periodic(buf, self.half_length)
    }

    /// Evaluable handle with period `2L`.
    pub fn handle(&self) -> AnalyticFunction {
        let l = self.half_length;
        let terms: Vec<(f64, Complex64)> = self
            .terms
            .iter()
            .map(|&(n, c)| (PI * n as f64 / l, c))
            .collect();
        let sup = terms.iter().map(|(_, c)| c.norm()).sum();
        AnalyticFunction::new(
            format!("trig(L={l}, degree={})", self.degree()),
            sup,
            Decay::Periodic { period: 2.0 * l },
            move |x| {
                terms
                    .iter()
                    .map(|(k, c)| c * Complex64::new(0.0, k * (x + l)).exp())
                    .sum()
            },
        )
    }
}

/// Seeded stream of random real band-limited pairs.
pub fn random_pairs(
    half_length: f64,
    max_mode: i64,
    envelope: f64,
    seed: u64,
    count: usize,
) -> Vec<(TrigPolynomial, TrigPolynomial)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let f = TrigPolynomial::random_real(half_length, max_mode, envelope, &mut rng);
            let g = TrigPolynomial::random_real(half_length, max_mode, envelope, &mut rng);
            (f, g)
        })
        .collect()
}

fn probe_ratio(
    pair: &(TrigPolynomial, TrigPolynomial),
    n: usize,
    s: f64,
    alpha: FractionalOrder,
) -> Result<f64> {
    let f = pair.0.sample(n)?;
    let g = pair.1.sample(n)?;
    let b = hirota_frac_commutator(&f, &g, alpha)?;
    let num = sobolev_norm(&b, s - alpha.value());
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / (sobolev_norm(&f, s) * sobolev_norm(&g, s)))
}

/// Max of `||D^alpha f.g||_{H^{s-alpha}} / (||f||_{H^s} ||g||_{H^s})` over `trials`
/// pairs of the family, at the family's grid and at twice its resolution.
pub fn sobolev_bound_probe(
    family: &ProbeFamily,
    s: f64,
    alpha: FractionalOrder,
    trials: usize,
) -> Result<ProbeReport> {
    if s <= 0.5 {
        return Err(Error::Parameter(format!(
            "the product bound needs s > 1/2, got s = {s}"
        )));
    }
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    let (half_length, n) = family.grid();
    let pairs: Vec<(TrigPolynomial, TrigPolynomial)> = match family {
        ProbeFamily::BandLimited {
            envelope,
            seed,
            diagonal,
            ..
        } => {
            let max_mode = (n / 4) as i64;
            if *diagonal {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..trials)
                    .map(|_| {
                        let f = TrigPolynomial::random_real(half_length, max_mode, *envelope, &mut rng);
                        (f.clone(), f)
                    })
                    .collect()
            } else {
                random_pairs(half_length, max_mode, *envelope, *seed, trials)
            }
        }
        ProbeFamily::SingleModes { pairs, .. } => {
            if pairs.is_empty() {
                return Err(Error::Parameter("single-mode family has no pairs".into()));
            }
            let limit = (n / 4) as i64;
            if let Some(p) = pairs.iter().find(|(a, b)| a.abs() >= limit || b.abs() >= limit) {
                return Err(Error::Parameter(format!(
                    "mode pair {p:?} is outside the dealiased band |n| < {limit}"
                )));
            }
            pairs
                .iter()
                .cycle()
                .take(trials)
                .map(|&(a, b)| {
                    (
                        TrigPolynomial::mode(half_length, a),
                        TrigPolynomial::mode(half_length, b),
                    )
                })
                .collect()
        }
    };
    let eval = |n: usize| -> Result<Vec<f64>> {
        pairs
            .par_iter()
            .map(|p| probe_ratio(p, n, s, alpha))
            .collect()
    };
    let ratios = eval(n)?;
    let refined = eval(2 * n)?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let max_ratio_refined = refined.iter().copied().fold(0.0, f64::max);
    let growth = if max_ratio > 0.0 {
        (max_ratio_refined - max_ratio) / max_ratio
    } else if max_ratio_refined > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(ProbeReport {
        n,
        n_refined: 2 * n,
        trials,
        ratios,
        max_ratio,
        max_ratio_refined,
        growth,
        refinement_stable: max_ratio.is_finite() && growth < 0.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn mode(k: f64) -> GridFunction {
        GridFunction::sample_periodic(PI, 64, |x| Complex64::new(0.0, k * x).exp()).unwrap()
    }

    #[test]
    fn padding_round_trip_is_identity() {
        let f = GridFunction::sample_real(10.0, 64, |x| (-x * x).exp()).unwrap();
        let back = from_padded(to_padded(&f));
        let err = back
            .iter()
            .zip(f.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn dealiased_product_of_modes() {
        let p = dealiased_product(&mode(3.0), &mode(-5.0)).unwrap();
        assert!(p.max_diff(&mode(-2.0)) < 1e-13);
        // the Nyquist mode survives as a sample-consistent bin
        let q = dealiased_product(&mode(16.0), &mode(16.0)).unwrap();
        assert!(q.max_diff(&mode(32.0)) < 1e-13);
    }

    #[test]
    fn commutator_on_modes() {
        let half = order(0.5);
        let got = hirota_frac_commutator(&mode(1.0), &mode(2.0), half).unwrap();
        let factor = principal_power_ik(1.0, half) - principal_power_ik(2.0, half);
        assert!(got.max_diff(&(&mode(3.0) * factor)) <= 1e-12);
    }

    #[test]
    fn diagonal_and_skew_are_exact() {
        let f = GridFunction::sample_real(20.0, 256, |x| (-x * x).exp()).unwrap();
        let g = GridFunction::sample_real(20.0, 256, |x| x * (-x * x).exp()).unwrap();
        let a = order(0.37);
        assert!(hirota_frac_commutator(&f, &f, a)
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == Complex64::new(0.0, 0.0)));
        let fg = hirota_frac_commutator(&f, &g, a).unwrap();
        let gf = hirota_frac_commutator(&g, &f, a).unwrap();
        assert_eq!(fg, -&gf);
    }

    #[test]
    fn symbol_matches_commutator() {
        let f = GridFunction::sample_real(20.0, 512, |x| (-x * x).exp()).unwrap();
        let g = GridFunction::sample_real(20.0, 512, |x| (-(x - 1.0).powi(2)).exp()).unwrap();
        for &a in &[0.25, 0.5, 1.0] {
            let c = hirota_frac_commutator(&f, &g, order(a)).unwrap();
            let s = hirota_frac_symbol(&f, &g, order(a)).unwrap();
            assert!(s.rel_l2_diff(&c) <= 1e-12);
        }
    }

    #[test]
    fn classical_examples() {
        let one = hirota_classical(&mode(1.0), &mode(2.0), 1).unwrap();
        assert!(one.max_diff(&(&mode(3.0) * Complex64::new(0.0, -1.0))) <= 1e-12);
        // (i k1 - i k2)^4 = (-i)^4 = 1; roundoff in the top modes is amplified by k_max^4
        let four = hirota_classical(&mode(1.0), &mode(2.0), 4).unwrap();
        assert!(four.max_diff(&mode(3.0)) <= 1e-9);
        let f = GridFunction::sample_real(20.0, 256, |x| (-x * x).exp() * (1.0 + x)).unwrap();
        for n in [1, 3, 5] {
            assert!(hirota_classical(&f, &f, n).unwrap().max_abs() <= 1e-12);
        }
        assert!(hirota_classical(&f, &f, 0).is_err());
    }

    #[test]
    fn classical_order_one_is_the_alpha_one_commutator() {
        let f = GridFunction::sample_real(20.0, 256, |x| (-x * x).exp()).unwrap();
        let g = GridFunction::sample_real(20.0, 256, |x| x * (-x * x).exp()).unwrap();
        let a = hirota_classical(&f, &g, 1).unwrap();
        let b = hirota_frac_commutator(&f, &g, FractionalOrder::ONE).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let f = GridFunction::sample_real(20.0, 256, |x| (-x * x).exp()).unwrap();
        let g = GridFunction::sample_real(20.0, 128, |x| (-x * x).exp()).unwrap();
        assert!(matches!(
            hirota_frac_commutator(&f, &g, order(0.5)),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn probe_diagonal_family_is_zero() {
        let family = ProbeFamily::BandLimited {
            half_length: 20.0,
            base_n: 256,
            envelope: 4.0,
            seed: 1,
            diagonal: true,
        };
        let r = sobolev_bound_probe(&family, 1.0, order(0.5), 5).unwrap();
        assert!(r.ratios.iter().all(|&x| x == 0.0));
        assert_eq!(r.growth, 0.0);
        assert!(sobolev_bound_probe(&family, 0.5, order(0.5), 5).is_err());
    }

    #[test]
    fn probe_is_seed_deterministic() {
        let family = ProbeFamily::band_limited(20.0, 256, 7);
        let a = sobolev_bound_probe(&family, 1.0, order(0.5), 4).unwrap();
        let b = sobolev_bound_probe(&family, 1.0, order(0.5), 4).unwrap();
        assert_eq!(a, b);
    }
}
