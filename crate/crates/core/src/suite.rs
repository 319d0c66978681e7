//! The verification battery: every identity, oracle comparison and closed-form
//! check, with the tolerance each one is held to.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::bilinear::{
    hirota_frac_commutator, hirota_frac_kernel_grid, hirota_frac_symbol, random_pairs,
    sobolev_bound_probe, ProbeFamily,
};
use crate::error::Result;
use crate::expsum::{
    bilinear_residual_symbolic, kp_one_soliton, one_soliton_tau, BilinearOperatorSpec, KpSign,
    SolitonParams,
};
use crate::grid::{
    limit_convergence_check, principal_power_ik, spectral_frac_derivative, FractionalOrder,
    GridFunction,
};
use crate::kdv::{
    field_value, pde_residual, peak_location, soliton_profile_check, soliton_speed, u_from_tau,
    SpaceTimeGrid,
};
use crate::marchaud::{marchaud_derivative, AnalyticFunction, Direction, QuadratureSpec};

/// How a check's value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equal,
}

impl Relation {
    fn holds(self, value: f64, tolerance: f64) -> bool {
        match self {
            Relation::AtMost => value <= tolerance,
            Relation::Below => value < tolerance,
            Relation::Above => value > tolerance,
            Relation::Equal => value == tolerance,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::Above => ">",
            Relation::Equal => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    /// Diagnostic rows are reported but never fail the suite.
    pub gate: bool,
}

impl CheckRow {
    fn gate(criterion: u8, name: impl Into<String>, value: f64, relation: Relation, tolerance: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            value,
            relation,
            tolerance,
            pass: relation.holds(value, tolerance),
            gate: true,
        }
    }

    fn diagnostic(criterion: u8, name: impl Into<String>, value: f64, relation: Relation, tolerance: f64) -> Self {
        Self {
            gate: false,
            ..Self::gate(criterion, name, value, relation, tolerance)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionTiming {
    pub criterion: u8,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<CheckRow>,
    pub timings: Vec<CriterionTiming>,
    pub all_gates_pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Orders for the per-alpha identity rows.
    pub alpha_sweep: Vec<f64>,
    pub seed: u64,
    pub probe_trials: usize,
    pub bilinear_pairs: usize,
    pub quad: QuadratureSpec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            alpha_sweep: Vec::new(),
            seed: 42,
            probe_trials: 100,
            bilinear_pairs: 50,
            quad: QuadratureSpec::default(),
        }
    }
}

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).expect("suite orders lie in (0, 1]")
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

const ALPHA_TENTHS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
const SOLITON_KS: [f64; 4] = [-3.0, -2.0, -1.0, -0.5];

/// Max error of `D^alpha e^{ikx}` against `(ik)^alpha e^{ikx}` on `L = pi, N = 64`.
fn mode_error(alpha: FractionalOrder, k: f64) -> Result<f64> {
    let f = GridFunction::sample_periodic(PI, 64, |x| Complex64::new(0.0, k * x).exp())?;
    let d = spectral_frac_derivative(&f, alpha)?;
    Ok(d.max_diff(&(&f * principal_power_ik(k, alpha))))
}

fn criterion_1(rows: &mut Vec<CheckRow>) -> Result<()> {
    let mut worst = 0.0f64;
    for a in [0.25, 0.5, 0.75, 1.0] {
        for k in [1.0, 2.0, 5.0] {
            worst = worst.max(mode_error(order(a), k)?);
        }
    }
    rows.push(CheckRow::gate(1, "single-mode multiplier max error", worst, Relation::AtMost, 1e-12));
    Ok(())
}

fn criterion_2(rows: &mut Vec<CheckRow>, quad: &QuadratureSpec) -> Result<()> {
    let mut worst = 0.0f64;
    for (f, l) in [(AnalyticFunction::gaussian(0.0), 20.0), (AnalyticFunction::sech(0.0), 40.0)] {
        let grid = f.sample(l, 2048)?;
        let periodic = f.periodized(l);
        for a in [0.25, 0.5, 0.75] {
            let s = spectral_frac_derivative(&grid, order(a))?;
            let m = marchaud_derivative(&periodic, &grid.xs(), order(a), quad, Direction::Backward)?;
            let m = GridFunction::new(m.values, l)?;
            worst = worst.max(m.rel_l2_diff(&s));
        }
    }
    rows.push(CheckRow::gate(2, "Marchaud vs spectral relative L2", worst, Relation::AtMost, 1e-6));
    let xs: Vec<f64> = (0..16).map(|j| -3.0 + 0.4 * j as f64).collect();
    let out = marchaud_derivative(&AnalyticFunction::mode(1.0), &xs, order(0.5), quad, Direction::Forward)?;
    let sym = principal_power_ik(-1.0, order(0.5));
    let err = xs
        .iter()
        .zip(&out.values)
        .map(|(&x, v)| (v - sym * Complex64::new(0.0, x).exp()).norm())
        .fold(0.0, f64::max);
    rows.push(CheckRow::gate(2, "forward shift vs (-ik)^alpha on e^{ix}", err, Relation::AtMost, 1e-6));
    Ok(())
}

fn max_abs_sum(a: &GridFunction, b: &GridFunction) -> f64 {
    (a + b).max_abs()
}

fn criterion_3(rows: &mut Vec<CheckRow>, cfg: &SuiteConfig, alphas: &[f64]) -> Result<()> {
    let (l, n, max_mode) = (10.0, 64, 16);
    let pairs = random_pairs(l, max_mode, 4.0, cfg.seed, cfg.bilinear_pairs);
    let (mut skew, mut diag, mut linear, mut symbol, mut kernel) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (j, (fp, gp)) in pairs.iter().enumerate() {
        let f = fp.sample(n)?;
        let g = gp.sample(n)?;
        let h = pairs[(j + 1) % pairs.len()].0.sample(n)?;
        for &a in alphas {
            let alpha = order(a);
            let fg = hirota_frac_commutator(&f, &g, alpha)?;
            let gf = hirota_frac_commutator(&g, &f, alpha)?;
            skew = skew.max(max_abs_sum(&fg, &gf));
            diag = diag.max(hirota_frac_commutator(&f, &f, alpha)?.max_abs());
            let s = Complex64::new(0.7, -1.3);
            let lhs = hirota_frac_commutator(&(&(&f * s) + &h), &g, alpha)?;
            let rhs = &(&fg * s) + &hirota_frac_commutator(&h, &g, alpha)?;
            linear = linear.max(lhs.rel_l2_diff(&rhs));
            symbol = symbol.max(hirota_frac_symbol(&f, &g, alpha)?.rel_l2_diff(&fg));
        }
        let alpha = order(0.5);
        let fg = hirota_frac_commutator(&f, &g, alpha)?;
        let k = hirota_frac_kernel_grid(&fp.handle(), &gp.handle(), &f, alpha, &cfg.quad)?;
        kernel = kernel.max(k.rel_l2_diff(&fg));
    }
    rows.push(CheckRow::gate(3, "skew-symmetry max |B(f,g)+B(g,f)|", skew, Relation::Equal, 0.0));
    rows.push(CheckRow::gate(3, "diagonal vanishing max |B(f,f)|", diag, Relation::Equal, 0.0));
    rows.push(CheckRow::gate(3, "bilinearity relative L2", linear, Relation::AtMost, 1e-12));
    rows.push(CheckRow::gate(3, "symbol vs commutator relative L2", symbol, Relation::AtMost, 1e-12));
    rows.push(CheckRow::gate(3, "kernel vs commutator relative L2", kernel, Relation::AtMost, 1e-6));
    Ok(())
}

fn criterion_4(rows: &mut Vec<CheckRow>, cfg: &SuiteConfig) -> Result<()> {
    let family = ProbeFamily::band_limited(20.0, 1024, cfg.seed);
    let r = sobolev_bound_probe(&family, 1.0, order(0.5), cfg.probe_trials)?;
    rows.push(CheckRow::gate(4, "Sobolev probe max ratio (N = 1024)", r.max_ratio, Relation::Below, f64::INFINITY));
    rows.push(CheckRow::gate(4, "Sobolev probe growth 1024 -> 2048", r.growth, Relation::Below, 0.1));
    Ok(())
}

fn criterion_5(rows: &mut Vec<CheckRow>) -> Result<()> {
    let l = 20.0;
    let n = 1024;
    let gauss = GridFunction::sample_real(l, n, |x| (-x * x).exp())?;
    let pairs = [
        ("gauss, x gauss", gauss.clone(), GridFunction::sample_real(l, n, |x| x * (-x * x).exp())?),
        (
            "gauss, shifted wide gauss",
            gauss,
            GridFunction::sample_real(l, n, |x| (-0.5 * (x - 1.0) * (x - 1.0)).exp())?,
        ),
    ];
    let alphas = [order(0.9), order(0.99), order(0.999)];
    for (name, f, g) in pairs {
        let decr = limit_convergence_check(&f, &g, 2.0, &alphas)?;
        let monotone = decr.windows(2).all(|w| w[1].distance < w[0].distance) && decr[2].distance > 0.0;
        rows.push(CheckRow::gate(
            5,
            format!("classical limit strictly decreasing ({name})"),
            f64::from(u8::from(monotone)),
            Relation::Equal,
            1.0,
        ));
        let one = limit_convergence_check(&f, &g, 2.0, &[FractionalOrder::ONE])?;
        rows.push(CheckRow::gate(
            5,
            format!("classical limit distance at alpha = 1 ({name})"),
            one[0].distance,
            Relation::AtMost,
            1e-12,
        ));
    }
    Ok(())
}

fn criterion_6(rows: &mut Vec<CheckRow>, alphas: &[f64]) -> Result<()> {
    let op = BilinearOperatorSpec::kdv();
    let mut nonempty = 0usize;
    for &k in &SOLITON_KS {
        for &a in alphas {
            let r = bilinear_residual_symbolic(&op, &one_soliton_tau(c(k), c(0.0), order(a))?)?;
            nonempty += r.residual.len();
        }
    }
    rows.push(CheckRow::gate(6, "one-soliton residual terms", nonempty as f64, Relation::Equal, 0.0));
    let (mut worst, mut weakest) = (0.0f64, f64::INFINITY);
    for (i, &k1) in SOLITON_KS.iter().enumerate() {
        for &k2 in &SOLITON_KS[i + 1..] {
            for &a in alphas {
                let p = SolitonParams::two(c(k1), c(k2), c(0.0), c(0.0), order(a))?;
                let a12 = p.a12.expect("two-soliton parameters carry A12");
                worst = worst.max(bilinear_residual_symbolic(&op, &p.tau())?.relative);
                let perturbed = p.with_a12(a12 * 1.01).tau();
                weakest = weakest.min(bilinear_residual_symbolic(&op, &perturbed)?.relative);
            }
        }
    }
    rows.push(CheckRow::gate(6, "two-soliton relative residual", worst, Relation::AtMost, 1e-12));
    rows.push(CheckRow::gate(6, "two-soliton residual with A12 * 1.01", weakest, Relation::Above, 1e-4));
    Ok(())
}

fn criterion_7(rows: &mut Vec<CheckRow>) -> Result<()> {
    let grid = SpaceTimeGrid::new(30.0, 1024, vec![-1.0, 0.0, 1.0])?;
    let mut profile = 0.0f64;
    let mut amplitude = 0.0f64;
    let mut speed = 0.0f64;
    let mut literal = 0.0f64;
    for &k in &SOLITON_KS {
        for a in [0.5, 1.0] {
            let alpha = order(a);
            profile = profile.max(soliton_profile_check(k, 0.0, alpha, &grid)?.max_abs);
            let p = SolitonParams::one(c(k), c(0.0), alpha)?;
            let tau = p.tau();
            let v = -p.omega[0].re / k;
            let dt = 0.5 / v.abs().max(1.0);
            let width = 3.0 / k.abs();
            let x0 = peak_location(&tau, 0.0, -width, width)?;
            let x1 = peak_location(&tau, dt, v * dt - width, v * dt + width)?;
            amplitude = amplitude.max((field_value(&tau, x0, 0.0)?.re - 0.5 * k * k).abs());
            speed = speed.max(((x1 - x0) / dt - soliton_speed(k, alpha)?).abs() / v.abs().max(1.0));
            let u = u_from_tau(&tau, &grid)?;
            let xs = grid.xs();
            for (it, &t) in grid.times().iter().enumerate() {
                for (ix, &x) in xs.iter().enumerate() {
                    let theta = k * x + p.omega[0].re * t;
                    let lit = 2.0 * k * k / (0.5 * theta).cosh().powi(2);
                    literal = literal.max((u.at(it, ix).re - lit).abs());
                }
            }
        }
    }
    rows.push(CheckRow::gate(7, "profile vs (k^2/2) sech^2(theta/2)", profile, Relation::AtMost, 1e-12));
    rows.push(CheckRow::gate(7, "amplitude max u - k^2/2", amplitude, Relation::AtMost, 1e-10));
    rows.push(CheckRow::gate(7, "peak speed vs -omega/k (relative)", speed, Relation::AtMost, 1e-10));
    rows.push(CheckRow::diagnostic(7, "profile vs literal 2k^2 sech^2(theta/2)", literal, Relation::AtMost, 1e-12));
    Ok(())
}

fn criterion_8(rows: &mut Vec<CheckRow>, quad: &QuadratureSpec) -> Result<()> {
    let grid = SpaceTimeGrid::uniform(30.0, 1024, -2.0, 2.0, 9)?;
    let one = SolitonParams::one(c(-1.0), c(0.0), FractionalOrder::ONE)?.tau();
    let r = pde_residual(&one, FractionalOrder::ONE, &grid, quad)?;
    rows.push(CheckRow::gate(8, "alpha = 1 one-soliton PDE residual", r.max_abs, Relation::AtMost, 1e-8));
    let two = SolitonParams::two(c(-1.0), c(-2.0), c(0.0), c(0.0), FractionalOrder::ONE)?.tau();
    let r = pde_residual(&two, FractionalOrder::ONE, &grid, quad)?;
    rows.push(CheckRow::gate(8, "alpha = 1 two-soliton PDE residual", r.max_abs, Relation::AtMost, 1e-8));
    let grid = SpaceTimeGrid::uniform(30.0, 256, -2.0, 2.0, 5)?;
    let half = SolitonParams::one(c(-1.0), c(0.0), order(0.5))?.tau();
    let r = pde_residual(&half, order(0.5), &grid, quad)?;
    rows.push(CheckRow::diagnostic(8, "alpha = 0.5 one-soliton PDE residual (formal)", r.max_abs, Relation::AtMost, f64::INFINITY));
    Ok(())
}

fn criterion_9(rows: &mut Vec<CheckRow>) -> Result<()> {
    let triples = [
        (-1.0, 0.0, KpSign::Plus),
        (-1.0, 1.0, KpSign::Minus),
        (-1.0, 1.0, KpSign::Plus),
        (-2.0, 0.5, KpSign::Plus),
        (-1.5, -0.7, KpSign::Minus),
        (-0.5, 2.0, KpSign::Minus),
    ];
    let mut nonempty = 0usize;
    for (k, ell, sign) in triples {
        for a in [0.3, 0.5, 1.0] {
            let f = kp_one_soliton(c(k), c(ell), sign, c(0.1), order(a))?;
            nonempty += bilinear_residual_symbolic(&BilinearOperatorSpec::kp(sign), &f)?.residual.len();
        }
    }
    rows.push(CheckRow::gate(9, "KP one-soliton residual terms", nonempty as f64, Relation::Equal, 0.0));
    let mut mismatch = 0usize;
    for &k in &SOLITON_KS {
        let f = kp_one_soliton(c(k), c(0.0), KpSign::Plus, c(0.0), order(0.5))?;
        let p = f.terms().iter().find(|t| t.phase.k != c(0.0)).expect("non-constant phase").phase;
        if p.sigma != Some(-(c(k) * c(k) * c(k))) {
            mismatch += 1;
        }
    }
    rows.push(CheckRow::gate(9, "KP with ell = 0 reduces to sigma = -k^3", mismatch as f64, Relation::Equal, 0.0));
    Ok(())
}

fn sweep_rows(rows: &mut Vec<CheckRow>, cfg: &SuiteConfig) -> Result<()> {
    for &a in &cfg.alpha_sweep {
        let alpha = FractionalOrder::new(a)?;
        let mode = [1.0, 2.0, 5.0]
            .iter()
            .map(|&k| mode_error(alpha, k))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rows.push(CheckRow::gate(1, format!("alpha = {a}: single-mode error"), mode, Relation::AtMost, 1e-12));
        let op = BilinearOperatorSpec::kdv();
        let terms: usize = SOLITON_KS
            .iter()
            .map(|&k| Ok(bilinear_residual_symbolic(&op, &one_soliton_tau(c(k), c(0.0), alpha)?)?.residual.len()))
            .sum::<Result<usize>>()?;
        rows.push(CheckRow::gate(6, format!("alpha = {a}: one-soliton residual terms"), terms as f64, Relation::Equal, 0.0));
    }
    if !cfg.alpha_sweep.is_empty() {
        criterion_3(rows, &SuiteConfig { bilinear_pairs: 5, ..cfg.clone() }, &cfg.alpha_sweep)?;
    }
    Ok(())
}

/// Run the full battery.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    let mut timed = |criterion: u8, rows: &mut Vec<CheckRow>, f: &dyn Fn(&mut Vec<CheckRow>) -> Result<()>| {
        let start = Instant::now();
        let out = f(rows);
        timings.push(CriterionTiming {
            criterion,
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    };
    timed(1, &mut rows, &criterion_1)?;
    timed(2, &mut rows, &|r| criterion_2(r, &cfg.quad))?;
    timed(3, &mut rows, &|r| criterion_3(r, cfg, &[0.25, 0.5, 0.75]))?;
    timed(4, &mut rows, &|r| criterion_4(r, cfg))?;
    timed(5, &mut rows, &criterion_5)?;
    timed(6, &mut rows, &|r| criterion_6(r, &ALPHA_TENTHS))?;
    timed(7, &mut rows, &criterion_7)?;
    timed(8, &mut rows, &|r| criterion_8(r, &cfg.quad))?;
    timed(9, &mut rows, &criterion_9)?;
    sweep_rows(&mut rows, cfg)?;
    let all_gates_pass = rows.iter().filter(|r| r.gate).all(|r| r.pass);
    Ok(SuiteReport {
        rows,
        timings,
        all_gates_pass,
    })
}

impl SuiteReport {
    /// Fixed-width table: criterion, check, value, relation, tolerance, verdict.
    pub fn table(&self) -> String {
        let mut out = format!("{:<3} {:<52} {:>12}    {:>10}  {}\n", "#", "check", "value", "tolerance", "result");
        for r in &self.rows {
            let verdict = match (r.gate, r.pass) {
                (true, true) => "PASS",
                (true, false) => "FAIL",
                (false, true) => "info",
                (false, false) => "info (not a gate)",
            };
            out.push_str(&format!(
                "{:<3} {:<52} {:>12.3e} {:>2} {:>10.1e}  {}\n",
                r.criterion,
                r.name,
                r.value,
                r.relation.symbol(),
                r.tolerance,
                verdict
            ));
        }
        out
    }
}
