//! One function per subcommand.

use std::fmt::Write as _;
use std::io::{ErrorKind, Write as _};
use std::path::Path;

use frac_hirota::bilinear::{
    hirota_classical, hirota_frac_commutator, hirota_frac_on_grid, sobolev_bound_probe,
    BilinearForm, ProbeFamily,
};
use frac_hirota::expsum::{
    bilinear_residual_symbolic, kp_one_soliton, BilinearOperatorSpec, ExpSum, KpSign,
    SolitonParams,
};
use frac_hirota::grid::{
    limit_convergence_check, principal_power_ik, sobolev_norm, spectral_frac_derivative,
    FractionalOrder, GridFunction,
};
use frac_hirota::kdv::{
    pde_residual, soliton_profile_check, soliton_speed, two_soliton_phase_shifts, u_from_tau,
    SpaceTimeGrid,
};
use frac_hirota::marchaud::{
    marchaud_constant, marchaud_derivative, scalar_symbol_integral, Direction, InnerRule,
    QuadratureSpec,
};
use frac_hirota::report::ResidualReport;
use frac_hirota::suite::{run_suite, SuiteConfig};
use frac_hirota::Complex64;
use serde::Serialize;

use crate::args::{
    BilinearArgs, DerivArgs, DirectionArg, FormArg, Format, KpArgs, LimitArgs, ProbeArgs, QuadArgs, SolitonArgs,
    SuiteArgs,
};
use crate::error::{CliError, Status};
use crate::funcs::{self, FuncSpec};

/// Tolerance of the symbolic residual gate.
const SYMBOLIC_TOL: f64 = 1e-12;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io {
                path: "<stdout>".into(),
                source: e,
            }),
            _ => Ok(()),
        },
    }
}

fn quadrature(q: &QuadArgs) -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec::default();
    if let Some(v) = q.split {
        spec.split = v;
    }
    if let Some(v) = q.inner_nodes {
        spec.inner_nodes = v;
    }
    if let Some(v) = q.tail_nodes {
        spec.tail_nodes = v;
    }
    if let Some(v) = q.panel_width {
        spec.panel_width = v;
    }
    if let Some(v) = q.y_max {
        spec.y_max = v;
    }
    if let Some(v) = q.quad_tol {
        spec.tolerance = v;
    }
    if let Some(rule) = &q.inner_rule {
        spec.inner_rule = match rule.as_str() {
            "gauss-jacobi" => InnerRule::GaussJacobi,
            other => match other.strip_prefix("log:").map(str::parse) {
                Some(Ok(u_min)) => InnerRule::LogTransform { u_min },
                _ => {
                    return Err(CliError::Usage(format!(
                        "inner rule `{other}`: expected gauss-jacobi or log:<u_min>"
                    )))
                }
            },
        };
    }
    spec.validate()?;
    Ok(spec)
}

fn analytic(name: &str) -> Result<FuncSpec, CliError> {
    let spec = FuncSpec::parse(name)?;
    if spec == FuncSpec::FromCsv {
        return Err(CliError::Usage("from-csv is only available for `deriv`".into()));
    }
    Ok(spec)
}

/// Grid large enough for both functions unless given explicitly.
fn pair_grid(f: FuncSpec, g: FuncSpec, l: Option<f64>, n: Option<usize>) -> (f64, usize) {
    let (lf, nf) = f.default_grid();
    let (lg, ng) = g.default_grid();
    (l.unwrap_or(lf.max(lg)), n.unwrap_or(nf.max(ng)))
}

/// `f(-x)` on the same grid: `x_j -> x_{(N - j) mod N}`.
fn reflect(f: &GridFunction) -> Result<GridFunction, CliError> {
    let v = f.values();
    let n = v.len();
    let values = (0..n).map(|j| v[(n - j) % n]).collect();
    Ok(GridFunction::new(values, f.half_length())?.with_boundary(f.boundary()))
}

#[derive(Serialize)]
struct MarchaudSummary {
    constant: f64,
    max_discrepancy: f64,
    rel_l2: f64,
    error_estimate: f64,
    tail_bound: f64,
    quality_ok: bool,
}

#[derive(Serialize)]
struct SymbolCheck {
    k: f64,
    quadrature: Complex64,
    exact: Complex64,
    error: f64,
}

#[derive(Serialize)]
struct SobolevSummary {
    s: f64,
    f_norm: f64,
    derivative_norm: f64,
}

#[derive(Serialize)]
struct DerivPoint {
    x: f64,
    f: Complex64,
    d: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    marchaud: Option<Complex64>,
}

#[derive(Serialize)]
struct DerivReport {
    alpha: f64,
    func: String,
    direction: &'static str,
    #[serde(rename = "L")]
    half_length: f64,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    marchaud: Option<MarchaudSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol_integral: Option<SymbolCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sobolev: Option<SobolevSummary>,
    points: Vec<DerivPoint>,
}

pub fn deriv(a: &DerivArgs) -> Result<Status, CliError> {
    let alpha = FractionalOrder::new(a.alpha)?;
    let spec = FuncSpec::parse(&a.func)?;
    let quad = quadrature(&a.quad)?;
    if spec == FuncSpec::FromCsv {
        if a.compare_marchaud {
            return Err(CliError::Usage(
                "--compare-marchaud needs an analytic function; from-csv data has none".into(),
            ));
        }
        if a.half_length.is_some() || a.n.is_some() {
            return Err(CliError::Usage("from-csv takes L and N from the file".into()));
        }
    } else if a.input.is_some() {
        return Err(CliError::Usage("--input is only used with --func from-csv".into()));
    }
    let (dl, dn) = spec.default_grid();
    let f = funcs::sample(spec, a.half_length.unwrap_or(dl), a.n.unwrap_or(dn), a.input.as_deref(), a.periodic)?;
    let (l, n) = (f.half_length(), f.len());
    let forward = a.direction == DirectionArg::Forward;
    let d = if forward {
        reflect(&spectral_frac_derivative(&reflect(&f)?, alpha)?)?
    } else {
        spectral_frac_derivative(&f, alpha)?
    };

    let exact: Option<Vec<Complex64>> = spec.wavenumber().map(|k| {
        let s = principal_power_ik(if forward { -k } else { k }, alpha);
        f.values().iter().map(|v| v * s).collect()
    });
    let exact_max_error = exact.as_ref().map(|e| {
        e.iter().zip(d.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    });

    let mut status = Status::Ok;
    let mut marchaud = None;
    let mut marchaud_values = None;
    let mut symbol_integral = None;
    if a.compare_marchaud && alpha.is_one() {
        eprintln!("note: the Marchaud form needs alpha < 1; comparison skipped");
    } else if a.compare_marchaud {
        let direction = if forward { Direction::Forward } else { Direction::Backward };
        let handle = spec.handle().expect("analytic function");
        let handle = if spec.wavenumber().is_some() { handle } else { handle.periodized(l) };
        let out = marchaud_derivative(&handle, &f.xs(), alpha, &quad, direction)?;
        let m = GridFunction::new(out.values.clone(), l)?;
        marchaud = Some(MarchaudSummary {
            constant: marchaud_constant(alpha)?,
            max_discrepancy: m.max_diff(&d),
            rel_l2: m.rel_l2_diff(&d),
            error_estimate: out.error_estimate,
            tail_bound: out.tail_bound,
            quality_ok: out.quality_ok,
        });
        if !out.quality_ok {
            eprintln!(
                "warning: quadrature error estimate {:.3e} misses the tolerance {:.1e}",
                out.error_estimate, quad.tolerance
            );
            if a.strict {
                status = Status::QualityFailed;
            }
        }
        if let Some(k) = spec.wavenumber() {
            let integral = scalar_symbol_integral(k, alpha, &quad)? * marchaud_constant(alpha)?;
            // the scalar integral carries the backward symbol
            let expected = principal_power_ik(k, alpha);
            symbol_integral = Some(SymbolCheck {
                k,
                quadrature: integral,
                exact: expected,
                error: (integral - expected).norm(),
            });
        }
        marchaud_values = Some(out.values);
    }
    let sobolev = a.sobolev.map(|s| SobolevSummary {
        s,
        f_norm: sobolev_norm(&f, s),
        derivative_norm: sobolev_norm(&d, s),
    });

    let xs = f.xs();
    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("x,f_re,f_im,d_re,d_im");
            if exact.is_some() {
                out.push_str(",exact_re,exact_im,error");
            }
            if marchaud_values.is_some() {
                out.push_str(",marchaud_re,marchaud_im,discrepancy");
            }
            out.push('\n');
            for j in 0..n {
                let (v, dv) = (f.values()[j], d.values()[j]);
                let _ = write!(out, "{},{},{},{},{}", num(xs[j]), num(v.re), num(v.im), num(dv.re), num(dv.im));
                if let Some(e) = &exact {
                    let _ = write!(out, ",{},{},{}", num(e[j].re), num(e[j].im), num((e[j] - dv).norm()));
                }
                if let Some(m) = &marchaud_values {
                    let _ = write!(out, ",{},{},{}", num(m[j].re), num(m[j].im), num((m[j] - dv).norm()));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => json(&DerivReport {
            alpha: alpha.value(),
            func: a.func.clone(),
            direction: if forward { "forward" } else { "backward" },
            half_length: l,
            n,
            exact_max_error,
            marchaud,
            symbol_integral,
            sobolev,
            points: (0..n)
                .map(|j| DerivPoint {
                    x: xs[j],
                    f: f.values()[j],
                    d: d.values()[j],
                    exact: exact.as_ref().map(|e| e[j]),
                    marchaud: marchaud_values.as_ref().map(|m| m[j]),
                })
                .collect(),
        }),
    };
    if a.format == Format::Csv {
        if let Some(e) = exact_max_error {
            eprintln!("max |D^alpha f - (ik)^alpha f| = {e:.3e}");
        }
    }
    emit(a.out.as_deref(), &text)?;
    Ok(status)
}

#[derive(Serialize)]
struct Identities {
    skew: f64,
    diagonal: f64,
}

#[derive(Serialize)]
struct BilinearPoint {
    x: f64,
    value: Complex64,
}

#[derive(Serialize)]
struct BilinearReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    form: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
    #[serde(rename = "L")]
    half_length: f64,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<frac_hirota::bilinear::QuadratureDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identities: Option<Identities>,
    points: Vec<BilinearPoint>,
}

pub fn bilinear(a: &BilinearArgs) -> Result<Status, CliError> {
    let fs = analytic(&a.f)?;
    let gs = analytic(&a.g)?;
    let (l, n) = pair_grid(fs, gs, a.half_length, a.n);
    let quad = quadrature(&a.quad)?;
    let fh = fs.handle().expect("analytic function");
    let gh = gs.handle().expect("analytic function");
    let f = fh.sample(l, n)?;
    let g = gh.sample(l, n)?;
    let alpha = match (a.form, a.alpha) {
        (FormArg::Classical, _) => None,
        (_, Some(v)) => Some(FractionalOrder::new(v)?),
        (_, None) => return Err(CliError::Usage("--alpha is required unless --form classical".into())),
    };
    let mut status = Status::Ok;
    let (values, diagnostics, form) = match (a.form, alpha) {
        (FormArg::Classical, _) => {
            if a.order == 0 {
                return Err(CliError::Usage("--order must be positive".into()));
            }
            (hirota_classical(&f, &g, a.order)?, None, "classical")
        }
        (form, Some(alpha)) => {
            let (form, name) = match form {
                FormArg::Commutator => (BilinearForm::Commutator, "commutator"),
                FormArg::Kernel => (BilinearForm::Kernel, "kernel"),
                _ => (BilinearForm::Symbol, "symbol"),
            };
            let r = hirota_frac_on_grid(&fh, &gh, l, n, alpha, form, &quad)?;
            if let Some(d) = r.diagnostics.filter(|d| !d.quality_ok) {
                eprintln!(
                    "warning: quadrature error estimate {:.3e} misses the tolerance {:.1e}",
                    d.error_estimate, quad.tolerance
                );
                if a.strict {
                    status = Status::QualityFailed;
                }
            }
            (r.values, r.diagnostics, name)
        }
        (_, None) => unreachable!("alpha checked above"),
    };
    let identities = match (a.identities, alpha) {
        (true, Some(alpha)) => {
            let fg = hirota_frac_commutator(&f, &g, alpha)?;
            let gf = hirota_frac_commutator(&g, &f, alpha)?;
            Some(Identities {
                skew: (&fg + &gf).max_abs(),
                diagonal: hirota_frac_commutator(&f, &f, alpha)?.max_abs(),
            })
        }
        (true, None) => return Err(CliError::Usage("--identities needs --alpha".into())),
        _ => None,
    };
    if let Some(i) = &identities {
        eprintln!("skew max |B(f,g) + B(g,f)| = {:e}", i.skew);
        eprintln!("diagonal max |B(f,f)| = {:e}", i.diagonal);
    }
    let xs = values.xs();
    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("x,b_re,b_im\n");
            for (x, v) in xs.iter().zip(values.values()) {
                let _ = writeln!(out, "{},{},{}", num(*x), num(v.re), num(v.im));
            }
            out
        }
        Format::Json => json(&BilinearReport {
            alpha: alpha.map(FractionalOrder::value),
            form,
            order: (a.form == FormArg::Classical).then_some(a.order),
            half_length: l,
            n,
            diagnostics,
            identities,
            points: xs
                .iter()
                .zip(values.values())
                .map(|(&x, &value)| BilinearPoint { x, value })
                .collect(),
        }),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(status)
}

#[derive(Serialize)]
struct TauDocument<'a> {
    #[serde(flatten)]
    params: &'a SolitonParams,
    tau: &'a ExpSum,
}

fn gate(report: &ResidualReport, name: &str) -> Status {
    let verdict = match report.pass {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "diagnostic",
    };
    println!("{name}: max_abs = {:.3e}, l2 = {:.3e} ({verdict})", report.max_abs, report.l2);
    if report.pass == Some(false) {
        Status::GateFailed
    } else {
        Status::Ok
    }
}

pub fn soliton(a: &SolitonArgs) -> Result<Status, CliError> {
    let alpha = FractionalOrder::new(a.alpha)?;
    let c = |v: f64| Complex64::new(v, 0.0);
    if a.k.is_empty() || a.k.len() > 2 {
        return Err(CliError::Usage(format!("give one or two wavenumbers, got {}", a.k.len())));
    }
    let deltas: Vec<f64> = match a.delta.len() {
        0 => vec![0.0; a.k.len()],
        m if m == a.k.len() => a.delta.clone(),
        m => return Err(CliError::Usage(format!("{m} deltas for {} wavenumbers", a.k.len()))),
    };
    let quad = quadrature(&a.quad)?;
    let grid = SpaceTimeGrid::uniform(a.half_length, a.n, a.tmin, a.tmax, a.nt)?;
    let params = match a.k[..] {
        [k] => SolitonParams::one(c(k), c(deltas[0]), alpha)?,
        [k1, k2] => SolitonParams::two(c(k1), c(k2), c(deltas[0]), c(deltas[1]), alpha)?,
        _ => unreachable!("length checked above"),
    };
    let tau = params.tau();
    let dir = &a.out_dir;
    write_file(&dir.join("tau.json"), &json(&TauDocument { params: &params, tau: &tau }))?;
    if let Some(a12) = params.a12 {
        println!("A12 = {a12}");
    }

    let field = u_from_tau(&tau, &grid)?;
    write_file(&dir.join("field.csv"), &field.to_csv())?;

    let mut status = Status::Ok;
    let mut worst = |s: Status| {
        if s != Status::Ok {
            status = s;
        }
    };
    let residual = bilinear_residual_symbolic(&BilinearOperatorSpec::kdv(), &tau)?.report(SYMBOLIC_TOL);
    write_file(&dir.join("residual.json"), &json(&residual))?;
    worst(gate(&residual, "symbolic bilinear residual"));

    if let [k] = a.k[..] {
        if k < 0.0 {
            let profile = soliton_profile_check(k, deltas[0], alpha, &grid)?;
            write_file(&dir.join("profile.json"), &json(&profile))?;
            worst(gate(&profile, "profile vs (k^2/2) sech^2(theta/2)"));
        }
    }
    if a.phase_shifts {
        let [mut k1, mut k2] = a.k[..] else {
            return Err(CliError::Usage("--phase-shifts needs two wavenumbers".into()));
        };
        let (mut d1, mut d2) = (deltas[0], deltas[1]);
        if k1.abs() > k2.abs() {
            std::mem::swap(&mut k1, &mut k2);
            std::mem::swap(&mut d1, &mut d2);
        }
        // solitons at least twenty widths apart at both ends
        let gap = (soliton_speed(k2, alpha)? - soliton_speed(k1, alpha)?).abs();
        let t_far = (40.0 / (k1.abs() * gap)).max(5.0);
        let r = two_soliton_phase_shifts(k1, k2, d1, d2, alpha, t_far)?;
        write_file(&dir.join("phase_shifts.json"), &json(&r))?;
        println!(
            "phase shifts: measured ({:.6e}, {:.6e}), predicted ({:.6e}, {:.6e}), superposition error {:.3e}",
            r.measured[0], r.measured[1], r.predicted[0], r.predicted[1], r.superposition_error
        );
    }
    if a.pde_residual {
        let r = pde_residual(&tau, alpha, &grid, &quad)?;
        write_file(&dir.join("pde_residual.json"), &json(&r))?;
        worst(gate(&r, "PDE residual"));
        if !r.notes.is_empty() {
            println!("  {}", r.notes);
        }
    }
    Ok(status)
}

#[derive(Serialize)]
struct KpDocument<'a> {
    alpha: f64,
    k: f64,
    ell: f64,
    sign: i32,
    delta: f64,
    tau: &'a ExpSum,
}

pub fn kp(a: &KpArgs) -> Result<Status, CliError> {
    let alpha = FractionalOrder::new(a.alpha)?;
    let sign = KpSign::try_from(a.sign)?;
    let c = |v: f64| Complex64::new(v, 0.0);
    let tau = kp_one_soliton(c(a.k), c(a.ell), sign, c(a.delta), alpha)?;
    let doc = KpDocument {
        alpha: alpha.value(),
        k: a.k,
        ell: a.ell,
        sign: a.sign,
        delta: a.delta,
        tau: &tau,
    };
    write_file(&a.out_dir.join("tau.json"), &json(&doc))?;
    let residual = bilinear_residual_symbolic(&BilinearOperatorSpec::kp(sign), &tau)?.report(SYMBOLIC_TOL);
    write_file(&a.out_dir.join("residual.json"), &json(&residual))?;
    Ok(gate(&residual, "symbolic KP residual"))
}

/// `start:stop:step`, inclusive, rounded to 12 decimals.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("alpha sweep `{s}`: expected start:stop:step"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|j| ((start + j as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

pub fn suite(a: &SuiteArgs) -> Result<Status, CliError> {
    let alpha_sweep = match &a.alpha_sweep {
        Some(s) => parse_sweep(s)?,
        None => Vec::new(),
    };
    for &v in &alpha_sweep {
        FractionalOrder::new(v)?;
    }
    let cfg = SuiteConfig {
        alpha_sweep,
        seed: a.seed,
        probe_trials: a.trials,
        bilinear_pairs: a.pairs,
        quad: quadrature(&a.quad)?,
    };
    let report = run_suite(&cfg)?;
    print!("{}", report.table());
    for t in &report.timings {
        println!("criterion {} took {:.2} s", t.criterion, t.seconds);
    }
    if let Some(path) = &a.json {
        write_file(path, &json(&report))?;
    }
    println!("{}", if report.all_gates_pass { "all gates pass" } else { "gate failure" });
    Ok(if report.all_gates_pass { Status::Ok } else { Status::GateFailed })
}

pub fn limit_check(a: &LimitArgs) -> Result<Status, CliError> {
    let fs = analytic(&a.f)?;
    let gs = analytic(&a.g)?;
    let (l, n) = pair_grid(fs, gs, a.half_length, a.n);
    let f = fs.handle().expect("analytic function").sample(l, n)?;
    let g = gs.handle().expect("analytic function").sample(l, n)?;
    let alphas = a
        .alphas
        .iter()
        .map(|&v| FractionalOrder::new(v))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = limit_convergence_check(&f, &g, a.s, &alphas)?;
    let fractional: Vec<f64> = rows.iter().filter(|r| r.alpha < 1.0).map(|r| r.distance).collect();
    let decreasing = fractional.windows(2).all(|w| w[1] < w[0]);
    eprintln!("distance strictly decreasing over alpha < 1: {decreasing}");
    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("alpha,distance\n");
            for r in &rows {
                let _ = writeln!(out, "{},{}", num(r.alpha), num(r.distance));
            }
            out
        }
        Format::Json => json(&rows),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Status::Ok)
}

fn parse_mode_pair(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("mode pair `{s}`: expected n1:n2"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn sobolev_probe(a: &ProbeArgs) -> Result<Status, CliError> {
    let alpha = FractionalOrder::new(a.alpha)?;
    let family = if a.modes.is_empty() {
        ProbeFamily::BandLimited {
            half_length: a.half_length,
            base_n: a.n,
            envelope: a.envelope,
            seed: a.seed,
            diagonal: a.diagonal,
        }
    } else {
        ProbeFamily::SingleModes {
            half_length: a.half_length,
            base_n: a.n,
            pairs: a.modes.iter().map(|m| parse_mode_pair(m)).collect::<Result<_, _>>()?,
        }
    };
    let r = sobolev_bound_probe(&family, a.s, alpha, a.trials)?;
    println!(
        "max ratio {:.6e} at N = {}, {:.6e} at N = {}, growth {:.3e}",
        r.max_ratio, r.n, r.max_ratio_refined, r.n_refined, r.growth
    );
    if let Some(path) = &a.json {
        write_file(path, &json(&r))?;
    }
    Ok(if r.refinement_stable { Status::Ok } else { Status::GateFailed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_inclusive() {
        let s = parse_sweep("0.1:1.0:0.1").unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s[9], 1.0);
        assert_eq!(s[2], 0.3);
        assert!(parse_sweep("1:0:0.1").is_err());
        assert!(parse_sweep("0.1:1").is_err());
    }

    #[test]
    fn mode_pairs() {
        assert_eq!(parse_mode_pair("-3:7").unwrap(), (-3, 7));
        assert!(parse_mode_pair("3").is_err());
    }
}
