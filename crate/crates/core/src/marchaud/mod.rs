//! One-sided Marchaud fractional derivative and the bilinear Marchaud kernel,
//! evaluated by singular quadrature.
//!
//! For `0 < alpha < 1`,
//!
//! ```text
//! D^alpha f(xi) = C_alpha * integral_0^inf (f(xi) - f(xi - y)) / y^(1+alpha) dy,
//! C_alpha = alpha / Gamma(1 - alpha) = -1 / Gamma(-alpha).
//! ```
//!
//! The integral is split at `y0`. On `(0, y0]` the integrand is `h(y) y^{-1-alpha}`
//! with `h(0) = 0`, so `h(y)/y` is smooth and a Gauss–Jacobi rule for the weight
//! `y^{-alpha}` integrates it without ever placing nodes where `f(xi) - f(xi - y)`
//! cancels catastrophically. Beyond `y0` the local term `f(xi)` is integrated in
//! closed form and the shifted term is handled according to the handle's [`Decay`]:
//! over the support window, folded onto one period (with an Euler–Maclaurin
//! remainder for the infinite sum of periods), or on panels up to `Ymax`.
//!
//! Every rule is reduced to a list of `(y_i, w_i)` with
//! `integral h(y) y^{-1-alpha} dy ~ sum w_i h(y_i)`.

mod function;
pub mod rules;

pub use function::{AnalyticFunction, Decay};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::FractionalOrder;
use crate::special::gamma;
use rules::{gauss_jacobi_unit, gauss_legendre_unit, Rule};

/// Which shift the one-sided difference uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `f(xi) - f(xi - y)`, symbol `(ik)^alpha`.
    Backward,
    /// `f(xi) - f(xi + y)`, symbol `(-ik)^alpha`.
    Forward,
}

impl Direction {
    #[inline]
    fn shift(self, xi: f64, y: f64) -> f64 {
        match self {
            Direction::Backward => xi - y,
            Direction::Forward => xi + y,
        }
    }
}

/// Rule used on `(0, y0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerRule {
    /// Gauss–Jacobi for the weight `y^{-alpha}` applied to `h(y)/y`.
    GaussJacobi,
    /// `y = e^u` on `[u_min, ln y0]`, composite Gauss–Legendre in `u`,
    /// the piece below `e^{u_min}` dropped.
    LogTransform { u_min: f64 },
}

/// Parameters of the singular quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Split point `y0`.
    pub split: f64,
    /// Nodes of the inner Gauss–Jacobi rule.
    pub inner_nodes: usize,
    /// Gauss–Legendre nodes per panel beyond `y0` (and per panel of the log rule).
    pub tail_nodes: usize,
    /// Largest panel width beyond `y0`.
    pub panel_width: f64,
    /// Truncation point for tails of handles without support information.
    pub y_max: f64,
    pub inner_rule: InnerRule,
    /// Target for the embedded error estimate; misses set the quality flag.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            split: 1.0,
            inner_nodes: 48,
            tail_nodes: 16,
            panel_width: 1.0,
            y_max: 1e4,
            inner_rule: InnerRule::GaussJacobi,
            tolerance: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !(self.split > 0.0 && self.split.is_finite()) {
            return bad(format!("split y0 must be positive, got {}", self.split));
        }
        if !(self.y_max > self.split) {
            return bad(format!("Ymax = {} must exceed y0 = {}", self.y_max, self.split));
        }
        if self.inner_nodes < 16 || self.tail_nodes < 16 {
            return bad(format!(
                "node counts must be >= 16, got inner = {}, tail = {}",
                self.inner_nodes, self.tail_nodes
            ));
        }
        if !(self.panel_width > 0.0) {
            return bad(format!("panel width must be positive, got {}", self.panel_width));
        }
        if let InnerRule::LogTransform { u_min } = self.inner_rule {
            if !(u_min < self.split.ln()) {
                return bad(format!("u_min = {u_min} must lie below ln y0"));
            }
        }
        Ok(())
    }
}

/// Values plus quality diagnostics of a quadrature evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOutput {
    pub values: Vec<Complex64>,
    /// Largest `|I_n - I_{n/2}|` over the evaluation points (scaled by `C_alpha`).
    pub error_estimate: f64,
    /// `2 M C_alpha / (alpha Ymax^alpha)` with `M` the handles' sup bound.
    pub tail_bound: f64,
    /// Whether truncation at `Ymax` actually removed part of the integral.
    pub tail_truncated: bool,
    /// False when the error estimate (or an active tail bound) misses the tolerance.
    pub quality_ok: bool,
}

/// `C_alpha = alpha / Gamma(1 - alpha)`, cross-checked against `-1 / Gamma(-alpha)`.
pub fn marchaud_constant(alpha: FractionalOrder) -> Result<f64> {
    if alpha.is_one() {
        return Err(Error::Parameter(
            "the Marchaud representation requires alpha < 1".into(),
        ));
    }
    let a = alpha.value();
    let c = a / gamma(1.0 - a);
    let check = -1.0 / gamma(-a);
    if ((c - check) / c).abs() > 1e-12 {
        return Err(Error::SelfCheck(format!(
            "alpha/Gamma(1-alpha) = {c} but -1/Gamma(-alpha) = {check}"
        )));
    }
    Ok(c)
}

type Nodes = Vec<(f64, f64)>;

/// `(y_i, w_i)` for a composite Gauss–Legendre rule on `[a, b]` with weight
/// `y^{-1-alpha}` folded into `w_i`.
fn panel_nodes(a: f64, b: f64, width: f64, rule: &Rule, alpha: f64, out: &mut Nodes) {
    if !(b > a) {
        return;
    }
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let step = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * step;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let y = lo + t * step;
            out.push((y, w * step * y.powf(-1.0 - alpha)));
        }
    }
}

/// Panels whose width grows with `y`, for tails without support information.
fn graded_panel_nodes(a: f64, b: f64, width: f64, rule: &Rule, alpha: f64, out: &mut Nodes) {
    let mut lo = a;
    while lo < b {
        let hi = (lo + width.max(0.05 * lo)).min(b);
        panel_nodes(lo, hi, hi - lo, rule, alpha, out);
        lo = hi;
    }
}

/// `sum_{j >= 0} (a + j P)^{-p}` with `p = 1 + alpha`.
fn period_weight(a: f64, period: f64, alpha: f64) -> f64 {
    const DIRECT: usize = 64;
    let p = 1.0 + alpha;
    let mut sum = 0.0;
    for j in 0..DIRECT {
        sum += (a + j as f64 * period).powf(-p);
    }
    let z = a + DIRECT as f64 * period;
    let d1 = -p * period * z.powf(-p - 1.0);
    let d3 = -p * (p + 1.0) * (p + 2.0) * period.powi(3) * z.powf(-p - 3.0);
    let d5 = -p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) * period.powi(5) * z.powf(-p - 5.0);
    let tail = z.powf(-alpha) / (alpha * period) + 0.5 * z.powf(-p) - d1 / 12.0 + d3 / 720.0
        - d5 / 30240.0;
    sum + tail
}

/// Nodes `(y0 + r_i, w_i W(r_i))` folding `(y0, inf)` onto one period.
fn fold_nodes(period: f64, spec: &QuadratureSpec, rule: &Rule, alpha: f64) -> Nodes {
    let panels = (period / spec.panel_width).ceil().max(1.0) as usize;
    let step = period / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.nodes.len());
    for p in 0..panels {
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let r = (p as f64 + t) * step;
            let a = spec.split + r;
            out.push((a, w * step * period_weight(a, period, alpha)));
        }
    }
    out
}

fn inner_nodes(spec: &QuadratureSpec, alpha: f64, half: bool) -> Nodes {
    let y0 = spec.split;
    match spec.inner_rule {
        InnerRule::GaussJacobi => {
            let n = if half { spec.inner_nodes / 2 } else { spec.inner_nodes };
            let rule = gauss_jacobi_unit(n, -alpha);
            // integral_0^y0 h y^{-1-a} dy = y0^{-a} integral_0^1 (h(y0 t)/t) t^{-a} dt
            let scale = y0.powf(-alpha);
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &w)| (y0 * t, scale * w / t))
                .collect()
        }
        InnerRule::LogTransform { u_min } => {
            let n = if half { spec.tail_nodes / 2 } else { spec.tail_nodes };
            let rule = gauss_legendre_unit(n);
            let u_max = y0.ln();
            let panels = (u_max - u_min).ceil().max(1.0) as usize;
            let step = (u_max - u_min) / panels as f64;
            let mut out = Vec::with_capacity(panels * n);
            for p in 0..panels {
                for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                    let u = u_min + (p as f64 + t) * step;
                    out.push((u.exp(), w * step * (-alpha * u).exp()));
                }
            }
            out
        }
    }
}

/// Per-handle plan for the shifted integral `integral_{y0}^inf f(xi -+ y) y^{-1-alpha} dy`.
enum ShiftPlan {
    Fold { full: Nodes, half: Nodes },
    Window { lo: f64, hi: f64 },
    Panels { full: Nodes, half: Nodes },
}

struct Plan {
    alpha: f64,
    c_alpha: f64,
    spec: QuadratureSpec,
    inner_full: Nodes,
    inner_half: Nodes,
    tail_full: Rule,
    tail_half: Rule,
}

impl Plan {
    fn new(alpha: FractionalOrder, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let c_alpha = marchaud_constant(alpha)?;
        let a = alpha.value();
        Ok(Self {
            alpha: a,
            c_alpha,
            spec: *spec,
            inner_full: inner_nodes(spec, a, false),
            inner_half: inner_nodes(spec, a, true),
            tail_full: gauss_legendre_unit(spec.tail_nodes),
            tail_half: gauss_legendre_unit(spec.tail_nodes / 2),
        })
    }

    fn shift_plan(&self, f: &AnalyticFunction) -> ShiftPlan {
        match f.decay() {
            Decay::Periodic { period } => ShiftPlan::Fold {
                full: fold_nodes(period, &self.spec, &self.tail_full, self.alpha),
                half: fold_nodes(period, &self.spec, &self.tail_half, self.alpha),
            },
            Decay::Support { lo, hi } => ShiftPlan::Window { lo, hi },
            Decay::Unknown => {
                let (mut full, mut half) = (Vec::new(), Vec::new());
                let (a, b, w) = (self.spec.split, self.spec.y_max, self.spec.panel_width);
                graded_panel_nodes(a, b, w, &self.tail_full, self.alpha, &mut full);
                graded_panel_nodes(a, b, w, &self.tail_half, self.alpha, &mut half);
                ShiftPlan::Panels { full, half }
            }
        }
    }

    /// `y`-range `[a, b]` of the support window at `xi`, clipped to `[y0, Ymax]`.
    fn window(&self, lo: f64, hi: f64, xi: f64, dir: Direction) -> (f64, f64, bool) {
        let (a, b) = match dir {
            Direction::Backward => (xi - hi, xi - lo),
            Direction::Forward => (lo - xi, hi - xi),
        };
        let truncated = b > self.spec.y_max;
        (a.max(self.spec.split), b.min(self.spec.y_max), truncated)
    }

    fn window_nodes(&self, a: f64, b: f64, half: bool) -> Nodes {
        let rule = if half { &self.tail_half } else { &self.tail_full };
        let mut out = Vec::new();
        panel_nodes(a, b, self.spec.panel_width, rule, self.alpha, &mut out);
        out
    }

    /// `integral_{y0}^inf y^{-1-alpha} dy`.
    fn local_tail(&self) -> f64 {
        self.spec.split.powf(-self.alpha) / self.alpha
    }

    fn tail_bound(&self, sup: f64) -> f64 {
        2.0 * sup * self.c_alpha / (self.alpha * self.spec.y_max.powf(self.alpha))
    }
}

fn weighted_sum(nodes: &Nodes, h: impl Fn(f64) -> Complex64) -> Complex64 {
    nodes.iter().map(|&(y, w)| h(y) * w).sum()
}

/// Per-point value, embedded error estimate, whether truncation was active.
type PointResult = (Complex64, f64, bool);

fn marchaud_point(
    plan: &Plan,
    shift: &ShiftPlan,
    f: &AnalyticFunction,
    xi: f64,
    dir: Direction,
) -> PointResult {
    let fx = f.eval(xi);
    let diff = |y: f64| fx - f.eval(dir.shift(xi, y));
    let inner = weighted_sum(&plan.inner_full, diff);
    let inner_half = weighted_sum(&plan.inner_half, diff);

    let (outer, outer_half, truncated) = match shift {
        ShiftPlan::Fold { full, half } => (weighted_sum(full, diff), weighted_sum(half, diff), false),
        ShiftPlan::Window { lo, hi } => {
            let (a, b, truncated) = plan.window(*lo, *hi, xi, dir);
            let shifted = |y: f64| f.eval(dir.shift(xi, y));
            let local = fx * plan.local_tail();
            let s = weighted_sum(&plan.window_nodes(a, b, false), shifted);
            let s_half = weighted_sum(&plan.window_nodes(a, b, true), shifted);
            (local - s, local - s_half, truncated)
        }
        ShiftPlan::Panels { full, half } => {
            // local term beyond Ymax is exact; the shifted term there is dropped
            let beyond = fx * plan.spec.y_max.powf(-plan.alpha) / plan.alpha;
            (
                weighted_sum(full, diff) + beyond,
                weighted_sum(half, diff) + beyond,
                true,
            )
        }
    };
    let value = (inner + outer) * plan.c_alpha;
    let err = ((inner - inner_half).norm() + (outer - outer_half).norm()) * plan.c_alpha;
    (value, err, truncated)
}

fn assemble(points: Vec<PointResult>, plan: &Plan, sup: f64) -> QuadratureOutput {
    let error_estimate = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let tail_truncated = points.iter().any(|p| p.2);
    let tail_bound = plan.tail_bound(sup);
    let tol = plan.spec.tolerance;
    let quality_ok = error_estimate <= tol && (!tail_truncated || tail_bound <= tol);
    QuadratureOutput {
        values: points.into_iter().map(|p| p.0).collect(),
        error_estimate,
        tail_bound,
        tail_truncated,
        quality_ok,
    }
}

/// One-sided Marchaud derivative of `f` at the points `xs`.
pub fn marchaud_derivative(
    f: &AnalyticFunction,
    xs: &[f64],
    alpha: FractionalOrder,
    quad: &QuadratureSpec,
    direction: Direction,
) -> Result<QuadratureOutput> {
    let plan = Plan::new(alpha, quad)?;
    let shift = plan.shift_plan(f);
    let points: Vec<PointResult> = xs
        .par_iter()
        .map(|&xi| marchaud_point(&plan, &shift, f, xi, direction))
        .collect();
    Ok(assemble(points, &plan, f.sup_bound()))
}

/// `integral_0^inf (1 - e^{-iky}) / y^{1+alpha} dy`, which equals `-Gamma(-alpha) (ik)^alpha`.
pub fn scalar_symbol_integral(
    k: f64,
    alpha: FractionalOrder,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let plan = Plan::new(alpha, quad)?;
    if k == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mode = AnalyticFunction::mode(k);
    let shift = plan.shift_plan(&mode);
    let (value, _, _) = marchaud_point(&plan, &shift, &mode, 0.0, Direction::Backward);
    Ok(value / plan.c_alpha)
}

/// `integral_{y0}^inf u(xi - y) y^{-1-alpha} dy` and its half-rule companion.
fn shifted_integral(
    plan: &Plan,
    shift: &ShiftPlan,
    u: &AnalyticFunction,
    xi: f64,
) -> (Complex64, Complex64, bool) {
    let shifted = |y: f64| u.eval(xi - y);
    match shift {
        ShiftPlan::Fold { full, half } => (weighted_sum(full, shifted), weighted_sum(half, shifted), false),
        ShiftPlan::Window { lo, hi } => {
            let (a, b, truncated) = plan.window(*lo, *hi, xi, Direction::Backward);
            (
                weighted_sum(&plan.window_nodes(a, b, false), shifted),
                weighted_sum(&plan.window_nodes(a, b, true), shifted),
                truncated,
            )
        }
        ShiftPlan::Panels { full, half } => {
            (weighted_sum(full, shifted), weighted_sum(half, shifted), true)
        }
    }
}

/// Bilinear Marchaud kernel
/// `C_alpha integral_0^inf [f(xi) g(xi-y) - f(xi-y) g(xi)] / y^{1+alpha} dy`.
///
/// Swapping `f` and `g` negates every floating-point operation, so the result
/// is exactly antisymmetric.
pub fn hirota_frac_kernel(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    xs: &[f64],
    alpha: FractionalOrder,
    quad: &QuadratureSpec,
) -> Result<QuadratureOutput> {
    let plan = Plan::new(alpha, quad)?;
    let shift_f = plan.shift_plan(f);
    let shift_g = plan.shift_plan(g);
    let points: Vec<PointResult> = xs
        .par_iter()
        .map(|&xi| {
            let fx = f.eval(xi);
            let gx = g.eval(xi);
            let h = |y: f64| fx * g.eval(xi - y) - f.eval(xi - y) * gx;
            let inner = weighted_sum(&plan.inner_full, h);
            let inner_half = weighted_sum(&plan.inner_half, h);
            let (sf, sf_half, tf) = shifted_integral(&plan, &shift_f, f, xi);
            let (sg, sg_half, tg) = shifted_integral(&plan, &shift_g, g, xi);
            let outer = fx * sg - gx * sf;
            let outer_half = fx * sg_half - gx * sf_half;
            let value = (inner + outer) * plan.c_alpha;
            let err = ((inner - inner_half).norm() + (outer - outer_half).norm()) * plan.c_alpha;
            (value, err, tf || tg)
        })
        .collect();
    Ok(assemble(points, &plan, f.sup_bound() * g.sup_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn constant_examples() {
        let c = marchaud_constant(order(0.5)).unwrap();
        assert!((c - 0.5 / PI.sqrt()).abs() < 1e-15);
        let c = marchaud_constant(order(0.99)).unwrap();
        // 0.99 / Gamma(0.01), Gamma(0.01) = 99.432585119150603...
        assert!((c - 0.99 / 99.432_585_119_150_6).abs() < 1e-14, "{c}");
        assert!(marchaud_constant(FractionalOrder::ONE).is_err());
    }

    #[test]
    fn spec_validation() {
        let mut q = QuadratureSpec::default();
        assert!(q.validate().is_ok());
        q.inner_nodes = 8;
        assert!(q.validate().is_err());
        let q = QuadratureSpec {
            y_max: 0.5,
            ..Default::default()
        };
        assert!(q.validate().is_err());
    }

    #[test]
    fn constants_are_annihilated_exactly() {
        let f = AnalyticFunction::constant(Complex64::new(2.5, -1.0));
        let xs = [-3.0, 0.0, 0.7, 11.0];
        for dir in [Direction::Backward, Direction::Forward] {
            let out = marchaud_derivative(&f, &xs, order(0.4), &Default::default(), dir).unwrap();
            assert!(out.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn mode_backward_and_forward() {
        let f = AnalyticFunction::mode(1.0);
        let xs = [-1.0, 0.0, 0.4, 2.0];
        let q = QuadratureSpec::default();
        let back = marchaud_derivative(&f, &xs, order(0.5), &q, Direction::Backward).unwrap();
        let fwd = marchaud_derivative(&f, &xs, order(0.5), &q, Direction::Forward).unwrap();
        for (j, &x) in xs.iter().enumerate() {
            let e = Complex64::new(0.0, x).exp();
            let b = Complex64::new(0.0, FRAC_PI_4).exp() * e;
            let fw = Complex64::new(0.0, -FRAC_PI_4).exp() * e;
            assert!((back.values[j] - b).norm() < 1e-6);
            assert!((fwd.values[j] - fw).norm() < 1e-6);
        }
        assert!(back.quality_ok && !back.tail_truncated);
    }

    #[test]
    fn scalar_integral_closed_form() {
        let q = QuadratureSpec::default();
        let half = order(0.5);
        assert_eq!(scalar_symbol_integral(0.0, half, &q).unwrap(), Complex64::new(0.0, 0.0));
        let v = scalar_symbol_integral(1.0, half, &q).unwrap();
        let expect = Complex64::new(0.0, FRAC_PI_4).exp() * (2.0 * PI.sqrt());
        assert!((v - expect).norm() < 1e-10, "{v} vs {expect}");
        let w = scalar_symbol_integral(-1.0, half, &q).unwrap();
        assert!((w - v.conj()).norm() < 1e-10);
    }

    #[test]
    fn kernel_swap_is_exact_negation() {
        let f = AnalyticFunction::gaussian(0.0);
        let g = AnalyticFunction::gaussian(1.0);
        let xs: Vec<f64> = (0..9).map(|j| -4.0 + j as f64).collect();
        let q = QuadratureSpec::default();
        let a = hirota_frac_kernel(&f, &g, &xs, order(0.5), &q).unwrap();
        let b = hirota_frac_kernel(&g, &f, &xs, order(0.5), &q).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn kernel_with_unit_first_slot_is_minus_derivative() {
        let one = AnalyticFunction::constant(Complex64::new(1.0, 0.0));
        let g = AnalyticFunction::gaussian(0.0);
        let xs = [-2.0, -0.5, 0.0, 1.5, 3.0];
        let q = QuadratureSpec::default();
        let k = hirota_frac_kernel(&one, &g, &xs, order(0.3), &q).unwrap();
        let d = marchaud_derivative(&g, &xs, order(0.3), &q, Direction::Backward).unwrap();
        for (a, b) in k.values.iter().zip(&d.values) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn unknown_decay_truncates_and_flags() {
        let f = AnalyticFunction::real("lorentzian", 1.0, Decay::Unknown, |x| 1.0 / (1.0 + x * x));
        let out = marchaud_derivative(&f, &[0.0], order(0.5), &Default::default(), Direction::Backward)
            .unwrap();
        assert!(out.tail_truncated);
        assert!(!out.quality_ok, "tail bound 2MC/(aY^a) exceeds 1e-8 at Ymax = 1e4");
    }

    #[test]
    fn period_weight_matches_brute_force() {
        // brute force with a long direct sum and the integral tail
        let (a, p, alpha) = (1.3, 2.0, 0.4);
        let mut brute = 0.0;
        let jmax = 2_000_000usize;
        for j in 0..jmax {
            brute += (a + j as f64 * p).powf(-1.0 - alpha);
        }
        let z = a + jmax as f64 * p;
        brute += z.powf(-alpha) / (alpha * p) + 0.5 * z.powf(-1.0 - alpha);
        let fast = period_weight(a, p, alpha);
        assert!(((fast - brute) / brute).abs() < 1e-12, "{fast} vs {brute}");
    }
}
