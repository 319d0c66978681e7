use std::f64::consts::PI;

use proptest::prelude::*;

use frac_hirota::bilinear::{hirota_frac_commutator, TrigPolynomial};
use frac_hirota::expsum::{apply_bilinear_symbolic, BilinearOperatorSpec, ExpSum, PhaseVector, Term};
use frac_hirota::grid::{
    sobolev_norm, spectral_derivative, spectral_frac_derivative, FractionalOrder, GridFunction,
};
use frac_hirota::marchaud::{
    marchaud_derivative, AnalyticFunction, Decay, Direction, QuadratureSpec,
};
use frac_hirota::Complex64;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Sum of up to three Gaussian bumps, well inside `[-20, 20)`.
fn bumps() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, 0.3..2.0f64, -2.0..2.0f64), 1..4)
}

fn sample_bumps(b: &[(f64, f64, f64)], n: usize) -> GridFunction {
    let b = b.to_vec();
    GridFunction::sample_real(20.0, n, move |x| {
        b.iter().map(|(c, w, a)| a * (-(x - c) * (x - c) / (w * w)).exp()).sum()
    })
    .unwrap()
}

fn trig(max_mode: i64) -> impl Strategy<Value = TrigPolynomial> {
    prop::collection::vec((-max_mode..=max_mode, cplx()), 1..6)
        .prop_map(|terms| TrigPolynomial::new(10.0, terms))
}

fn phase() -> impl Strategy<Value = PhaseVector> {
    // sigma linear in the phase, so merged terms agree on it
    (-3i32..=3, -2i32..=2, -1i32..=1).prop_map(|(k, l, d)| {
        let k = Complex64::new(0.5 * k as f64, 0.0);
        let omega = Complex64::new(0.0, 0.25 * l as f64);
        let sigma = k * Complex64::new(0.7, -0.3) + omega * 1.9;
        PhaseVector::new(k, Complex64::new(0.0, 0.0), omega, Some(sigma), Complex64::new(0.1 * d as f64, 0.0))
    })
}

fn exp_sum() -> impl Strategy<Value = ExpSum> {
    prop::collection::vec((cplx(), phase()), 1..6).prop_map(|terms| {
        ExpSum::from_terms(terms.into_iter().map(|(coeff, phase)| Term { coeff, phase }).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn real_input_gives_real_output(b in bumps(), a in 0.05..1.0f64) {
        let f = sample_bumps(&b, 512);
        let d = spectral_frac_derivative(&f, order(a)).unwrap();
        prop_assert!(d.max_imag() <= 1e-12 * f.max_abs().max(1e-300));
    }

    #[test]
    fn semigroup_on_modes(n in 1i64..20, a in 0.05..0.5f64, b in 0.05..0.5f64) {
        let k = n as f64;
        let f = GridFunction::sample_periodic(PI, 64, |x| Complex64::new(0.0, k * x).exp()).unwrap();
        let two_steps = spectral_frac_derivative(&spectral_frac_derivative(&f, order(a)).unwrap(), order(b)).unwrap();
        let one_step = spectral_frac_derivative(&f, order(a + b)).unwrap();
        prop_assert!(two_steps.max_diff(&one_step) <= 1e-12 * k.powf(a + b).max(1.0));
    }

    #[test]
    fn order_one_is_the_derivative(b in bumps()) {
        let f = sample_bumps(&b, 256);
        let frac = spectral_frac_derivative(&f, FractionalOrder::ONE).unwrap();
        let exact = spectral_derivative(&f, 1).unwrap();
        prop_assert_eq!(frac.values(), exact.values());
    }

    #[test]
    fn parseval(b in bumps()) {
        let f = sample_bumps(&b, 512);
        let physical = (f.spacing() * f.values().iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        prop_assert!((sobolev_norm(&f, 0.0) - physical).abs() <= 1e-12 * physical);
    }

    #[test]
    fn marchaud_annihilates_constants(c in cplx(), a in 0.05..0.95f64, x in -5.0..5.0f64) {
        let out = marchaud_derivative(&AnalyticFunction::constant(c), &[x], order(a), &QuadratureSpec::default(), Direction::Backward).unwrap();
        prop_assert_eq!(out.values[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn direction_multipliers_are_conjugate(k in -3.0..3.0f64, a in 0.1..0.9f64, x in -3.0..3.0f64) {
        let mode = AnalyticFunction::mode(k);
        let quad = QuadratureSpec::default();
        let phase = Complex64::new(0.0, -k * x).exp();
        let back = marchaud_derivative(&mode, &[x], order(a), &quad, Direction::Backward).unwrap().values[0] * phase;
        let fwd = marchaud_derivative(&mode, &[x], order(a), &quad, Direction::Forward).unwrap().values[0] * phase;
        prop_assert!((back - fwd.conj()).norm() <= 1e-8);
    }

    #[test]
    fn forward_is_reflected_backward(centre in -2.0..2.0f64, a in 0.1..0.9f64, x in -3.0..3.0f64) {
        let quad = QuadratureSpec::default();
        let fwd = marchaud_derivative(&AnalyticFunction::gaussian(centre), &[x], order(a), &quad, Direction::Forward).unwrap();
        let back = marchaud_derivative(&AnalyticFunction::gaussian(-centre), &[-x], order(a), &quad, Direction::Backward).unwrap();
        prop_assert!((fwd.values[0] - back.values[0]).norm() <= 1e-12);
    }

    #[test]
    fn commutator_identities(f in trig(12), g in trig(12), h in trig(12), s in cplx(), a in 0.05..1.0f64) {
        let n = 64;
        let (f, g, h) = (f.sample(n).unwrap(), g.sample(n).unwrap(), h.sample(n).unwrap());
        let alpha = order(a);
        let fg = hirota_frac_commutator(&f, &g, alpha).unwrap();
        let gf = hirota_frac_commutator(&g, &f, alpha).unwrap();
        prop_assert!((&fg + &gf).values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        prop_assert_eq!(hirota_frac_commutator(&f, &f, alpha).unwrap().max_abs(), 0.0);
        let lhs = hirota_frac_commutator(&(&(&f * s) + &h), &g, alpha).unwrap();
        let rhs = &(&fg * s) + &hirota_frac_commutator(&h, &g, alpha).unwrap();
        let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
        prop_assert!(lhs.max_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn canonicalize_is_idempotent(s in exp_sum(), tiny in 1e-20..1e-15f64) {
        let mut terms = s.terms().to_vec();
        if let Some(&t) = terms.first() {
            terms.push(Term { coeff: t.coeff * tiny, phase: PhaseVector { k: t.phase.k + 7.0, ..t.phase } });
            terms.push(t);
        }
        let once = ExpSum::from_terms(terms);
        prop_assert_eq!(once.canonicalize(), once.clone());
        prop_assert_eq!(once.canonicalize().canonicalize(), once.canonicalize());
    }

    #[test]
    fn json_round_trip(s in exp_sum()) {
        prop_assert_eq!(ExpSum::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn symbolic_swap_parity(f in exp_sum(), g in exp_sum()) {
        let cases = [(BilinearOperatorSpec::frac_t(), -1.0), (BilinearOperatorSpec::kdv(), 1.0)];
        for (op, parity) in cases {
            let fg = apply_bilinear_symbolic(&op, &f, &g).unwrap();
            let gf = apply_bilinear_symbolic(&op, &g, &f).unwrap();
            let scale = fg.max_coeff().max(gf.max_coeff()).max(1.0);
            for t in fg.terms() {
                let same = |p: &PhaseVector, q: &PhaseVector| (p.k, p.ell, p.omega, p.delta) == (q.k, q.ell, q.omega, q.delta);
                let partner = gf.terms().iter().find(|u| same(&u.phase, &t.phase));
                let other = partner.map_or(Complex64::new(0.0, 0.0), |u| u.coeff);
                prop_assert!((t.coeff - other * parity).norm() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn unknown_decay_reports_tail(a in 0.1..0.9f64) {
        let f = AnalyticFunction::new("bump", 1.0, Decay::Unknown, |x| Complex64::new((-x * x).exp(), 0.0));
        let out = marchaud_derivative(&f, &[0.0], order(a), &QuadratureSpec::default(), Direction::Backward).unwrap();
        prop_assert!(out.tail_truncated);
        prop_assert!(out.tail_bound > 0.0);
    }
}
