//! Gauss rules on `[0, 1]` for the weight `t^beta`, by Golub–Welsch with a
//! Newton polish on the orthonormal three-term recurrence.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights with `integral_0^1 phi(t) t^beta dt ~ sum w_i phi(t_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Recurrence of the monic Jacobi polynomials for `(1-x)^a (1+x)^b` on `[-1, 1]`.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag.push(if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        });
        if k >= 1 {
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            off.push((num / den).sqrt());
        }
    }
    (diag, off)
}

/// Orthonormal `p_n(x)` and `p_n'(x)`, plus `sum_{k<n} p_k(x)^2`.
fn orthonormal_eval(x: f64, diag: &[f64], off: &[f64], mu0: f64, n: usize) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut d_prev = 0.0;
    let mut d = 0.0;
    let mut christoffel = 0.0;
    for k in 0..n {
        christoffel += p * p;
        let b_prev = if k == 0 { 0.0 } else { off[k - 1] };
        // the last step uses b_n = 1; it only rescales p_n and leaves its zeros alone
        let b_next = if k + 1 < n { off[k] } else { 1.0 };
        let p_next = ((x - diag[k]) * p - b_prev * p_prev) / b_next;
        let d_next = (p + (x - diag[k]) * d - b_prev * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d, christoffel)
}

/// Gauss–Jacobi rule for `t^beta` on `[0, 1]`, `beta > -1`.
pub fn gauss_jacobi_unit(n: usize, beta: f64) -> Rule {
    assert!(n >= 1, "rule needs at least one node");
    assert!(beta > -1.0, "weight t^beta must be integrable");
    let (a, b) = (0.0, beta);
    let (diag, off) = jacobi_recurrence(n, a, b);
    let mu0 = 2f64.powf(beta + 1.0) / (beta + 1.0);

    let mut t = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        t[(k, k)] = diag[k];
        if k + 1 < n {
            t[(k, k + 1)] = off[k];
            t[(k + 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut xs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    xs.sort_by(f64::total_cmp);

    let mut rule = Rule {
        nodes: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
    };
    for mut x in xs {
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_eval(x, &diag, &off, mu0, n);
            if dp == 0.0 {
                break;
            }
            x -= p / dp;
        }
        let (_, _, christoffel) = orthonormal_eval(x, &diag, &off, mu0, n);
        // [-1, 1] with (1+x)^beta  ->  [0, 1] with t^beta
        rule.nodes.push(0.5 * (x + 1.0));
        rule.weights.push(1.0 / christoffel / 2f64.powf(beta + 1.0));
    }
    rule
}

pub fn gauss_legendre_unit(n: usize) -> Rule {
    gauss_jacobi_unit(n, 0.0)
}
