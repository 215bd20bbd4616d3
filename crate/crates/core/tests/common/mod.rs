//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use cs_green::{BasisSpec, BandedSymmetric};

/// Gauss-Laguerre nodes and weights for the weight `e^{-x}` on `[0, ∞)`,
/// found by Newton iteration on `L_n`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut deriv = 0.0;
        let mut prev = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (1.0f64, 0.0f64);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            deriv = (nf * p1 - nf * p2) / z;
            prev = p2;
            let step = p1 / deriv;
            z -= step;
            if step.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        // w_i = -1 / (n L_n'(x_i) L_{n-1}(x_i))
        nodes.push(z);
        weights.push(-1.0 / (deriv * nf * prev));
    }
    (nodes, weights)
}

/// `<r|n>` for `n < count` by the raw Laguerre recurrence, with the
/// normalization built up as a running product.
pub fn radial_oracle(basis: &BasisSpec, count: usize, r: f64) -> Vec<f64> {
    let alpha = basis.laguerre_order();
    let ell = basis.effective_l();
    let x = 2.0 * basis.b() * r;
    // c_0² = 1/Γ(α+1), α a non-negative integer
    let mut c2 = 1.0 / (1..=alpha as u64).map(|k| k as f64).product::<f64>();
    let pre = (-0.5 * x).exp() * x.powf(ell + 1.0);
    let (mut l_prev, mut l_cur) = (0.0, 1.0);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        if k > 0 {
            c2 *= k as f64 / (k as f64 + alpha);
        }
        out.push(c2.sqrt() * pre * l_cur);
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * l_cur - (kf + alpha) * l_prev) / (kf + 1.0);
        l_prev = l_cur;
        l_cur = next;
    }
    out
}

/// `∫ <r|n> r^power <r|n'> dr` for all `n, n' < order` by Gauss-Laguerre
/// quadrature in `x = 2br`; exact for these polynomial integrands once
/// `nodes` is large enough.
pub fn quadrature_power_matrix(basis: &BasisSpec, order: usize, power: i32, nodes: usize) -> DMatrix<f64> {
    let (xs, ws) = gauss_laguerre(nodes);
    let b = basis.b();
    let mut out = DMatrix::zeros(order, order);
    for (&x, &w) in xs.iter().zip(&ws) {
        // polynomial part of the basis functions: c_n x^{(α+1)/2} L_n(x) without e^{-x/2}
        let r = x / (2.0 * b);
        let phis = radial_oracle(basis, order, r);
        let unweight = (0.5 * x).exp();
        let factor = w * r.powi(power) / (2.0 * b) * unweight * unweight;
        for i in 0..order {
            for j in 0..order {
                out[(i, j)] += factor * phis[i] * phis[j];
            }
        }
    }
    out
}

/// Lowest eigenvalues of the generalized problem `H v = E S v` on a dense truncation.
pub fn dense_generalized_eigenvalues(h: &BandedSymmetric<f64>, s: &BandedSymmetric<f64>) -> Vec<f64> {
    let (values, _) = dense_generalized_eigen(h, s);
    values
}

/// Eigenvalues (ascending) and `S`-normalized eigenvectors.
pub fn dense_generalized_eigen(h: &BandedSymmetric<f64>, s: &BandedSymmetric<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let h = h.to_dense();
    let s = s.to_dense();
    let chol = s.cholesky().expect("overlap is positive definite");
    let l = chol.l();
    let l_inv = l.clone().try_inverse().expect("invertible factor");
    let a = &l_inv * h * l_inv.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| l_inv.transpose() * eig.eigenvectors.column(i))
        .collect();
    (values, vectors)
}

/// Leading `corner x corner` block of the inverse of a dense complex matrix.
pub fn dense_inverse_corner(j: &BandedSymmetric<Complex64>, corner: usize) -> DMatrix<Complex64> {
    let inv = j.to_dense().lu().try_inverse().expect("J is invertible off the real axis");
    inv.view((0, 0), (corner, corner)).into_owned()
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.norm()))
}

/// `<n|r|n'>` for `n' >= n`, closed form.
pub fn r1_closed(ell: f64, b: f64, n: usize, np: usize) -> f64 {
    let nf = n as f64;
    let q = np as f64;
    match np - n {
        0 => (6.0 * nf * nf + 2.0 * (ell + 1.0) * (6.0 * nf + 2.0 * ell + 3.0)) / (4.0 * b * b),
        1 => -(2.0 * q + 2.0 * ell + 1.0) * (q * (q + 2.0 * ell + 1.0)).sqrt() / (2.0 * b * b),
        2 => (q * (q - 1.0) * (q + 2.0 * ell) * (q + 2.0 * ell + 1.0)).sqrt() / (4.0 * b * b),
        _ => 0.0,
    }
}

/// `<n|r²|n'>` for `n' >= n`, closed form with the grouping
/// `(((10n+2L+4)(n+2L+3) + 9n(n-1))(n+2L+2) + n(n-1)(n-2)) / 8b³` on the diagonal.
pub fn r2_closed(ell: f64, b: f64, n: usize, np: usize) -> f64 {
    let nf = n as f64;
    let q = np as f64;
    let b3 = b * b * b;
    match np - n {
        0 => {
            (((10.0 * nf + 2.0 * ell + 4.0) * (nf + 2.0 * ell + 3.0) + 9.0 * nf * (nf - 1.0))
                * (nf + 2.0 * ell + 2.0)
                + nf * (nf - 1.0) * (nf - 2.0))
                / (8.0 * b3)
        }
        1 => {
            -3.0 / (8.0 * b3)
                * ((4.0 * q + 2.0 * ell) * (q + 2.0 * ell + 2.0) + (q - 1.0) * (q - 2.0))
                * (q * (q + 2.0 * ell + 1.0)).sqrt()
        }
        2 => {
            3.0 / (8.0 * b3)
                * (2.0 * q + 2.0 * ell)
                * (q * (q - 1.0) * (q + 2.0 * ell + 1.0) * (q + 2.0 * ell)).sqrt()
        }
        3 => {
            -(q * (q - 1.0)
                * (q - 2.0)
                * (q + 2.0 * ell + 1.0)
                * (q + 2.0 * ell)
                * (q + 2.0 * ell - 1.0))
                .sqrt()
                / (8.0 * b3)
        }
        _ => 0.0,
    }
}
