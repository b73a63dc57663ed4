//! Spin P, W and Q distributions on the sphere.

use super::tensor::{c_kq, SphericalTensorRep};
use crate::linalg::CMatrix;
use crate::model::Spin;
use crate::specfun::{parity, spherical_harmonic};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which quasiprobability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// Glauber–Sudarshan-type P.
    P,
    /// Wigner W.
    W,
    /// Husimi Q.
    Q,
}

/// Factor multiplying ϱ_kq Y_kq in the density `dist`, with its sign.
pub fn tensor_weight(spin: Spin, dist: Distribution, k: usize, q: i64) -> f64 {
    let d = spin.dim() as f64;
    match dist {
        Distribution::P => parity(k as i64 - q) * c_kq(spin, k),
        Distribution::W => (d / (4.0 * PI)).sqrt(),
        Distribution::Q => parity(k as i64 - q) * d / (4.0 * PI) / c_kq(spin, k),
    }
}

/// Σ_kq weight·ϱ_kq Y_kq(θ, φ), before discarding the imaginary part.
pub fn spin_density_complex(rep: &SphericalTensorRep, dist: Distribution, theta: f64, phi: f64) -> Complex64 {
    rep.iter()
        .map(|(k, q, v)| tensor_weight(rep.spin, dist, k, q) * v * spherical_harmonic(k, q, theta, phi))
        .sum()
}

/// Tensor-sum density; the imaginary residual of a Hermitian source is
/// roundoff and is dropped.
pub fn spin_density(rep: &SphericalTensorRep, dist: Distribution, theta: f64, phi: f64) -> f64 {
    let v = spin_density_complex(rep, dist, theta, phi);
    debug_assert!(v.im.abs() <= 1e-9 * (1.0 + v.re.abs()), "imaginary residual {}", v.im);
    v.re
}

/// P_Q(θ, φ).
pub fn p_spin(rep: &SphericalTensorRep, theta: f64, phi: f64) -> f64 {
    spin_density(rep, Distribution::P, theta, phi)
}

/// W_Q(θ, φ).
pub fn w_spin(rep: &SphericalTensorRep, theta: f64, phi: f64) -> f64 {
    spin_density(rep, Distribution::W, theta, phi)
}

/// Q_Q(θ, φ).
pub fn q_spin(rep: &SphericalTensorRep, theta: f64, phi: f64) -> f64 {
    spin_density(rep, Distribution::Q, theta, phi)
}

/// Closed forms of the spin densities in terms of the entries of
/// a Hermitian matrix `rho` (basis m = s … −s).
pub fn spin_density_closed(spin: Spin, dist: Distribution, rho: &CMatrix, theta: f64, phi: f64) -> f64 {
    match spin {
        Spin::One => closed_one(dist, rho, theta, phi),
        Spin::ThreeHalves => closed_three_halves(dist, rho, theta, phi),
    }
}

fn closed_one(dist: Distribution, rho: &CMatrix, th: f64, ph: f64) -> f64 {
    let (c, sn) = (th.cos(), th.sin());
    let c2 = (2.0 * th).cos();
    let e = |q: f64| Complex64::from_polar(1.0, q * ph);
    let pp = rho[(0, 0)].re;
    let zz = rho[(1, 1)].re;
    let mm = rho[(2, 2)].re;
    let p0 = (e(1.0) * rho[(0, 1)]).re;
    let m0 = (e(-1.0) * rho[(2, 1)]).re;
    let pm = (e(2.0) * rho[(0, 2)]).re;
    let r2 = 2f64.sqrt();
    match dist {
        Distribution::P => {
            (3.0 * (3.0 - 4.0 * c + 5.0 * c2) * pp - 6.0 * (1.0 + 5.0 * c2) * zz + 3.0 * (3.0 + 4.0 * c + 5.0 * c2) * mm
                + 12.0 * r2 * sn * (1.0 - 5.0 * c) * p0
                + 12.0 * r2 * sn * (1.0 + 5.0 * c) * m0
                + 60.0 * sn * sn * pm)
                / (16.0 * PI)
        }
        Distribution::W => {
            let r10 = 10f64.sqrt();
            let r5 = 5f64.sqrt();
            ((8.0 + r10 + 12.0 * r2 * c + 3.0 * r10 * c2) * pp
                + (8.0 + 4.0 * r10 - 12.0 * r10 * c * c) * zz
                + (8.0 + r10 - 12.0 * r2 * c + 3.0 * r10 * c2) * mm
                + 24.0 * (1.0 + r5 * c) * sn * p0
                + 24.0 * (1.0 - r5 * c) * sn * m0
                + 12.0 * r10 * sn * sn * pm)
                / (32.0 * PI)
        }
        Distribution::Q => {
            let (sh2, ch2) = ((0.5 * th).sin().powi(2), (0.5 * th).cos().powi(2));
            3.0 / (4.0 * PI)
                * (sh2 * sh2 * pp + 0.5 * sn * sn * zz + ch2 * ch2 * mm
                    + r2 * sn * sh2 * p0
                    + r2 * sn * ch2 * m0
                    + 0.5 * sn * sn * pm)
        }
    }
}

fn closed_three_halves(dist: Distribution, rho: &CMatrix, th: f64, ph: f64) -> f64 {
    // Labels 2, 1, −1, −2 (for m = 3/2, 1/2, −1/2, −3/2) map to 0..4.
    let ix = |l: i32| match l {
        2 => 0,
        1 => 1,
        -1 => 2,
        _ => 3,
    };
    let r = |a: i32, b: i32| rho[(ix(a), ix(b))];
    let e = |q: f64| Complex64::from_polar(1.0, q * ph);
    let re = |q: f64, a: i32, b: i32| (e(q) * r(a, b)).re;
    let (c, sn) = (th.cos(), th.sin());
    let (c2, c3) = ((2.0 * th).cos(), (3.0 * th).cos());
    let (s2, s3) = ((2.0 * th).sin(), (3.0 * th).sin());
    let d22 = r(2, 2).re;
    let d11 = r(1, 1).re;
    let dm1 = r(-1, -1).re;
    let dm2 = r(-2, -2).re;
    let q3 = 3f64.sqrt();
    match dist {
        Distribution::P => {
            ((18.0 - 45.0 * c + 30.0 * c2 - 35.0 * c3) * d22
                + (18.0 + 45.0 * c + 30.0 * c2 + 35.0 * c3) * dm2
                + (-2.0 + 55.0 * c - 30.0 * c2 + 105.0 * c3) * d11
                - (2.0 + 55.0 * c + 30.0 * c2 + 105.0 * c3) * dm1
                + 10.0 * q3 * (3.0 * sn - 4.0 * s2 + 7.0 * s3) * re(1.0, 2, 1)
                + 40.0 * q3 * (1.0 - 7.0 * c) * sn * sn * re(2.0, 2, -1)
                + 280.0 * sn.powi(3) * re(3.0, 2, -2)
                - 10.0 * (sn + 21.0 * s3) * re(1.0, 1, -1)
                + 40.0 * q3 * (1.0 + 7.0 * c) * sn * sn * re(2.0, 1, -2)
                + 10.0 * q3 * (3.0 * sn + 4.0 * s2 + 7.0 * s3) * re(1.0, -1, -2))
                / (32.0 * PI)
        }
        Distribution::W => {
            let (r5, r7, r15, r21, r35) = (5f64.sqrt(), 7f64.sqrt(), 15f64.sqrt(), 21f64.sqrt(), 35f64.sqrt());
            let a = 8.0 * r15 + r35;
            ((3.0 * a * c + 5.0 * (8.0 + 2.0 * r5 + 6.0 * r5 * c2 + r35 * c3)) * d22
                + (-3.0 * a * c + 5.0 * (8.0 + 2.0 * r5 + 6.0 * r5 * c2 - r35 * c3)) * dm2
                + ((8.0 * r15 - 9.0 * r35) * c - 5.0 * (-8.0 + 2.0 * r5 + 6.0 * r5 * c2 + 3.0 * r35 * c3)) * d11
                + ((-8.0 * r15 + 9.0 * r35) * c + 5.0 * (8.0 - 2.0 * r5 - 6.0 * r5 * c2 + 3.0 * r35 * c3)) * dm1
                + 4.0 * r5 * (3.0 * (4.0 + r21) + 20.0 * q3 * c + 5.0 * r21 * c2) * sn * re(1.0, 2, 1)
                + 40.0 * r15 * (1.0 + r7 * c) * sn * sn * re(2.0, 2, -1)
                + 40.0 * r35 * sn.powi(3) * re(3.0, 2, -2)
                + 8.0 * r5 * (4.0 * q3 + 3.0 * r7 - 15.0 * r7 * c * c) * sn * re(1.0, 1, -1)
                + 40.0 * r15 * (1.0 - r7 * c) * sn * sn * re(2.0, 1, -2)
                + 4.0 * r5 * (3.0 * (4.0 + r21) - 20.0 * q3 * c + 5.0 * r21 * c2) * sn * re(1.0, -1, -2))
                / (160.0 * PI)
        }
        Distribution::Q => {
            let (sh, ch) = ((0.5 * th).sin(), (0.5 * th).cos());
            (8.0 * sh.powi(6) * d22
                + 24.0 * sh.powi(4) * ch * ch * d11
                + 24.0 * ch.powi(4) * sh * sh * dm1
                + 8.0 * ch.powi(6) * dm2
                + 8.0 * q3 * sn * sh.powi(4) * re(-1.0, 1, 2)
                + 8.0 * q3 * sn * ch.powi(4) * re(-1.0, -2, -1)
                + 4.0 * q3 * sn * sn * sh * sh * re(-2.0, -1, 2)
                + 4.0 * q3 * sn * sn * ch * ch * re(-2.0, -2, 1)
                + 6.0 * sn.powi(3) * re(-1.0, -1, 1)
                + 2.0 * sn.powi(3) * re(-3.0, -2, 2))
                / (8.0 * PI)
        }
    }
}

/// Coherent-state Husimi ⟨θφ|ρ|θφ⟩(2s+1)/(4π), an oracle independent of
/// the tensor machinery.
pub fn q_spin_direct(spin: Spin, rho: &CMatrix, theta: f64, phi: f64) -> f64 {
    let z = Complex64::from_polar((0.5 * theta).tan(), -phi);
    let amps = if theta >= PI {
        // tan(π/2) is infinite; the coherent state there is |s, s⟩.
        let mut v = vec![Complex64::new(0.0, 0.0); spin.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    } else {
        crate::state::spin_coherent_amplitudes(spin, z)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..spin.dim() {
        for j in 0..spin.dim() {
            acc += amps[i].conj() * rho[(i, j)] * amps[j];
        }
    }
    acc.re * spin.dim() as f64 / (4.0 * PI)
}
