//! Spin tomograms in rotated frames and exact reconstruction of the qudit
//! density matrix from them.
//!
//! A tomogram ω(m; 𝔟, 𝔤) is the diagonal of D ρ D† for the rotation with
//! Euler angles (𝔞, 𝔟, 𝔤); it does not depend on 𝔞. Reconstruction inverts
//! the rotation integral with a product quadrature that is exact for the
//! band limits of the integrand, so the round trip is limited by roundoff.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::Spin;
use crate::phasespace::tensor::SphericalTensorRep;
use crate::specfun::{gauss_legendre, jacobi, log_factorial, parity, wigner3j, wigner_big_d, wigner_d_small, Half};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Probabilities of the spin projections along a rotated axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tomogram {
    /// Spin sector.
    pub spin: Spin,
    /// Euler angle 𝔞 (carried for completeness; the values ignore it).
    pub a: f64,
    /// Euler angle 𝔟.
    pub b: f64,
    /// Euler angle 𝔤.
    pub g: f64,
    /// ω(m) in basis order m = s … −s.
    pub probs: Vec<f64>,
}

impl Tomogram {
    /// ω(m) for the magnetic number with doubled value `m_twice`.
    pub fn prob_twice(&self, m_twice: i32) -> f64 {
        self.probs[((self.spin.twice() - m_twice) / 2) as usize]
    }

    /// Σ_m ω(m).
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// D^j_{m′m}(𝔞, 𝔟, 𝔤) = e^{i𝔞m′} e^{i𝔤m} d^j_{m′m}(𝔟).
pub fn wigner_d(j: Half, mp: Half, m: Half, a: f64, b: f64, g: f64) -> Complex64 {
    wigner_big_d(j, mp, m, a, b, g)
}

/// Generic route ω(m) = Σ_{m′m″} D_{mm′} ρ_{m′m″} D*_{mm″}.
pub fn tomogram_with_a(spin: Spin, rho: &CMatrix, a: f64, b: f64, g: f64) -> Tomogram {
    let d = spin.dim();
    let sj = Half(spin.twice());
    let probs = (0..d)
        .map(|i| {
            let m = Half(spin.m_twice(i));
            let row: Vec<Complex64> = (0..d).map(|k| wigner_d(sj, m, Half(spin.m_twice(k)), a, b, g)).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                for l in 0..d {
                    acc += row[k] * rho[(k, l)] * row[l].conj();
                }
            }
            acc.re
        })
        .collect();
    Tomogram { spin, a, b, g, probs }
}

/// Tomogram at 𝔞 = 0.
pub fn tomogram(spin: Spin, rho: &CMatrix, b: f64, g: f64) -> Tomogram {
    tomogram_with_a(spin, rho, 0.0, b, g)
}

/// Closed forms of the tomograms in terms of ρ entries, in the
/// Jacobi form P_{s−m}^{(m−m′, m+m′)}(cos 𝔟). Valid for 0 < 𝔟 < π, where
/// the tan/cot factors are finite.
pub fn tomogram_closed(spin: Spin, rho: &CMatrix, b: f64, g: f64) -> Tomogram {
    let x = b.cos();
    let (tn, ct) = ((0.5 * b).tan(), 1.0 / (0.5 * b).tan());
    let half_sin = 0.5 * b.sin();
    let e = |k: f64| Complex64::from_polar(1.0, k * g);
    let re = |k: f64, i: usize, j: usize| (e(k) * rho[(i, j)]).re;
    let ts = spin.twice();
    let probs = (0..spin.dim())
        .map(|i| {
            let tm = spin.m_twice(i);
            let l = ((ts - tm) / 2) as usize;
            // P_{s−m}^{(m−m′, m+m′)} for a doubled m′.
            let p = |tmp: i32| jacobi(l, ((tm - tmp) / 2) as i64, ((tm + tmp) / 2) as i64, x);
            let fact = (log_factorial(((ts - tm) / 2) as u64) + log_factorial(((ts + tm) / 2) as u64)).exp();
            let r = |v: &[f64]| v.iter().sum::<f64>();
            match spin {
                Spin::One => {
                    let m = tm / 2;
                    let (pa, p0, pb) = (p(2), p(0), p(-2));
                    let pre = 0.5 * half_sin.powi(2 * m) * fact;
                    pre * r(&[
                        (ct * pa).powi(2) * rho[(0, 0)].re,
                        (tn * pb).powi(2) * rho[(2, 2)].re,
                        2.0 * p0 * p0 * rho[(1, 1)].re,
                        2.0 * 2f64.sqrt() * p0 * (tn * pb * re(1.0, 1, 2) + ct * pa * re(1.0, 0, 1)),
                        2.0 * pa * pb * re(2.0, 0, 2),
                    ])
                }
                Spin::ThreeHalves => {
                    let (p3, p1, pm1, pm3) = (p(3), p(1), p(-1), p(-3));
                    let pre = half_sin.powi(tm) * fact / 6.0;
                    let s3 = 3f64.sqrt();
                    pre * r(&[
                        ct.powi(3) * p3 * p3 * rho[(0, 0)].re,
                        3.0 * ct * p1 * p1 * rho[(1, 1)].re,
                        3.0 * tn * pm1 * pm1 * rho[(2, 2)].re,
                        tn.powi(3) * pm3 * pm3 * rho[(3, 3)].re,
                        2.0 * s3 * p3 * (ct * ct * p1 * re(1.0, 0, 1) + ct * pm1 * re(2.0, 0, 2)),
                        2.0 * s3 * pm3 * (tn * tn * pm1 * re(1.0, 2, 3) + tn * p1 * re(2.0, 1, 3)),
                        2.0 * pm3 * p3 * re(3.0, 0, 3),
                        6.0 * pm1 * p1 * re(1.0, 1, 2),
                    ])
                }
            }
        })
        .collect();
    Tomogram { spin, a: 0.0, b, g, probs }
}

/// Product quadrature over the rotation group for the inversion.
///
/// The 𝔞 integral is exact analytically (neither ω nor D^σ_{0m̃} depends
/// on 𝔞); 𝔟 uses Gauss–Legendre in cos 𝔟 and 𝔤 a uniform rule.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationQuadrature {
    /// 𝔟 nodes.
    pub b: Vec<f64>,
    /// Gauss–Legendre weights in cos 𝔟.
    pub wb: Vec<f64>,
    /// 𝔤 nodes 2πj/n.
    pub g: Vec<f64>,
}

impl RotationQuadrature {
    /// Smallest node counts that make the inversion exact: 2s+2 in 𝔟 and
    /// 4s+2 in 𝔤.
    pub fn required(spin: Spin) -> (usize, usize) {
        let ts = spin.twice() as usize;
        (ts + 2, 2 * ts + 2)
    }

    /// Quadrature with the given node counts, rejected when below
    /// [`RotationQuadrature::required`].
    pub fn new(spin: Spin, n_b: usize, n_g: usize) -> Result<Self> {
        let (need_b, need_g) = Self::required(spin);
        if n_b < need_b || n_g < need_g {
            return Err(Error::Quadrature { need_b, need_g, got_b: n_b, got_g: n_g });
        }
        let (xs, wb) = gauss_legendre(n_b);
        Ok(RotationQuadrature {
            b: xs.iter().map(|x| x.acos()).collect(),
            wb,
            g: (0..n_g).map(|j| 2.0 * PI * j as f64 / n_g as f64).collect(),
        })
    }

    /// Minimal exact quadrature.
    pub fn minimal(spin: Spin) -> Self {
        let (nb, ng) = Self::required(spin);
        Self::new(spin, nb, ng).expect("required counts are admissible")
    }

    /// Nodes (𝔟, 𝔤, weight) with weights normalized to the measure dW/(8π²).
    pub fn nodes(&self) -> Vec<(f64, f64, f64)> {
        let wg = 1.0 / (2.0 * self.g.len() as f64);
        self.b
            .iter()
            .zip(&self.wb)
            .flat_map(|(&b, &w)| self.g.iter().map(move |&g| (b, g, w * wg)))
            .collect()
    }
}

/// Tomograms sampled on every node of `quad` in parallel.
fn sample_all(spin: Spin, sampler: &(dyn Fn(f64, f64) -> Vec<f64> + Sync), quad: &RotationQuadrature) -> Vec<(f64, f64, f64, Vec<f64>)> {
    quad.nodes()
        .into_par_iter()
        .map(|(b, g, w)| {
            let p = sampler(b, g);
            assert_eq!(p.len(), spin.dim(), "sampler must return 2s+1 probabilities");
            (b, g, w, p)
        })
        .collect()
}

/// ϱ_kq = (2k+1)^{3/2} Σ_m (−1)^{s−m+q} (s s k; m −m 0) ∫ ω(m) D^k_{0,−q} dW/(8π²).
pub fn reconstruct_spherical(spin: Spin, sampler: &(dyn Fn(f64, f64) -> Vec<f64> + Sync), quad: &RotationQuadrature) -> SphericalTensorRep {
    let samples = sample_all(spin, sampler, quad);
    let ts = spin.twice();
    let sj = Half(ts);
    let mut rep = SphericalTensorRep::zeros(spin);
    for k in 0..=ts as usize {
        let kj = Half::int(k as i32);
        for q in -(k as i64)..=k as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..spin.dim() {
                let tm = spin.m_twice(i);
                let w3 = wigner3j(sj, sj, kj, Half(tm), Half(-tm), Half(0));
                if w3 == 0.0 {
                    continue;
                }
                let integral: Complex64 = samples
                    .iter()
                    .map(|(b, g, w, p)| w * p[i] * wigner_d(kj, Half(0), Half(-2 * q as i32), 0.0, *b, *g))
                    .sum();
                acc += parity((ts - tm) as i64 / 2 + q) * w3 * integral;
            }
            rep.set(k, q, ((2 * k + 1) as f64).powf(1.5) * acc);
        }
    }
    rep
}

/// ρ_{m′m″} = (−1)^{−m″} Σ_{σ,m̃} (2σ+1)² Σ_m (−1)^m (s s σ; m −m 0)
/// (s s σ; m′ −m″ m̃) ∫ ω(m) D^σ_{0m̃} dW/(8π²), with the two signs
/// combined into the integer power (−1)^{m−m″}.
pub fn reconstruct_density(spin: Spin, sampler: &(dyn Fn(f64, f64) -> Vec<f64> + Sync), quad: &RotationQuadrature) -> CMatrix {
    let samples = sample_all(spin, sampler, quad);
    let d = spin.dim();
    let ts = spin.twice();
    let sj = Half(ts);
    // I[σ][m̃ + σ][i] = ∫ ω(m_i) D^σ_{0m̃} dW/(8π²).
    let integrals: Vec<Vec<Vec<Complex64>>> = (0..=ts)
        .map(|sigma| {
            (-sigma..=sigma)
                .map(|mt| {
                    (0..d)
                        .map(|i| {
                            samples
                                .iter()
                                .map(|(b, g, w, p)| {
                                    w * p[i] * Complex64::from_polar(1.0, mt as f64 * g) * wigner_d_small(Half::int(sigma), Half(0), Half::int(mt), *b)
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut rho = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let (tmp, tmpp) = (spin.m_twice(r), spin.m_twice(c));
            // Only m̃ = m″ − m′ survives the second 3j symbol.
            let mt2 = tmpp - tmp;
            let mut acc = Complex64::new(0.0, 0.0);
            for sigma in 0..=ts {
                if mt2.abs() > 2 * sigma {
                    continue;
                }
                let sg = Half::int(sigma);
                let w_right = wigner3j(sj, sj, sg, Half(tmp), Half(-tmpp), Half(mt2));
                if w_right == 0.0 {
                    continue;
                }
                let mut inner = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    let tm = spin.m_twice(i);
                    let w_left = wigner3j(sj, sj, sg, Half(tm), Half(-tm), Half(0));
                    inner += parity(((tm - tmpp) / 2) as i64) * w_left * integrals[sigma as usize][(mt2 / 2 + sigma) as usize][i];
                }
                acc += ((2 * sigma + 1) as f64).powi(2) * w_right * inner;
            }
            rho[(r, c)] = acc;
        }
    }
    rho
}

/// Sampler that evaluates the generic tomogram of a fixed density matrix.
pub fn density_sampler(spin: Spin, rho: &CMatrix) -> impl Fn(f64, f64) -> Vec<f64> + Sync + '_ {
    move |b, g| tomogram(spin, rho, b, g).probs
}

/// Tomograms on a uniform (𝔟, 𝔤) plotting grid, 𝔟 ∈ [0, π], 𝔤 ∈ [0, 2π].
pub fn tomogram_grid(spin: Spin, rho: &CMatrix, n_b: usize, n_g: usize) -> Vec<Tomogram> {
    let step = |n: usize, span: f64, i: usize| if n > 1 { span * i as f64 / (n - 1) as f64 } else { 0.0 };
    (0..n_b * n_g)
        .into_par_iter()
        .map(|idx| tomogram(spin, rho, step(n_b, PI, idx / n_g), step(n_g, 2.0 * PI, idx % n_g)))
        .collect()
}
