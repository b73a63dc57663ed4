//! Bipartite W and Q densities on the sphere × plane, and their oscillator
//! marginals.
//!
//! Both densities are linear in the joint state, so at fixed β they are
//! spin functionals applied to a d×d Hermitian kernel matrix M(β). The
//! matrix carries every oscillator dependence; the spin closed forms or
//! the tensor sum then supply the (θ, φ) dependence.

use super::grid::PlaneGrid;
use super::sphere::{spin_density_closed, Distribution};
use crate::linalg::CMatrix;
use crate::model::Spin;
use crate::specfun::{displacement_elem, displacement_matrix, hyp2f0_with_condition, log_factorial, parity};
use crate::state::EvolvedState;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Σ|term| / |sum| above which the ₂F₀ route for ℋ is abandoned in favour
/// of the Laguerre form of the same matrix element.
pub const H_CANCELLATION_LIMIT: f64 = 1e4;

/// Products B_{i,n}B*_{j,ñ} below this magnitude are skipped on the
/// closed route.
pub const PAIR_PRUNE: f64 = 1e-18;

/// How the kernel matrix is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelRoute {
    /// Closed-form ℋ / 𝒴 kernels in the displaced number basis.
    Closed,
    /// Undisplaced number basis with Laguerre displacement matrices.
    Generic,
}

/// ℋ^{n,ñ}_{k,ℓ}(β) with β_k = β + kλ̃ passed in directly.
///
/// The Gaussian and power prefactors are combined in log space before
/// multiplying the terminating ₂F₀; when that sum cancels too strongly
/// the identical value (−1)^n e^{−i Im(β_k β*_ℓ)} G_{ñn}(β_k + β_ℓ) is
/// used instead.
pub fn h_kernel(n: usize, nt: usize, bk: Complex64, bl: Complex64) -> Complex64 {
    let x = bk + bl;
    let r2 = x.norm_sqr();
    let phase_gauss = -(bk * bl.conj()).im;
    let fallback = || parity(n as i64) * Complex64::from_polar(1.0, phase_gauss) * displacement_elem(nt, n, x);
    if r2 == 0.0 {
        return fallback();
    }
    let (f, abs_sum) = hyp2f0_with_condition(n, nt, -1.0 / r2);
    if !abs_sum.is_finite() || f == 0.0 || abs_sum / f.abs() > H_CANCELLATION_LIMIT {
        return fallback();
    }
    let log_mag = 0.5 * (n + nt) as f64 * r2.ln() - 0.5 * (log_factorial(n as u64) + log_factorial(nt as u64)) - 0.5 * r2;
    let arg = (nt as f64 - n as f64) * x.arg() + phase_gauss;
    let v = Complex64::from_polar(log_mag.exp(), arg) * f;
    if v.is_finite() {
        v
    } else {
        fallback()
    }
}

/// 𝒴 factor b*^n e^{−|b|²/2}/√n! for all n ≤ n_max, formed in log space.
fn y_factors(b: Complex64, n_max: usize) -> Vec<Complex64> {
    let r2 = b.norm_sqr();
    if r2 == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); n_max + 1];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let (lr, arg) = (0.5 * r2.ln(), -b.arg());
    (0..=n_max)
        .map(|n| Complex64::from_polar((n as f64 * lr - 0.5 * log_factorial(n as u64) - 0.5 * r2).exp(), n as f64 * arg))
        .collect()
}

/// Evaluator for the bipartite densities of one evolved state; caches the
/// number-basis amplitudes so repeated β evaluations share them.
#[derive(Clone, Debug)]
pub struct BipartiteEvaluator {
    spin: Spin,
    lam: f64,
    /// B_{i,n} in the displaced basis.
    coeffs: Vec<Vec<Complex64>>,
    /// Amplitudes in the undisplaced number basis, indexed `[i][k]`.
    product: Vec<Vec<Complex64>>,
    /// Indices n with |B_{i,n}| large enough to matter (closed route).
    support: Vec<Vec<usize>>,
}

impl BipartiteEvaluator {
    /// Prepare an evaluator for `state`.
    pub fn new(state: &EvolvedState) -> Self {
        let coeffs = state.coeffs.clone();
        let support = coeffs
            .iter()
            .map(|row| (0..row.len()).filter(|&n| row[n].norm() > PAIR_PRUNE.sqrt() * 1e-3).collect())
            .collect();
        BipartiteEvaluator {
            spin: state.spin(),
            lam: state.setup.params.lam_tilde,
            coeffs,
            product: state.product_amplitudes(),
            support,
        }
    }

    /// Spin sector.
    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// Photon dimension n_max + 1.
    pub fn photon_dim(&self) -> usize {
        self.product[0].len()
    }

    fn shifted(&self, i: usize, beta: Complex64) -> Complex64 {
        beta + self.spin.m(i) * self.lam
    }

    /// Kernel matrix of the bipartite W at β; its trace is w_osc(β) and its
    /// plane integral is ρ_Q.
    pub fn w_matrix(&self, beta: Complex64, route: KernelRoute) -> CMatrix {
        let d = self.spin.dim();
        let mut m = CMatrix::zeros(d, d);
        match route {
            KernelRoute::Closed => {
                for i in 0..d {
                    for j in 0..=i {
                        let (bk, bl) = (self.shifted(i, beta), self.shifted(j, beta));
                        let mut acc = Complex64::new(0.0, 0.0);
                        for &n in &self.support[i] {
                            let a = self.coeffs[i][n];
                            for &nt in &self.support[j] {
                                let ab = a * self.coeffs[j][nt].conj();
                                if ab.norm() < PAIR_PRUNE {
                                    continue;
                                }
                                acc += ab * h_kernel(n, nt, bk, bl);
                            }
                        }
                        // The phase exp(i(m_i − m_j)λ̃ Im β) standing outside ℋ.
                        let outer = Complex64::from_polar(1.0, (self.spin.m(i) - self.spin.m(j)) * self.lam * beta.im);
                        m[(i, j)] = acc * outer * (2.0 / PI);
                    }
                }
            }
            KernelRoute::Generic => {
                let dim = self.photon_dim();
                let g = CMatrix::from_vec(dim, dim, displacement_matrix(dim, 2.0 * beta));
                let pu: Vec<Vec<Complex64>> = self
                    .product
                    .iter()
                    .map(|u| u.iter().enumerate().map(|(a, v)| parity(a as i64) * v).collect())
                    .collect();
                for i in 0..d {
                    let gi = g.matvec(&pu[i]);
                    for j in 0..=i {
                        let v: Complex64 = self.product[j].iter().zip(&gi).map(|(x, y)| x.conj() * y).sum();
                        m[(i, j)] = v * (2.0 / PI);
                    }
                }
            }
        }
        hermitize_lower(&mut m);
        m
    }

    /// Kernel matrix of the bipartite Q at β (rank one, positive).
    pub fn q_matrix(&self, beta: Complex64, route: KernelRoute) -> CMatrix {
        let d = self.spin.dim();
        let f: Vec<Complex64> = match route {
            KernelRoute::Closed => (0..d)
                .map(|i| {
                    let b = self.shifted(i, beta);
                    let y = y_factors(b, self.photon_dim() - 1);
                    let s: Complex64 = self.support[i].iter().map(|&n| self.coeffs[i][n] * y[n]).sum();
                    // ⟨β|D(−m_iλ̃)|B_i⟩ = e^{i m_i λ̃ Im β} Σ_n B_{i,n} ⟨β_{m_i}|n⟩.
                    s * Complex64::from_polar(1.0, self.spin.m(i) * self.lam * beta.im)
                })
                .collect(),
            KernelRoute::Generic => {
                let y = y_factors(beta, self.photon_dim() - 1);
                self.product.iter().map(|u| u.iter().zip(&y).map(|(a, b)| a * b).sum()).collect()
            }
        };
        CMatrix::from_fn(d, d, |i, j| f[i] * f[j].conj() / PI)
    }

    /// Kernel matrix for `dist` (W or Q only).
    pub fn matrix(&self, dist: Distribution, beta: Complex64, route: KernelRoute) -> CMatrix {
        match dist {
            Distribution::W => self.w_matrix(beta, route),
            Distribution::Q => self.q_matrix(beta, route),
            Distribution::P => panic!("the bipartite P representation is singular and has no pointwise value"),
        }
    }

    /// W(θ, φ; β).
    pub fn w(&self, theta: f64, phi: f64, beta: Complex64) -> f64 {
        spin_density_closed(self.spin, Distribution::W, &self.w_matrix(beta, KernelRoute::Closed), theta, phi)
    }

    /// Q(θ, φ; β).
    pub fn q(&self, theta: f64, phi: f64, beta: Complex64) -> f64 {
        spin_density_closed(self.spin, Distribution::Q, &self.q_matrix(beta, KernelRoute::Closed), theta, phi)
    }

    /// w_osc(β) = Tr M_W(β).
    pub fn w_osc(&self, beta: Complex64) -> f64 {
        self.w_matrix(beta, KernelRoute::Closed).trace().re
    }

    /// q_osc(β) = Tr M_Q(β).
    pub fn q_osc(&self, beta: Complex64) -> f64 {
        self.q_matrix(beta, KernelRoute::Closed).trace().re
    }

    /// ∫ M(β) d²β over `grid`, evaluated in parallel over nodes.
    pub fn integrate_matrix(&self, dist: Distribution, grid: &PlaneGrid, route: KernelRoute) -> CMatrix {
        let d = self.spin.dim();
        let nodes: Vec<(f64, f64, f64)> = grid.nodes().collect();
        nodes
            .par_iter()
            .map(|&(x, y, w)| self.matrix(dist, Complex64::new(x, y), route).scale(Complex64::new(w, 0.0)))
            .reduce(|| CMatrix::zeros(d, d), |a, b| a.add(&b))
    }
}

fn hermitize_lower(m: &mut CMatrix) {
    let d = m.rows();
    for i in 0..d {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in 0..i {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
}

/// Bipartite W(θ, φ; β) of `state`.
pub fn w_bipartite(state: &EvolvedState, theta: f64, phi: f64, beta: Complex64) -> f64 {
    BipartiteEvaluator::new(state).w(theta, phi, beta)
}

/// Bipartite Q(θ, φ; β) of `state`.
pub fn q_bipartite(state: &EvolvedState, theta: f64, phi: f64, beta: Complex64) -> f64 {
    BipartiteEvaluator::new(state).q(theta, phi, beta)
}

/// Oscillator Wigner function of `state` at β.
pub fn w_osc(state: &EvolvedState, beta: Complex64) -> f64 {
    BipartiteEvaluator::new(state).w_osc(beta)
}

/// Oscillator Husimi function of `state` at β.
pub fn q_osc(state: &EvolvedState, beta: Complex64) -> f64 {
    BipartiteEvaluator::new(state).q_osc(beta)
}

/// (2/π) Tr[ρ D(2β) (−1)^N] for a number-basis density matrix.
pub fn w_from_number_density(rho: &CMatrix, beta: Complex64) -> f64 {
    let dim = rho.rows();
    let g = displacement_matrix(dim, 2.0 * beta);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..dim {
        for b in 0..dim {
            acc += parity(a as i64) * rho[(a, b)] * g[b * dim + a];
        }
    }
    2.0 / PI * acc.re
}

/// ⟨β|ρ|β⟩/π for a number-basis density matrix, with ⟨k|β⟩ = G_{k0}(β).
pub fn q_from_number_density(rho: &CMatrix, beta: Complex64) -> f64 {
    let dim = rho.rows();
    let c: Vec<Complex64> = (0..dim).map(|k| displacement_elem(k, 0, beta)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..dim {
        for b in 0..dim {
            acc += c[a].conj() * rho[(a, b)] * c[b];
        }
    }
    acc.re / PI
}
