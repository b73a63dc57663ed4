//! Initial state, projection onto the adiabatic eigenbasis, evolution and
//! reduced density matrices.
//!
//! The evolved state is stored as B_{m,n}(t), the amplitude on the
//! displaced product state |s, m; n_m⟩ with |n_m⟩ = D(−mλ̃)|n⟩. Both reduced
//! density matrices follow from these coefficients and the displacement
//! kernels G(kλ̃), which are built once per projection and shared.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{block_spectrum, BlockSpectrum, ModelParams, Spin};
use crate::specfun::{binomial, displacement_matrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

/// Hard ceiling on the photon cutoff reached by adaptive growth.
pub const N_MAX_CAP: usize = 512;

const TWO_PI: f64 = 2.0 * PI;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Parameters of the quasi-Bell initial state
/// 𝒩_s(|z⟩|α, ξ⟩ + c|−z⟩|−α, ξ⟩) with ξ = r e^{iζ}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialStateSpec {
    /// Spin-coherent parameter z = tan(θ̃/2) e^{−iφ̃}.
    pub z: Complex64,
    /// Oscillator displacement α.
    pub alpha: Complex64,
    /// Squeeze magnitude r ≥ 0.
    pub r: f64,
    /// Squeeze phase ζ.
    pub zeta: f64,
    /// Mix coefficient c; zero gives a factorized start.
    pub c: Complex64,
}

impl InitialStateSpec {
    /// Validated initial-state parameters.
    pub fn new(z: Complex64, alpha: Complex64, r: f64, zeta: f64, c: Complex64) -> Result<Self> {
        let finite = |v: Complex64| v.re.is_finite() && v.im.is_finite();
        if !(finite(z) && finite(alpha) && finite(c) && zeta.is_finite()) {
            return Err(Error::InvalidParameter("initial state parameters must be finite".into()));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("squeeze magnitude must be >= 0, got {r}")));
        }
        Ok(InitialStateSpec { z, alpha, r, zeta, c })
    }

    /// Initial-state parameters from the polar angles (θ̃, φ̃) of the spin state.
    pub fn from_angles(theta: f64, phi: f64, alpha: Complex64, r: f64, zeta: f64, c: Complex64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta must lie in [0, pi], got {theta}")));
        }
        let z = Complex64::from_polar((0.5 * theta).tan(), -phi);
        Self::new(z, alpha, r, zeta, c)
    }

    /// Polar angles (θ̃, φ̃) with φ̃ ∈ [0, 2π).
    pub fn angles(&self) -> (f64, f64) {
        let theta = 2.0 * self.z.norm().atan();
        let phi = if self.z.norm() == 0.0 { 0.0 } else { (-self.z.arg()).rem_euclid(TWO_PI) };
        (theta, phi)
    }

    /// Check that given angles describe the same z to 1e-12.
    pub fn check_angles(&self, theta: f64, phi: f64) -> Result<()> {
        let z = Complex64::from_polar((0.5 * theta).tan(), -phi);
        let d = (z - self.z).norm();
        if d > 1e-12 {
            return Err(Error::InvalidParameter(format!("z and (theta, phi) disagree by {d:e}")));
        }
        Ok(())
    }

    /// μ = cosh r.
    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    /// ν = sinh r e^{iζ}.
    pub fn nu(&self) -> Complex64 {
        Complex64::from_polar(self.r.sinh(), self.zeta)
    }
}

/// Photon cutoff policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Starting cutoff; `None` derives one from the displacements.
    pub n_max: Option<usize>,
    /// Largest admitted tail mass 1 − Σ_{n ≤ n_max} |𝒮_n|² of any shifted mode.
    pub tail_tol: f64,
    /// Double the cutoff until the tail tolerance is met.
    pub adaptive: bool,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { n_max: None, tail_tol: 1e-12, adaptive: true }
    }
}

/// Spin-coherent amplitudes on m = s … −s.
pub fn spin_coherent_amplitudes(spin: Spin, z: Complex64) -> Vec<Complex64> {
    let ts = spin.twice() as i64;
    let pre = (1.0 + z.norm_sqr()).powf(-spin.value());
    (0..spin.dim())
        .map(|i| {
            let k = (spin.m_twice(i) as i64 + ts) / 2;
            pre * binomial(ts, k).sqrt() * z.powu(k as u32)
        })
        .collect()
}

/// Squeezed-coherent amplitudes 𝒮_n(α, ξ) for n = 0..=n_max.
///
/// Uses the three-term recurrence of the scaled Hermite sequence
/// h_n = (ν/2μ)^{n/2} H_n(w/√(2μν))/√n!, w = μα + να*, which is free of
/// the 0/0 at ν = 0 and reduces there to the coherent amplitudes.
pub fn squeezed_amplitudes(alpha: Complex64, mu: f64, nu: Complex64, n_max: usize) -> Vec<Complex64> {
    let w = mu * alpha + nu * alpha.conj();
    let a = w / mu;
    let b = nu / mu;
    let pre = (-0.5 * alpha.norm_sqr() - (nu / (2.0 * mu)) * alpha.conj() * alpha.conj()).exp() / mu.sqrt();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = Complex64::new(1.0, 0.0);
    out.push(pre * prev);
    if n_max == 0 {
        return out;
    }
    let mut cur = a;
    out.push(pre * cur);
    for n in 1..n_max {
        let next = (a * cur - b * (n as f64).sqrt() * prev) / ((n + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        out.push(pre * cur);
    }
    out
}

/// Single amplitude 𝒮_n(α, ξ) with α, ξ taken from `spec`.
pub fn squeezed_amplitude(spec: &InitialStateSpec, n: usize) -> Complex64 {
    squeezed_amplitudes(spec.alpha, spec.mu(), spec.nu(), n)[n]
}

/// Normalization 𝒩_s of the quasi-Bell state.
pub fn initial_norm(spin: Spin, spec: &InitialStateSpec) -> f64 {
    let z2 = spec.z.norm_sqr();
    let overlap_spin = ((1.0 - z2) / (1.0 + z2)).powi(spin.twice());
    let w = spec.alpha * spec.mu() + spec.alpha.conj() * spec.nu();
    let overlap_osc = (-2.0 * w.norm_sqr()).exp();
    (1.0 + spec.c.norm_sqr() + 2.0 * overlap_spin * overlap_osc * spec.c.re).powf(-0.5)
}

/// Displacements α' whose amplitudes 𝒮_n(α', ξ) enter the projection.
fn shifted_displacements(spin: Spin, params: &ModelParams, spec: &InitialStateSpec) -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..spin.dim() {
        let shift = spin.m(i) * params.lam_tilde;
        out.push(spec.alpha + shift);
        if spec.c != zero() {
            out.push(-spec.alpha + shift);
        }
    }
    out
}

fn tail_mass(alpha: Complex64, spec: &InitialStateSpec, n_max: usize) -> f64 {
    let s: f64 = squeezed_amplitudes(alpha, spec.mu(), spec.nu(), n_max).iter().map(|a| a.norm_sqr()).sum();
    (1.0 - s).max(0.0)
}

/// Cutoff satisfying the tail tolerance, and the worst tail mass there.
pub fn choose_truncation(
    spin: Spin,
    params: &ModelParams,
    spec: &InitialStateSpec,
    trunc: &Truncation,
) -> Result<(usize, f64)> {
    let shifts = shifted_displacements(spin, params, spec);
    let big_a = spec.alpha.norm() + spin.value() * params.lam_tilde.abs();
    let a2 = big_a * big_a;
    let mut n = trunc
        .n_max
        .unwrap_or_else(|| (a2 + 10.0 * (a2 + 1.0).sqrt() + 20.0).ceil() as usize)
        .clamp(1, N_MAX_CAP);
    loop {
        let tail = shifts.iter().map(|a| tail_mass(*a, spec, n)).fold(0.0, f64::max);
        if tail < trunc.tail_tol {
            return Ok((n, tail));
        }
        if !trunc.adaptive || n >= N_MAX_CAP {
            return Err(Error::Truncation { n_max: n, tail_mass: tail, tail_tol: trunc.tail_tol });
        }
        n = (2 * n).min(N_MAX_CAP);
    }
}

/// Displacement kernels shared by every time point.
#[derive(Clone, Debug)]
pub struct Kernels {
    /// `shift[k]` = G(kλ̃) for k = 0..=2s (index 0 unused, the identity).
    pub shift: Vec<CMatrix>,
    /// `frame[i]` = G(−m_i λ̃), mapping |n_{m_i}⟩ to the number basis.
    pub frame: Vec<CMatrix>,
}

impl Kernels {
    fn build(spin: Spin, lam: f64, dim: usize) -> Kernels {
        let mk = |x: f64| CMatrix::from_vec(dim, dim, displacement_matrix(dim, Complex64::new(x, 0.0)));
        let shift = (0..=spin.twice() as usize).map(|k| mk(k as f64 * lam)).collect();
        let frame = (0..spin.dim()).map(|i| mk(-spin.m(i) * lam)).collect();
        Kernels { shift, frame }
    }
}

/// Everything fixed by the parameters: spectra, projections and kernels.
#[derive(Clone, Debug)]
pub struct Setup {
    /// Spin sector.
    pub spin: Spin,
    /// Model parameters.
    pub params: ModelParams,
    /// Initial-state parameters.
    pub spec: InitialStateSpec,
    /// Requested truncation policy.
    pub truncation: Truncation,
    /// Achieved photon cutoff; photon indices run over 0..=n_max.
    pub n_max: usize,
    /// Worst shifted-mode tail mass at `n_max`.
    pub tail_mass: f64,
    /// 𝒩_s.
    pub norm: f64,
    /// Per-manifold spectra.
    pub spectra: Vec<BlockSpectrum>,
    /// Initial amplitudes ψ_n(m), indexed `[n][i]`.
    pub psi0: Vec<Vec<Complex64>>,
    /// Projections 𝒜_{j,n}, indexed `[n][j]` in branch order.
    pub amplitudes: Vec<Vec<Complex64>>,
    /// Displacement kernels.
    pub kernels: Kernels,
}

impl Setup {
    /// Number of photon indices (n_max + 1).
    pub fn photon_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Σ_{j,n} |𝒜_{j,n}|².
    pub fn amplitude_norm(&self) -> f64 {
        self.amplitudes.iter().flatten().map(|a| a.norm_sqr()).sum()
    }
}

/// Shared handle to a projected initial state.
#[derive(Clone, Debug)]
pub struct Projection(pub Arc<Setup>);

/// Project the initial state onto the adiabatic eigenbasis.
pub fn project_initial(spin: Spin, params: &ModelParams, spec: &InitialStateSpec, trunc: &Truncation) -> Result<Projection> {
    let (n_max, tail) = choose_truncation(spin, params, spec, trunc)?;
    let dim = n_max + 1;
    let norm = initial_norm(spin, spec);
    let a = spin_coherent_amplitudes(spin, spec.z);
    let b = spin_coherent_amplitudes(spin, -spec.z);
    let (mu, nu) = (spec.mu(), spec.nu());
    let lam = params.lam_tilde;
    let ia = spec.alpha.im;
    let mut psi0 = vec![vec![zero(); spin.dim()]; dim];
    for i in 0..spin.dim() {
        let m = spin.m(i);
        let sp = squeezed_amplitudes(spec.alpha + m * lam, mu, nu, n_max);
        let ph = Complex64::from_polar(1.0, -m * lam * ia);
        let sm = if spec.c != zero() { Some(squeezed_amplitudes(-spec.alpha + m * lam, mu, nu, n_max)) } else { None };
        for n in 0..dim {
            let mut v = a[i] * ph * sp[n];
            if let Some(sm) = &sm {
                v += spec.c * b[i] * ph.conj() * sm[n];
            }
            psi0[n][i] = norm * v;
        }
    }
    let spectra: Vec<BlockSpectrum> = (0..dim).map(|n| block_spectrum(spin, params, n)).collect();
    let amplitudes = spectra
        .iter()
        .zip(&psi0)
        .map(|(b, psi)| (0..spin.dim()).map(|j| (0..spin.dim()).map(|i| b.vectors[(i, j)].conj() * psi[i]).sum()).collect())
        .collect();
    let kernels = Kernels::build(spin, lam, dim);
    Ok(Projection(Arc::new(Setup {
        spin,
        params: *params,
        spec: *spec,
        truncation: *trunc,
        n_max,
        tail_mass: tail,
        norm,
        spectra,
        psi0,
        amplitudes,
        kernels,
    })))
}

/// exp(−i(n + offset)t) with each product reduced modulo 2π.
pub fn evolution_phase(n: usize, offset: f64, t: f64) -> Complex64 {
    let a = (n as f64 * t.rem_euclid(TWO_PI)).rem_euclid(TWO_PI);
    let b = (offset * t).rem_euclid(TWO_PI);
    Complex64::from_polar(1.0, -(a + b))
}

/// State at time t (units of 1/ω).
#[derive(Clone, Debug)]
pub struct EvolvedState {
    /// Shared projection data.
    pub setup: Arc<Setup>,
    /// Time in units of 1/ω.
    pub t: f64,
    /// B_{m,n}(t), indexed `[i][n]` with basis index i (m = s − i).
    pub coeffs: Vec<Vec<Complex64>>,
}

impl EvolvedState {
    /// Spin sector.
    pub fn spin(&self) -> Spin {
        self.setup.spin
    }

    /// Σ |B|².
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().flatten().map(|b| b.norm_sqr()).sum()
    }

    /// Amplitudes in the undisplaced product basis |m⟩⊗|k⟩, k ≤ n_max,
    /// indexed `[i][k]`.
    pub fn product_amplitudes(&self) -> Vec<Vec<Complex64>> {
        let k = &self.setup.kernels;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, b)| if self.spin().m_twice(i) == 0 { b.clone() } else { k.frame[i].matvec(b) })
            .collect()
    }
}

impl Projection {
    /// Shared setup.
    pub fn setup(&self) -> &Arc<Setup> {
        &self.0
    }

    /// Evolve to time t; O(n_max) work.
    pub fn evolve(&self, t: f64) -> EvolvedState {
        evolve(self, t)
    }
}

/// B_{m,n}(t) = Σ_j v_{j,n}(m) 𝒜_{j,n} exp(−iE_{j,n}t).
pub fn evolve(proj: &Projection, t: f64) -> EvolvedState {
    let s = &proj.0;
    let d = s.spin.dim();
    let mut coeffs = vec![vec![zero(); s.photon_dim()]; d];
    for (n, (spec, amps)) in s.spectra.iter().zip(&s.amplitudes).enumerate() {
        for j in 0..d {
            let aj = amps[j] * evolution_phase(n, spec.offsets[j], t);
            for (i, row) in coeffs.iter_mut().enumerate() {
                row[n] += spec.vectors[(i, j)] * aj;
            }
        }
    }
    EvolvedState { setup: proj.0.clone(), t, coeffs }
}

/// Which space a reduced density lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityBasis {
    /// Spin basis m = s … −s.
    Spin,
    /// Oscillator number basis 0..=n_max.
    Oscillator,
}

/// A reduced density matrix.
#[derive(Clone, Debug)]
pub struct ReducedDensity {
    /// Basis tag.
    pub basis: DensityBasis,
    /// Hermitian matrix.
    pub matrix: CMatrix,
    /// |Tr ρ − 1|.
    pub trace_deviation: f64,
}

impl ReducedDensity {
    /// Wrap a matrix, recording its trace deviation.
    pub fn new(basis: DensityBasis, matrix: CMatrix) -> Self {
        let trace_deviation = (matrix.trace() - 1.0).norm();
        ReducedDensity { basis, matrix, trace_deviation }
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Element ρ_{ij}.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Qudit reduced density ρ_Q[i][j] = Σ B_{i,n} B*_{j,ñ} G_{ñn}((m_j − m_i)λ̃).
pub fn qudit_density(state: &EvolvedState) -> ReducedDensity {
    let d = state.spin().dim();
    let k = &state.setup.kernels;
    let mut rho = CMatrix::zeros(d, d);
    for i in 0..d {
        rho[(i, i)] = Complex64::new(state.coeffs[i].iter().map(|b| b.norm_sqr()).sum(), 0.0);
        for j in 0..i {
            let gb = k.shift[i - j].matvec(&state.coeffs[i]);
            let v = dot_conj(&state.coeffs[j], &gb);
            rho[(i, j)] = v;
            rho[(j, i)] = v.conj();
        }
    }
    ReducedDensity::new(DensityBasis::Spin, rho)
}

/// Oscillator reduced density in the number basis, Σ_m u_m u_m† with
/// u_m = G(−mλ̃) B_m.
pub fn oscillator_density(state: &EvolvedState) -> ReducedDensity {
    let u = state.product_amplitudes();
    let dim = state.setup.photon_dim();
    let mut rho = CMatrix::zeros(dim, dim);
    for v in &u {
        for a in 0..dim {
            if v[a] == zero() {
                continue;
            }
            for b in 0..dim {
                rho[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    ReducedDensity::new(DensityBasis::Oscillator, rho)
}

/// B coefficients assembled term by term from the explicit projection and
/// linear-combination formulas, indexed like [`EvolvedState::coeffs`].
///
/// This route uses the unnormalized eigenvectors and their closed-form norms,
/// so it is independent of the eigenvector phase convention.
pub fn explicit_coefficients(setup: &Setup, t: f64) -> Vec<Vec<Complex64>> {
    let spec = &setup.spec;
    let p = &setup.params;
    let dim = setup.photon_dim();
    let (mu, nu) = (spec.mu(), spec.nu());
    let lam = p.lam_tilde;
    let l2 = lam * lam;
    let z = spec.z;
    let c = spec.c;
    let zn = 1.0 + z.norm_sqr();
    let ia = spec.alpha.im;
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let sa = |shift: f64| squeezed_amplitudes(spec.alpha + shift, mu, nu, setup.n_max);
    let mut out = vec![vec![zero(); dim]; setup.spin.dim()];
    match setup.spin {
        Spin::One => {
            let (splus, s0, sminus) = (sa(lam), sa(0.0), sa(-lam));
            for n in 0..dim {
                let dn = crate::model::delta_n(p, n);
                let dl = (8.0 * dn * dn + l2 * l2).sqrt();
                let sg = if n % 2 == 0 { 1.0 } else { -1.0 };
                let n1 = setup.norm;
                let a0 = n1 / (SQRT_2 * zn)
                    * ((z * z - sg * c) * e(-lam * ia) * splus[n] - (1.0 - sg * c * z * z) * e(lam * ia) * sminus[n]);
                let apm = |pm: f64| {
                    let nn = 2.0 * dl * (dl + pm * l2);
                    n1 / (nn.sqrt() * zn)
                        * (2.0 * dn * (z * z + sg * c) * e(-lam * ia) * splus[n]
                            + SQRT_2 * (l2 + pm * dl) * z * (1.0 - sg * c) * s0[n]
                            + 2.0 * dn * (1.0 + sg * c * z * z) * e(lam * ia) * sminus[n])
                };
                let (ap, am) = (apm(1.0), apm(-1.0));
                let off = crate::model::branch_offsets(Spin::One, dn, l2);
                let (a0t, apt, amt) =
                    (a0 * evolution_phase(n, off[0], t), ap * evolution_phase(n, off[1], t), am * evolution_phase(n, off[2], t));
                let np = (2.0 * dl * (dl + l2)).sqrt();
                let nm = (2.0 * dl * (dl - l2)).sqrt();
                let b0 = (l2 + dl) / np * apt + (l2 - dl) / nm * amt;
                let common = 2.0 * dn / np * apt + 2.0 * dn / nm * amt;
                out[0][n] = std::f64::consts::FRAC_1_SQRT_2 * a0t + common;
                out[1][n] = b0;
                out[2][n] = -std::f64::consts::FRAC_1_SQRT_2 * a0t + common;
            }
        }
        Spin::ThreeHalves => {
            let (s3p, s1p, s1m, s3m) = (sa(1.5 * lam), sa(0.5 * lam), sa(-0.5 * lam), sa(-1.5 * lam));
            let n32 = setup.norm;
            let z2 = z * z;
            let z3 = z2 * z;
            for n in 0..dim {
                let dn = crate::model::delta_n(p, n);
                let sg = if n % 2 == 0 { 1.0 } else { -1.0 };
                let off = crate::model::branch_offsets(Spin::ThreeHalves, dn, l2);
                let mut b = [zero(); 4];
                let mut col = 0;
                for ell in [1.0, -1.0] {
                    let chi = (l2 * l2 + ell * SQRT_2 * l2 * dn + 2.0 * dn * dn).sqrt();
                    for kappa in [1.0, -1.0] {
                        let gamma = (ell + SQRT_2 * (l2 + kappa * chi) / dn) / 3f64.sqrt();
                        let nn = SQRT_2 * (1.0 + gamma * gamma).sqrt();
                        let a = n32 / (nn * zn.powf(1.5))
                            * ((z3 + ell * sg * c) * e(-1.5 * lam * ia) * s3p[n]
                                + ell * (1.0 - ell * sg * c * z3) * e(1.5 * lam * ia) * s3m[n]
                                + 3f64.sqrt() * gamma * (z2 - ell * sg * c * z) * e(-0.5 * lam * ia) * s1p[n]
                                + ell * 3f64.sqrt() * gamma * (z + ell * sg * c * z2) * e(0.5 * lam * ia) * s1m[n]);
                        let at = a * evolution_phase(n, off[col], t) / nn;
                        b[0] += at;
                        b[1] += at * gamma;
                        b[2] += ell * at * gamma;
                        b[3] += ell * at;
                        col += 1;
                    }
                }
                for i in 0..4 {
                    out[i][n] = b[i];
                }
            }
        }
    }
    out
}
