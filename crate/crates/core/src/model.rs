//! Block-diagonal adiabatic Hamiltonian for s ∈ {1, 3/2}.
//!
//! Within photon manifold n the Hamiltonian couples the displaced states
//! |s, m; n_m⟩, m = s … −s. Each block has a closed-form spectrum; a cyclic
//! Jacobi solver takes over when those formulas become singular.

use crate::error::{Error, Result};
pub use crate::linalg::{hermitian_eig, CMatrix, HermitianEigen};
use crate::specfun::{laguerre_assoc, Half};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

/// Threshold below which a closed-form denominator counts as singular.
const SINGULAR: f64 = 1e-12;

/// The supported spin sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    /// s = 1, three levels.
    #[serde(rename = "1")]
    One,
    /// s = 3/2, four levels.
    #[serde(rename = "3/2")]
    ThreeHalves,
}

impl Spin {
    /// Parse a numeric spin value; only 1 and 3/2 are admitted.
    pub fn from_value(s: f64) -> Result<Spin> {
        if s == 1.0 {
            Ok(Spin::One)
        } else if s == 1.5 {
            Ok(Spin::ThreeHalves)
        } else {
            Err(Error::InvalidParameter(format!("spin {s} not supported (use 1 or 1.5)")))
        }
    }

    /// Twice the spin.
    pub fn twice(self) -> i32 {
        match self {
            Spin::One => 2,
            Spin::ThreeHalves => 3,
        }
    }

    /// The spin as a half-integer.
    pub fn half(self) -> Half {
        Half(self.twice())
    }

    /// The spin value.
    pub fn value(self) -> f64 {
        self.twice() as f64 / 2.0
    }

    /// Hilbert-space dimension 2s+1.
    pub fn dim(self) -> usize {
        (self.twice() + 1) as usize
    }

    /// Twice the magnetic number at basis index i (index 0 is m = s).
    pub fn m_twice(self, i: usize) -> i32 {
        self.twice() - 2 * i as i32
    }

    /// Magnetic number at basis index i.
    pub fn m(self, i: usize) -> f64 {
        self.m_twice(i) as f64 / 2.0
    }

    /// Human-readable branch labels in storage order.
    pub fn branch_labels(self) -> &'static [&'static str] {
        match self {
            Spin::One => &["0", "+", "-"],
            Spin::ThreeHalves => &["+1,+", "+1,-", "-1,+", "-1,-"],
        }
    }
}

/// Oscillator frequency, gap and coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Oscillator frequency ω.
    pub omega: f64,
    /// Qudit gap Δ.
    pub delta: f64,
    /// Scaled coupling λ̃ = λ/ω.
    pub lam_tilde: f64,
}

impl ModelParams {
    /// Validated parameters.
    pub fn new(omega: f64, delta: f64, lam_tilde: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
        }
        if !lam_tilde.is_finite() {
            return Err(Error::InvalidParameter("lam_tilde must be finite".into()));
        }
        Ok(ModelParams { omega, delta, lam_tilde })
    }

    /// Bare coupling λ = λ̃ω.
    pub fn lam(&self) -> f64 {
        self.lam_tilde * self.omega
    }

    /// True outside the adiabatic regime Δ < ω. Advisory only.
    pub fn adiabatic_warning(&self) -> bool {
        self.delta >= self.omega
    }
}

/// Renormalized gap Δ_n = −(Δ/(√2ω)) exp(−λ̃²/2) L_n(λ̃²).
pub fn delta_n(params: &ModelParams, n: usize) -> f64 {
    let l2 = params.lam_tilde * params.lam_tilde;
    -(params.delta / (SQRT_2 * params.omega)) * (-0.5 * l2).exp() * laguerre_assoc(n, 0, l2)
}

/// Spin operators in the basis m = s … −s.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    /// S_x.
    pub sx: CMatrix,
    /// S_y.
    pub sy: CMatrix,
    /// S_z.
    pub sz: CMatrix,
    /// S_+.
    pub sp: CMatrix,
    /// S_−.
    pub sm: CMatrix,
}

/// Standard irreducible representation of the spin algebra.
pub fn spin_matrices(spin: Spin) -> SpinMatrices {
    let d = spin.dim();
    let s = spin.value();
    let mut sp = CMatrix::zeros(d, d);
    let mut sz = CMatrix::zeros(d, d);
    for i in 0..d {
        let m = spin.m(i);
        sz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // S_+|m⟩ = √((s−m)(s+m+1)) |m+1⟩, and m+1 sits at index i−1.
            sp[(i - 1, i)] = Complex64::new(((s - m) * (s + m + 1.0)).sqrt(), 0.0);
        }
    }
    let sm = sp.adjoint();
    let sx = sp.add(&sm).scale(Complex64::new(0.5, 0.0));
    let sy = sp.sub(&sm).scale(Complex64::new(0.0, -0.5));
    SpinMatrices { sx, sy, sz, sp, sm }
}

/// Off-diagonal coupling pattern of a block, relative to Δ_n.
fn coupling_pattern(spin: Spin) -> &'static [f64] {
    match spin {
        Spin::One => &[1.0, 1.0],
        Spin::ThreeHalves => &[1.224_744_871_391_589, SQRT_2, 1.224_744_871_391_589],
    }
}

/// Block Hamiltonian of photon manifold n, including the overall ω.
pub fn block_hamiltonian(spin: Spin, params: &ModelParams, n: usize) -> CMatrix {
    let d = spin.dim();
    let l = params.lam_tilde;
    let dn = delta_n(params, n);
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        let m = spin.m(i);
        h[(i, i)] = Complex64::new(params.omega * (n as f64 - (m * l) * (m * l)), 0.0);
    }
    for (i, c) in coupling_pattern(spin).iter().enumerate() {
        let v = Complex64::new(params.omega * c * dn, 0.0);
        h[(i, i + 1)] = v;
        h[(i + 1, i)] = v;
    }
    h
}

/// Spectrum of one photon manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpectrum {
    /// Photon manifold index.
    pub n: usize,
    /// Energies E/ω in branch order.
    pub energies: Vec<f64>,
    /// E/ω − n per branch, kept separately for long-time phase accuracy.
    pub offsets: Vec<f64>,
    /// Columns are the eigenvectors in the basis m = s … −s.
    pub vectors: CMatrix,
    /// False when the numerical fallback produced this block.
    pub closed_form: bool,
    /// True when two branch energies coincide to 1e-12.
    pub degenerate: bool,
}

/// Closed-form block spectrum, with the Jacobi solver as fallback.
pub fn block_spectrum(spin: Spin, params: &ModelParams, n: usize) -> BlockSpectrum {
    let dn = delta_n(params, n);
    let l2 = params.lam_tilde * params.lam_tilde;
    let closed = match spin {
        Spin::One => closed_spin_one(dn, l2),
        Spin::ThreeHalves => closed_spin_three_halves(dn, l2),
    };
    let (offsets, vectors, closed_form) = match closed {
        Some((off, vecs)) => (off, vecs, true),
        None => fallback(spin, params, n, dn, l2),
    };
    let mut vectors = vectors;
    fix_phases(&mut vectors);
    let energies: Vec<f64> = offsets.iter().map(|o| n as f64 + o).collect();
    let mut degenerate = false;
    for i in 0..energies.len() {
        for j in (i + 1)..energies.len() {
            if (energies[i] - energies[j]).abs() < 1e-12 {
                degenerate = true;
            }
        }
    }
    BlockSpectrum { n, energies, offsets, vectors, closed_form, degenerate }
}

/// Closed-form branch offsets E/ω − n in branch order; valid even where
/// the eigenvector formulas are singular.
pub fn branch_offsets(spin: Spin, dn: f64, l2: f64) -> Vec<f64> {
    match spin {
        Spin::One => {
            let delta = (8.0 * dn * dn + l2 * l2).sqrt();
            vec![-l2, -(l2 - delta) / 2.0, -(l2 + delta) / 2.0]
        }
        Spin::ThreeHalves => {
            let mut out = Vec::with_capacity(4);
            for ell in [1.0, -1.0] {
                let chi = chi_ell(ell, dn, l2);
                let base = -1.25 * l2 + ell * dn / SQRT_2;
                out.push(base + chi);
                out.push(base - chi);
            }
            out
        }
    }
}

fn chi_ell(ell: f64, dn: f64, l2: f64) -> f64 {
    (l2 * l2 + ell * SQRT_2 * l2 * dn + 2.0 * dn * dn).sqrt()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn closed_spin_one(dn: f64, l2: f64) -> Option<(Vec<f64>, CMatrix)> {
    if dn.abs() < SINGULAR {
        return None;
    }
    let delta = (8.0 * dn * dn + l2 * l2).sqrt();
    let q = delta + l2;
    if q < SINGULAR || delta < SINGULAR {
        return None;
    }
    let offsets = branch_offsets(Spin::One, dn, l2);
    let mut v = CMatrix::zeros(3, 3);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[(0, 0)] = c(r);
    v[(2, 0)] = c(-r);
    // E_+ ∝ (2Δ_n, λ̃²+δ, 2Δ_n).
    let np = (8.0 * dn * dn + q * q).sqrt();
    v[(0, 1)] = c(2.0 * dn / np);
    v[(1, 1)] = c(q / np);
    v[(2, 1)] = c(2.0 * dn / np);
    // E_− ∝ (2Δ_n, λ̃²−δ, 2Δ_n) with λ̃²−δ = −8Δ_n²/(δ+λ̃²).
    let mid = -8.0 * dn * dn / q;
    let nm = (8.0 * dn * dn + mid * mid).sqrt();
    v[(0, 2)] = c(2.0 * dn / nm);
    v[(1, 2)] = c(mid / nm);
    v[(2, 2)] = c(2.0 * dn / nm);
    Some((offsets, v))
}

fn closed_spin_three_halves(dn: f64, l2: f64) -> Option<(Vec<f64>, CMatrix)> {
    if dn.abs() < SINGULAR {
        return None;
    }
    let offsets = branch_offsets(Spin::ThreeHalves, dn, l2);
    let mut v = CMatrix::zeros(4, 4);
    let s3 = 3f64.sqrt();
    let mut col = 0;
    for ell in [1.0, -1.0] {
        let chi = chi_ell(ell, dn, l2);
        if chi + l2 < SINGULAR {
            return None;
        }
        // Γ^± = (ℓ + √2(λ̃² ± χ)/Δ_n)/√3, with the minus branch rewritten as
        // (χ − λ̃²)/Δ_n = (ℓ√2λ̃² + 2Δ_n)/(χ + λ̃²).
        let gp = (ell + SQRT_2 * (l2 + chi) / dn) / s3;
        let gm = (ell - SQRT_2 * (ell * SQRT_2 * l2 + 2.0 * dn) / (chi + l2)) / s3;
        for g in [gp, gm] {
            let norm = SQRT_2 * (1.0 + g * g).sqrt();
            if norm < SINGULAR || !norm.is_finite() {
                return None;
            }
            v[(0, col)] = c(1.0 / norm);
            v[(1, col)] = c(g / norm);
            v[(2, col)] = c(ell * g / norm);
            v[(3, col)] = c(ell / norm);
            col += 1;
        }
    }
    Some((offsets, v))
}

/// Numerical spectrum, with branches labelled by matching the closed-form
/// energy formulas (which stay finite where the vectors do not).
fn fallback(spin: Spin, params: &ModelParams, n: usize, dn: f64, l2: f64) -> (Vec<f64>, CMatrix, bool) {
    let d = spin.dim();
    let h = block_hamiltonian(spin, params, n).scale(c(1.0 / params.omega));
    let shifted = h.sub(&CMatrix::identity(d).scale(c(n as f64)));
    let eig = hermitian_eig(&shifted).expect("block Hamiltonian is Hermitian");
    let target = branch_offsets(spin, dn, l2);
    let mut used = vec![false; d];
    let mut offsets = vec![0.0; d];
    let mut vectors = CMatrix::zeros(d, d);
    for (b, t) in target.iter().enumerate() {
        let mut best = usize::MAX;
        for k in 0..d {
            if !used[k] && (best == usize::MAX || (eig.values[k] - t).abs() < (eig.values[best] - t).abs()) {
                best = k;
            }
        }
        used[best] = true;
        offsets[b] = eig.values[best];
        for i in 0..d {
            vectors[(i, b)] = eig.vectors[(i, best)];
        }
    }
    (offsets, vectors, false)
}

/// Make the largest-magnitude component of each column real positive;
/// ties within 1e-12 go to the lowest index.
fn fix_phases(v: &mut CMatrix) {
    for j in 0..v.cols() {
        let mut best = 0;
        let mut bmag = -1.0;
        for i in 0..v.rows() {
            let m = v[(i, j)].norm();
            if m > bmag + 1e-12 {
                best = i;
                bmag = m;
            }
        }
        if bmag <= 0.0 {
            continue;
        }
        let ph = v[(best, j)].conj() / bmag;
        for i in 0..v.rows() {
            v[(i, j)] *= ph;
        }
        v[(best, j)] = c(v[(best, j)].re);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: f64, l: f64) -> ModelParams {
        ModelParams::new(1.0, d, l).unwrap()
    }

    #[test]
    fn delta_n_oracles() {
        let p = params(0.16, 0.0);
        assert!((delta_n(&p, 7) + 0.16 / SQRT_2).abs() < 1e-15);
        assert_eq!(delta_n(&params(0.0, 0.3), 4), 0.0);
        // n = 3, L_3(x) = 1 − 3x + 3x²/2 − x³/6.
        let p = params(0.16, 0.005);
        let x: f64 = 0.005 * 0.005;
        let l3 = 1.0 - 3.0 * x + 1.5 * x * x - x.powi(3) / 6.0;
        assert!((delta_n(&p, 3) + 0.16 / SQRT_2 * (-x / 2.0).exp() * l3).abs() < 1e-16);
    }

    #[test]
    fn spin_algebra() {
        let m = spin_matrices(Spin::One);
        assert_eq!(m.sz, CMatrix::from_diag(&[1.0, 0.0, -1.0]));
        let comm = m.sp.matmul(&m.sm).sub(&m.sm.matmul(&m.sp));
        assert!(comm.sub(&m.sz.scale(c(2.0))).max_abs() < 1e-15);
        let m = spin_matrices(Spin::ThreeHalves);
        let cas = m.sx.matmul(&m.sx).add(&m.sy.matmul(&m.sy)).add(&m.sz.matmul(&m.sz));
        assert!(cas.sub(&CMatrix::identity(4).scale(c(3.75))).max_abs() < 1e-14);
    }

    #[test]
    fn block_hamiltonian_oracles() {
        let h = block_hamiltonian(Spin::One, &params(0.0, 0.0), 5);
        assert_eq!(h, CMatrix::from_diag(&[5.0, 5.0, 5.0]));
        let p = params(0.16, 0.3);
        let h = block_hamiltonian(Spin::One, &p, 0);
        assert!((h[(0, 0)].re + 0.09).abs() < 1e-15 && h[(1, 1)].re == 0.0 && (h[(2, 2)].re + 0.09).abs() < 1e-15);
        let p = params(0.15, 0.007);
        let h = block_hamiltonian(Spin::ThreeHalves, &p, 2);
        let dn = delta_n(&p, 2);
        let l2 = 0.007f64 * 0.007;
        assert!((h[(0, 0)].re - (2.0 - 2.25 * l2)).abs() < 1e-15);
        assert!((h[(1, 1)].re - (2.0 - 0.25 * l2)).abs() < 1e-15);
        assert!((h[(0, 1)].re - 1.5f64.sqrt() * dn).abs() < 1e-15);
        assert!((h[(1, 2)].re - SQRT_2 * dn).abs() < 1e-15);
        assert_eq!(h[(0, 2)], c(0.0));
    }

    fn check_block(spin: Spin, p: &ModelParams, n: usize) {
        let b = block_spectrum(spin, p, n);
        let h = block_hamiltonian(spin, p, n);
        let d = spin.dim();
        for j in 0..d {
            let v = b.vectors.column(j);
            let hv = h.matvec(&v);
            for i in 0..d {
                assert!((hv[i] - v[i] * (b.energies[j] * p.omega)).norm() < 1e-10, "residual n={n}");
            }
        }
        let gram = b.vectors.adjoint().matmul(&b.vectors);
        assert!(gram.sub(&CMatrix::identity(d)).max_abs() < 1e-10);
        let mut num = hermitian_eig(&h).unwrap().values;
        let mut cf = b.energies.clone();
        num.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, e) in num.iter().zip(&cf) {
            assert!((a - e).abs() < 1e-10);
        }
        let tr: f64 = b.energies.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_match_numerics() {
        for spin in [Spin::One, Spin::ThreeHalves] {
            for (d, l) in [(0.16, 0.005), (0.15, 0.2), (0.1, 1.3), (0.5, 0.0)] {
                let p = params(d, l);
                for n in 0..=200 {
                    check_block(spin, &p, n);
                }
            }
        }
    }

    #[test]
    fn zero_coupling_limit() {
        let p = params(0.16, 0.0);
        let b = block_spectrum(Spin::One, &p, 4);
        let want = [4.0, 4.0 + 0.16, 4.0 - 0.16];
        for (e, w) in b.energies.iter().zip(want) {
            assert!((e - w).abs() < 1e-12);
        }
    }

    #[test]
    fn fallback_at_zero_gap() {
        let p = params(0.0, 0.3);
        for spin in [Spin::One, Spin::ThreeHalves] {
            let b = block_spectrum(spin, &p, 3);
            assert!(!b.closed_form);
            check_block(spin, &p, 3);
        }
    }

    #[test]
    fn phase_convention() {
        let b = block_spectrum(Spin::ThreeHalves, &params(0.15, 0.007), 10);
        for j in 0..4 {
            let col = b.vectors.column(j);
            let k = (0..4).fold(0, |k, i| if col[i].norm() > col[k].norm() + 1e-12 { i } else { k });
            assert!(col[k].re > 0.0 && col[k].im == 0.0);
        }
    }
}
