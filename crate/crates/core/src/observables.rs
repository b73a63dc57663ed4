//! Scalar diagnostics of the evolving state: entanglement entropy,
//! Hilbert–Schmidt distance, quasiperiod and revival estimates, the
//! second-order spin correlation, the mean-spin frame and the
//! Kitagawa–Ueda squeezing parameter.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::model::{spin_matrices, ModelParams, Spin};
use crate::phasespace::grid::{integrate_sphere, SphereGrid};
use crate::phasespace::sphere::{spin_density, Distribution};
use crate::phasespace::tensor::spherical_components;
use crate::state::{qudit_density, EvolvedState, Projection};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest |Tr ρ − 1| accepted by [`von_neumann_entropy`].
pub const ENTROPY_TRACE_TOL: f64 = 1e-4;

/// Eigenvalues at or below this weight contribute nothing to the entropy.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-15;

/// Denominators ⟨S₊S₋⟩ at or below this value leave g₂ undefined.
pub const G2_DENOMINATOR_FLOOR: f64 = 1e-14;

/// |⟨S⟩| at or below this value leaves the mean-spin frame undefined.
pub const FRAME_FLOOR: f64 = 1e-10;

/// A sampled scalar observable; `None` marks an undefined value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    /// Short name of the observable.
    pub label: String,
    /// Sample times in units of 1/ω, strictly increasing.
    pub times: Vec<f64>,
    /// Values, or `None` where the observable is undefined.
    pub values: Vec<Option<f64>>,
}

impl TimeSeries {
    /// Assemble a series, rejecting non-increasing times or length mismatch.
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<Option<f64>>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParameter(format!("{} times but {} values", times.len(), values.len())));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("sample times must be strictly increasing".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite value in series".into()));
        }
        Ok(TimeSeries { label: label.into(), times, values })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// True when the series has no samples.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// n uniformly spaced times covering [start, end]; a single point when n = 1.
pub fn uniform_times(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (end - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// −Tr ρ ln ρ with eigenvalues clamped to [0, 1].
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    let dev = (rho.trace() - 1.0).norm();
    if dev > ENTROPY_TRACE_TOL {
        return Err(Error::Trace(dev));
    }
    let herm = rho.hermiticity_residual();
    if herm > 1e-8 {
        return Err(Error::NotHermitian(herm));
    }
    let s: f64 = hermitian_eigenvalues(rho)?
        .into_iter()
        .map(|p| p.clamp(0.0, 1.0))
        .filter(|&p| p > ENTROPY_EIGEN_FLOOR)
        .map(|p| -p * p.ln())
        .sum();
    let ln_d = (rho.rows() as f64).ln();
    assert!(s >= 0.0 && s <= ln_d + 1e-9, "entropy {s} outside [0, ln {}]", rho.rows());
    Ok(s)
}

/// √Tr[(ρ₁ − ρ₂)²] = √Σ|Δρ_ij|² for Hermitian arguments.
pub fn hs_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()), "dimension mismatch");
    a.sub(b).frobenius()
}

/// Hilbert–Schmidt distance through the spin Wigner functions,
/// √((4π/(2s+1)) ∫(W₁ − W₂)² dΩ).
pub fn hs_distance_wigner(spin: Spin, a: &CMatrix, b: &CMatrix, grid: &SphereGrid) -> f64 {
    let ra = spherical_components(spin, a);
    let rb = spherical_components(spin, b);
    let int = integrate_sphere(
        |t, p| (spin_density(&ra, Distribution::W, t, p) - spin_density(&rb, Distribution::W, t, p)).powi(2),
        grid,
    );
    (4.0 * PI / spin.dim() as f64 * int).max(0.0).sqrt()
}

/// Quasiperiod ωT = 2π((Δ/ω) e^{−λ̃²/2} λ̃²)^{−1}, in units of 1/ω.
///
/// Returns `f64::INFINITY` when Δλ̃² = 0.
pub fn quasiperiod(params: &ModelParams) -> f64 {
    let l2 = params.lam_tilde * params.lam_tilde;
    let rate = params.delta / params.omega * (-0.5 * l2).exp() * l2;
    if rate == 0.0 {
        f64::INFINITY
    } else {
        2.0 * PI / rate
    }
}

/// Revival estimate 𝔫·T.
pub fn revival_time(params: &ModelParams, n: u32) -> f64 {
    n as f64 * quasiperiod(params)
}

/// ⟨S₊S₋⟩ and ⟨S₊²S₋²⟩ from the explicit B-coefficient sums.
pub fn spin_correlation_moments(state: &EvolvedState) -> (f64, f64) {
    let mass: Vec<f64> = state.coeffs.iter().map(|row| row.iter().map(|b| b.norm_sqr()).sum()).collect();
    match state.spin() {
        Spin::One => (2.0 * (mass[0] + mass[1]), 4.0 * mass[0]),
        Spin::ThreeHalves => (3.0 * (mass[0] + mass[2]) + 4.0 * mass[1], 12.0 * (mass[0] + mass[1])),
    }
}

/// g_s = ⟨S₊²S₋²⟩/⟨S₊S₋⟩² from the explicit B-coefficient sums; `None` when the
/// denominator vanishes.
pub fn g2_spin(state: &EvolvedState) -> Option<f64> {
    let (num1, num2) = spin_correlation_moments(state);
    (num1 > G2_DENOMINATOR_FLOOR).then(|| num2 / (num1 * num1))
}

/// g_s from Tr[ρ S₊²S₋²]/Tr[ρ S₊S₋]².
pub fn g2_trace(spin: Spin, rho: &CMatrix) -> Option<f64> {
    let m = spin_matrices(spin);
    let pm = m.sp.matmul(&m.sm);
    let pm2 = m.sp.matmul(&m.sp).matmul(&m.sm).matmul(&m.sm);
    let d1 = rho.matmul(&pm).trace().re;
    let d2 = rho.matmul(&pm2).trace().re;
    (d1 > G2_DENOMINATOR_FLOOR).then(|| d2 / (d1 * d1))
}

/// Coherent-state benchmark g_s(0) in terms of τ = tan²(θ̃/2).
pub fn g2_coherent(spin: Spin, tan2: f64) -> f64 {
    let s = spin.value();
    (2.0 * s - 1.0) / s * (tan2 * tan2 + 2.0 * (2.0 * s - 1.0) * tan2 + s * (2.0 * s - 1.0)) / (2.0 * s + tan2).powi(2)
}

/// Mean spin vector, its polar angles and the orthonormal triplet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinFrame {
    /// (⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩).
    pub mean: [f64; 3],
    /// Polar angle ϑ of the mean spin.
    pub theta: f64,
    /// Azimuth φ by the two-branch arccos rule, in [0, 2π].
    pub phi: f64,
    /// Unit vector along the mean spin.
    pub n1: [f64; 3],
    /// First normal (−sin φ, cos φ, 0).
    pub n2: [f64; 3],
    /// Second normal (−cos ϑ cos φ, −cos ϑ sin φ, sin ϑ).
    pub n3: [f64; 3],
}

impl SpinFrame {
    /// |⟨S⟩|.
    pub fn length(&self) -> f64 {
        self.mean.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn expect(rho: &CMatrix, op: &CMatrix) -> f64 {
    rho.matmul(op).trace().re
}

/// Mean-spin frame of ρ_Q; `None` when |⟨S⟩| ≤ 1e-10.
pub fn mean_spin_frame(spin: Spin, rho: &CMatrix) -> Option<SpinFrame> {
    let m = spin_matrices(spin);
    let mean = [expect(rho, &m.sx), expect(rho, &m.sy), expect(rho, &m.sz)];
    let len = mean.iter().map(|v| v * v).sum::<f64>().sqrt();
    if len <= FRAME_FLOOR {
        return None;
    }
    let theta = (mean[2] / len).clamp(-1.0, 1.0).acos();
    let st = theta.sin();
    let phi = if st < 1e-12 {
        0.0
    } else {
        let a = (mean[0] / (len * st)).clamp(-1.0, 1.0).acos();
        if mean[1] > 0.0 {
            a
        } else {
            2.0 * PI - a
        }
    };
    let (ct, cp, sp) = (theta.cos(), phi.cos(), phi.sin());
    Some(SpinFrame {
        mean,
        theta,
        phi,
        n1: [st * cp, st * sp, ct],
        n2: [-sp, cp, 0.0],
        n3: [-ct * cp, -ct * sp, st],
    })
}

/// Minimum variance of the spin component normal to the mean spin.
pub fn min_normal_variance(spin: Spin, rho: &CMatrix, frame: &SpinFrame) -> f64 {
    let m = spin_matrices(spin);
    let along = |n: &[f64; 3]| {
        m.sx.scale(Complex64::new(n[0], 0.0))
            .add(&m.sy.scale(Complex64::new(n[1], 0.0)))
            .add(&m.sz.scale(Complex64::new(n[2], 0.0)))
    };
    let s2 = along(&frame.n2);
    let s3 = along(&frame.n3);
    let v22 = expect(rho, &s2.matmul(&s2));
    let v33 = expect(rho, &s3.matmul(&s3));
    let c23 = expect(rho, &s2.matmul(&s3).add(&s3.matmul(&s2)));
    0.5 * (v22 + v33) - 0.5 * ((v22 - v33).powi(2) + c23 * c23).sqrt()
}

/// ξ² = 2 min(ΔS_⊥)²/s; `None` when the mean-spin frame is undefined.
pub fn squeezing_xi2(spin: Spin, rho: &CMatrix) -> Option<f64> {
    let frame = mean_spin_frame(spin, rho)?;
    Some(2.0 * min_normal_variance(spin, rho, &frame) / spin.value())
}

/// Qudit entropy at a single time.
pub fn entropy_at(proj: &Projection, t: f64) -> Result<f64> {
    von_neumann_entropy(&qudit_density(&proj.evolve(t)).matrix)
}

/// Entropy series, evaluated in parallel and assembled in time order.
pub fn entropy_series(proj: &Projection, times: &[f64]) -> Result<TimeSeries> {
    let values: Result<Vec<Option<f64>>> = times.par_iter().map(|&t| entropy_at(proj, t).map(Some)).collect();
    TimeSeries::new("entropy", times.to_vec(), values?)
}

/// g₂ series from the explicit B-coefficient sums.
pub fn g2_series(proj: &Projection, times: &[f64]) -> Result<TimeSeries> {
    let values = times.par_iter().map(|&t| g2_spin(&proj.evolve(t))).collect();
    TimeSeries::new("g2", times.to_vec(), values)
}

/// ξ² series.
pub fn xi2_series(proj: &Projection, times: &[f64]) -> Result<TimeSeries> {
    let spin = proj.setup().spin;
    let values = times.par_iter().map(|&t| squeezing_xi2(spin, &qudit_density(&proj.evolve(t)).matrix)).collect();
    TimeSeries::new("xi2", times.to_vec(), values)
}

/// Indices of strict interior local minima of `values`.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1)).filter(|&i| values[i] < values[i - 1] && values[i] <= values[i + 1]).collect()
}

/// Local minima of a sampled series that are also the smallest sample
/// within `half_window` of their own time.
pub fn prominent_minima(times: &[f64], values: &[f64], half_window: f64) -> Vec<usize> {
    local_minima(values)
        .into_iter()
        .filter(|&i| {
            let lo = times.partition_point(|&t| t < times[i] - half_window);
            let hi = times.partition_point(|&t| t <= times[i] + half_window);
            (lo..hi).all(|j| values[j] >= values[i])
        })
        .collect()
}

/// Golden-section minimization of `f` over [a, b] to width `tol`;
/// returns (argmin, min).
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// A refined local minimum of a sampled observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    /// Time of the minimum.
    pub t: f64,
    /// Value there.
    pub value: f64,
}

/// Local minima of `series` whose value lies below `max_value`, each
/// refined by golden section of `f` on the bracketing grid interval.
pub fn refine_minima(series: &TimeSeries, f: impl Fn(f64) -> f64 + Sync, max_value: f64, tol: f64) -> Vec<Minimum> {
    let vals: Vec<f64> = series.values.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
    local_minima(&vals)
        .into_par_iter()
        .filter(|&i| vals[i] < max_value)
        .map(|i| {
            let (t, value) = golden_section_min(&f, series.times[i - 1], series.times[i + 1], tol);
            Minimum { t, value }
        })
        .collect()
}

/// Distance to the initial qudit state around one predicted revival.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalCandidate {
    /// Multiple k of the quasiperiod.
    pub k: u32,
    /// Predicted time k·T.
    pub predicted: f64,
    /// Time of smallest d_HS found in the window.
    pub t_min: f64,
    /// d_HS(ρ_Q(t_min), ρ_Q(0)).
    pub d_min: f64,
    /// d_HS at exactly k·T.
    pub d_predicted: f64,
}

/// Result of scanning successive quasiperiod multiples for a revival.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalScan {
    /// Quasiperiod T.
    pub quasiperiod: f64,
    /// One entry per k = 1 … k_max.
    pub candidates: Vec<RevivalCandidate>,
    /// First k whose windowed d_HS minimum falls below the threshold.
    pub revival_multiple: Option<u32>,
    /// Threshold used.
    pub threshold: f64,
}

/// Scan windows k·T(1 ± `rel_window`) for k = 1 … `k_max` and report the
/// first k where the smallest d_HS to the initial state is below `threshold`.
///
/// d_HS oscillates on the tunnelling scale 2π/Δ inside each window, so
/// every window is sampled at least 40 times per 2π/Δ; `samples` is a
/// lower bound on the count.
pub fn revival_scan(proj: &Projection, k_max: u32, rel_window: f64, samples: usize, threshold: f64) -> RevivalScan {
    let params = proj.setup().params;
    let period = quasiperiod(&params);
    let fast = 2.0 * PI / (params.delta / params.omega);
    let count = |width: f64| -> usize {
        let need = if fast.is_finite() { (width / (fast / 40.0)).ceil() as usize + 1 } else { 0 };
        samples.max(need).max(3)
    };
    let rho0 = qudit_density(&proj.evolve(0.0)).matrix;
    let d = |t: f64| hs_distance(&qudit_density(&proj.evolve(t)).matrix, &rho0);
    let candidates: Vec<RevivalCandidate> = (1..=k_max)
        .map(|k| {
            let predicted = k as f64 * period;
            let ts = uniform_times(predicted * (1.0 - rel_window), predicted * (1.0 + rel_window), count(2.0 * rel_window * predicted));
            let ds: Vec<f64> = ts.par_iter().map(|&t| d(t)).collect();
            let i = (0..ds.len()).min_by(|&a, &b| ds[a].total_cmp(&ds[b])).unwrap();
            let (lo, hi) = (ts[i.saturating_sub(1)], ts[(i + 1).min(ts.len() - 1)]);
            let (t_min, d_min) = golden_section_min(d, lo, hi, 1e-3);
            let (t_min, d_min) = if d_min < ds[i] { (t_min, d_min) } else { (ts[i], ds[i]) };
            RevivalCandidate { k, predicted, t_min, d_min, d_predicted: d(predicted) }
        })
        .collect();
    let revival_multiple = candidates.iter().find(|c| c.d_min < threshold).map(|c| c.k);
    RevivalScan { quasiperiod: period, candidates, revival_multiple, threshold }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{oscillator_density, project_initial, spin_coherent_amplitudes, InitialStateSpec, Truncation};

    fn coherent(spin: Spin, z: Complex64) -> CMatrix {
        let a = spin_coherent_amplitudes(spin, z);
        CMatrix::from_fn(spin.dim(), spin.dim(), |i, j| a[i] * a[j].conj())
    }

    fn projection(spin: Spin, delta: f64, lam: f64, z: f64) -> Projection {
        let p = ModelParams::new(1.0, delta, lam).unwrap();
        let spec = InitialStateSpec::new(Complex64::new(z, 0.0), Complex64::new(3.0, 0.0), 0.2, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        project_initial(spin, &p, &spec, &Truncation::default()).unwrap()
    }

    #[test]
    fn entropy_oracles() {
        assert!(von_neumann_entropy(&coherent(Spin::One, Complex64::new(0.3, 0.2))).unwrap().abs() < 1e-12);
        let mixed = CMatrix::identity(3).scale(Complex64::new(1.0 / 3.0, 0.0));
        assert!((von_neumann_entropy(&mixed).unwrap() - 3f64.ln()).abs() < 1e-14);
        let bad = CMatrix::identity(3).scale(Complex64::new(0.34, 0.0));
        assert!(matches!(von_neumann_entropy(&bad), Err(Error::Trace(_))));
    }

    #[test]
    fn prominent_minima_skip_ripples() {
        let times: Vec<f64> = (0..400).map(|i| i as f64 * 0.05).collect();
        let vals: Vec<f64> = times.iter().map(|t| (t * 0.5).cos() + 0.01 * (40.0 * t).sin()).collect();
        let idx = prominent_minima(&times, &vals, 2.0);
        assert!(local_minima(&vals).len() > 20);
        assert_eq!(idx.len(), 2);
        assert!((times[idx[0]] - 2.0 * PI).abs() < 0.1 && (times[idx[1]] - 6.0 * PI).abs() < 0.1);
    }

    #[test]
    fn hs_oracles() {
        let a = coherent(Spin::One, Complex64::new(0.0, 0.0));
        assert_eq!(hs_distance(&a, &a), 0.0);
        let b = CMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let c = CMatrix::from_diag(&[0.0, 0.0, 1.0]);
        assert!((hs_distance(&b, &c) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hs_matrix_form_equals_wigner_integral() {
        for spin in [Spin::One, Spin::ThreeHalves] {
            let a = coherent(spin, Complex64::new(0.4, -0.7));
            let b = coherent(spin, Complex64::new(-1.3, 0.2)).scale(Complex64::new(0.5, 0.0)).add(&CMatrix::identity(spin.dim()).scale(Complex64::new(0.5 / spin.dim() as f64, 0.0)));
            let g = SphereGrid::exact_for(spin);
            assert!((hs_distance(&a, &b) - hs_distance_wigner(spin, &a, &b, &g)).abs() < 1e-12);
        }
    }

    #[test]
    fn quasiperiod_oracles() {
        let p = ModelParams::new(1.0, 0.16, 0.005).unwrap();
        assert!((quasiperiod(&p) - 1.570816e6).abs() < 1.0);
        let p = ModelParams::new(1.0, 0.15, 0.007).unwrap();
        assert!((quasiperiod(&p) - 0.854876e6).abs() < 1.0);
        let p = ModelParams::new(1.0, 0.16, 0.0).unwrap();
        assert!(quasiperiod(&p).is_infinite());
    }

    #[test]
    fn g2_coherent_benchmark_and_trace_route() {
        let proj = projection(Spin::One, 0.16, 0.005, 0.1051);
        let st = proj.evolve(0.0);
        let tau = 0.1051f64 * 0.1051;
        let want = g2_coherent(Spin::One, tau);
        assert!((want - (1.0 + tau).powi(2) / (2.0 + tau).powi(2)).abs() < 1e-15);
        assert!((g2_spin(&st).unwrap() - want).abs() < 1e-9);
        for spin in [Spin::One, Spin::ThreeHalves] {
            let proj = projection(spin, 0.15, 0.05, 0.6);
            for t in [0.0, 13.7, 4.1e3, 2.2e5] {
                let st = proj.evolve(t);
                let a = g2_spin(&st).unwrap();
                let b = g2_trace(spin, &qudit_density(&st).matrix).unwrap();
                assert!((a - b).abs() < 1e-9, "{spin:?} {t} {a} {b}");
            }
        }
    }

    #[test]
    fn g2_undefined_for_lowest_weight() {
        let rho = CMatrix::from_diag(&[0.0, 0.0, 1.0]);
        assert_eq!(g2_trace(Spin::One, &rho), None);
    }

    #[test]
    fn frame_oracles() {
        let top = CMatrix::from_diag(&[1.0, 0.0, 0.0]);
        let f = mean_spin_frame(Spin::One, &top).unwrap();
        assert!(f.theta.abs() < 1e-12 && f.phi == 0.0);
        assert!(mean_spin_frame(Spin::One, &CMatrix::identity(3).scale(Complex64::new(1.0 / 3.0, 0.0))).is_none());
        for spin in [Spin::One, Spin::ThreeHalves] {
            let f = mean_spin_frame(spin, &coherent(spin, Complex64::new(0.7, 0.0))).unwrap();
            assert!((f.length() - spin.value()).abs() < 1e-12);
            assert!(f.mean[1].abs() < 1e-14);
            let f = mean_spin_frame(spin, &coherent(spin, Complex64::new(0.5, 0.4))).unwrap();
            assert!(f.mean[1] <= 0.0 || f.phi < PI);
            if f.mean[1] <= 0.0 {
                assert!(f.phi >= PI && f.phi <= 2.0 * PI);
            }
        }
    }

    #[test]
    fn coherent_states_are_unsqueezed() {
        for spin in [Spin::One, Spin::ThreeHalves] {
            for z in [Complex64::new(0.0, 0.0), Complex64::new(0.3249, 0.0), Complex64::new(-1.2, 2.0), Complex64::new(5.0, -0.1)] {
                let xi = squeezing_xi2(spin, &coherent(spin, z)).unwrap();
                assert!((xi - 1.0).abs() < 1e-9, "{spin:?} {z} {xi}");
            }
        }
    }

    #[test]
    fn subsystem_entropies_agree() {
        let proj = projection(Spin::One, 0.16, 0.05, 0.1051);
        for t in uniform_times(0.0, 3.0e4, 7) {
            let st = proj.evolve(t);
            let sq = von_neumann_entropy(&qudit_density(&st).matrix).unwrap();
            let so = hermitian_eigenvalues(&oscillator_density(&st).matrix)
                .unwrap()
                .into_iter()
                .filter(|&p| p > 1e-15)
                .map(|p| -p * p.ln())
                .sum::<f64>();
            assert!((sq - so).abs() < 1e-4, "{t} {sq} {so}");
        }
    }

    #[test]
    fn golden_section_and_minima() {
        let (x, v) = golden_section_min(|x| (x - 1.3).powi(2) + 2.0, 0.0, 4.0, 1e-9);
        // f is flat to f64 resolution within ~2e-8 of the argmin.
        assert!((x - 1.3).abs() < 1e-7 && (v - 2.0).abs() < 1e-15);
        assert_eq!(local_minima(&[3.0, 1.0, 2.0, 0.5, 0.7, 0.1]), vec![1, 3]);
    }

    #[test]
    fn series_validation() {
        assert!(TimeSeries::new("x", vec![0.0, 0.0], vec![None, None]).is_err());
        assert!(TimeSeries::new("x", vec![0.0, 1.0], vec![Some(1.0)]).is_err());
        assert!(TimeSeries::new("x", vec![0.0, 1.0], vec![Some(1.0), None]).is_ok());
    }
}
