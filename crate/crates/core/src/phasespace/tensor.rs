//! Spherical-tensor decomposition of the qudit density matrix.

use crate::linalg::CMatrix;
use crate::model::Spin;
use crate::specfun::{log_factorial, parity, wigner3j, Half};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Components ϱ_kq, 0 ≤ k ≤ 2s, |q| ≤ k.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalTensorRep {
    /// Spin sector.
    pub spin: Spin,
    comps: Vec<Complex64>,
}

impl SphericalTensorRep {
    /// All-zero representation.
    pub fn zeros(spin: Spin) -> Self {
        let kmax = spin.twice() as usize;
        SphericalTensorRep { spin, comps: vec![Complex64::new(0.0, 0.0); (kmax + 1) * (kmax + 1)] }
    }

    /// Largest rank 2s.
    pub fn kmax(&self) -> usize {
        self.spin.twice() as usize
    }

    fn idx(k: usize, q: i64) -> usize {
        assert!(q.unsigned_abs() as usize <= k, "|q| must not exceed k");
        (k * k) as usize + (q + k as i64) as usize
    }

    /// ϱ_kq.
    pub fn get(&self, k: usize, q: i64) -> Complex64 {
        self.comps[Self::idx(k, q)]
    }

    /// Set ϱ_kq.
    pub fn set(&mut self, k: usize, q: i64, v: Complex64) {
        let i = Self::idx(k, q);
        self.comps[i] = v;
    }

    /// Iterate over (k, q, ϱ_kq).
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.kmax()).flat_map(move |k| (-(k as i64)..=k as i64).map(move |q| (k, q, self.get(k, q))))
    }

    /// max |ϱ_kq − ϱ'_kq|.
    pub fn max_diff(&self, o: &SphericalTensorRep) -> f64 {
        self.comps.iter().zip(&o.comps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |ϱ_{k,−q} − (−1)^q ϱ_kq*|, zero for a Hermitian source.
    pub fn conjugation_residual(&self) -> f64 {
        self.iter().map(|(k, q, v)| (self.get(k, -q) - parity(q) * v.conj()).norm()).fold(0.0, f64::max)
    }
}

/// Matrix index of magnetic number m (doubled) in the basis m = s … −s.
fn index_of(spin: Spin, m_twice: i32) -> usize {
    ((spin.twice() - m_twice) / 2) as usize
}

/// Generic 3j route:
/// ϱ_kq = (−1)^q Σ_{m,m′} (−1)^{s−m} √(2k+1) (s s k; m −m′ q) ρ_{m′m}.
///
/// Linear in ρ, so it applies equally to non-normalized operator kernels.
pub fn spherical_components(spin: Spin, rho: &CMatrix) -> SphericalTensorRep {
    let mut rep = SphericalTensorRep::zeros(spin);
    let ts = spin.twice();
    let sj = Half(ts);
    for k in 0..=ts as usize {
        for q in -(k as i64)..=k as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for tm in (-ts..=ts).step_by(2) {
                let tmp = tm + 2 * q as i32;
                if tmp.abs() > ts {
                    continue;
                }
                let w = wigner3j(sj, sj, Half::int(k as i32), Half(tm), Half(-tmp), Half(2 * q as i32));
                if w == 0.0 {
                    continue;
                }
                let sign = parity(((ts - tm) / 2) as i64);
                acc += sign * w * rho[(index_of(spin, tmp), index_of(spin, tm))];
            }
            rep.set(k, q, parity(q) * ((2 * k + 1) as f64).sqrt() * acc);
        }
    }
    rep
}

/// a!/b!, zero when b < 0.
fn ff(a: i64, b: i64) -> f64 {
    if b < 0 {
        0.0
    } else {
        (log_factorial(a as u64) - log_factorial(b as u64)).exp()
    }
}

/// Closed forms of ϱ_kq in terms of density-matrix entries.
pub fn closed_form_components(spin: Spin, rho: &CMatrix) -> SphericalTensorRep {
    let mut rep = SphericalTensorRep::zeros(spin);
    let s3 = 3f64.sqrt();
    match spin {
        Spin::One => {
            // Labels +, 0, − map to indices 0, 1, 2.
            let r = |a: usize, b: usize| rho[(a, b)];
            for k in 0..=2i64 {
                let pre = ((2 * k + 1) as f64 / (log_factorial((2 - k) as u64) + log_factorial((3 + k) as u64)).exp()).sqrt();
                let sg = parity(k);
                let kk = (k * k + k) as f64;
                rep.set(k as usize, 0, pre * (2.0 * (r(0, 0) + sg * r(2, 2)) - (kk - 2.0) * r(1, 1)));
                if k >= 1 {
                    let f1 = (2.0 * ff(k + 1, k - 1)).sqrt();
                    rep.set(k as usize, 1, -pre * f1 * (r(0, 1) - sg * r(1, 2)));
                    rep.set(k as usize, -1, pre * f1 * (r(1, 0) - sg * r(2, 1)));
                }
                if k >= 2 {
                    let f2 = ff(k + 2, k - 2).sqrt();
                    rep.set(k as usize, 2, pre * f2 * sg * r(0, 2));
                    rep.set(k as usize, -2, pre * f2 * r(2, 0));
                }
            }
        }
        Spin::ThreeHalves => {
            // Labels 2, 1, −1, −2 (for m = 3/2, 1/2, −1/2, −3/2) map to 0..4.
            let ix = |l: i32| match l {
                2 => 0,
                1 => 1,
                -1 => 2,
                _ => 3,
            };
            let r = |a: i32, b: i32| rho[(ix(a), ix(b))];
            for k in 0..=3i64 {
                let pre = ((2 * k + 1) as f64 / (log_factorial((3 - k) as u64) + log_factorial((4 + k) as u64)).exp()).sqrt();
                let sg = parity(k);
                let kk = (k * k + k) as f64;
                rep.set(
                    k as usize,
                    0,
                    pre * (6.0 * (r(2, 2) + sg * r(-2, -2)) - 2.0 * (kk - 3.0) * (r(1, 1) + sg * r(-1, -1))),
                );
                if k >= 1 {
                    let f1 = ff(k + 1, k - 1).sqrt();
                    rep.set(
                        k as usize,
                        -1,
                        pre * f1 * (2.0 * s3 * r(1, 2) - (kk - 6.0) * r(-1, 1) - sg * 2.0 * s3 * r(-2, -1)),
                    );
                    rep.set(
                        k as usize,
                        1,
                        pre * f1 * (-2.0 * s3 * r(2, 1) - sg * (kk - 6.0) * r(1, -1) + sg * 2.0 * s3 * r(-1, -2)),
                    );
                }
                if k >= 2 {
                    let f2 = (3.0 * ff(k + 2, k - 2)).sqrt();
                    rep.set(k as usize, -2, pre * f2 * (r(-1, 2) + sg * r(-2, 1)));
                    rep.set(k as usize, 2, pre * f2 * (r(2, -1) + sg * r(1, -2)));
                }
                if k >= 3 {
                    let f3 = ff(k + 3, k - 3).sqrt();
                    rep.set(k as usize, 3, pre * f3 * sg * r(2, -2));
                    rep.set(k as usize, -3, pre * f3 * r(-2, 2));
                }
            }
        }
    }
    rep
}

/// Coefficient c_kq = √((2s−k)!(2s+k+1)!)/(√(4π)(2s)!), independent of q.
pub fn c_kq(spin: Spin, k: usize) -> f64 {
    let ts = spin.twice() as u64;
    let k = k as u64;
    (0.5 * (log_factorial(ts - k) + log_factorial(ts + k + 1)) - log_factorial(ts)).exp() / (4.0 * PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(spin: Spin) -> CMatrix {
        // A Hermitian trace-one matrix with every entry populated.
        let d = spin.dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = if i == j {
                    c(1.0 + i as f64, 0.0)
                } else {
                    let v = c(0.1 * (i + 2 * j) as f64, 0.05 * (i as f64 - j as f64) + 0.02 * (i * j) as f64);
                    if i < j { v } else { c(0.1 * (j + 2 * i) as f64, 0.05 * (j as f64 - i as f64) + 0.02 * (i * j) as f64).conj() }
                };
            }
        }
        let tr = m.trace();
        m.scale(1.0 / tr)
    }

    #[test]
    fn maximally_mixed() {
        for spin in [Spin::One, Spin::ThreeHalves] {
            let d = spin.dim();
            let rho = CMatrix::identity(d).scale(c(1.0 / d as f64, 0.0));
            let rep = spherical_components(spin, &rho);
            for (k, _, v) in rep.iter() {
                if k == 0 {
                    assert!((v.re - 1.0 / (d as f64).sqrt()).abs() < 1e-14);
                } else {
                    assert!(v.norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_generic() {
        for spin in [Spin::One, Spin::ThreeHalves] {
            let rho = sample(spin);
            let a = spherical_components(spin, &rho);
            let b = closed_form_components(spin, &rho);
            assert!(a.max_diff(&b) < 1e-12, "{spin:?} {}", a.max_diff(&b));
            assert!(a.conjugation_residual() < 1e-12);
        }
    }

    #[test]
    fn c_kq_values() {
        // s = 1, k = 0: √(2!·3!)/(√(4π)·2!) = √3/√(4π).
        assert!((c_kq(Spin::One, 0) - 3f64.sqrt() / (4.0 * PI).sqrt()).abs() < 1e-15);
    }
}
