//! Quadrature grids on the sphere and the oscillator plane.

use crate::model::Spin;
use crate::specfun::gauss_legendre;
use std::f64::consts::PI;

/// Gauss–Legendre in cos θ times a uniform φ rule.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    /// Polar nodes θ_i.
    pub theta: Vec<f64>,
    /// Weights in cos θ (summing to 2).
    pub weights: Vec<f64>,
    /// Azimuthal nodes φ_j = 2πj/n_φ.
    pub phi: Vec<f64>,
}

impl SphereGrid {
    /// Grid with `n_theta` Gauss–Legendre and `n_phi` uniform nodes.
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let theta = x.iter().map(|v| v.acos()).collect();
        let phi = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
        SphereGrid { theta, weights: w, phi }
    }

    /// Smallest grid integrating Y_kq Y*_k′q′ exactly for k, k′ ≤ 2s+1.
    pub fn exact_for(spin: Spin) -> Self {
        let ts = spin.twice() as usize;
        Self::new(ts + 2, 2 * ts + 4)
    }

    /// Iterate over (θ, φ, weight) with the full dΩ weight.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let wp = 2.0 * PI / self.phi.len() as f64;
        self.theta
            .iter()
            .zip(&self.weights)
            .flat_map(move |(t, w)| self.phi.iter().map(move |p| (*t, *p, w * wp)))
    }
}

/// ∫ f dΩ under the grid.
pub fn integrate_sphere(f: impl Fn(f64, f64) -> f64, grid: &SphereGrid) -> f64 {
    grid.nodes().map(|(t, p, w)| w * f(t, p)).sum()
}

/// Uniform rectangular grid in (Re β, Im β) with trapezoid weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneGrid {
    /// Lower Re β.
    pub re_min: f64,
    /// Upper Re β.
    pub re_max: f64,
    /// Lower Im β.
    pub im_min: f64,
    /// Upper Im β.
    pub im_max: f64,
    /// Number of nodes per axis.
    pub n: usize,
}

impl PlaneGrid {
    /// Square window [−half, half]² with n nodes per axis.
    pub fn square(half: f64, n: usize) -> Self {
        PlaneGrid { re_min: -half, re_max: half, im_min: -half, im_max: half, n }
    }

    /// Square window covering every displaced centre ±|α| ± sλ̃ plus six
    /// standard deviations of the widest squeezed Gaussian, at node
    /// spacing no larger than `step`.
    pub fn covering(spin: Spin, alpha_abs: f64, lam_tilde: f64, r: f64, step: f64) -> Self {
        let sigma = 0.5 * r.exp();
        let half = alpha_abs + spin.value() * lam_tilde.abs() + 6.0 * sigma;
        let n = (2.0 * half / step).ceil() as usize + 1;
        Self::square(half, n)
    }

    /// Node spacing along Re β.
    pub fn step_re(&self) -> f64 {
        (self.re_max - self.re_min) / (self.n - 1) as f64
    }

    /// Node spacing along Im β.
    pub fn step_im(&self) -> f64 {
        (self.im_max - self.im_min) / (self.n - 1) as f64
    }

    /// Iterate over (Re β, Im β, weight).
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let (hr, hi) = (self.step_re(), self.step_im());
        let n = self.n;
        let edge = move |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| (self.re_min + i as f64 * hr, self.im_min + j as f64 * hi, edge(i) * edge(j) * hr * hi))
        })
    }
}

/// ∫ f d²β under the grid.
pub fn integrate_plane(f: impl Fn(f64, f64) -> f64, grid: &PlaneGrid) -> f64 {
    grid.nodes().map(|(x, y, w)| w * f(x, y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_oracles() {
        let g = SphereGrid::new(4, 8);
        assert!((integrate_sphere(|_, _| 1.0, &g) - 4.0 * PI).abs() < 1e-13);
        assert!((integrate_sphere(|t, _| t.cos().powi(2), &g) - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn plane_oracle() {
        let g = PlaneGrid::square(6.0, 97);
        let v = integrate_plane(|x, y| (-2.0 * (x * x + y * y)).exp(), &g);
        assert!((v - PI / 2.0).abs() < 1e-12);
    }
}
