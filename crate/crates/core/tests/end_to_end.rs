//! Cross-module consistency checks on evolved states.

use num_complex::Complex64;
use spin_kitten::model::{ModelParams, Spin};
use spin_kitten::observables::{g2_spin, g2_trace, hs_distance, hs_distance_wigner, von_neumann_entropy};
use spin_kitten::phasespace::grid::SphereGrid;
use spin_kitten::phasespace::tensor::{closed_form_components, spherical_components};
use spin_kitten::phasespace::{integrate_sphere, w_osc, BipartiteEvaluator, Distribution, KernelRoute};
use spin_kitten::state::{oscillator_density, project_initial, qudit_density, InitialStateSpec, Projection, Truncation};
use spin_kitten::tomography::{density_sampler, reconstruct_density, reconstruct_spherical, tomogram, tomogram_closed, RotationQuadrature};

fn projection(spin: Spin, delta: f64, lam: f64) -> Projection {
    let p = ModelParams::new(1.0, delta, lam).unwrap();
    let spec = InitialStateSpec::new(Complex64::new(0.4, 0.1), Complex64::new(1.5, -0.3), 0.2, 0.3, Complex64::new(0.2, 0.1)).unwrap();
    project_initial(spin, &p, &spec, &Truncation::default()).unwrap()
}

const TIMES: [f64; 4] = [0.0, 37.5, 2.1e4, 3.3e6];

#[test]
fn reduced_densities_are_normalized_and_share_entropy() {
    for spin in [Spin::One, Spin::ThreeHalves] {
        let proj = projection(spin, 0.15, 0.05);
        for t in TIMES {
            let st = proj.evolve(t);
            let q = qudit_density(&st);
            let o = oscillator_density(&st);
            assert!((q.matrix.trace().re - 1.0).abs() < 1e-8);
            assert!((o.matrix.trace().re - 1.0).abs() < 1e-8);
            assert!(q.matrix.hermiticity_residual() < 1e-12);
            let (sq, so) = (von_neumann_entropy(&q.matrix).unwrap(), von_neumann_entropy(&o.matrix).unwrap());
            assert!((sq - so).abs() < 1e-4, "{spin:?} t={t}: {sq} vs {so}");
        }
    }
}

#[test]
fn tomographic_chain_reproduces_spherical_components() {
    for spin in [Spin::One, Spin::ThreeHalves] {
        let proj = projection(spin, 0.12, 0.2);
        for t in TIMES {
            let rho = qudit_density(&proj.evolve(t)).matrix;
            let quad = RotationQuadrature::minimal(spin);
            let sampler = density_sampler(spin, &rho);
            let rep = reconstruct_spherical(spin, &sampler, &quad);
            assert!(rep.max_diff(&spherical_components(spin, &rho)) < 1e-8);
            assert!(reconstruct_density(spin, &sampler, &quad).sub(&rho).max_abs() < 1e-8);
            for (b, g) in [(0.5, 0.9), (2.7, 4.0)] {
                let (a, c) = (tomogram(spin, &rho, b, g), tomogram_closed(spin, &rho, b, g));
                for i in 0..spin.dim() {
                    assert!((a.probs[i] - c.probs[i]).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn tensor_routes_and_observable_routes_agree() {
    for spin in [Spin::One, Spin::ThreeHalves] {
        let proj = projection(spin, 0.15, 0.05);
        let grid = SphereGrid::exact_for(spin);
        let rho0 = qudit_density(&proj.evolve(0.0)).matrix;
        for t in TIMES {
            let st = proj.evolve(t);
            let rho = qudit_density(&st).matrix;
            assert!(closed_form_components(spin, &rho).max_diff(&spherical_components(spin, &rho)) < 1e-9);
            assert!((g2_spin(&st).unwrap() - g2_trace(spin, &rho).unwrap()).abs() < 1e-9);
            assert!((hs_distance(&rho, &rho0) - hs_distance_wigner(spin, &rho, &rho0, &grid)).abs() < 1e-8);
        }
    }
}

#[test]
fn bipartite_sphere_marginal_is_oscillator_wigner() {
    let spin = Spin::ThreeHalves;
    let proj = projection(spin, 0.15, 0.3);
    let st = proj.evolve(1.7e3);
    let ev = BipartiteEvaluator::new(&st);
    let grid = SphereGrid::exact_for(spin);
    for beta in [Complex64::new(0.3, -0.2), Complex64::new(-1.4, 0.9)] {
        let m = ev.matrix(Distribution::W, beta, KernelRoute::Closed);
        let total = integrate_sphere(|th, ph| spin_kitten::phasespace::sphere::spin_density_closed(spin, Distribution::W, &m, th, ph), &grid);
        assert!((total - w_osc(&st, beta)).abs() < 1e-6);
    }
}
