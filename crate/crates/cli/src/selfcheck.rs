//! Invariant suite run by the `selfcheck` subcommand.
//!
//! Each check reduces to one worst-case residual compared against a fixed
//! tolerance. State-dependent checks use the scenario's parameters.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use spin_kitten::linalg::{hermitian_eigenvalues, CMatrix};
use spin_kitten::model::{block_spectrum, spin_matrices, ModelParams, Spin};
use spin_kitten::observables::{g2_spin, g2_trace, hs_distance, hs_distance_wigner, quasiperiod, von_neumann_entropy};
use spin_kitten::phasespace::sphere::{spin_density_closed, spin_density};
use spin_kitten::phasespace::tensor::{closed_form_components, spherical_components};
use spin_kitten::phasespace::bipartite::{q_from_number_density, w_from_number_density};
use spin_kitten::phasespace::{integrate_sphere, BipartiteEvaluator, Distribution, KernelRoute, PlaneGrid, SphereGrid};
use spin_kitten::specfun::charlier_bilinear;
use spin_kitten::state::{oscillator_density, qudit_density, spin_coherent_amplitudes, EvolvedState};
use spin_kitten::tomography::{density_sampler, reconstruct_density, reconstruct_spherical, tomogram, tomogram_closed, RotationQuadrature};
use std::f64::consts::PI;

use crate::commands::projection;
use crate::output::{num, Csv, RunOutput};
use crate::scenario::Scenario;
use crate::CliError;

/// Outcome of one invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    /// Short identifier.
    pub name: String,
    /// Worst residual found.
    pub value: f64,
    /// Largest admitted residual.
    pub tol: f64,
    /// `value <= tol` (and finite).
    pub pass: bool,
}

fn check(name: &str, value: f64, tol: f64) -> Check {
    Check { name: name.into(), value, tol, pass: value.is_finite() && value <= tol }
}

/// Deterministic points of the unit square from the additive golden-ratio
/// sequence.
fn unit_points(n: usize) -> Vec<(f64, f64)> {
    let (a, b) = (0.618_033_988_749_894_9, 0.754_877_666_246_692_7);
    (1..=n).map(|k| ((k as f64 * a).fract(), (k as f64 * b).fract())).collect()
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

fn coherent(spin: Spin, z: Complex64) -> CMatrix {
    let a = spin_coherent_amplitudes(spin, z);
    CMatrix::from_fn(spin.dim(), spin.dim(), |i, j| a[i] * a[j].conj())
}

fn densities(states: &[EvolvedState]) -> Vec<CMatrix> {
    states.iter().map(|s| qudit_density(s).matrix).collect()
}

/// Run every invariant; the list is in fixed order.
pub fn run_checks(sc: &Scenario) -> Result<Vec<Check>, CliError> {
    let spin = sc.spin;
    let proj = projection(sc)?;
    let period = quasiperiod(&sc.params);
    let span = if period.is_finite() { period } else { 1e6 };
    let times = [0.0, 0.137 * span, 0.5 * span, 0.911 * span, sc.snapshot];
    let states: Vec<EvolvedState> = times.par_iter().map(|&t| proj.evolve(t)).collect();
    let rhos = densities(&states);
    let oscs: Vec<CMatrix> = states.par_iter().map(|s| oscillator_density(s).matrix).collect();
    let mut out = Vec::new();

    out.push(check("amplitude_norm", (proj.setup().amplitude_norm() - 1.0).abs(), 1e-8));
    out.push(check("trace_qudit", max_of(rhos.iter().map(|r| (r.trace().re - 1.0).abs())), 1e-8));
    out.push(check("trace_oscillator", max_of(oscs.iter().map(|r| (r.trace().re - 1.0).abs())), 1e-8));
    let mut ent = 0.0f64;
    for (q, o) in rhos.iter().zip(&oscs) {
        ent = ent.max((von_neumann_entropy(q).map_err(CliError::from)? - von_neumann_entropy(o).map_err(CliError::from)?).abs());
    }
    out.push(check("entropy_equality", ent, 1e-4));

    // Joint distributions against their marginals.
    let exact = SphereGrid::exact_for(spin);
    let st = &states[1];
    let ev = BipartiteEvaluator::new(st);
    let alpha = sc.initial.alpha;
    // The free oscillation rotates the displacement as α e^{−iωt}.
    let centre = alpha * Complex64::from_polar(1.0, -st.t);
    let betas = [centre, centre * 0.8 + Complex64::new(0.3, -0.4), Complex64::new(-0.5, 0.8)];
    let mut sphere_marg = 0.0f64;
    for dist in [Distribution::W, Distribution::Q] {
        for &b in &betas {
            let m = ev.matrix(dist, b, KernelRoute::Closed);
            let total = integrate_sphere(|t, p| spin_density_closed(spin, dist, &m, t, p), &exact);
            let osc = if dist == Distribution::W { w_from_number_density(&oscs[1], b) } else { q_from_number_density(&oscs[1], b) };
            sphere_marg = sphere_marg.max((total - osc).abs());
        }
    }
    out.push(check("bipartite_sphere_marginal", sphere_marg, 1e-6));
    let grid = PlaneGrid::covering(spin, alpha.norm(), sc.params.lam_tilde, sc.initial.r, 0.2);
    let mut plane_marg = 0.0f64;
    for dist in [Distribution::W, Distribution::Q] {
        let route = if dist == Distribution::W { KernelRoute::Generic } else { KernelRoute::Closed };
        plane_marg = plane_marg.max(ev.integrate_matrix(dist, &grid, route).sub(&rhos[1]).max_abs());
    }
    out.push(check("bipartite_plane_marginal", plane_marg, 1e-6));

    // Closed forms against the tensor route.
    out.push(check("tensor_components_closed_form", max_of(rhos.iter().map(|r| closed_form_components(spin, r).max_diff(&spherical_components(spin, r)))), 1e-9));
    let pts = unit_points(100);
    let mut dens = 0.0f64;
    for r in &rhos {
        let rep = spherical_components(spin, r);
        for &(u, v) in &pts {
            let (t, p) = ((2.0 * u - 1.0).acos(), 2.0 * PI * v);
            for dist in [Distribution::P, Distribution::W, Distribution::Q] {
                dens = dens.max((spin_density(&rep, dist, t, p) - spin_density_closed(spin, dist, r, t, p)).abs());
            }
        }
    }
    out.push(check("spin_densities_closed_form", dens, 1e-9));
    let mut tomo = 0.0f64;
    for (k, &(u, v)) in pts.iter().enumerate() {
        let r = &rhos[k % rhos.len()];
        let (b, g) = (0.01 + u * (PI - 0.02), 2.0 * PI * v);
        let (x, y) = (tomogram(spin, r, b, g), tomogram_closed(spin, r, b, g));
        tomo = tomo.max(max_of(x.probs.iter().zip(&y.probs).map(|(a, c)| (a - c).abs())));
    }
    out.push(check("tomogram_closed_form", tomo, 1e-9));

    // Tomographic inversion.
    let quad = RotationQuadrature::minimal(spin);
    let mut trip = 0.0f64;
    for r in &rhos {
        let s = density_sampler(spin, r);
        trip = trip.max(reconstruct_density(spin, &s, &quad).sub(r).max_abs());
        trip = trip.max(reconstruct_spherical(spin, &s, &quad).max_diff(&spherical_components(spin, r)));
    }
    out.push(check("tomographic_round_trip", trip, 1e-8));

    // Charlier identity, relative to max(1, |rhs|).
    let mut ch = 0.0f64;
    for n in 0..=8 {
        for m in 0..=8 {
            for &(x, y, tau) in &[(0.5, 0.5, 1.0), (1.5, 2.0, 0.7), (4.0, 0.8, 2.0), (2.5, 3.5, 1e-3)] {
                let (l, r) = charlier_bilinear(n, m, x, y, tau, 80);
                ch = ch.max((l - r).abs() / r.abs().max(1.0));
            }
        }
    }
    out.push(check("charlier_identity", ch, 1e-9));

    // Zero coupling: ωn − ΔS_x.
    let mut zc = 0.0f64;
    for s in [Spin::One, Spin::ThreeHalves] {
        let p = ModelParams::new(sc.params.omega, sc.params.delta, 0.0).map_err(CliError::from)?;
        let sx = spin_matrices(s).sx;
        for n in [0usize, 1, 7, 40] {
            let mut got = block_spectrum(s, &p, n).energies;
            got.sort_by(f64::total_cmp);
            let h = CMatrix::identity(s.dim()).scale(Complex64::new(n as f64, 0.0)).sub(&sx.scale(Complex64::new(p.delta / p.omega, 0.0)));
            let want = hermitian_eigenvalues(&h).map_err(CliError::from)?;
            zc = zc.max(max_of(got.iter().zip(&want).map(|(a, b)| (a - b).abs())));
        }
    }
    out.push(check("zero_coupling_spectrum", zc, 1e-12));

    let mut g2 = 0.0f64;
    for (s, r) in states.iter().zip(&rhos) {
        if let (Some(a), Some(b)) = (g2_spin(s), g2_trace(spin, r)) {
            g2 = g2.max((a - b).abs());
        }
    }
    out.push(check("g2_closed_form", g2, 1e-9));

    let mut hs = 0.0f64;
    let refs = [rhos[0].clone(), coherent(spin, Complex64::new(-0.6, 1.2))];
    for r in &rhos {
        for q in &refs {
            hs = hs.max((hs_distance(r, q) - hs_distance_wigner(spin, r, q, &exact)).abs());
        }
    }
    out.push(check("hs_matrix_vs_wigner", hs, 1e-8));
    Ok(out)
}

/// `selfcheck` tables; the caller maps failures to exit code 4.
pub fn selfcheck(sc: &Scenario) -> Result<(RunOutput, bool), CliError> {
    let checks = run_checks(sc)?;
    let mut csv = Csv::new(&["check", "value", "tolerance", "pass"]);
    for c in &checks {
        csv.row(&[c.name.clone(), num(c.value), num(c.tol), c.pass.to_string()]);
    }
    let all = checks.iter().all(|c| c.pass);
    let proj = projection(sc)?;
    let mut out = RunOutput::new("selfcheck");
    out.tables.push(("selfcheck".into(), csv));
    out.truncation = Some((proj.setup().n_max, proj.setup().tail_mass));
    out.results = json!({ "all_passed": all, "checks": checks });
    Ok((out, all))
}
