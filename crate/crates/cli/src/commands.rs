//! Subcommand implementations. Each returns its tables and manifest data;
//! writing happens afterwards in a single ordered pass.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;
use spin_kitten::linalg::CMatrix;
use spin_kitten::observables::{
    entropy_at, entropy_series, g2_series, prominent_minima, quasiperiod, refine_minima, revival_scan, uniform_times, von_neumann_entropy,
    xi2_series, TimeSeries,
};
use spin_kitten::phasespace::sphere::spin_density_closed;
use spin_kitten::phasespace::{count_lobes, integrate_sphere, BipartiteEvaluator, Distribution, PlaneGrid, SphereGrid};
use spin_kitten::state::{oscillator_density, project_initial, qudit_density, Projection};
use spin_kitten::tomography::tomogram_grid;
use std::f64::consts::PI;

use crate::output::{num, Csv, RunOutput};
use crate::scenario::{Scenario, Space};
use crate::CliError;

/// Projection of the scenario's initial state.
pub fn projection(sc: &Scenario) -> Result<Projection, CliError> {
    project_initial(sc.spin, &sc.params, &sc.initial, &sc.truncation).map_err(CliError::from)
}

fn with_truncation(mut out: RunOutput, proj: &Projection) -> RunOutput {
    out.truncation = Some((proj.setup().n_max, proj.setup().tail_mass));
    out
}

/// Per-manifold energies in units of ω.
pub fn spectrum(sc: &Scenario) -> Result<RunOutput, CliError> {
    let proj = projection(sc)?;
    let labels = sc.spin.branch_labels();
    let mut csv = Csv::new(&["n", "branch", "energy"]);
    for b in &proj.setup().spectra {
        for (j, e) in b.energies.iter().enumerate() {
            csv.row(&[b.n.to_string(), labels[j].to_string(), num(e * sc.params.omega)]);
        }
    }
    let mut out = RunOutput::new("spectrum");
    out.tables.push(("spectrum".into(), csv));
    out.results = json!({ "branches": labels, "closed_form_blocks": proj.setup().spectra.iter().filter(|b| b.closed_form).count() });
    Ok(with_truncation(out, &proj))
}

/// B coefficients and the qudit density at the snapshot time.
pub fn evolve(sc: &Scenario) -> Result<RunOutput, CliError> {
    let proj = projection(sc)?;
    let st = proj.evolve(sc.snapshot);
    let spin = sc.spin;
    let mut coeffs = Csv::new(&["branch", "n", "re", "im"]);
    for (i, row) in st.coeffs.iter().enumerate() {
        for (n, b) in row.iter().enumerate() {
            coeffs.row(&[spin.m_twice(i).to_string(), n.to_string(), num(b.re), num(b.im)]);
        }
    }
    let rho = qudit_density(&st).matrix;
    let mut dens = Csv::new(&["row_m2", "col_m2", "re", "im"]);
    for i in 0..spin.dim() {
        for j in 0..spin.dim() {
            dens.row(&[spin.m_twice(i).to_string(), spin.m_twice(j).to_string(), num(rho[(i, j)].re), num(rho[(i, j)].im)]);
        }
    }
    let mut out = RunOutput::new("evolve");
    out.tables.push(("evolve".into(), coeffs));
    out.tables.push(("evolve-density".into(), dens));
    out.residuals = json!({
        "coefficient_norm": (st.norm_sqr() - 1.0).abs(),
        "qudit_trace": (rho.trace().re - 1.0).abs(),
        "qudit_hermiticity": rho.hermiticity_residual(),
    });
    out.results = json!({ "t": sc.snapshot, "entropy": von_neumann_entropy(&rho).map_err(CliError::from)? });
    Ok(with_truncation(out, &proj))
}

/// Half-width of the window that marks a sampled minimum as prominent.
fn prominence_window(sc: &Scenario) -> f64 {
    let t = quasiperiod(&sc.params);
    if t.is_finite() {
        t / 8.0
    } else {
        (sc.time.end - sc.time.start) / 16.0
    }
}

fn series_table(series: &TimeSeries, flagged: &[usize]) -> Csv {
    let mut csv = Csv::new(&["t", "value", "flags"]);
    for (i, (t, v)) in series.times.iter().zip(&series.values).enumerate() {
        let (value, flag) = match v {
            Some(x) => (num(*x), if flagged.binary_search(&i).is_ok() { "min" } else { "" }),
            None => (String::new(), "undefined"),
        };
        csv.row(&[num(*t), value, flag.to_string()]);
    }
    csv
}

fn prominent(series: &TimeSeries, window: f64) -> Vec<usize> {
    let vals: Vec<f64> = series.values.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
    prominent_minima(&series.times, &vals, window)
}

/// Which time series a series subcommand produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// Qudit entanglement entropy.
    Entropy,
    /// Second-order spin correlation g₂.
    Correlation,
    /// Squeezing parameter ξ².
    Squeezing,
}

/// Sampled time series with prominent minima flagged.
pub fn series(sc: &Scenario, kind: SeriesKind) -> Result<RunOutput, CliError> {
    let proj = projection(sc)?;
    let times = uniform_times(sc.time.start, sc.time.end, sc.time.points);
    let (name, s) = match kind {
        SeriesKind::Entropy => ("entropy-series", entropy_series(&proj, &times)),
        SeriesKind::Correlation => ("correlation-series", g2_series(&proj, &times)),
        SeriesKind::Squeezing => ("squeezing-series", xi2_series(&proj, &times)),
    };
    let s = s.map_err(CliError::from)?;
    let window = prominence_window(sc);
    let flagged = prominent(&s, window);
    let mut out = RunOutput::new(name);
    out.tables.push((name.into(), series_table(&s, &flagged)));
    let undefined = s.values.iter().filter(|v| v.is_none()).count();
    let mut results = json!({ "label": s.label, "prominence_half_window": window, "undefined_points": undefined });
    if kind == SeriesKind::Entropy {
        let minima = refine_minima(&s, |t| entropy_at(&proj, t).unwrap_or(f64::INFINITY), f64::INFINITY, 1e-3);
        let kept: Vec<_> = minima.iter().filter(|m| flagged.iter().any(|&i| (s.times[i] - m.t).abs() <= (s.times[1] - s.times[0]).abs())).collect();
        results["refined_minima"] = json!(kept);
        let probe = [times[0], times[times.len() / 2], times[times.len() - 1]];
        let mut worst = 0.0f64;
        for t in probe {
            let st = proj.evolve(t);
            let a = von_neumann_entropy(&qudit_density(&st).matrix).map_err(CliError::from)?;
            let b = von_neumann_entropy(&oscillator_density(&st).matrix).map_err(CliError::from)?;
            worst = worst.max((a - b).abs());
        }
        out.residuals = json!({ "entropy_equality": worst });
    }
    out.results = results;
    Ok(with_truncation(out, &proj))
}

fn sphere_nodes(sc: &Scenario) -> Vec<(f64, f64)> {
    let (nt, np) = (sc.grids.sphere_theta, sc.grids.sphere_phi);
    (0..nt)
        .flat_map(|i| (0..np).map(move |j| (PI * i as f64 / (nt - 1) as f64, 2.0 * PI * j as f64 / np as f64)))
        .collect()
}

fn dist_name(d: Distribution) -> &'static str {
    match d {
        Distribution::P => "p",
        Distribution::W => "w",
        Distribution::Q => "q",
    }
}

/// P, W or Q on the sphere, the oscillator plane or a bipartite slice.
pub fn distribution(sc: &Scenario) -> Result<RunOutput, CliError> {
    let spin = sc.spin;
    let dist = sc.distribution.dist;
    if sc.distribution.space != Space::Spin && dist == Distribution::P {
        return Err(CliError::Config("the P distribution is only available with --space spin".into()));
    }
    let proj = projection(sc)?;
    let st = proj.evolve(sc.snapshot);
    let exact = SphereGrid::exact_for(spin);
    let mut out = RunOutput::new("distribution");
    match sc.distribution.space {
        Space::Spin => {
            let rho = qudit_density(&st).matrix;
            let nodes = sphere_nodes(sc);
            let vals: Vec<f64> = nodes.par_iter().map(|&(t, p)| spin_density_closed(spin, dist, &rho, t, p)).collect();
            let mut csv = Csv::new(&["theta", "phi", "value"]);
            for ((t, p), v) in nodes.iter().zip(&vals) {
                csv.row(&[num(*t), num(*p), num(*v)]);
            }
            let rows: Vec<Vec<f64>> = vals.chunks(sc.grids.sphere_phi).map(|c| c.to_vec()).collect();
            let norm = integrate_sphere(|t, p| spin_density_closed(spin, dist, &rho, t, p), &exact);
            out.tables.push(("distribution".into(), csv));
            out.residuals = json!({ "normalization": (norm - 1.0).abs() });
            out.results = json!({ "dist": dist_name(dist), "space": "spin", "t": sc.snapshot, "lobes_half_max": count_lobes(&rows, 0.5) });
        }
        Space::Osc => {
            let ev = BipartiteEvaluator::new(&st);
            let a = sc.initial.alpha.norm();
            let grid = PlaneGrid::covering(spin, a, sc.params.lam_tilde, sc.initial.r, sc.grids.plane_step);
            let nodes: Vec<(f64, f64, f64)> = grid.nodes().collect();
            let vals: Vec<f64> = nodes
                .par_iter()
                .map(|&(x, y, _)| {
                    let b = Complex64::new(x, y);
                    if dist == Distribution::W {
                        ev.w_osc(b)
                    } else {
                        ev.q_osc(b)
                    }
                })
                .collect();
            let mut csv = Csv::new(&["re_beta", "im_beta", "value"]);
            let mut norm = 0.0;
            for ((x, y, w), v) in nodes.iter().zip(&vals) {
                csv.row(&[num(*x), num(*y), num(*v)]);
                norm += w * v;
            }
            out.tables.push(("distribution".into(), csv));
            out.residuals = json!({ "normalization": (norm - 1.0).abs() });
            out.results = json!({ "dist": dist_name(dist), "space": "osc", "t": sc.snapshot, "plane_half_width": grid.re_max, "plane_nodes_per_axis": grid.n });
        }
        Space::Bipartite => {
            let ev = BipartiteEvaluator::new(&st);
            let beta = sc.distribution.beta_slice;
            let m = ev.matrix(dist, beta, spin_kitten::phasespace::KernelRoute::Closed);
            let nodes = sphere_nodes(sc);
            let vals: Vec<f64> = nodes.par_iter().map(|&(t, p)| spin_density_closed(spin, dist, &m, t, p)).collect();
            let mut csv = Csv::new(&["theta", "phi", "re_beta", "im_beta", "value"]);
            for ((t, p), v) in nodes.iter().zip(&vals) {
                csv.row(&[num(*t), num(*p), num(beta.re), num(beta.im), num(*v)]);
            }
            let marginal = integrate_sphere(|t, p| spin_density_closed(spin, dist, &m, t, p), &exact);
            let osc = m.trace().re;
            out.tables.push(("distribution".into(), csv));
            out.residuals = json!({ "sphere_marginal": (marginal - osc).abs() });
            out.results = json!({ "dist": dist_name(dist), "space": "bipartite", "t": sc.snapshot, "oscillator_marginal": osc });
        }
    }
    Ok(with_truncation(out, &proj))
}

/// Tomogram probabilities on the (𝔟, 𝔤) plotting grid.
pub fn tomogram(sc: &Scenario) -> Result<RunOutput, CliError> {
    let proj = projection(sc)?;
    let rho: CMatrix = qudit_density(&proj.evolve(sc.snapshot)).matrix;
    let grid = tomogram_grid(sc.spin, &rho, sc.grids.tomo_b, sc.grids.tomo_g);
    let mut csv = Csv::new(&["b", "g", "m2", "probability"]);
    let (mut worst, mut lowest) = (0.0f64, f64::INFINITY);
    for t in &grid {
        for (i, p) in t.probs.iter().enumerate() {
            csv.row(&[num(t.b), num(t.g), sc.spin.m_twice(i).to_string(), num(*p)]);
            lowest = lowest.min(*p);
        }
        worst = worst.max((t.total() - 1.0).abs());
    }
    let mut out = RunOutput::new("tomogram");
    out.tables.push(("tomogram".into(), csv));
    out.residuals = json!({ "normalization": worst, "min_probability": lowest });
    out.results = json!({ "t": sc.snapshot, "n_b": sc.grids.tomo_b, "n_g": sc.grids.tomo_g });
    Ok(with_truncation(out, &proj))
}

/// d_HS to the initial qudit state around successive quasiperiod multiples.
pub fn revival(sc: &Scenario) -> Result<RunOutput, CliError> {
    let proj = projection(sc)?;
    let r = &sc.revival;
    let scan = revival_scan(&proj, r.k_max, r.rel_window, r.samples, r.threshold);
    let mut csv = Csv::new(&["k", "predicted", "t_min", "d_min", "d_predicted"]);
    for c in &scan.candidates {
        csv.row(&[c.k.to_string(), num(c.predicted), num(c.t_min), num(c.d_min), num(c.d_predicted)]);
    }
    let mut out = RunOutput::new("revival-scan");
    out.tables.push(("revival-scan".into(), csv));
    out.results = json!({
        "quasiperiod": scan.quasiperiod,
        "revival_multiple": scan.revival_multiple,
        "revival_time": scan.revival_multiple.map(|k| k as f64 * scan.quasiperiod),
        "threshold": scan.threshold,
    });
    Ok(with_truncation(out, &proj))
}
