//! Lobe counting for spin densities sampled on a (θ, φ) plotting grid.

/// Number of connected regions where `values` exceeds `frac` times its
/// maximum.
///
/// `values[i][j]` is sampled at θ_i = πi/(n_θ−1), φ_j = 2πj/n_φ. The grid
/// is periodic in φ, and each pole row is treated as a single point.
pub fn count_lobes(values: &[Vec<f64>], frac: f64) -> usize {
    let nt = values.len();
    if nt == 0 {
        return 0;
    }
    let np = values[0].len();
    let max = values.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return 0;
    }
    let thr = frac * max;
    let id = |i: usize, j: usize| i * np + j;
    let mut parent: Vec<usize> = (0..nt * np).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    let above = |i: usize, j: usize| values[i][j] > thr;
    for i in 0..nt {
        for j in 0..np {
            if !above(i, j) {
                continue;
            }
            let jn = (j + 1) % np;
            if above(i, jn) {
                union(&mut parent, id(i, j), id(i, jn));
            }
            // Pole rows collapse to one node.
            if (i == 0 || i == nt - 1) && j > 0 && above(i, 0) {
                union(&mut parent, id(i, j), id(i, 0));
            }
            if i + 1 < nt && above(i + 1, j) {
                union(&mut parent, id(i, j), id(i + 1, j));
            }
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for i in 0..nt {
        for j in 0..np {
            if above(i, j) {
                roots.insert(find(&mut parent, id(i, j)));
            }
        }
    }
    roots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(f: impl Fn(f64, f64) -> f64) -> Vec<Vec<f64>> {
        (0..64)
            .map(|i| {
                let t = PI * i as f64 / 63.0;
                (0..128).map(|j| f(t, 2.0 * PI * j as f64 / 128.0)).collect()
            })
            .collect()
    }

    #[test]
    fn counts_separated_bumps() {
        let bump = |t: f64, p: f64, t0: f64, p0: f64| {
            let c = t.sin() * t0.sin() * (p - p0).cos() + t.cos() * t0.cos();
            (8.0 * (c - 1.0)).exp()
        };
        let two = grid(|t, p| bump(t, p, 1.57, 0.0) + bump(t, p, 1.57, PI));
        assert_eq!(count_lobes(&two, 0.5), 2);
        // A lobe straddling φ = 0 counts once.
        let wrap = grid(|t, p| bump(t, p, 1.2, 0.0));
        assert_eq!(count_lobes(&wrap, 0.5), 1);
        // A polar cap counts once.
        let cap = grid(|t, p| bump(t, p, 0.0, 0.0) + 0.0 * p);
        assert_eq!(count_lobes(&cap, 0.5), 1);
    }
}
