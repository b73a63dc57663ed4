//! Special functions and rotation-group kernels.
//!
//! Every routine here is a pure function. Factorial ratios are formed in
//! log space, half-integers travel as doubled integers, and the one memo
//! table (log-factorials) is built once and then only read.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest polynomial degree the library is configured for.
pub const MAX_DEGREE: usize = 512;

/// Size of the exact log-factorial table; larger arguments use Stirling.
const LOG_FACT_TABLE: usize = 1100;

/// A half-integer stored as twice its value, so `Half(3)` is 3/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half(pub i32);

impl Half {
    /// The half-integer `twice / 2`.
    pub const fn from_twice(twice: i32) -> Self {
        Half(twice)
    }

    /// The integer `k` as a half-integer.
    pub const fn int(k: i32) -> Self {
        Half(2 * k)
    }

    /// Twice the value.
    pub const fn twice(self) -> i32 {
        self.0
    }

    /// The value as a float.
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// True when the value is a whole number.
    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl std::ops::Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl std::ops::Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl std::ops::Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

fn log_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACT_TABLE);
        // Exact products while they fit in an f64 mantissa, then a
        // compensated running sum of ln k.
        let mut prod = 1.0f64;
        t.push(0.0);
        for k in 1..=20u32 {
            prod *= k as f64;
            t.push(prod.ln());
        }
        let mut sum = t[20];
        let mut comp = 0.0f64;
        for k in 21..LOG_FACT_TABLE {
            let y = (k as f64).ln() - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            t.push(sum);
        }
        t
    })
}

/// ln(n!).
pub fn log_factorial(n: u64) -> f64 {
    let t = log_fact_table();
    if (n as usize) < t.len() {
        return t[n as usize];
    }
    // Stirling series for ln Γ(n+1); truncation error far below 1e-16 here.
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// ln(n!) for a signed argument, `None` when n < 0.
fn log_fact_signed(n: i64) -> Option<f64> {
    if n < 0 {
        None
    } else {
        Some(log_factorial(n as u64))
    }
}

/// Generalized binomial coefficient C(n, k) for integer n (possibly
/// negative) and k; zero for k < 0.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    if n >= 0 {
        if k > n {
            return 0.0;
        }
        let k = k.min(n - k);
        if n <= 60 {
            let mut acc = 1.0f64;
            for i in 0..k {
                acc = acc * (n - i) as f64 / (i + 1) as f64;
            }
            return acc.round();
        }
        return (log_factorial(n as u64)
            - log_factorial(k as u64)
            - log_factorial((n - k) as u64))
        .exp();
    }
    // C(n, k) = (-1)^k C(k - n - 1, k) for negative n.
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * binomial(k - n - 1, k)
}

/// Associated Laguerre polynomial L_n^k(x) by upward recurrence in n.
///
/// Valid for integer k ≥ −n; negative orders are reduced with
/// L_n^{-j}(x) = (−x)^j (n−j)!/n! L_{n−j}^j(x).
pub fn laguerre_assoc(n: usize, k: i64, x: f64) -> f64 {
    if k < 0 {
        let j = (-k) as usize;
        assert!(j <= n, "laguerre_assoc requires k >= -n");
        let ratio = (log_factorial((n - j) as u64) - log_factorial(n as u64)).exp();
        return (-x).powi(j as i32) * ratio * laguerre_assoc(n - j, j as i64, x);
    }
    let a = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + a - x) * cur - (fi + a) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All L_i^k(x) for i = 0..=n with fixed order k ≥ 0.
pub fn laguerre_row(n: usize, k: usize, x: f64) -> Vec<f64> {
    let a = k as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + a - x);
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + a - x) * out[i] - (fi + a) * out[i - 1]) / (fi + 1.0);
        out.push(next);
    }
    out
}

/// Physicists' Hermite polynomial H_n(z).
pub fn hermite(n: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for i in 1..n {
        let next = 2.0 * z * cur - 2.0 * i as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial P_ℓ^{(a,b)}(x) from the explicit binomial sum
/// Σ_k C(ℓ+a, ℓ−k) C(ℓ+b, k) ((x−1)/2)^k ((x+1)/2)^{ℓ−k}.
pub fn jacobi(l: usize, a: i64, b: i64, x: f64) -> f64 {
    let l = l as i64;
    let hm = 0.5 * (x - 1.0);
    let hp = 0.5 * (x + 1.0);
    let mut acc = 0.0;
    for k in 0..=l {
        let c = binomial(l + a, l - k) * binomial(l + b, k);
        if c != 0.0 {
            acc += c * hm.powi(k as i32) * hp.powi((l - k) as i32);
        }
    }
    acc
}

/// Associated Legendre function P_ℓ^m(x) for m ≥ 0, including the
/// Condon–Shortley phase (−1)^m.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    assert!(m <= l, "assoc_legendre requires m <= l");
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// Spherical harmonic Y_ℓm(θ, φ) with the Condon–Shortley convention.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let ma = m.unsigned_abs() as usize;
    assert!(ma <= l, "spherical_harmonic requires |m| <= l");
    let lnorm = 0.5
        * (((2 * l + 1) as f64 / (4.0 * PI)).ln() + log_factorial((l - ma) as u64)
            - log_factorial((l + ma) as u64));
    let y = lnorm.exp() * assoc_legendre(l, ma, theta.cos()) * Complex64::from_polar(1.0, ma as f64 * phi);
    if m >= 0 {
        y
    } else if ma % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// Sign (−1)^k for an integer k.
pub fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3j symbol by the Racah single sum. Arguments are half-integers.
pub fn wigner3j(j1: Half, j2: Half, j3: Half, m1: Half, m2: Half, m3: Half) -> f64 {
    let (tj1, tj2, tj3) = (j1.0 as i64, j2.0 as i64, j3.0 as i64);
    let (tm1, tm2, tm3) = (m1.0 as i64, m2.0 as i64, m3.0 as i64);
    if tm1 + tm2 + tm3 != 0 {
        return 0.0;
    }
    if tj1 < 0 || tj2 < 0 || tj3 < 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm3.abs() > tj3 {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0 {
        return 0.0;
    }
    if (tj1 + tj2 + tj3) % 2 != 0 {
        return 0.0;
    }
    if tj3 > tj1 + tj2 || tj3 < (tj1 - tj2).abs() {
        return 0.0;
    }
    // All quantities below are whole numbers.
    let a = (tj1 + tj2 - tj3) / 2;
    let b = (tj1 - tj2 + tj3) / 2;
    let c = (-tj1 + tj2 + tj3) / 2;
    let big = (tj1 + tj2 + tj3) / 2 + 1;
    let j1pm1 = (tj1 + tm1) / 2;
    let j1mm1 = (tj1 - tm1) / 2;
    let j2pm2 = (tj2 + tm2) / 2;
    let j2mm2 = (tj2 - tm2) / 2;
    let j3pm3 = (tj3 + tm3) / 2;
    let j3mm3 = (tj3 - tm3) / 2;
    let lf = |n: i64| log_factorial(n as u64);
    let log_pre = 0.5
        * (lf(a) + lf(b) + lf(c) - lf(big) + lf(j1pm1) + lf(j1mm1) + lf(j2pm2) + lf(j2mm2)
            + lf(j3pm3)
            + lf(j3mm3));
    // Denominator factorial arguments as k-dependent offsets.
    let d1 = (tj3 - tj2 + tm1) / 2;
    let d2 = (tj3 - tj1 - tm2) / 2;
    let kmin = 0.max(-d1).max(-d2);
    let kmax = a.min(j1mm1).min(j2pm2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = lf(k) + lf(a - k) + lf(j1mm1 - k) + lf(j2pm2 - k) + lf(d1 + k) + lf(d2 + k);
        sum += parity(k) * (log_pre - den).exp();
    }
    let phase_twice = tj1 - tj2 - tm3;
    parity(phase_twice / 2) * sum
}

/// Small Wigner matrix element d^j_{m′m}(b) from the Jacobi-polynomial
/// formula, with symmetries choosing the region where it is valid.
///
/// The convention is d_{m′m}(b) = ⟨j m|exp(−i b J_y)|j m′⟩, which is the
/// transpose of the more common ordering; it is the form consistent with
/// the rotation phases exp(i𝔞m′) exp(i𝔤m) applied in [`wigner_big_d`].
pub fn wigner_d_small(j: Half, mp: Half, m: Half, b: f64) -> f64 {
    let (tj, tmp, tm) = (j.0, mp.0, m.0);
    assert!(tmp.abs() <= tj && tm.abs() <= tj, "wigner_d_small indices out of range");
    if tmp >= tm.abs() {
        d_direct(tj, tmp, tm, b)
    } else if tm >= tmp.abs() {
        parity(((tmp - tm) / 2) as i64) * d_direct(tj, tm, tmp, b)
    } else if -tm >= tmp.abs() {
        d_direct(tj, -tm, -tmp, b)
    } else {
        parity(((tmp - tm) / 2) as i64) * d_direct(tj, -tmp, -tm, b)
    }
}

/// Jacobi-form element valid for m′ ≥ |m| (doubled arguments).
fn d_direct(tj: i32, tmp: i32, tm: i32, b: f64) -> f64 {
    let l = ((tj - tmp) / 2) as usize;
    let pa = ((tmp - tm) / 2) as i64;
    let pb = ((tmp + tm) / 2) as i64;
    let lf = |t: i32| log_fact_signed((t / 2) as i64).expect("valid region");
    let pre = 0.5 * (lf(tj + tmp) + lf(tj - tmp) - lf(tj + tm) - lf(tj - tm));
    let (sh, ch) = ((0.5 * b).sin(), (0.5 * b).cos());
    pre.exp() * sh.powi(pa as i32) * ch.powi(pb as i32) * jacobi(l, pa, pb, b.cos())
}

/// Wigner D element exp(i𝔞m′) exp(i𝔤m) d^j_{m′m}(𝔟).
pub fn wigner_big_d(j: Half, mp: Half, m: Half, a: f64, b: f64, g: f64) -> Complex64 {
    Complex64::from_polar(1.0, a * mp.value() + g * m.value()) * wigner_d_small(j, mp, m, b)
}

/// Neumaier-compensated sum of terms, added largest magnitude first.
pub fn compensated_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap_or(std::cmp::Ordering::Equal));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Terminating ₂F₀(−n, −m; ; x) as an exact finite sum.
pub fn hyp2f0_terminating(n: usize, m: usize, x: f64) -> f64 {
    hyp2f0_with_condition(n, m, x).0
}

/// Terminating ₂F₀(−n, −m; ; x) together with Σ|term|, the latter being
/// a measure of the cancellation the sum suffered.
pub fn hyp2f0_with_condition(n: usize, m: usize, x: f64) -> (f64, f64) {
    let kmax = n.min(m);
    let mut terms = Vec::with_capacity(kmax + 1);
    let mut t = 1.0f64;
    terms.push(t);
    for k in 0..kmax {
        t *= (k as f64 - n as f64) * (k as f64 - m as f64) * x / (k as f64 + 1.0);
        terms.push(t);
    }
    let abs_sum = terms.iter().map(|v| v.abs()).sum();
    (compensated_sum(terms), abs_sum)
}

/// Both sides of the Charlier bilinear generating-function identity
///
/// Σ_k (−τ)^k/k! ₂F₀(−n,−k;;−1/x) ₂F₀(−k,−m;;−1/y)
///   = (1+τ/x)^n (1+τ/y)^m e^{−τ} ₂F₀(−n,−m;;−τ/((x+τ)(y+τ))),
///
/// with the left sum cut at k ≤ `k_max`.
pub fn charlier_bilinear(n: usize, m: usize, x: f64, y: f64, tau: f64, k_max: usize) -> (f64, f64) {
    let mut weight = 1.0f64;
    let mut terms = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            weight *= -tau / k as f64;
        }
        terms.push(weight * hyp2f0_terminating(n, k, -1.0 / x) * hyp2f0_terminating(k, m, -1.0 / y));
    }
    let lhs = compensated_sum(terms);
    let rhs = (1.0 + tau / x).powi(n as i32)
        * (1.0 + tau / y).powi(m as i32)
        * (-tau).exp()
        * hyp2f0_terminating(n, m, -tau / ((x + tau) * (y + tau)));
    (lhs, rhs)
}

/// Displacement matrix element G_mn(X) = ⟨m|D(X)|n⟩.
pub fn displacement_elem(m: usize, n: usize, x: Complex64) -> Complex64 {
    let r2 = x.norm_sqr();
    let gauss = (-0.5 * r2).exp();
    if m >= n {
        let d = m - n;
        gauss * power_ratio(x, d, n, m) * laguerre_assoc(n, d as i64, r2)
    } else {
        let d = n - m;
        gauss * power_ratio(-x.conj(), d, m, n) * laguerre_assoc(m, d as i64, r2)
    }
}

/// X^d √(lo!/hi!) formed in log space.
fn power_ratio(x: Complex64, d: usize, lo: usize, hi: usize) -> Complex64 {
    if d == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = x.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mag = (d as f64 * r.ln() + 0.5 * (log_factorial(lo as u64) - log_factorial(hi as u64))).exp();
    Complex64::from_polar(mag, d as f64 * x.arg())
}

/// Full (dim × dim) displacement matrix G(X), row-major, built with one
/// Laguerre row per diagonal so the cost is O(dim²).
pub fn displacement_matrix(dim: usize, x: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    if dim == 0 {
        return out;
    }
    let r2 = x.norm_sqr();
    let r = x.norm();
    let gauss = (-0.5 * r2).exp();
    let below_phase = if r > 0.0 { x / r } else { Complex64::new(1.0, 0.0) };
    let above_phase = -below_phase.conj();
    for d in 0..dim {
        let lag = laguerre_row(dim - 1 - d, d, r2);
        // |X|^d √(lo!/(lo+d)!), advanced in lo by √((lo+1)/(lo+1+d)).
        let mut mag = if d == 0 {
            1.0
        } else if r == 0.0 {
            0.0
        } else {
            (d as f64 * r.ln() - 0.5 * log_factorial(d as u64)).exp()
        };
        let pb = below_phase.powu(d as u32);
        let pa = above_phase.powu(d as u32);
        for (lo, lval) in lag.iter().enumerate() {
            let hi = lo + d;
            let v = gauss * mag * *lval;
            out[hi * dim + lo] = pb * v;
            if d > 0 {
                out[lo * dim + hi] = pa * v;
            }
            mag *= ((lo + 1) as f64 / (lo + 1 + d) as f64).sqrt();
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -z;
        xs[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}
