//! Bessel, Hankel and modified Bessel functions of integer order for real
//! arguments, plus zeros of `J_n`.
//!
//! `J_n` for moderate arguments comes from Miller's backward recurrence
//! normalized with `J_0 + 2 sum J_2k = 1`; `Y_0` and `Y_1` come from the
//! Neumann series built on the same sequence. Large arguments use the Hankel
//! asymptotic expansion. `K_0`, `K_1` use the trapezoidal rule on
//! `int_0^inf exp(-x cosh t) cosh(nu t) dt`, which converges geometrically.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest supported order for `bessel_j`.
pub const MAX_ORDER: u32 = 200;

/// Above this argument the asymptotic expansion replaces Miller's algorithm.
const ASYMPTOTIC_SWITCH: f64 = 25.0;

/// Arguments below this use the log-split power series.
const SERIES_SWITCH: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("argument {x} outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },
    #[error("order {order} not supported by {function}")]
    Order { function: &'static str, order: u32 },
}

fn check_finite(function: &'static str, x: f64) -> Result<(), SpecfunError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecfunError::Domain { function, x })
    }
}

/// Bessel function of the first kind `J_n(x)`, `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecfunError> {
    check_finite("bessel_j", x)?;
    if x < 0.0 {
        return Err(SpecfunError::Domain { function: "bessel_j", x });
    }
    if order > MAX_ORDER {
        return Err(SpecfunError::Order { function: "bessel_j", order });
    }
    Ok(bessel_j_sequence(order as usize, x)[order as usize])
}

/// Bessel function of the second kind `Y_n(x)`, `x > 0`.
pub fn bessel_y(order: u32, x: f64) -> Result<f64, SpecfunError> {
    check_finite("bessel_y", x)?;
    if x <= 0.0 {
        return Err(SpecfunError::Domain { function: "bessel_y", x });
    }
    if order > MAX_ORDER {
        return Err(SpecfunError::Order { function: "bessel_y", order });
    }
    let (_, y) = bessel_jy_sequence(order as usize, x);
    Ok(y[order as usize])
}

/// Hankel function of the first kind `H^(1)_n(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1(order: u32, x: f64) -> Result<Complex64, SpecfunError> {
    check_finite("hankel1", x)?;
    if x <= 0.0 {
        return Err(SpecfunError::Domain { function: "hankel1", x });
    }
    if order > MAX_ORDER {
        return Err(SpecfunError::Order { function: "hankel1", order });
    }
    let n = order as usize;
    let (j, y) = bessel_jy_sequence(n, x);
    Ok(Complex64::new(j[n], y[n]))
}

/// Derivative `H^(1)'_n(x)` through `(H_{n-1} - H_{n+1}) / 2`.
pub fn hankel1_prime(order: u32, x: f64) -> Result<Complex64, SpecfunError> {
    if x <= 0.0 || !x.is_finite() {
        return Err(SpecfunError::Domain { function: "hankel1_prime", x });
    }
    if order >= MAX_ORDER {
        return Err(SpecfunError::Order { function: "hankel1_prime", order });
    }
    let n = order as usize;
    let (j, y) = bessel_jy_sequence(n + 1, x);
    Ok(Complex64::new(derivative_from_sequence(&j, n), derivative_from_sequence(&y, n)))
}

/// Derivative `J'_n(x)` through `(J_{n-1} - J_{n+1}) / 2`.
pub fn bessel_j_prime(order: u32, x: f64) -> Result<f64, SpecfunError> {
    check_finite("bessel_j_prime", x)?;
    if x < 0.0 {
        return Err(SpecfunError::Domain { function: "bessel_j_prime", x });
    }
    if order >= MAX_ORDER {
        return Err(SpecfunError::Order { function: "bessel_j_prime", order });
    }
    let j = bessel_j_sequence(order as usize + 1, x);
    Ok(derivative_from_sequence(&j, order as usize))
}

/// Derivative `Y'_n(x)` through `(Y_{n-1} - Y_{n+1}) / 2`.
pub fn bessel_y_prime(order: u32, x: f64) -> Result<f64, SpecfunError> {
    if x <= 0.0 || !x.is_finite() {
        return Err(SpecfunError::Domain { function: "bessel_y_prime", x });
    }
    if order >= MAX_ORDER {
        return Err(SpecfunError::Order { function: "bessel_y_prime", order });
    }
    let (_, y) = bessel_jy_sequence(order as usize + 1, x);
    Ok(derivative_from_sequence(&y, order as usize))
}

/// `f'_n = (f_{n-1} - f_{n+1}) / 2` with `f_{-1} = -f_1`.
pub fn derivative_from_sequence(f: &[f64], n: usize) -> f64 {
    if n == 0 {
        -f[1]
    } else {
        0.5 * (f[n - 1] - f[n + 1])
    }
}

/// Modified Bessel function of the second kind `K_n(x)`, `n in {0, 1}`, `x > 0`.
pub fn mod_bessel_k(order: u32, x: f64) -> Result<f64, SpecfunError> {
    check_finite("mod_bessel_k", x)?;
    if x <= 0.0 {
        return Err(SpecfunError::Domain { function: "mod_bessel_k", x });
    }
    match order {
        0 => Ok(k_trapezoid(0.0, x)),
        1 => Ok(k_trapezoid(1.0, x)),
        _ => Err(SpecfunError::Order { function: "mod_bessel_k", order }),
    }
}

/// Modified Bessel function of the first kind `I_0(x)` by its power series.
pub fn mod_bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    sum
}

const K_STEP: f64 = 0.2;
const K_NODES: usize = 160;

/// `(cosh(k h) - 1, cosh(k h))` at the trapezoid nodes.
fn k_table() -> &'static [(f64, f64); K_NODES] {
    static TABLE: OnceLock<[(f64, f64); K_NODES]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [(0.0, 1.0); K_NODES];
        for (k, slot) in t.iter_mut().enumerate() {
            let c = (k as f64 * K_STEP).cosh();
            *slot = (c - 1.0, c);
        }
        t
    })
}

fn k_trapezoid(nu: f64, x: f64) -> f64 {
    // exp(-x) is factored out so large arguments do not underflow early.
    let table = k_table();
    let mut sum = 0.5;
    for &(cm1, c) in &table[1..] {
        let expo = x * cm1;
        if expo > 60.0 {
            break;
        }
        // cosh(t) is the node weight of K_1
        let weight = if nu == 0.0 { 1.0 } else { c };
        sum += (-expo).exp() * weight;
    }
    (-x).exp() * K_STEP * sum
}

/// `J_0 ..= J_nmax` at `x >= 0`.
pub fn bessel_j_sequence(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut j = vec![0.0; nmax + 1];
        j[0] = 1.0;
        return j;
    }
    if x > ASYMPTOTIC_SWITCH && (nmax as f64) < x {
        let [j0, j1, _, _] = asymptotic_jy01(x);
        return forward_recurrence(j0, j1, nmax.max(1), x)[..=nmax].to_vec();
    }
    let mut j = miller(nmax.max(1), x).0;
    j.truncate(nmax + 1);
    j
}

/// `(J_0 ..= J_nmax, Y_0 ..= Y_nmax)` at `x > 0`.
pub fn bessel_jy_sequence(nmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let (j, y0, y1) = if x > ASYMPTOTIC_SWITCH {
        let [j0, j1, y0, y1] = asymptotic_jy01(x);
        let j = if (nmax as f64) < x { forward_recurrence(j0, j1, nmax.max(1), x) } else { miller(nmax.max(1), x).0 };
        (j, y0, y1)
    } else {
        miller(nmax.max(1), x)
    };
    let y = forward_recurrence(y0, y1, nmax.max(1), x);
    (j[..=nmax].to_vec(), y[..=nmax].to_vec())
}

fn forward_recurrence(f0: f64, f1: f64, nmax: usize, x: f64) -> Vec<f64> {
    let mut f = Vec::with_capacity(nmax + 1);
    f.push(f0);
    f.push(f1);
    for k in 1..nmax {
        let next = 2.0 * k as f64 / x * f[k] - f[k - 1];
        f.push(next);
    }
    f
}

fn miller_start(nmax: usize, x: f64) -> usize {
    let top = (nmax as f64).max(x);
    let start = (top + 24.0 + 8.0 * top.cbrt()) as usize;
    start + (start % 2)
}

/// Backward recurrence for `J_0 ..= J_nmax` together with `Y_0`, `Y_1` from
/// the Neumann series. Valid for `0 < x <= ASYMPTOTIC_SWITCH`; for larger `x`
/// the `J` values are still correct but `Y` loses accuracy.
fn miller(nmax: usize, x: f64) -> (Vec<f64>, f64, f64) {
    let start = miller_start(nmax, x);
    let mut j = vec![0.0; nmax + 1];
    let mut upper = 0.0; // J_{k+1}
    let mut current = 1e-30; // J_k
    let mut norm = 0.0;
    let mut sum_y0 = 0.0;
    let mut sum_y1 = 0.0;
    let mut k = start;
    loop {
        if k <= nmax {
            j[k] = current;
        }
        if k.is_multiple_of(2) && k > 0 {
            let half = (k / 2) as f64;
            let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            norm += 2.0 * current;
            sum_y0 += sign * current / half;
            sum_y1 -= sign * upper / half;
        } else if k % 2 == 1 {
            // k = 2m - 1 with m = (k + 1) / 2
            let m = k.div_ceil(2);
            let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            sum_y1 += sign * current / m as f64;
        }
        if k == 0 {
            norm += current;
            break;
        }
        let lower = 2.0 * k as f64 / x * current - upper;
        upper = current;
        current = lower;
        k -= 1;
        if current.abs() > 1e250 {
            let s = 1e-250;
            current *= s;
            upper *= s;
            norm *= s;
            sum_y0 *= s;
            sum_y1 *= s;
            for v in j.iter_mut() {
                *v *= s;
            }
        }
    }
    for v in j.iter_mut() {
        *v /= norm;
    }
    let sum_y0 = sum_y0 / norm;
    let sum_y1 = sum_y1 / norm;
    let j0 = j[0];
    let j1 = j[1];
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = 2.0 / PI * (log_term * j0 - 2.0 * sum_y0);
    let y1 = -2.0 / PI * (j0 / x - log_term * j1 - sum_y1);
    (j, y0, y1)
}

/// Hankel asymptotic expansion of `[J_0, J_1, Y_0, Y_1]`, accurate for `x > 20`.
fn asymptotic_jy01(x: f64) -> [f64; 4] {
    let amp = (2.0 / (PI * x)).sqrt();
    let mut out = [0.0; 4];
    for (nu, slot) in [(0.0_f64, 0usize), (1.0, 1)] {
        let mu = 4.0 * nu * nu;
        let mut term = 1.0;
        let mut p = 1.0;
        let mut q = 0.0;
        let mut prev = f64::INFINITY;
        for k in 1..60 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
            if term.abs() > prev || term.abs() < 1e-18 {
                break;
            }
            prev = term.abs();
            match k % 4 {
                1 => q += term,
                2 => p -= term,
                3 => q -= term,
                _ => p += term,
            }
        }
        let chi = x - (0.5 * nu + 0.25) * PI;
        let (s, c) = chi.sin_cos();
        out[slot] = amp * (p * c - q * s);
        out[slot + 2] = amp * (p * s + q * c);
    }
    out
}

/// `(H^(1)_0(x), H^(1)_1(x))` for `x > 0`; hot path of the boundary assembly.
pub fn hankel1_01(x: f64) -> (Complex64, Complex64) {
    let [j0, j1, y0, y1] = if x > ASYMPTOTIC_SWITCH {
        asymptotic_jy01(x)
    } else {
        let (j, y0, y1) = miller(1, x);
        [j[0], j[1], y0, y1]
    };
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// Splits `H^(1)_0(kappa r) = (2i/pi) J_0(kappa r) ln r + remainder(r)`.
///
/// Returns `(J_0(kappa r), remainder)`. The remainder is smooth and finite at
/// `r = 0`, where it equals `1 + (2i/pi)(ln(kappa/2) + gamma)`.
pub fn hankel0_log_split(kappa: f64, r: f64) -> (f64, Complex64) {
    let z = kappa * r;
    if z <= SERIES_SWITCH {
        let q = 0.25 * z * z;
        let mut term: f64 = 1.0;
        let mut j0 = 1.0;
        let mut harmonic = 0.0;
        let mut tail = 0.0;
        let mut k = 1.0;
        while term.abs() > 1e-18 {
            term *= -q / (k * k);
            harmonic += 1.0 / k;
            j0 += term;
            // (-1)^{k+1} H_k q^k / (k!)^2 = -H_k * term
            tail -= harmonic * term;
            k += 1.0;
        }
        let im = 2.0 / PI * (((0.5 * kappa).ln() + EULER_GAMMA) * j0 + tail);
        (j0, Complex64::new(j0, im))
    } else {
        let (h0, _) = hankel1_01(z);
        let j0 = h0.re;
        (j0, h0 - Complex64::new(0.0, 2.0 / PI * j0 * r.ln()))
    }
}

/// Splits `K_0(mu r) = -I_0(mu r) ln r + remainder(r)`; returns `(I_0, remainder)`.
pub fn bessel_k0_log_split(mu: f64, r: f64) -> (f64, f64) {
    let z = mu * r;
    let q = 0.25 * z * z;
    if z <= SERIES_SWITCH {
        let mut term = 1.0;
        let mut i0 = 1.0;
        let mut harmonic = 0.0;
        let mut tail = 0.0;
        let mut k = 1.0;
        while term > 1e-18 {
            term *= q / (k * k);
            harmonic += 1.0 / k;
            i0 += term;
            tail += harmonic * term;
            k += 1.0;
        }
        (i0, -((0.5 * mu).ln() + EULER_GAMMA) * i0 + tail)
    } else {
        let i0 = mod_bessel_i0(z);
        (i0, k_trapezoid(0.0, z) + i0 * r.ln())
    }
}

/// `K_0(x)` without argument checks, for the assembly loops.
pub fn bessel_k0_unchecked(x: f64) -> f64 {
    k_trapezoid(0.0, x)
}

/// Positive zeros of `J_n` are located by sign changes on this grid.
const ZERO_GRID_STEP: f64 = 0.5;

fn zero_cache() -> &'static Mutex<HashMap<(u32, u32), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `index`-th positive zero of `J_order` (`index >= 1`).
pub fn bessel_j_zero(order: u32, index: u32) -> Result<f64, SpecfunError> {
    if order > 60 {
        return Err(SpecfunError::Order { function: "bessel_j_zero", order });
    }
    if index == 0 || index > 20 {
        return Err(SpecfunError::Order { function: "bessel_j_zero (index)", order: index });
    }
    if let Some(v) = zero_cache().lock().expect("zero cache poisoned").get(&(order, index)) {
        return Ok(*v);
    }
    let zeros = zeros_below(order, f64::INFINITY, index as usize);
    let mut cache = zero_cache().lock().expect("zero cache poisoned");
    for (m, z) in zeros.iter().enumerate() {
        cache.insert((order, m as u32 + 1), *z);
    }
    Ok(zeros[index as usize - 1])
}

/// All positive zeros of `J_order` up to `limit`, at most `max_count` of them.
pub fn zeros_below(order: u32, limit: f64, max_count: usize) -> Vec<f64> {
    let n = order as usize;
    let f = |x: f64| bessel_j_sequence(n, x)[n];
    let mut zeros = Vec::new();
    let mut a = ZERO_GRID_STEP;
    let mut fa = f(a);
    while zeros.len() < max_count && a <= limit {
        let b = a + ZERO_GRID_STEP;
        let fb = f(b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            let root = bisect(&f, a, b, fa);
            if root <= limit {
                zeros.push(root);
            } else {
                break;
            }
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-13 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Phase-free check used by tests: `sqrt(2/(pi x))`.
pub fn hankel_amplitude(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt()
}
