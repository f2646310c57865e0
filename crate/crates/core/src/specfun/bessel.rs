//! Integer-order Bessel functions of the first kind.
//!
//! Three regimes are used:
//!
//! * the power series when `x² < 2(n + 1)`, where terms decrease monotonically
//!   and there is no cancellation;
//! * the Hankel asymptotic expansion for `J0`/`J1` followed by forward
//!   recurrence when `x ≥ 25` and `n < x` (forward recurrence is stable below
//!   the turning point `n ≈ x`);
//! * Miller's backward recurrence, normalized with `J0 + 2 Σ J2k = 1`,
//!   everywhere else.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Below this argument (and for `n ≥ x`) Miller's algorithm is used.
const ASYMPTOTIC_MIN_X: f64 = 25.0;

/// Rescaling threshold for the backward recurrence.
const RESCALE_ABOVE: f64 = 1e250;

/// `J_order(x)` for any integer order and finite `x`.
///
/// Negative orders use `J_{-m}(x) = (-1)^m J_m(x)` and negative arguments
/// `J_m(-x) = (-1)^m J_m(x)`, both on top of the same non-negative kernel.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_j argument must be finite, got {x}"
        )));
    }
    Ok(j_int(order, x))
}

/// Shared signed-order path; `x` must be finite.
pub(crate) fn j_int(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs();
    let value = jn_kernel(n, x.abs());
    let odd = n % 2 == 1;
    let flip = odd && ((order < 0) != (x < 0.0));
    if flip {
        -value
    } else {
        value
    }
}

/// `J_n(x)` for `n ≥ 0`, `x ≥ 0`. Panics are impossible; callers guarantee finiteness.
pub(crate) fn jn_kernel(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = f64::from(n);
    if x * x < 2.0 * (nf + 1.0) {
        series(n, x)
    } else if x >= ASYMPTOTIC_MIN_X && nf < x {
        forward_from_asymptotic(n, x)
    } else {
        miller(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / f64::from(k);
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    let nf = f64::from(n);
    for k in 1..200 {
        let kf = f64::from(k);
        term *= q / (kf * (kf + nf));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel expansion `J_ν(x) = √(2/πx) (P cos χ − Q sin χ)`, `χ = x − (ν/2 + 1/4)π`.
fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu * nu);
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) * inv8x / kf;
        if next.abs() >= last || next.abs() < 1e-17 {
            // asymptotic series: stop at the smallest term
            if next.abs() < last {
                add_hankel_term(k, next, &mut p, &mut q);
            }
            break;
        }
        add_hankel_term(k, next, &mut p, &mut q);
        last = next.abs();
        term = next;
    }
    let (s, c) = x.sin_cos();
    // cos χ and sin χ from the exact phase offsets of orders 0 and 1
    let (cos_chi, sin_chi) = match nu {
        0 => ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2),
        1 => ((s - c) * FRAC_1_SQRT_2, -(c + s) * FRAC_1_SQRT_2),
        _ => {
            let chi = x - (0.5 * f64::from(nu) + 0.25) * PI;
            (chi.cos(), chi.sin())
        }
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn add_hankel_term(k: u32, term: f64, p: &mut f64, q: &mut f64) {
    // a_k enters P (even k) or Q (odd k) with sign (-1)^{floor(k/2)}
    let signed = if (k / 2) % 2 == 0 { term } else { -term };
    if k % 2 == 0 {
        *p += signed;
    } else {
        *q += signed;
    }
}

fn forward_from_asymptotic(n: u32, x: f64) -> f64 {
    let j0 = hankel(0, x);
    if n == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = hankel(1, x);
    for k in 1..n {
        let next = 2.0 * f64::from(k) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn miller_start(n: u32, x: f64) -> u32 {
    let top = f64::from(n).max(x.ceil());
    let start = top + 30.0 + 16.0 * x.cbrt();
    let start = start as u32;
    start + start % 2
}

fn miller(n: u32, x: f64) -> f64 {
    let start = miller_start(n, x);
    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut result = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, above = J_{k+1} (unnormalized)
        let below = f64::from(k) * two_over_x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == n {
            result = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            cur *= s;
            above *= s;
            result *= s;
            norm *= s;
        }
    }
    norm += cur;
    result / norm
}
