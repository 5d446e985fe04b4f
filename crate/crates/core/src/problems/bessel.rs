//! Bessel functions of orders 0 and 1 for positive real arguments.
//!
//! Below [`ASYMPTOTIC_FROM`] the `J_n` come from Miller's backward
//! recurrence normalized by `J_0 + 2 Σ J_2k = 1`, and `Y_0`, `Y_1` from
//! their Neumann series in the same `J_n`. Above it the Hankel asymptotic
//! expansions are summed until the terms stop shrinking.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_traits::Float;

use crate::scalar::C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const ASYMPTOTIC_FROM: f64 = 25.0;
const MAX_ORDER: usize = 128;

/// `(J_0, J_1, Y_0, Y_1)` at `x > 0`.
pub fn bessel01(x: f64) -> [f64; 4] {
    debug_assert!(x > 0.0);
    if x >= ASYMPTOTIC_FROM {
        let (j0, y0) = hankel_asymptotic(0.0, x);
        let (j1, y1) = hankel_asymptotic(1.0, x);
        return [j0, j1, y0, y1];
    }
    let mut j = [0.0f64; MAX_ORDER + 2];
    let start = {
        let m = (x + 30.0 + Float::sqrt(60.0 * x)) as usize;
        (m + m % 2).min(MAX_ORDER)
    };
    j[start] = 1e-30;
    for n in (1..=start).rev() {
        j[n - 1] = 2.0 * n as f64 / x * j[n] - j[n + 1];
        if Float::abs(j[n - 1]) > 1e250 {
            for v in j[n - 1..=start].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * j[2..=start].iter().step_by(2).sum::<f64>();
    for v in j[..=start].iter_mut() {
        *v /= norm;
    }
    let log_term = Float::ln(x / 2.0) + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k < start {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = 2.0 / PI * log_term * j[0] - 4.0 / PI * s0;
    let y1 = -2.0 / (PI * x) * j[0] + 2.0 / PI * log_term * j[1] + 2.0 / PI * s1;
    [j[0], j[1], y0, y1]
}

/// `(J_ν, Y_ν)` from the large-argument expansion.
fn hankel_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if Float::abs(term) >= last || Float::abs(term) < 1e-18 {
            break;
        }
        last = Float::abs(term);
        // a_k / x^k enters Q for odd k, P for even k, with alternating signs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = x - nu * FRAC_PI_2 - FRAC_PI_4;
    let amp = Float::sqrt(2.0 / (PI * x));
    let (s, c) = Float::sin_cos(chi);
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// `H_0^(1)(x) = J_0(x) + i Y_0(x)`.
pub fn hankel1_0(x: f64) -> C64 {
    let [j0, _, y0, _] = bessel01(x);
    C64::new(j0, y0)
}

/// `H_1^(1)(x) = J_1(x) + i Y_1(x)`.
pub fn hankel1_1(x: f64) -> C64 {
    let [_, j1, _, y1] = bessel01(x);
    C64::new(j1, y1)
}

/// Both Hankel functions at once.
pub fn hankel1_01(x: f64) -> (C64, C64) {
    let [j0, j1, y0, y1] = bessel01(x);
    (C64::new(j0, y0), C64::new(j1, y1))
}
