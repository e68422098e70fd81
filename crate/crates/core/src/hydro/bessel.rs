//! Order-zero Bessel function of the first kind.
//!
//! Three regimes, each accurate to about 1e-15 absolute:
//! power series below 8, Miller backward recurrence on [8, 25),
//! Hankel asymptotic expansion from 25 up.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// J0(x).
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        series(ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax)
    } else {
        asymptotic(ax)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term.abs() < 1e-18 {
            return sum;
        }
        k += 1.0;
    }
}

fn miller(x: f64) -> f64 {
    // Start well above x so the seeded tail has decayed below f64 resolution.
    let mut order = (x as usize + 40) & !1;
    let mut next = 0.0; // J_{order+1}
    let mut cur = 1e-300; // J_{order}
    let mut j0 = 0.0;
    let mut norm = 0.0;
    while order > 0 {
        let prev = 2.0 * order as f64 / x * cur - next;
        next = cur;
        cur = prev;
        order -= 1;
        if order.is_multiple_of(2) {
            norm += if order == 0 { cur } else { 2.0 * cur };
        }
        if order == 0 {
            j0 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 / norm
}

fn asymptotic(x: f64) -> f64 {
    // J0(x) = sqrt(2/(πx)) (P cos χ − Q sin χ), χ = x − π/4, with
    // a_m = Π_{i=1..m} (2i−1)² / (m! (8x)^m); P = a_0 − a_2 + a_4 …,
    // Q = −a_1 + a_3 − ….
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev_abs = f64::INFINITY;
    for m in 1..200usize {
        let odd = (2 * m - 1) as f64;
        a *= odd * odd / (m as f64 * eight_x);
        if a >= prev_abs || a < 1e-18 {
            break;
        }
        prev_abs = a;
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * a;
        } else {
            q -= sign * a;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
