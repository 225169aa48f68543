//! The Lobachevsky function `Λ(θ) = -∫₀^θ log|2 sin t| dt`.

use std::f64::consts::{FRAC_PI_2, PI};

const TERMS: usize = 40;

/// `ζ(2k)` for `k = 1..=TERMS`.
fn zeta_even() -> &'static [f64; TERMS] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut z = [0.0; TERMS];
        let p2 = PI * PI;
        z[0] = p2 / 6.0;
        z[1] = p2 * p2 / 90.0;
        z[2] = p2 * p2 * p2 / 945.0;
        z[3] = p2 * p2 * p2 * p2 / 9450.0;
        for (k, slot) in z.iter_mut().enumerate().skip(4) {
            let s = 2 * (k as i32 + 1);
            // terms beyond n = 60 are below 60^-10
            *slot = (1..=60).rev().map(|n| (n as f64).powi(-s)).sum();
        }
        z
    })
}

/// Series valid on `[0, π/2]`:
/// `Λ(θ) = θ - θ log(2θ) + Σ ζ(2k) θ^(2k+1) / (k (2k+1) π^(2k))`.
fn series(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let z = zeta_even();
    let r = (theta / PI) * (theta / PI);
    let mut pow = theta;
    let mut sum = 0.0;
    for (i, &zk) in z.iter().enumerate() {
        let k = (i + 1) as f64;
        pow *= r;
        sum += zk * pow / (k * (2.0 * k + 1.0));
    }
    theta - theta * (2.0 * theta).ln() + sum
}

/// `Λ(θ)` for any finite `θ`, reduced to `[0, π/2]` by π-periodicity and
/// oddness.
pub fn lobachevsky(theta: f64) -> f64 {
    assert!(theta.is_finite(), "Λ of a non-finite angle");
    let mut x = theta.rem_euclid(PI);
    if x > FRAC_PI_2 {
        x -= PI;
    }
    if x < 0.0 {
        -series(-x)
    } else {
        series(x)
    }
}

/// `Λ'(θ) = -log|2 sin θ|`; infinite at multiples of π.
pub fn lobachevsky_derivative(theta: f64) -> f64 {
    -(2.0 * theta.sin()).abs().ln()
}

/// `Λ''(θ) = -cot θ`.
pub fn lobachevsky_second_derivative(theta: f64) -> f64 {
    -theta.cos() / theta.sin()
}
