//! Validates the closed-form retarded kernel against a direct numerical
//! evaluation of its double Fourier representation,
//!
//! ```text
//! G_eps(dt, dx) = (1/4 pi^2) int dw int dk e^{-i w dt + i k dx}
//!                                    / ((w + i eps)^2 - k^2),
//! ```
//!
//! at finite regulator `eps`, extrapolated `eps -> 0`. The inner frequency
//! integral converges absolutely; the outer wavenumber integral is
//! conditionally convergent and is tamed by averaging the partial integral
//! over one full period of its slowest oscillation.

use num_complex::Complex64;
use vacline::greens::RetardedKernel;
use vacline::quad::{self, QuadConfig};

/// Inner integral over the frequency for fixed `k`.
fn inner_frequency_integral(k: f64, dt: f64, eps: f64) -> Complex64 {
    let w_max = 150.0 + 3.0 * k.abs();
    let cfg = QuadConfig {
        rel_tol: 1e-8,
        abs_tol: 1e-10,
        max_splits: 4000,
    };
    // The integrand has smooth bumps of width eps at w = +-k; seed the
    // subdivision there.
    let mut breaks = Vec::new();
    for sign in [-1.0, 1.0] {
        for spread in [10.0, 3.0, 1.0] {
            breaks.push(sign * k.abs() - spread * eps);
            breaks.push(sign * k.abs() + spread * eps);
        }
    }
    quad::integrate_complex(
        |w| {
            let denom = Complex64::new(w, eps).powi(2) - k * k;
            Complex64::new(0.0, -w * dt).exp() / denom
        },
        -w_max,
        w_max,
        &breaks,
        &cfg,
    )
    .unwrap()
}

/// Outer integral over the wavenumber with period-averaged truncation.
fn g_eps(dt: f64, dx: f64, eps: f64) -> f64 {
    // By symmetry of the inner integral in k the full line reduces to
    // 2 int_0^inf cos(k dx) I(k) dk.
    let outer = |k: f64| 2.0 * (k * dx).cos() * inner_frequency_integral(k, dt, eps);

    // Fixed composite panels short enough for the fastest oscillation.
    let fast = (dt.abs() + dx.abs()).max(1.0);
    let panel = (std::f64::consts::PI / (6.0 * fast)).min(0.25);
    let cfg = QuadConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        max_splits: 200,
    };

    let k_core = 40.0;
    let slow = {
        let diff = (dt.abs() - dx.abs()).abs();
        if diff < 0.2 {
            dt.abs() + dx.abs()
        } else {
            diff.min(dt.abs() + dx.abs())
        }
    };
    let avg_window = 2.0 * std::f64::consts::PI / slow.max(0.05);

    // Integrate the core exactly, then average the running integral over
    // one period of the slowest tail oscillation.
    let mut total = Complex64::ZERO;
    let mut k = 0.0;
    while k < k_core {
        let hi = (k + panel).min(k_core);
        total += quad::integrate_complex(&outer, k, hi, &[], &cfg).unwrap();
        k = hi;
    }
    let mut averaged = Complex64::ZERO;
    let mut running = total;
    let mut count = 0;
    while k < k_core + avg_window {
        let hi = k + panel;
        running += quad::integrate_complex(&outer, k, hi, &[], &cfg).unwrap();
        averaged += running;
        count += 1;
        k = hi;
    }
    let value = averaged / count as f64 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    value.re
}

/// Richardson extrapolation of the regulator to zero through
/// `eps in {0.4, 0.2, 0.1}`: two levels kill the linear and quadratic
/// terms of `G(eps)`.
fn fourier_kernel_oracle(dt: f64, dx: f64) -> f64 {
    let g1 = g_eps(dt, dx, 0.4);
    let g2 = g_eps(dt, dx, 0.2);
    let g3 = g_eps(dt, dx, 0.1);
    let a1 = 2.0 * g2 - g1;
    let b1 = 2.0 * g3 - g2;
    (4.0 * b1 - a1) / 3.0
}

#[test]
fn kernel_matches_fourier_oracle_inside_the_cone() {
    let oracle = fourier_kernel_oracle(2.0, 1.0);
    let closed = RetardedKernel.eval(2.0, 1.0);
    assert!(
        (oracle - closed).abs() < 0.02,
        "oracle {oracle:.4} vs closed form {closed}"
    );
}

#[test]
fn kernel_matches_fourier_oracle_outside_the_cone() {
    let oracle = fourier_kernel_oracle(1.0, 2.0);
    assert!(oracle.abs() < 0.02, "spacelike oracle {oracle:.4}");
    assert_eq!(RetardedKernel.eval(1.0, 2.0), 0.0);
}

#[test]
fn kernel_matches_fourier_oracle_before_the_source() {
    let oracle = fourier_kernel_oracle(-1.0, 0.3);
    assert!(oracle.abs() < 0.02, "pre-source oracle {oracle:.4}");
    assert_eq!(RetardedKernel.eval(-1.0, 0.3), 0.0);
}
