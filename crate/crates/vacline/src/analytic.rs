//! Closed-form results: the Gaussian test pulse, the source term of the
//! external mode, the transmitted-wave coefficient, the dimensionless
//! prefactor `alpha`, and the mixed variance law with its peak analysis.
//!
//! Everything here is a pure function of validated specs; the quadrature
//! routes in [`crate::functionals`] exist to check these expressions
//! independently.

use crate::model::{CircuitSpec, ExternalModeSpec, GaussianPulseSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Amplitude of the transmitted quantum field downstream of the source
/// region: the field there is `g_amp * a * exp(-i w (t - x/c)) + h.c.`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmittedCoefficient {
    pub g_amp: Complex64,
}

/// `sin(u)/u` with a series branch near zero so the `ell -> 0` limit stays
/// fully accurate instead of cancelling.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// Incident right-moving Gaussian packet `A exp(-(x-t)^2 / (2 sigma^2))`
/// with `A = sqrt(2 sigma E0 / sqrt(pi))`, written on the light cone
/// coordinate `x - t` (unit wave speed).
pub fn classical_pulse(t: f64, x: f64, pulse: &GaussianPulseSpec) -> f64 {
    classical_pulse_on_cone(x - t, pulse)
}

/// Same packet as a function of the light-cone coordinate `u = x - c t`.
pub fn classical_pulse_on_cone(u: f64, pulse: &GaussianPulseSpec) -> f64 {
    let s = pulse.sigma();
    pulse.amplitude() * (-u * u / (2.0 * s * s)).exp()
}

/// Energy and momentum carried by the incident packet: `H_c = E0` for any
/// line, and `P_c = E0 / c`, which reduces to the `H_c = P_c = E0` of the
/// unit-speed convention.
pub fn pulse_energy_momentum(pulse: &GaussianPulseSpec, circuit: &CircuitSpec) -> (f64, f64) {
    (pulse.e0(), pulse.e0() / circuit.wave_speed())
}

/// Source term produced by the external mode with (coherent) amplitude `a`:
/// `f = -i w_e sqrt(gamma_C) (phi a e^{-i w_e t} - phi* a* e^{+i w_e t})`,
/// which is `2 w_e sqrt(gamma_C) Im(phi a e^{-i w_e t})` and always real.
pub fn source_term(t: f64, mode: &ExternalModeSpec, circuit: &CircuitSpec, a: Complex64) -> f64 {
    let z = mode.phi() * a * Complex64::new(0.0, -mode.omega_e() * t).exp();
    2.0 * mode.omega_e() * circuit.gamma_c().sqrt() * z.im
}

/// Transmitted-wave coefficient for `x > ell/2`:
/// `g_amp = -sqrt(gamma_C) c^2 sin(w ell / 2c) / w * phi`
/// (the familiar `-sqrt(gamma_C) sin(w ell / 2) / w * phi` at `c = 1`).
pub fn transmitted_coefficient(
    mode: &ExternalModeSpec,
    circuit: &CircuitSpec,
) -> TransmittedCoefficient {
    let c = circuit.wave_speed();
    let w = mode.omega_e();
    let g_amp = -circuit.gamma_c().sqrt() * c * c * (w * mode.ell() / (2.0 * c)).sin() / w
        * mode.phi();
    TransmittedCoefficient { g_amp }
}

/// Dimensionless prefactor
/// `alpha = 4 sqrt(pi) [sinc(w ell / 2c)]^2 c ell^2 gamma_C |phi|^2`
/// (natural units, `hbar = 1`). Vanishes at the interference zeros
/// `ell = 2 pi n c / w` and when the coupling `phi` is switched off.
pub fn alpha(mode: &ExternalModeSpec, circuit: &CircuitSpec) -> f64 {
    let c = circuit.wave_speed();
    let u = mode.omega_e() * mode.ell() / (2.0 * c);
    let s = sinc(u);
    4.0 * PI.sqrt() * s * s * c * mode.ell() * mode.ell() * circuit.gamma_c()
        * mode.phi().norm_sqr()
}

/// Variance shift of the transmitted pulse's energy (equal to that of its
/// momentum at unit wave speed):
/// `<H_m^2> = w_e E0 alpha (w_e sigma / c)^3 exp(-(w_e sigma / c)^2)`.
pub fn mixed_variance(
    pulse: &GaussianPulseSpec,
    mode: &ExternalModeSpec,
    circuit: &CircuitSpec,
) -> f64 {
    let s = mode.omega_e() * pulse.sigma() / circuit.wave_speed();
    mode.omega_e() * pulse.e0() * alpha(mode, circuit) * s.powi(3) * (-s * s).exp()
}

/// Pulse length maximizing [`mixed_variance`] over `sigma`:
/// `sigma* = sqrt(3/2) c / w_e`.
pub fn peak_sigma(mode: &ExternalModeSpec, circuit: &CircuitSpec) -> f64 {
    (1.5f64).sqrt() * circuit.wave_speed() / mode.omega_e()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RawConfig;
    use proptest::prelude::*;

    fn p1() -> (CircuitSpec, ExternalModeSpec, GaussianPulseSpec) {
        let m = RawConfig::default().validate().unwrap();
        (m.circuit, m.mode, m.pulse)
    }

    fn mode_with(omega_e: f64, phi: Complex64, ell: f64) -> ExternalModeSpec {
        ExternalModeSpec::new(omega_e, phi, ell).unwrap()
    }

    #[test]
    fn pulse_peak_amplitude() {
        let (_, _, pulse) = p1();
        // A = sqrt(2 / sqrt(pi)), evaluated independently of amplitude().
        let expected = (2.0 / PI.sqrt()).sqrt();
        assert!((expected - 1.062_251_932_027_197).abs() < 1e-15);
        assert!((classical_pulse(3.0, 3.0, &pulse) - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_energy_pulse_vanishes() {
        let pulse = GaussianPulseSpec::new(0.0, 1.0).unwrap();
        assert_eq!(classical_pulse(0.4, -2.0, &pulse), 0.0);
    }

    #[test]
    fn pulse_is_a_right_mover() {
        let (_, _, pulse) = p1();
        for delta in [0.1, 1.0, -5.5, 123.0] {
            let a = classical_pulse(2.0, 0.5, &pulse);
            let b = classical_pulse(2.0 + delta, 0.5 + delta, &pulse);
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn pulse_energy_momentum_is_e0() {
        let (circuit, _, _) = p1();
        let pulse = GaussianPulseSpec::new(2.5, 0.3).unwrap();
        assert_eq!(pulse_energy_momentum(&pulse, &circuit), (2.5, 2.5));
        let zero = GaussianPulseSpec::new(0.0, 0.3).unwrap();
        assert_eq!(pulse_energy_momentum(&zero, &circuit), (0.0, 0.0));
        // Slower line: momentum picks up the 1/c factor.
        let slow = CircuitSpec::new(4.0, 1.0).unwrap();
        assert_eq!(pulse_energy_momentum(&pulse, &slow), (2.5, 5.0));
    }

    #[test]
    fn source_term_vanishes_without_drive() {
        let (circuit, mode, _) = p1();
        for t in [-3.0, 0.0, 0.7, 42.0] {
            assert_eq!(source_term(t, &mode, &circuit, Complex64::ZERO), 0.0);
        }
    }

    #[test]
    fn source_term_matches_complex_form() {
        // Oracle: evaluate -i w sqrt(gC) (phi a e^{-iwt} - c.c.) literally and
        // check it is real and equal to the production expression.
        let (circuit, _, _) = p1();
        let mode = mode_with(1.3, Complex64::new(0.4, -0.9), 1.0);
        let a = Complex64::new(-0.2, 1.1);
        for t in [0.0, 0.3, 2.9, -7.7] {
            let z = mode.phi() * a * Complex64::new(0.0, -mode.omega_e() * t).exp();
            let literal =
                Complex64::new(0.0, -mode.omega_e()) * circuit.gamma_c().sqrt() * (z - z.conj());
            assert!(literal.im.abs() < 1e-14);
            assert!((literal.re - source_term(t, &mode, &circuit, a)).abs() < 1e-14);
        }
    }

    #[test]
    fn source_term_reference_points() {
        let (circuit, mode, _) = p1();
        let one = Complex64::new(1.0, 0.0);
        assert!(source_term(0.0, &mode, &circuit, one).abs() < 1e-15);
        let f = source_term(PI / 2.0, &mode, &circuit, one);
        assert!((f + 2.0).abs() < 1e-14, "f(pi/2) = {f}");
    }

    #[test]
    fn transmitted_coefficient_reference_point() {
        let (circuit, mode, _) = p1();
        let g = transmitted_coefficient(&mode, &circuit).g_amp;
        assert!((g.re + 0.5f64.sin()).abs() < 1e-15);
        assert!((g.re + 0.479_425_538_604_203).abs() < 1e-14);
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn transmitted_coefficient_sinc_zero() {
        let (circuit, _, _) = p1();
        let mode = mode_with(1.0, Complex64::ONE, 2.0 * PI);
        let g = transmitted_coefficient(&mode, &circuit).g_amp;
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn transmitted_coefficient_small_ell_expansion() {
        let (circuit, _, _) = p1();
        let ell = 1e-3;
        let mode = mode_with(1.0, Complex64::ONE, ell);
        let g = transmitted_coefficient(&mode, &circuit).g_amp;
        let leading = -circuit.gamma_c().sqrt() * (ell / 2.0);
        // Next order is (w ell/2)^3 / 6w ~ 2e-11.
        assert!((g.re - leading).abs() < 1e-10);
    }

    #[test]
    fn alpha_reference_point() {
        let (circuit, mode, _) = p1();
        let a = alpha(&mode, &circuit);
        // Independent route: 4 sqrt(pi) (sin 0.5 / 0.5)^2 = 16 sqrt(pi) sin^2(0.5).
        let oracle = 16.0 * PI.sqrt() * 0.5f64.sin().powi(2);
        assert!(((a - oracle) / oracle).abs() < 1e-15);
        assert!((a - 6.518_343_585_731_214).abs() < 1e-12, "alpha = {a}");
    }

    #[test]
    fn alpha_zeros() {
        let (circuit, _, _) = p1();
        let sinc_zero = mode_with(1.0, Complex64::ONE, 2.0 * PI);
        assert!(alpha(&sinc_zero, &circuit) < 1e-28);
        let uncoupled = mode_with(1.0, Complex64::ZERO, 1.0);
        assert_eq!(alpha(&uncoupled, &circuit), 0.0);
    }

    #[test]
    fn sinc_series_branch_is_continuous() {
        for u in [9.9e-5, 1.01e-4, 1e-6, 5e-5] {
            let series = sinc(u);
            let direct = u.sin() / u;
            assert!((series - direct).abs() < 1e-15, "u = {u}");
        }
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn mixed_variance_reference_point() {
        let (circuit, mode, pulse) = p1();
        let v = mixed_variance(&pulse, &mode, &circuit);
        let oracle = 16.0 * PI.sqrt() * 0.5f64.sin().powi(2) * (-1.0f64).exp();
        assert!(((v - oracle) / oracle).abs() < 1e-14);
        assert!((v - 2.397_964_595_682_254).abs() < 1e-12, "variance = {v}");
    }

    #[test]
    fn mixed_variance_vanishes_without_signal() {
        let (circuit, mode, _) = p1();
        let pulse = GaussianPulseSpec::new(0.0, 1.0).unwrap();
        assert_eq!(mixed_variance(&pulse, &mode, &circuit), 0.0);
    }

    #[test]
    fn mixed_variance_long_pulse_suppression() {
        let (circuit, mode, _) = p1();
        let peak = mixed_variance(
            &GaussianPulseSpec::new(1.0, peak_sigma(&mode, &circuit)).unwrap(),
            &mode,
            &circuit,
        );
        let mut prev = peak;
        for sigma in [2.0, 4.0, 8.0, 16.0, 32.0] {
            let v = mixed_variance(&GaussianPulseSpec::new(1.0, sigma).unwrap(), &mode, &circuit);
            assert!(v < prev, "monotone decay past the peak, sigma = {sigma}");
            prev = v;
        }
        assert!(prev < 1e-300 * peak.max(1.0) || prev < peak * 1e-12);
    }

    #[test]
    fn peak_sigma_reference_points() {
        let (circuit, mode, _) = p1();
        assert!((peak_sigma(&mode, &circuit) - 1.224_744_871_391_589).abs() < 1e-15);
        let mode2 = mode_with(2.0, Complex64::ONE, 1.0);
        assert!((peak_sigma(&mode2, &circuit) - 0.612_372_435_695_794).abs() < 1e-15);
    }

    #[test]
    fn peak_sigma_agrees_with_numeric_maximizer() {
        // Golden-section search over sigma as an independent oracle.
        let (circuit, mode, _) = p1();
        let f = |sigma: f64| {
            mixed_variance(&GaussianPulseSpec::new(1.0, sigma).unwrap(), &mode, &circuit)
        };
        let (mut a, mut b) = (0.2, 4.0);
        let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
        while b - a > 1e-10 {
            let x1 = b - inv_phi * (b - a);
            let x2 = a + inv_phi * (b - a);
            if f(x1) > f(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        let numeric = 0.5 * (a + b);
        assert!((numeric - peak_sigma(&mode, &circuit)).abs() < 1e-8);
    }

    #[test]
    fn variance_at_peak_matches_closed_form() {
        let (circuit, mode, _) = p1();
        let sigma_star = peak_sigma(&mode, &circuit);
        let v = mixed_variance(
            &GaussianPulseSpec::new(1.0, sigma_star).unwrap(),
            &mode,
            &circuit,
        );
        // (3/2)^{3/2} e^{-3/2} = 0.409916...
        let factor = 1.5f64.powf(1.5) * (-1.5f64).exp();
        assert!((factor - 0.409_916_278_941_860).abs() < 1e-12);
        let expected = mode.omega_e() * alpha(&mode, &circuit) * factor;
        assert!(((v - expected) / expected).abs() < 1e-14);
    }

    #[test]
    fn variance_monotone_around_peak_on_grid() {
        let (circuit, mode, _) = p1();
        let sigma_star = peak_sigma(&mode, &circuit);
        let f = |sigma: f64| {
            mixed_variance(&GaussianPulseSpec::new(1.0, sigma).unwrap(), &mode, &circuit)
        };
        // >= 100 points on each side of the peak.
        let n = 120;
        for i in 1..n {
            let lo = 0.01 + (sigma_star - 0.02) * (i - 1) as f64 / (n - 1) as f64;
            let hi = 0.01 + (sigma_star - 0.02) * i as f64 / (n - 1) as f64;
            assert!(f(hi) > f(lo), "increasing below the peak at {hi}");
        }
        for i in 1..n {
            let lo = sigma_star + 0.02 + 8.0 * (i - 1) as f64 / (n - 1) as f64;
            let hi = sigma_star + 0.02 + 8.0 * i as f64 / (n - 1) as f64;
            assert!(f(hi) < f(lo), "decreasing above the peak at {hi}");
        }
    }

    proptest! {
        #[test]
        fn variance_linear_in_pulse_energy(
            e0 in 0.0f64..50.0,
            k in 0.0f64..20.0,
            sigma in 0.05f64..5.0,
        ) {
            let (circuit, mode, _) = p1();
            let base = mixed_variance(
                &GaussianPulseSpec::new(e0, sigma).unwrap(), &mode, &circuit);
            let scaled = mixed_variance(
                &GaussianPulseSpec::new(k * e0, sigma).unwrap(), &mode, &circuit);
            prop_assert!((scaled - k * base).abs() <= 1e-12 * base.max(1.0) * k.max(1.0));
        }

        #[test]
        fn alpha_and_variance_ignore_flux_phase(
            theta in 0.0f64..(2.0 * PI),
            ell in 0.05f64..6.0,
            omega in 0.2f64..3.0,
        ) {
            let (circuit, _, pulse) = p1();
            let phi = Complex64::new(0.8, -0.3);
            let rotated = phi * Complex64::new(0.0, theta).exp();
            let m0 = mode_with(omega, phi, ell);
            let m1 = mode_with(omega, rotated, ell);
            let a0 = alpha(&m0, &circuit);
            let a1 = alpha(&m1, &circuit);
            prop_assert!((a0 - a1).abs() <= 1e-12 * a0.max(1.0));
            let v0 = mixed_variance(&pulse, &m0, &circuit);
            let v1 = mixed_variance(&pulse, &m1, &circuit);
            prop_assert!((v0 - v1).abs() <= 1e-12 * v0.max(1.0));
        }
    }
}
