//! Surface forcing: a Gaussian envelope in x carrying a weighted sum of sine
//! modes that switches off after the excitation window.

use crate::assembly::TimeSignal;

/// Mode amplitudes A·exp(−10((k−1)/n_f)²) for k = 1..n_f.
pub fn mode_amplitudes(amplitude: f64, n_modes: usize) -> Vec<f64> {
    (0..n_modes)
        .map(|k| {
            let r = k as f64 / n_modes as f64;
            amplitude * (-10.0 * r * r).exp()
        })
        .collect()
}

/// Spatial envelope exp(−100((x−x₀)/l)²).
pub fn envelope(x: f64, x0: f64, l: f64) -> f64 {
    let r = (x - x0) / l;
    (-100.0 * r * r).exp()
}

pub fn time_signal(amplitude: f64, n_modes: usize, t_e: f64, t_excit: f64) -> TimeSignal {
    TimeSignal::ModeSum {
        amps: mode_amplitudes(amplitude, n_modes),
        t_e,
        t_excit,
    }
}

/// Pointwise forcing value f_s(x, t).
pub fn excitation_value(
    x: f64,
    t: f64,
    amplitude: f64,
    n_modes: usize,
    t_e: f64,
    t_excit: f64,
    x0: f64,
    l: f64,
) -> f64 {
    time_signal(amplitude, n_modes, t_e, t_excit).eval(t) * envelope(x, x0, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_zero_and_after_cutoff() {
        assert_eq!(excitation_value(0.03, 0.0, 1000.0, 20, 0.1, 0.1, 0.0, 0.1), 0.0);
        assert_eq!(excitation_value(0.03, 0.11, 1000.0, 20, 0.1, 0.1, 0.0, 0.1), 0.0);
        assert!(excitation_value(0.0, 0.013, 1000.0, 20, 0.1, 0.1, 0.0, 0.1) != 0.0);
    }

    #[test]
    fn single_mode_quarter_period_peak() {
        // x = x₀, t = T_e/4, n_f = 1, A = 1 → exp(0)·sin(π/2) = 1
        let v = excitation_value(0.2, 0.025, 1.0, 1, 0.1, 0.1, 0.2, 0.1);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn envelope_decays_with_distance() {
        let near = envelope(0.0, 0.0, 0.1);
        let far = envelope(0.05, 0.0, 0.1);
        assert_eq!(near, 1.0);
        assert!(far < near && far > 0.0);
    }
}
