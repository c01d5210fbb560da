//! Time-dependent right-hand sides. The surface forcing is separable: a
//! fixed mass-weighted spatial pattern scaled by a sum of sine modes that
//! cuts off after the excitation window.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TimeSignal {
    Zero,
    Constant(f64),
    /// Σ_k amps[k] · sin(2π(k+1) t / t_e) for t ≤ t_excit, zero afterwards.
    ModeSum {
        amps: Vec<f64>,
        t_e: f64,
        t_excit: f64,
    },
}

impl TimeSignal {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeSignal::Zero => 0.0,
            TimeSignal::Constant(v) => *v,
            TimeSignal::ModeSum { amps, t_e, t_excit } => {
                if t > *t_excit {
                    return 0.0;
                }
                let base = 2.0 * std::f64::consts::PI * t / t_e;
                amps.iter()
                    .enumerate()
                    .map(|(k, &a)| a * ((k + 1) as f64 * base).sin())
                    .sum()
            }
        }
    }
}

/// F(t) = time(t) · spatial, with `spatial` already mass-weighted.
#[derive(Debug, Clone)]
pub struct Load {
    pub spatial: Vec<f64>,
    pub time: TimeSignal,
}

impl Load {
    pub fn zero(dim: usize) -> Self {
        Load {
            spatial: vec![0.0; dim],
            time: TimeSignal::Zero,
        }
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let g = self.time.eval(t);
        if g == 0.0 {
            out.fill(0.0);
        } else {
            for (o, &s) in out.iter_mut().zip(&self.spatial) {
                *o = g * s;
            }
        }
    }

    pub fn norm_at(&self, t: f64) -> f64 {
        let g = self.time.eval(t);
        g.abs() * self.spatial.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_sum_vanishes_at_zero_and_after_cutoff() {
        let sig = TimeSignal::ModeSum {
            amps: vec![1.0, 0.5, 0.25],
            t_e: 0.1,
            t_excit: 0.1,
        };
        assert_eq!(sig.eval(0.0), 0.0);
        assert_eq!(sig.eval(0.1000001), 0.0);
        assert!(sig.eval(0.025) != 0.0);
    }

    #[test]
    fn single_mode_peak() {
        let sig = TimeSignal::ModeSum {
            amps: vec![1.0],
            t_e: 0.1,
            t_excit: 0.1,
        };
        assert!((sig.eval(0.025) - 1.0).abs() < 1e-15);
    }
}
