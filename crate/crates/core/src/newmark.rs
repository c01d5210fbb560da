//! Implicit Newmark time integration (average acceleration by default) of
//! M a″ + C a′ + K a = F(t). The effective matrix is factorized once and
//! reused for every step.

use crate::assembly::SystemMatrices;
use crate::error::{Error, Result};
use crate::sparse::{factorize, Factorization, SparseMatrixCsr};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewmarkParams {
    pub gamma: f64,
    pub beta: f64,
    pub dt: f64,
    pub n_steps: usize,
}

impl NewmarkParams {
    /// Average acceleration: γ = 1/2, β = 1/4, unconditionally stable.
    pub fn average_acceleration(dt: f64, n_steps: usize) -> Self {
        NewmarkParams {
            gamma: 0.5,
            beta: 0.25,
            dt,
            n_steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.gamma >= 0.5 && 2.0 * self.beta >= self.gamma) {
            return Err(Error::config(format!(
                "unconditional stability needs 2β ≥ γ ≥ 1/2, got γ = {}, β = {}",
                self.gamma, self.beta
            )));
        }
        Ok(())
    }
}

/// Displacement-like, velocity-like and acceleration-like vectors at time t.
#[derive(Debug, Clone)]
pub struct State {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn zero(dim: usize) -> Self {
        State {
            u: vec![0.0; dim],
            v: vec![0.0; dim],
            a: vec![0.0; dim],
            t: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(|&x| x == 0.0)
            && self.v.iter().all(|&x| x == 0.0)
            && self.a.iter().all(|&x| x == 0.0)
    }

    /// State with a consistent initial acceleration M a₀ = F(0) − C v₀ − K u₀
    /// (requires an invertible mass matrix).
    pub fn consistent(sys: &SystemMatrices, u0: Vec<f64>, v0: Vec<f64>) -> Result<Self> {
        let dim = sys.dim;
        if u0.len() != dim || v0.len() != dim {
            return Err(Error::config("initial state dimension mismatch"));
        }
        let mut rhs = vec![0.0; dim];
        sys.load.eval_into(0.0, &mut rhs);
        sys.c.matvec_add(-1.0, &v0, &mut rhs)?;
        sys.k.matvec_add(-1.0, &u0, &mut rhs)?;
        let mf = factorize(&sys.m)?;
        let a0 = mf.solve(&rhs)?;
        Ok(State {
            u: u0,
            v: v0,
            a: a0,
            t: 0.0,
        })
    }
}

/// Factorization of A_eff = M + γ·dt·C + β·dt²·K.
pub fn effective_matrix(sys: &SystemMatrices, p: &NewmarkParams) -> Result<Factorization> {
    p.validate()?;
    let a_eff = SparseMatrixCsr::linear_combination(&[
        (1.0, &sys.m),
        (p.gamma * p.dt, &sys.c),
        (p.beta * p.dt * p.dt, &sys.k),
    ])?;
    factorize(&a_eff)
}

pub struct NewmarkSolver<'a> {
    sys: &'a SystemMatrices,
    params: NewmarkParams,
    fact: Factorization,
    rhs: Vec<f64>,
    u_pred: Vec<f64>,
    v_pred: Vec<f64>,
}

impl<'a> NewmarkSolver<'a> {
    pub fn new(sys: &'a SystemMatrices, params: NewmarkParams) -> Result<Self> {
        let fact = effective_matrix(sys, &params)?;
        Ok(NewmarkSolver {
            sys,
            params,
            fact,
            rhs: vec![0.0; sys.dim],
            u_pred: vec![0.0; sys.dim],
            v_pred: vec![0.0; sys.dim],
        })
    }

    pub fn params(&self) -> &NewmarkParams {
        &self.params
    }

    /// Advance one step: predictors, solve for a⁺, correct u and v.
    pub fn step(&mut self, s: &mut State) -> Result<()> {
        let dt = self.params.dt;
        let (gamma, beta) = (self.params.gamma, self.params.beta);
        let dim = self.sys.dim;
        for i in 0..dim {
            self.u_pred[i] = s.u[i] + dt * s.v[i] + (0.5 - beta) * dt * dt * s.a[i];
            self.v_pred[i] = s.v[i] + (1.0 - gamma) * dt * s.a[i];
        }
        let t_next = s.t + dt;
        self.sys.load.eval_into(t_next, &mut self.rhs);
        self.sys.c.matvec_add(-1.0, &self.v_pred, &mut self.rhs)?;
        self.sys.k.matvec_add(-1.0, &self.u_pred, &mut self.rhs)?;
        self.fact.solve_in_place(&mut self.rhs)?;
        for i in 0..dim {
            s.a[i] = self.rhs[i];
            s.u[i] = self.u_pred[i] + beta * dt * dt * s.a[i];
            s.v[i] = self.v_pred[i] + gamma * dt * s.a[i];
        }
        s.t = t_next;
        Ok(())
    }
}

/// Run n_steps from `state`, invoking `on_sample(step_index, state)` at t = 0
/// and then every `sample_stride` steps (the final step is always sampled).
/// Starting from the zero state requires F(0) = 0 so that a(0) = 0 is
/// consistent.
pub fn run(
    sys: &SystemMatrices,
    params: NewmarkParams,
    mut state: State,
    sample_stride: usize,
    mut on_sample: impl FnMut(usize, &State) -> Result<()>,
) -> Result<State> {
    if state.is_zero() && sys.load.norm_at(0.0) != 0.0 {
        return Err(Error::Numerical(
            "zero initial state with nonzero initial load: a(0) = 0 is inconsistent".into(),
        ));
    }
    let stride = sample_stride.max(1);
    let mut solver = NewmarkSolver::new(sys, params)?;
    on_sample(0, &state)?;
    for step in 1..=params.n_steps {
        solver.step(&mut state)?;
        if step % stride == 0 || step == params.n_steps {
            on_sample(step, &state)?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{Load, TimeSignal};
    use crate::sparse::TripletBuilder;

    fn scalar_system(m: f64, c: f64, k: f64) -> SystemMatrices {
        let one = |v: f64| {
            let mut b = TripletBuilder::new(1);
            b.add(0, 0, v);
            b.compile().unwrap()
        };
        SystemMatrices {
            dim: 1,
            m: one(m),
            c: one(c),
            k: one(k),
            load: Load::zero(1),
        }
    }

    #[test]
    fn effective_matrix_scalar_value() {
        let sys = scalar_system(1.0, 0.0, 1.0);
        let p = NewmarkParams {
            gamma: 0.5,
            beta: 0.25,
            dt: 1.0,
            n_steps: 1,
        };
        let f = effective_matrix(&sys, &p).unwrap();
        let x = f.solve(&[1.0]).unwrap();
        assert!((x[0] - 1.0 / 1.25).abs() < 1e-15);
    }

    #[test]
    fn zero_state_stays_zero() {
        let sys = scalar_system(1.0, 0.5, 2.0);
        let p = NewmarkParams::average_acceleration(0.1, 50);
        let end = run(&sys, p, State::zero(1), 1, |_, _| Ok(())).unwrap();
        assert!(end.is_zero());
    }

    #[test]
    fn harmonic_oscillator_conserves_energy_per_step() {
        let sys = scalar_system(1.0, 0.0, 1.0);
        let p = NewmarkParams::average_acceleration(0.05, 10_000);
        // u₀ = 1, consistent a₀ = −k/m·u₀
        let state = State {
            u: vec![1.0],
            v: vec![0.0],
            a: vec![-1.0],
            t: 0.0,
        };
        let e0 = 0.5;
        let mut worst: f64 = 0.0;
        run(&sys, p, state, 1, |_, s| {
            let e = 0.5 * s.v[0] * s.v[0] + 0.5 * s.u[0] * s.u[0];
            worst = worst.max((e - e0).abs());
            Ok(())
        })
        .unwrap();
        assert!(worst < 1e-12, "energy drift {worst}");
    }

    #[test]
    fn damped_velocity_decays_monotonically_to_exponential() {
        let sys = scalar_system(1.0, 1.0, 0.0);
        let dt = 0.01;
        let p = NewmarkParams::average_acceleration(dt, 100);
        let state = State {
            u: vec![0.0],
            v: vec![1.0],
            a: vec![-1.0],
            t: 0.0,
        };
        let mut prev = 1.0;
        let end = run(&sys, p, state, 1, |step, s| {
            if step > 0 {
                assert!(s.v[0] < prev, "velocity must decay monotonically");
            }
            prev = s.v[0];
            Ok(())
        })
        .unwrap();
        let exact = (-1.0_f64).exp();
        assert!(
            (end.v[0] - exact).abs() < 5.0 * dt * dt,
            "v(1) = {}, exact {exact}",
            end.v[0]
        );
    }

    #[test]
    fn linearity_in_the_load() {
        let mut sys = scalar_system(1.0, 0.3, 4.0);
        sys.load = Load {
            spatial: vec![1.0],
            time: TimeSignal::ModeSum {
                amps: vec![2.0, 1.0],
                t_e: 0.5,
                t_excit: 0.5,
            },
        };
        let p = NewmarkParams::average_acceleration(0.01, 120);
        let mut trace1 = Vec::new();
        run(&sys, p, State::zero(1), 1, |_, s| {
            trace1.push(s.u[0]);
            Ok(())
        })
        .unwrap();
        sys.load.spatial = vec![2.0];
        let mut trace2 = Vec::new();
        run(&sys, p, State::zero(1), 1, |_, s| {
            trace2.push(s.u[0]);
            Ok(())
        })
        .unwrap();
        for (a, b) in trace1.iter().zip(&trace2) {
            assert!((2.0 * a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn rejects_unstable_parameters_and_inconsistent_start() {
        let sys = scalar_system(1.0, 0.0, 1.0);
        let bad = NewmarkParams {
            gamma: 0.4,
            beta: 0.25,
            dt: 0.1,
            n_steps: 1,
        };
        assert!(effective_matrix(&sys, &bad).is_err());

        let mut forced = scalar_system(1.0, 0.0, 1.0);
        forced.load = Load {
            spatial: vec![1.0],
            time: TimeSignal::Constant(1.0),
        };
        let p = NewmarkParams::average_acceleration(0.1, 10);
        assert!(run(&forced, p, State::zero(1), 1, |_, _| Ok(())).is_err());
    }

    #[test]
    fn empty_run_samples_only_initial_state() {
        let sys = scalar_system(1.0, 0.0, 1.0);
        let p = NewmarkParams::average_acceleration(0.1, 0);
        let mut count = 0;
        run(&sys, p, State::zero(1), 1, |_, _| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }
}
