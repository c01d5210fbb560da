//! Padé rational approximation of the square root and the coefficient
//! machinery for the high-order absorbing boundary conditions.
//!
//! The (2N+1)th-order approximant of sqrt(1+X) is
//!
//! ```text
//! f(X) = 1 + (2/M) Σ_n c_n (1 - (1+c_n)/(1+c_n+X)),   M = 2N+1,
//! c_n  = tan²(nπ/M),  n = 1..N.
//! ```
//!
//! Each retained index n later carries one auxiliary boundary field; the
//! `active` subset of a [`PadeSet`] selects which indices are kept after
//! reduction (large fluid celerity lets the small-c_n fields stay null).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest accepted approximation order; tan²(nπ/M) itself stays finite for
/// any N, but beyond this the coefficient vector is no longer a sane request.
pub const MAX_ORDER: usize = 1_000_000;

/// Padé order, coefficients and the retained (active) index subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadeSet {
    order: usize,
    coeffs: Vec<f64>,
    /// Sorted 1-based indices into `coeffs`; full set when no reduction.
    active: Vec<usize>,
}

impl PadeSet {
    /// Full (unreduced) set of order N.
    pub fn full(order: usize) -> Result<Self> {
        let coeffs = pade_coefficients(order)?;
        Ok(PadeSet {
            order,
            coeffs,
            active: (1..=order).collect(),
        })
    }

    /// Reduced set keeping the suffix of indices selected by `keep_fraction`.
    pub fn reduced(order: usize, keep_fraction: f64) -> Result<Self> {
        let mut set = Self::full(order)?;
        set.active = reduction_active_set(order, keep_fraction)?;
        Ok(set)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// M = 2N + 1, the denominator of the prefactor 2/M. Reduction does not
    /// change it: dropped terms contribute zero, the weighting stays.
    pub fn m(&self) -> usize {
        2 * self.order + 1
    }

    pub fn two_over_m(&self) -> f64 {
        2.0 / self.m() as f64
    }

    /// Coefficient c_n for a 1-based index.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Sorted active indices (1-based).
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    /// Σ_{n ∈ active} c_n, the coefficient of the local ∂_t term in the
    /// boundary flux replacement.
    pub fn sum_active(&self) -> f64 {
        self.active.iter().map(|&n| self.coeff(n)).sum()
    }
}

/// c_n = tan²(nπ/(2N+1)) for n = 1..N, strictly increasing.
///
/// Evaluated on whichever side of π/4 keeps the tangent argument small:
/// tan²(θ) directly for θ ≤ π/4, 1/tan²(π/2−θ) otherwise, with the
/// complementary angle formed from exact integers so no accuracy is lost
/// as θ approaches π/2.
pub fn pade_coefficients(n_order: usize) -> Result<Vec<f64>> {
    if n_order == 0 {
        return Err(Error::config("Padé order must be at least 1"));
    }
    if n_order > MAX_ORDER {
        return Err(Error::config(format!(
            "Padé order {n_order} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let m = 2 * n_order + 1;
    let mut coeffs = Vec::with_capacity(n_order);
    for n in 1..=n_order {
        let c = if 4 * n <= m {
            let theta = n as f64 * std::f64::consts::PI / m as f64;
            let t = theta.tan();
            t * t
        } else {
            // complement: π/2 − nπ/M = (M−2n)π/(2M), an exact integer ratio
            let delta = (m - 2 * n) as f64 * std::f64::consts::PI / (2 * m) as f64;
            let t = delta.tan();
            1.0 / (t * t)
        };
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Padé approximation of sqrt(1+x) restricted to the active index set.
pub fn pade_sqrt(pade: &PadeSet, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::config(format!("pade_sqrt: non-finite argument {x}")));
    }
    let mut acc = 0.0;
    for &n in pade.active() {
        let c = pade.coeff(n);
        let denom = 1.0 + c + x;
        if denom == 0.0 {
            return Err(Error::config(format!(
                "pade_sqrt: X = {x} hits the pole 1 + c_{n} + X = 0"
            )));
        }
        acc += c * (1.0 - (1.0 + c) / denom);
    }
    Ok(1.0 + pade.two_over_m() * acc)
}

/// Absolute error table |pade_sqrt − sqrt(1+X)|, one row per order, one
/// column per grid point. All orders use their full active set.
pub fn pade_error_table(orders: &[usize], x_grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    if orders.is_empty() || x_grid.is_empty() {
        return Err(Error::config("pade_error_table: empty orders or X grid"));
    }
    if let Some(x) = x_grid.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::config(format!(
            "pade_error_table: X grid entries must be finite and nonnegative, got {x}"
        )));
    }
    let mut table = Vec::with_capacity(orders.len());
    for &order in orders {
        let set = PadeSet::full(order)?;
        let mut row = Vec::with_capacity(x_grid.len());
        for &x in x_grid {
            row.push((pade_sqrt(&set, x)? - (1.0 + x).sqrt()).abs());
        }
        table.push(row);
    }
    Ok(table)
}

/// Suffix {N−K+1, .., N} of retained indices with K = max(1, round(f·N)).
///
/// The retained indices are the K largest coefficients; c_n is increasing so
/// "keep a fraction of the last auxiliary variables" is exactly a suffix.
pub fn reduction_active_set(n_order: usize, keep_fraction: f64) -> Result<Vec<usize>> {
    if n_order == 0 {
        return Err(Error::config("Padé order must be at least 1"));
    }
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::config(format!(
            "keep_fraction must lie in (0, 1], got {keep_fraction}"
        )));
    }
    let k = ((keep_fraction * n_order as f64).round() as usize).clamp(1, n_order);
    Ok((n_order - k + 1..=n_order).collect())
}

/// For each threshold τ, the count #{n : c_n > τ}.
pub fn threshold_counts(n_order: usize, thresholds: &[f64]) -> Result<Vec<usize>> {
    let coeffs = pade_coefficients(n_order)?;
    Ok(thresholds
        .iter()
        .map(|&tau| coeffs.iter().filter(|&&c| c > tau).count())
        .collect())
}

/// Physical parameters of the coupled model plus the derived celerities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Mass density [kg/m³].
    pub rho: f64,
    /// Gravity [m/s²].
    pub g: f64,
    /// Surface tension coefficient [N/m]; zero disables the surface operator's
    /// nonlocal term (and with it the surface boundary condition).
    pub sigma: f64,
    /// Dimensionless added-mass coefficient of the surface layer.
    pub epsilon: f64,
    /// Fluid celerity [m/s].
    pub c_f: f64,
}

impl PhysicalParams {
    pub fn new(rho: f64, g: f64, sigma: f64, epsilon: f64, c_f: f64) -> Result<Self> {
        let p = PhysicalParams {
            rho,
            g,
            sigma,
            epsilon,
            c_f,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::config(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.g > 0.0) {
            return Err(Error::config(format!("g must be positive, got {}", self.g)));
        }
        if !(self.c_f > 0.0) {
            return Err(Error::config(format!("c_f must be positive, got {}", self.c_f)));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::config(format!("sigma must be nonnegative, got {}", self.sigma)));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::config(format!(
                "epsilon must be nonnegative, got {}",
                self.epsilon
            )));
        }
        if self.sigma > 0.0 && self.epsilon == 0.0 {
            return Err(Error::config(
                "sigma > 0 requires epsilon > 0 (the surface celerity sqrt(sigma/(epsilon rho)) \
                 is undefined otherwise)",
            ));
        }
        Ok(())
    }

    /// Surface celerity c_s = sqrt(σ/(ερ)), defined when σ > 0 and ε > 0.
    pub fn c_s(&self) -> Option<f64> {
        if self.sigma > 0.0 && self.epsilon > 0.0 {
            Some((self.sigma / (self.epsilon * self.rho)).sqrt())
        } else {
            None
        }
    }
}

/// Which side of the compatibility constraint c_s/a_s = c_f/a_f keeps its
/// coefficient pinned to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompatMode {
    /// a_f = 1, a_s = c_s/c_f. Keeps the basin auxiliary equations unchanged,
    /// so the large-celerity reduction argument survives. Default.
    A,
    /// a_s = 1, a_f = c_f/c_s.
    B,
}

/// Compatibility coefficients (a_s, a_f) tying the surface and basin
/// absorbing conditions to one characteristic speed ratio.
pub fn compatibility_coefficients(params: &PhysicalParams, mode: CompatMode) -> Result<(f64, f64)> {
    params.validate()?;
    let c_s = params.c_s().ok_or_else(|| {
        Error::config(
            "compatibility coefficients need sigma > 0 and epsilon > 0; \
             disable the surface absorbing condition instead",
        )
    })?;
    Ok(match mode {
        CompatMode::A => (c_s / params.c_f, 1.0),
        CompatMode::B => (1.0, params.c_f / c_s),
    })
}
