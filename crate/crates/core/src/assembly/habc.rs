//! Shared pieces of the absorbing-boundary assembly: boundary flux
//! replacement, auxiliary line equations, and the corner coupling between
//! the lateral and bottom auxiliary families.
//!
//! Everything is written against outward normals, so one routine serves
//! both lateral sides and the bottom; sign flips at mirrored corners are
//! absorbed by the normal convention.

use crate::error::Result;
use crate::fem::assemble::{add_mass_1d, add_stiffness_1d};
use crate::fem::grid1d::LineGrid1D;
use crate::pade::PadeSet;
use crate::sparse::TripletBuilder;

/// Scale factors of one absorbing boundary: density-like row weight, wave
/// celerity, and the characteristic-speed modulation coefficient.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundaryScales {
    pub rho: f64,
    pub c: f64,
    pub a: f64,
}

/// Classical first-order condition a·∂_t u + c·∂_ν u = 0: pure boundary
/// damping (ρ a / c)·∂_t u against the boundary mass.
pub(crate) fn add_classical_flux(
    line: &LineGrid1D,
    trace: &[usize],
    s: BoundaryScales,
    c_out: &mut TripletBuilder,
) -> Result<()> {
    add_mass_1d(line, s.rho * s.a / s.c, &|i| trace[i], &|i| trace[i], c_out)
}

/// Replace the natural boundary flux of the main field with the rational
/// approximant: ρ∂_ν u → (ρ a/c)·[−∂_t u + (2/M) Σ c_n (∂_t u_n − ∂_t u)].
/// Dropped (inactive) indices contribute nothing while M keeps the full
/// 2N+1 weighting.
pub(crate) fn add_flux_replacement(
    line: &LineGrid1D,
    trace: &[usize],
    aux_dof: &dyn Fn(usize, usize) -> usize,
    pade: &PadeSet,
    s: BoundaryScales,
    c_out: &mut TripletBuilder,
) -> Result<()> {
    let f = s.rho * s.a / s.c;
    let self_coef = f * (1.0 + pade.two_over_m() * pade.sum_active());
    add_mass_1d(line, self_coef, &|i| trace[i], &|i| trace[i], c_out)?;
    for (k, &n) in pade.active().iter().enumerate() {
        let coef = -f * pade.two_over_m() * pade.coeff(n);
        add_mass_1d(line, coef, &|i| trace[i], &|i| aux_dof(k, i), c_out)?;
    }
    Ok(())
}

/// Auxiliary line equations along one boundary, one per active index:
/// a²(1+c_n)∂_t²(u_n − u) + (1−a²)∂_t² u_n − c²∂_τ² u_n = 0.
pub(crate) fn add_aux_line_equations(
    line: &LineGrid1D,
    trace: &[usize],
    aux_dof: &dyn Fn(usize, usize) -> usize,
    pade: &PadeSet,
    a: f64,
    c: f64,
    m_out: &mut TripletBuilder,
    k_out: &mut TripletBuilder,
) -> Result<()> {
    for (k, &n) in pade.active().iter().enumerate() {
        let cn = pade.coeff(n);
        add_mass_1d(
            line,
            1.0 + a * a * cn,
            &|i| aux_dof(k, i),
            &|i| aux_dof(k, i),
            m_out,
        )?;
        add_mass_1d(
            line,
            -(a * a) * (1.0 + cn),
            &|i| aux_dof(k, i),
            &|i| trace[i],
            m_out,
        )?;
        add_stiffness_1d(line, c * c, &|i| aux_dof(k, i), &|i| aux_dof(k, i), k_out)?;
    }
    Ok(())
}

/// Corner coupling at one corner between the lateral family (evaluated at
/// its bottom endpoint) and the bottom family (evaluated at this corner):
///
/// c·∂_ν u_n |_Q = −∂_t u_n + (2/M) Σ_m c_m ∂_t [((1+c_n) u_m' − c_n u_n)/(1+c_n+c_m)]
///
/// applied symmetrically to both families. The denominators 1+c_n+c_m
/// exceed one, so the coefficients are always finite.
pub(crate) fn add_corner_odes(
    lat_q: &dyn Fn(usize) -> usize,
    bot_q: &dyn Fn(usize) -> usize,
    pade: &PadeSet,
    c: f64,
    c_out: &mut TripletBuilder,
) {
    let w = pade.two_over_m();
    let active = pade.active();
    for (kn, &n) in active.iter().enumerate() {
        let cn = pade.coeff(n);
        let mut self_sum = 0.0;
        for (km, &m) in active.iter().enumerate() {
            let cm = pade.coeff(m);
            let denom = 1.0 + cn + cm;
            self_sum += cm * cn / denom;
            c_out.add(lat_q(kn), bot_q(km), -c * w * cm * (1.0 + cn) / denom);
        }
        c_out.add(lat_q(kn), lat_q(kn), c * (1.0 + w * self_sum));
    }
    for (km, &m) in active.iter().enumerate() {
        let cm = pade.coeff(m);
        let mut self_sum = 0.0;
        for (kn, &n) in active.iter().enumerate() {
            let cn = pade.coeff(n);
            let denom = 1.0 + cn + cm;
            self_sum += cn * cm / denom;
            c_out.add(bot_q(km), lat_q(kn), -c * w * cn * (1.0 + cm) / denom);
        }
        c_out.add(bot_q(km), bot_q(km), c * (1.0 + w * self_sum));
    }
}
