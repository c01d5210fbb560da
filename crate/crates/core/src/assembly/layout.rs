//! Global block layout of the monolithic unknown vector.
//!
//! Order: basin potential φ over active 2D nodes, surface displacement η,
//! then per lateral side (in, then out) and per active Padé index a vertical
//! auxiliary line plus (when the surface is present) one auxiliary surface
//! scalar at the top corner, then per active index one bottom auxiliary line.

use crate::error::{Error, Result};

/// Lateral boundary selector; `In` is the left edge, `Out` the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    In = 0,
    Out = 1,
}

pub const SIDES: [Side; 2] = [Side::In, Side::Out];

#[derive(Debug, Clone)]
pub struct FieldLayout {
    n_phi: usize,
    n_eta: usize,
    n_line: usize,
    n_bottom_line: usize,
    n_active: usize,
    has_sides: bool,
    has_bottom: bool,
    has_eta_aux: bool,
    eta_offset: usize,
    side_offset: [usize; 2],
    bottom_offset: usize,
    dim: usize,
}

impl FieldLayout {
    /// `n_eta` = 0 when the model has no surface equation (pure wave box).
    /// `has_eta_aux` adds one scalar per side per active index and requires
    /// both a surface and lateral auxiliary lines.
    pub fn new(
        n_phi: usize,
        n_eta: usize,
        n_line: usize,
        n_bottom_line: usize,
        n_active: usize,
        has_sides: bool,
        has_bottom: bool,
        has_eta_aux: bool,
    ) -> Result<Self> {
        if has_eta_aux && (!has_sides || n_eta == 0) {
            return Err(Error::config(
                "surface auxiliary scalars need lateral lines and a surface field",
            ));
        }
        if (has_sides || has_bottom) && n_active == 0 {
            return Err(Error::config("absorbing boundaries need a nonempty active set"));
        }
        let side_stride = n_line + usize::from(has_eta_aux);
        let eta_offset = n_phi;
        let side_in = eta_offset + n_eta;
        let per_side = if has_sides { n_active * side_stride } else { 0 };
        let side_out = side_in + per_side;
        let bottom_offset = side_out + per_side;
        let dim = bottom_offset + if has_bottom { n_active * n_bottom_line } else { 0 };
        Ok(FieldLayout {
            n_phi,
            n_eta,
            n_line,
            n_bottom_line,
            n_active,
            has_sides,
            has_bottom,
            has_eta_aux,
            eta_offset,
            side_offset: [side_in, side_out],
            bottom_offset,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn n_eta(&self) -> usize {
        self.n_eta
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn has_sides(&self) -> bool {
        self.has_sides
    }

    pub fn has_bottom(&self) -> bool {
        self.has_bottom
    }

    pub fn has_eta_aux(&self) -> bool {
        self.has_eta_aux
    }

    /// Global dof of a basin node (basin dofs lead the vector).
    #[inline]
    pub fn phi(&self, basin_dof: usize) -> usize {
        debug_assert!(basin_dof < self.n_phi);
        basin_dof
    }

    pub fn phi_range(&self) -> std::ops::Range<usize> {
        0..self.n_phi
    }

    /// Global dof of surface node i.
    #[inline]
    pub fn eta(&self, i: usize) -> usize {
        debug_assert!(i < self.n_eta);
        self.eta_offset + i
    }

    pub fn eta_range(&self) -> std::ops::Range<usize> {
        self.eta_offset..self.eta_offset + self.n_eta
    }

    fn side_stride(&self) -> usize {
        self.n_line + usize::from(self.has_eta_aux)
    }

    /// Global dof of node `node` on the k-th active auxiliary line of `side`
    /// (k is the 0-based position within the active set).
    #[inline]
    pub fn side_line(&self, side: Side, k: usize, node: usize) -> usize {
        debug_assert!(self.has_sides && k < self.n_active && node < self.n_line);
        self.side_offset[side as usize] + k * self.side_stride() + node
    }

    /// Global dof of the k-th surface auxiliary scalar of `side`.
    #[inline]
    pub fn side_eta_aux(&self, side: Side, k: usize) -> usize {
        debug_assert!(self.has_eta_aux && k < self.n_active);
        self.side_offset[side as usize] + k * self.side_stride() + self.n_line
    }

    /// Global dof of node `node` on the k-th active bottom auxiliary line.
    #[inline]
    pub fn bottom_line(&self, k: usize, node: usize) -> usize {
        debug_assert!(self.has_bottom && k < self.n_active && node < self.n_bottom_line);
        self.bottom_offset + k * self.n_bottom_line + node
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_matches_block_arithmetic() {
        // 321×161 basin grid, 61 active indices, surface scalars present
        let l = FieldLayout::new(321 * 161, 321, 161, 321, 61, true, true, true).unwrap();
        assert_eq!(l.dim(), 321 * 161 + 321 + 2 * 61 * (161 + 1) + 61 * 321);
    }

    #[test]
    fn no_absorbing_boundaries_is_two_blocks() {
        let l = FieldLayout::new(1000, 50, 20, 50, 0, false, false, false).unwrap();
        assert_eq!(l.dim(), 1050);
        assert_eq!(l.eta(0), 1000);
    }

    #[test]
    fn order_one_no_surface_scalars() {
        // one active index, no surface auxiliary scalars
        let l = FieldLayout::new(100, 11, 6, 11, 1, true, true, false).unwrap();
        assert_eq!(l.dim(), 100 + 11 + 2 * 6 + 11);
        assert_eq!(l.side_line(Side::In, 0, 0), 111);
        assert_eq!(l.side_line(Side::Out, 0, 5), 111 + 6 + 5);
        assert_eq!(l.bottom_line(0, 10), 100 + 11 + 12 + 10);
    }

    #[test]
    fn blocks_are_disjoint_and_cover() {
        let l = FieldLayout::new(30, 7, 5, 7, 3, true, true, true).unwrap();
        let mut seen = vec![false; l.dim()];
        let mut mark = |d: usize| {
            assert!(!seen[d], "dof {d} assigned twice");
            seen[d] = true;
        };
        for i in 0..30 {
            mark(l.phi(i));
        }
        for i in 0..7 {
            mark(l.eta(i));
        }
        for side in SIDES {
            for k in 0..3 {
                for n in 0..5 {
                    mark(l.side_line(side, k, n));
                }
                mark(l.side_eta_aux(side, k));
            }
        }
        for k in 0..3 {
            for n in 0..7 {
                mark(l.bottom_line(k, n));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn eta_aux_without_surface_rejected() {
        assert!(FieldLayout::new(10, 0, 5, 5, 2, true, true, true).is_err());
        assert!(FieldLayout::new(10, 5, 5, 5, 2, false, true, true).is_err());
    }
}
