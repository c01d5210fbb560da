//! Structured 2D grids of uniform rectangular elements, with optional
//! element deactivation for a rigid elliptical obstacle.

use crate::error::{Error, Result};
use crate::fem::basis::NodeLayout;
use crate::fem::grid1d::{mesh_coords, LineGrid1D};
use serde::{Deserialize, Serialize};

/// Outer boundary tags. The surface is the top edge (y = 0), inflow the left
/// edge, outflow the right edge, bottom the lower edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Surface,
    Inflow,
    Outflow,
    Bottom,
}

/// Rigid impermeable obstacle approximated by staircase element
/// deactivation; exposed faces are natural (do-nothing) boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseMask {
    pub center: (f64, f64),
    pub semi_axes: (f64, f64),
}

impl EllipseMask {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let dx = (x - self.center.0) / self.semi_axes.0;
        let dy = (y - self.center.1) / self.semi_axes.1;
        dx * dx + dy * dy < 1.0
    }
}

#[derive(Debug, Clone)]
pub struct StructuredGrid2D {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub p: usize,
    pub layout: NodeLayout,
    /// nx·p + 1 node abscissae, increasing.
    pub xs: Vec<f64>,
    /// ny·p + 1 node ordinates, increasing (y_max = 0 is the surface).
    pub ys: Vec<f64>,
    active_elem: Vec<bool>,
    /// Per raw node (iy·npx + ix): dense dof index, or None when the node
    /// touches no active element.
    node_dof: Vec<Option<u32>>,
    n_dofs: usize,
    pub obstacle: Option<EllipseMask>,
}

fn divisible_count(len: f64, h: f64) -> Option<usize> {
    let n = len / h;
    let rounded = n.round();
    if rounded >= 1.0 && (n - rounded).abs() <= 1e-12 * n.abs().max(1.0) {
        Some(rounded as usize)
    } else {
        None
    }
}

impl StructuredGrid2D {
    pub fn build(
        rect: (f64, f64, f64, f64),
        h: f64,
        p: usize,
        mask: Option<EllipseMask>,
    ) -> Result<Self> {
        Self::build_with_layout(rect, h, p, mask, NodeLayout::GaussLobatto)
    }

    pub fn build_with_layout(
        rect: (f64, f64, f64, f64),
        h: f64,
        p: usize,
        mask: Option<EllipseMask>,
        layout: NodeLayout,
    ) -> Result<Self> {
        let (x_min, x_max, y_min, y_max) = rect;
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::Grid(format!("degenerate rectangle {rect:?}")));
        }
        if !(1..=4).contains(&p) {
            return Err(Error::Grid(format!("polynomial order {p} outside 1..=4")));
        }
        if !(h > 0.0) {
            return Err(Error::Grid(format!("element size must be positive, got {h}")));
        }
        let nx = divisible_count(x_max - x_min, h).ok_or_else(|| {
            Error::Grid(format!(
                "x extent {} is not an integer multiple of h = {h}",
                x_max - x_min
            ))
        })?;
        let ny = divisible_count(y_max - y_min, h).ok_or_else(|| {
            Error::Grid(format!(
                "y extent {} is not an integer multiple of h = {h}",
                y_max - y_min
            ))
        })?;
        let npx = nx * p + 1;
        let npy = ny * p + 1;
        let xs = mesh_coords(x_min, x_max, nx, p, layout)?;
        let ys = mesh_coords(y_min, y_max, ny, p, layout)?;

        let mut active_elem = vec![true; nx * ny];
        if let Some(ell) = mask {
            let (cx, cy) = ell.center;
            let (a, b) = ell.semi_axes;
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Grid("ellipse semi-axes must be positive".into()));
            }
            let inside = cx - a > x_min && cx + a < x_max && cy - b > y_min && cy + b < y_max;
            if !inside {
                return Err(Error::Grid(
                    "ellipse must lie strictly inside the domain".into(),
                ));
            }
            if !(cy + b < y_max) {
                return Err(Error::Grid("ellipse must lie strictly below the surface".into()));
            }
            for ey in 0..ny {
                for ex in 0..nx {
                    let centroid_x = x_min + (ex as f64 + 0.5) * (x_max - x_min) / nx as f64;
                    let centroid_y = y_min + (ey as f64 + 0.5) * (y_max - y_min) / ny as f64;
                    if ell.contains(centroid_x, centroid_y) {
                        if ex == 0 || ex == nx - 1 || ey == 0 || ey == ny - 1 {
                            return Err(Error::Grid(format!(
                                "obstacle deactivates boundary element ({ex}, {ey})"
                            )));
                        }
                        active_elem[ey * nx + ex] = false;
                    }
                }
            }
            // guard: the surface row must stay fully active
            for ex in 0..nx {
                assert!(
                    active_elem[(ny - 1) * nx + ex],
                    "obstacle reached a surface-adjacent element"
                );
            }
        }

        let mut node_dof = vec![None; npx * npy];
        let mut n_dofs = 0u32;
        // dof numbering follows raw node order (y-major rows, x fastest)
        let mut touched = vec![false; npx * npy];
        for ey in 0..ny {
            for ex in 0..nx {
                if !active_elem[ey * nx + ex] {
                    continue;
                }
                for jy in 0..=p {
                    for jx in 0..=p {
                        touched[(ey * p + jy) * npx + (ex * p + jx)] = true;
                    }
                }
            }
        }
        for (raw, &t) in touched.iter().enumerate() {
            if t {
                node_dof[raw] = Some(n_dofs);
                n_dofs += 1;
            }
        }

        Ok(StructuredGrid2D {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
            p,
            layout,
            xs,
            ys,
            active_elem,
            node_dof,
            n_dofs: n_dofs as usize,
            obstacle: mask,
        })
    }

    pub fn npx(&self) -> usize {
        self.nx * self.p + 1
    }

    pub fn npy(&self) -> usize {
        self.ny * self.p + 1
    }

    /// Number of nodes belonging to at least one active element.
    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn element_active(&self, ex: usize, ey: usize) -> bool {
        self.active_elem[ey * self.nx + ex]
    }

    /// Dense dof of a raw (ix, iy) node; panics if the node is inactive.
    pub fn dof(&self, ix: usize, iy: usize) -> usize {
        self.node_dof[iy * self.npx() + ix].expect("inactive node has no dof") as usize
    }

    pub fn dof_checked(&self, ix: usize, iy: usize) -> Option<usize> {
        self.node_dof[iy * self.npx() + ix].map(|d| d as usize)
    }

    pub fn node_coords(&self, ix: usize, iy: usize) -> (f64, f64) {
        (self.xs[ix], self.ys[iy])
    }

    /// Coordinates per dof, in dof order.
    pub fn dof_coords(&self) -> Vec<(f64, f64)> {
        let npx = self.npx();
        let mut out = vec![(0.0, 0.0); self.n_dofs];
        for iy in 0..self.npy() {
            for ix in 0..npx {
                if let Some(d) = self.node_dof[iy * npx + ix] {
                    out[d as usize] = (self.xs[ix], self.ys[iy]);
                }
            }
        }
        out
    }

    /// Dofs along an outer boundary, ordered by the boundary coordinate
    /// (x for horizontal, y for vertical boundaries).
    pub fn boundary_dofs(&self, b: Boundary) -> Vec<usize> {
        match b {
            Boundary::Surface => (0..self.npx()).map(|ix| self.dof(ix, self.npy() - 1)).collect(),
            Boundary::Bottom => (0..self.npx()).map(|ix| self.dof(ix, 0)).collect(),
            Boundary::Inflow => (0..self.npy()).map(|iy| self.dof(0, iy)).collect(),
            Boundary::Outflow => {
                let ix = self.npx() - 1;
                (0..self.npy()).map(|iy| self.dof(ix, iy)).collect()
            }
        }
    }

    /// Line grid sharing nodes with an outer boundary. Horizontal boundaries
    /// run in x, vertical in y (bottom to top, end = surface corner).
    pub fn boundary_line(&self, b: Boundary) -> Result<LineGrid1D> {
        match b {
            Boundary::Surface | Boundary::Bottom => {
                LineGrid1D::new(self.x_min, self.x_max, self.nx, self.p, self.layout)
            }
            Boundary::Inflow | Boundary::Outflow => {
                LineGrid1D::new(self.y_min, self.y_max, self.ny, self.p, self.layout)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts_match_order() {
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.0025, 4, None).unwrap();
        assert_eq!((g.nx, g.ny), (80, 40));
        assert_eq!((g.npx(), g.npy()), (321, 161));
        assert_eq!(g.n_dofs(), 321 * 161);
    }

    #[test]
    fn unit_single_element() {
        let g = StructuredGrid2D::build((0.0, 1.0, 0.0, 1.0), 1.0, 1, None).unwrap();
        assert_eq!((g.nx, g.ny), (1, 1));
        assert_eq!(g.n_dofs(), 4);
    }

    #[test]
    fn non_divisible_extent_rejected() {
        assert!(StructuredGrid2D::build((0.0, 1.0, 0.0, 1.0), 0.3, 1, None).is_err());
    }

    #[test]
    fn obstacle_deactivates_interior_elements_only() {
        let mask = EllipseMask {
            center: (0.05, -0.01),
            semi_axes: (0.01, 0.005),
        };
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.025, 0.0), 0.0025, 4, Some(mask)).unwrap();
        let inactive: usize = (0..g.nx * g.ny)
            .filter(|&e| !g.element_active(e % g.nx, e / g.nx))
            .count();
        assert!(inactive > 0, "expected deactivated elements");
        for ex in 0..g.nx {
            assert!(g.element_active(ex, g.ny - 1), "surface row must stay active");
        }
        assert!(g.n_dofs() < g.npx() * g.npy());
    }

    #[test]
    fn obstacle_touching_boundary_rejected() {
        let mask = EllipseMask {
            center: (0.0, -0.05),
            semi_axes: (0.15, 0.01),
        };
        assert!(StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.01, 2, Some(mask)).is_err());
    }

    #[test]
    fn boundary_maps_share_corners() {
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.01, 2, None).unwrap();
        let surface = g.boundary_dofs(Boundary::Surface);
        assert_eq!(surface.len(), g.npx());
        let coords = g.dof_coords();
        for &d in &surface {
            assert_eq!(coords[d].1, 0.0);
        }
        let outflow = g.boundary_dofs(Boundary::Outflow);
        let bottom = g.boundary_dofs(Boundary::Bottom);
        // corner Q_out appears in both outflow and bottom maps
        assert_eq!(outflow[0], *bottom.last().unwrap());
        // corner P_in appears in both inflow and surface maps
        let inflow = g.boundary_dofs(Boundary::Inflow);
        assert_eq!(*inflow.last().unwrap(), surface[0]);
    }

    #[test]
    fn boundary_line_shares_coordinates() {
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.01, 3, None).unwrap();
        let line = g.boundary_line(Boundary::Surface).unwrap();
        assert_eq!(line.coords, g.xs);
        let lat = g.boundary_line(Boundary::Outflow).unwrap();
        assert_eq!(lat.coords, g.ys);
    }
}
