//! Structured meshes, Lagrange bases, quadrature and element assembly.

pub mod assemble;
pub mod basis;
pub mod grid1d;
pub mod grid2d;
pub mod quadrature;

pub use assemble::{
    assemble_line_mass, assemble_line_stiffness, assemble_mass_2d, assemble_stiffness_2d,
    interpolate_2d,
};
pub use basis::{LagrangeBasis, NodeLayout};
pub use grid1d::{Endpoint, LineGrid1D};
pub use grid2d::{Boundary, EllipseMask, StructuredGrid2D};
pub use quadrature::{gauss_legendre, gauss_legendre_for_order, QuadratureRule};
