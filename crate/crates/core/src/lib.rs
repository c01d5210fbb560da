//! Finite-element simulator for a coupled free-surface/basin wave model
//! truncated by Padé-type high-order absorbing boundary conditions.
//!
//! The basin carries a 2D wave equation for the velocity potential, coupled
//! through the normal velocity to a 1D free-surface equation with surface
//! tension and a small added-mass term. Artificial lateral and bottom
//! boundaries are closed by rational (Padé) approximations of the square
//! root in the Dirichlet-to-Neumann map, each retained term contributing an
//! auxiliary line field; the surface and basin conditions are tied together
//! by a compatibility constraint on their characteristic speeds, and for
//! large fluid celerities most auxiliary fields can be dropped (reduction).
//!
//! Layout:
//! - [`pade`]: approximation coefficients, reduction, compatibility.
//! - [`fem`]: structured grids, bases, quadrature, element assembly.
//! - [`sparse`]: triplet/CSR matrices and the direct solver.
//! - [`assembly`]: the monolithic second-order block system.
//! - [`newmark`]: implicit average-acceleration time integration.
//! - [`harness`]: case catalog, excitation, reference runs, metrics.

pub mod assembly;
pub mod error;
pub mod fem;
pub mod harness;
pub mod newmark;
pub mod pade;
pub mod report;
pub mod sparse;

pub use error::{Error, Result};
