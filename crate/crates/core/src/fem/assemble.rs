//! Mass/stiffness element matrices on uniform meshes and their scatter into
//! triplet builders. All elements of one grid share a single element matrix
//! (constant Jacobian), and traversal order is fixed, so assembly is
//! bit-reproducible.

use crate::error::Result;
use crate::fem::basis::{LagrangeBasis, NodeLayout};
use crate::fem::grid1d::LineGrid1D;
use crate::fem::grid2d::StructuredGrid2D;
use crate::fem::quadrature::gauss_legendre_for_order;
use crate::sparse::{SparseMatrixCsr, TripletBuilder};

/// Dense (p+1)×(p+1) element matrix, row-major.
#[derive(Debug, Clone)]
pub struct ElementMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl ElementMatrix {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// 1D element mass ∫ N_i N_j over an element of size h.
pub fn element_mass_1d(p: usize, layout: NodeLayout, h: f64) -> Result<ElementMatrix> {
    let basis = LagrangeBasis::new(p, layout)?;
    let quad = gauss_legendre_for_order(p)?;
    let n = p + 1;
    let mut data = vec![0.0; n * n];
    for (q, &xq) in quad.points.iter().enumerate() {
        let vals = basis.values(xq);
        let w = quad.weights[q] * h;
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += w * vals[i] * vals[j];
            }
        }
    }
    Ok(ElementMatrix { n, data })
}

/// 1D element stiffness ∫ N_i′ N_j′ over an element of size h.
pub fn element_stiffness_1d(p: usize, layout: NodeLayout, h: f64) -> Result<ElementMatrix> {
    let basis = LagrangeBasis::new(p, layout)?;
    let quad = gauss_legendre_for_order(p)?;
    let n = p + 1;
    let mut data = vec![0.0; n * n];
    for (q, &xq) in quad.points.iter().enumerate() {
        let ders = basis.derivatives(xq);
        let w = quad.weights[q] / h;
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += w * ders[i] * ders[j];
            }
        }
    }
    Ok(ElementMatrix { n, data })
}

/// Scatter coeff·(1D mass) with independent row/column index maps, so the
/// same routine assembles square blocks and rectangular trace couplings.
pub fn add_mass_1d(
    line: &LineGrid1D,
    coeff: f64,
    row_of: &dyn Fn(usize) -> usize,
    col_of: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) -> Result<()> {
    let m = element_mass_1d(line.p, line.layout, line.element_size())?;
    scatter_1d(line, coeff, &m, row_of, col_of, out);
    Ok(())
}

pub fn add_stiffness_1d(
    line: &LineGrid1D,
    coeff: f64,
    row_of: &dyn Fn(usize) -> usize,
    col_of: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) -> Result<()> {
    let k = element_stiffness_1d(line.p, line.layout, line.element_size())?;
    scatter_1d(line, coeff, &k, row_of, col_of, out);
    Ok(())
}

fn scatter_1d(
    line: &LineGrid1D,
    coeff: f64,
    elem: &ElementMatrix,
    row_of: &dyn Fn(usize) -> usize,
    col_of: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) {
    for e in 0..line.n_elem {
        let nodes: Vec<usize> = line.element_nodes(e).collect();
        for (i, &gi) in nodes.iter().enumerate() {
            for (j, &gj) in nodes.iter().enumerate() {
                out.add(row_of(gi), col_of(gj), coeff * elem.at(i, j));
            }
        }
    }
}

/// 2D element matrices as tensor products of the 1D ones.
pub struct ElementMatrices2D {
    /// local index l = jy·(p+1) + jx
    pub mass: Vec<f64>,
    pub stiffness: Vec<f64>,
    pub n_local: usize,
}

pub fn element_matrices_2d(
    p: usize,
    layout: NodeLayout,
    hx: f64,
    hy: f64,
) -> Result<ElementMatrices2D> {
    let mx = element_mass_1d(p, layout, hx)?;
    let my = element_mass_1d(p, layout, hy)?;
    let kx = element_stiffness_1d(p, layout, hx)?;
    let ky = element_stiffness_1d(p, layout, hy)?;
    let n1 = p + 1;
    let n_local = n1 * n1;
    let mut mass = vec![0.0; n_local * n_local];
    let mut stiffness = vec![0.0; n_local * n_local];
    for jy in 0..n1 {
        for jx in 0..n1 {
            let a = jy * n1 + jx;
            for ky_ in 0..n1 {
                for kx_ in 0..n1 {
                    let b = ky_ * n1 + kx_;
                    mass[a * n_local + b] = mx.at(jx, kx_) * my.at(jy, ky_);
                    stiffness[a * n_local + b] =
                        kx.at(jx, kx_) * my.at(jy, ky_) + mx.at(jx, kx_) * ky.at(jy, ky_);
                }
            }
        }
    }
    Ok(ElementMatrices2D {
        mass,
        stiffness,
        n_local,
    })
}

fn scatter_2d(
    grid: &StructuredGrid2D,
    coeff: f64,
    elem: &[f64],
    n_local: usize,
    map: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) {
    let p = grid.p;
    let n1 = p + 1;
    for ey in 0..grid.ny {
        for ex in 0..grid.nx {
            if !grid.element_active(ex, ey) {
                continue;
            }
            let mut dofs = Vec::with_capacity(n_local);
            for jy in 0..n1 {
                for jx in 0..n1 {
                    dofs.push(grid.dof(ex * p + jx, ey * p + jy));
                }
            }
            for (a, &ga) in dofs.iter().enumerate() {
                for (b, &gb) in dofs.iter().enumerate() {
                    out.add(map(ga), map(gb), coeff * elem[a * n_local + b]);
                }
            }
        }
    }
}

pub fn add_mass_2d(
    grid: &StructuredGrid2D,
    coeff: f64,
    map: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) -> Result<()> {
    let hx = (grid.x_max - grid.x_min) / grid.nx as f64;
    let hy = (grid.y_max - grid.y_min) / grid.ny as f64;
    let em = element_matrices_2d(grid.p, grid.layout, hx, hy)?;
    scatter_2d(grid, coeff, &em.mass, em.n_local, map, out);
    Ok(())
}

pub fn add_stiffness_2d(
    grid: &StructuredGrid2D,
    coeff: f64,
    map: &dyn Fn(usize) -> usize,
    out: &mut TripletBuilder,
) -> Result<()> {
    let hx = (grid.x_max - grid.x_min) / grid.nx as f64;
    let hy = (grid.y_max - grid.y_min) / grid.ny as f64;
    let em = element_matrices_2d(grid.p, grid.layout, hx, hy)?;
    scatter_2d(grid, coeff, &em.stiffness, em.n_local, map, out);
    Ok(())
}

/// coeff·∫ φᵢ φⱼ over active elements, compiled over the grid's dofs.
pub fn assemble_mass_2d(grid: &StructuredGrid2D, coeff: f64) -> Result<SparseMatrixCsr> {
    let mut b = TripletBuilder::new(grid.n_dofs());
    add_mass_2d(grid, coeff, &|d| d, &mut b)?;
    b.compile()
}

/// coeff·∫ ∇φᵢ·∇φⱼ over active elements.
pub fn assemble_stiffness_2d(grid: &StructuredGrid2D, coeff: f64) -> Result<SparseMatrixCsr> {
    let mut b = TripletBuilder::new(grid.n_dofs());
    add_stiffness_2d(grid, coeff, &|d| d, &mut b)?;
    b.compile()
}

pub fn assemble_line_mass(line: &LineGrid1D, coeff: f64) -> Result<SparseMatrixCsr> {
    let mut b = TripletBuilder::new(line.n_nodes());
    add_mass_1d(line, coeff, &|d| d, &|d| d, &mut b)?;
    b.compile()
}

pub fn assemble_line_stiffness(line: &LineGrid1D, coeff: f64) -> Result<SparseMatrixCsr> {
    let mut b = TripletBuilder::new(line.n_nodes());
    add_stiffness_1d(line, coeff, &|d| d, &|d| d, &mut b)?;
    b.compile()
}

/// 2D mass restricted to active elements whose centroid satisfies `keep`
/// (used for spatially windowed energy diagnostics).
pub fn assemble_mass_2d_filtered(
    grid: &StructuredGrid2D,
    coeff: f64,
    keep: &dyn Fn(f64, f64) -> bool,
) -> Result<SparseMatrixCsr> {
    assemble_2d_filtered(grid, coeff, keep, true)
}

pub fn assemble_stiffness_2d_filtered(
    grid: &StructuredGrid2D,
    coeff: f64,
    keep: &dyn Fn(f64, f64) -> bool,
) -> Result<SparseMatrixCsr> {
    assemble_2d_filtered(grid, coeff, keep, false)
}

fn assemble_2d_filtered(
    grid: &StructuredGrid2D,
    coeff: f64,
    keep: &dyn Fn(f64, f64) -> bool,
    mass: bool,
) -> Result<SparseMatrixCsr> {
    let hx = (grid.x_max - grid.x_min) / grid.nx as f64;
    let hy = (grid.y_max - grid.y_min) / grid.ny as f64;
    let em = element_matrices_2d(grid.p, grid.layout, hx, hy)?;
    let elem = if mass { &em.mass } else { &em.stiffness };
    let p = grid.p;
    let n1 = p + 1;
    let mut out = TripletBuilder::new(grid.n_dofs());
    for ey in 0..grid.ny {
        for ex in 0..grid.nx {
            if !grid.element_active(ex, ey) {
                continue;
            }
            let cx = grid.x_min + (ex as f64 + 0.5) * hx;
            let cy = grid.y_min + (ey as f64 + 0.5) * hy;
            if !keep(cx, cy) {
                continue;
            }
            let mut dofs = Vec::with_capacity(em.n_local);
            for jy in 0..n1 {
                for jx in 0..n1 {
                    dofs.push(grid.dof(ex * p + jx, ey * p + jy));
                }
            }
            for (a, &ga) in dofs.iter().enumerate() {
                for (b, &gb) in dofs.iter().enumerate() {
                    out.add(ga, gb, coeff * elem[a * em.n_local + b]);
                }
            }
        }
    }
    out.compile()
}

/// 1D mass/stiffness restricted to elements whose midpoint satisfies `keep`.
pub fn assemble_line_filtered(
    line: &LineGrid1D,
    coeff: f64,
    keep: &dyn Fn(f64) -> bool,
    mass: bool,
) -> Result<SparseMatrixCsr> {
    let elem = if mass {
        element_mass_1d(line.p, line.layout, line.element_size())?
    } else {
        element_stiffness_1d(line.p, line.layout, line.element_size())?
    };
    let h = line.element_size();
    let mut out = TripletBuilder::new(line.n_nodes());
    for e in 0..line.n_elem {
        let mid = line.start + (e as f64 + 0.5) * h;
        if !keep(mid) {
            continue;
        }
        let nodes: Vec<usize> = line.element_nodes(e).collect();
        for (i, &gi) in nodes.iter().enumerate() {
            for (j, &gj) in nodes.iter().enumerate() {
                out.add(gi, gj, coeff * elem.at(i, j));
            }
        }
    }
    out.compile()
}

/// Nodal interpolant of f over the grid's dofs.
pub fn interpolate_2d(grid: &StructuredGrid2D, f: &dyn Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; grid.n_dofs()];
    for (d, (x, y)) in grid.dof_coords().iter().enumerate() {
        out[d] = f(*x, *y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_bilinear_element_mass_hand_values() {
        let g = StructuredGrid2D::build((0.0, 1.0, 0.0, 1.0), 1.0, 1, None).unwrap();
        let m = assemble_mass_2d(&g, 1.0).unwrap().to_dense();
        let want = [
            [4.0, 2.0, 2.0, 1.0],
            [2.0, 4.0, 1.0, 2.0],
            [2.0, 1.0, 4.0, 2.0],
            [1.0, 2.0, 2.0, 4.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (m[i][j] - want[i][j] / 36.0).abs() < 1e-15,
                    "({i},{j}): {} vs {}",
                    m[i][j],
                    want[i][j] / 36.0
                );
            }
        }
    }

    #[test]
    fn mass_total_equals_active_area() {
        for p in 1..=4 {
            let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.01, p, None).unwrap();
            let m = assemble_mass_2d(&g, 2.5).unwrap();
            let ones = vec![1.0; g.n_dofs()];
            let total = m.bilinear(&ones, &ones);
            let want = 2.5 * 0.2 * 0.1;
            assert!((total - want).abs() < 1e-12 * want, "p={p}: {total} vs {want}");
        }
    }

    #[test]
    fn stiffness_kernel_contains_constants() {
        for p in 1..=4 {
            let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.02, p, None).unwrap();
            let k = assemble_stiffness_2d(&g, 1.0).unwrap();
            let ones = vec![1.0; g.n_dofs()];
            let mut y = vec![0.0; g.n_dofs()];
            k.matvec(&ones, &mut y).unwrap();
            let max = y.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
            assert!(max < 1e-12, "p={p}: ||K·1||_inf = {max}");
        }
    }

    #[test]
    fn patch_test_interior_rows_annihilate_affine() {
        for p in 1..=4 {
            let g = StructuredGrid2D::build((0.0, 1.0, -1.0, 0.0), 0.25, p, None).unwrap();
            let k = assemble_stiffness_2d(&g, 1.0).unwrap();
            let u = interpolate_2d(&g, &|x, y| 0.7 - 1.3 * x + 2.1 * y);
            let mut y = vec![0.0; g.n_dofs()];
            k.matvec(&u, &mut y).unwrap();
            let npx = g.npx();
            let npy = g.npy();
            for iy in 1..npy - 1 {
                for ix in 1..npx - 1 {
                    let r = g.dof(ix, iy);
                    assert!(y[r].abs() < 1e-11, "p={p} interior row {r}: {}", y[r]);
                }
            }
        }
    }

    #[test]
    fn line_mass_and_stiffness_basics() {
        let line = LineGrid1D::new(0.0, 2.0, 2, 1, NodeLayout::GaussLobatto).unwrap();
        let m = assemble_line_mass(&line, 1.0).unwrap();
        let ones = vec![1.0; 3];
        assert!((m.bilinear(&ones, &ones) - 2.0).abs() < 1e-14);
        // interior row of the p=1 mass on unit elements sums to 1
        let row_sum: f64 = m.row(1).1.iter().sum();
        assert!((row_sum - 1.0).abs() < 1e-14);

        let k = assemble_line_stiffness(&line, 3.0).unwrap();
        let mut y = vec![0.0; 3];
        k.matvec(&ones, &mut y).unwrap();
        assert!(y.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn assembly_is_bit_reproducible() {
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.05, 0.0), 0.01, 3, None).unwrap();
        let a = assemble_stiffness_2d(&g, 1.0).unwrap();
        let b = assemble_stiffness_2d(&g, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn masked_assembly_skips_deactivated_area() {
        let mask = crate::fem::grid2d::EllipseMask {
            center: (0.0, -0.05),
            semi_axes: (0.02, 0.02),
        };
        let g = StructuredGrid2D::build((-0.1, 0.1, -0.1, 0.0), 0.01, 2, Some(mask)).unwrap();
        let m = assemble_mass_2d(&g, 1.0).unwrap();
        let ones = vec![1.0; g.n_dofs()];
        let total = m.bilinear(&ones, &ones);
        let full = 0.2 * 0.1;
        assert!(total < full, "masked area must shrink the integral");
        let n_inactive = (0..g.nx * g.ny)
            .filter(|&e| !g.element_active(e % g.nx, e / g.nx))
            .count();
        let want = full - n_inactive as f64 * 0.01 * 0.01;
        assert!((total - want).abs() < 1e-12);
    }
}
