//! Uniform 1D line grids hosting surface and boundary-restricted fields.

use crate::error::{Error, Result};
use crate::fem::basis::{LagrangeBasis, NodeLayout};

/// Which end of a line a point functional attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// First node (smallest coordinate).
    Start,
    /// Last node (largest coordinate).
    End,
}

#[derive(Debug, Clone)]
pub struct LineGrid1D {
    pub start: f64,
    pub end: f64,
    pub n_elem: usize,
    pub p: usize,
    pub layout: NodeLayout,
    /// n_elem·p + 1 node coordinates, increasing.
    pub coords: Vec<f64>,
}

/// Node coordinates of a uniform order-p mesh on [a, b]. Element edges come
/// from convex combinations (symmetric ranges mirror exactly); interior
/// nodes follow the reference-element layout.
pub(crate) fn mesh_coords(
    a: f64,
    b: f64,
    n_elem: usize,
    p: usize,
    layout: NodeLayout,
) -> Result<Vec<f64>> {
    let basis = LagrangeBasis::new(p, layout)?;
    let edge = |e: usize| (a * (n_elem - e) as f64 + b * e as f64) / n_elem as f64;
    let mut coords = Vec::with_capacity(n_elem * p + 1);
    for e in 0..n_elem {
        let (left, right) = (edge(e), edge(e + 1));
        coords.push(left);
        for j in 1..p {
            coords.push(left + basis.nodes[j] * (right - left));
        }
    }
    coords.push(edge(n_elem));
    Ok(coords)
}

impl LineGrid1D {
    pub fn new(start: f64, end: f64, n_elem: usize, p: usize, layout: NodeLayout) -> Result<Self> {
        if !(end > start) {
            return Err(Error::Grid(format!("degenerate line [{start}, {end}]")));
        }
        if n_elem == 0 {
            return Err(Error::Grid("line grid needs at least one element".into()));
        }
        let coords = mesh_coords(start, end, n_elem, p, layout)?;
        Ok(LineGrid1D {
            start,
            end,
            n_elem,
            p,
            layout,
            coords,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn element_size(&self) -> f64 {
        (self.end - self.start) / self.n_elem as f64
    }

    /// Node index carrying a point-evaluation term at the given endpoint.
    pub fn endpoint_index(&self, which: Endpoint) -> usize {
        match which {
            Endpoint::Start => 0,
            Endpoint::End => self.coords.len() - 1,
        }
    }

    /// Global node indices of one element, ascending.
    pub fn element_nodes(&self, e: usize) -> impl Iterator<Item = usize> {
        let base = e * self.p;
        base..=base + self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_count_and_endpoints() {
        let line = LineGrid1D::new(-0.1, 0.1, 20, 4, NodeLayout::GaussLobatto).unwrap();
        assert_eq!(line.n_nodes(), 81);
        assert_eq!(line.endpoint_index(Endpoint::Start), 0);
        assert_eq!(line.endpoint_index(Endpoint::End), 80);
        assert_eq!(line.coords[0], -0.1);
        assert_eq!(line.coords[80], 0.1);
    }

    #[test]
    fn coords_are_strictly_increasing() {
        for p in 1..=4 {
            let line = LineGrid1D::new(0.0, 1.0, 7, p, NodeLayout::GaussLobatto).unwrap();
            for w in line.coords.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn symmetric_range_mirrors_to_rounding() {
        let line = LineGrid1D::new(-1.0, 1.0, 10, 4, NodeLayout::GaussLobatto).unwrap();
        let n = line.n_nodes();
        for i in 0..n {
            assert!((line.coords[i] + line.coords[n - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LineGrid1D::new(1.0, 1.0, 4, 2, NodeLayout::GaussLobatto).is_err());
        assert!(LineGrid1D::new(0.0, 1.0, 0, 2, NodeLayout::GaussLobatto).is_err());
    }
}
