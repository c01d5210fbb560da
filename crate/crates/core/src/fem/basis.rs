//! Nodal Lagrange bases of order 1..=4 on the reference interval [0, 1].

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Placement of the p+1 element nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeLayout {
    /// Gauss–Lobatto points; better conditioned for p ≥ 2. Default.
    GaussLobatto,
    Equispaced,
}

impl Default for NodeLayout {
    fn default() -> Self {
        NodeLayout::GaussLobatto
    }
}

/// Lagrange basis of order p: p+1 nodal functions with the δ-property.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    pub p: usize,
    pub nodes: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(p: usize, layout: NodeLayout) -> Result<Self> {
        if !(1..=4).contains(&p) {
            return Err(Error::config(format!("polynomial order {p} outside 1..=4")));
        }
        let nodes = match layout {
            NodeLayout::Equispaced => (0..=p).map(|i| i as f64 / p as f64).collect(),
            NodeLayout::GaussLobatto => gauss_lobatto_nodes(p),
        };
        Ok(LagrangeBasis { p, nodes })
    }

    /// Values of all p+1 nodal functions at `x`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        let mut out = vec![1.0; n];
        for j in 0..n {
            for k in 0..n {
                if k != j {
                    out[j] *= (x - self.nodes[k]) / (self.nodes[j] - self.nodes[k]);
                }
            }
        }
        out
    }

    /// First derivatives of all p+1 nodal functions at `x`.
    pub fn derivatives(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        let mut out = vec![0.0; n];
        for j in 0..n {
            let mut acc = 0.0;
            for m in 0..n {
                if m == j {
                    continue;
                }
                let mut term = 1.0 / (self.nodes[j] - self.nodes[m]);
                for k in 0..n {
                    if k != j && k != m {
                        term *= (x - self.nodes[k]) / (self.nodes[j] - self.nodes[k]);
                    }
                }
                acc += term;
            }
            out[j] = acc;
        }
        out
    }
}

/// Gauss–Lobatto nodes on [0, 1], built as mirrored pairs so that
/// nodes[i] + nodes[p−i] = 1 exactly.
fn gauss_lobatto_nodes(p: usize) -> Vec<f64> {
    // interior node offsets from the left end, on [0, 1]
    let interior_left: Vec<f64> = match p {
        1 | 2 => vec![],
        // ±1/√5 on [−1,1]
        3 => vec![0.5 * (1.0 - 1.0 / 5.0_f64.sqrt())],
        // ±√(3/7) on [−1,1]
        4 => vec![0.5 * (1.0 - (3.0_f64 / 7.0).sqrt())],
        _ => unreachable!(),
    };
    let mut nodes = vec![0.0; p + 1];
    nodes[p] = 1.0;
    if p % 2 == 0 && p >= 2 {
        nodes[p / 2] = 0.5;
    }
    for (k, &t) in interior_left.iter().enumerate() {
        nodes[k + 1] = t;
        nodes[p - 1 - k] = 1.0 - t;
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_hats_at_midpoint() {
        let b = LagrangeBasis::new(1, NodeLayout::GaussLobatto).unwrap();
        assert_eq!(b.values(0.5), vec![0.5, 0.5]);
    }

    #[test]
    fn delta_property_at_nodes() {
        for p in 1..=4 {
            for layout in [NodeLayout::GaussLobatto, NodeLayout::Equispaced] {
                let b = LagrangeBasis::new(p, layout).unwrap();
                for (k, &xk) in b.nodes.iter().enumerate() {
                    let vals = b.values(xk);
                    for (j, &v) in vals.iter().enumerate() {
                        let want = if j == k { 1.0 } else { 0.0 };
                        assert_eq!(v, want, "p={p} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 1..=4 {
            let b = LagrangeBasis::new(p, NodeLayout::GaussLobatto).unwrap();
            for _ in 0..100 {
                let x: f64 = rng.random_range(0.0..1.0);
                let s: f64 = b.values(x).iter().sum();
                let ds: f64 = b.derivatives(x).iter().sum();
                assert!((s - 1.0).abs() < 1e-13, "p={p} x={x} sum={s}");
                assert!(ds.abs() < 1e-11, "p={p} x={x} dsum={ds}");
            }
        }
    }

    #[test]
    fn nodes_are_mirror_symmetric() {
        for p in 1..=4 {
            let b = LagrangeBasis::new(p, NodeLayout::GaussLobatto).unwrap();
            for i in 0..=p {
                assert_eq!(b.nodes[i], 1.0 - b.nodes[p - i], "p={p} i={i}");
            }
        }
    }

    #[test]
    fn order_out_of_range_rejected() {
        assert!(LagrangeBasis::new(0, NodeLayout::GaussLobatto).is_err());
        assert!(LagrangeBasis::new(5, NodeLayout::GaussLobatto).is_err());
    }
}
