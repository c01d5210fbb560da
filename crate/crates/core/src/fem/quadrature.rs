//! Gauss–Legendre quadrature on the reference interval [0, 1].

use crate::error::{Error, Result};

/// Points and weights exact for polynomials of degree ≤ 2n−1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Rule with n = p+1 points, exact through degree 2p+1 (≥ 2p as required
/// for mass matrices of order-p elements).
pub fn gauss_legendre_for_order(p: usize) -> Result<QuadratureRule> {
    gauss_legendre(p + 1)
}

/// n-point Gauss–Legendre rule mapped from [−1, 1] to [0, 1].
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    // abscissae/weights on [−1, 1], symmetric pairs listed once
    let (abscissae, weights): (&[f64], &[f64]) = match n {
        1 => (&[0.0], &[2.0]),
        2 => (&[0.577_350_269_189_625_8], &[1.0]),
        3 => (&[0.0, 0.774_596_669_241_483_4], &[8.0 / 9.0, 5.0 / 9.0]),
        4 => (
            &[0.339_981_043_584_856_3, 0.861_136_311_594_052_6],
            &[0.652_145_154_862_546_1, 0.347_854_845_137_453_86],
        ),
        5 => (
            &[0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664],
            &[
                0.568_888_888_888_888_9,
                0.478_628_670_499_366_5,
                0.236_926_885_056_189_08,
            ],
        ),
        _ => {
            return Err(Error::config(format!(
                "Gauss–Legendre rule with {n} points not tabulated (need 1..=5)"
            )))
        }
    };
    let mut points = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    // negative side first so the [0,1] points come out increasing
    for (i, &a) in abscissae.iter().enumerate().rev() {
        if a != 0.0 {
            points.push(0.5 * (1.0 - a));
            w.push(0.5 * weights[i]);
        }
    }
    for (i, &a) in abscissae.iter().enumerate() {
        if a == 0.0 {
            points.push(0.5);
        } else {
            points.push(0.5 * (1.0 + a));
        }
        w.push(0.5 * weights[i]);
    }
    Ok(QuadratureRule { points, weights: w })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_monomials_exactly() {
        for p in 1..=4usize {
            let rule = gauss_legendre_for_order(p).unwrap();
            // degree 2p monomial: ∫ x^(2p) dx = 1/(2p+1)
            let got: f64 = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * x.powi(2 * p as i32))
                .sum();
            let want = 1.0 / (2.0 * p as f64 + 1.0);
            assert!(
                (got - want).abs() <= 1e-14 * want,
                "p={p}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn weights_sum_to_one() {
        for n in 1..=5 {
            let rule = gauss_legendre(n).unwrap();
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn untabulated_size_rejected() {
        assert!(gauss_legendre(6).is_err());
    }
}
