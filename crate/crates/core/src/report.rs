//! Deterministic text outputs: CSV series, nodal snapshots, matrix dumps.
//! Floats are printed with 17 significant digits so repeated runs are
//! byte-identical and values round-trip.

use crate::error::Result;
use crate::sparse::SparseMatrixCsr;
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, scientific.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Nodal field snapshot with columns x,y,value.
pub fn write_snapshot(path: &Path, coords: &[(f64, f64)], values: &[f64]) -> Result<()> {
    let mut out = String::from("x,y,value\n");
    for ((x, y), v) in coords.iter().zip(values) {
        let _ = writeln!(out, "{},{},{}", fmt_f64(*x), fmt_f64(*y), fmt_f64(*v));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Coordinate-format matrix market dump (1-based indices).
pub fn write_matrix_market(path: &Path, m: &SparseMatrixCsr) -> Result<()> {
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", m.dim(), m.dim(), m.nnz());
    for (r, c, v) in m.entries() {
        let _ = writeln!(out, "{} {} {}", r + 1, c + 1, fmt_f64(v));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
        assert_eq!(fmt_f64(-0.1), "-1.0000000000000001e-1");
        let v = 9.472135954999579;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }
}
