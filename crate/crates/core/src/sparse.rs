//! Sparse matrices (triplet assembly + CSR) and the direct solver used by
//! the implicit time stepper.
//!
//! Assembly accumulates (row, col, value) triplets; `compile` sums
//! duplicates in insertion order so repeated assembly is bit-identical.
//! Factorization is a sparse LU with fill-reducing ordering and partial
//! pivoting, run sequentially for reproducibility.

use crate::error::{Error, Result};
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};

/// Unassembled triplet contributions to a square matrix.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl TripletBuilder {
    pub fn new(dim: usize) -> Self {
        TripletBuilder {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Record one contribution; duplicates are summed on compile.
    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        self.entries.push((row as u32, col as u32, value));
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum duplicates and produce CSR storage. Entries that sum to exactly
    /// zero are dropped; anything else, however small, is kept.
    pub fn compile(&self) -> Result<SparseMatrixCsr> {
        let dim = self.dim;
        for &(r, c, _) in &self.entries {
            if r as usize >= dim || c as usize >= dim {
                return Err(Error::Sparse(format!(
                    "triplet index ({r}, {c}) out of range for dimension {dim}"
                )));
            }
        }
        let mut order: Vec<u32> = (0..self.entries.len() as u32).collect();
        order.sort_by_key(|&i| {
            let (r, c, _) = self.entries[i as usize];
            (r, c)
        });

        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut k = 0;
        while k < order.len() {
            let (r, c, _) = self.entries[order[k] as usize];
            let mut sum = 0.0;
            while k < order.len() {
                let (r2, c2, v) = self.entries[order[k] as usize];
                if r2 != r || c2 != c {
                    break;
                }
                sum += v;
                k += 1;
            }
            if sum != 0.0 {
                row_ptr[r as usize + 1] += 1;
                col_idx.push(c);
                values.push(sum);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrixCsr {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }
}

/// Compressed sparse row storage of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl SparseMatrixCsr {
    pub fn zero(dim: usize) -> Self {
        SparseMatrixCsr {
            dim,
            row_ptr: vec![0; dim + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        SparseMatrixCsr {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim as u32).collect(),
            values: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of one row, sorted by column.
    pub fn row(&self, r: usize) -> (&[u32], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter()
                .zip(vals)
                .map(move |(&c, &v)| (r, c as usize, v))
        })
    }

    /// y = A x with ordered accumulation along each row.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Sparse(format!(
                "matvec dimension mismatch: matrix {}, x {}, y {}",
                self.dim,
                x.len(),
                y.len()
            )));
        }
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c as usize];
            }
            y[r] = acc;
        }
        Ok(())
    }

    /// y += coef · A x.
    pub fn matvec_add(&self, coef: f64, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Sparse("matvec_add dimension mismatch".into()));
        }
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c as usize];
            }
            y[r] += coef * acc;
        }
        Ok(())
    }

    /// xᵀ A y, accumulated row by row (used for quadratic energies).
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut total = 0.0;
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * y[c as usize];
            }
            total += x[r] * acc;
        }
        total
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Σ coefᵢ · Aᵢ over matrices of one dimension, merged row-wise in
    /// argument order.
    pub fn linear_combination(terms: &[(f64, &SparseMatrixCsr)]) -> Result<SparseMatrixCsr> {
        let dim = match terms.first() {
            Some((_, a)) => a.dim,
            None => return Err(Error::Sparse("linear_combination of no terms".into())),
        };
        if terms.iter().any(|(_, a)| a.dim != dim) {
            return Err(Error::Sparse("linear_combination dimension mismatch".into()));
        }
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut cursors = vec![0usize; terms.len()];
        for r in 0..dim {
            for (t, (_, a)) in terms.iter().enumerate() {
                cursors[t] = a.row_ptr[r];
            }
            loop {
                let mut next_col = u32::MAX;
                for (t, (_, a)) in terms.iter().enumerate() {
                    if cursors[t] < a.row_ptr[r + 1] {
                        next_col = next_col.min(a.col_idx[cursors[t]]);
                    }
                }
                if next_col == u32::MAX {
                    break;
                }
                let mut sum = 0.0;
                for (t, (coef, a)) in terms.iter().enumerate() {
                    if cursors[t] < a.row_ptr[r + 1] && a.col_idx[cursors[t]] == next_col {
                        sum += coef * a.values[cursors[t]];
                        cursors[t] += 1;
                    }
                }
                col_idx.push(next_col);
                values.push(sum);
            }
            row_ptr[r + 1] = col_idx.len();
        }
        Ok(SparseMatrixCsr {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    #[cfg(test)]
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.dim]; self.dim];
        for (r, c, v) in self.entries() {
            d[r][c] = v;
        }
        d
    }
}

/// Direct sparse LU factorization tied to one matrix.
pub struct Factorization {
    dim: usize,
    lu: Lu<u32, f64>,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Factorization").field("dim", &self.dim).finish()
    }
}

/// Factor a square nonsingular matrix. Structural singularity (an empty row
/// or column) is reported with the offending index before numeric work.
pub fn factorize(a: &SparseMatrixCsr) -> Result<Factorization> {
    let dim = a.dim;
    if dim == 0 {
        return Err(Error::Sparse("cannot factorize an empty matrix".into()));
    }
    let mut col_seen = vec![false; dim];
    for r in 0..dim {
        if a.row_ptr[r] == a.row_ptr[r + 1] {
            return Err(Error::Singular(format!("row {r} is structurally empty")));
        }
        for &c in a.row(r).0 {
            col_seen[c as usize] = true;
        }
    }
    if let Some(c) = col_seen.iter().position(|s| !s) {
        return Err(Error::Singular(format!("column {c} is structurally empty")));
    }

    let triplets: Vec<Triplet<u32, u32, f64>> = a
        .entries()
        .map(|(r, c, v)| Triplet::new(r as u32, c as u32, v))
        .collect();
    let mat: SparseColMat<u32, f64> =
        SparseColMat::try_new_from_triplets(dim, dim, &triplets)
            .map_err(|e| Error::Sparse(format!("CSC conversion failed: {e:?}")))?;
    let symbolic = SymbolicLu::try_new(mat.symbolic())
        .map_err(|e| Error::Singular(format!("symbolic factorization failed: {e:?}")))?;
    let lu = Lu::try_new_with_symbolic(symbolic, mat.as_ref())
        .map_err(|e| Error::Singular(format!("numeric factorization failed: {e:?}")))?;
    Ok(Factorization { dim, lu })
}

impl Factorization {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solve A x = b. A numerically singular factorization surfaces here as
    /// a non-finite solution and is reported as such.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        if b.len() != self.dim {
            return Err(Error::Sparse(format!(
                "solve dimension mismatch: matrix {}, rhs {}",
                self.dim,
                b.len()
            )));
        }
        let rhs = faer::MatMut::from_column_major_slice_mut(b, self.dim, 1);
        self.lu.solve_in_place(rhs);
        if let Some(i) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::Singular(format!(
                "solution component {i} is non-finite; the matrix is numerically singular"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vec_norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn empty_builder_compiles_to_zero_matrix() {
        let a = TripletBuilder::new(4).compile().unwrap();
        assert_eq!(a.nnz(), 0);
        let mut y = vec![1.0; 4];
        a.matvec(&[1.0, 2.0, 3.0, 4.0], &mut y).unwrap();
        assert_eq!(y, vec![0.0; 4]);
    }

    #[test]
    fn duplicate_triplets_are_summed() {
        let mut b = TripletBuilder::new(2);
        b.add(0, 0, 1.0);
        b.add(0, 0, 2.0);
        let a = b.compile().unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.row(0), (&[0u32][..], &[3.0][..]));
    }

    #[test]
    fn out_of_range_triplet_rejected() {
        let mut b = TripletBuilder::new(2);
        b.add(0, 2, 1.0);
        assert!(b.compile().is_err());
    }

    #[test]
    fn compile_matches_dense_accumulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let mut b = TripletBuilder::new(n);
        let mut dense = vec![vec![0.0; n]; n];
        for _ in 0..600 {
            let r = rng.random_range(0..n);
            let c = rng.random_range(0..n);
            let v: f64 = rng.random_range(-1.0..1.0);
            b.add(r, c, v);
            dense[r][c] += v;
        }
        let a = b.compile().unwrap();
        let got = a.to_dense();
        for r in 0..n {
            for c in 0..n {
                assert!((got[r][c] - dense[r][c]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matvec_identity_zero_and_random() {
        let n = 20;
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut y = vec![0.0; n];
        SparseMatrixCsr::identity(n).matvec(&x, &mut y).unwrap();
        assert_eq!(x, y);
        SparseMatrixCsr::zero(n).matvec(&x, &mut y).unwrap();
        assert!(y.iter().all(|&v| v == 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut b = TripletBuilder::new(n);
        let mut dense = vec![vec![0.0; n]; n];
        for _ in 0..150 {
            let (r, c) = (rng.random_range(0..n), rng.random_range(0..n));
            let v: f64 = rng.random_range(-1.0..1.0);
            b.add(r, c, v);
            dense[r][c] += v;
        }
        let a = b.compile().unwrap();
        a.matvec(&x, &mut y).unwrap();
        for r in 0..n {
            let want: f64 = (0..n).map(|c| dense[r][c] * x[c]).sum();
            assert!((y[r] - want).abs() <= 1e-13 * want.abs().max(1.0));
        }

        assert!(a.matvec(&x[..n - 1], &mut y).is_err());
    }

    #[test]
    fn solve_identity_and_two_by_two() {
        let id = factorize(&SparseMatrixCsr::identity(3)).unwrap();
        let b = vec![1.0, -2.0, 0.5];
        assert_eq!(id.solve(&b).unwrap(), b);

        let mut tb = TripletBuilder::new(2);
        tb.add(0, 0, 2.0);
        tb.add(0, 1, 1.0);
        tb.add(1, 0, 1.0);
        tb.add(1, 1, 3.0);
        let f = factorize(&tb.compile().unwrap()).unwrap();
        let x = f.solve(&[3.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn structurally_singular_reported_with_index() {
        let mut tb = TripletBuilder::new(3);
        tb.add(0, 0, 1.0);
        tb.add(2, 2, 1.0);
        let err = factorize(&tb.compile().unwrap()).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }

    #[test]
    fn residual_bound_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..100 {
            let n = rng.random_range(5..60);
            let mut tb = TripletBuilder::new(n);
            // diagonally dominant => condition number well below 1e6
            for r in 0..n {
                let mut off_sum = 0.0;
                for _ in 0..3 {
                    let c = rng.random_range(0..n);
                    if c != r {
                        let v: f64 = rng.random_range(-1.0..1.0);
                        tb.add(r, c, v);
                        off_sum += v.abs();
                    }
                }
                tb.add(r, r, off_sum + rng.random_range(1.0..2.0));
            }
            let a = tb.compile().unwrap();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = factorize(&a).unwrap();
            let x = f.solve(&b).unwrap();
            let mut res = b.clone();
            a.matvec_add(-1.0, &x, &mut res).unwrap();
            for v in res.iter_mut() {
                *v = -*v;
            }
            // res = Ax - b up to sign; bound from the factorization contract
            let bound = 1e-10 * (a.frobenius_norm() * vec_norm(&x) + vec_norm(&b));
            assert!(
                vec_norm(&res) <= bound,
                "trial {trial}: residual {} > bound {bound}",
                vec_norm(&res)
            );
        }
    }

    #[test]
    fn factorization_and_solve_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 40;
        let mut tb = TripletBuilder::new(n);
        for r in 0..n {
            for _ in 0..4 {
                tb.add(r, rng.random_range(0..n), rng.random_range(-1.0..1.0));
            }
            tb.add(r, r, 8.0);
        }
        let a = tb.compile().unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let x1 = factorize(&a).unwrap().solve(&b).unwrap();
        let x2 = factorize(&a).unwrap().solve(&b).unwrap();
        assert_eq!(x1, x2);
    }

    #[test]
    fn linear_combination_merges_patterns() {
        let mut b1 = TripletBuilder::new(3);
        b1.add(0, 0, 1.0);
        b1.add(1, 2, 2.0);
        let mut b2 = TripletBuilder::new(3);
        b2.add(0, 0, 10.0);
        b2.add(2, 0, 5.0);
        let a1 = b1.compile().unwrap();
        let a2 = b2.compile().unwrap();
        let s = SparseMatrixCsr::linear_combination(&[(2.0, &a1), (0.5, &a2)]).unwrap();
        let d = s.to_dense();
        assert_eq!(d[0][0], 7.0);
        assert_eq!(d[1][2], 4.0);
        assert_eq!(d[2][0], 2.5);
    }
}
