use super::sparse::CsrMatrix;

/// How homogeneous essential boundary conditions enter a linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcMode {
    /// Remove constrained rows and columns.
    Eliminate,
    /// Zero constrained rows and columns and put `1` on the diagonal. The
    /// zeroed entries stay in the sparsity pattern.
    DiagOne,
}

/// A linear system together with its boundary bookkeeping.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub mode: Option<BcMode>,
    /// Constrained indices in the full numbering, sorted.
    pub constrained: Vec<usize>,
    /// Full indices of the unknowns of `matrix` (identity unless eliminated).
    free: Vec<usize>,
    full_size: usize,
}

impl SparseSystem {
    pub fn unconstrained(matrix: CsrMatrix, rhs: Vec<f64>) -> Self {
        let n = matrix.nrows;
        Self {
            matrix,
            rhs,
            mode: None,
            constrained: Vec::new(),
            free: (0..n).collect(),
            full_size: n,
        }
    }

    pub fn full_size(&self) -> usize {
        self.full_size
    }

    pub fn free_indices(&self) -> &[usize] {
        &self.free
    }

    /// Lifts a solution of `matrix` to the full numbering.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.full_size];
        for (&i, &v) in self.free.iter().zip(x) {
            out[i] = v;
        }
        out
    }

    /// Restricts a full vector to the unknowns of `matrix`.
    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&i| x[i]).collect()
    }
}

/// Applies homogeneous conditions on `constrained` (sorted, unique).
pub fn apply_bc(matrix: &CsrMatrix, rhs: &[f64], constrained: &[usize], mode: BcMode) -> SparseSystem {
    let n = matrix.nrows;
    let mut is_c = vec![false; n];
    for &i in constrained {
        is_c[i] = true;
    }
    match mode {
        BcMode::Eliminate => {
            let free: Vec<usize> = (0..n).filter(|&i| !is_c[i]).collect();
            SparseSystem {
                matrix: matrix.submatrix(&free, &free),
                rhs: free.iter().map(|&i| rhs[i]).collect(),
                mode: Some(mode),
                constrained: constrained.to_vec(),
                free,
                full_size: n,
            }
        }
        BcMode::DiagOne => {
            let mut m = matrix.clone();
            for i in 0..n {
                for p in m.indptr[i]..m.indptr[i + 1] {
                    let j = m.indices[p];
                    if is_c[i] || is_c[j] {
                        m.data[p] = if i == j { 1.0 } else { 0.0 };
                    }
                }
            }
            // constrained rows without a stored diagonal
            let missing: Vec<(usize, usize, f64)> = constrained
                .iter()
                .filter(|&&i| m.row(i).0.binary_search(&i).is_err())
                .map(|&i| (i, i, 1.0))
                .collect();
            if !missing.is_empty() {
                let mut t: Vec<_> = m.triplets().collect();
                t.extend(missing);
                m = CsrMatrix::from_triplets(n, n, t);
            }
            let mut b = rhs.to_vec();
            for &i in constrained {
                b[i] = 0.0;
            }
            SparseSystem {
                matrix: m,
                rhs: b,
                mode: Some(mode),
                constrained: constrained.to_vec(),
                free: (0..n).collect(),
                full_size: n,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lap(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn both_modes() {
        let a = lap(4);
        let b = vec![1.0; 4];
        let e = apply_bc(&a, &b, &[0, 3], BcMode::Eliminate);
        assert_eq!(e.matrix.nrows, 2);
        assert_eq!(e.expand(&[5.0, 6.0]), vec![0.0, 5.0, 6.0, 0.0]);
        let d = apply_bc(&a, &b, &[0, 3], BcMode::DiagOne);
        assert_eq!(d.matrix.nnz(), a.nnz());
        assert_eq!(d.matrix.get(0, 0), 1.0);
        assert_eq!(d.matrix.get(1, 0), 0.0);
        assert_eq!(d.rhs, vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(d.matrix.nonzero_count(1e-14).0, 2 + 4);
    }
}
