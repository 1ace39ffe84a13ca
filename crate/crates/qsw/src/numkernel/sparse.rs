use num_complex::Complex64 as C64;

use super::matrix::CMatrix;

/// Compressed sparse row complex matrix, used to apply graph-sized operators
/// without densifying them.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, C64)]) -> Self {
        let mut sorted: Vec<(usize, usize, C64)> = triplets.to_vec();
        sorted.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(sorted.len());
        for (r, c, v) in sorted {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of bounds");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != C64::new(0.0, 0.0));
        let mut indptr = vec![0; rows + 1];
        for t in &merged {
            indptr[t.0 + 1] += 1;
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Self {
            rows,
            cols,
            indptr,
            indices: merged.iter().map(|t| t.1).collect(),
            values: merged.iter().map(|t| t.2).collect(),
        }
    }

    pub fn from_dense(m: &CMatrix) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for (j, v) in m.row(i).iter().enumerate() {
                if *v != C64::new(0.0, 0.0) {
                    t.push((i, j, *v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &t)
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, C64::new(1.0, 0.0))).collect();
        Self::from_triplets(n, n, &t)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(row, col, value)` in row order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.values[k]))
        })
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.row_entries(i).find(|e| e.0 == j).map_or(C64::new(0.0, 0.0), |e| e.1)
    }

    pub fn adjoint(&self) -> Self {
        let t: Vec<_> = self.iter().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.cols, self.rows, &t)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Sum `a*self + b*other`.
    pub fn lincomb(&self, a: C64, other: &CsrMatrix, b: C64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut t: Vec<_> = self.iter().map(|(i, j, v)| (i, j, a * v)).collect();
        t.extend(other.iter().map(|(i, j, v)| (i, j, b * v)));
        Self::from_triplets(self.rows, self.cols, &t)
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut t = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row_entries(i) {
                for (j, b) in other.row_entries(k) {
                    t.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, &t)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *yi = acc;
        }
    }

    /// `out = self * b` with `b` a row-major `cols x m` block.
    pub fn mul_dense_into(&self, b: &[C64], m: usize, out: &mut [C64]) {
        assert_eq!(b.len(), self.cols * m);
        assert_eq!(out.len(), self.rows * m);
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for i in 0..self.rows {
            let orow = &mut out[i * m..(i + 1) * m];
            for k in self.indptr[i]..self.indptr[i + 1] {
                let a = self.values[k];
                let brow = &b[self.indices[k] * m..(self.indices[k] + 1) * m];
                for (o, x) in orow.iter_mut().zip(brow) {
                    *o += a * x;
                }
            }
        }
    }

    /// Column 1-norms.
    pub fn column_abs_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for (_, j, v) in self.iter() {
            s[j] += v.norm();
        }
        s
    }

    pub fn norm_one(&self) -> f64 {
        self.column_abs_sums().into_iter().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }
}
