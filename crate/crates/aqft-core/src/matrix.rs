//! Small dense complex matrices.
//!
//! These back the verification oracles (circuit-to-matrix expansion, reference
//! transforms, schedule validation). They are deliberately naive: the widths
//! involved never exceed 2^10.

use num_complex::Complex64;

/// A square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// All-zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build a matrix column by column.
    pub fn from_columns<F>(dim: usize, mut column: F) -> Self
    where
        F: FnMut(usize) -> Vec<Complex64>,
    {
        let mut m = Matrix::zeros(dim);
        for col in 0..dim {
            let entries = column(col);
            assert_eq!(entries.len(), dim, "column length mismatch");
            for (row, v) in entries.into_iter().enumerate() {
                m.set(row, col, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..n {
                    acc += self.get(r, t) * rhs.get(t, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    /// Largest entrywise absolute difference against `other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `M M† − I`; zero for a unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            let row_r = &self.data[r * n..(r + 1) * n];
            for c in 0..n {
                let row_c = &self.data[c * n..(c + 1) * n];
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in row_r.iter().zip(row_c) {
                    acc += a * b.conj();
                }
                if r == c {
                    acc -= Complex64::new(1.0, 0.0);
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Gather rows: row `r` of the result is row `perm(r)` of `self`.
    pub fn permute_rows<F>(&self, perm: F) -> Matrix
    where
        F: Fn(usize) -> usize,
    {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            let src = perm(r);
            for c in 0..n {
                out.set(r, c, self.get(src, c));
            }
        }
        out
    }
}
