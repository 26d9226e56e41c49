//! Dense matrices over a [`FieldCtx`]. Subfield computations stay inside the
//! subfield because every operation here is a field operation.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn from_rows<R: AsRef<[Elem]>>(cols: usize, rows: &[R]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, f: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(m[(i, j)], f.mul(a, other[(k, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        m
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, f: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(f, self.row(i), v))
            .collect()
    }

    pub fn map_entries(&self, g: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| g(x)).collect() }
    }

    /// Brings the matrix into reduced row-echelon form in place and returns
    /// the pivot columns. Zero rows are dropped.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self[(i, j)], f.mul(factor, self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * self.cols);
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    pub fn det(&self, f: &FieldCtx) -> Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Elem::ZERO;
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = f.neg(det);
            }
            let pivot = m[(c, c)];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in c + 1..n {
                let factor = f.mul(m[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m[(i, j)], f.mul(factor, m[(c, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Elem::ONE;
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Ok(inv)
    }

    /// Basis (as rows, in RREF) of `{x : self · x = 0}`.
    pub fn nullspace(&self, f: &FieldCtx) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis[(k, fc)] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                basis[(k, pc)] = f.neg(m[(r, fc)]);
            }
        }
        basis.rref(f);
        basis
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn scale(f: &FieldCtx, c: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn add_vec(f: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// `a + c·b`
pub fn axpy(f: &FieldCtx, a: &[Elem], c: Elem, b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let g = f.generator();
        let m = Matrix::from_rows(3, &[vec![g, Elem::ONE, Elem::ZERO], vec![Elem::ZERO, g, Elem::ONE], vec![Elem::ONE, Elem::ZERO, g]]);
        if m.det(&f).is_zero() {
            assert!(m.inverse(&f).is_err());
        } else {
            let inv = m.inverse(&f).unwrap();
            assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        }
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldCtx::new(2, 1, 3).unwrap();
        let g = f.generator();
        let m = Matrix::from_rows(4, &[vec![Elem::ONE, g, Elem::ZERO, g], vec![g, f.mul(g, g), Elem::ZERO, f.mul(g, g)]]);
        assert_eq!(m.rank(&f), 1);
        let ns = m.nullspace(&f);
        assert_eq!(ns.rows(), 3);
        for v in ns.row_vecs() {
            assert!(m.apply(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn det_matches_rank() {
        let f = FieldCtx::new(2, 1, 2).unwrap();
        let els: Vec<Elem> = f.elements().collect();
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        let m = Matrix::from_rows(2, &[[*a, *b], [*c, *d]]);
                        assert_eq!(m.det(&f).is_zero(), m.rank(&f) < 2);
                    }
                }
            }
        }
    }
}
