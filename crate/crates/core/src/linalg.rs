//! Dense exact linear algebra: Gauss-Jordan elimination, kernels, linear
//! solves and subspaces kept in reduced row-echelon form.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

pub type Vector = Vec<FieldElement>;

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn from_flat(field: &Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "flat data length");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    /// Entries in row-major order.
    pub fn flat(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<FieldElement> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = &out[(r, c)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix::from_flat(&self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::from_flat(&self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix::from_flat(&self.field, self.rows, self.cols, data)
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "stack width");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::from_flat(&self.field, self.rows + other.rows, self.cols, data)
    }

    /// Gauss-Jordan elimination. Pivots are taken column by column at the
    /// first row holding a nonzero entry, so the output depends only on the
    /// input.
    pub fn rref(&self) -> Rref {
        let mut rows = self.to_rows();
        let pivots = rref_rows(&mut rows, self.cols);
        let rank = pivots.len();
        let matrix =
            Matrix::from_rows(&self.field, rows).unwrap_or_else(|_| unreachable!("rectangular by construction"));
        let matrix = if self.rows == 0 {
            Matrix::zeros(&self.field, 0, self.cols)
        } else {
            matrix
        };
        Rref { matrix, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(&self.field, self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.dim()
    }

    /// `{x : self·x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let mut basis = EchelonBasis::new(&self.field, self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.kernel()
    }

    /// Some solution of `self·x = b`, with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let n = self.cols;
        let mut rows: Vec<Vector> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        let pivots = rref_rows(&mut rows, n + 1);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![self.field.zero(); n];
        for (row, &p) in rows.iter().zip(&pivots) {
            x[p] = row[n].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vector> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { self.field.one() } else { self.field.zero() }));
                row
            })
            .collect();
        let pivots = rref_rows(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let inv: Vec<Vector> = rows.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(Matrix::from_rows(&self.field, inv).expect("square"))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// In-place Gauss-Jordan on row vectors of width `cols`; returns the pivot
/// columns. Zero rows end up at the bottom.
fn rref_rows(rows: &mut [Vector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[next][c..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(next);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            eliminate(row, pivot_row, c);
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// `row -= row[c] · pivot_row`, where `pivot_row[c] = 1` and `pivot_row` is
/// zero left of `c`.
fn eliminate(row: &mut [FieldElement], pivot_row: &[FieldElement], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let factor = row[c].clone();
    for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
        if !p.is_zero() {
            *x = &*x - &(&factor * p);
        }
    }
}

/// Incrementally maintained reduced row-echelon basis. Rows can be streamed
/// in without materializing the full condition matrix.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, ambient: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Residual of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &mut [FieldElement]) {
        assert_eq!(v.len(), self.ambient, "vector length");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            eliminate(v, row, p);
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(FieldElement::is_zero)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        if v.iter().all(FieldElement::is_zero) {
            return false;
        }
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in v[c..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        for row in &mut self.rows {
            eliminate(row, &v, c);
        }
        let at = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace {
            field: self.field,
            ambient: self.ambient,
            basis: self.rows,
            pivots: self.pivots,
        }
    }

    /// Solution space of the homogeneous system whose rows span this basis.
    pub fn kernel(&self) -> Subspace {
        let n = self.ambient;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = EchelonBasis::new(&self.field, n);
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut x = vec![self.field.zero(); n];
            x[free] = self.field.one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                x[p] = -&row[free];
            }
            out.insert(x);
        }
        out.into_subspace()
    }
}

/// Linear subspace of `F^n`, stored as a reduced row-echelon basis so that
/// structural equality is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        EchelonBasis::new(field, ambient).into_subspace()
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, &Matrix::identity(field, ambient).to_rows())
    }

    pub fn span(field: &Field, ambient: usize, vectors: &[Vector]) -> Subspace {
        let mut b = EchelonBasis::new(field, ambient);
        for v in vectors {
            b.insert(v.clone());
        }
        b.into_subspace()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn echelon(&self) -> EchelonBasis {
        EchelonBasis {
            field: self.field.clone(),
            ambient: self.ambient,
            rows: self.basis.clone(),
            pivots: self.pivots.clone(),
        }
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient != n {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool> {
        self.check_ambient(v.len())?;
        Ok(self.echelon().contains(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            for (x, b) in residual.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(c * b);
                }
            }
        }
        residual.iter().all(FieldElement::is_zero).then_some(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let mut b = self.echelon();
        for v in &other.basis {
            b.insert(v.clone());
        }
        Ok(b.into_subspace())
    }

    /// Vectors annihilated by every basis vector under the standard dot
    /// product.
    pub fn annihilator(&self) -> Subspace {
        self.echelon().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let mut b = self.annihilator().echelon();
        for v in other.annihilator().basis {
            b.insert(v);
        }
        Ok(b.kernel())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        let e = other.echelon();
        Ok(self.basis.iter().all(|v| e.contains(v)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        Ok(self == other)
    }

    /// Standard basis indices that extend this basis to one of the whole
    /// space, chosen greedily in increasing index order.
    pub fn standard_complement(&self) -> Vec<usize> {
        let mut b = self.echelon();
        let mut out = Vec::new();
        for c in 0..self.ambient {
            let mut e = vec![self.field.zero(); self.ambient];
            e[c] = self.field.one();
            if b.insert(e) {
                out.push(c);
            }
        }
        out
    }

    /// Matrix whose rows are the basis vectors.
    pub fn to_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zeros(&self.field, 0, self.ambient);
        }
        Matrix::from_rows(&self.field, self.basis.clone()).expect("rectangular basis")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        let f = q();
        Matrix::from_rows(&f, rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect()).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| q().int(x)).collect()
    }

    fn e(n: usize, i: usize) -> Vector {
        (0..n).map(|k| q().int((k == i) as i64)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(&q(), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = Matrix::zeros(&q(), 2, 2);
        let r = z.rref();
        assert_eq!((r.matrix, r.rank), (z, 0));
        let r = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.matrix, m(&[&[1, 2], &[0, 0]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(&q(), 3).kernel().is_zero());
        assert_eq!(Matrix::zeros(&q(), 2, 2).kernel().dim(), 2);
        let a = m(&[&[1, 2], &[2, 4]]);
        let k = a.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&v(&[-2, 1])).unwrap());
        assert!(a.mul_vec(&k.basis()[0]).iter().all(FieldElement::is_zero));
    }

    #[test]
    fn solve_examples() {
        let b = v(&[3, -1, 4]);
        assert_eq!(Matrix::identity(&q(), 3).solve(&b), Some(b));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&v(&[1, 2])), None);
        let a = m(&[&[1, 2], &[2, 4]]);
        let x = a.solve(&v(&[1, 2])).unwrap();
        assert_eq!(x, v(&[1, 0]));
        assert_eq!(a.mul_vec(&x), v(&[1, 2]));
    }

    #[test]
    fn subspace_examples() {
        let f = q();
        let e1 = Subspace::span(&f, 3, &[e(3, 0)]);
        let e2 = Subspace::span(&f, 3, &[e(3, 1)]);
        assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
        let u = Subspace::span(&f, 3, &[e(3, 0), e(3, 1)]);
        let w = Subspace::span(&f, 3, &[e(3, 1), e(3, 2)]);
        assert_eq!(u.intersect(&w).unwrap(), e2);
        assert!(!e1.contains(&e(3, 1)).unwrap());
        assert!(e1.equals(&Subspace::span(&f, 3, &[v(&[5, 0, 0])])).unwrap());
        assert!(e1.sum(&Subspace::zero(&f, 2)).is_err());
        assert!(e1.contains(&e(2, 0)).is_err());
    }

    #[test]
    fn inverse_and_complement() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&q(), 2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let u = Subspace::span(&q(), 2, &[v(&[1, 1])]);
        assert_eq!(u.standard_complement(), vec![0]);
        assert_eq!(u.coordinates(&v(&[3, 3])), Some(v(&[3])));
        assert_eq!(u.coordinates(&v(&[3, 2])), None);
    }

    #[test]
    fn ratfun_elimination() {
        let k = Field::ratfun2(2, ["s".into(), "t".into()]).unwrap();
        let s = k.var(0).unwrap();
        let t = k.var(1).unwrap();
        let a = Matrix::from_rows(&k, vec![vec![s.clone(), t.clone()], vec![&s * &t, &t * &t]]).unwrap();
        assert_eq!(a.rank(), 1);
        let b = Matrix::from_rows(&k, vec![vec![s.clone(), t.clone()], vec![t.clone(), s.clone()]]).unwrap();
        let inv = b.inverse().unwrap();
        assert_eq!(b.mul(&inv), Matrix::identity(&k, 2));
    }
}
