//! Dense matrices and subspaces over a [`Field`].
//!
//! Matrices act on column vectors. Subspaces are kept as echelonized row
//! bases of vectors.

use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldRef};

pub type Vector = Vec<u32>;

#[derive(Clone)]
pub struct Matrix {
    field: FieldRef,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_raw(field: &FieldRef, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from row vectors of packed field values.
    pub fn from_rows(field: &FieldRef, rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_raw(field, rows.len(), cols, data)
    }

    /// Reduces an integer matrix modulo the characteristic.
    pub fn from_int(field: &FieldRef, rows: usize, cols: usize, ints: &[i64]) -> Self {
        let data = ints.iter().map(|&v| field.from_int(v)).collect();
        Self::from_raw(field, rows, cols, data)
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldRef, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random_raw(rng)).collect();
        Self::from_raw(field, rows, cols, data)
    }

    pub fn random_invertible<R: Rng + ?Sized>(field: &FieldRef, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn raw(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry(&self, r: usize, c: usize) -> FieldElement {
        FieldElement::from_raw(&self.field, self.get(r, c))
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Ok(Matrix::from_raw(&self.field, self.rows, other.cols, out))
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch in addition".into()));
        }
        let f = &*self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix::from_raw(&self.field, self.rows, self.cols, data))
    }

    pub fn neg(&self) -> Matrix {
        let f = &*self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Matrix::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.checked_add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = &*self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix::from_raw(&self.field, self.rows, self.cols, data)
    }

    /// `self - c·I`.
    pub fn minus_scalar(&self, c: u32) -> Matrix {
        let mut m = self.clone();
        let f = &*self.field;
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i);
            m.set(i, i, f.sub(v, c));
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Applies a function to every entry (e.g. a field automorphism).
    pub fn map_entries(&self, f: impl Fn(u32) -> u32) -> Matrix {
        let data = self.data.iter().map(|&a| f(a)).collect();
        Matrix::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vector {
        let f = &*self.field;
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut result = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &*self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c);
                m.set(row, c, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = &*self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Basis of `{v : vᵀ·self = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vector> {
        self.transpose().nullspace()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.get(r, n + c));
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> FieldElement {
        assert!(self.is_square());
        let f = &*self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u32;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return FieldElement::zero(&self.field);
            };
            if pr != col {
                for c in 0..n {
                    m.data.swap(pr * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        FieldElement::from_raw(&self.field, det)
    }

    /// Commutator `a⁻¹b⁻¹ab`.
    pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
        let ai = a.inverse()?;
        let bi = b.inverse()?;
        Ok(&(&(&ai * &bi) * a) * b)
    }

    /// Conjugate `self · m · self⁻¹`.
    pub fn conjugate(&self, m: &Matrix) -> Result<Matrix> {
        Ok(&(self * m) * &self.inverse()?)
    }

    /// Little-endian byte encoding (one byte per entry when q ≤ 256).
    pub fn encode(&self) -> Vec<u8> {
        if self.field.order() <= 256 {
            self.data.iter().map(|&a| a as u8).collect()
        } else {
            self.data.iter().flat_map(|&a| a.to_le_bytes()).collect()
        }
    }

    pub fn decode(field: &FieldRef, rows: usize, cols: usize, bytes: &[u8]) -> Matrix {
        let data = if field.order() <= 256 {
            bytes.iter().map(|&b| b as u32).collect()
        } else {
            bytes
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect()
        };
        Matrix::from_raw(field, rows, cols, data)
    }

    /// Entries as coefficient vectors, row by row.
    pub fn to_coeff_rows(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.field.coeffs_raw(self.get(r, c))).collect())
            .collect()
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|c| self.entry(r, c).to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product across fields or shapes")
    }
}

impl std::ops::Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl std::ops::Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix sum across fields or shapes")
    }
}

impl std::ops::Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix difference across fields or shapes")
    }
}

/// A subspace of `F^dim` held as a reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: FieldRef,
    dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FieldRef, dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &FieldRef, dim: usize) -> Self {
        let mut s = Self::zero(field, dim);
        for i in 0..dim {
            let mut v = vec![0; dim];
            v[i] = 1;
            s.insert(&v);
        }
        s
    }

    pub fn spanned_by(field: &FieldRef, dim: usize, vectors: &[Vector]) -> Self {
        let mut s = Self::zero(field, dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the space.
    pub fn reduce(&self, v: &[u32]) -> Vector {
        let f = &*self.field;
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if c == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(b) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = &*self.field;
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for b in self.basis.iter_mut() {
            let c = b[p];
            if c == 0 {
                continue;
            }
            for (x, &y) in b.iter_mut().zip(&w) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.basis.insert(pos, w);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // solve Σ aᵢ uᵢ = Σ bⱼ wⱼ
        let f = &*self.field;
        let (m, k) = (self.dim(), other.dim());
        if m == 0 || k == 0 {
            return Subspace::zero(&self.field, self.dim);
        }
        let mut sys = Matrix::zeros(&self.field, self.dim, m + k);
        for (j, u) in self.basis.iter().enumerate() {
            for i in 0..self.dim {
                sys.set(i, j, u[i]);
            }
        }
        for (j, w) in other.basis.iter().enumerate() {
            for i in 0..self.dim {
                sys.set(i, m + j, f.neg(w[i]));
            }
        }
        let vecs: Vec<Vector> = sys
            .nullspace()
            .iter()
            .map(|sol| combine(f, &self.basis, &sol[..m], self.dim))
            .collect();
        Subspace::spanned_by(&self.field, self.dim, &vecs)
    }

    pub fn is_invariant(&self, gens: &[Matrix]) -> bool {
        gens.iter()
            .all(|g| self.basis.iter().all(|v| self.contains(&g.mul_vec(v))))
    }

    /// Indices completing the pivot set to a basis of the ambient space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.dim).filter(|i| !self.pivots.contains(i)).collect()
    }

    /// Every nonzero vector up to scalars, i.e. one representative per line.
    /// Only sensible for tiny spaces.
    pub fn lines(&self) -> Vec<Vector> {
        let f = &*self.field;
        let q = f.order() as u64;
        let d = self.dim();
        let mut out = Vec::new();
        for lead in 0..d {
            // normalized: coefficient 1 at `lead`, zero before it
            let tail = d - lead - 1;
            let count = q.pow(tail as u32);
            for mut idx in 0..count {
                let mut coeffs = vec![0u32; d];
                coeffs[lead] = 1;
                for c in coeffs.iter_mut().skip(lead + 1) {
                    *c = (idx % q) as u32;
                    idx /= q;
                }
                out.push(combine(f, &self.basis, &coeffs, self.dim));
            }
        }
        out
    }
}

/// `Σ cᵢ vᵢ`.
pub fn combine(f: &crate::gf::Field, vectors: &[Vector], coeffs: &[u32], dim: usize) -> Vector {
    let mut out = vec![0u32; dim];
    for (v, &c) in vectors.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, n) in [(2, 1), (2, 2), (3, 2), (7, 1), (13, 8)] {
            let f = Field::new(p, n).unwrap();
            let m = Matrix::random_invertible(&f, 5, &mut rng);
            let inv = m.inverse().unwrap();
            assert!((&m * &inv).is_identity());
            assert!(!m.det().is_zero());
        }
    }

    #[test]
    fn singular_matrix_has_kernel() {
        let f = Field::new(5, 1).unwrap();
        let m = Matrix::from_int(&f, 3, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        assert_eq!(m.rank(), 2);
        assert!(m.inverse().is_err());
        assert!(m.det().is_zero());
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn subspace_operations() {
        let f = Field::new(3, 1).unwrap();
        let a = Subspace::spanned_by(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::spanned_by(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersection(&b).dim(), 1);
        assert!(a.intersection(&b).contains(&[0, 2, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(!a.contains(&[0, 0, 1]));
    }

    #[test]
    fn lines_of_gf4_plane() {
        let f = Field::new(2, 2).unwrap();
        let s = Subspace::full(&f, 2);
        // (q^2 - 1)/(q - 1) = 5
        assert_eq!(s.lines().len(), 5);
    }

    #[test]
    fn encode_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, n) in [(2, 2), (13, 3)] {
            let f = Field::new(p, n).unwrap();
            let m = Matrix::random(&f, 7, 7, &mut rng);
            assert_eq!(Matrix::decode(&f, 7, 7, &m.encode()), m);
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = Field::new(3, 2).unwrap();
        for _ in 0..10 {
            let a = Matrix::random(&f, 4, 4, &mut rng);
            let b = Matrix::random(&f, 4, 4, &mut rng);
            assert_eq!((&a * &b).det(), &a.det() * &b.det());
        }
    }
}
