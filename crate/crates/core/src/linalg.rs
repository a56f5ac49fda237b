//! Exact linear algebra over the rationals.
//!
//! Everything downstream reduces to the operations here: reduced row echelon
//! forms, kernels, orthogonal complements with respect to the coordinate
//! pairing `<x, y> = sum x_i y_i`, and canonical subspaces whose equality is
//! representational equality of their reduced bases.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field.
pub type Scalar = BigRational;

/// Sparse coordinate vector; absent entries are zero.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `acc += c * v`, dropping entries that cancel.
pub fn add_scaled(acc: &mut SparseVec, v: &SparseVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let entry = acc.entry(*k).or_insert_with(Scalar::zero);
        *entry += x * c;
        if entry.is_zero() {
            acc.remove(k);
        }
    }
}

pub fn add_entry(acc: &mut SparseVec, k: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(k).or_insert_with(Scalar::zero);
    *entry += c;
    if entry.is_zero() {
        acc.remove(&k);
    }
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

pub fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
}

/// Dense row-major matrix with immutable shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::AmbientMismatch(self.cols, other.rows));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotABasis(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotABasis("matrix is singular".into()));
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form and the pivot columns. Zero rows are kept at the
/// bottom so the shape is preserved.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                a.data.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = a.get(r, c).recip();
        for k in c..cols {
            let v = a.get(r, k) * &inv;
            a.set(r, k, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for k in c..cols {
                let pv = a.get(r, k);
                if pv.is_zero() {
                    continue;
                }
                let v = a.get(i, k) - &factor * pv;
                a.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// A subspace of `k^ambient`, stored as the nonzero rows of a reduced row
/// echelon basis. Two subspaces are equal iff their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let (red, pivots) = rref(m);
        let rows = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Subspace { ambient: m.cols(), basis: Matrix::from_rows(m.cols(), rows), pivots }
    }

    pub fn span<I>(ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        Subspace::from_matrix(&Matrix::from_rows(ambient, rows.into_iter().collect()))
    }

    pub fn span_sparse<'a, I>(ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        Subspace::span(ambient, rows.into_iter().map(|v| to_dense(v, ambient)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    /// Coordinates of `v` in the reduced basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (r, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, x) in self.basis.row(r).iter().enumerate() {
                if !x.is_zero() {
                    residual[k] -= c * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok((0..other.dim()).all(|r| self.contains(other.basis.row(r))))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn complement(&self) -> Subspace {
        orthogonal_complement(self)
    }
}

/// Right null space of `m`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (red, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut rows = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red.get(r, free).clone();
        }
        rows.push(v);
    }
    Subspace::span(cols, rows)
}

/// Complement with respect to the coordinate pairing.
pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    kernel(&s.basis)
}

pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.check_ambient(b)?;
    Ok(a == b)
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.check_ambient(b)?;
    Ok(Subspace::span(a.ambient, a.basis_vectors().into_iter().chain(b.basis_vectors())))
}

/// Intersection via the kernel of the stacked system `sum x_i a_i - sum y_j b_j = 0`.
pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.check_ambient(b)?;
    let (da, db) = (a.dim(), b.dim());
    let mut stacked = Matrix::zeros(a.ambient, da + db);
    for r in 0..da {
        for c in 0..a.ambient {
            stacked.set(c, r, a.basis.get(r, c).clone());
        }
    }
    for r in 0..db {
        for c in 0..a.ambient {
            stacked.set(c, da + r, -b.basis.get(r, c).clone());
        }
    }
    let ker = kernel(&stacked);
    let rows = ker.basis_vectors().into_iter().map(|coeffs| {
        let mut v = vec![Scalar::zero(); a.ambient];
        for (r, c) in coeffs[..da].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, x) in a.basis.row(r).iter().enumerate() {
                v[k] += c * x;
            }
        }
        v
    });
    Ok(Subspace::span(a.ambient, rows))
}

/// Transition matrices between two bases (given as rows) and between their
/// dual bases.
///
/// `P` expresses the second basis in the first: `w_j = sum_i P[i][j] v_i`.
/// `T` does the same for the dual bases: `w*_j = sum_i T[i][j] v*_i`.
/// The result satisfies `T^-1 = P^t`, which is re-checked before returning.
pub fn transition_and_dual(basis_a: &Matrix, basis_b: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = basis_a.rows();
    for m in [basis_a, basis_b] {
        if m.rows() != m.cols() || m.rows() != n {
            return Err(Error::NotABasis(format!(
                "expected two {n}x{n} bases, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let a_inv = basis_a.inverse()?;
    let b_inv = basis_b.inverse()?;
    // rows of B = P^t A
    let p = basis_b.mul(&a_inv)?.transpose();
    // dual basis vectors (rows) pair to the identity with the basis rows
    let dual_a = a_inv.transpose();
    let dual_b = b_inv.transpose();
    // rows of dual_b = T^t dual_a
    let t = dual_b.mul(&dual_a.inverse()?)?.transpose();
    if t.inverse()? != p.transpose() {
        return Err(Error::Inconsistent("dual transition matrix is not P^-t".into()));
    }
    Ok((p, t))
}

/// Renders a scalar compactly: integers without denominator.
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        x.to_string()
    }
}

pub fn is_unit_sign(x: &Scalar) -> bool {
    x.is_integer() && x.abs().is_one()
}
