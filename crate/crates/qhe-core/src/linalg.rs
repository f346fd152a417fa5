//! Dense exact linear algebra: reduced row echelon form, kernels, solving,
//! and canonical subspaces. Everything upstream reduces to these routines.
//!
//! All outputs are in canonical form (pivot-normalized, lowest terms) so that
//! certificates built on top of them are byte-reproducible.

use crate::scalar::{vec_ops, FieldSpec, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: matrix has {rows} rows but vector has length {len}")]
    DimensionMismatch { rows: usize, len: usize },
}

/// A dense matrix over the ambient field, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Mat { rows: r, cols: c, field, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul_mat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        let cur = out.at(r, c).add(&a.mul(b));
                        *out.at_mut(r, c) = cur;
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product (vector as column).
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec_ops::zeros(self.field, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] = out[r].add(&a.mul(&v[c]));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

/// Reduced row echelon form together with the pivot column list.
/// The rank of the input equals the number of pivots.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut pr = 0usize;
    for pc in 0..a.cols {
        if pr >= a.rows {
            break;
        }
        let mut sel = None;
        for r in pr..a.rows {
            if !a.at(r, pc).is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        if sel != pr {
            for c in 0..a.cols {
                let tmp = a.at(sel, c).clone();
                *a.at_mut(sel, c) = a.at(pr, c).clone();
                *a.at_mut(pr, c) = tmp;
            }
        }
        let inv = a.at(pr, pc).inv().expect("pivot is nonzero");
        for c in pc..a.cols {
            let v = a.at(pr, c).mul(&inv);
            *a.at_mut(pr, c) = v;
        }
        for r in 0..a.rows {
            if r != pr && !a.at(r, pc).is_zero() {
                let factor = a.at(r, pc).clone();
                for c in pc..a.cols {
                    let v = a.at(r, c).sub(&factor.mul(a.at(pr, c)));
                    *a.at_mut(r, c) = v;
                }
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space in pivot-normalized form: one vector per
/// free column, with a 1 in the free coordinate.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(m);
    let field = m.field();
    let mut out = Vec::new();
    let piv_set: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = Some(row);
        }
        v
    };
    for free in 0..m.cols {
        if piv_set[free].is_some() {
            continue;
        }
        let mut v = vec_ops::zeros(field, m.cols);
        v[free] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = r.at(row, free).neg();
        }
        out.push(v);
    }
    out
}

/// A particular solution of `m x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve(m: &Mat, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { rows: m.rows, len: b.len() });
    }
    let field = m.field();
    let mut aug = Mat::zeros(field, m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            *aug.at_mut(r, c) = m.at(r, c).clone();
        }
        *aug.at_mut(r, m.cols) = b[r].clone();
    }
    let (red, pivots) = rref(&aug);
    if pivots.contains(&m.cols) {
        return Ok(None);
    }
    let mut x = vec_ops::zeros(field, m.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = red.at(row, m.cols).clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &Mat) -> Option<Mat> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let field = m.field();
    let mut aug = Mat::zeros(field, n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            *aug.at_mut(r, c) = m.at(r, c).clone();
        }
        *aug.at_mut(r, n + r) = field.one();
    }
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Mat::zeros(field, n, n);
    for r in 0..n {
        for c in 0..n {
            *inv.at_mut(r, c) = red.at(r, n + c).clone();
        }
    }
    Some(inv)
}

/// A subspace of a fixed coordinate space, stored as an RREF basis.
/// Two subspaces are equal iff their representations are equal.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace {
    ambient: usize,
    field: FieldSpec,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, field, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let mut s = Subspace::empty(field, ambient);
        for i in 0..ambient {
            let mut v = vec_ops::zeros(field, ambient);
            v[i] = field.one();
            s.basis.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn from_vectors(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Subspace::empty(field, ambient);
        }
        let m = Mat::from_rows(field, vectors.to_vec());
        let (red, pivots) = rref(&m);
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Subspace { ambient, field, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; returns the residue.
    fn residue(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let c = w[pc].clone();
                for (wi, bi) in w.iter_mut().zip(&self.basis[row]) {
                    *wi = wi.sub(&c.mul(bi));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vec_ops::is_zero(&self.residue(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc].clone();
            coords.push(c.clone());
            if !c.is_zero() {
                for (wi, bi) in w.iter_mut().zip(&self.basis[row]) {
                    *wi = wi.sub(&c.mul(bi));
                }
            }
        }
        if vec_ops::is_zero(&w) {
            Some(coords)
        } else {
            None
        }
    }

    /// Insert a vector, re-canonicalizing. Returns true when the dimension grew.
    pub fn add_vector(&mut self, v: &[Scalar]) -> bool {
        let r = self.residue(v);
        if vec_ops::is_zero(&r) {
            return false;
        }
        let mut all = self.basis.clone();
        all.push(r);
        *self = Subspace::from_vectors(self.field, self.ambient, &all);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.field, self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::empty(self.field, self.ambient);
        }
        // Null space of [B1^T | B2^T] stacked columns gives coefficients of
        // equal combinations.
        let n1 = self.dim();
        let n2 = other.dim();
        let mut m = Mat::zeros(self.field, self.ambient, n1 + n2);
        for (j, b) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                *m.at_mut(i, j) = b[i].clone();
            }
        }
        for (j, b) in other.basis.iter().enumerate() {
            for i in 0..self.ambient {
                *m.at_mut(i, n1 + j) = b[i].neg();
            }
        }
        let ker = kernel_basis(&m);
        let vectors: Vec<Vec<Scalar>> = ker
            .iter()
            .map(|k| {
                let mut v = vec_ops::zeros(self.field, self.ambient);
                for (j, b) in self.basis.iter().enumerate() {
                    vec_ops::axpy(&mut v, &k[j], b);
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.field, self.ambient, &vectors)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Ambient coordinates not used as pivots; the corresponding unit vectors
    /// project to a canonical basis of the quotient.
    pub fn complement_coords(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut it = self.pivots.iter().peekable();
        for i in 0..self.ambient {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        out
    }

    /// Express `v` in quotient coordinates (the complement coordinates of the
    /// canonical complement basis): reduce mod the subspace and read off.
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.residue(v);
        self.complement_coords().iter().map(|&i| r[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        FieldSpec::Rational.parse(s).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> Mat {
        let f = FieldSpec::Rational;
        Mat::from_rows(
            f,
            rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(),
        )
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Mat::identity(FieldSpec::Rational, 3);
        let (r, p) = rref(&m);
        assert_eq!(r, m);
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn rref_single_row() {
        let m = mat(&[&[1, 1]]);
        let (r, p) = rref(&m);
        assert_eq!(r.row(0), &[q("1"), q("1")]);
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_rank_one() {
        let m = mat(&[&[2, 4], &[1, 2]]);
        let (r, p) = rref(&m);
        assert_eq!(r.row(0), &[q("1"), q("2")]);
        assert!(r.row(1).iter().all(Scalar::is_zero));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = Mat::identity(FieldSpec::Rational, 2);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn kernel_of_row_sum() {
        let m = mat(&[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![q("-1"), q("1")]]);
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = Mat::zeros(FieldSpec::Rational, 2, 3);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = Mat::identity(FieldSpec::Rational, 3);
        let b = vec![q("1"), q("5"), q("-2/3")];
        assert_eq!(solve(&m, &b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_underdetermined_particular() {
        let m = mat(&[&[1, 1]]);
        let b = vec![q("2")];
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn solve_inconsistent() {
        let m = mat(&[&[1], &[1]]);
        let b = vec![q("0"), q("1")];
        assert_eq!(solve(&m, &b).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = mat(&[&[1, 2]]);
        assert!(solve(&m, &[q("1"), q("2")]).is_err());
    }

    #[test]
    fn subspace_canonical_equality() {
        let f = FieldSpec::Rational;
        let a = Subspace::from_vectors(f, 3, &[vec![q("2"), q("0"), q("2")], vec![q("0"), q("1"), q("0")]]);
        let b = Subspace::from_vectors(f, 3, &[vec![q("1"), q("1"), q("1")], vec![q("0"), q("-3"), q("0")]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&[q("3"), q("7"), q("3")]));
        assert!(!a.contains(&[q("1"), q("0"), q("0")]));
    }

    #[test]
    fn subspace_intersection() {
        let f = FieldSpec::Rational;
        let a = Subspace::from_vectors(f, 3, &[vec![q("1"), q("0"), q("0")], vec![q("0"), q("1"), q("0")]]);
        let b = Subspace::from_vectors(f, 3, &[vec![q("0"), q("1"), q("0")], vec![q("0"), q("0"), q("1")]]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[q("0"), q("1"), q("0")]));
    }
}
