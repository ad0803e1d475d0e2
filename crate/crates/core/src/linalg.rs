//! Dense exact linear algebra over [`Scalar`].
//!
//! Every choice made here (pivots, kernel bases, complements, sections) is
//! a deterministic function of the input values; the transfer constructions
//! downstream inherit that determinism.

use std::fmt;

use crate::error::LinalgError;
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Index of the first nonzero coordinate.
pub fn leading_index(v: &[Scalar]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

pub fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
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

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
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

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
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
                        out.add_at(r, c, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = zero_vector(self.rows);
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, k);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form with the leftmost-pivot rule; pivot rows are
    /// chosen as the first row (from the current one down) with a nonzero entry.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).inv().expect("nonzero pivot");
            for k in c..m.cols {
                let v = m.get(lead, k) * &inv;
                m.set(lead, k, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for k in c..m.cols {
                    let pk = m.get(lead, k);
                    if pk.is_zero() {
                        continue;
                    }
                    let v = m.get(r, k) - &(&factor * pk);
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space: one vector per free column, free variable set to 1.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                let x = r.get(row, free);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn kernel_space(&self) -> Subspace {
        Subspace::span(self.cols, &self.kernel())
    }

    pub fn image_space(&self) -> Subspace {
        Subspace::span(self.rows, &self.columns())
    }

    /// A solution of `self · x = b` with free variables zero, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&idx, &cols))
    }
}

/// The canonical right inverse of a surjection: solve on the pivot columns of
/// `rref(M)` and put zeros in every other row.
pub fn split_surjection(m: &Matrix) -> Result<Matrix, LinalgError> {
    let (_, pivots) = m.rref();
    if pivots.len() < m.rows() {
        return Err(LinalgError::NotSurjective { rank: pivots.len(), rows: m.rows() });
    }
    let rows: Vec<usize> = (0..m.rows()).collect();
    let square = m.submatrix(&rows, &pivots);
    let inv = square.inverse().ok_or(LinalgError::NotSurjective { rank: pivots.len(), rows: m.rows() })?;
    let mut s = Matrix::zeros(m.cols(), m.rows());
    for (i, &p) in pivots.iter().enumerate() {
        for c in 0..m.rows() {
            s.set(p, c, inv.get(i, c).clone());
        }
    }
    Ok(s)
}

/// A subspace of `Scalar^ambient`, stored as the rows of its reduced row echelon
/// basis. Two equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient {}, dim {}) ", self.ambient, self.dim())?;
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", rows.join(" "))
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit_vector(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of coordinate vectors `e_i` for `i` in `indices`.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let vs: Vec<Vector> = indices.into_iter().map(|i| unit_vector(ambient, i)).collect();
        Self::span(ambient, &vs)
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec());
        assert_eq!(m.cols(), ambient, "vector length differs from ambient dimension");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
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

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v ∉ self`.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            add_scaled(&mut rest, &-c, b);
        }
        is_zero_vector(&rest).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let k = self.dim();
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| v.iter().map(|x| -x).collect::<Vector>()));
        let m = Matrix::from_columns(self.ambient, &cols);
        let vs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|coef| {
                let mut v = zero_vector(self.ambient);
                for (c, b) in coef[..k].iter().zip(&self.basis) {
                    add_scaled(&mut v, c, b);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Image under a linear map (a matrix with `ambient` columns).
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// Entrywise conjugate subspace.
    pub fn conj(&self) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| v.iter().map(Scalar::conj).collect()).collect();
        Subspace::span(self.ambient, &vs)
    }

    /// The canonical complement of `self` inside `outer`: the canonical basis
    /// vectors of `outer` whose pivot column is not a pivot of `self`.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != outer.ambient {
            return Err(LinalgError::Dimension("complement ambient mismatch".into()));
        }
        if !outer.contains_subspace(self) {
            return Err(LinalgError::NotContained);
        }
        let vs: Vec<Vector> = outer
            .basis
            .iter()
            .zip(&outer.pivots)
            .filter(|(_, p)| !self.pivots.contains(p))
            .map(|(v, _)| v.clone())
            .collect();
        Ok(Subspace::span(self.ambient, &vs))
    }

    /// Restriction to the coordinates in `coords` (in that order).
    pub fn project(&self, coords: &[usize]) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
        Subspace::span(coords.len(), &vs)
    }

    /// Embeds into a larger ambient space, placing coordinate `i` at `coords[i]`.
    pub fn embed(&self, ambient: usize, coords: &[usize]) -> Subspace {
        let vs: Vec<Vector> = self
            .basis
            .iter()
            .map(|v| {
                let mut w = zero_vector(ambient);
                for (x, &c) in v.iter().zip(coords) {
                    w[c] = x.clone();
                }
                w
            })
            .collect();
        Subspace::span(ambient, &vs)
    }
}

/// `S ⊕ C = T` canonical complement, as a free function.
pub fn complement(s: &Subspace, t: &Subspace) -> Result<Subspace, LinalgError> {
    s.complement_in(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));
        let z = Matrix::zeros(2, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let m = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rref(), (Matrix::from_i64_rows(&[&[1, 2], &[0, 0]]), vec![0]));
    }

    #[test]
    fn split_surjection_examples() {
        assert_eq!(split_surjection(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
        let e = Matrix::from_i64_rows(&[&[1, 0]]);
        assert_eq!(split_surjection(&e).unwrap(), Matrix::from_i64_rows(&[&[1], &[0]]));
        let ones = Matrix::from_i64_rows(&[&[1, 1]]);
        assert_eq!(split_surjection(&ones).unwrap(), Matrix::from_i64_rows(&[&[1], &[0]]));
        let not = Matrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(matches!(split_surjection(&not), Err(LinalgError::NotSurjective { .. })));
    }

    #[test]
    fn complement_examples() {
        let t = Subspace::full(2);
        assert!(t.complement_in(&t).unwrap().is_zero());
        assert_eq!(Subspace::zero(2).complement_in(&t).unwrap(), t);
        let diag = Subspace::span(2, &[vec![s(1), s(1)]]);
        assert_eq!(diag.complement_in(&t).unwrap(), Subspace::span(2, &[vec![s(0), s(1)]]));
        let e1 = Subspace::coordinate(2, [0]);
        let e2 = Subspace::coordinate(2, [1]);
        assert_eq!(e1.complement_in(&e2), Err(LinalgError::NotContained));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, &[vec![s(1), s(1), s(0)], vec![s(0), s(0), s(1)]]);
        let b = Subspace::span(3, &[vec![s(1), s(0), s(0)], vec![s(0), s(1), s(1)]]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::span(3, &[vec![s(1), s(1), s(1)]]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&m.apply(v)));
        }
        let x = m.solve(&[s(2), s(4)]).unwrap();
        assert_eq!(m.apply(&x), vec![s(2), s(4)]);
        assert!(m.solve(&[s(1), s(1)]).is_none());
    }
}
