use crate::complexes::{decalage, spectral_sequence, BasisElement, Decalage, FilteredComplex, Page};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::sparse::{add_term, axpy, from_dense, to_dense, SparseVec};

/// A filtered complex with an associative product given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredDGA {
    complex: FilteredComplex,
    /// `product[i * n + j] = μ(e_i, e_j)`.
    product: Vec<SparseVec>,
}

impl FilteredDGA {
    /// Validates degrees, filtration compatibility, associativity and Leibniz.
    pub fn new(complex: FilteredComplex, product: Vec<SparseVec>) -> Result<Self> {
        let a = Self::new_unchecked(complex, product);
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(complex: FilteredComplex, product: Vec<SparseVec>) -> Self {
        assert_eq!(product.len(), complex.dim() * complex.dim(), "product table size");
        FilteredDGA { complex, product }
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn basis(&self) -> &[BasisElement] {
        self.complex.basis()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i * self.dim() + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                axpy(&mut out, &(a * b), self.mul_basis(i, j));
            }
        }
        out
    }

    pub fn mul_dense(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        to_dense(&self.mul(&from_dense(x), &from_dense(y)), self.dim())
    }

    pub fn d_basis(&self, i: usize) -> SparseVec {
        from_dense(&self.complex.d().column(i))
    }

    pub fn d(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in x {
            for r in 0..self.dim() {
                let v = self.complex.d().get(r, i);
                if !v.is_zero() {
                    add_term(&mut out, r, &(c * v));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let b = self.basis();
        for i in 0..n {
            for j in 0..n {
                for (&k, _) in self.mul_basis(i, j) {
                    if b[k].degree != b[i].degree + b[j].degree {
                        return Err(Error::validation(format!(
                            "{}·{} has a component on {} of the wrong degree",
                            b[i].label, b[j].label, b[k].label
                        )));
                    }
                    if b[k].weight < b[i].weight + b[j].weight {
                        return Err(Error::validation(format!(
                            "{}·{} leaves F^{}",
                            b[i].label,
                            b[j].label,
                            b[i].weight + b[j].weight
                        )));
                    }
                }
            }
        }
        let ds: Vec<SparseVec> = (0..n).map(|i| self.d_basis(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d(self.mul_basis(i, j));
                let mut rhs = self.mul(&ds[i], &crate::sparse::unit(j));
                let sign = if b[i].degree % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                axpy(&mut rhs, &sign, &self.mul(&crate::sparse::unit(i), &ds[j]));
                if lhs != rhs {
                    return Err(Error::validation(format!("Leibniz rule fails on {}·{}", b[i].label, b[j].label)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = self.mul(ij, &crate::sparse::unit(k));
                    let right = self.mul(&crate::sparse::unit(i), self.mul_basis(j, k));
                    if left != right {
                        return Err(Error::validation(format!(
                            "product is not associative on ({}, {}, {})",
                            b[i].label, b[j].label, b[k].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_graded_commutative(&self) -> bool {
        let b = self.basis();
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                let neg = (b[i].degree * b[j].degree) % 2 != 0;
                let swapped: SparseVec = self.mul_basis(j, i).iter().map(|(&k, c)| (k, c.signed(neg))).collect();
                *self.mul_basis(i, j) == swapped
            })
        })
    }

    /// The same algebra over a different differential or filtration on the same basis.
    pub fn with_complex(&self, complex: FilteredComplex) -> Result<FilteredDGA> {
        if complex.dim() != self.dim() {
            return Err(Error::validation("complex has a different dimension"));
        }
        FilteredDGA::new(complex, self.product.clone())
    }

    /// Transports the product along a change of basis onto `complex`, whose
    /// basis vector `j` is column `j` of `p` in the old coordinates.
    pub fn transport(&self, complex: FilteredComplex, p: &Matrix, p_inv: &Matrix) -> Result<FilteredDGA> {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n).map(|j| from_dense(&p.column(j))).collect();
        let mut product = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let old = to_dense(&self.mul(&cols[i], &cols[j]), n);
                product.push(from_dense(&p_inv.apply(&old)));
            }
        }
        FilteredDGA::new(complex, product)
    }

    /// The algebra with its décalage filtration.
    pub fn decalage(&self) -> Result<(FilteredDGA, Decalage)> {
        let dec = decalage(&self.complex)?;
        let a = self.transport(dec.complex.clone(), &dec.basis_change, &dec.inverse)?;
        Ok((a, dec))
    }

    /// `(E_r, d_r)` with its induced product, together with the page itself.
    /// Fails when the product of representatives does not descend to classes.
    pub fn page_algebra(&self, r: usize) -> Result<(FilteredDGA, Page)> {
        let ss = spectral_sequence(&self.complex, r);
        let page = ss.pages[r].clone();
        let mut basis = Vec::new();
        let mut reps: Vec<(i32, i32, usize)> = Vec::new();
        let mut keys: Vec<(i32, i32)> = page.entries.keys().copied().collect();
        keys.sort_by_key(|&(p, q)| (p + q, p));
        let mut seen = std::collections::BTreeMap::<String, usize>::new();
        for (p, q) in keys {
            for (k, label) in page.entries[&(p, q)].labels.iter().enumerate() {
                let count = seen.entry(label.clone()).or_insert(0);
                *count += 1;
                let label = if *count == 1 { label.clone() } else { format!("{label}{}", "'".repeat(*count - 1)) };
                basis.push(BasisElement::new(label, p + q, p));
                reps.push((p, q, k));
            }
        }
        let m = basis.len();
        let offset = |p: i32, q: i32| -> usize { reps.iter().position(|&(pp, qq, _)| (pp, qq) == (p, q)).unwrap_or(0) };
        let mut d = Matrix::zeros(m, m);
        for (&(p, q), dm) in &page.differentials {
            let (src, tgt) = (offset(p, q), offset(p + r as i32, q - r as i32 + 1));
            for i in 0..dm.rows() {
                for j in 0..dm.cols() {
                    d.set(tgt + i, src + j, dm.get(i, j).clone());
                }
            }
        }
        let complex = FilteredComplex::new(basis, d, self.complex.field())?;
        let rep_vec = |idx: usize| -> SparseVec {
            let (p, q, k) = reps[idx];
            from_dense(&page.entries[&(p, q)].reps[k])
        };
        let mut product = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let (pi, qi, _) = reps[i];
                let (pj, qj, _) = reps[j];
                let key = (pi + pj, qi + qj);
                let xy = to_dense(&self.mul(&rep_vec(i), &rep_vec(j)), self.dim());
                let mut out = SparseVec::new();
                if let Some(t) = page.entries.get(&key) {
                    let coords = t.class_of(&xy).ok_or_else(|| {
                        Error::Precondition(format!(
                            "E_{r} product of {} and {} is not a class",
                            complex.basis()[i].label,
                            complex.basis()[j].label
                        ))
                    })?;
                    let off = offset(key.0, key.1);
                    for (k, c) in coords.iter().enumerate() {
                        add_term(&mut out, off + k, c);
                    }
                } else if xy.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Precondition(format!("E_{r} product leaves the page at {key:?}")));
                }
                product.push(out);
            }
        }
        let alg = FilteredDGA::new(complex, product)
            .map_err(|e| Error::Precondition(format!("E_{r} page is not a dg-algebra: {e}")))?;
        Ok((alg, page))
    }
}
