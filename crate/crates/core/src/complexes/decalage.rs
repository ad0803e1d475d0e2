use super::{BasisElement, FilteredComplex};
use crate::error::{Error, Result};
use crate::linalg::{leading_index, Matrix, Subspace, Vector};

/// The décalage of a filtered complex on a re-based basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decalage {
    pub complex: FilteredComplex,
    /// Column `j` is the new basis vector `j` in the old coordinates.
    pub basis_change: Matrix,
    pub inverse: Matrix,
}

impl Decalage {
    /// Expresses a vector in old coordinates in the new basis.
    pub fn to_new(&self, v: &[crate::scalar::Scalar]) -> Vector {
        self.inverse.apply(v)
    }

    pub fn to_old(&self, v: &[crate::scalar::Scalar]) -> Vector {
        self.basis_change.apply(v)
    }
}

/// `Dec F^pA^n = {x ∈ F^{p+n}A^n : dx ∈ F^{p+n+1}A^{n+1}}`.
///
/// For each degree the nested subspaces are walked from the top weight down
/// and every step is split off by a canonical complement, so the new basis
/// vectors have distinct leading terms; each keeps the label of its leading
/// term.
pub fn decalage(c: &FilteredComplex) -> Result<Decalage> {
    c.validate()?;
    let (lo, hi) = c.weight_range();
    let mut new_basis = Vec::new();
    let mut cols: Vec<Vector> = Vec::new();
    for n in c.degrees() {
        let dec =
            |p: i32| -> Subspace { c.d_preimage(&c.filtration_space(p + n, n), &c.filtration_space(p + n + 1, n + 1)) };
        let (p_lo, p_hi) = (lo - n - 1, hi - n);
        let mut above = Subspace::zero(c.dim());
        for p in (p_lo..=p_hi).rev() {
            let here = dec(p);
            let fresh = above.complement_in(&here)?;
            for v in fresh.basis() {
                let lead = leading_index(v).expect("nonzero basis vector");
                new_basis.push(BasisElement::new(c.basis()[lead].label.clone(), n, p));
                cols.push(v.clone());
            }
            above = here;
        }
        if above.dim() != c.degree_indices(n).len() {
            return Err(Error::invariant(format!("décalage filtration is not exhaustive in degree {n}")));
        }
    }
    let basis_change = Matrix::from_columns(c.dim(), &cols);
    let inverse = basis_change.inverse().ok_or_else(|| Error::invariant("décalage basis is not a basis"))?;
    let d = inverse.mul(c.d()).mul(&basis_change);
    let complex = FilteredComplex::new(new_basis, d, c.field())
        .map_err(|e| Error::invariant(format!("décalage complex: {e}")))?;
    Ok(Decalage { complex, basis_change, inverse })
}
