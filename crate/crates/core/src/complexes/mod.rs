//! Filtered cochain complexes on a basis aligned with the filtration.
//!
//! `F^pA^n` is spanned by the basis elements of degree `n` and weight `≥ p`.
//! Linear maps are dense matrices whose column `j` is the image of basis
//! element `j`.

mod decalage;
mod spectral;
#[cfg(test)]
mod props;
mod transfer;

pub use decalage::{decalage, Decalage};
pub use spectral::{spectral_sequence, Page, PageEntry, SpectralSequencePages};
pub use transfer::{classical_transfer, filtered_transfer, graded_classical_transfer, solve_homotopy, TransferDiagram};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{FieldTag, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
    pub weight: i32,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, degree: i32, weight: i32) -> Self {
        BasisElement { label: label.into(), degree, weight }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    basis: Vec<BasisElement>,
    d: Matrix,
    field: FieldTag,
}

impl FilteredComplex {
    /// Validates `d² = 0`, that `d` has degree +1 and that it preserves the filtration.
    pub fn new(basis: Vec<BasisElement>, d: Matrix, field: FieldTag) -> Result<Self> {
        let c = Self::new_unchecked(basis, d, field);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(basis: Vec<BasisElement>, d: Matrix, field: FieldTag) -> Self {
        assert_eq!((d.rows(), d.cols()), (basis.len(), basis.len()), "differential size");
        FilteredComplex { basis, d, field }
    }

    pub fn zero_differential(basis: Vec<BasisElement>, field: FieldTag) -> Self {
        let n = basis.len();
        FilteredComplex { basis, d: Matrix::zeros(n, n), field }
    }

    pub fn validate(&self) -> Result<()> {
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                if self.d.get(i, j).is_zero() {
                    continue;
                }
                let (src, dst) = (&self.basis[j], &self.basis[i]);
                if dst.degree != src.degree + 1 {
                    return Err(Error::validation(format!(
                        "d({}) has a component on {} of degree {}",
                        src.label, dst.label, dst.degree
                    )));
                }
                if dst.weight < src.weight {
                    return Err(Error::validation(format!(
                        "d({}) leaves F^{}: component on {} has weight {}",
                        src.label, src.weight, dst.label, dst.weight
                    )));
                }
            }
        }
        let dd = self.d.mul(&self.d);
        if let Some(j) = (0..self.dim()).find(|&j| (0..self.dim()).any(|i| !dd.get(i, j).is_zero())) {
            return Err(Error::validation(format!("d² ≠ 0 on {}", self.basis[j].label)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|e| e.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.label == label)
    }

    pub fn degrees(&self) -> BTreeSet<i32> {
        self.basis.iter().map(|e| e.degree).collect()
    }

    /// Smallest and largest weight, `(0, 0)` for the zero complex.
    pub fn weight_range(&self) -> (i32, i32) {
        let lo = self.basis.iter().map(|e| e.weight).min().unwrap_or(0);
        let hi = self.basis.iter().map(|e| e.weight).max().unwrap_or(0);
        (lo, hi)
    }

    pub fn indices(&self, pred: impl Fn(&BasisElement) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| pred(&self.basis[i])).collect()
    }

    pub fn degree_indices(&self, n: i32) -> Vec<usize> {
        self.indices(|e| e.degree == n)
    }

    /// `F^pA^n` as a coordinate subspace of the whole space.
    pub fn filtration_space(&self, p: i32, n: i32) -> Subspace {
        Subspace::coordinate(self.dim(), self.indices(|e| e.degree == n && e.weight >= p))
    }

    pub fn degree_space(&self, n: i32) -> Subspace {
        Subspace::coordinate(self.dim(), self.degree_indices(n))
    }

    /// Image of a subspace under `d`.
    pub fn d_image(&self, s: &Subspace) -> Subspace {
        s.image(&self.d)
    }

    /// Vectors of `s` whose differential lies in `target`.
    pub fn d_preimage(&self, s: &Subspace, target: &Subspace) -> Subspace {
        // Kernel of [d s_1 .. d s_k | t_1 .. t_l]: the first k coordinates of a
        // kernel vector give an element of s whose differential lies in target.
        let mut cols: Vec<_> = s.basis().iter().map(|v| self.d.apply(v)).collect();
        cols.extend(target.basis().iter().cloned());
        let m = Matrix::from_columns(self.dim(), &cols);
        let k = s.dim();
        let vs: Vec<_> = m
            .kernel()
            .iter()
            .map(|coef| {
                let mut v = crate::linalg::zero_vector(self.dim());
                for (c, b) in coef[..k].iter().zip(s.basis()) {
                    crate::linalg::add_scaled(&mut v, c, b);
                }
                v
            })
            .collect();
        Subspace::span(self.dim(), &vs)
    }

    pub fn cycles(&self, n: i32) -> Subspace {
        self.d_preimage(&self.degree_space(n), &Subspace::zero(self.dim()))
    }

    pub fn boundaries(&self, n: i32) -> Subspace {
        self.d_image(&self.degree_space(n - 1))
    }

    /// `dim H^n` for every degree present.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.cohomology_dims_on(&all)
    }

    /// Cohomology of the complex obtained by keeping only the basis elements
    /// in `idx` (rows and columns). For a subcomplex this is its cohomology;
    /// for a weight slice it is the cohomology of the associated graded piece.
    pub fn cohomology_dims_on(&self, idx: &[usize]) -> BTreeMap<i32, usize> {
        let d = self.d.submatrix(idx, idx);
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (k, &i) in idx.iter().enumerate() {
            by_degree.entry(self.basis[i].degree).or_default().push(k);
        }
        let rank_from = |n: i32| -> usize {
            let Some(cols) = by_degree.get(&n) else { return 0 };
            let Some(rows) = by_degree.get(&(n + 1)) else { return 0 };
            d.submatrix(rows, cols).rank()
        };
        by_degree.iter().map(|(&n, cols)| (n, cols.len() - rank_from(n) - rank_from(n - 1))).collect()
    }

    /// `dim Gr^p_F H^n`, keyed by `(p, n)`.
    pub fn graded_cohomology_dims(&self) -> BTreeMap<(i32, i32), usize> {
        let (lo, hi) = self.weight_range();
        let mut out = BTreeMap::new();
        for n in self.degrees() {
            let z = self.cycles(n);
            let b = self.boundaries(n);
            let level = |p: i32| z.intersect(&self.filtration_space(p, n)).sum(&b).dim();
            for p in lo..=hi {
                let dim = level(p) - level(p + 1);
                if dim > 0 {
                    out.insert((p, n), dim);
                }
            }
        }
        out
    }

    /// Whether `d(F^pA) = F^pA ∩ im d` for every `p` and degree.
    pub fn is_strict(&self) -> bool {
        let (lo, hi) = self.weight_range();
        self.degrees().into_iter().all(|n| {
            let im = self.boundaries(n + 1);
            (lo..=hi + 1).all(|p| {
                let lhs = self.d_image(&self.filtration_space(p, n));
                lhs == im.intersect(&self.filtration_space(p, n + 1))
            })
        })
    }

    /// The same complex with every weight replaced by zero.
    pub fn with_trivial_filtration(&self) -> FilteredComplex {
        let basis = self.basis.iter().map(|e| BasisElement::new(e.label.clone(), e.degree, 0)).collect();
        FilteredComplex { basis, d: self.d.clone(), field: self.field }
    }

    pub fn with_weights(&self, weights: &[i32]) -> Result<FilteredComplex> {
        let basis =
            self.basis.iter().zip(weights).map(|(e, &w)| BasisElement::new(e.label.clone(), e.degree, w)).collect();
        FilteredComplex::new(basis, self.d.clone(), self.field)
    }
}

/// A linear map `source → target` described by its matrix, checked against
/// degree and filtration shifts.
pub fn check_map(
    name: &str,
    m: &Matrix,
    source: &FilteredComplex,
    target: &FilteredComplex,
    degree_shift: i32,
    filtered: bool,
) -> Result<()> {
    if (m.rows(), m.cols()) != (target.dim(), source.dim()) {
        return Err(Error::validation(format!(
            "{name} has shape {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            target.dim(),
            source.dim()
        )));
    }
    for j in 0..source.dim() {
        for i in 0..target.dim() {
            if m.get(i, j).is_zero() {
                continue;
            }
            let (s, t) = (&source.basis[j], &target.basis[i]);
            if t.degree != s.degree + degree_shift {
                return Err(Error::validation(format!(
                    "{name}({}) has a component on {} of the wrong degree",
                    s.label, t.label
                )));
            }
            if filtered && t.weight < s.weight {
                return Err(Error::validation(format!(
                    "{name}({}) lowers the filtration (component on {})",
                    s.label, t.label
                )));
            }
        }
    }
    Ok(())
}

/// Checks `f·d_A = d_B·f`.
pub fn check_chain_map(name: &str, f: &Matrix, a: &FilteredComplex, b: &FilteredComplex, filtered: bool) -> Result<()> {
    check_map(name, f, a, b, 0, filtered)?;
    if f.mul(&a.d) != b.d.mul(f) {
        return Err(Error::validation(format!("{name} does not commute with the differentials")));
    }
    Ok(())
}

/// The filtered mapping cone: `C^n = A^{n+1} ⊕ B^n`, `D(a,b) = (−da, −fa + db)`.
/// Basis: the shifted source elements (labelled `s<label>`) then the target's.
pub fn filtered_cone(f: &Matrix, a: &FilteredComplex, b: &FilteredComplex) -> Result<FilteredComplex> {
    check_chain_map("f", f, a, b, true)?;
    let (na, nb) = (a.dim(), b.dim());
    let mut basis: Vec<BasisElement> =
        a.basis.iter().map(|e| BasisElement::new(format!("s{}", e.label), e.degree - 1, e.weight)).collect();
    basis.extend(b.basis.iter().cloned());
    let mut d = Matrix::zeros(na + nb, na + nb);
    for j in 0..na {
        for i in 0..na {
            let x = a.d.get(i, j);
            if !x.is_zero() {
                d.set(i, j, -x);
            }
        }
        for i in 0..nb {
            let x = f.get(i, j);
            if !x.is_zero() {
                d.set(na + i, j, -x);
            }
        }
    }
    for j in 0..nb {
        for i in 0..nb {
            d.set(na + i, na + j, b.d.get(i, j).clone());
        }
    }
    FilteredComplex::new(basis, d, a.field.join(b.field))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    /// `H(F^p f)` is an isomorphism for every `p`.
    pub levelwise_cohomology: bool,
    /// Every `F^p` of the cone is acyclic.
    pub cone_acyclic: bool,
    /// Every `Gr^p` of the cone is acyclic.
    pub graded_cone_acyclic: bool,
}

impl QuasiIsoReport {
    pub fn verdict(&self) -> bool {
        self.levelwise_cohomology
    }
}

/// Decides whether `f` is a filtered quasi-isomorphism in three independent
/// ways; disagreement is reported as an invariant failure.
pub fn is_filtered_quasi_iso(f: &Matrix, a: &FilteredComplex, b: &FilteredComplex) -> Result<QuasiIsoReport> {
    let cone = filtered_cone(f, a, b)?;
    let (lo_a, hi_a) = a.weight_range();
    let (lo_b, hi_b) = b.weight_range();
    let (lo, hi) = (lo_a.min(lo_b), hi_a.max(hi_b));

    let mut levelwise = true;
    for p in lo..=hi {
        let fa = a.indices(|e| e.weight >= p);
        let fb = b.indices(|e| e.weight >= p);
        let degrees: BTreeSet<i32> = a.degrees().union(&b.degrees()).copied().collect();
        for n in degrees {
            if !induced_iso(f, a, b, &fa, &fb, n) {
                levelwise = false;
            }
        }
    }

    let acyclic = |idx: &[usize]| cone.cohomology_dims_on(idx).values().all(|&x| x == 0);
    let cone_acyclic = (lo..=hi).all(|p| acyclic(&cone.indices(|e| e.weight >= p)));
    let graded_cone_acyclic = (lo..=hi).all(|p| acyclic(&cone.indices(|e| e.weight == p)));

    let report = QuasiIsoReport { levelwise_cohomology: levelwise, cone_acyclic, graded_cone_acyclic };
    if levelwise != cone_acyclic || cone_acyclic != graded_cone_acyclic {
        return Err(Error::invariant(format!("filtered quasi-isomorphism criteria disagree: {report:?}")));
    }
    Ok(report)
}

/// Whether `f` restricted to the subcomplexes spanned by `ia` and `ib`
/// induces an isomorphism on `H^n`.
fn induced_iso(f: &Matrix, a: &FilteredComplex, b: &FilteredComplex, ia: &[usize], ib: &[usize], n: i32) -> bool {
    let sub_a = Subspace::coordinate(a.dim(), ia.iter().copied().filter(|&i| a.basis[i].degree == n));
    let sub_a_prev = Subspace::coordinate(a.dim(), ia.iter().copied().filter(|&i| a.basis[i].degree == n - 1));
    let sub_b = Subspace::coordinate(b.dim(), ib.iter().copied().filter(|&i| b.basis[i].degree == n));
    let sub_b_prev = Subspace::coordinate(b.dim(), ib.iter().copied().filter(|&i| b.basis[i].degree == n - 1));
    let za = a.d_preimage(&sub_a, &Subspace::zero(a.dim()));
    let ba = a.d_image(&sub_a_prev);
    let zb = b.d_preimage(&sub_b, &Subspace::zero(b.dim()));
    let bb = b.d_image(&sub_b_prev);
    let ha = za.dim() - ba.dim();
    let hb = zb.dim() - bb.dim();
    let rank = za.image(f).sum(&bb).dim() - bb.dim();
    ha == hb && rank == ha
}

/// Scalar convenience used by tests and fixtures.
pub fn scalar_matrix(rows: usize, cols: usize, entries: &[(usize, usize, Scalar)]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (i, j, x) in entries {
        m.set(*i, *j, x.clone());
    }
    m
}
