use crate::complexes::{is_filtered_quasi_iso, BasisElement, FilteredComplex};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::scalar::Scalar;

use super::MixedHodgeDGA;

/// A mixed Hodge complex with finite bases.
///
/// `complex` is `A_ℂ` with the Hodge levels as its weights (so `F` is
/// coordinate), `w` is the weight of each basis vector and `conj` the
/// conjugation `σ(v) = conj · v̄`. `rational` is `(A_𝐤, W) ⊗ ℂ` with the weights
/// stored negated, and `comparison` the string of filtered quasi-isomorphisms
/// `A_𝐤⊗ℂ → S_1 ← S_2 → … → A_ℂ` between consecutive `stations`, alternating
/// in direction and starting forward.
#[derive(Clone, Debug)]
pub struct MixedHodgeComplexData {
    pub rational: FilteredComplex,
    pub complex: FilteredComplex,
    pub w: Vec<i32>,
    pub conj: Matrix,
    pub stations: Vec<FilteredComplex>,
    pub comparison: Vec<Matrix>,
    /// Basis index of the unit, if the complex is multiplicative.
    pub unit: Option<usize>,
}

impl MixedHodgeComplexData {
    /// `A_𝐤 ⊗ ℂ = A_ℂ` with the identity as comparison.
    pub fn from_parts(complex: FilteredComplex, w: Vec<i32>, conj: Matrix, unit: Option<usize>) -> Result<Self> {
        let rational = complex.with_weights(&w.iter().map(|x| -x).collect::<Vec<_>>())?;
        Ok(MixedHodgeComplexData {
            comparison: vec![Matrix::identity(complex.dim())],
            stations: vec![],
            rational,
            complex,
            w,
            conj,
            unit,
        })
    }

    /// Requires `F` to be coordinate in the monomial basis, as for presentations.
    pub fn from_mixed_hodge_dga(a: &MixedHodgeDGA) -> Result<Self> {
        let unit = a.algebra.basis().iter().position(|e| e.degree == 0);
        Self::from_parts(a.algebra.complex().clone(), a.hodge.weights.clone(), a.hodge.conj.clone(), unit)
    }

    /// The `W`-filtered complex over `ℂ`, through negated weights.
    fn w_filtered(&self) -> Result<FilteredComplex> {
        self.complex.with_weights(&self.w.iter().map(|x| -x).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// Always true for finite bases.
    pub h0_finite: bool,
    pub connected: bool,
    /// Every comparison map is a `W`-filtered quasi-isomorphism and `d` is real.
    pub comparison: bool,
    /// `(p, n, a)` where `d` on `Gr_p^W` is not strict for `F^a` in degree `n`.
    pub h1_failures: Vec<(i32, i32, i32)>,
    /// `(p, n, a)` where `F^a ⊕ F̄^{p+n−a+1} ≠ H^n(Gr_p^W)`.
    pub h2_failures: Vec<(i32, i32, i32)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.h0_finite && self.comparison && self.h1_failures.is_empty() && self.h2_failures.is_empty()
    }
}

pub fn check_mhc_axioms(data: &MixedHodgeComplexData) -> Result<AxiomReport> {
    let c = &data.complex;
    let n_all = c.dim();
    if data.w.len() != n_all || data.conj.rows() != n_all || data.conj.cols() != n_all {
        return Err(Error::validation("mixed Hodge complex data: sizes differ"));
    }
    let h0 = c.cohomology_dims().get(&0).copied() == Some(1);
    let connected = h0
        && data.unit.map_or(true, |u| {
            c.d().column(u).iter().all(Scalar::is_zero) && !c.boundaries(0).contains(&unit_vector(n_all, u))
        });
    let comparison = comparison_holds(data)? && c.d().mul(&data.conj) == data.conj.mul(&c.d().conj());

    let mut h1_failures = Vec::new();
    let mut h2_failures = Vec::new();
    let weights: std::collections::BTreeSet<i32> = data.w.iter().copied().collect();
    for &p in &weights {
        let idx: Vec<usize> = (0..n_all).filter(|&j| data.w[j] == p).collect();
        let basis: Vec<BasisElement> = idx.iter().map(|&j| c.basis()[j].clone()).collect();
        let gr = FilteredComplex::new(basis, c.d().submatrix(&idx, &idx), c.field())?;
        let sigma = data.conj.submatrix(&idx, &idx);
        let bar = |s: &Subspace| s.conj().image(&sigma);
        let (lo, hi) = gr.weight_range();
        for n in gr.degrees() {
            for a in lo..=hi + 1 {
                let lhs = gr.d_image(&gr.filtration_space(a, n));
                if lhs != gr.boundaries(n + 1).intersect(&gr.filtration_space(a, n + 1)) {
                    h1_failures.push((p, n, a));
                }
            }
            let z = gr.cycles(n);
            let b = gr.boundaries(n);
            for a in lo..=hi + 1 {
                let s1 = z.intersect(&gr.filtration_space(a, n)).sum(&b);
                let s2 = bar(&z.intersect(&gr.filtration_space(p + n - a + 1, n))).sum(&b);
                if s1.sum(&s2) != z || s1.intersect(&s2) != b {
                    h2_failures.push((p, n, a));
                }
            }
        }
    }
    Ok(AxiomReport { h0_finite: true, connected, comparison, h1_failures, h2_failures })
}

fn comparison_holds(data: &MixedHodgeComplexData) -> Result<bool> {
    let mut chain = vec![data.rational.clone()];
    chain.extend(data.stations.iter().cloned());
    chain.push(data.w_filtered()?);
    if data.comparison.len() + 1 != chain.len() {
        return Ok(false);
    }
    for (i, map) in data.comparison.iter().enumerate() {
        let (src, tgt) = if i % 2 == 0 { (&chain[i], &chain[i + 1]) } else { (&chain[i + 1], &chain[i]) };
        match is_filtered_quasi_iso(map, src, tgt) {
            Ok(r) if r.verdict() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}
