//! Mixed Hodge structures over `ℚ`, their Deligne splittings over `ℚ(i)`,
//! splitting-preserving transfer and the strictness of the transferred
//! A∞-operations with respect to `W` and `F`.
//!
//! Spaces come with a basis adapted to `W`: basis vector `e_j` has a weight
//! and `W_m` is spanned by the `e_j` of weight `≤ m`. Conjugation is the
//! antilinear involution `σ(v) = C·v̄` for a matrix `C`; the rational
//! structure is its fixed locus.

mod algebra;
mod axioms;
mod deligne;
mod random;
mod split;
#[cfg(test)]
mod props;

pub use algebra::{
    check_strictness, conjugation_matrix, hodge_transfer, purity_formality_check, HodgeTransfer, MixedHodgeDGA,
    PurityReport, StrictnessReport,
};
pub use axioms::{check_mhc_axioms, AxiomReport, MixedHodgeComplexData};
pub use deligne::{deligne_splitting, DeligneSplitting};
pub use random::random_mhs;
pub use split::{split_transfer, MixedHodgeComplex, SplitTransfer};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedHodgeStructure {
    pub labels: Vec<String>,
    /// `W`-weight of each basis vector.
    pub weights: Vec<i32>,
    /// `F^p` for consecutive `p`; below the first key `F^p` is everything,
    /// above the last it is zero.
    hodge: BTreeMap<i32, Subspace>,
    /// `σ(v) = conj · v̄`.
    pub conj: Matrix,
}

impl MixedHodgeStructure {
    /// Validates the data; `hodge` lists `F^p` for consecutive `p`.
    pub fn new(labels: Vec<String>, weights: Vec<i32>, hodge: BTreeMap<i32, Subspace>, conj: Matrix) -> Result<Self> {
        let m = MixedHodgeStructure { labels, weights, hodge, conj };
        m.validate()?;
        Ok(m)
    }

    /// `F^p` spanned by the basis vectors of Hodge level `≥ p`.
    pub fn with_levels(labels: Vec<String>, weights: Vec<i32>, levels: &[i32], conj: Matrix) -> Result<Self> {
        let n = levels.len();
        let mut hodge = BTreeMap::new();
        if let (Some(&lo), Some(&hi)) = (levels.iter().min(), levels.iter().max()) {
            for p in lo..=hi {
                hodge.insert(p, Subspace::coordinate(n, (0..n).filter(|&j| levels[j] >= p)));
            }
        }
        Self::new(labels, weights, hodge, conj)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn w_space(&self, m: i32) -> Subspace {
        Subspace::coordinate(self.dim(), (0..self.dim()).filter(|&j| self.weights[j] <= m))
    }

    pub fn f_space(&self, p: i32) -> Subspace {
        match (self.hodge.keys().next(), self.hodge.keys().next_back()) {
            (Some(&lo), _) if p <= lo => self.hodge[&lo].clone(),
            (_, Some(&hi)) if p > hi => Subspace::zero(self.dim()),
            (None, _) => Subspace::full(self.dim()),
            _ => self.hodge[&p].clone(),
        }
    }

    /// `F̄^p = σ(F^p)`.
    pub fn fbar_space(&self, p: i32) -> Subspace {
        self.bar(&self.f_space(p))
    }

    /// `σ(S)`.
    pub fn bar(&self, s: &Subspace) -> Subspace {
        s.conj().image(&self.conj)
    }

    /// `(lo, hi)`: `F^lo` is everything and `F^{hi+1} = 0`.
    pub fn hodge_range(&self) -> (i32, i32) {
        let lo = self.hodge.keys().next().copied().unwrap_or(0);
        let hi = self.hodge.iter().filter(|(_, s)| !s.is_zero()).map(|(&p, _)| p).max().unwrap_or(lo - 1);
        (lo, hi)
    }

    pub fn weight_range(&self) -> (i32, i32) {
        let lo = self.weights.iter().copied().min().unwrap_or(0);
        let hi = self.weights.iter().copied().max().unwrap_or(-1);
        (lo, hi)
    }

    /// Indices of the basis vectors of weight exactly `m`.
    pub fn graded_indices(&self, m: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.weights[j] == m).collect()
    }

    /// `F^p Gr_m^W` and `F̄^p Gr_m^W`, in the coordinates of the weight-`m` basis vectors.
    fn graded_hodge(&self, m: i32, p: i32) -> (Subspace, Subspace) {
        let idx = self.graded_indices(m);
        let wm = self.w_space(m);
        (self.f_space(p).intersect(&wm).project(&idx), self.fbar_space(p).intersect(&wm).project(&idx))
    }

    /// `dim Gr_m^W ∩ F^p ∩ F̄^q` for `p + q = m`.
    pub fn hodge_numbers(&self) -> BTreeMap<(i32, i32), usize> {
        let (lo, hi) = self.hodge_range();
        let (wlo, whi) = self.weight_range();
        let mut out = BTreeMap::new();
        for m in wlo..=whi {
            for p in lo..=hi {
                let (f, _) = self.graded_hodge(m, p);
                let (_, fbar) = self.graded_hodge(m, m - p);
                let d = f.intersect(&fbar).dim();
                if d > 0 {
                    out.insert((p, m - p), d);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.labels.len() != n || self.conj.rows() != n || self.conj.cols() != n {
            return Err(Error::validation("mixed Hodge structure: sizes differ"));
        }
        if self.conj.mul(&self.conj.conj()) != Matrix::identity(n) {
            return Err(Error::validation("conjugation is not an involution"));
        }
        let keys: Vec<i32> = self.hodge.keys().copied().collect();
        if keys.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::validation("Hodge filtration levels are not consecutive"));
        }
        for (p, s) in &self.hodge {
            if s.ambient() != n {
                return Err(Error::validation(format!("F^{p} has the wrong ambient dimension")));
            }
            if !self.f_space(p - 1).contains_subspace(s) {
                return Err(Error::validation(format!("F^{p} is not contained in F^{}", p - 1)));
            }
        }
        if let Some(lo) = keys.first() {
            if self.hodge[lo].dim() != n {
                return Err(Error::validation(format!("F^{lo} is not the whole space")));
            }
        }
        let (wlo, whi) = self.weight_range();
        for m in wlo..=whi {
            let wm = self.w_space(m);
            if self.bar(&wm) != wm {
                return Err(Error::validation(format!("W_{m} is not defined over the rationals")));
            }
        }
        let (lo, hi) = self.hodge_range();
        for m in wlo..=whi {
            let dim = self.graded_indices(m).len();
            for p in lo..=hi + 1 {
                let (f, _) = self.graded_hodge(m, p);
                let (_, fbar) = self.graded_hodge(m, m - p + 1);
                if f.dim() + fbar.dim() != dim || !f.intersect(&fbar).is_zero() {
                    return Err(Error::validation(format!(
                        "Gr_{m}^W is not pure of weight {m}: F^{p} and conj F^{} are not opposed",
                        m - p + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The structure on the span of the basis vectors `idx`, provided `F` and
    /// `σ` respect that summand.
    pub fn restrict(&self, idx: &[usize]) -> Result<MixedHodgeStructure> {
        let n = self.dim();
        let span = Subspace::coordinate(n, idx.iter().copied());
        let rest: Vec<usize> = (0..n).filter(|j| !idx.contains(j)).collect();
        let other = Subspace::coordinate(n, rest.iter().copied());
        for (p, s) in &self.hodge {
            if s.intersect(&span).dim() + s.intersect(&other).dim() != s.dim() {
                return Err(Error::validation(format!("F^{p} does not split along the summand")));
            }
        }
        if !self.conj.submatrix(&rest, idx).is_zero() {
            return Err(Error::validation("conjugation does not preserve the summand"));
        }
        let hodge = self.hodge.iter().map(|(&p, s)| (p, s.intersect(&span).project(idx))).collect();
        MixedHodgeStructure::new(
            idx.iter().map(|&j| self.labels[j].clone()).collect(),
            idx.iter().map(|&j| self.weights[j]).collect(),
            hodge,
            self.conj.submatrix(idx, idx),
        )
    }
}
