//! A∞-structures given by structure constants, their transfer along filtered
//! homotopy transfer diagrams, and identity checkers built on the bar construction.
//!
//! Sign conventions: the homotopy enters the kernels as `κ = −h`, and
//! `ν_n` is compared through `b_n(sx_1…sx_n) = (−1)^ε s ν_n(x_1…x_n)` with
//! `ε = Σ_j (n−j)(|x_j|−1)`.

mod bar;
mod kernels;
mod models;
mod multimap;
mod perturbation;
#[cfg(test)]
mod props;
mod tree;
mod windows;

pub use bar::{check_morphism, check_stasheff, IdentityReport, Violation};
pub use kernels::{transfer_ainfinity, HomotopyData, KernelCache, TransferOptions, TransferResult};
pub use models::{
    bigraded_transfer_on_page, er_minimal_model, filtered_minimal_model, page_isomorphism, MinimalModel, PageTransfer,
};
pub use multimap::{compose_into, compositions, MultiMap, Preimages, Tuple};
pub use perturbation::perturbed_morphism;
pub use tree::tree_transfer;
pub use windows::{check_er_windows, check_filtered_morphism, check_filtered_structure, check_map_window};

use std::collections::BTreeMap;

use crate::complexes::{BasisElement, FilteredComplex};
use crate::error::Result;
use crate::presentations::FilteredDGA;
use crate::scalar::FieldTag;
use crate::sparse::SparseVec;

pub const DEFAULT_ARITY_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityStructure {
    pub basis: Vec<BasisElement>,
    pub field: FieldTag,
    /// The differential as an arity-1 map.
    pub d: MultiMap,
    /// `ν_s` for `2 ≤ s ≤ arity_cap`; absent arities are zero.
    pub ops: BTreeMap<usize, MultiMap>,
    pub arity_cap: usize,
    pub filtered: bool,
    /// `Some(r)` when the bigrading is claimed `E_r`-minimal.
    pub er_minimal: Option<usize>,
}

impl AInfinityStructure {
    /// A dg-algebra as an A∞-structure with `ν_{≥3} = 0`.
    pub fn from_dga(a: &FilteredDGA, arity_cap: usize) -> Self {
        let n = a.dim();
        let mut mu = MultiMap::new(2);
        for i in 0..n {
            for j in 0..n {
                mu.insert(vec![i, j], a.mul_basis(i, j).clone());
            }
        }
        AInfinityStructure {
            basis: a.basis().to_vec(),
            field: a.complex().field(),
            d: MultiMap::from_matrix(a.complex().d()),
            ops: BTreeMap::from([(2, mu)]),
            arity_cap,
            filtered: true,
            er_minimal: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.basis.iter().map(|e| e.degree).collect()
    }

    pub fn weights(&self) -> Vec<i32> {
        self.basis.iter().map(|e| e.weight).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|e| e.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.label == label)
    }

    /// `ν_1 = d`, `ν_s` for `s ≥ 2`, `None` when zero or beyond the cap.
    pub fn op(&self, s: usize) -> Option<&MultiMap> {
        let m = if s == 1 { Some(&self.d) } else { self.ops.get(&s) };
        m.filter(|m| !m.is_zero() && s <= self.arity_cap)
    }

    /// `ν_s` on basis elements given by label.
    pub fn eval_labels(&self, labels: &[&str]) -> Option<SparseVec> {
        let t: Vec<usize> = labels.iter().map(|l| self.index_of(l)).collect::<Option<_>>()?;
        Some(self.op(t.len()).and_then(|m| m.get(&t)).cloned().unwrap_or_default())
    }

    /// The underlying filtered complex.
    pub fn complex(&self) -> Result<FilteredComplex> {
        let n = self.dim();
        let mut d = crate::linalg::Matrix::zeros(n, n);
        for (t, v) in self.d.entries() {
            for (&k, c) in v {
                d.set(k, t[0], c.clone());
            }
        }
        FilteredComplex::new(self.basis.clone(), d, self.field)
    }

    /// Same structure with operations above `cap` dropped.
    pub fn truncated(&self, cap: usize) -> Self {
        let mut out = self.clone();
        out.ops.retain(|&s, _| s <= cap);
        out.arity_cap = cap;
        out
    }

    pub fn with_basis(&self, basis: Vec<BasisElement>) -> Self {
        assert_eq!(basis.len(), self.dim());
        AInfinityStructure { basis, ..self.clone() }
    }

    /// Renders a vector as `c*label + …`.
    pub fn render_vector(&self, v: &SparseVec) -> String {
        render_vector(&self.basis, v)
    }
}

pub(crate) fn render_vector(basis: &[BasisElement], v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (&k, c) in v {
        let text = c.render();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, text.clone()),
        };
        let coef = if mag.contains(['+', '-']) { format!("({mag})") } else { mag };
        let term = if coef == "1" { basis[k].label.clone() } else { format!("{coef}*{}", basis[k].label) };
        if out.is_empty() {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    out
}

/// An A∞-morphism `source → target` given by components `f_s`, `1 ≤ s ≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityMorphism {
    pub source: AInfinityStructure,
    pub target: AInfinityStructure,
    pub components: BTreeMap<usize, MultiMap>,
    pub arity_cap: usize,
}

impl AInfinityMorphism {
    pub fn identity(a: &AInfinityStructure) -> Self {
        AInfinityMorphism {
            source: a.clone(),
            target: a.clone(),
            components: BTreeMap::from([(1, MultiMap::identity(a.dim()))]),
            arity_cap: a.arity_cap,
        }
    }

    pub fn component(&self, s: usize) -> Option<&MultiMap> {
        self.components.get(&s).filter(|m| !m.is_zero() && s <= self.arity_cap)
    }

    /// `f_1` as a matrix.
    pub fn linear_part(&self) -> crate::linalg::Matrix {
        let mut m = crate::linalg::Matrix::zeros(self.target.dim(), self.source.dim());
        if let Some(f1) = self.components.get(&1) {
            for (t, v) in f1.entries() {
                for (&k, c) in v {
                    m.set(k, t[0], c.clone());
                }
            }
        }
        m
    }
}
