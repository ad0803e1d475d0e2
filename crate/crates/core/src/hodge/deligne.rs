use std::collections::BTreeMap;

use super::MixedHodgeStructure;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};

/// `V_ℂ = ⊕ I^{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeligneSplitting {
    pub blocks: BTreeMap<(i32, i32), Subspace>,
}

impl DeligneSplitting {
    pub fn block(&self, p: i32, q: i32) -> Option<&Subspace> {
        self.blocks.get(&(p, q))
    }

    /// The block basis vectors as columns, block by block, with the bidegree of each.
    pub fn adapted_basis(&self) -> (Vec<Vector>, Vec<(i32, i32)>) {
        let mut cols = Vec::new();
        let mut bidegrees = Vec::new();
        for (&pq, s) in &self.blocks {
            for v in s.basis() {
                cols.push(v.clone());
                bidegrees.push(pq);
            }
        }
        (cols, bidegrees)
    }

    fn span_where(&self, n: usize, keep: impl Fn(i32, i32) -> bool) -> (Subspace, usize) {
        let mut s = Subspace::zero(n);
        let mut dims = 0;
        for (&(p, q), b) in &self.blocks {
            if keep(p, q) {
                s = s.sum(b);
                dims += b.dim();
            }
        }
        (s, dims)
    }

    /// `W_m = ⊕_{p+q≤m} I^{p,q}`, `F^k = ⊕_{p≥k} I^{p,q}`, as exact subspace
    /// equalities with direct sums, and `σ I^{p,q} ≡ I^{q,p}` modulo `W_{p+q−2}`.
    pub fn check(&self, m: &MixedHodgeStructure) -> Result<()> {
        let n = m.dim();
        let (total, dims) = self.span_where(n, |_, _| true);
        if dims != n || total.dim() != n {
            return Err(Error::validation("the blocks do not form a direct sum decomposition"));
        }
        let (wlo, whi) = m.weight_range();
        for w in wlo - 1..=whi {
            let (s, _) = self.span_where(n, |p, q| p + q <= w);
            if s != m.w_space(w) {
                return Err(Error::validation(format!("W_{w} is not the sum of I^(p,q) with p+q ≤ {w}")));
            }
        }
        let (lo, hi) = m.hodge_range();
        for k in lo..=hi + 1 {
            let (s, _) = self.span_where(n, |p, _| p >= k);
            if s != m.f_space(k) {
                return Err(Error::validation(format!("F^{k} is not the sum of I^(p,q) with p ≥ {k}")));
            }
        }
        for (&(p, q), b) in &self.blocks {
            let target = self.blocks.get(&(q, p)).cloned().unwrap_or_else(|| Subspace::zero(n));
            if !target.sum(&m.w_space(p + q - 2)).contains_subspace(&m.bar(b)) {
                return Err(Error::validation(format!("conj I^({p},{q}) is not I^({q},{p}) modulo W_{}", p + q - 2)));
            }
        }
        Ok(())
    }

    /// The matrix with the adapted basis as columns.
    pub fn basis_matrix(&self, n: usize) -> Matrix {
        Matrix::from_columns(n, &self.adapted_basis().0)
    }
}

/// `I^{p,q} = F^p ∩ W_{p+q} ∩ (F̄^q ∩ W_{p+q} + Σ_{j≥2} F̄^{q−j+1} ∩ W_{p+q−j})`,
/// checked against both defining identities.
pub fn deligne_splitting(m: &MixedHodgeStructure) -> Result<DeligneSplitting> {
    m.validate()?;
    let (lo, hi) = m.hodge_range();
    let (wlo, whi) = m.weight_range();
    let mut blocks = BTreeMap::new();
    for w in wlo..=whi {
        let ww = m.w_space(w);
        for p in lo..=hi {
            let q = w - p;
            let left = m.f_space(p).intersect(&ww);
            if left.is_zero() {
                continue;
            }
            let mut right = m.fbar_space(q).intersect(&ww);
            for j in 2..=(w - wlo) {
                right = right.sum(&m.fbar_space(q - j + 1).intersect(&m.w_space(w - j)));
            }
            let block = left.intersect(&right);
            if !block.is_zero() {
                blocks.insert((p, q), block);
            }
        }
    }
    let split = DeligneSplitting { blocks };
    split.check(m).map_err(|e| Error::validation(format!("not a mixed Hodge structure: {e}")))?;
    Ok(split)
}
