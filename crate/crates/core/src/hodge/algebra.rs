use std::collections::BTreeSet;

use super::{split_transfer, MixedHodgeComplex, MixedHodgeStructure, SplitTransfer};
use crate::ainfinity::{transfer_ainfinity, AInfinityStructure, TransferOptions, TransferResult};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::presentations::{expand, FilteredDGA, Presentation};
use crate::scalar::{Rational, Scalar};
use crate::sparse::to_dense;

/// A dg-algebra whose complex is a complex of mixed Hodge structures and
/// whose product is a morphism of mixed Hodge structures.
#[derive(Clone, Debug)]
pub struct MixedHodgeDGA {
    pub algebra: FilteredDGA,
    pub hodge: MixedHodgeStructure,
}

impl MixedHodgeDGA {
    pub fn new(algebra: FilteredDGA, hodge: MixedHodgeStructure) -> Result<Self> {
        let a = MixedHodgeDGA { algebra, hodge };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        MixedHodgeComplex { complex: self.algebra.complex().clone(), hodge: self.hodge.clone() }.validate()?;
        let (a, m) = (&self.algebra, &self.hodge);
        let n = a.dim();
        let vec = |i: usize, j: usize| to_dense(a.mul_basis(i, j), n);
        for i in 0..n {
            for j in 0..n {
                let w = m.weights[i] + m.weights[j];
                if !m.w_space(w).contains(&vec(i, j)) {
                    return Err(Error::validation(format!("product does not respect W at ({i}, {j})")));
                }
                // σ(e_i e_j) = σ(e_i) σ(e_j).
                let lhs = m.conj.apply(&vec(i, j).iter().map(Scalar::conj).collect::<Vec<_>>());
                let rhs = a.mul_dense(&m.conj.column(i), &m.conj.column(j));
                if lhs != rhs {
                    return Err(Error::validation(format!("product does not commute with conjugation at ({i}, {j})")));
                }
            }
        }
        let (lo, hi) = m.hodge_range();
        for p in lo..=hi {
            for q in lo..=hi {
                let target = m.f_space(p + q);
                for x in m.f_space(p).basis() {
                    for y in m.f_space(q).basis() {
                        if !target.contains(&a.mul_dense(x, y)) {
                            return Err(Error::validation(format!(
                                "product does not map F^{p} ⊗ F^{q} into F^{}",
                                p + q
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A presentation with `weights_w` and `conjugation`. The generator weights
    /// are the Hodge levels; `W` and `F` extend additively to monomials.
    pub fn from_presentation(p: &Presentation) -> Result<Self> {
        let ww = p
            .weights_w
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("`{}` has no weight filtration", p.name)))?;
        let algebra = expand(p)?;
        let pairs: Vec<(String, String, Scalar)> =
            p.conjugation.iter().map(|(x, y)| (x.clone(), y.clone(), Scalar::one())).collect();
        let conj = conjugation_matrix(p, &algebra, &pairs)?;
        let weights = p
            .monomials()
            .iter()
            .map(|mono| mono.iter().map(|&g| ww.get(&p.generators[g].name).copied().unwrap_or(0)).sum())
            .collect();
        let levels: Vec<i32> = algebra.basis().iter().map(|e| e.weight).collect();
        let labels = algebra.basis().iter().map(|e| e.label.clone()).collect();
        let hodge = MixedHodgeStructure::with_levels(labels, weights, &levels, conj)?;
        Self::new(algebra, hodge)
    }
}

/// The antilinear multiplicative involution with `σ(x) = c·y` and
/// `σ(y) = c̄⁻¹·x` for each `(x, y, c)`; unlisted generators are real.
pub fn conjugation_matrix(p: &Presentation, a: &FilteredDGA, pairs: &[(String, String, Scalar)]) -> Result<Matrix> {
    let n = a.dim();
    let monos = p.monomials();
    let index = |mono: &[usize]| monos.iter().position(|m| m == mono).expect("monomial basis");
    let g = p.generators.len();
    let mut image: Vec<Vec<Scalar>> = (0..g).map(|k| unit_vector(n, index(&[k]))).collect();
    for (x, y, c) in pairs {
        let (ix, iy) = match (p.generator_index(x), p.generator_index(y)) {
            (Some(ix), Some(iy)) => (ix, iy),
            _ => return Err(Error::validation(format!("conjugation pair ({x}, {y}) names an unknown generator"))),
        };
        let cinv = c.conj().inv()?;
        image[ix] = unit_vector(n, index(&[iy])).iter().map(|s| s * c).collect();
        image[iy] = unit_vector(n, index(&[ix])).iter().map(|s| s * &cinv).collect();
    }
    let unit = unit_vector(n, index(&[]));
    let cols: Vec<Vec<Scalar>> =
        monos.iter().map(|mono| mono.iter().fold(unit.clone(), |acc, &k| a.mul_dense(&acc, &image[k]))).collect();
    Ok(Matrix::from_columns(n, &cols))
}

/// A∞-structure on `H(A_ℂ)` transferred along a splitting-preserving diagram.
#[derive(Clone, Debug)]
pub struct HodgeTransfer {
    pub split: SplitTransfer,
    pub result: TransferResult,
}

impl HodgeTransfer {
    pub fn structure(&self) -> &AInfinityStructure {
        &self.result.structure
    }

    pub fn bidegree(&self, k: usize) -> (i32, i32) {
        self.split.target_bidegrees[k]
    }
}

pub fn hodge_transfer(a: &MixedHodgeDGA, opts: TransferOptions) -> Result<HodgeTransfer> {
    let split = split_transfer(&MixedHodgeComplex { complex: a.algebra.complex().clone(), hodge: a.hodge.clone() })?;
    let result = transfer_ainfinity(&split.diagram, &a.algebra, TransferOptions { filtered: false, ..opts })?;
    Ok(HodgeTransfer { split, result })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictnessReport {
    /// Basis tuples whose `ν_s` leaves the bidegree `(Σp, Σq)`.
    pub bidegree_violations: Vec<String>,
    /// `(s, m, k)` where `ν_s(W_mF^k tensor) ≠ Im ν_s ∩ W_mF^k`.
    pub strictness_failures: Vec<(usize, i32, i32)>,
    pub checked_tuples: usize,
    /// `ν_s = 0` for `3 ≤ s ≤ cap`.
    pub higher_vanish: bool,
}

impl StrictnessReport {
    pub fn passed(&self) -> bool {
        self.bidegree_violations.is_empty() && self.strictness_failures.is_empty()
    }
}

/// Checks every stored `ν_s` on all basis tuples for bidegree containment,
/// then the strictness equality on every `W_mF^k` directly.
pub fn check_strictness(t: &HodgeTransfer) -> StrictnessReport {
    let s = t.structure();
    let n = s.dim();
    let mut report = StrictnessReport { higher_vanish: true, ..Default::default() };
    let ws: BTreeSet<i32> = (0..n).map(|k| t.bidegree(k).0 + t.bidegree(k).1).collect();
    let ks: BTreeSet<i32> = (0..n).map(|k| t.bidegree(k).0).collect();
    for (&arity, op) in &s.ops {
        if arity >= 3 && !op.is_zero() {
            report.higher_vanish = false;
        }
        // (Σ(p+q), Σp) of each tuple with its value.
        let mut values: Vec<(i32, i32, Vec<Scalar>)> = Vec::new();
        for (tuple, v) in op.entries() {
            report.checked_tuples += 1;
            let (p, q) = tuple.iter().fold((0, 0), |(p, q), &k| (p + t.bidegree(k).0, q + t.bidegree(k).1));
            if let Some(&k) = v.keys().find(|&&k| t.bidegree(k) != (p, q)) {
                report.bidegree_violations.push(format!(
                    "ν_{arity}({}) has a component on {} outside bidegree ({p},{q})",
                    tuple.iter().map(|&k| s.basis[k].label.as_str()).collect::<Vec<_>>().join(", "),
                    s.basis[k].label
                ));
            }
            values.push((p + q, p, to_dense(v, n)));
        }
        let all: Vec<Vec<Scalar>> = values.iter().map(|(_, _, v)| v.clone()).collect();
        let image = Subspace::span(n, &all);
        for &m in &ws {
            for &k in &ks {
                let lhs: Vec<Vec<Scalar>> =
                    values.iter().filter(|(w, p, _)| *w <= m && *p >= k).map(|(_, _, v)| v.clone()).collect();
                let level = Subspace::coordinate(
                    n,
                    (0..n).filter(|&j| {
                        let (p, q) = t.bidegree(j);
                        p + q <= m && p >= k
                    }),
                );
                if Subspace::span(n, &lhs) != image.intersect(&level) {
                    report.strictness_failures.push((arity, m, k));
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub alpha: Rational,
    /// `(n, weight)` of cohomology classes with weight `≠ α·n`.
    pub impure: Vec<(i32, i32)>,
    /// `ν_s = 0` for `3 ≤ s ≤ cap`; only set when the input is `α`-pure.
    pub higher_vanish: Option<bool>,
    pub strictness: Option<StrictnessReport>,
}

impl PurityReport {
    pub fn is_pure(&self) -> bool {
        self.impure.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.higher_vanish == Some(true) && self.strictness.as_ref().is_some_and(StrictnessReport::passed)
    }
}

/// If `Gr_p^W H^n = 0` for `p ≠ αn`, checks that the transferred `ν_{≥3}` vanish.
pub fn purity_formality_check(a: &MixedHodgeDGA, alpha: Rational, opts: TransferOptions) -> Result<PurityReport> {
    if alpha.is_zero() {
        return Err(Error::Precondition("α must be nonzero".into()));
    }
    let t = hodge_transfer(a, opts)?;
    let s = t.structure();
    let mut impure: Vec<(i32, i32)> = (0..s.dim())
        .map(|k| (s.basis[k].degree, t.bidegree(k).0 + t.bidegree(k).1))
        .filter(|&(n, w)| Rational::from(w as i64) != &alpha * &Rational::from(n as i64))
        .collect();
    impure.dedup();
    if !impure.is_empty() {
        return Ok(PurityReport { alpha, impure, higher_vanish: None, strictness: None });
    }
    let report = check_strictness(&t);
    Ok(PurityReport { alpha, impure, higher_vanish: Some(report.higher_vanish), strictness: Some(report) })
}
