//! Identity checks through the bar construction: `(d, ν_s)` become components
//! `b_n` of a degree +1 coderivation on the tensor coalgebra of the shifted space.

use std::collections::{BTreeMap, HashMap};

use super::multimap::{compose_into, compositions, MultiMap, Preimages, Tuple};
use super::{render_vector, AInfinityMorphism, AInfinityStructure};
use crate::complexes::BasisElement;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// One failing identity: its arity, the input tuple, and the nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked_up_to: usize,
    /// Number of failing tuples per arity.
    pub failures: BTreeMap<usize, usize>,
    /// The first few violations, in arity then tuple order.
    pub violations: Vec<Violation>,
}

const MAX_LISTED: usize = 10;

impl IdentityReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failing_arity(&self) -> Option<usize> {
        self.failures.keys().next().copied()
    }

    fn record(&mut self, arity: usize, residual: &MultiMap, inputs: &[BasisElement], outputs: &[BasisElement]) {
        if residual.is_zero() {
            return;
        }
        self.failures.insert(arity, residual.nnz());
        for (t, v) in residual.entries().iter().take(MAX_LISTED.saturating_sub(self.violations.len())) {
            self.violations.push(Violation {
                arity,
                inputs: t.iter().map(|&i| inputs[i].label.clone()).collect(),
                residual: render_vector(outputs, v),
            });
        }
    }

    pub fn summary(&self) -> String {
        if self.is_ok() {
            return format!("all identities hold up to arity {}", self.checked_up_to);
        }
        let v = &self.violations[0];
        format!("identity fails at arity {} on ({}): residual {}", v.arity, v.inputs.join(", "), v.residual)
    }
}

fn eps_odd(t: &[usize], degrees: &[i32]) -> bool {
    let n = t.len() as i32;
    let e: i32 = t.iter().enumerate().map(|(j, &x)| (n - 1 - j as i32) * (degrees[x] - 1)).sum();
    e.rem_euclid(2) == 1
}

/// `m̂_n(sx_1…sx_n) = (−1)^ε s m_n(x_1…x_n)`.
pub(crate) fn hat(m: &MultiMap, degrees: &[i32]) -> MultiMap {
    m.negate_where(|t| eps_odd(t, degrees))
}

/// Entries of `outer` keyed by (slot, basis index at that slot).
struct SlotIndex<'a> {
    by_slot: HashMap<(usize, usize), Vec<(&'a Tuple, &'a SparseVec)>>,
}

impl<'a> SlotIndex<'a> {
    fn new(m: &'a MultiMap) -> Self {
        let mut by_slot: HashMap<(usize, usize), Vec<(&Tuple, &SparseVec)>> = HashMap::new();
        for (t, v) in m.entries() {
            for (r, &k) in t.iter().enumerate() {
                by_slot.entry((r, k)).or_default().push((t, v));
            }
        }
        SlotIndex { by_slot }
    }
}

/// `acc += scale · Σ_r outer(1^r ⊗ inner ⊗ 1^{…})` where `inner` has shifted
/// degree +1, so passing it over `sx_1…sx_r` gives `(−1)^{Σ(|x_k|−1)}`.
fn insert_coderivation(
    outer: &SlotIndex,
    outer_arity: usize,
    inner: &MultiMap,
    degrees: &[i32],
    scale: &Scalar,
    acc: &mut MultiMap,
) {
    for (tj, vj) in inner.entries() {
        for (&k, c) in vj {
            for r in 0..outer_arity {
                let Some(list) = outer.by_slot.get(&(r, k)) else { continue };
                for (ti, vi) in list {
                    let shift: i32 = ti[..r].iter().map(|&x| degrees[x] - 1).sum();
                    let mut full = Vec::with_capacity(ti.len() + tj.len() - 1);
                    full.extend_from_slice(&ti[..r]);
                    full.extend_from_slice(tj);
                    full.extend_from_slice(&ti[r + 1..]);
                    let coef = (scale * c).signed(shift.rem_euclid(2) == 1);
                    acc.add(full, vi, &coef);
                }
            }
        }
    }
}

/// Verifies `Σ b_i(1^r ⊗ b_j ⊗ 1^t) = 0` for every arity up to the cap.
pub fn check_stasheff(a: &AInfinityStructure) -> IdentityReport {
    let degrees = a.degrees();
    let cap = a.arity_cap;
    let b: BTreeMap<usize, MultiMap> = (1..=cap).filter_map(|s| a.op(s).map(|m| (s, hat(m, &degrees)))).collect();
    let index: BTreeMap<usize, SlotIndex> = b.iter().map(|(&s, m)| (s, SlotIndex::new(m))).collect();
    let mut report = IdentityReport { checked_up_to: cap, ..Default::default() };
    for n in 1..=cap {
        let mut acc = MultiMap::new(n);
        for j in 1..=n {
            let i = n + 1 - j;
            let (Some(bj), Some(bi)) = (b.get(&j), index.get(&i)) else { continue };
            insert_coderivation(bi, i, bj, &degrees, &Scalar::one(), &mut acc);
        }
        report.record(n, &acc, &a.basis, &a.basis);
    }
    report
}

/// Verifies `Σ b^T_k(F̂_{r_1} ⊗ … ⊗ F̂_{r_k}) = Σ F̂_i(1^r ⊗ b^S_j ⊗ 1^t)` up to the cap.
pub fn check_morphism(f: &AInfinityMorphism) -> IdentityReport {
    let (src, tgt) = (&f.source, &f.target);
    let sdeg = src.degrees();
    let tdeg = tgt.degrees();
    let cap = f.arity_cap;
    let fh: BTreeMap<usize, MultiMap> = (1..=cap).filter_map(|s| f.component(s).map(|m| (s, hat(m, &sdeg)))).collect();
    let fpre: BTreeMap<usize, Preimages> = fh.iter().map(|(&s, m)| (s, Preimages::new(m, 0, &sdeg))).collect();
    let findex: BTreeMap<usize, SlotIndex> = fh.iter().map(|(&s, m)| (s, SlotIndex::new(m))).collect();
    let bt: BTreeMap<usize, MultiMap> =
        (1..=tgt.arity_cap.min(cap)).filter_map(|s| tgt.op(s).map(|m| (s, hat(m, &tdeg)))).collect();
    let bs: BTreeMap<usize, MultiMap> =
        (1..=src.arity_cap.min(cap)).filter_map(|s| src.op(s).map(|m| (s, hat(m, &sdeg)))).collect();
    let mut report = IdentityReport { checked_up_to: cap, ..Default::default() };
    for n in 1..=cap {
        let mut acc = MultiMap::new(n);
        for (&k, bk) in &bt {
            for comp in compositions(n, k) {
                let inners: Option<Vec<&Preimages>> = comp.iter().map(|r| fpre.get(r)).collect();
                if let Some(inners) = inners {
                    compose_into(bk, &inners, &Scalar::one(), &mut acc);
                }
            }
        }
        for j in 1..=n {
            let i = n + 1 - j;
            let (Some(bj), Some(fi)) = (bs.get(&j), findex.get(&i)) else { continue };
            insert_coderivation(fi, i, bj, &sdeg, &-Scalar::one(), &mut acc);
        }
        report.record(n, &acc, &src.basis, &tgt.basis);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::fixture;

    #[test]
    fn dga_passes_stasheff() {
        let a = fixture("kodaira-thurston").unwrap().algebra().unwrap();
        let s = AInfinityStructure::from_dga(&a, 4);
        let report = check_stasheff(&s);
        assert!(report.is_ok(), "{}", report.summary());
        let id = AInfinityMorphism::identity(&s);
        assert!(check_morphism(&id).is_ok());
    }

    #[test]
    fn broken_leibniz_fails_at_arity_two() {
        let a = fixture("exemplet").unwrap().algebra().unwrap();
        let mut s = AInfinityStructure::from_dga(&a, 3);
        let (t, v) = s.d.entries().iter().next().map(|(t, v)| (t.clone(), v.clone())).unwrap();
        s.d.insert(t, v.iter().map(|(&k, c)| (k, -c)).collect());
        let report = check_stasheff(&s);
        assert_eq!(report.first_failing_arity(), Some(2));
    }
}
