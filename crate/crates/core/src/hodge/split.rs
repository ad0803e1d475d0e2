use std::collections::BTreeMap;

use super::{deligne_splitting, DeligneSplitting, MixedHodgeStructure};
use crate::complexes::{classical_transfer, is_filtered_quasi_iso, BasisElement, FilteredComplex, TransferDiagram};
use crate::error::{Error, Result};
use crate::linalg::{leading_index, Matrix, Vector};

/// A cochain complex whose terms carry mixed Hodge structures. The weights
/// stored in `complex` are not used; `hodge` carries `W` and `F`.
#[derive(Clone, Debug)]
pub struct MixedHodgeComplex {
    pub complex: FilteredComplex,
    pub hodge: MixedHodgeStructure,
}

impl MixedHodgeComplex {
    pub fn new(complex: FilteredComplex, hodge: MixedHodgeStructure) -> Result<Self> {
        let c = MixedHodgeComplex { complex, hodge };
        c.validate()?;
        Ok(c)
    }

    /// Each `A^n` is a sub-structure and `d` is a morphism of mixed Hodge structures.
    pub fn validate(&self) -> Result<()> {
        let (c, m) = (&self.complex, &self.hodge);
        c.validate()?;
        m.validate()?;
        if m.dim() != c.dim() {
            return Err(Error::validation("Hodge data and complex have different dimensions"));
        }
        for n in c.degrees() {
            m.restrict(&c.degree_indices(n))
                .map_err(|e| Error::validation(format!("degree {n} is not a sub-structure: {e}")))?;
        }
        let d = c.d();
        let (wlo, whi) = m.weight_range();
        for w in wlo..=whi {
            if !m.w_space(w).contains_subspace(&m.w_space(w).image(d)) {
                return Err(Error::validation(format!("d does not preserve W_{w}")));
            }
        }
        let (lo, hi) = m.hodge_range();
        for p in lo..=hi {
            if !m.f_space(p).contains_subspace(&m.f_space(p).image(d)) {
                return Err(Error::validation(format!("d does not preserve F^{p}")));
            }
        }
        if d.mul(&m.conj) != m.conj.mul(&d.conj()) {
            return Err(Error::validation("d does not commute with conjugation"));
        }
        Ok(())
    }

    /// The Deligne splitting of each `A^n`, embedded in the total space.
    pub fn splittings(&self) -> Result<BTreeMap<i32, DeligneSplitting>> {
        let c = &self.complex;
        let mut out = BTreeMap::new();
        for n in c.degrees() {
            let idx = c.degree_indices(n);
            let local = deligne_splitting(&self.hodge.restrict(&idx)?)?;
            let blocks = local.blocks.iter().map(|(&pq, s)| (pq, s.embed(c.dim(), &idx))).collect();
            out.insert(n, DeligneSplitting { blocks });
        }
        Ok(out)
    }
}

/// Transfer diagram onto cohomology whose maps preserve Deligne splittings.
#[derive(Clone, Debug)]
pub struct SplitTransfer {
    /// Over `ℚ(i)`; the target weights are the Hodge levels `p`.
    pub diagram: TransferDiagram,
    pub splittings: BTreeMap<i32, DeligneSplitting>,
    /// Columns: the adapted basis of the source.
    pub adapted: Matrix,
    pub source_bidegrees: Vec<(i32, i32)>,
    /// `(p, q)` of each cohomology basis vector; its weight is `p + q`.
    pub target_bidegrees: Vec<(i32, i32)>,
}

impl SplitTransfer {
    /// Projector onto `⊕_{keep(p,q)} I^{p,q}` on the source.
    pub fn source_projector(&self, keep: impl Fn(i32, i32) -> bool) -> Matrix {
        let n = self.source_bidegrees.len();
        let mut diag = Matrix::zeros(n, n);
        for (j, &(p, q)) in self.source_bidegrees.iter().enumerate() {
            if keep(p, q) {
                diag.set(j, j, crate::scalar::Scalar::one());
            }
        }
        let inv = self.adapted.inverse().expect("adapted basis");
        self.adapted.mul(&diag).mul(&inv)
    }

    pub fn target_projector(&self, keep: impl Fn(i32, i32) -> bool) -> Matrix {
        let n = self.target_bidegrees.len();
        let mut diag = Matrix::zeros(n, n);
        for (j, &(p, q)) in self.target_bidegrees.iter().enumerate() {
            if keep(p, q) {
                diag.set(j, j, crate::scalar::Scalar::one());
            }
        }
        diag
    }

    /// `f`, `g`, `h` commute with every `W_m` and `F^k` projector of the splittings.
    pub fn commutes_with_projectors(&self) -> bool {
        let all: Vec<(i32, i32)> = self.source_bidegrees.iter().chain(&self.target_bidegrees).copied().collect();
        let ws: std::collections::BTreeSet<i32> = all.iter().map(|&(p, q)| p + q).collect();
        let ks: std::collections::BTreeSet<i32> = all.iter().map(|&(p, _)| p).collect();
        let t = &self.diagram;
        let check = |src: Matrix, tgt: Matrix| {
            t.f.mul(&src) == tgt.mul(&t.f) && t.g.mul(&tgt) == src.mul(&t.g) && t.h.mul(&src) == src.mul(&t.h)
        };
        ws.iter().all(|&w| check(self.source_projector(|p, q| p + q <= w), self.target_projector(|p, q| p + q <= w)))
            && ks.iter().all(|&k| check(self.source_projector(|p, _| p >= k), self.target_projector(|p, _| p >= k)))
    }
}

/// `classical_transfer` run on each `I^{p,q}` block of the source, assembled
/// and expressed in the original basis.
pub fn split_transfer(c: &MixedHodgeComplex) -> Result<SplitTransfer> {
    c.validate()?;
    let src = &c.complex;
    let n = src.dim();
    let splittings = c.splittings()?;
    let mut cols: Vec<Vector> = Vec::new();
    let mut source_bidegrees = Vec::new();
    for s in splittings.values() {
        let (vs, bd) = s.adapted_basis();
        cols.extend(vs);
        source_bidegrees.extend(bd);
    }
    let adapted = Matrix::from_columns(n, &cols);
    let inv = adapted.inverse().ok_or_else(|| Error::invariant("Deligne blocks do not form a basis"))?;
    let d_adapted = inv.mul(src.d()).mul(&adapted);
    for j in 0..n {
        for i in 0..n {
            if !d_adapted.get(i, j).is_zero() && source_bidegrees[i] != source_bidegrees[j] {
                return Err(Error::invariant("d does not preserve the Deligne splittings"));
            }
        }
    }

    let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (j, &pq) in source_bidegrees.iter().enumerate() {
        blocks.entry(pq).or_default().push(j);
    }
    let mut target_basis = Vec::new();
    let mut target_bidegrees = Vec::new();
    // (block columns in the adapted basis, block diagram)
    let mut parts = Vec::new();
    for (&(p, q), idx) in &blocks {
        let basis = idx
            .iter()
            .map(|&j| {
                let lead = leading_index(&cols[j]).expect("nonzero block vector");
                BasisElement::new(src.basis()[lead].label.clone(), src.basis()[lead].degree, 0)
            })
            .collect();
        let block = FilteredComplex::new(basis, d_adapted.submatrix(idx, idx), src.field())?;
        let t = classical_transfer(&block)?;
        for e in t.target.basis() {
            target_basis.push(BasisElement::new(e.label.clone(), e.degree, p));
            target_bidegrees.push((p, q));
        }
        parts.push((idx.clone(), t));
    }
    // Cohomology ordered by degree, then bidegree.
    let mut order: Vec<usize> = (0..target_basis.len()).collect();
    order.sort_by_key(|&k| (target_basis[k].degree, target_bidegrees[k]));
    let mut position = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let m = target_basis.len();
    let (mut fa, mut ga, mut ha) = (Matrix::zeros(m, n), Matrix::zeros(n, m), Matrix::zeros(n, n));
    let mut offset = 0;
    for (idx, t) in &parts {
        let k = t.target.dim();
        for (bj, &j) in idx.iter().enumerate() {
            for r in 0..k {
                fa.set(position[offset + r], j, t.f.get(r, bj).clone());
                ga.set(j, position[offset + r], t.g.get(bj, r).clone());
            }
            for (bi, &i) in idx.iter().enumerate() {
                ha.set(i, j, t.h.get(bi, bj).clone());
            }
        }
        offset += k;
    }
    let mut used = BTreeMap::new();
    let target_basis: Vec<BasisElement> = order
        .iter()
        .map(|&k| {
            let e = &target_basis[k];
            let count = used.entry(e.label.clone()).or_insert(0usize);
            *count += 1;
            let label = if *count == 1 { e.label.clone() } else { format!("{}{}", e.label, "'".repeat(*count - 1)) };
            BasisElement::new(label, e.degree, e.weight)
        })
        .collect();
    let target_bidegrees: Vec<(i32, i32)> = order.iter().map(|&k| target_bidegrees[k]).collect();
    let target =
        FilteredComplex::zero_differential(target_basis, src.field().join(crate::scalar::FieldTag::GaussianRational));
    let diagram = TransferDiagram {
        source: src.clone(),
        target,
        f: fa.mul(&inv),
        g: adapted.mul(&ga),
        h: adapted.mul(&ha).mul(&inv),
    };
    diagram.validate(false).map_err(|e| Error::invariant(format!("split transfer: {e}")))?;
    let out = SplitTransfer { diagram, splittings, adapted, source_bidegrees, target_bidegrees };
    check_bifiltered(&out, &ga)?;
    Ok(out)
}

/// `g` is a filtered quasi-isomorphism for `W` (through negated weights) and for `F`,
/// both read in the adapted basis where the two filtrations are coordinate.
fn check_bifiltered(t: &SplitTransfer, g_adapted: &Matrix) -> Result<()> {
    let src = &t.diagram.source;
    let tgt = &t.diagram.target;
    let d_adapted = t.adapted.inverse().expect("adapted basis").mul(src.d()).mul(&t.adapted);
    let src_basis: Vec<BasisElement> = (0..src.dim())
        .map(|j| {
            let lead = leading_index(&t.adapted.column(j)).expect("nonzero");
            BasisElement::new(format!("v{j}"), src.basis()[lead].degree, 0)
        })
        .collect();
    let relabel = |basis: &[BasisElement], bd: &[(i32, i32)], key: &dyn Fn(i32, i32) -> i32| -> Vec<BasisElement> {
        basis.iter().zip(bd).map(|(e, &(p, q))| BasisElement::new(e.label.clone(), e.degree, key(p, q))).collect()
    };
    for (name, key) in [("W", &(|p: i32, q: i32| -(p + q)) as &dyn Fn(i32, i32) -> i32), ("F", &|p: i32, _q: i32| p)] {
        let a = FilteredComplex::new(relabel(&src_basis, &t.source_bidegrees, key), d_adapted.clone(), src.field())?;
        let b = FilteredComplex::zero_differential(relabel(tgt.basis(), &t.target_bidegrees, key), tgt.field());
        if !is_filtered_quasi_iso(g_adapted, &b, &a)?.verdict() {
            return Err(Error::invariant(format!("g is not a filtered quasi-isomorphism for {name}")));
        }
    }
    Ok(())
}
