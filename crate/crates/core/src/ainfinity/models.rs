//! Filtered minimal, `E_r`-minimal and page-wise models of filtered dg-algebras.

use super::kernels::{transfer_ainfinity, TransferOptions, TransferResult};
use super::multimap::columns_of;
use super::windows::{check_er_windows, check_filtered_morphism};
use super::{AInfinityMorphism, AInfinityStructure};
use crate::complexes::{
    filtered_transfer, graded_classical_transfer, is_filtered_quasi_iso, spectral_sequence, BasisElement,
    FilteredComplex, Page, TransferDiagram,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentations::FilteredDGA;

/// An `E_r`-minimal model `M` with its structure morphism `M → A`.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub r: usize,
    pub structure: AInfinityStructure,
    /// `(g, 𝒢_s)` in the basis of the original algebra.
    pub morphism: AInfinityMorphism,
    pub p_vanishes_above_cap: bool,
}

/// Filtered transfer onto `E_1`-sized `M`, then A∞-transfer.
pub fn filtered_minimal_model(a: &FilteredDGA, opts: TransferOptions) -> Result<MinimalModel> {
    let diagram = filtered_transfer(a.complex())?;
    let t = transfer_ainfinity(&diagram, a, TransferOptions { filtered: true, ..opts })?;
    let report = is_filtered_quasi_iso(&diagram.g, &diagram.target, &diagram.source)?;
    if !report.verdict() {
        return Err(Error::invariant("g is not a filtered quasi-isomorphism"));
    }
    let mut structure = t.structure;
    structure.er_minimal = Some(0);
    if let Some(p) = check_er_windows(&structure, 0).first() {
        return Err(Error::invariant(format!("model is not filtered minimal: {p}")));
    }
    let morphism = AInfinityMorphism { source: structure.clone(), ..t.g };
    Ok(MinimalModel { r: 0, structure, morphism, p_vanishes_above_cap: t.p_vanishes_above_cap })
}

/// `E_r`-minimal model: décalage `r` times, take the filtered minimal model,
/// and pass to the shifted bigrading `weight ↦ weight + degree` `r` times.
pub fn er_minimal_model(a: &FilteredDGA, r: usize, opts: TransferOptions) -> Result<MinimalModel> {
    if r == 0 {
        return filtered_minimal_model(a, opts);
    }
    let mut alg = a.clone();
    let mut change = Matrix::identity(a.dim());
    for _ in 0..r {
        let (next, dec) = alg.decalage()?;
        change = change.mul(&dec.basis_change);
        alg = next;
    }
    let base = filtered_minimal_model(&alg, opts)?;
    let basis: Vec<BasisElement> = base
        .structure
        .basis
        .iter()
        .map(|e| BasisElement::new(e.label.clone(), e.degree, e.weight + r as i32 * e.degree))
        .collect();
    let mut structure = base.structure.with_basis(basis);
    structure.er_minimal = Some(r);
    structure.filtered = false;
    let cols = columns_of(&change);
    let components = base.morphism.components.iter().map(|(&s, m)| (s, m.post(&cols))).collect();
    let target = AInfinityStructure::from_dga(a, structure.arity_cap);
    let morphism = AInfinityMorphism { source: structure.clone(), target, components, arity_cap: structure.arity_cap };
    let mut problems = check_er_windows(&structure, r);
    problems.extend(check_filtered_morphism(&morphism, r));
    if let Some(p) = problems.first() {
        return Err(Error::invariant(format!("E_{r}-minimal window violated: {p}")));
    }
    page_isomorphism(&morphism.linear_part(), &structure.complex()?, a.complex(), r + 1)?;
    Ok(MinimalModel { r, structure, morphism, p_vanishes_above_cap: base.p_vanishes_above_cap })
}

/// Checks that the filtered chain map `g : m → a` induces an isomorphism
/// `E_s(m) → E_s(a)`, with an explicit inverse on every bidegree.
pub fn page_isomorphism(g: &Matrix, m: &FilteredComplex, a: &FilteredComplex, s: usize) -> Result<()> {
    let pm = spectral_sequence(m, s);
    let pa = spectral_sequence(a, s);
    let (em, ea) = (&pm.pages[s], &pa.pages[s]);
    let keys: std::collections::BTreeSet<(i32, i32)> = em.entries.keys().chain(ea.entries.keys()).copied().collect();
    for key in keys {
        let (dm, da) = (em.dim_at(key.0, key.1), ea.dim_at(key.0, key.1));
        if dm != da {
            return Err(Error::invariant(format!("E_{s}^{key:?}: model has dimension {dm}, algebra {da}")));
        }
        if dm == 0 {
            continue;
        }
        let (src, tgt) = (&em.entries[&key], &ea.entries[&key]);
        let cols = src
            .reps
            .iter()
            .map(|v| tgt.class_of(&g.apply(v)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invariant(format!("E_{s}(g) does not map classes to classes at {key:?}")))?;
        let mat = Matrix::from_columns(da, &cols);
        let inv = mat.inverse().ok_or_else(|| Error::invariant(format!("E_{s}(g) is not invertible at {key:?}")))?;
        if mat.mul(&inv) != Matrix::identity(da) {
            return Err(Error::invariant(format!("E_{s}(g) inverse check failed at {key:?}")));
        }
    }
    Ok(())
}

/// A∞-structure on `E_{r+1}` obtained by transferring the dg-algebra `(E_r, d_r)`.
#[derive(Clone, Debug)]
pub struct PageTransfer {
    pub page_algebra: FilteredDGA,
    pub page: Page,
    pub diagram: TransferDiagram,
    pub result: TransferResult,
}

pub fn bigraded_transfer_on_page(a: &FilteredDGA, r: usize, opts: TransferOptions) -> Result<PageTransfer> {
    let (page_algebra, page) = a.page_algebra(r)?;
    let diagram = graded_classical_transfer(page_algebra.complex(), r)?;
    let result = transfer_ainfinity(&diagram, &page_algebra, TransferOptions { filtered: false, ..opts })?;
    Ok(PageTransfer { page_algebra, page, diagram, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::spectral_sequence;
    use crate::presentations::{expand, fixture, fixture_names};

    fn opts() -> TransferOptions {
        TransferOptions::with_cap(4)
    }

    #[test]
    fn r_zero_is_the_filtered_model() {
        let a = fixture("exemplet").unwrap().algebra().unwrap();
        let m0 = er_minimal_model(&a, 0, opts()).unwrap();
        let m = filtered_minimal_model(&a, opts()).unwrap();
        assert_eq!(m0.structure, m.structure);
        assert_eq!(m0.morphism.components, m.morphism.components);
    }

    #[test]
    fn exemplet_product_moves_up_in_weight() {
        let a = fixture("exemplet").unwrap().algebra().unwrap();
        let m = filtered_minimal_model(&a, opts()).unwrap();
        let s = &m.structure;
        assert!(s.d.is_zero());
        let v = s.eval_labels(&["[b]", "[c]"]).unwrap();
        assert!(!v.is_empty());
        assert!(v.keys().all(|&k| s.basis[k].weight == 1), "{}", s.render_vector(&v));
    }

    #[test]
    fn filtered_models_have_first_page_dimensions() {
        for name in fixture_names() {
            let a = fixture(name).unwrap().algebra().unwrap();
            let m = filtered_minimal_model(&a, TransferOptions::with_cap(3)).unwrap();
            let e1 = spectral_sequence(a.complex(), 1).pages[1].dims();
            let mut dims = std::collections::BTreeMap::new();
            for e in &m.structure.basis {
                *dims.entry((e.weight, e.degree - e.weight)).or_insert(0) += 1;
            }
            dims.retain(|_, v: &mut usize| *v > 0);
            let e1: std::collections::BTreeMap<_, _> = e1.into_iter().filter(|(_, v)| *v > 0).collect();
            assert_eq!(dims, e1, "{name}");
        }
    }

    #[test]
    fn permuted_generators_give_the_same_table() {
        let fx = fixture("kodaira-thurston").unwrap();
        let p = fx.presentation.permuted(&[3, 1, 2, 0]);
        let table = |a: &FilteredDGA| {
            let m = filtered_minimal_model(a, TransferOptions::with_cap(3)).unwrap();
            let mut t = std::collections::BTreeMap::new();
            for e in &m.structure.basis {
                *t.entry((e.weight, e.degree)).or_insert(0usize) += 1;
            }
            t
        };
        assert_eq!(table(&fx.algebra().unwrap()), table(&expand(&p).unwrap()));
    }

    #[test]
    fn iwasawa_second_page_model() {
        let a = fixture("iwasawa").unwrap().algebra().unwrap();
        let m = er_minimal_model(&a, 2, opts()).unwrap();
        assert!(m.structure.d.is_zero());
        assert_eq!(m.structure.dim(), 36);
        assert_eq!(m.structure.er_minimal, Some(2));
    }

    #[test]
    fn exemplet_page_products() {
        let a = fixture("exemplet").unwrap().algebra().unwrap();
        let p = bigraded_transfer_on_page(&a, 1, opts()).unwrap();
        let s = AInfinityStructure::from_dga(&p.page_algebra, 2);
        let prod = |x: &str, y: &str| s.render_vector(&s.eval_labels(&[x, y]).unwrap());
        assert_eq!(prod("[b]", "[c]"), "0");
        assert_eq!(prod("[e]", "[c]"), "-[c*e]");
        assert_eq!(prod("[b]", "[e]"), "[b*e]");
        // The page has d_1 = 0, so the transfer is the page product itself.
        assert!(p.result.structure.ops.keys().all(|&k| k == 2));
    }
}
