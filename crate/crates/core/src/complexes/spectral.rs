use std::collections::BTreeMap;

use super::FilteredComplex;
use crate::linalg::{leading_index, Matrix, Subspace, Vector};

/// One bigraded piece `E_r^{p,q}` with representatives in the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageEntry {
    pub p: i32,
    pub q: i32,
    pub reps: Vec<Vector>,
    pub labels: Vec<String>,
    /// The subspace the representatives are taken modulo.
    pub denominator: Subspace,
}

impl PageEntry {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a vector of the numerator in the representative basis.
    pub fn class_of(&self, v: &[crate::scalar::Scalar]) -> Option<Vector> {
        let n = v.len();
        let mut cols = self.reps.clone();
        cols.extend(self.denominator.basis().iter().cloned());
        let m = Matrix::from_columns(n, &cols);
        m.solve(v).map(|x| x[..self.reps.len()].to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<(i32, i32), PageEntry>,
    /// `d_r : E_r^{p,q} → E_r^{p+r,q−r+1}`, keyed by the source bidegree; only
    /// nonzero maps are stored.
    pub differentials: BTreeMap<(i32, i32), Matrix>,
}

impl Page {
    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.entries.iter().filter(|(_, e)| e.dim() > 0).map(|(&k, e)| (k, e.dim())).collect()
    }

    pub fn dim_at(&self, p: i32, q: i32) -> usize {
        self.entries.get(&(p, q)).map_or(0, PageEntry::dim)
    }

    pub fn is_zero_differential(&self) -> bool {
        self.differentials.is_empty()
    }

    /// Total dimension per total degree `p + q`.
    pub fn totals(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), e) in &self.entries {
            *out.entry(p + q).or_insert(0) += e.dim();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSequencePages {
    pub pages: Vec<Page>,
    /// Smallest `r ≥ 1` such that `d_s = 0` for all `s ≥ r`.
    pub degeneration: Option<usize>,
}

impl SpectralSequencePages {
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r)
    }
}

/// Pages `E_0 … E_{r_max}` by the `Z_r / B_r` subquotient formulas. The
/// degeneration page is found over as many pages as the weight range needs,
/// independently of `r_max`.
pub fn spectral_sequence(c: &FilteredComplex, r_max: usize) -> SpectralSequencePages {
    let (lo, hi) = c.weight_range();
    let stable = (hi - lo + 1).max(1) as usize;
    let upto = r_max.max(stable);
    let mut pages: Vec<Page> = (0..=upto).map(|r| compute_page(c, r)).collect();
    let last_nonzero = pages.iter().rposition(|pg| !pg.is_zero_differential());
    let degeneration = Some(last_nonzero.map_or(1, |r| r + 1).max(1));
    pages.truncate(r_max + 1);
    SpectralSequencePages { pages, degeneration }
}

/// `Z_r^{p,n} = {x ∈ F^pA^n : dx ∈ F^{p+r}A^{n+1}}`.
fn z_space(c: &FilteredComplex, r: i64, p: i32, n: i32) -> Subspace {
    let target = c.filtration_space(p.saturating_add(r as i32), n + 1);
    c.d_preimage(&c.filtration_space(p, n), &target)
}

pub(crate) fn compute_page(c: &FilteredComplex, r: usize) -> Page {
    let (lo, hi) = c.weight_range();
    let ri = r as i64;
    let mut entries = BTreeMap::new();
    for n in c.degrees() {
        for p in lo..=hi {
            let num = z_space(c, ri, p, n);
            let den = z_space(c, ri - 1, p + 1, n)
                .sum(&c.d_image(&c.filtration_space(p - r as i32 + 1, n - 1)).intersect(&c.filtration_space(p, n)));
            let reps_space = den.complement_in(&num).expect("denominator lies in the numerator");
            let reps: Vec<Vector> = reps_space.basis().to_vec();
            let labels = reps.iter().map(|v| class_label(c, v)).collect();
            entries.insert((p, n - p), PageEntry { p, q: n - p, reps, labels, denominator: den });
        }
    }
    let mut differentials = BTreeMap::new();
    for (&(p, q), e) in &entries {
        if e.dim() == 0 {
            continue;
        }
        let tgt_key = (p + r as i32, q - r as i32 + 1);
        let Some(t) = entries.get(&tgt_key) else { continue };
        let mut m = Matrix::zeros(t.dim(), e.dim());
        for (j, x) in e.reps.iter().enumerate() {
            let dx = c.d().apply(x);
            let coords = t.class_of(&dx).expect("d maps Z_r into Z_r");
            for (i, v) in coords.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        if !m.is_zero() {
            differentials.insert((p, q), m);
        }
    }
    Page { r, entries, differentials }
}

pub(crate) fn class_label(c: &FilteredComplex, v: &[crate::scalar::Scalar]) -> String {
    match leading_index(v) {
        Some(i) => super::transfer::bracket(&c.basis()[i].label),
        None => "[0]".to_string(),
    }
}
