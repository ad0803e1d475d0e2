use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::complexes::{BasisElement, FilteredComplex};
use crate::scalar::{FieldTag, Scalar};

fn mhs(seed: u64, max_weight: i32) -> MixedHodgeStructure {
    random_mhs(&mut ChaCha8Rng::seed_from_u64(seed), max_weight)
}

fn span_where(s: &DeligneSplitting, n: usize, keep: impl Fn(i32, i32) -> bool) -> Subspace {
    s.blocks.iter().filter(|(&(p, q), _)| keep(p, q)).fold(Subspace::zero(n), |acc, (_, b)| acc.sum(b))
}

/// `V ⊕ V` in degree 0 mapping onto `V` in degree 1 by `(id, 0)`.
fn two_term(v: &MixedHodgeStructure) -> MixedHodgeComplex {
    let n = v.dim();
    let idx: Vec<usize> = (0..3 * n).collect();
    let labels: Vec<String> = idx.iter().map(|k| format!("e{k}")).collect();
    let weights: Vec<i32> = idx.iter().map(|&k| v.weights[k % n]).collect();
    let (lo, hi) = v.hodge_range();
    let mut hodge = BTreeMap::new();
    for p in lo..=hi + 1 {
        let f = v.f_space(p);
        let parts: Vec<Subspace> = (0..3).map(|c| f.embed(3 * n, &idx[c * n..(c + 1) * n])).collect();
        hodge.insert(p, parts.iter().fold(Subspace::zero(3 * n), |acc, s| acc.sum(s)));
    }
    let mut conj = Matrix::zeros(3 * n, 3 * n);
    let mut d = Matrix::zeros(3 * n, 3 * n);
    for i in 0..3 * n {
        for j in 0..3 * n {
            if i / n == j / n {
                conj.set(i, j, v.conj.get(i % n, j % n).clone());
            }
        }
    }
    for k in 0..n {
        d.set(2 * n + k, k, Scalar::one());
    }
    let basis = idx.iter().map(|&k| BasisElement::new(labels[k].clone(), i32::from(k >= 2 * n), 0)).collect();
    let complex = FilteredComplex::new(basis, d, FieldTag::GaussianRational).unwrap();
    MixedHodgeComplex::new(complex, MixedHodgeStructure::new(labels, weights, hodge, conj).unwrap()).unwrap()
}

fn off_block(m: &Matrix, rows: &[(i32, i32)], cols: &[(i32, i32)]) -> bool {
    rows.iter().enumerate().any(|(i, r)| cols.iter().enumerate().any(|(j, c)| r != c && !m.get(i, j).is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deligne_splittings_satisfy_the_sum_identities(seed in any::<u64>(), max_weight in 0i32..=3) {
        let m = mhs(seed, max_weight);
        let n = m.dim();
        let s = deligne_splitting(&m).unwrap();
        prop_assert_eq!(s.blocks.values().map(Subspace::dim).sum::<usize>(), n);
        let (wlo, whi) = m.weight_range();
        for w in wlo - 1..=whi + 1 {
            prop_assert_eq!(span_where(&s, n, |p, q| p + q <= w), m.w_space(w));
        }
        let (lo, hi) = m.hodge_range();
        for k in lo - 1..=hi + 1 {
            prop_assert_eq!(span_where(&s, n, |p, _| p >= k), m.f_space(k));
        }
        for (&(p, q), b) in &s.blocks {
            let low = m.w_space(p + q - 2);
            let partner = s.block(q, p).cloned().unwrap_or_else(|| Subspace::zero(n));
            prop_assert_eq!(m.bar(b).sum(&low), partner.sum(&low));
        }
        prop_assert!(s.check(&m).is_ok());
    }

    #[test]
    fn split_transfer_is_block_diagonal(seed in any::<u64>()) {
        let v = mhs(seed, 2);
        prop_assume!(v.dim() <= 4);
        let c = two_term(&v);
        let t = split_transfer(&c).unwrap();
        prop_assert!(t.diagram.validate(false).is_ok());
        prop_assert!(t.commutes_with_projectors());
        let inv = t.adapted.inverse().unwrap();
        let (src, tgt) = (&t.source_bidegrees, &t.target_bidegrees);
        prop_assert!(!off_block(&t.diagram.f.mul(&t.adapted), tgt, src));
        prop_assert!(!off_block(&inv.mul(&t.diagram.g), src, tgt));
        prop_assert!(!off_block(&inv.mul(&t.diagram.h).mul(&t.adapted), src, src));
        prop_assert!(!off_block(&inv.mul(c.complex.d()).mul(&t.adapted), src, src));
    }
}
