use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::complexes::{filtered_transfer, is_filtered_quasi_iso};
use crate::presentations::expand;
use crate::testing::{algebra, presentation};

fn nonzero(s: &AInfinityStructure) -> BTreeMap<usize, BTreeMap<Tuple, SparseVec>> {
    let mut out = BTreeMap::new();
    for (&k, m) in s.ops.iter().chain([(&1, &s.d)]) {
        let entries: BTreeMap<Tuple, SparseVec> =
            m.entries().iter().filter(|(_, v)| !v.is_empty()).map(|(t, v)| (t.clone(), v.clone())).collect();
        if !entries.is_empty() {
            out.insert(k, entries);
        }
    }
    out
}

fn bigraded_table(s: &AInfinityStructure) -> BTreeMap<(i32, i32), usize> {
    let mut out = BTreeMap::new();
    for e in &s.basis {
        *out.entry((e.degree, e.weight)).or_insert(0) += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tree_transfer_matches_kernel_transfer(a in algebra()) {
        let diagram = filtered_transfer(a.complex()).unwrap();
        let opts = TransferOptions { arity_cap: 5, verify: false, filtered: true };
        let direct = transfer_ainfinity(&diagram, &a, opts).unwrap().structure;
        let tree = tree_transfer(&diagram, &AInfinityStructure::from_dga(&a, 5), opts).unwrap();
        prop_assert_eq!(nonzero(&direct), nonzero(&tree));
    }

    #[test]
    fn filtered_models_satisfy_the_identities(a in algebra()) {
        let m = filtered_minimal_model(&a, TransferOptions { arity_cap: 5, verify: false, filtered: true }).unwrap();
        prop_assert!(check_stasheff(&m.structure).is_ok());
        prop_assert!(check_morphism(&m.morphism).is_ok());
        prop_assert!(check_filtered_structure(&m.structure).is_empty());
        prop_assert!(check_filtered_morphism(&m.morphism, 0).is_empty());
        let g = m.morphism.linear_part();
        let report = is_filtered_quasi_iso(&g, &m.structure.complex().unwrap(), a.complex()).unwrap();
        prop_assert!(report.levelwise_cohomology && report.cone_acyclic && report.graded_cone_acyclic);
    }

    #[test]
    fn er_minimal_models_have_their_windows(p in presentation(), r in 1usize..=2) {
        let a = expand(&p).unwrap();
        let m = er_minimal_model(&a, r, TransferOptions { arity_cap: 4, verify: false, filtered: true }).unwrap();
        prop_assert!(check_stasheff(&m.structure).is_ok());
        prop_assert!(check_morphism(&m.morphism).is_ok());
        prop_assert!(check_er_windows(&m.structure, r).is_empty());
        prop_assert!(check_filtered_morphism(&m.morphism, r).is_empty());
        // E_r(g) is a quasi-isomorphism of (E_r, d_r), so an isomorphism from E_{r+1} on.
        let g = m.morphism.linear_part();
        prop_assert!(page_isomorphism(&g, &m.structure.complex().unwrap(), a.complex(), r + 1).is_ok());
    }

    #[test]
    fn permuting_generators_keeps_the_bigraded_table(p in presentation(), rot in 0usize..4) {
        let n = p.generators.len();
        let order: Vec<usize> = (0..n).map(|k| (k + rot) % n).collect();
        let opts = TransferOptions::with_cap(3);
        let x = filtered_minimal_model(&expand(&p).unwrap(), opts).unwrap();
        let y = filtered_minimal_model(&expand(&p.permuted(&order)).unwrap(), opts).unwrap();
        prop_assert_eq!(bigraded_table(&x.structure), bigraded_table(&y.structure));
    }
}
