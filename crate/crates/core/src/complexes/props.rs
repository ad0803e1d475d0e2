use proptest::prelude::*;

use super::*;
use crate::testing::complex;

/// A random filtered map `A → M` of degree −1, entries from `seed`.
fn filtered_homotopy(a: &FilteredComplex, m: &FilteredComplex, seed: &[i64]) -> Matrix {
    let mut phi = Matrix::zeros(m.dim(), a.dim());
    let mut k = 0;
    for (i, x) in m.basis().iter().enumerate() {
        for (j, y) in a.basis().iter().enumerate() {
            if x.degree == y.degree - 1 && x.weight >= y.weight {
                phi.set(i, j, Scalar::from_int(seed[k % seed.len()]));
                k += 1;
            }
        }
    }
    phi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfer_diagrams_satisfy_their_identities(c in complex()) {
        prop_assert!(filtered_transfer(&c).unwrap().validate(true).is_ok());
        prop_assert!(classical_transfer(&c).unwrap().validate(false).is_ok());
    }

    #[test]
    fn filtered_homotopic_maps_agree_on_pages(c in complex(), seed in prop::collection::vec(-2i64..=2, 1..16)) {
        let t = filtered_transfer(&c).unwrap();
        let m = &t.target;
        let phi = filtered_homotopy(&c, m, &seed);
        let f2 = t.f.add(&m.d().mul(&phi)).add(&phi.mul(c.d()));
        prop_assert!(check_chain_map("f + dφ + φd", &f2, &c, m, true).is_ok());
        let (sa, sm) = (spectral_sequence(&c, 3), spectral_sequence(m, 3));
        for r in 1..=3 {
            let (pa, pm) = (sa.page(r).unwrap(), sm.page(r).unwrap());
            for (&(p, q), e) in &pa.entries {
                for v in &e.reps {
                    let class = |f: &Matrix| pm.entries.get(&(p, q)).map(|t| t.class_of(&f.apply(v)));
                    let (x, y) = (class(&t.f), class(&f2));
                    prop_assert!(x.iter().all(Option::is_some), "f(v) is not in Z_r");
                    prop_assert_eq!(x, y, "E_{} ({},{})", r, p, q);
                }
            }
        }
    }

    #[test]
    fn last_page_is_graded_cohomology(c in complex()) {
        let ss = spectral_sequence(&c, 1);
        let r = ss.degeneration.unwrap();
        let last = spectral_sequence(&c, r);
        let einf: BTreeMap<(i32, i32), usize> =
            last.page(r).unwrap().dims().into_iter().map(|((p, q), d)| ((p, p + q), d)).collect();
        prop_assert_eq!(einf, c.graded_cohomology_dims());
    }

    #[test]
    fn strict_exactly_when_degenerating_at_e1(c in complex()) {
        prop_assert_eq!(c.is_strict(), spectral_sequence(&c, 1).degeneration == Some(1));
    }

    #[test]
    fn decalage_shifts_pages_by_one(c in complex()) {
        let dec = decalage(&c).unwrap().complex;
        let (sf, sd) = (spectral_sequence(&c, 3), spectral_sequence(&dec, 2));
        for s in 1..=2 {
            let (pd, pf) = (sd.page(s).unwrap(), sf.page(s + 1).unwrap());
            for (&(p, q), &d) in &pd.dims() {
                let n = p + q;
                prop_assert_eq!(d, pf.dim_at(p + n, -p));
            }
            for (&(pp, qq), &d) in &pf.dims() {
                let (p, n) = (-qq, pp + qq);
                prop_assert_eq!(d, pd.dim_at(p, n - p));
            }
        }
    }
}
