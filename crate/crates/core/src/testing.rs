//! Proptest strategies shared by the unit tests.

use std::collections::BTreeMap;

use proptest::prelude::*;
use serde_json::json;

use crate::complexes::{BasisElement, FilteredComplex};
use crate::linalg::Matrix;
use crate::presentations::{expand, parse_presentation, FilteredDGA, Presentation};
use crate::scalar::{FieldTag, Rational, Scalar};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d).expect("nonzero denominator"))
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(re, im)| Scalar::new(re, im))
}

pub fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
        .prop_map(|rows| Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Scalar::from_int).collect()).collect()))
}

/// Exterior presentations on up to four degree-1 generators `x, y, z, w` with
/// weights in `0..=2`, `dz ∈ ⟨xy⟩` and `dw ∈ ⟨xy, xz, yz⟩`, so d² = 0.
pub fn presentation() -> impl Strategy<Value = Presentation> {
    (1usize..=4, prop::collection::vec(0i32..=2, 4), prop::collection::vec(-2i64..=2, 4)).prop_map(|(k, weights, c)| {
        let names = ["x", "y", "z", "w"];
        let mut differentials: BTreeMap<&str, String> = BTreeMap::new();
        for (j, i, l, c) in [(2, 0, 1, c[0]), (3, 0, 1, c[1]), (3, 0, 2, c[2]), (3, 1, 2, c[3])] {
            if j >= k || c == 0 || weights[i] + weights[l] < weights[j] {
                continue;
            }
            let expr = differentials.entry(names[j]).or_default();
            let sign = if c < 0 { "-" } else if expr.is_empty() { "" } else { "+" };
            expr.push_str(&format!("{sign}{}*{}*{}", c.abs(), names[i], names[l]));
        }
        let generators: Vec<_> =
            (0..k).map(|j| json!({"name": names[j], "degree": 1, "weight": weights[j]})).collect();
        let doc = json!({"name": "random", "field": "rational", "generators": generators, "differentials": differentials});
        parse_presentation(doc.to_string().as_bytes()).expect("generated presentations parse")
    })
}

pub fn algebra() -> impl Strategy<Value = FilteredDGA> {
    presentation().prop_map(|p| expand(&p).expect("d² = 0 by construction"))
}

/// `C^0 → C^1` of dimensions at most 3 with random weights and a random
/// filtration-preserving differential.
pub fn two_term_complex() -> impl Strategy<Value = FilteredComplex> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(n0, n1)| {
            (
                prop::collection::vec(0i32..=2, n0),
                prop::collection::vec(0i32..=2, n1),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n0), n1),
            )
        })
        .prop_map(|(w0, w1, entries)| {
            let (n0, n1) = (w0.len(), w1.len());
            let mut basis: Vec<BasisElement> =
                w0.iter().enumerate().map(|(i, &w)| BasisElement::new(format!("x{i}"), 0, w)).collect();
            basis.extend(w1.iter().enumerate().map(|(j, &w)| BasisElement::new(format!("y{j}"), 1, w)));
            let mut d = Matrix::zeros(n0 + n1, n0 + n1);
            for (j, row) in entries.iter().enumerate() {
                for (i, &c) in row.iter().enumerate() {
                    if w1[j] >= w0[i] {
                        d.set(n0 + j, i, Scalar::from_int(c));
                    }
                }
            }
            FilteredComplex::new(basis, d, FieldTag::Rational).expect("filtered two-term complex")
        })
}

/// Either a random two-term complex or the complex of a random algebra.
pub fn complex() -> impl Strategy<Value = FilteredComplex> {
    prop_oneof![two_term_complex(), algebra().prop_map(|a| a.complex().clone())]
}
