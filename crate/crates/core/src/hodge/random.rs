use std::collections::BTreeMap;

use rand::Rng;

use super::MixedHodgeStructure;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::Scalar;

/// A random mixed Hodge structure on a real basis (`σ` is entrywise
/// conjugation) with weights in `0..=max_weight`.
///
/// Starts from an `ℝ`-split structure with random Hodge numbers, twists `F`
/// by `exp(iδ)` for a random rational `δ` lowering `W` by at least two, then
/// applies a random rational change of basis preserving `W`.
pub fn random_mhs(rng: &mut impl Rng, max_weight: i32) -> MixedHodgeStructure {
    // (type p, real index u, partner index): u for p = q, u ± i·partner otherwise.
    let mut weights = Vec::new();
    let mut types: Vec<(i32, usize, Option<(usize, Scalar)>)> = Vec::new();
    for m in 0..=max_weight {
        for p in (m + 1) / 2..=m {
            let q = m - p;
            for _ in 0..rng.gen_range(0..=if p == q { 2 } else { 1 }) {
                let u = weights.len();
                if p == q {
                    types.push((p, u, None));
                    weights.push(m);
                } else {
                    types.push((p, u, Some((u + 1, Scalar::i()))));
                    types.push((q, u, Some((u + 1, -Scalar::i()))));
                    weights.extend([m, m]);
                }
            }
        }
    }
    if weights.is_empty() {
        types.push((0, 0, None));
        weights.push(0);
    }
    let n = weights.len();
    let typed: Vec<(Vector, i32)> = types
        .iter()
        .map(|(p, u, partner)| {
            let mut v = vec![Scalar::zero(); n];
            v[*u] = Scalar::one();
            if let Some((w, c)) = partner {
                v[*w] = c.clone();
            }
            (v, *p)
        })
        .collect();

    let small = |rng: &mut dyn rand::RngCore| Scalar::from_int(rng.gen_range(-2..=2));
    let mut delta = Matrix::zeros(n, n);
    let mut basis_change = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if weights[i] + 2 <= weights[j] {
                delta.set(i, j, small(rng));
            }
            if weights[i] < weights[j] || (weights[i] == weights[j] && i < j) {
                basis_change.set(i, j, small(rng));
            }
        }
    }
    // exp(iδ) with δ nilpotent.
    let idelta = delta.scale(&Scalar::i());
    let mut exp = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(&idelta).scale(&Scalar::from_int(k as i64).inv().expect("nonzero"));
        if term.is_zero() {
            break;
        }
        exp = exp.add(&term);
    }
    let twist = basis_change.mul(&exp);
    let lo = typed.iter().map(|t| t.1).min().unwrap_or(0);
    let hi = typed.iter().map(|t| t.1).max().unwrap_or(0);
    let mut hodge = BTreeMap::new();
    for p in lo..=hi {
        let vs: Vec<Vector> = typed.iter().filter(|t| t.1 >= p).map(|t| twist.apply(&t.0)).collect();
        hodge.insert(p, Subspace::span(n, &vs));
    }
    let labels = (0..n).map(|j| format!("e{j}")).collect();
    MixedHodgeStructure::new(labels, weights, hodge, Matrix::identity(n)).expect("random mixed Hodge structure")
}
