//! The morphism `𝓕 : A → B` and the homotopy `𝓗` through the perturbation
//! lemma on bar constructions.
//!
//! With the tensor-trick homotopy `Ĥ = Σ (gf)^{⊗i} ⊗ κ̂ ⊗ 1^{⊗j}` and the
//! perturbation `δ` induced by `μ̂`, the arity-one part of `Σ_k (δĤ)^k`
//! satisfies `Q̂_1 = Id`, `Q̂_n = Q̂_{n−1} ∘ δĤ`. Then `𝓕̂_n = f Q̂_n` and
//! `𝓗̂_n = κ̂ Q̂_n`. Only these two post-compositions are stored.

use std::collections::BTreeMap;

use super::bar::hat;
use super::multimap::{compose_into, MultiMap, Preimages};
use crate::complexes::TransferDiagram;
use crate::presentations::FilteredDGA;
use crate::scalar::Scalar;

/// `(𝓕_s, 𝓗_s)` for `1 ≤ s ≤ cap`, unshifted, with `𝓗_1 = κ = −h`.
pub fn perturbed_morphism(
    diagram: &TransferDiagram,
    algebra: &FilteredDGA,
    cap: usize,
) -> (BTreeMap<usize, MultiMap>, BTreeMap<usize, MultiMap>) {
    let deg: Vec<i32> = algebra.basis().iter().map(|e| e.degree).collect();
    let sdeg: Vec<i32> = deg.iter().map(|d| d - 1).collect();
    let n = algebra.dim();
    let mut mu = MultiMap::new(2);
    for i in 0..n {
        for j in 0..n {
            mu.insert(vec![i, j], algebra.mul_basis(i, j).clone());
        }
    }
    let mu_hat = hat(&mu, &deg);
    let kappa = MultiMap::from_matrix(&diagram.h.neg());
    let gf = MultiMap::from_matrix(&diagram.g.mul(&diagram.f));
    let id = MultiMap::identity(n);

    let single = |m: &MultiMap, d: i32| Preimages::new(m, d, &sdeg);
    let (p_gf, p_k, p_id) = (single(&gf, 0), single(&kappa, -1), single(&id, 0));
    let pair = |a: &Preimages, b: &Preimages| {
        let mut acc = MultiMap::new(2);
        compose_into(&mu_hat, &[a, b], &Scalar::one(), &mut acc);
        acc
    };
    // μ̂ after each admissible pair of slot maps; the degree is 1 + |a| + |b|.
    let m_gg = Preimages::new(&pair(&p_gf, &p_gf), 1, &sdeg);
    let m_gk = Preimages::new(&pair(&p_gf, &p_k), 0, &sdeg);
    let m_ki = Preimages::new(&pair(&p_k, &p_id), 0, &sdeg);
    let m_ii = Preimages::new(&mu_hat, 1, &sdeg);

    let mut fq = BTreeMap::from([(1, MultiMap::from_matrix(&diagram.f))]);
    let mut kq = BTreeMap::from([(1, kappa.clone())]);
    for s in 2..=cap {
        let (mut f_acc, mut k_acc) = (MultiMap::new(s), MultiMap::new(s));
        // κ̂ sits in slot `i` of Ĥ, then δ merges slots `r, r+1`.
        for i in 0..s {
            let slot = |p: usize| {
                if p < i {
                    &p_gf
                } else if p == i {
                    &p_k
                } else {
                    &p_id
                }
            };
            for r in 0..s - 1 {
                let merged = match (r + 1).cmp(&i) {
                    std::cmp::Ordering::Less => &m_gg,
                    std::cmp::Ordering::Equal => &m_gk,
                    std::cmp::Ordering::Greater if r == i => &m_ki,
                    std::cmp::Ordering::Greater => &m_ii,
                };
                let inners: Vec<&Preimages> = (0..s - 1)
                    .map(|q| {
                        if q < r {
                            slot(q)
                        } else if q == r {
                            merged
                        } else {
                            slot(q + 1)
                        }
                    })
                    .collect();
                // μ̂ passes κ̂ when the merge lies to its right.
                let scale = Scalar::one().signed(i < r);
                compose_into(&fq[&(s - 1)], &inners, &scale, &mut f_acc);
                compose_into(&kq[&(s - 1)], &inners, &scale, &mut k_acc);
            }
        }
        fq.insert(s, f_acc);
        kq.insert(s, k_acc);
    }
    let unshift = |m: BTreeMap<usize, MultiMap>| -> BTreeMap<usize, MultiMap> {
        m.into_iter().map(|(s, x)| (s, if s == 1 { x } else { hat(&x, &deg) })).collect()
    };
    (unshift(fq), unshift(kq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfinity::{check_morphism, transfer_ainfinity, KernelCache, TransferOptions};
    use crate::complexes::filtered_transfer;
    use crate::presentations::fixture;

    // On the décalage of Kodaira–Thurston the printed 𝔮-recursion stops
    // being an A∞-morphism at arity 3, e.g. on (a, a·abar, a·abar).
    #[test]
    fn printed_q_fails_where_perturbation_holds() {
        let a = fixture("kodaira-thurston").unwrap().algebra().unwrap();
        let (dec, _) = a.decalage().unwrap();
        let diagram = filtered_transfer(dec.complex()).unwrap();
        let r = transfer_ainfinity(&diagram, &dec, TransferOptions::with_cap(4)).unwrap();
        assert!(check_morphism(&r.f).is_ok());

        let mut cache = KernelCache::new(&diagram, &dec);
        let mut printed = r.f.clone();
        for s in 2..=4 {
            printed.components.insert(s, cache.f_q(s).clone());
        }
        assert_eq!(printed.components[&2], r.f.components[&2]);
        assert_eq!(check_morphism(&printed).first_failing_arity(), Some(3));
    }

    #[test]
    fn arity_one_is_the_diagram() {
        let t = fixture("exemplet").unwrap().transfer("filtered").unwrap();
        let (f, h) = perturbed_morphism(&t.diagram, &t.algebra, 1);
        assert_eq!(f[&1], MultiMap::from_matrix(&t.diagram.f));
        assert_eq!(h[&1], MultiMap::from_matrix(&t.diagram.h.neg()));
    }
}
