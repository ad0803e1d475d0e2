//! Transfer of an A∞-structure by the sum over planar rooted trees: leaves
//! `g`, internal edges `κ = −h`, vertices the source operations, root `f`.
//! Computed on the shifted space, where every piece has degree 0 or 1 and
//! the tree sum becomes a plain recursion.

use std::collections::BTreeMap;

use super::bar::{check_stasheff, hat};
use super::kernels::TransferOptions;
use super::multimap::{columns_of, compose_into, compositions, MultiMap, Preimages};
use super::windows::check_filtered_structure;
use super::AInfinityStructure;
use crate::complexes::TransferDiagram;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn tree_transfer(
    diagram: &TransferDiagram,
    source: &AInfinityStructure,
    opts: TransferOptions,
) -> Result<AInfinityStructure> {
    if source.dim() != diagram.source.dim() || source.complex()?.d() != diagram.source.d() {
        return Err(Error::Precondition("diagram source is not the structure's complex".into()));
    }
    let cap = opts.arity_cap.max(1);
    let sdeg = source.degrees();
    let tdeg: Vec<i32> = diagram.target.basis().iter().map(|e| e.degree).collect();
    let b: BTreeMap<usize, MultiMap> =
        (2..=cap.min(source.arity_cap)).filter_map(|k| source.op(k).map(|m| (k, hat(m, &sdeg)))).collect();
    let kappa = columns_of(&diagram.h.neg());
    let f = columns_of(&diagram.f);
    // Ĥ_n: target tuples → source; Ĥ_1 = g.
    let mut trees: BTreeMap<usize, Preimages> = BTreeMap::new();
    trees.insert(1, Preimages::new(&MultiMap::from_matrix(&diagram.g), 0, &tdeg));
    let mut ops = BTreeMap::new();
    for n in 2..=cap {
        let mut p = MultiMap::new(n);
        for (&k, bk) in b.range(2..=n) {
            for comp in compositions(n, k) {
                let inners: Vec<&Preimages> = comp.iter().map(|r| &trees[r]).collect();
                compose_into(bk, &inners, &Scalar::one(), &mut p);
            }
        }
        ops.insert(n, hat(&p.post(&f), &tdeg));
        if n < cap {
            trees.insert(n, Preimages::new(&p.post(&kappa), 0, &tdeg));
        }
    }
    ops.retain(|_, m: &mut MultiMap| !m.is_zero());
    let out = AInfinityStructure {
        basis: diagram.target.basis().to_vec(),
        field: diagram.target.field(),
        d: MultiMap::from_matrix(diagram.target.d()),
        ops,
        arity_cap: cap,
        filtered: source.filtered && opts.filtered,
        er_minimal: None,
    };
    if opts.verify {
        let report = check_stasheff(&out);
        if !report.is_ok() {
            return Err(Error::invariant(format!("tree transfer: {}", report.summary())));
        }
        if out.filtered {
            if let Some(p) = check_filtered_structure(&out).first() {
                return Err(Error::invariant(format!("tree transfer: filtration window violated: {p}")));
            }
        }
    }
    Ok(out)
}
