//! Sparse vectors keyed by basis index.

use std::collections::BTreeMap;

use crate::linalg::{zero_vector, Vector};
use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn add_term(v: &mut SparseVec, k: usize, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, c.clone());
        }
    }
}

/// `acc += c · v`.
pub fn axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&k, x) in v {
        add_term(acc, k, &(c * x));
    }
}

pub fn scaled(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vector {
    let mut out = zero_vector(n);
    for (&k, x) in v {
        out[k] = x.clone();
    }
    out
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
}

pub fn unit(k: usize) -> SparseVec {
    SparseVec::from([(k, Scalar::one())])
}
