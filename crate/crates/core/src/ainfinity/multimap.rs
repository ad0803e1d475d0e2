use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sparse::{add_term, axpy, from_dense, SparseVec};

/// Basis tuple of a multilinear map's inputs.
pub type Tuple = Vec<usize>;

/// A multilinear map stored as structure constants: nonzero values on basis tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiMap {
    arity: usize,
    entries: BTreeMap<Tuple, SparseVec>,
}

impl MultiMap {
    pub fn new(arity: usize) -> Self {
        MultiMap { arity, entries: BTreeMap::new() }
    }

    /// The linear map whose value on basis element `j` is column `j`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let mut out = MultiMap::new(1);
        for j in 0..m.cols() {
            let v = from_dense(&m.column(j));
            if !v.is_empty() {
                out.entries.insert(vec![j], v);
            }
        }
        out
    }

    pub fn identity(n: usize) -> Self {
        MultiMap { arity: 1, entries: (0..n).map(|j| (vec![j], crate::sparse::unit(j))).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &BTreeMap<Tuple, SparseVec> {
        &self.entries
    }

    pub fn get(&self, t: &[usize]) -> Option<&SparseVec> {
        self.entries.get(t)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self(t) += c · v`.
    pub fn add(&mut self, t: Tuple, v: &SparseVec, c: &Scalar) {
        debug_assert_eq!(t.len(), self.arity);
        if c.is_zero() || v.is_empty() {
            return;
        }
        match self.entries.get_mut(&t) {
            Some(slot) => {
                axpy(slot, c, v);
                if slot.is_empty() {
                    self.entries.remove(&t);
                }
            }
            None => {
                let w = crate::sparse::scaled(v, c);
                if !w.is_empty() {
                    self.entries.insert(t, w);
                }
            }
        }
    }

    pub fn add_term(&mut self, t: Tuple, k: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(t.clone()).or_default();
        add_term(slot, k, c);
        if slot.is_empty() {
            self.entries.remove(&t);
        }
    }

    pub fn insert(&mut self, t: Tuple, v: SparseVec) {
        debug_assert_eq!(t.len(), self.arity);
        if v.is_empty() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, v);
        }
    }

    /// `self += c · other`.
    pub fn add_map(&mut self, other: &MultiMap, c: &Scalar) {
        for (t, v) in &other.entries {
            self.add(t.clone(), v, c);
        }
    }

    /// Applies a linear map (given by its columns) to every value.
    pub fn post(&self, columns: &[SparseVec]) -> MultiMap {
        let mut out = MultiMap::new(self.arity);
        for (t, v) in &self.entries {
            let w = apply_columns(columns, v);
            out.insert(t.clone(), w);
        }
        out
    }

    /// Negates the entries whose tuple satisfies `pred`.
    pub fn negate_where(&self, pred: impl Fn(&[usize]) -> bool) -> MultiMap {
        let entries = self
            .entries
            .iter()
            .map(|(t, v)| {
                let v = if pred(t) { v.iter().map(|(&k, c)| (k, -c)).collect() } else { v.clone() };
                (t.clone(), v)
            })
            .collect();
        MultiMap { arity: self.arity, entries }
    }

    /// Evaluates on a tuple of sparse vectors.
    pub fn eval(&self, args: &[SparseVec]) -> SparseVec {
        assert_eq!(args.len(), self.arity);
        let mut out = SparseVec::new();
        let mut t = Vec::with_capacity(self.arity);
        eval_rec(self, args, &mut t, &Scalar::one(), &mut out);
        out
    }

    /// Re-indexes inputs and outputs through `input` and `output` maps of basis indices.
    pub fn reindex(&self, input: &[usize], output: &[usize]) -> MultiMap {
        let mut out = MultiMap::new(self.arity);
        for (t, v) in &self.entries {
            let t2: Tuple = t.iter().map(|&i| input[i]).collect();
            let v2: SparseVec = v.iter().map(|(&k, c)| (output[k], c.clone())).collect();
            out.insert(t2, v2);
        }
        out
    }
}

fn eval_rec(m: &MultiMap, args: &[SparseVec], t: &mut Tuple, coef: &Scalar, out: &mut SparseVec) {
    let pos = t.len();
    if pos == args.len() {
        if let Some(v) = m.get(t) {
            axpy(out, coef, v);
        }
        return;
    }
    for (&k, c) in &args[pos] {
        t.push(k);
        eval_rec(m, args, t, &(coef * c), out);
        t.pop();
    }
}

pub fn columns_of(m: &Matrix) -> Vec<SparseVec> {
    (0..m.cols()).map(|j| from_dense(&m.column(j))).collect()
}

pub fn apply_columns(columns: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&k, c) in v {
        axpy(&mut out, c, &columns[k]);
    }
    out
}

/// Entries of a map grouped by output basis index, for composing it into
/// the inputs of another map. Each preimage carries its input degree sum.
pub struct Preimages {
    /// Degree of the map, for Koszul signs.
    pub degree: i32,
    by_output: BTreeMap<usize, Vec<(Tuple, Scalar, i32)>>,
}

impl Preimages {
    pub fn new(m: &MultiMap, degree: i32, input_degrees: &[i32]) -> Self {
        let mut by_output: BTreeMap<usize, Vec<(Tuple, Scalar, i32)>> = BTreeMap::new();
        for (t, v) in m.entries() {
            let ds: i32 = t.iter().map(|&i| input_degrees[i]).sum();
            for (&k, c) in v {
                by_output.entry(k).or_default().push((t.clone(), c.clone(), ds));
            }
        }
        Preimages { degree, by_output }
    }

    fn get(&self, k: usize) -> &[(Tuple, Scalar, i32)] {
        self.by_output.get(&k).map_or(&[], |v| v.as_slice())
    }
}

/// `acc += scale · outer ∘ (inner_1 ⊗ … ⊗ inner_k)` with the Koszul rule
/// `(φ⊗ψ)(x⊗y) = (−1)^{|ψ||x|} φx ⊗ ψy`.
pub fn compose_into(outer: &MultiMap, inners: &[&Preimages], scale: &Scalar, acc: &mut MultiMap) {
    assert_eq!(outer.arity(), inners.len());
    if scale.is_zero() {
        return;
    }
    let mut buf = Vec::new();
    for (t, v) in outer.entries() {
        if t.iter().zip(inners).any(|(&k, p)| p.get(k).is_empty()) {
            continue;
        }
        compose_rec(t, v, inners, 0, &mut buf, scale.clone(), 0, acc);
    }
}

#[allow(clippy::too_many_arguments)]
fn compose_rec(
    t: &[usize],
    v: &SparseVec,
    inners: &[&Preimages],
    pos: usize,
    buf: &mut Tuple,
    coef: Scalar,
    prefix_degree: i32,
    acc: &mut MultiMap,
) {
    if pos == t.len() {
        acc.add(buf.clone(), v, &coef);
        return;
    }
    let p = inners[pos];
    let negate = (p.degree * prefix_degree) % 2 != 0;
    for (tuple, c, ds) in p.get(t[pos]) {
        let len = buf.len();
        buf.extend_from_slice(tuple);
        compose_rec(t, v, inners, pos + 1, buf, (&coef * c).signed(negate), prefix_degree + ds, acc);
        buf.truncate(len);
    }
}

/// All compositions of `n` into `k` positive parts, in lexicographic order.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            cur.push(first);
            rec(n - first, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}
