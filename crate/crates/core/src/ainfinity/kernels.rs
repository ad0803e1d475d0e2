//! 𝔭- and 𝔮-kernels of a homotopy transfer diagram out of a dg-algebra.
//!
//! The kernels themselves are large; only their images under `κ = −h`,
//! `f` and `gf` are kept, which is all the recursions and the transferred
//! structure need. Full kernels are assembled on demand from these blocks.

use std::collections::BTreeMap;

use super::bar::{check_morphism, check_stasheff};
use super::multimap::{columns_of, compose_into, compositions, MultiMap, Preimages};
use super::perturbation::perturbed_morphism;
use super::windows::{check_filtered_morphism, check_filtered_structure, check_map_window};
use super::{AInfinityMorphism, AInfinityStructure, DEFAULT_ARITY_CAP};
use crate::complexes::TransferDiagram;
use crate::error::{Error, Result};
use crate::presentations::FilteredDGA;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

fn sign(negative: bool) -> Scalar {
    Scalar::one().signed(negative)
}

/// Memoized kernel blocks for one diagram and one dg-algebra.
pub struct KernelCache<'a> {
    algebra: &'a FilteredDGA,
    degrees: Vec<i32>,
    leaf_degrees: Vec<i32>,
    mu: MultiMap,
    mu_kappa: MultiMap,
    mu_f: MultiMap,
    g_columns: Vec<SparseVec>,
    /// `κ∘𝔭_s∘ι^{⊗s}` for the leaf map `ι` (`g` for a transfer), `s ≥ 1`.
    kp: BTreeMap<usize, MultiMap>,
    /// `f∘𝔭_s∘ι^{⊗s}`, `s ≥ 2`.
    fp: BTreeMap<usize, MultiMap>,
    /// `κ∘𝔮_s`, `f∘𝔮_s`, `gf∘𝔮_s`, `s ≥ 1`.
    kq: BTreeMap<usize, MultiMap>,
    fq: BTreeMap<usize, MultiMap>,
    gfq: BTreeMap<usize, MultiMap>,
    /// `(gf)_m`.
    gf_blocks: BTreeMap<usize, MultiMap>,
}

impl<'a> KernelCache<'a> {
    /// Kernels of `diagram` on `algebra`; the 𝔭-side takes inputs from the target through `g`.
    pub fn new(diagram: &TransferDiagram, algebra: &'a FilteredDGA) -> Self {
        let leaf = MultiMap::from_matrix(&diagram.g);
        let leaf_degrees = diagram.target.basis().iter().map(|e| e.degree).collect();
        Self::with_leaf(diagram, algebra, leaf, leaf_degrees)
    }

    /// Kernels whose 𝔭-side is evaluated directly on the algebra's basis.
    pub fn on_algebra(diagram: &TransferDiagram, algebra: &'a FilteredDGA) -> Self {
        let degrees = algebra.basis().iter().map(|e| e.degree).collect();
        Self::with_leaf(diagram, algebra, MultiMap::identity(algebra.dim()), degrees)
    }

    fn with_leaf(diagram: &TransferDiagram, algebra: &'a FilteredDGA, leaf: MultiMap, leaf_degrees: Vec<i32>) -> Self {
        let n = algebra.dim();
        let mut mu = MultiMap::new(2);
        for i in 0..n {
            for j in 0..n {
                mu.insert(vec![i, j], algebra.mul_basis(i, j).clone());
            }
        }
        let kappa = columns_of(&diagram.h.neg());
        let f = columns_of(&diagram.f);
        let mu_kappa = mu.post(&kappa);
        let mu_f = mu.post(&f);
        let kappa_map = MultiMap::from_matrix(&diagram.h.neg());
        let f_map = MultiMap::from_matrix(&diagram.f);
        let gf_map = MultiMap::from_matrix(&diagram.g.mul(&diagram.f));
        KernelCache {
            algebra,
            degrees: algebra.basis().iter().map(|e| e.degree).collect(),
            leaf_degrees,
            mu,
            mu_kappa,
            mu_f,
            g_columns: columns_of(&diagram.g),
            kp: BTreeMap::from([(1, leaf)]),
            fp: BTreeMap::new(),
            kq: BTreeMap::from([(1, kappa_map)]),
            fq: BTreeMap::from([(1, f_map)]),
            gfq: BTreeMap::from([(1, gf_map.clone())]),
            gf_blocks: BTreeMap::from([(1, gf_map)]),
        }
    }

    pub fn algebra(&self) -> &FilteredDGA {
        self.algebra
    }

    fn kp_degree(s: usize) -> i32 {
        if s == 1 {
            0
        } else {
            s as i32 - 3
        }
    }

    /// `Σ_{k+ℓ=s} (−1)^{k(ℓ+1)} post∘μ((κ𝔭_k)⊗(κ𝔭_ℓ))`.
    fn p_sum(&self, s: usize, post_mu: &MultiMap) -> MultiMap {
        let mut acc = MultiMap::new(s);
        for k in 1..s {
            let l = s - k;
            let left = Preimages::new(&self.kp[&k], Self::kp_degree(k), &self.leaf_degrees);
            let right = Preimages::new(&self.kp[&l], Self::kp_degree(l), &self.leaf_degrees);
            compose_into(post_mu, &[&left, &right], &sign(k * (l + 1) % 2 == 1), &mut acc);
        }
        acc
    }

    fn ensure_p(&mut self, s: usize) {
        for m in 2..=s {
            if self.kp.contains_key(&m) {
                continue;
            }
            let kp = self.p_sum(m, &self.mu_kappa);
            let fp = self.p_sum(m, &self.mu_f);
            self.kp.insert(m, kp);
            self.fp.insert(m, fp);
        }
    }

    /// `κ∘𝔭_s` on leaf inputs (`κ∘𝔭_1` is the leaf map).
    pub fn kappa_p(&mut self, s: usize) -> &MultiMap {
        self.ensure_p(s);
        &self.kp[&s]
    }

    /// `f∘𝔭_s` on leaf inputs, `s ≥ 2`.
    pub fn f_p(&mut self, s: usize) -> &MultiMap {
        assert!(s >= 2);
        self.ensure_p(s);
        &self.fp[&s]
    }

    /// `𝔭_s` on leaf inputs, `s ≥ 2`, assembled from the cached blocks.
    pub fn p_kernel(&mut self, s: usize) -> MultiMap {
        assert!(s >= 2);
        self.ensure_p(s - 1);
        self.p_sum(s, &self.mu)
    }

    fn ensure_q(&mut self, s: usize) {
        for n in 2..=s {
            if self.kq.contains_key(&n) {
                continue;
            }
            let (kq, fq) = (self.q_sum(n, &self.mu_kappa), self.q_sum(n, &self.mu_f));
            let gfq = fq.post(&self.g_columns);
            self.kq.insert(n, kq);
            self.fq.insert(n, fq);
            self.gfq.insert(n, gfq);
            let block = self.gf_block_sum(n);
            self.gf_blocks.insert(n, block);
        }
    }

    /// `𝔮_n = −μ(κ𝔮_{n−1} ⊗ Id) + Σ_j (−1)^{jn+n−j²} μ((gf)_j ⊗ κ𝔮_{n−j})`, post-composed.
    fn q_sum(&self, n: usize, post_mu: &MultiMap) -> MultiMap {
        let mut acc = MultiMap::new(n);
        let id = Preimages::new(&MultiMap::identity(self.algebra.dim()), 0, &self.degrees);
        let left = Preimages::new(&self.kq[&(n - 1)], -(n as i32 - 1), &self.degrees);
        compose_into(post_mu, &[&left, &id], &-Scalar::one(), &mut acc);
        for j in 1..n {
            let (ji, ni) = (j as i64, n as i64);
            let e = (ji * ni + ni - ji * ji).rem_euclid(2) == 1;
            let gfj = Preimages::new(&self.gf_blocks[&j], 1 - j as i32, &self.degrees);
            let kq = Preimages::new(&self.kq[&(n - j)], -((n - j) as i32), &self.degrees);
            compose_into(post_mu, &[&gfj, &kq], &sign(e), &mut acc);
        }
        acc
    }

    /// `(gf)_m = gf∘𝔮_m + Σ_{B(m)} (−1)^{u} (κ𝔮_k)((gf𝔮_{r_1}) ⊗ … ⊗ (gf𝔮_{r_k}))`,
    /// with `u = Σ_{i<j≤k} r_i(r_j+1)`.
    fn gf_block_sum(&self, m: usize) -> MultiMap {
        let mut acc = self.gfq[&m].clone();
        let pre: BTreeMap<usize, Preimages> =
            (1..m).map(|r| (r, Preimages::new(&self.gfq[&r], 1 - r as i32, &self.degrees))).collect();
        for k in 2..=m {
            for comp in compositions(m, k) {
                let mut u = 0usize;
                for i in 0..k {
                    for j in i + 1..k {
                        u += comp[i] * (comp[j] + 1);
                    }
                }
                let inners: Vec<&Preimages> = comp.iter().map(|r| &pre[r]).collect();
                compose_into(&self.kq[&k], &inners, &sign(u % 2 == 1), &mut acc);
            }
        }
        acc
    }

    pub fn kappa_q(&mut self, s: usize) -> &MultiMap {
        self.ensure_q(s);
        &self.kq[&s]
    }

    pub fn f_q(&mut self, s: usize) -> &MultiMap {
        self.ensure_q(s);
        &self.fq[&s]
    }

    pub fn gf_block(&mut self, m: usize) -> &MultiMap {
        self.ensure_q(m);
        &self.gf_blocks[&m]
    }

    /// `𝔮_s` assembled from the cached blocks (`𝔮_1 = Id`).
    pub fn q_kernel(&mut self, s: usize) -> MultiMap {
        if s == 1 {
            return MultiMap::identity(self.algebra.dim());
        }
        self.ensure_q(s - 1);
        self.q_sum(s, &self.mu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferOptions {
    pub arity_cap: usize,
    /// Run the Stasheff and morphism checks on the output.
    pub verify: bool,
    /// Treat the diagram as filtered: validate it as such and check filtration windows.
    pub filtered: bool,
}

impl TransferOptions {
    pub fn with_cap(arity_cap: usize) -> Self {
        TransferOptions { arity_cap, ..Default::default() }
    }
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions { arity_cap: DEFAULT_ARITY_CAP, verify: true, filtered: true }
    }
}

/// Components `𝓗_s` of the homotopy between the identity and `𝒢𝓕`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyData {
    pub components: BTreeMap<usize, MultiMap>,
}

#[derive(Clone, Debug)]
pub struct TransferResult {
    pub structure: AInfinityStructure,
    /// `𝓕 : A → B`.
    pub f: AInfinityMorphism,
    /// `𝒢 = (g, κ∘𝔭_s∘g^{⊗s}) : B → A`.
    pub g: AInfinityMorphism,
    pub homotopy: HomotopyData,
    /// Whether `𝔭_{cap+1}` vanishes, as a hint that higher operations stay zero.
    pub p_vanishes_above_cap: bool,
}

/// Transfers the dg-algebra structure of `algebra` along `diagram`:
/// `ν_s = f𝔭_s g^{⊗s}` and `𝒢_s = κ𝔭_s g^{⊗s}`. `𝓕` and `𝓗` come from
/// [`perturbed_morphism`]; the printed 𝔮-recursion ([`KernelCache::f_q`])
/// agrees with it on the bundled fixtures but not on every diagram.
pub fn transfer_ainfinity(
    diagram: &TransferDiagram,
    algebra: &FilteredDGA,
    opts: TransferOptions,
) -> Result<TransferResult> {
    if diagram.source.dim() != algebra.dim() || diagram.source.d() != algebra.complex().d() {
        return Err(Error::Precondition("diagram source is not the algebra's complex".into()));
    }
    let cap = opts.arity_cap.max(1);
    let mut cache = KernelCache::new(diagram, algebra);
    let mut ops = BTreeMap::new();
    let mut g_components = BTreeMap::from([(1, MultiMap::from_matrix(&diagram.g))]);
    for s in 2..=cap {
        ops.insert(s, cache.f_p(s).clone());
        g_components.insert(s, cache.kappa_p(s).clone());
    }
    let (f_components, h_components) = perturbed_morphism(diagram, algebra, cap);
    ops.retain(|_, m: &mut MultiMap| !m.is_zero());
    let p_vanishes_above_cap = cache.p_kernel(cap + 1).is_zero();
    let source = AInfinityStructure::from_dga(algebra, cap);
    let structure = AInfinityStructure {
        basis: diagram.target.basis().to_vec(),
        field: diagram.target.field(),
        d: MultiMap::from_matrix(diagram.target.d()),
        ops,
        arity_cap: cap,
        filtered: opts.filtered,
        er_minimal: None,
    };
    let f = AInfinityMorphism {
        source: source.clone(),
        target: structure.clone(),
        components: f_components,
        arity_cap: cap,
    };
    let g = AInfinityMorphism { source: structure.clone(), target: source, components: g_components, arity_cap: cap };
    let homotopy = HomotopyData { components: h_components };
    let result = TransferResult { structure, f, g, homotopy, p_vanishes_above_cap };
    if opts.verify {
        verify_transfer(diagram, &result, opts.filtered)?;
    }
    Ok(result)
}

fn verify_transfer(diagram: &TransferDiagram, r: &TransferResult, filtered: bool) -> Result<()> {
    diagram.validate(filtered)?;
    let checks = [
        ("Stasheff identities", check_stasheff(&r.structure)),
        ("morphism identities for F", check_morphism(&r.f)),
        ("morphism identities for G", check_morphism(&r.g)),
    ];
    for (what, report) in checks {
        if !report.is_ok() {
            return Err(Error::invariant(format!("{what}: {}", report.summary())));
        }
    }
    if !filtered {
        return Ok(());
    }
    let mut problems = check_filtered_structure(&r.structure);
    problems.extend(check_filtered_morphism(&r.f, 0));
    problems.extend(check_filtered_morphism(&r.g, 0));
    let a = &r.f.source.basis;
    for (&s, h) in &r.homotopy.components {
        problems.extend(check_map_window(&format!("H_{s}"), h, a, a, 0));
    }
    if let Some(p) = problems.first() {
        return Err(Error::invariant(format!("filtration window violated: {p}")));
    }
    Ok(())
}
