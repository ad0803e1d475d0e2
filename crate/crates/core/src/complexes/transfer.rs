use std::collections::BTreeMap;

use super::spectral::compute_page;
use super::{check_chain_map, check_map, BasisElement, FilteredComplex};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, leading_index, zero_vector, Matrix, Vector};
use crate::scalar::Scalar;

/// Maps `f : A → B`, `g : B → A`, `h : A → A` with `hd + dh = id − gf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferDiagram {
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub f: Matrix,
    pub g: Matrix,
    pub h: Matrix,
}

impl TransferDiagram {
    /// Checks the chain-map and homotopy identities, degrees, and (when
    /// `filtered`) compatibility of all three maps with the filtrations.
    pub fn validate(&self, filtered: bool) -> Result<()> {
        let (a, b) = (&self.source, &self.target);
        check_chain_map("f", &self.f, a, b, filtered)?;
        check_chain_map("g", &self.g, b, a, filtered)?;
        check_map("h", &self.h, a, a, -1, filtered)?;
        let lhs = self.h.mul(a.d()).add(&a.d().mul(&self.h));
        let rhs = Matrix::identity(a.dim()).sub(&self.g.mul(&self.f));
        if lhs != rhs {
            let j = (0..a.dim()).find(|&j| lhs.column(j) != rhs.column(j)).unwrap_or(0);
            return Err(Error::validation(format!(
                "hd + dh ≠ id − gf on {}",
                a.basis().get(j).map_or("?", |e| e.label.as_str())
            )));
        }
        Ok(())
    }
}

/// Per-degree data of the decomposition `A^n = B^n ⊕ H^n ⊕ C^n` with
/// `d : C^n ≅ B^{n+1}`.
struct Decomposition {
    b: Vec<Vector>,
    h: Vec<Vector>,
    c: Vec<Vector>,
    /// Inverse of the matrix of columns `[B | H | C]`, restricted to degree `n`.
    coords: Matrix,
    idx: Vec<usize>,
}

/// Classical transfer onto `(H(C), 0)` using canonical complements. Target
/// basis element labels are `[x]` with `x` the leading basis label of the
/// representative; their weight is the filtration level of the representative.
pub fn classical_transfer(c: &FilteredComplex) -> Result<TransferDiagram> {
    c.validate()?;
    let n_all = c.dim();
    let mut decomps: BTreeMap<i32, Decomposition> = BTreeMap::new();
    for n in c.degrees() {
        let idx = c.degree_indices(n);
        let z = c.cycles(n);
        let b = c.boundaries(n);
        let h = b.complement_in(&z)?;
        let comp = z.complement_in(&c.degree_space(n))?;
        let cols: Vec<Vector> = b
            .basis()
            .iter()
            .chain(h.basis())
            .chain(comp.basis())
            .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
            .collect();
        let coords = Matrix::from_columns(idx.len(), &cols)
            .inverse()
            .ok_or_else(|| Error::invariant("B ⊕ H ⊕ C is not a basis"))?;
        decomps.insert(
            n,
            Decomposition { b: b.basis().to_vec(), h: h.basis().to_vec(), c: comp.basis().to_vec(), coords, idx },
        );
    }

    let mut target_basis = Vec::new();
    let mut g_cols = Vec::new();
    let mut offsets = BTreeMap::new();
    for (&n, dc) in &decomps {
        offsets.insert(n, target_basis.len());
        for v in &dc.h {
            let lead = leading_index(v).expect("nonzero class representative");
            let weight = (0..n_all).filter(|&i| !v[i].is_zero()).map(|i| c.basis()[i].weight).min().unwrap_or(0);
            target_basis.push(BasisElement::new(bracket(&c.basis()[lead].label), n, weight));
            g_cols.push(v.clone());
        }
    }
    let m = target_basis.len();
    let g = Matrix::from_columns(n_all, &g_cols);
    let mut f = Matrix::zeros(m, n_all);
    let mut h = Matrix::zeros(n_all, n_all);
    for (&n, dc) in &decomps {
        // k(b_i) is the c ∈ C^{n−1} with dc = b_i.
        let k_of_b: Vec<Vector> = match decomps.get(&(n - 1)) {
            Some(prev) if !dc.b.is_empty() => {
                let dmat = Matrix::from_columns(n_all, &prev.c.iter().map(|v| c.d().apply(v)).collect::<Vec<_>>());
                dc.b.iter()
                    .map(|bv| {
                        let sol = dmat.solve(bv).expect("d maps C onto B");
                        let mut out = zero_vector(n_all);
                        for (s, cv) in sol.iter().zip(&prev.c) {
                            add_scaled(&mut out, s, cv);
                        }
                        out
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        let (nb, nh) = (dc.b.len(), dc.h.len());
        let off = offsets[&n];
        for (jj, &j) in dc.idx.iter().enumerate() {
            let coord = dc.coords.column(jj);
            for t in 0..nh {
                f.set(off + t, j, coord[nb + t].clone());
            }
            let mut hv = zero_vector(n_all);
            for (beta, kb) in coord[..nb].iter().zip(&k_of_b) {
                add_scaled(&mut hv, beta, kb);
            }
            for (i, x) in hv.into_iter().enumerate() {
                h.set(i, j, x);
            }
        }
    }
    let target = FilteredComplex::zero_differential(target_basis, c.field());
    let diagram = TransferDiagram { source: c.clone(), target, f, g, h };
    diagram.validate(false).map_err(|e| Error::invariant(format!("classical transfer: {e}")))?;
    Ok(diagram)
}

/// `[x]` for a plain label; labels that already name a class are kept.
pub(crate) fn bracket(label: &str) -> String {
    if label.starts_with('[') && label.ends_with(']') {
        label.to_string()
    } else {
        format!("[{label}]")
    }
}

/// Filtered transfer onto a complex `M` with `Gr^p M ≅ E_1^p`, built by
/// descending induction on the weight. At weight `p` the complex
/// `Q_p = M_{p+1}[1] ⊕ F^pA` with `D(m,a) = (−dm, −g_{p+1}m + da)` is
/// transferred classically and its cohomology becomes the new weight-`p` part.
pub fn filtered_transfer(c: &FilteredComplex) -> Result<TransferDiagram> {
    c.validate()?;
    let n_all = c.dim();
    let (lo, hi) = c.weight_range();

    // State at weight p+1: the M basis, its differential, g (A-columns), and
    // f, h stored as full matrices on A (zero on basis elements below p+1).
    let mut m_basis: Vec<BasisElement> = Vec::new();
    let mut m_d = Matrix::zeros(0, 0);
    let mut g_cols: Vec<Vector> = Vec::new();
    let mut f_cols: Vec<Vector> = vec![Vec::new(); n_all];
    let mut h = Matrix::zeros(n_all, n_all);
    let mut used_labels: BTreeMap<String, usize> = BTreeMap::new();

    for p in (lo..=hi).rev() {
        let fp = c.indices(|e| e.weight >= p);
        let nm = m_basis.len();
        let nq = fp.len() + nm;
        // Q_p basis: F^pA first, then the shifted M_{p+1}.
        let mut q_basis = Vec::with_capacity(nq);
        for &i in &fp {
            let e = &c.basis()[i];
            q_basis.push(BasisElement::new(format!("a:{}", e.label), e.degree, 0));
        }
        for e in &m_basis {
            q_basis.push(BasisElement::new(format!("m:{}", e.label), e.degree - 1, 0));
        }
        let mut qd = Matrix::zeros(nq, nq);
        for (ja, &j) in fp.iter().enumerate() {
            for (ia, &i) in fp.iter().enumerate() {
                qd.set(ia, ja, c.d().get(i, j).clone());
            }
        }
        for jm in 0..nm {
            for im in 0..nm {
                let x = m_d.get(im, jm);
                if !x.is_zero() {
                    qd.set(fp.len() + im, fp.len() + jm, -x);
                }
            }
            for (ia, &i) in fp.iter().enumerate() {
                let x = &g_cols[jm][i];
                if !x.is_zero() {
                    qd.set(ia, fp.len() + jm, -x);
                }
            }
        }
        let q = FilteredComplex::new(q_basis, qd, c.field()).map_err(|e| Error::invariant(format!("Q_{p}: {e}")))?;
        let qt = classical_transfer(&q)?;
        let nv = qt.target.dim();

        // New M basis: M_{p+1} followed by V_p.
        let mut new_basis = m_basis.clone();
        let mut new_g = g_cols.clone();
        let mut new_d = Matrix::zeros(nm + nv, nm + nv);
        for i in 0..nm {
            for j in 0..nm {
                new_d.set(i, j, m_d.get(i, j).clone());
            }
        }
        for v in 0..nv {
            let iota = qt.g.column(v);
            let mut gv = zero_vector(n_all);
            for (ia, &i) in fp.iter().enumerate() {
                gv[i] = iota[ia].clone();
            }
            for im in 0..nm {
                new_d.set(im, nm + v, iota[fp.len() + im].clone());
            }
            let degree = qt.target.basis()[v].degree;
            let label = model_label(c, &gv, p, &mut used_labels);
            new_basis.push(BasisElement::new(label, degree, p));
            new_g.push(gv);
        }

        // f and h on the weight-p basis elements of A.
        let hk = &qt.h;
        for &e in c.indices(|x| x.weight == p).iter() {
            let de = c.d().column(e);
            let mut tau = zero_vector(n_all);
            for i in 0..n_all {
                if c.basis()[i].weight > p {
                    tau[i] = de[i].clone();
                }
            }
            // r(e) = (f_{p+1} τe, e − h_{p+1} τe) in Q_p coordinates.
            let mut x = zero_vector(nq);
            let h_tau = h.apply(&tau);
            for (ia, &i) in fp.iter().enumerate() {
                let unit = if i == e { Scalar::one() } else { Scalar::zero() };
                x[ia] = &unit - &h_tau[i];
            }
            for i in 0..n_all {
                if tau[i].is_zero() {
                    continue;
                }
                for (im, fv) in f_cols[i].iter().enumerate() {
                    if !fv.is_zero() {
                        x[fp.len() + im] += &(&tau[i] * fv);
                    }
                }
            }
            let rho = qt.f.apply(&x);
            let kx = hk.apply(&x);
            let mut fe = zero_vector(nm + nv);
            for im in 0..nm {
                fe[im] = -&kx[fp.len() + im];
            }
            for v in 0..nv {
                fe[nm + v] = rho[v].clone();
            }
            f_cols[e] = fe;
            for (ia, &i) in fp.iter().enumerate() {
                h.set(i, e, kx[ia].clone());
            }
        }
        for col in f_cols.iter_mut() {
            col.resize(nm + nv, Scalar::zero());
        }
        m_basis = new_basis;
        m_d = new_d;
        g_cols = new_g;
    }

    // Reorder M by (degree, weight descending order of construction kept).
    let total = m_basis.len();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&i| (m_basis[i].degree, m_basis[i].weight, i));
    let mut pos = vec![0; total];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let basis: Vec<BasisElement> = order.iter().map(|&i| m_basis[i].clone()).collect();
    let mut d = Matrix::zeros(total, total);
    for j in 0..total {
        for i in 0..total {
            let x = m_d.get(i, j);
            if !x.is_zero() {
                d.set(pos[i], pos[j], x.clone());
            }
        }
    }
    let mut f = Matrix::zeros(total, n_all);
    for (j, col) in f_cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            if !x.is_zero() {
                f.set(pos[i], j, x.clone());
            }
        }
    }
    let g_sorted: Vec<Vector> = order.iter().map(|&i| g_cols[i].clone()).collect();
    let g = Matrix::from_columns(n_all, &g_sorted);
    let target =
        FilteredComplex::new(basis, d, c.field()).map_err(|e| Error::invariant(format!("filtered model: {e}")))?;
    let diagram = TransferDiagram { source: c.clone(), target, f, g, h };
    diagram.validate(true).map_err(|e| Error::invariant(format!("filtered transfer: {e}")))?;
    check_against_e1(&diagram)?;
    Ok(diagram)
}

/// `[x]` with `x` the leading label of the weight-`p` part of `g(v)`; repeated
/// labels get primes appended.
fn model_label(c: &FilteredComplex, gv: &[Scalar], p: i32, used: &mut BTreeMap<String, usize>) -> String {
    let lead = (0..gv.len()).find(|&i| !gv[i].is_zero() && c.basis()[i].weight == p).or_else(|| leading_index(gv));
    let base = match lead {
        Some(i) => bracket(&c.basis()[i].label),
        None => "[0]".to_string(),
    };
    let count = used.entry(base.clone()).or_insert(0);
    *count += 1;
    if *count == 1 {
        base
    } else {
        format!("{base}{}", "'".repeat(*count - 1))
    }
}

/// `dim F^pM^n = Σ_{q≥p} dim E_1^{q,n−q}(A)` and `d(F^pM) ⊆ F^{p+1}M`.
fn check_against_e1(t: &TransferDiagram) -> Result<()> {
    let e1 = compute_page(&t.source, 1);
    let m = &t.target;
    for (&(p, q), entry) in &e1.entries {
        let n = p + q;
        let have = m.basis().iter().filter(|e| e.degree == n && e.weight == p).count();
        if have != entry.dim() {
            return Err(Error::invariant(format!(
                "model has {have} elements of bidegree ({p},{q}) but E_1 has dimension {}",
                entry.dim()
            )));
        }
    }
    if m.basis().iter().any(|e| !e1.entries.contains_key(&(e.weight, e.degree - e.weight))) {
        return Err(Error::invariant("model has elements outside the E_1 range"));
    }
    for j in 0..m.dim() {
        for i in 0..m.dim() {
            if !m.d().get(i, j).is_zero() && m.basis()[i].weight <= m.basis()[j].weight {
                return Err(Error::invariant(format!(
                    "model differential does not raise weight on {}",
                    m.basis()[j].label
                )));
            }
        }
    }
    Ok(())
}

/// Solves `hd + dh = id − gf` for a degree −1 map `h` on `source`, supported on
/// filtration-compatible entries when `filtered`. Among all solutions the one
/// with free unknowns set to zero is returned.
pub fn solve_homotopy(source: &FilteredComplex, f: &Matrix, g: &Matrix, filtered: bool) -> Result<Matrix> {
    let n = source.dim();
    let b = source.basis();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .filter(|&(i, j)| b[i].degree == b[j].degree - 1 && (!filtered || b[i].weight >= b[j].weight))
        .collect();
    let equations: Vec<(usize, usize)> =
        (0..n).flat_map(|bb| (0..n).map(move |a| (a, bb))).filter(|&(a, bb)| b[a].degree == b[bb].degree).collect();
    let phi = Matrix::identity(n).sub(&g.mul(f));
    let d = source.d();
    let mut system = Matrix::zeros(equations.len(), unknowns.len());
    for (u, &(i, j)) in unknowns.iter().enumerate() {
        // h_{ij} contributes d_{jb} to (hd)_{ib} and d_{ai} to (dh)_{aj}.
        for (e, &(a, bb)) in equations.iter().enumerate() {
            let mut coeff = Scalar::zero();
            if a == i {
                coeff += d.get(j, bb);
            }
            if bb == j {
                coeff += d.get(a, i);
            }
            if !coeff.is_zero() {
                system.set(e, u, coeff);
            }
        }
    }
    let rhs: Vector = equations.iter().map(|&(a, bb)| phi.get(a, bb).clone()).collect();
    let sol = system.solve(&rhs).ok_or_else(|| Error::validation("no homotopy h with hd + dh = id − gf exists"))?;
    let mut h = Matrix::zeros(n, n);
    for (&(i, j), x) in unknowns.iter().zip(sol) {
        h.set(i, j, x);
    }
    Ok(h)
}

/// Classical transfer of a complex whose differential raises weight by exactly
/// `r`, done separately on each summand of constant `weight − r·degree`, so that
/// every target class has a homogeneous representative.
pub fn graded_classical_transfer(c: &FilteredComplex, r: usize) -> Result<TransferDiagram> {
    c.validate()?;
    let n_all = c.dim();
    let key = |e: &BasisElement| e.weight - r as i32 * e.degree;
    for j in 0..n_all {
        for i in 0..n_all {
            if !c.d().get(i, j).is_zero() && key(&c.basis()[i]) != key(&c.basis()[j]) {
                return Err(Error::Precondition(format!("d({}) is not homogeneous of weight {r}", c.basis()[j].label)));
            }
        }
    }
    let keys: std::collections::BTreeSet<i32> = c.basis().iter().map(key).collect();
    // (target element, g column, f row, leading index) per class; h assembled directly.
    let mut classes: Vec<(BasisElement, Vector, Vector, usize)> = Vec::new();
    let mut h = Matrix::zeros(n_all, n_all);
    for k in keys {
        let idx = c.indices(|e| key(e) == k);
        let basis: Vec<BasisElement> = idx.iter().map(|&i| c.basis()[i].clone()).collect();
        let sub = FilteredComplex::new_unchecked(basis, c.d().submatrix(&idx, &idx), c.field());
        let t = classical_transfer(&sub)?;
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                h.set(i, j, t.h.get(a, b).clone());
            }
        }
        for (m, e) in t.target.basis().iter().enumerate() {
            let mut gcol = zero_vector(n_all);
            let mut frow = zero_vector(n_all);
            for (a, &i) in idx.iter().enumerate() {
                gcol[i] = t.g.get(a, m).clone();
                frow[i] = t.f.get(m, a).clone();
            }
            let lead = leading_index(&gcol).expect("nonzero class representative");
            classes.push((e.clone(), gcol, frow, lead));
        }
    }
    classes.sort_by_key(|(e, _, _, lead)| (e.degree, e.weight, *lead));
    let m = classes.len();
    let target_basis: Vec<BasisElement> = classes.iter().map(|(e, ..)| e.clone()).collect();
    let g = Matrix::from_columns(n_all, &classes.iter().map(|(_, gc, ..)| gc.clone()).collect::<Vec<_>>());
    let f = Matrix::from_rows(classes.iter().map(|(_, _, fr, _)| fr.clone()).collect());
    let f = if m == 0 { Matrix::zeros(0, n_all) } else { f };
    let target = FilteredComplex::zero_differential(target_basis, c.field());
    let diagram = TransferDiagram { source: c.clone(), target, f, g, h };
    diagram.validate(false).map_err(|e| Error::invariant(format!("graded transfer: {e}")))?;
    Ok(diagram)
}
