//! Acceptance criteria, one PASS/FAIL line each; exits nonzero if any fail.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use fainf_core::ainfinity::{
    bigraded_transfer_on_page, check_morphism, check_stasheff, er_minimal_model, filtered_minimal_model,
    transfer_ainfinity, tree_transfer, AInfinityMorphism, AInfinityStructure, TransferOptions,
};
use fainf_core::complexes::{
    decalage, filtered_transfer, graded_classical_transfer, is_filtered_quasi_iso, spectral_sequence, TransferDiagram,
};
use fainf_core::hodge::{
    deligne_splitting, hodge_transfer, purity_formality_check, random_mhs, split_transfer, DeligneSplitting,
    MixedHodgeComplex, MixedHodgeDGA, MixedHodgeStructure,
};
use fainf_core::presentations::{
    expand, fixture, fixture_names, hodge_fixture, hodge_fixture_names, parse_presentation, FilteredDGA,
};
use fainf_core::sparse::{scaled, unit};
use fainf_core::{Matrix, Rational, Scalar, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, context: &str) -> Result<T, String> {
    r.map_err(|e| format!("{context}: {e}"))
}

#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn finish(self, summary: String) -> Outcome {
        if self.0.is_empty() {
            return Ok(summary);
        }
        let mut text = self.0.iter().take(6).cloned().collect::<Vec<_>>().join("; ");
        if self.0.len() > 6 {
            text.push_str(&format!("; {} more", self.0.len() - 6));
        }
        Err(text)
    }
}

fn opts(cap: usize) -> TransferOptions {
    TransferOptions { arity_cap: cap, verify: false, filtered: true }
}

fn fixture_structure(name: &str, kind: &str, cap: usize) -> Result<AInfinityStructure, String> {
    let t = ok(ok(fixture(name), name)?.transfer(kind), kind)?;
    Ok(ok(transfer_ainfinity(&t.diagram, &t.algebra, opts(cap)), kind)?.structure)
}

fn render(s: &AInfinityStructure, labels: &[&str]) -> String {
    match s.eval_labels(labels) {
        Some(v) => s.render_vector(&v),
        None => format!("missing label among {labels:?}"),
    }
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// An exterior algebra on at most four degree-1 generators with random
/// weights and a random triangular filtered differential, redrawn until d² = 0.
fn random_algebra(rng: &mut ChaCha8Rng, id: usize) -> FilteredDGA {
    loop {
        let k = rng.gen_range(1..=4);
        let weights: Vec<i32> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
        let mut differentials = serde_json::Map::new();
        for j in 0..k {
            let mut expr = String::new();
            for i in 0..j {
                for l in i + 1..j {
                    if weights[i] + weights[l] < weights[j] || !rng.gen_bool(0.6) {
                        continue;
                    }
                    let c: i32 = rng.gen_range(-2..=2);
                    if c == 0 {
                        continue;
                    }
                    let sign = if c < 0 {
                        "-"
                    } else if expr.is_empty() {
                        ""
                    } else {
                        "+"
                    };
                    expr.push_str(&format!("{sign}{}*{}*{}", c.abs(), NAMES[i], NAMES[l]));
                }
            }
            if !expr.is_empty() {
                differentials.insert(NAMES[j].to_string(), expr.into());
            }
        }
        let generators: Vec<_> = (0..k).map(|j| json!({"name": NAMES[j], "degree": 1, "weight": weights[j]})).collect();
        let doc = json!({"name": format!("random-{id}"), "field": "rational", "generators": generators, "differentials": differentials});
        let p = parse_presentation(doc.to_string().as_bytes()).expect("generated documents parse");
        if let Ok(a) = expand(&p) {
            return a;
        }
    }
}

fn random_algebras(seed: u64, count: usize) -> Vec<FilteredDGA> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|id| random_algebra(&mut rng, id)).collect()
}

fn fixture_algebras() -> Result<Vec<(String, FilteredDGA)>, String> {
    let mut out = Vec::new();
    for name in fixture_names() {
        out.push((name.to_string(), ok(ok(fixture(name), name)?.algebra(), name)?));
    }
    for name in hodge_fixture_names() {
        out.push((name.to_string(), ok(expand(&ok(hodge_fixture(name), name)?), name)?));
    }
    Ok(out)
}

fn exemplet() -> Outcome {
    let fx = ok(fixture("exemplet"), "exemplet")?;
    let a = ok(fx.algebra(), "expand")?;
    let mut f = Failures::default();
    let h = a.complex().cohomology_dims();
    f.expect(h.get(&1) == Some(&3) && h.get(&2) == Some(&4), || format!("cohomology dims {h:?}"));
    let ss = spectral_sequence(a.complex(), 1);
    let e1 = ss.page(1).ok_or("no E_1 page")?;
    for ((p, q), d) in [((0, 1), 2), ((1, 0), 1), ((0, 2), 2), ((1, 1), 2)] {
        f.expect(e1.dim_at(p, q) == d, || format!("dim E_1^{{{p},{q}}} = {}, expected {d}", e1.dim_at(p, q)));
    }
    f.expect(ss.degeneration == Some(1), || format!("degenerates at {:?}", ss.degeneration));
    let s = fixture_structure("exemplet", "filtered", 4)?;
    let nu2 = render(&s, &["[b]", "[c]"]);
    f.expect(nu2 == "[e*c]", || format!("ν₂([b],[c]) = {nu2}, expected y′ = [e*c]"));
    let (page, _) = ok(a.page_algebra(1), "page algebra")?;
    match (page.complex().index_of("[b]"), page.complex().index_of("[c]")) {
        (Some(b), Some(c)) => {
            f.expect(page.mul_basis(b, c).is_empty(), || "[b]·[c] ≠ 0 on E_1".into());
        }
        _ => f.expect(false, || format!("E_1 labels {:?}", page.complex().labels())),
    }
    f.finish(format!("H¹ = 3, H² = 4, E₁ dims, degeneration at E₁, ν₂([b],[c]) = {nu2} and [b]·[c] = 0 on E₁"))
}

fn kodaira_thurston() -> Outcome {
    let fx = ok(fixture("kodaira-thurston"), "kodaira-thurston")?;
    let a = ok(fx.algebra(), "expand")?;
    let mut f = Failures::default();
    let ss = spectral_sequence(a.complex(), 1);
    let e1 = ss.page(1).ok_or("no E_1 page")?;
    let printed: BTreeMap<(i32, i32), usize> =
        [(0, 2, 1), (1, 2, 1), (2, 2, 1), (0, 1, 2), (1, 1, 2), (2, 1, 2), (0, 0, 1), (1, 0, 1), (2, 0, 1)]
            .into_iter()
            .map(|(p, q, d)| ((p, q), d))
            .collect();
    f.expect(e1.dims() == printed, || format!("E_1 grid {:?}", e1.dims()));
    f.expect(ss.degeneration == Some(1), || format!("degenerates at {:?}", ss.degeneration));

    let dol = fixture_structure("kodaira-thurston", "dolbeault", 4)?;
    let hdr = fixture_structure("kodaira-thurston", "hodge-de-rham", 4)?;
    let labels = dol.labels();
    f.expect(labels == hdr.labels(), || "the two structures are on different bases".into());
    // Printed order, Dolbeault value, Hodge-de Rham value.
    let rows = [
        ("[a]", "[bbar]", "[a*bbar]", "[a*bbar] + [a*b]"),
        ("[abar]", "[bbar]", "[abar*bbar]", "[abar*bbar] - [b*abar]"),
        ("[a]", "[abar*bbar]", "0", "[a*b*abar]"),
        ("[abar]", "[a*bbar]", "0", "-[a*b*abar]"),
        ("[bbar]", "[abar*bbar]", "0", "[b*abar*bbar]"),
        ("[bbar]", "[a*bbar]", "0", "-[a*b*bbar]"),
    ];
    let unordered =
        |x: &str, y: &str| if x <= y { (x.to_string(), y.to_string()) } else { (y.to_string(), x.to_string()) };
    let mut diff = BTreeSet::new();
    for x in &labels {
        for y in &labels {
            if render(&dol, &[x, y]) != render(&hdr, &[x, y]) {
                diff.insert(unordered(x, y));
            }
        }
    }
    let expected: BTreeSet<_> = rows.iter().map(|r| unordered(r.0, r.1)).collect();
    f.expect(diff == expected, || {
        format!("ν₂ differs on {:?}", diff.symmetric_difference(&expected).collect::<Vec<_>>())
    });
    for (x, y, d, h) in rows {
        let (gd, gh) = (render(&dol, &[x, y]), render(&hdr, &[x, y]));
        f.expect(gd == d && gh == h, || format!("ν₂({x},{y}) = {gd} | {gh}, expected {d} | {h}"));
    }
    for (s, name) in [(&dol, "Dolbeault"), (&hdr, "Hodge-de Rham")] {
        for (args, want) in [(["[a]", "[a]", "[abar]"], "i*[a*b]"), (["[a]", "[abar]", "[abar]"], "-i*[b*abar]")] {
            let got = render(s, &args);
            f.expect(got == want, || format!("{name} ν₃({}) = {got}, expected {want}", args.join(",")));
        }
    }
    f.finish("E₁ grid, degeneration at E₁, the six ν₂ rows and both ν₃ values".into())
}

fn iwasawa() -> Outcome {
    let fx = ok(fixture("iwasawa"), "iwasawa")?;
    let a = ok(fx.algebra(), "expand")?;
    let mut f = Failures::default();
    let ss = spectral_sequence(a.complex(), 2);
    let e1 = ss.page(1).ok_or("no E_1 page")?;
    let e2 = ss.page(2).ok_or("no E_2 page")?;
    let mut printed = BTreeMap::new();
    for p in 0..4 {
        for q in 0..4 {
            let row = if q == 0 || q == 3 { [1, 3, 3, 1] } else { [2, 6, 6, 2] };
            printed.insert((p, q), row[p as usize]);
        }
    }
    f.expect(e1.dims() == printed, || format!("E_1 grid {:?}", e1.dims()));
    f.expect(ss.degeneration == Some(2), || format!("degenerates at {:?}", ss.degeneration));
    let labels = |page: &fainf_core::complexes::Page| -> BTreeSet<String> {
        page.entries.values().flat_map(|e| e.labels.iter().cloned()).collect()
    };
    let dying: BTreeSet<String> = labels(e1).difference(&labels(e2)).cloned().collect();
    let gray: BTreeSet<String> = [
        "[c]",
        "[a*b]",
        "[c*abar]",
        "[c*bbar]",
        "[a*b*abar]",
        "[a*b*bbar]",
        "[c*abar*cbar]",
        "[c*bbar*cbar]",
        "[a*b*abar*cbar]",
        "[a*b*bbar*cbar]",
        "[c*abar*bbar*cbar]",
        "[a*b*abar*bbar*cbar]",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    f.expect(dying == gray, || {
        format!("dying classes differ on {:?}", dying.symmetric_difference(&gray).collect::<Vec<_>>())
    });
    f.expect(e2.dims().values().sum::<usize>() == 36, || "dim E_2 ≠ 36".into());

    // S1: the Hodge-de Rham structure on E_1 transferred to E_2; S2: transfer of
    // (E_1, d_1); S3: the E_2-minimal model.
    let e1s = fixture_structure("iwasawa", "hodge-de-rham", 3)?;
    let diagram = ok(graded_classical_transfer(&ok(e1s.complex(), "E_1 complex")?, 1), "E_1 → E_2")?;
    let s1 = ok(tree_transfer(&diagram, &e1s, TransferOptions { filtered: false, ..opts(3) }), "S1")?;
    let s2 = ok(bigraded_transfer_on_page(&a, 1, opts(3)), "S2")?.result.structure;
    let s3 = ok(er_minimal_model(&a, 2, opts(3)), "S3")?.structure;
    let table = [
        (["[a]", "[a]", "[b]"], ["0", "[a*c]", "[a*c]"]),
        (["[abar]", "[abar]", "[bbar]"], ["[abar*cbar]", "0", "[abar*cbar]"]),
        (["[a]", "[b]", "[b]"], ["0", "[b*c]", "[b*c]"]),
        (["[abar]", "[bbar]", "[bbar]"], ["[bbar*cbar]", "0", "[bbar*cbar]"]),
    ];
    for (args, want) in table {
        for (j, s) in [&s1, &s2, &s3].into_iter().enumerate() {
            let got = render(s, &args);
            f.expect(got == want[j], || format!("S{} ν₃({}) = {got}, expected {}", j + 1, args.join(","), want[j]));
        }
    }
    let basis = s1.labels();
    f.expect(basis == s2.labels() && basis == s3.labels(), || "S1, S2, S3 are on different bases".into());
    let mut nu2_diffs = 0;
    for x in &basis {
        for y in &basis {
            let v = render(&s1, &[x, y]);
            if v != render(&s2, &[x, y]) || v != render(&s3, &[x, y]) {
                nu2_diffs += 1;
            }
        }
    }
    f.expect(nu2_diffs == 0, || format!("ν₂ differs on {nu2_diffs} pairs"));
    f.finish("E₁ grid, the 12 gray classes die at E₂, the S1/S2/S3 ν₃ table and equal ν₂".into())
}

fn structural_check(a: &FilteredDGA) -> Result<(), String> {
    let c = a.complex();
    let t = ok(filtered_transfer(c), "filtered_transfer")?;
    let m = &t.target;
    let ss = spectral_sequence(c, 1);
    let e1 = ss.page(1).ok_or("no E_1 page")?;
    let (alo, ahi) = c.weight_range();
    let (mlo, mhi) = m.weight_range();
    let degrees: BTreeSet<i32> = c.degrees().union(&m.degrees()).copied().collect();
    for &n in &degrees {
        for p in alo.min(mlo)..=ahi.max(mhi) + 1 {
            let lhs = m.basis().iter().filter(|e| e.degree == n && e.weight >= p).count();
            let rhs: usize = (p..=ahi).map(|q| e1.dim_at(q, n - q)).sum();
            if lhs != rhs {
                return Err(format!("dim F^{p}M^{n} = {lhs} but Σ dim E_1 = {rhs}"));
            }
        }
    }
    let b = m.basis();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if !m.d().get(i, j).is_zero() && b[i].weight <= b[j].weight {
                return Err(format!("d_M({}) has weight-{} component {}", b[j].label, b[i].weight, b[i].label));
            }
        }
    }
    let r = ok(is_filtered_quasi_iso(&t.g, m, c), "quasi-iso check")?;
    if !(r.levelwise_cohomology && r.cone_acyclic && r.graded_cone_acyclic) {
        return Err(format!("g is not a filtered quasi-isomorphism: {r:?}"));
    }
    Ok(())
}

fn structural_suite() -> Outcome {
    let mut f = Failures::default();
    let fixtures = fixture_algebras()?;
    let random = random_algebras(4, 50);
    for (name, a) in fixtures
        .iter()
        .map(|(n, a)| (n.clone(), a))
        .chain(random.iter().enumerate().map(|(i, a)| (format!("random-{i}"), a)))
    {
        if let Err(e) = structural_check(a) {
            f.expect(false, || format!("{name}: {e}"));
        }
    }
    f.finish(format!("{} fixtures and {} random presentations", fixtures.len(), random.len()))
}

fn identity_failure(name: &str, what: &str, report: &fainf_core::ainfinity::IdentityReport) -> String {
    format!("{name} {what}: {}", report.summary())
}

fn check_structure(
    f: &mut Failures,
    count: &mut usize,
    name: &str,
    s: &AInfinityStructure,
    morphisms: &[(&str, &AInfinityMorphism)],
) {
    let r = check_stasheff(s);
    f.expect(r.is_ok() && r.checked_up_to >= 8, || identity_failure(name, "Stasheff", &r));
    *count += 1;
    for (what, m) in morphisms {
        let r = check_morphism(m);
        f.expect(r.is_ok() && r.checked_up_to >= 8, || identity_failure(name, what, &r));
        *count += 1;
    }
}

/// Single sign flips `ν_k(t) ↦ −ν_k(t)` for `k ∈ {2, 3}`, on tuples without
/// the unit whose value `v` has `ν₂(v, u) ≠ 0` for a non-unit `u` outside `t`.
/// The flip then changes the arity-`(k+1)` identity on `(t, u)` by `2ν₂(v, u)`.
fn sign_mutants(s: &AInfinityStructure, take: usize) -> Vec<(String, AInfinityStructure)> {
    let n = s.dim();
    let units: BTreeSet<usize> = (0..n).filter(|&k| s.basis[k].degree == 0).collect();
    let Some(nu2) = s.op(2) else { return Vec::new() };
    let mut candidates = Vec::new();
    for k in [2, 3] {
        let Some(op) = s.op(k) else { continue };
        for (t, v) in op.entries() {
            if v.is_empty() || t.iter().any(|i| units.contains(i)) {
                continue;
            }
            let witness =
                (0..n).any(|u| !units.contains(&u) && !t.contains(&u) && !nu2.eval(&[v.clone(), unit(u)]).is_empty());
            if witness {
                candidates.push((k, t.clone(), v.clone()));
            }
        }
    }
    let picks: BTreeSet<usize> =
        (0..take.min(candidates.len())).map(|i| i * candidates.len() / take.min(candidates.len())).collect();
    picks
        .into_iter()
        .map(|i| {
            let (k, t, v) = &candidates[i];
            let mut m = s.clone();
            m.ops.get_mut(k).expect("op present").insert(t.clone(), scaled(v, &-Scalar::one()));
            let labels: Vec<&str> = t.iter().map(|&j| s.basis[j].label.as_str()).collect();
            (format!("ν_{k}({})", labels.join(",")), m)
        })
        .collect()
}

fn identity_suite() -> Outcome {
    let mut f = Failures::default();
    let mut checked = 0;
    for name in fixture_names() {
        let fx = ok(fixture(name), name)?;
        for kind in fx.transfer_kinds() {
            let t = ok(fx.transfer(kind), kind)?;
            let r = ok(transfer_ainfinity(&t.diagram, &t.algebra, opts(8)), kind)?;
            check_structure(&mut f, &mut checked, &format!("{name} {kind}"), &r.structure, &[("𝓕", &r.f), ("𝒢", &r.g)]);
        }
        let a = ok(fx.algebra(), name)?;
        let degeneration = spectral_sequence(a.complex(), 1).degeneration.unwrap_or(1);
        for r in 0..=degeneration {
            let m = ok(er_minimal_model(&a, r, opts(8)), name)?;
            check_structure(
                &mut f,
                &mut checked,
                &format!("{name} E_{r}-minimal"),
                &m.structure,
                &[("morphism", &m.morphism)],
            );
        }
        for r in 0..degeneration {
            let p = ok(bigraded_transfer_on_page(&a, r, opts(8)), name)?;
            let res = &p.result;
            check_structure(
                &mut f,
                &mut checked,
                &format!("{name} page {r}"),
                &res.structure,
                &[("𝓕", &res.f), ("𝒢", &res.g)],
            );
        }
    }
    for name in hodge_fixture_names() {
        let m = ok(MixedHodgeDGA::from_presentation(&ok(hodge_fixture(name), name)?), name)?;
        let t = ok(hodge_transfer(&m, opts(8)), name)?;
        check_structure(
            &mut f,
            &mut checked,
            &format!("{name} Deligne-split"),
            t.structure(),
            &[("𝓕", &t.result.f), ("𝒢", &t.result.g)],
        );
        let fm = ok(filtered_minimal_model(&m.algebra, opts(8)), name)?;
        check_structure(
            &mut f,
            &mut checked,
            &format!("{name} filtered model"),
            &fm.structure,
            &[("morphism", &fm.morphism)],
        );
    }
    for (i, a) in random_algebras(5, 10).iter().enumerate() {
        let m = ok(filtered_minimal_model(a, opts(8)), "random")?;
        check_structure(&mut f, &mut checked, &format!("random-{i}"), &m.structure, &[("morphism", &m.morphism)]);
    }

    let sources = [
        ("exemplet", "filtered"),
        ("kodaira-thurston", "dolbeault"),
        ("kodaira-thurston", "hodge-de-rham"),
        ("iwasawa", "hodge-de-rham"),
    ];
    let mut mutants = Vec::new();
    for (name, kind) in sources {
        let s = fixture_structure(name, kind, 4)?;
        mutants.extend(sign_mutants(&s, 5).into_iter().map(|(what, m)| (format!("{name} {kind} {what}"), m)));
    }
    f.expect(mutants.len() == 20, || format!("only {} mutants could be drawn", mutants.len()));
    let mut rejected = 0;
    for (what, m) in &mutants {
        let caught = !check_stasheff(m).is_ok();
        rejected += usize::from(caught);
        f.expect(caught, || format!("mutant {what} passes the Stasheff check"));
    }
    f.finish(format!("{checked} identity checks up to arity 8; {rejected} of {} sign mutants rejected", mutants.len()))
}

fn same_structure(x: &AInfinityStructure, y: &AInfinityStructure, cap: usize) -> Result<(), String> {
    for k in 1..=cap {
        let get = |s: &AInfinityStructure| -> BTreeMap<Vec<usize>, String> {
            let op = if k == 1 { Some(&s.d) } else { s.op(k) };
            op.map(|m| {
                m.entries()
                    .iter()
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(t, v)| (t.clone(), s.render_vector(v)))
                    .collect()
            })
            .unwrap_or_default()
        };
        let (a, b) = (get(x), get(y));
        if a != b {
            let t = a.keys().chain(b.keys()).find(|t| a.get(*t) != b.get(*t)).expect("maps differ");
            let labels: Vec<&str> = t.iter().map(|&i| x.basis[i].label.as_str()).collect();
            return Err(format!("ν_{k}({}) = {:?} vs {:?}", labels.join(","), a.get(t), b.get(t)));
        }
    }
    Ok(())
}

fn cross_validation() -> Outcome {
    let mut f = Failures::default();
    let mut cases: Vec<(String, TransferDiagram, FilteredDGA, bool)> = Vec::new();
    for name in fixture_names() {
        let fx = ok(fixture(name), name)?;
        for kind in fx.transfer_kinds() {
            let t = ok(fx.transfer(kind), kind)?;
            cases.push((format!("{name} {kind}"), t.diagram, t.algebra, true));
        }
    }
    for name in hodge_fixture_names() {
        let m = ok(MixedHodgeDGA::from_presentation(&ok(hodge_fixture(name), name)?), name)?;
        let split = ok(
            split_transfer(&MixedHodgeComplex { complex: m.algebra.complex().clone(), hodge: m.hodge.clone() }),
            name,
        )?;
        cases.push((format!("{name} Deligne-split"), split.diagram, m.algebra, false));
    }
    for (i, a) in random_algebras(6, 25).into_iter().enumerate() {
        let diagram = ok(filtered_transfer(a.complex()), "filtered_transfer")?;
        cases.push((format!("random-{i}"), diagram, a, true));
    }
    for (name, diagram, algebra, filtered) in &cases {
        let o = TransferOptions { filtered: *filtered, ..opts(6) };
        let direct = ok(transfer_ainfinity(diagram, algebra, o), name)?.structure;
        let tree = ok(tree_transfer(diagram, &AInfinityStructure::from_dga(algebra, 6), o), name)?;
        if let Err(e) = same_structure(&direct, &tree, 6) {
            f.expect(false, || format!("{name}: {e}"));
        }
    }
    f.finish(format!("{} diagrams agree up to arity 6", cases.len()))
}

fn decalage_shift() -> Outcome {
    let mut f = Failures::default();
    let mut compared = 0;
    for (name, a) in fixture_algebras()? {
        let c = a.complex();
        let dec = ok(decalage(c), &name)?.complex;
        let ssf = spectral_sequence(c, 3);
        let ssd = spectral_sequence(&dec, 2);
        for s in 1..=2 {
            let (pd, pf) = (ssd.page(s).ok_or("missing page")?, ssf.page(s + 1).ok_or("missing page")?);
            // E_s^{p,n−p}(Dec) against E_{s+1}^{p+n,−p}(F), from both sides.
            let mut keys: BTreeSet<(i32, i32)> = pd.dims().keys().map(|&(p, q)| (p, p + q)).collect();
            keys.extend(pf.dims().keys().map(|&(pp, qq)| (-qq, pp + qq)));
            for (p, n) in keys {
                let (x, y) = (pd.dim_at(p, n - p), pf.dim_at(p + n, -p));
                f.expect(x == y, || {
                    format!("{name}: E_{s}^{{{p},{}}}(Dec) = {x}, E_{}^{{{},{}}} = {y}", n - p, s + 1, p + n, -p)
                });
                compared += 1;
            }
        }
    }
    f.finish(format!("{compared} bidegrees compared for s = 1, 2"))
}

fn strictness_vs_degeneration() -> Outcome {
    let mut f = Failures::default();
    let (mut strict, mut non_strict) = (0, 0);
    for (i, a) in random_algebras(8, 50).iter().enumerate() {
        let is_strict = a.complex().is_strict();
        let degeneration = spectral_sequence(a.complex(), 1).degeneration;
        if is_strict {
            strict += 1;
        } else {
            non_strict += 1;
        }
        f.expect(is_strict == (degeneration == Some(1)), || {
            format!("random-{i}: strict = {is_strict}, degenerates at {degeneration:?}")
        });
    }
    f.finish(format!("{strict} strict and {non_strict} non-strict presentations"))
}

fn span_of(s: &DeligneSplitting, n: usize, keep: impl Fn(i32, i32) -> bool) -> Subspace {
    s.blocks.iter().filter(|(&(p, q), _)| keep(p, q)).fold(Subspace::zero(n), |acc, (_, b)| acc.sum(b))
}

/// `W_m = ⊕_{p+q≤m} I^{p,q}` and `F^k = ⊕_{p≥k} I^{p,q}`, with the blocks independent.
fn sum_identities(m: &MixedHodgeStructure, s: &DeligneSplitting) -> Result<(), String> {
    let n = m.dim();
    let total: usize = s.blocks.values().map(Subspace::dim).sum();
    if total != n || span_of(s, n, |_, _| true).dim() != n {
        return Err("blocks are not a direct sum decomposition".into());
    }
    let (wlo, whi) = m.weight_range();
    for w in wlo - 1..=whi + 1 {
        if span_of(s, n, |p, q| p + q <= w) != m.w_space(w) {
            return Err(format!("W_{w} ≠ ⊕ I^(p,q)"));
        }
    }
    let (lo, hi) = m.hodge_range();
    for k in lo - 1..=hi + 1 {
        if span_of(s, n, |p, _| p >= k) != m.f_space(k) {
            return Err(format!("F^{k} ≠ ⊕ I^(p,q)"));
        }
    }
    Ok(())
}

/// All splittings of a rank-2 structure into lines (or one plane) drawn from
/// a candidate set, filtered by the defining properties of the Deligne splitting.
fn brute_force_rank2(m: &MixedHodgeStructure) -> Vec<BTreeMap<(i32, i32), Subspace>> {
    let types: Vec<(i32, i32)> =
        m.hodge_numbers().into_iter().flat_map(|(t, d)| std::iter::repeat(t).take(d)).collect();
    if types.len() == 2 && types[0] == types[1] {
        return vec![BTreeMap::from([(types[0], Subspace::full(2))])];
    }
    let (lo, hi) = m.hodge_range();
    let (wlo, whi) = m.weight_range();
    let mut spaces = Vec::new();
    for k in lo..=hi {
        spaces.push(m.f_space(k));
        spaces.push(m.fbar_space(k));
    }
    for w in wlo..=whi {
        spaces.push(m.w_space(w));
    }
    let mut lines: Vec<Subspace> = Vec::new();
    let add = |s: Subspace, lines: &mut Vec<Subspace>| {
        if s.dim() == 1 && !lines.contains(&s) {
            lines.push(s);
        }
    };
    for x in &spaces {
        for y in &spaces {
            add(x.intersect(y), &mut lines);
        }
    }
    for re in -2..=2 {
        for im in -2..=2 {
            let t = Scalar::new(Rational::from_int(re), Rational::from_int(im));
            add(Subspace::span(2, &[vec![Scalar::one(), t]]), &mut lines);
        }
    }
    add(Subspace::span(2, &[vec![Scalar::zero(), Scalar::one()]]), &mut lines);

    let mut out = Vec::new();
    for x in &lines {
        for y in &lines {
            if x == y {
                continue;
            }
            let blocks = BTreeMap::from([(types[0], x.clone()), (types[1], y.clone())]);
            let s = DeligneSplitting { blocks: blocks.clone() };
            let conj_ok = blocks.iter().all(|(&(p, q), b)| {
                let low = m.w_space(p + q - 2);
                let partner = blocks.get(&(q, p)).cloned().unwrap_or_else(|| Subspace::zero(2));
                m.bar(b).sum(&low) == partner.sum(&low)
            });
            if conj_ok && sum_identities(m, &s).is_ok() {
                out.push(blocks);
            }
        }
    }
    out
}

fn block_diagonal(name: &str, m: &Matrix, rows: &[(i32, i32)], cols: &[(i32, i32)]) -> Result<(), String> {
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            if r != c && !m.get(i, j).is_zero() {
                return Err(format!("{name} has an entry from I^{c:?} to I^{r:?}"));
            }
        }
    }
    Ok(())
}

fn hodge_suite() -> Outcome {
    let mut f = Failures::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut random, mut rank2) = (0, 0);
    while random < 20 || rank2 < 10 {
        let m = random_mhs(&mut rng, 3);
        if m.dim() > 4 {
            continue;
        }
        let s = match deligne_splitting(&m) {
            Ok(s) => s,
            Err(e) => {
                f.expect(false, || format!("deligne_splitting: {e}"));
                break;
            }
        };
        if random < 20 {
            random += 1;
            f.expect(sum_identities(&m, &s).is_ok() && s.check(&m).is_ok(), || {
                format!("splitting of {:?}: {:?}", m.weights, sum_identities(&m, &s))
            });
        }
        if m.dim() == 2 && rank2 < 10 {
            rank2 += 1;
            let found = brute_force_rank2(&m);
            let nonzero: BTreeMap<_, _> =
                s.blocks.iter().filter(|(_, b)| !b.is_zero()).map(|(k, b)| (*k, b.clone())).collect();
            f.expect(found.len() == 1 && found[0] == nonzero, || {
                format!("rank 2: brute force found {} splittings", found.len())
            });
        }
    }

    for name in hodge_fixture_names() {
        let m = ok(MixedHodgeDGA::from_presentation(&ok(hodge_fixture(name), name)?), name)?;
        let c = MixedHodgeComplex { complex: m.algebra.complex().clone(), hodge: m.hodge.clone() };
        let t = ok(split_transfer(&c), name)?;
        f.expect(t.commutes_with_projectors(), || format!("{name}: maps do not commute with the W and F projectors"));
        let inv = t.adapted.inverse().ok_or("adapted basis is singular")?;
        let (src, tgt) = (&t.source_bidegrees, &t.target_bidegrees);
        let d = inv.mul(c.complex.d()).mul(&t.adapted);
        for r in [
            block_diagonal("f", &t.diagram.f.mul(&t.adapted), tgt, src),
            block_diagonal("g", &inv.mul(&t.diagram.g), src, tgt),
            block_diagonal("h", &inv.mul(&t.diagram.h).mul(&t.adapted), src, src),
            block_diagonal("d", &d, src, src),
        ] {
            if let Err(e) = r {
                f.expect(false, || format!("{name}: {e}"));
            }
        }
    }

    let torus = ok(MixedHodgeDGA::from_presentation(&ok(hodge_fixture("torus"), "torus")?), "torus")?;
    let alpha = ok(Rational::new(1, 1), "α")?;
    let r = ok(purity_formality_check(&torus, alpha, opts(6)), "purity")?;
    f.expect(r.is_pure() && r.higher_vanish == Some(true), || {
        format!("torus: impure {:?}, ν_≥3 vanish {:?}", r.impure, r.higher_vanish)
    });
    let violations = r.strictness.as_ref().map(|s| s.bidegree_violations.len());
    f.expect(violations == Some(0), || format!("torus: ν₂ bidegree violations {violations:?}"));
    f.finish(format!(
        "{random} random splittings, {rank2} rank-2 brute-force matches, block-diagonal transfers, torus ν_≥3 = 0"
    ))
}

fn cli_determinism() -> Outcome {
    let mut runs: Vec<Vec<String>> = Vec::new();
    let all: Vec<&str> = fixture_names().iter().chain(hodge_fixture_names()).copied().collect();
    for name in &all {
        runs.push(vec!["pages".into(), "--fixture".into(), name.to_string()]);
        runs.push(vec!["check".into(), "--fixture".into(), name.to_string()]);
        runs.push(vec!["model".into(), "--fixture".into(), name.to_string(), "--kind".into(), "er-minimal".into()]);
    }
    for (name, kind) in [
        ("kodaira-thurston", "dolbeault"),
        ("kodaira-thurston", "hodge-de-rham"),
        ("iwasawa", "page:1"),
        ("iwasawa", "hodge-de-rham:2"),
    ] {
        runs.push(["model", "--fixture", name, "--kind", kind, "--arity", "3"].map(String::from).to_vec());
    }
    runs.push(
        ["compare", "--fixture", "kodaira-thurston", "--kind", "dolbeault", "--kind", "hodge-de-rham"]
            .map(String::from)
            .to_vec(),
    );
    runs.push(
        [
            "compare",
            "--fixture",
            "iwasawa",
            "--kind",
            "hodge-de-rham:2",
            "--kind",
            "page:1",
            "--kind",
            "er-minimal:2",
            "--arity",
            "3",
        ]
        .map(String::from)
        .to_vec(),
    );
    runs.push(["fixtures", "list"].map(String::from).to_vec());
    let mut f = Failures::default();
    for args in &runs {
        let argv = || {
            std::iter::once("fainf".to_string())
                .chain(args.iter().cloned())
                .chain(["--emit".to_string(), "json".to_string()])
        };
        let (x, y) = (fainf_cli::run(argv()), fainf_cli::run(argv()));
        f.expect(x.code == 0, || format!("{} exits {}: {}", args.join(" "), x.code, x.stderr.trim()));
        f.expect(serde_json::from_str::<serde_json::Value>(&x.stdout).is_ok(), || {
            format!("{}: output is not JSON", args.join(" "))
        });
        f.expect(x.stdout == y.stdout, || format!("{}: output differs between runs", args.join(" ")));
    }
    f.finish(format!("{} commands, byte-identical JSON", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exemplet regression", exemplet),
        ("Kodaira-Thurston regression", kodaira_thurston),
        ("Iwasawa regression", iwasawa),
        ("filtered transfer structure", structural_suite),
        ("A∞ identities and sign mutants", identity_suite),
        ("tree transfer against kernel transfer", cross_validation),
        ("décalage page shift", decalage_shift),
        ("strictness against degeneration", strictness_vs_degeneration),
        ("Hodge suite", hodge_suite),
        ("CLI determinism", cli_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
