use std::collections::{BTreeMap, BTreeSet};

use fainf_core::ainfinity::{
    check_er_windows, check_filtered_morphism, check_filtered_structure, check_morphism, check_stasheff,
    er_minimal_model, transfer_ainfinity, AInfinityStructure, TransferOptions,
};
use fainf_core::complexes::{spectral_sequence, Page};
use fainf_core::hodge::{check_strictness, hodge_transfer, purity_formality_check, MixedHodgeDGA};
use fainf_core::presentations::{
    expand, fixture, fixture_names, hodge_fixture, hodge_fixture_names, render_polynomial, FilteredDGA,
};
use fainf_core::sparse::SparseVec;
use fainf_core::{Error, Rational};
use serde_json::{json, Map, Value};

use crate::load::{build_structure, load, Loaded, ModelKind};
use crate::render::{aligned, structure_json, structure_table, to_json, tuple_key, vector_json};
use crate::{CliError, CommandName, Emit, RunConfig};

pub struct Report {
    pub code: i32,
    pub text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { code: 0, text }
    }
}

pub fn dispatch(config: &RunConfig) -> Result<Report, CliError> {
    let loaded = config.source.as_ref().map(load).transpose()?;
    match config.command {
        CommandName::Pages => pages(config, loaded.as_ref().expect("source")),
        CommandName::Model => model(config, loaded.as_ref().expect("source")),
        CommandName::Check => Ok(check(config, loaded.as_ref().expect("source"))),
        CommandName::Compare => compare(config, loaded.as_ref().expect("source")),
        CommandName::FixturesList => fixtures_list(config),
    }
}

fn pages(config: &RunConfig, loaded: &Loaded) -> Result<Report, CliError> {
    let a = expand(&loaded.presentation)?;
    let probe = spectral_sequence(a.complex(), 1);
    let degeneration = probe.degeneration.unwrap_or(1);
    let r_max = config.max_page.unwrap_or(degeneration);
    let ss = spectral_sequence(a.complex(), r_max);
    let first = r_max.min(1);
    let shown: Vec<&Page> = ss.pages.iter().skip(first).collect();
    let text = match config.emit {
        Emit::Json => {
            let pages: Vec<Value> = shown.iter().map(|pg| page_json(pg)).collect();
            to_json(&json!({ "source": loaded.name, "degeneration": degeneration, "pages": pages }))
        }
        Emit::Table => {
            let mut out = String::new();
            for pg in &shown {
                out.push_str(&page_table(pg));
                out.push('\n');
            }
            out.push_str(&format!("degenerates at E{degeneration}\n"));
            out
        }
    };
    Ok(Report::ok(text))
}

fn page_json(pg: &Page) -> Value {
    let entries: Vec<Value> = pg
        .entries
        .values()
        .filter(|e| e.dim() > 0)
        .map(|e| json!({ "p": e.p, "q": e.q, "dim": e.dim(), "labels": e.labels }))
        .collect();
    let totals: Map<String, Value> = row_totals(pg).into_iter().map(|(q, t)| (q.to_string(), json!(t))).collect();
    json!({ "r": pg.r, "entries": entries, "row_totals": totals })
}

fn row_totals(pg: &Page) -> BTreeMap<i32, usize> {
    let mut t = BTreeMap::new();
    for (&(_, q), e) in &pg.entries {
        if e.dim() > 0 {
            *t.entry(q).or_insert(0) += e.dim();
        }
    }
    t
}

/// Rows `q` from the top down, columns `p`, as in a first-quadrant picture.
fn page_table(pg: &Page) -> String {
    let nonzero: Vec<(i32, i32)> = pg.entries.iter().filter(|(_, e)| e.dim() > 0).map(|(&k, _)| k).collect();
    let mut out = format!("E_{}\n", pg.r);
    if nonzero.is_empty() {
        out.push_str("0\n");
        return out;
    }
    let (plo, phi) = (nonzero.iter().map(|k| k.0).min().unwrap(), nonzero.iter().map(|k| k.0).max().unwrap());
    let (qlo, qhi) = (nonzero.iter().map(|k| k.1).min().unwrap(), nonzero.iter().map(|k| k.1).max().unwrap());
    let totals = row_totals(pg);
    let mut rows = vec![std::iter::once("q\\p".to_string())
        .chain((plo..=phi).map(|p| p.to_string()))
        .chain(std::iter::once("total".to_string()))
        .collect::<Vec<_>>()];
    for q in (qlo..=qhi).rev() {
        let mut row = vec![q.to_string()];
        row.extend((plo..=phi).map(|p| pg.dim_at(p, q).to_string()));
        row.push(totals.get(&q).copied().unwrap_or(0).to_string());
        rows.push(row);
    }
    out.push_str(&aligned(&rows, 0));
    let mut labels = Vec::new();
    for q in (qlo..=qhi).rev() {
        for p in plo..=phi {
            if let Some(e) = pg.entries.get(&(p, q)).filter(|e| e.dim() > 0) {
                labels.push(vec![format!("E_{}^{{{p},{q}}}", pg.r), e.labels.join(", ")]);
            }
        }
    }
    out.push_str(&aligned(&labels, 2));
    out
}

fn model(config: &RunConfig, loaded: &Loaded) -> Result<Report, CliError> {
    let kind = config.kinds[0];
    let s = build_structure(loaded, kind, config.arity)?;
    let text = match config.emit {
        Emit::Json => {
            let mut v = structure_json(&s);
            let obj = v.as_object_mut().expect("object");
            obj.insert("source".into(), json!(loaded.name));
            obj.insert("kind".into(), json!(kind.name()));
            obj.insert("arity_cap".into(), json!(config.arity));
            to_json(&v)
        }
        Emit::Table => {
            format!("{} model of {}, arity ≤ {}\n\n{}", kind.name(), loaded.name, config.arity, structure_table(&s))
        }
    };
    Ok(Report::ok(text))
}

struct CheckLine {
    name: String,
    passed: bool,
    detail: String,
}

/// Accumulates check lines; an `Invariant` error anywhere sets exit code 3.
#[derive(Default)]
struct Checks {
    lines: Vec<CheckLine>,
    internal: bool,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    /// Records `problems`, passing when it is empty.
    fn problems(&mut self, name: impl Into<String>, problems: &[String], ok: &str) {
        match problems.first() {
            None => self.push(name, true, ok),
            Some(p) => self.push(name, false, format!("{p} ({} in total)", problems.len())),
        }
    }

    fn error(&mut self, name: impl Into<String>, e: Error) {
        self.internal |= matches!(e, Error::Invariant(_));
        self.push(name, false, e.to_string());
    }

    fn code(&self) -> i32 {
        if self.internal {
            3
        } else if self.lines.iter().all(|l| l.passed) {
            0
        } else {
            1
        }
    }
}

fn identities(
    checks: &mut Checks,
    name: &str,
    s: &AInfinityStructure,
    morphisms: &[&fainf_core::ainfinity::AInfinityMorphism],
) {
    let r = check_stasheff(s);
    checks.push(format!("{name}: Stasheff identities"), r.is_ok(), r.summary());
    for (i, f) in morphisms.iter().enumerate() {
        let r = check_morphism(f);
        let label = if morphisms.len() == 1 { "morphism".to_string() } else { format!("morphism {}", i + 1) };
        checks.push(format!("{name}: {label} identities"), r.is_ok(), r.summary());
    }
}

fn check(config: &RunConfig, loaded: &Loaded) -> Report {
    let mut checks = Checks::default();
    let opts = TransferOptions { verify: false, ..TransferOptions::with_cap(config.arity) };
    match expand(&loaded.presentation) {
        Ok(a) => check_algebra(&mut checks, loaded, &a, opts),
        Err(e) => checks.error("presentation", e),
    }
    let code = checks.code();
    let text = match config.emit {
        Emit::Json => {
            let lines: Vec<Value> = checks
                .lines
                .iter()
                .map(|l| json!({ "name": l.name, "passed": l.passed, "detail": l.detail }))
                .collect();
            to_json(&json!({ "source": loaded.name, "passed": code == 0, "checks": lines }))
        }
        Emit::Table => {
            let rows: Vec<Vec<String>> = checks
                .lines
                .iter()
                .map(|l| vec![if l.passed { "PASS" } else { "FAIL" }.to_string(), l.name.clone(), l.detail.clone()])
                .collect();
            let verdict = if code == 0 { "all checks passed" } else { "some checks failed" };
            format!("{}{verdict}\n", aligned(&rows, 3))
        }
    };
    Report { code, text }
}

fn check_algebra(checks: &mut Checks, loaded: &Loaded, a: &FilteredDGA, opts: TransferOptions) {
    checks.push("presentation", true, format!("{} monomials, d² = 0", a.dim()));
    match a.validate() {
        Ok(()) => checks.push("algebra", true, "Leibniz rule, associativity, filtration"),
        Err(e) => return checks.error("algebra", e),
    }
    let ss = spectral_sequence(a.complex(), 1);
    let degeneration = ss.degeneration.unwrap_or(1);
    let strict = a.complex().is_strict();
    checks.push(
        "strictness and E1 degeneration",
        strict == (degeneration == 1),
        format!("d {} strict; degenerates at E{degeneration}", if strict { "is" } else { "is not" }),
    );

    for r in 0..=degeneration {
        let name = if r == 0 { "filtered minimal model".to_string() } else { format!("E{r}-minimal model") };
        match er_minimal_model(a, r, opts) {
            Ok(m) => {
                identities(checks, &name, &m.structure, &[&m.morphism]);
                let mut windows = if r == 0 { check_filtered_structure(&m.structure) } else { vec![] };
                windows.extend(check_er_windows(&m.structure, r));
                windows.extend(check_filtered_morphism(&m.morphism, r));
                checks.problems(format!("{name}: windows"), &windows, "all entries inside their windows");
            }
            Err(e) => checks.error(&name, e),
        }
    }

    if let Some(fx) = &loaded.fixture {
        for kind in fx.transfer_kinds() {
            let name = format!("{kind} transfer");
            match fx.transfer(kind).and_then(|t| transfer_ainfinity(&t.diagram, &t.algebra, opts)) {
                Ok(t) => identities(checks, &name, &t.structure, &[&t.f, &t.g]),
                Err(e) => checks.error(&name, e),
            }
        }
    }

    if loaded.presentation.weights_w.is_some() {
        check_hodge(checks, loaded, opts);
    }
}

fn check_hodge(checks: &mut Checks, loaded: &Loaded, opts: TransferOptions) {
    let m = match MixedHodgeDGA::from_presentation(&loaded.presentation) {
        Ok(m) => m,
        Err(e) => return checks.error("mixed Hodge data", e),
    };
    checks.push("mixed Hodge data", true, "W, F and conjugation are compatible with d and the product");
    let t = match hodge_transfer(&m, opts) {
        Ok(t) => t,
        Err(e) => return checks.error("Deligne-split transfer", e),
    };
    let report = check_strictness(&t);
    let detail = if report.passed() {
        format!("{} tuples, ν_s strict for W and F", report.checked_tuples)
    } else if let Some(v) = report.bidegree_violations.first() {
        v.clone()
    } else {
        let (s, m, k) = report.strictness_failures[0];
        format!("ν_{s} not strict at W_{m}, F^{k}")
    };
    checks.push("Deligne-split transfer: strictness", report.passed(), detail);

    // α from the lowest positive degree with cohomology; purity is then checked in every degree.
    let s = t.structure();
    let alpha = (0..s.dim())
        .filter(|&k| s.basis[k].degree > 0)
        .min_by_key(|&k| s.basis[k].degree)
        .and_then(|k| {
            let (p, q) = t.bidegree(k);
            Rational::new((p + q) as i64, s.basis[k].degree as i64).ok()
        })
        .filter(|a| !a.is_zero());
    let Some(alpha) = alpha else {
        return checks.push("purity", true, "no cohomology in positive degrees");
    };
    match purity_formality_check(&m, alpha.clone(), opts) {
        Ok(r) if !r.is_pure() => {
            let (n, w) = r.impure[0];
            checks.push("purity", true, format!("not {alpha}-pure: degree {n} has weight {w}; skipped"))
        }
        Ok(r) => {
            let verdict = if r.higher_vanish == Some(true) { "ν_{≥3}=0: verified" } else { "ν_{≥3}=0: FAILED" };
            checks.push(format!("purity (α = {alpha})"), r.passed(), verdict)
        }
        Err(e) => checks.error("purity", e),
    }
}

/// Values of every nonzero operation, keyed by arity and input labels and
/// expressed in the first structure's basis.
type OpTable = BTreeMap<(usize, Vec<String>), SparseVec>;

fn op_table(s: &AInfinityStructure, reference: &AInfinityStructure) -> OpTable {
    let position: BTreeMap<&str, usize> =
        reference.basis.iter().enumerate().map(|(i, e)| (e.label.as_str(), i)).collect();
    let mut out = OpTable::new();
    let mut add = |k: usize, t: &[usize], v: &SparseVec| {
        if v.is_empty() {
            return;
        }
        let labels = t.iter().map(|&i| s.basis[i].label.clone()).collect();
        let moved = v.iter().map(|(&j, c)| (position[s.basis[j].label.as_str()], c.clone())).collect();
        out.insert((k, labels), moved);
    };
    for (t, v) in s.d.entries() {
        add(1, t, v);
    }
    for (&k, m) in &s.ops {
        for (t, v) in m.entries() {
            add(k, t, v);
        }
    }
    out
}

fn compare(config: &RunConfig, loaded: &Loaded) -> Result<Report, CliError> {
    let structures: Vec<(ModelKind, AInfinityStructure)> = config
        .kinds
        .iter()
        .map(|&k| build_structure(loaded, k, config.arity).map(|s| (k, s)))
        .collect::<Result<_, _>>()?;
    let reference = &structures[0].1;
    let signature = |s: &AInfinityStructure| -> BTreeSet<(String, i32)> {
        s.basis.iter().map(|e| (e.label.clone(), e.degree)).collect()
    };
    for (k, s) in &structures[1..] {
        if signature(s) != signature(reference) || s.dim() != reference.dim() {
            return Err(CliError::Validation(format!(
                "comparison error: {} and {} are not on the same labeled basis",
                structures[0].0.name(),
                k.name()
            )));
        }
    }
    let tables: Vec<OpTable> = structures.iter().map(|(_, s)| op_table(s, reference)).collect();
    let keys: BTreeSet<&(usize, Vec<String>)> = tables.iter().flat_map(|t| t.keys()).collect();
    let empty = SparseVec::new();
    let mut diff: Vec<(&(usize, Vec<String>), Vec<&SparseVec>)> = Vec::new();
    for key in keys {
        let values: Vec<&SparseVec> = tables.iter().map(|t| t.get(key).unwrap_or(&empty)).collect();
        if values.iter().any(|v| *v != values[0]) {
            diff.push((key, values));
        }
    }
    let products_coincide = !diff.iter().any(|(k, _)| k.0 == 2);
    let names: Vec<String> = structures.iter().map(|(k, _)| k.name()).collect();
    let text = match config.emit {
        Emit::Json => {
            let mut by_arity: BTreeMap<String, Map<String, Value>> = BTreeMap::new();
            for ((k, labels), values) in &diff {
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                let row: Vec<Value> = values.iter().map(|v| vector_json(&reference.basis, v)).collect();
                by_arity.entry(k.to_string()).or_default().insert(tuple_key(&refs), Value::Array(row));
            }
            to_json(&json!({
                "source": loaded.name,
                "structures": names,
                "products_coincide": products_coincide,
                "diff": by_arity,
            }))
        }
        Emit::Table => {
            let mut out = String::new();
            for arity in diff.iter().map(|(k, _)| k.0).collect::<BTreeSet<_>>() {
                let mut rows = vec![std::iter::once(format!("ν_{arity}(-)")).chain(names.iter().cloned()).collect()];
                for ((_, labels), values) in diff.iter().filter(|(k, _)| k.0 == arity) {
                    let mut row = vec![labels.join(", ")];
                    row.extend(values.iter().map(|v| reference.render_vector(v)));
                    rows.push(row);
                }
                out.push_str(&aligned(&rows, 1));
                out.push('\n');
            }
            if diff.is_empty() {
                out.push_str("no differences\n");
            }
            if products_coincide {
                out.push_str("products ν₂ coincide\n");
            }
            out
        }
    };
    Ok(Report::ok(text))
}

/// `Λ(x, y, …)` followed by the nonzero differentials of generators.
fn describe(p: &fainf_core::presentations::Presentation) -> String {
    let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
    let mut out = format!("Λ({})", names.join(", "));
    for g in &p.generators {
        if let Some(d) = p.differentials.get(&g.name).filter(|d| !d.is_empty()) {
            out.push_str(&format!(", d{} = {}", g.name, render_polynomial(d, &names)));
        }
    }
    out
}

fn fixtures_list(config: &RunConfig) -> Result<Report, CliError> {
    let mut items = Vec::new();
    for name in fixture_names() {
        let fx = fixture(name)?;
        items.push((
            name.to_string(),
            "filtered",
            fx.presentation.generators.len(),
            fx.transfer_kinds().join(", "),
            fx.description.to_string(),
        ));
    }
    for name in hodge_fixture_names() {
        let p = hodge_fixture(name)?;
        items.push((name.to_string(), "mixed Hodge", p.generators.len(), String::new(), describe(&p)));
    }
    let text = match config.emit {
        Emit::Json => {
            let list: Vec<Value> = items
                .iter()
                .map(|(n, k, g, t, d)| {
                    json!({ "name": n, "kind": k, "generators": g, "transfers": t.split(", ").filter(|s| !s.is_empty()).collect::<Vec<_>>(), "description": d })
                })
                .collect();
            to_json(&Value::Array(list))
        }
        Emit::Table => {
            let mut rows =
                vec![vec!["name".into(), "kind".into(), "generators".into(), "transfers".into(), "description".into()]];
            rows.extend(items.into_iter().map(|(n, k, g, t, d)| vec![n, k.to_string(), g.to_string(), t, d]));
            aligned(&rows, 5)
        }
    };
    Ok(Report::ok(text))
}
