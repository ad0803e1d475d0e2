//! JSON (sorted keys, canonical scalars) and fixed-width tables.

use fainf_core::ainfinity::AInfinityStructure;
use fainf_core::complexes::BasisElement;
use fainf_core::sparse::SparseVec;
use serde_json::{json, Map, Value};

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Columns separated by two spaces; the first `left` columns are left-aligned,
/// the rest right-aligned.
pub fn aligned(rows: &[Vec<String>], left: usize) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> =
        (0..cols).map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let pad = " ".repeat(width[j] - c.chars().count());
                if j < left {
                    format!("{c}{pad}")
                } else {
                    format!("{pad}{c}")
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn tuple_key(labels: &[&str]) -> String {
    format!("[{}]", labels.join(","))
}

pub fn bidegree(e: &BasisElement) -> (i32, i32) {
    (e.weight, e.degree - e.weight)
}

pub fn vector_json(basis: &[BasisElement], v: &SparseVec) -> Value {
    let mut m = Map::new();
    for (&k, c) in v {
        m.insert(basis[k].label.clone(), Value::String(c.render()));
    }
    Value::Object(m)
}

pub fn basis_json(basis: &[BasisElement]) -> Value {
    Value::Array(
        basis
            .iter()
            .map(|e| {
                let (p, q) = bidegree(e);
                json!({ "label": e.label, "degree": e.degree, "weight": e.weight, "bidegree": [p, q] })
            })
            .collect(),
    )
}

/// `{basis, d, ops}` with tuples of labels as keys.
pub fn structure_json(s: &AInfinityStructure) -> Value {
    let mut d = Map::new();
    for (t, v) in s.d.entries() {
        if !v.is_empty() {
            d.insert(s.basis[t[0]].label.clone(), vector_json(&s.basis, v));
        }
    }
    let mut ops = Map::new();
    for (k, m) in &s.ops {
        let mut entries = Map::new();
        for (t, v) in m.entries() {
            if v.is_empty() {
                continue;
            }
            let labels: Vec<&str> = t.iter().map(|&i| s.basis[i].label.as_str()).collect();
            entries.insert(tuple_key(&labels), vector_json(&s.basis, v));
        }
        if !entries.is_empty() {
            ops.insert(k.to_string(), Value::Object(entries));
        }
    }
    json!({ "basis": basis_json(&s.basis), "d": d, "ops": ops })
}

pub fn structure_table(s: &AInfinityStructure) -> String {
    let mut out = String::from("basis\n");
    let mut rows = vec![vec!["label".to_string(), "degree".into(), "(p,q)".into()]];
    for e in &s.basis {
        let (p, q) = bidegree(e);
        rows.push(vec![e.label.clone(), e.degree.to_string(), format!("({p},{q})")]);
    }
    out.push_str(&aligned(&rows, 1));
    let d_rows: Vec<Vec<String>> =
        s.d.entries()
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(t, v)| vec![s.basis[t[0]].label.clone(), s.render_vector(v)])
            .collect();
    if !d_rows.is_empty() {
        out.push_str("\nd\n");
        out.push_str(&aligned(&d_rows, 2));
    }
    for (k, m) in &s.ops {
        let mut rows = vec![vec![format!("ν_{k}(-)"), "value".into(), "inputs (p,q)".into()]];
        for (t, v) in m.entries() {
            if v.is_empty() {
                continue;
            }
            let labels: Vec<&str> = t.iter().map(|&i| s.basis[i].label.as_str()).collect();
            let (p, q) = t.iter().fold((0, 0), |(p, q), &i| {
                let (a, b) = bidegree(&s.basis[i]);
                (p + a, q + b)
            });
            rows.push(vec![labels.join(", "), s.render_vector(v), format!("({p},{q})")]);
        }
        if rows.len() > 1 {
            out.push('\n');
            out.push_str(&aligned(&rows, 1));
        }
    }
    out
}
