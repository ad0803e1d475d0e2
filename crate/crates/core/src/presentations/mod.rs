//! Free graded-commutative filtered dg-algebras on odd generators.

mod dga;
mod expr;
pub mod fixtures;

pub use dga::FilteredDGA;
pub use expr::{parse_expression, render_polynomial, Polynomial};
pub use fixtures::{fixture, fixture_names, hodge_fixture, hodge_fixture_names, Fixture, FixtureTransfer};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{BasisElement, FilteredComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{FieldTag, Scalar};
use crate::sparse::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub weight: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub field: FieldTag,
    pub generators: Vec<Generator>,
    /// Generator name to its differential; generators without an entry are closed.
    pub differentials: BTreeMap<String, Polynomial>,
    /// Weight-filtration index per generator, for mixed Hodge inputs.
    pub weights_w: Option<BTreeMap<String, i32>>,
    /// Pairs of generators exchanged by complex conjugation.
    pub conjugation: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: i32,
    weight: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    name: String,
    field: FieldTag,
    generators: Vec<RawGenerator>,
    #[serde(default)]
    differentials: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights_w: Option<BTreeMap<String, i32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    conjugation: Vec<(String, String)>,
}

fn presentation_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Presentation { location: location.into(), message: message.into() }
}

/// Parses and validates a presentation document.
pub fn parse_presentation(document: &[u8]) -> Result<Presentation> {
    let raw: RawPresentation = serde_json::from_slice(document)
        .map_err(|e| presentation_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let mut generators = Vec::with_capacity(raw.generators.len());
    for (k, g) in raw.generators.iter().enumerate() {
        let loc = format!("generators[{k}]");
        if g.degree <= 0 || g.degree % 2 == 0 {
            return Err(presentation_error(
                loc,
                format!("generator `{}` has degree {}; only odd positive degrees are supported", g.name, g.degree),
            ));
        }
        if !is_identifier(&g.name) || g.name == "i" {
            return Err(presentation_error(loc, format!("`{}` is not a valid generator name", g.name)));
        }
        if generators.iter().any(|x: &Generator| x.name == g.name) {
            return Err(presentation_error(loc, format!("duplicate generator `{}`", g.name)));
        }
        generators.push(Generator { name: g.name.clone(), degree: g.degree, weight: g.weight });
    }
    let names: Vec<&str> = generators.iter().map(|g| g.name.as_str()).collect();
    let mut differentials = BTreeMap::new();
    for (gen, text) in &raw.differentials {
        let loc = format!("differentials.{gen}");
        if !names.contains(&gen.as_str()) {
            return Err(presentation_error(loc, format!("differential given for undeclared generator `{gen}`")));
        }
        let poly = parse_expression(text, &names, raw.field)
            .map_err(|(offset, msg)| presentation_error(format!("{loc} at offset {offset}"), msg))?;
        differentials.insert(gen.clone(), poly);
    }
    let conjugation = raw.conjugation.clone();
    for (x, y) in &conjugation {
        for n in [x, y] {
            if !names.contains(&n.as_str()) {
                return Err(presentation_error("conjugation", format!("unknown generator `{n}`")));
            }
        }
    }
    if let Some(w) = &raw.weights_w {
        for n in w.keys() {
            if !names.contains(&n.as_str()) {
                return Err(presentation_error("weights_w", format!("unknown generator `{n}`")));
            }
        }
    }
    let p = Presentation {
        name: raw.name,
        field: raw.field,
        generators,
        differentials,
        weights_w: raw.weights_w,
        conjugation,
    };
    p.check_degrees_and_weights()?;
    Ok(p)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Presentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn check_degrees_and_weights(&self) -> Result<()> {
        for (gen, poly) in &self.differentials {
            let g = &self.generators[self.generator_index(gen).expect("validated")];
            for mono in poly.keys() {
                let deg: i32 = mono.iter().map(|&k| self.generators[k].degree).sum();
                let wt: i32 = mono.iter().map(|&k| self.generators[k].weight).sum();
                let label = self.monomial_label(mono);
                if deg != g.degree + 1 {
                    return Err(presentation_error(
                        format!("differentials.{gen}"),
                        format!("term {label} has degree {deg}, expected {}", g.degree + 1),
                    ));
                }
                if wt < g.weight {
                    return Err(presentation_error(
                        format!("differentials.{gen}"),
                        format!("term {label} has weight {wt} below the weight {} of {gen}", g.weight),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn monomial_label(&self, mono: &[usize]) -> String {
        if mono.is_empty() {
            "1".to_string()
        } else {
            mono.iter().map(|&k| self.generators[k].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    /// The presentation as a JSON document (sorted keys, canonical expressions).
    pub fn render(&self) -> String {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let raw = RawPresentation {
            name: self.name.clone(),
            field: self.field,
            generators: self
                .generators
                .iter()
                .map(|g| RawGenerator { name: g.name.clone(), degree: g.degree, weight: g.weight })
                .collect(),
            differentials: self.differentials.iter().map(|(k, v)| (k.clone(), render_polynomial(v, &names))).collect(),
            weights_w: self.weights_w.clone(),
            conjugation: self.conjugation.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("presentation serializes")
    }

    /// Square-free monomials ordered by degree, then lexicographically by index tuple.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        let g = self.generators.len();
        let mut out: Vec<Vec<usize>> =
            (0u64..(1u64 << g)).map(|mask| (0..g).filter(|&k| mask & (1 << k) != 0).collect()).collect();
        out.sort_by_key(|m: &Vec<usize>| (m.iter().map(|&k| self.generators[k].degree).sum::<i32>(), m.clone()));
        out
    }

    /// The associated graded presentation: each differential keeps only the
    /// terms of the generator's own weight.
    pub fn graded_part(&self) -> Presentation {
        let weight = |mono: &Vec<usize>| mono.iter().map(|&k| self.generators[k].weight).sum::<i32>();
        let differentials = self
            .differentials
            .iter()
            .map(|(gen, poly)| {
                let w = self.generators[self.generator_index(gen).expect("validated")].weight;
                let kept: Polynomial =
                    poly.iter().filter(|(m, _)| weight(m) == w).map(|(m, c)| (m.clone(), c.clone())).collect();
                (gen.clone(), kept)
            })
            .filter(|(_, p)| !p.is_empty())
            .collect();
        Presentation { name: format!("{}-graded", self.name), differentials, ..self.clone() }
    }

    /// The same presentation with generators listed in the given order.
    pub fn permuted(&self, order: &[usize]) -> Presentation {
        let generators: Vec<Generator> = order.iter().map(|&k| self.generators[k].clone()).collect();
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let differentials = self
            .differentials
            .iter()
            .map(|(gen, poly)| {
                let mut out = Polynomial::new();
                for (mono, c) in poly {
                    let mapped: Vec<usize> = mono.iter().map(|&k| inverse[k]).collect();
                    let (sorted, negate) = sort_with_sign(&mapped);
                    expr::add_poly_term(&mut out, sorted, &c.signed(negate));
                }
                (gen.clone(), out)
            })
            .collect();
        Presentation { generators, differentials, ..self.clone() }
    }
}

/// Sorts a list of distinct odd generators, returning whether the sign flips.
pub(crate) fn sort_with_sign(mono: &[usize]) -> (Vec<usize>, bool) {
    let mut inversions = 0usize;
    for i in 0..mono.len() {
        for j in i + 1..mono.len() {
            if mono[i] > mono[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = mono.to_vec();
    sorted.sort_unstable();
    (sorted, inversions % 2 == 1)
}

/// Product of two monomials in the exterior algebra, `None` if they share a generator.
pub(crate) fn multiply_monomials(x: &[usize], y: &[usize]) -> Option<(Vec<usize>, bool)> {
    if x.iter().any(|k| y.contains(k)) {
        return None;
    }
    let mut cat = x.to_vec();
    cat.extend_from_slice(y);
    Some(sort_with_sign(&cat))
}

/// Expands a presentation into its filtered dg-algebra of monomials.
pub fn expand(p: &Presentation) -> Result<FilteredDGA> {
    let monos = p.monomials();
    let index: BTreeMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monos.len();
    let basis: Vec<BasisElement> = monos
        .iter()
        .map(|m| {
            BasisElement::new(
                p.monomial_label(m),
                m.iter().map(|&k| p.generators[k].degree).sum(),
                m.iter().map(|&k| p.generators[k].weight).sum(),
            )
        })
        .collect();
    let gen_d: Vec<Polynomial> =
        p.generators.iter().map(|g| p.differentials.get(&g.name).cloned().unwrap_or_default()).collect();
    let mut d = Matrix::zeros(n, n);
    for (j, m) in monos.iter().enumerate() {
        // d(x_1⋯x_k) = Σ ± x_1⋯d(x_i)⋯x_k with the sign of passing d over x_1..x_{i−1}.
        let mut sign_neg = false;
        for (pos, &gen) in m.iter().enumerate() {
            for (dm, c) in &gen_d[gen] {
                let Some((left, s1)) = multiply_monomials(&m[..pos], dm) else { continue };
                let Some((full, s2)) = multiply_monomials(&left, &m[pos + 1..]) else { continue };
                let i = index[&full];
                d.add_at(i, j, &c.signed(sign_neg ^ s1 ^ s2));
            }
            if p.generators[gen].degree % 2 != 0 {
                sign_neg = !sign_neg;
            }
        }
    }
    let complex = FilteredComplex::new(basis, d, p.field)
        .map_err(|e| presentation_error(format!("presentation `{}`", p.name), e.to_string()))?;
    let mut product = vec![SparseVec::new(); n * n];
    for (i, x) in monos.iter().enumerate() {
        for (j, y) in monos.iter().enumerate() {
            if let Some((m, neg)) = multiply_monomials(x, y) {
                product[i * n + j].insert(index[&m], Scalar::one().signed(neg));
            }
        }
    }
    FilteredDGA::new(complex, product)
}

#[cfg(test)]
mod props;
