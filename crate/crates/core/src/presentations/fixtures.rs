//! Built-in presentations with hand-chosen transfer diagrams.

use super::{expand, parse_expression, parse_presentation, FilteredDGA, Polynomial, Presentation};
use crate::complexes::{solve_homotopy, BasisElement, FilteredComplex, TransferDiagram};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::scalar::Scalar;

const EXEMPLET: &str = include_str!("../../fixtures/exemplet.json");
const KODAIRA_THURSTON: &str = include_str!("../../fixtures/kodaira-thurston.json");
const IWASAWA: &str = include_str!("../../fixtures/iwasawa.json");
const TORUS: &str = include_str!("../../fixtures/torus.json");
const ELLIPTIC_BUNDLE: &str = include_str!("../../fixtures/elliptic-bundle.json");

pub fn fixture_names() -> &'static [&'static str] {
    &["exemplet", "kodaira-thurston", "iwasawa"]
}

/// Presentations carrying `weights_w` and `conjugation`.
pub fn hodge_fixture_names() -> &'static [&'static str] {
    &["torus", "elliptic-bundle"]
}

/// `torus`: the complex 2-torus, pure. `elliptic-bundle`: `Λ(a, abar, x)` with
/// `dx = i·a·abar` and `x` of type (1,1), weights 0 to 4 on monomials.
pub fn hodge_fixture(name: &str) -> Result<Presentation> {
    let text = match name {
        "torus" => TORUS,
        "elliptic-bundle" => ELLIPTIC_BUNDLE,
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    parse_presentation(text.as_bytes())
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub presentation: Presentation,
}

/// A transfer diagram out of a fixture algebra. `kind` is `filtered`,
/// `dolbeault` or `hodge-de-rham`.
#[derive(Clone, Debug)]
pub struct FixtureTransfer {
    pub kind: &'static str,
    pub algebra: FilteredDGA,
    pub diagram: TransferDiagram,
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, description, text) = match name {
        "exemplet" => ("exemplet", "four generators, da = (b - e)c, degenerating at E_1", EXEMPLET),
        "kodaira-thurston" => ("kodaira-thurston", "Kodaira-Thurston nilmanifold, Hodge filtration", KODAIRA_THURSTON),
        "iwasawa" => ("iwasawa", "Iwasawa manifold, Hodge filtration", IWASAWA),
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let presentation = parse_presentation(text.as_bytes())?;
    Ok(Fixture { name, description, presentation })
}

impl Fixture {
    pub fn algebra(&self) -> Result<FilteredDGA> {
        expand(&self.presentation)
    }

    /// Transfer kinds available for this fixture.
    pub fn transfer_kinds(&self) -> &'static [&'static str] {
        match self.name {
            "exemplet" => &["filtered"],
            _ => &["dolbeault", "hodge-de-rham"],
        }
    }

    pub fn transfer(&self, kind: &str) -> Result<FixtureTransfer> {
        match (self.name, kind) {
            ("exemplet", "filtered") => exemplet_transfer(&self.presentation),
            ("kodaira-thurston", "dolbeault") => kt_transfer(&self.presentation, "dolbeault"),
            ("kodaira-thurston", "hodge-de-rham") => kt_transfer(&self.presentation, "hodge-de-rham"),
            ("iwasawa", "dolbeault") => iwasawa_transfer(&self.presentation, "dolbeault"),
            ("iwasawa", "hodge-de-rham") => iwasawa_transfer(&self.presentation, "hodge-de-rham"),
            _ => Err(Error::Precondition(format!("fixture `{}` has no `{kind}` transfer", self.name))),
        }
    }
}

/// A target class: its label, its representative, and the monomial whose
/// multiple maps onto it under `f`.
struct ClassSpec {
    label: String,
    rep: String,
    key: String,
}

fn class(rep: &str) -> ClassSpec {
    ClassSpec { label: format!("[{rep}]"), rep: rep.to_string(), key: rep.to_string() }
}

struct DiagramSpec<'a> {
    classes: Vec<ClassSpec>,
    /// Extra `f` values: source monomial, coefficient, class label.
    f_extra: Vec<(&'a str, Scalar, &'a str)>,
    /// Nonzero `h` values: source monomial and its image.
    h: Vec<(&'a str, &'a str)>,
    /// Compute `h` by solving the homotopy equation instead.
    solve_h: bool,
}

struct Builder<'a> {
    presentation: &'a Presentation,
    algebra: &'a FilteredDGA,
}

impl Builder<'_> {
    fn poly(&self, text: &str) -> Result<Polynomial> {
        let names: Vec<&str> = self.presentation.generators.iter().map(|g| g.name.as_str()).collect();
        parse_expression(text, &names, self.presentation.field).map_err(|(offset, msg)| Error::Presentation {
            location: format!("fixture expression `{text}` at offset {offset}"),
            message: msg,
        })
    }

    fn vector(&self, text: &str) -> Result<Vector> {
        let c = self.algebra.complex();
        let mut v = zero_vector(c.dim());
        for (mono, coef) in self.poly(text)? {
            let label = self.presentation.monomial_label(&mono);
            let i = c.index_of(&label).ok_or_else(|| Error::invariant(format!("no basis element {label}")))?;
            v[i] += &coef;
        }
        Ok(v)
    }

    /// The basis index and coefficient of a single-term expression.
    fn monomial(&self, text: &str) -> Result<(usize, Scalar)> {
        let v = self.vector(text)?;
        let mut nonzero = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
        match (nonzero.next(), nonzero.next()) {
            (Some((i, c)), None) => Ok((i, c.clone())),
            _ => Err(Error::invariant(format!("`{text}` is not a single monomial"))),
        }
    }

    fn build(&self, spec: &DiagramSpec) -> Result<TransferDiagram> {
        let source = self.algebra.complex();
        let n = source.dim();
        let reps: Vec<Vector> = spec.classes.iter().map(|c| self.vector(&c.rep)).collect::<Result<_>>()?;
        let mut order: Vec<usize> = (0..spec.classes.len()).collect();
        let elem = |k: usize| -> BasisElement {
            let support = (0..n).filter(|&i| !reps[k][i].is_zero());
            let degree = support.clone().map(|i| source.basis()[i].degree).next().unwrap_or(0);
            let weight = support.map(|i| source.basis()[i].weight).min().unwrap_or(0);
            BasisElement::new(spec.classes[k].label.clone(), degree, weight)
        };
        order.sort_by_key(|&k| {
            let e = elem(k);
            (e.degree, e.weight)
        });
        let basis: Vec<BasisElement> = order.iter().map(|&k| elem(k)).collect();
        let m = basis.len();
        let position = |label: &str| -> Result<usize> {
            basis.iter().position(|e| e.label == label).ok_or_else(|| Error::invariant(format!("no class {label}")))
        };
        let g = Matrix::from_columns(n, &order.iter().map(|&k| reps[k].clone()).collect::<Vec<_>>());
        let mut f = Matrix::zeros(m, n);
        for (t, &k) in order.iter().enumerate() {
            let (i, c) = self.monomial(&spec.classes[k].key)?;
            f.add_at(t, i, &c.inv()?);
        }
        for (src, coef, label) in &spec.f_extra {
            let (i, c) = self.monomial(src)?;
            f.add_at(position(label)?, i, &(coef * &c.inv()?));
        }
        let target_d = f.mul(source.d()).mul(&g);
        let target = FilteredComplex::new(basis, target_d, source.field())?;
        let h = if spec.solve_h {
            solve_homotopy(source, &f, &g, true)?
        } else {
            let mut h = Matrix::zeros(n, n);
            for (src, img) in &spec.h {
                let (j, c) = self.monomial(src)?;
                let inv = c.inv()?;
                for (i, x) in self.vector(img)?.iter().enumerate() {
                    h.add_at(i, j, &(x * &inv));
                }
            }
            h
        };
        let diagram = TransferDiagram { source: source.clone(), target, f, g, h };
        diagram.validate(true)?;
        Ok(diagram)
    }
}

fn finish(algebra: FilteredDGA, kind: &'static str, spec: &DiagramSpec, p: &Presentation) -> Result<FixtureTransfer> {
    let diagram = Builder { presentation: p, algebra: &algebra }.build(spec)?;
    Ok(FixtureTransfer { kind, algebra, diagram })
}

fn exemplet_transfer(p: &Presentation) -> Result<FixtureTransfer> {
    let mut classes: Vec<ClassSpec> = ["1", "b", "c", "e", "a*c"].iter().map(|r| class(r)).collect();
    classes.push(ClassSpec { label: "[a*b]".into(), rep: "a*b - a*e".into(), key: "a*b".into() });
    classes.push(class("e*c"));
    classes.extend(["b*e", "a*b*c", "a*b*e", "a*c*e", "a*b*c*e"].iter().map(|r| class(r)));
    let spec = DiagramSpec { classes, f_extra: vec![("b*c", Scalar::one(), "[e*c]")], h: vec![], solve_h: true };
    finish(expand(p)?, "filtered", &spec, p)
}

const KT_CLASSES: [&str; 12] = [
    "1",
    "a",
    "abar",
    "bbar",
    "a*b",
    "a*bbar",
    "b*abar",
    "abar*bbar",
    "a*b*abar",
    "a*b*bbar",
    "b*abar*bbar",
    "a*b*abar*bbar",
];

fn kt_transfer(p: &Presentation, kind: &'static str) -> Result<FixtureTransfer> {
    let mut classes: Vec<ClassSpec> = KT_CLASSES.iter().map(|r| class(r)).collect();
    let h = vec![("a*abar", "-i*b"), ("a*abar*bbar", "-i*b*bbar")];
    if kind == "dolbeault" {
        let spec = DiagramSpec { classes, f_extra: vec![], h, solve_h: false };
        return finish(expand(&p.graded_part())?, kind, &spec, p);
    }
    classes[3].rep = "bbar + b".into();
    let spec = DiagramSpec { classes, f_extra: vec![("a*abar*bbar", Scalar::one(), "[a*b*abar]")], h, solve_h: false };
    finish(expand(p)?, kind, &spec, p)
}

/// Representatives of the 48 classes of `E_1` of the Iwasawa manifold.
pub(crate) fn iwasawa_classes() -> Vec<String> {
    let row0 = ["1", "a", "b", "c", "a*b", "a*c", "b*c", "a*b*c"];
    let row1: Vec<String> = ["abar", "bbar"]
        .into_iter()
        .chain(["a*abar", "a*bbar", "b*abar", "b*bbar", "c*abar", "c*bbar"])
        .chain(["a*b*abar", "a*b*bbar", "a*c*abar", "a*c*bbar", "b*c*abar", "b*c*bbar"])
        .chain(["a*b*c*abar", "a*b*c*bbar"])
        .map(String::from)
        .collect();
    let row2: Vec<String> = row1.iter().map(|r| format!("{r}*cbar")).collect();
    let row3 =
        row0.iter().map(|x| if *x == "1" { "abar*bbar*cbar".to_string() } else { format!("{x}*abar*bbar*cbar") });
    row0.iter().map(|s| s.to_string()).chain(row1).chain(row2).chain(row3).collect()
}

fn iwasawa_transfer(p: &Presentation, kind: &'static str) -> Result<FixtureTransfer> {
    let reps = iwasawa_classes();
    let classes: Vec<ClassSpec> = reps.iter().map(|r| class(r)).collect();
    let mut h_text: Vec<(String, String)> = vec![("abar*bbar".into(), "-cbar".into())];
    for x in ["a", "b", "c", "a*b", "a*c", "b*c", "a*b*c"] {
        let sign = if x.matches('*').count() % 2 == 0 { "" } else { "-" };
        h_text.push((format!("{x}*abar*bbar"), format!("{sign}{x}*cbar")));
    }
    let h: Vec<(&str, &str)> = h_text.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect();
    let spec = DiagramSpec { classes, f_extra: vec![], h, solve_h: false };
    let algebra = if kind == "dolbeault" { expand(&p.graded_part())? } else { expand(p)? };
    finish(algebra, kind, &spec, p)
}
