use std::path::PathBuf;

use fainf_core::ainfinity::{
    bigraded_transfer_on_page, er_minimal_model, filtered_minimal_model, transfer_ainfinity, tree_transfer,
    AInfinityStructure, TransferOptions,
};
use fainf_core::complexes::graded_classical_transfer;
use fainf_core::presentations::{
    expand, fixture, fixture_names, hodge_fixture, hodge_fixture_names, parse_presentation, Fixture, FixtureTransfer,
    Presentation,
};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Fixture(String),
    Input(PathBuf),
}

pub struct Loaded {
    pub name: String,
    pub presentation: Presentation,
    /// Set for the fixtures that carry hand-chosen transfer diagrams.
    pub fixture: Option<Fixture>,
}

pub fn load(source: &Source) -> Result<Loaded, CliError> {
    match source {
        Source::Fixture(name) => {
            if let Ok(fx) = fixture(name) {
                return Ok(Loaded { name: name.clone(), presentation: fx.presentation.clone(), fixture: Some(fx) });
            }
            if let Ok(p) = hodge_fixture(name) {
                return Ok(Loaded { name: name.clone(), presentation: p, fixture: None });
            }
            let known: Vec<&str> = fixture_names().iter().chain(hodge_fixture_names()).copied().collect();
            Err(CliError::Usage(format!("unknown fixture `{name}` (known: {})", known.join(", "))))
        }
        Source::Input(path) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let presentation = parse_presentation(&bytes)?;
            Ok(Loaded { name: presentation.name.clone(), presentation, fixture: None })
        }
    }
}

/// Which A∞-structure to build. The number is the page it lives on, except
/// for `Page(r)`, the transfer of `(E_r, d_r)` onto `E_{r+1}`, and
/// `ErMinimal(r)`, whose model is quasi-isomorphic at `E_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    ErMinimal(usize),
    Dolbeault(usize),
    HodgeDeRham(usize),
    Page(usize),
}

impl ModelKind {
    /// `KIND` or `KIND:R`; `default_r` applies when there is no suffix.
    pub fn parse(text: &str, default_r: Option<usize>) -> Result<Self, CliError> {
        let (name, r) = match text.split_once(':') {
            Some((n, r)) => {
                let r = r.parse().map_err(|_| CliError::Usage(format!("bad page number in `{text}`")))?;
                (n, Some(r))
            }
            None => (text, default_r),
        };
        let kind = match name {
            "er-minimal" => ModelKind::ErMinimal(r.unwrap_or(0)),
            "page" => ModelKind::Page(r.unwrap_or(0)),
            "dolbeault" => ModelKind::Dolbeault(r.unwrap_or(1)),
            "hodge-de-rham" => ModelKind::HodgeDeRham(r.unwrap_or(1)),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown kind `{other}` (expected er-minimal, dolbeault, hodge-de-rham or page)"
                )))
            }
        };
        if let ModelKind::Dolbeault(0) | ModelKind::HodgeDeRham(0) = kind {
            return Err(CliError::Usage(format!("`{name}` structures live on E_r with r ≥ 1")));
        }
        Ok(kind)
    }

    pub fn name(&self) -> String {
        match self {
            ModelKind::ErMinimal(r) => format!("er-minimal:{r}"),
            ModelKind::Dolbeault(r) => format!("dolbeault:{r}"),
            ModelKind::HodgeDeRham(r) => format!("hodge-de-rham:{r}"),
            ModelKind::Page(r) => format!("page:{r}"),
        }
    }
}

pub fn build_structure(loaded: &Loaded, kind: ModelKind, arity: usize) -> Result<AInfinityStructure, CliError> {
    let a = expand(&loaded.presentation)?;
    let opts = TransferOptions::with_cap(arity);
    let (e1, r) = match kind {
        ModelKind::ErMinimal(r) => return Ok(er_minimal_model(&a, r, opts)?.structure),
        ModelKind::Page(r) => return Ok(bigraded_transfer_on_page(&a, r, opts)?.result.structure),
        ModelKind::Dolbeault(r) => {
            let s = match fixture_transfer(loaded, &["dolbeault"])? {
                Some(t) => transfer_ainfinity(&t.diagram, &t.algebra, opts)?.structure,
                None => bigraded_transfer_on_page(&a, 0, opts)?.result.structure,
            };
            (s, r)
        }
        ModelKind::HodgeDeRham(r) => {
            let s = match fixture_transfer(loaded, &["hodge-de-rham", "filtered"])? {
                Some(t) => transfer_ainfinity(&t.diagram, &t.algebra, opts)?.structure,
                None => filtered_minimal_model(&a, opts)?.structure,
            };
            (s, r)
        }
    };
    // Pass to later pages by graded transfer of the whole structure.
    let mut s = e1;
    for page in 1..r {
        let diagram = graded_classical_transfer(&s.complex()?, page)?;
        s = tree_transfer(&diagram, &s, TransferOptions { filtered: false, ..opts })?;
    }
    Ok(s)
}

fn fixture_transfer(loaded: &Loaded, kinds: &[&str]) -> Result<Option<FixtureTransfer>, CliError> {
    let Some(fx) = loaded.fixture.as_ref() else { return Ok(None) };
    match kinds.iter().find(|k| fx.transfer_kinds().contains(k)) {
        Some(kind) => Ok(Some(fx.transfer(kind)?)),
        None => Ok(None),
    }
}
