//! Filtration and bidegree windows, checked exhaustively on stored entries.

use super::multimap::MultiMap;
use super::{AInfinityMorphism, AInfinityStructure};
use crate::complexes::BasisElement;

/// Entries of `m` whose output leaves `F^{Σp_i + shift}`.
pub fn check_map_window(
    name: &str,
    m: &MultiMap,
    src: &[BasisElement],
    tgt: &[BasisElement],
    shift: i32,
) -> Vec<String> {
    let mut out = Vec::new();
    for (t, v) in m.entries() {
        let bound: i32 = t.iter().map(|&i| src[i].weight).sum::<i32>() + shift;
        for &k in v.keys() {
            if tgt[k].weight < bound {
                let inputs: Vec<&str> = t.iter().map(|&i| src[i].label.as_str()).collect();
                out.push(format!(
                    "{name}({}) has a component on {} of weight {} < {bound}",
                    inputs.join(", "),
                    tgt[k].label,
                    tgt[k].weight
                ));
            }
        }
    }
    out
}

/// `d` preserves and `ν_s` adds filtration degrees.
pub fn check_filtered_structure(a: &AInfinityStructure) -> Vec<String> {
    let mut out = check_map_window("d", &a.d, &a.basis, &a.basis, 0);
    for (s, m) in &a.ops {
        out.extend(check_map_window(&format!("ν_{s}"), m, &a.basis, &a.basis, 0));
    }
    out
}

/// `f_s` lands in `F^{Σp + (1−s)r}`; `r = 0` is the filtered-morphism condition.
pub fn check_filtered_morphism(f: &AInfinityMorphism, r: usize) -> Vec<String> {
    let mut out = Vec::new();
    for (&s, m) in &f.components {
        let shift = (1 - s as i32) * r as i32;
        out.extend(check_map_window(&format!("f_{s}"), m, &f.source.basis, &f.target.basis, shift));
    }
    out
}

/// `E_r`-minimal windows: `d` raises weight by at least `r+1` and `ν_s` lands
/// in weight `≥ Σp + (2−s)r`.
pub fn check_er_windows(a: &AInfinityStructure, r: usize) -> Vec<String> {
    let r = r as i32;
    let mut out = check_map_window("d", &a.d, &a.basis, &a.basis, r + 1);
    for (&s, m) in &a.ops {
        out.extend(check_map_window(&format!("ν_{s}"), m, &a.basis, &a.basis, (2 - s as i32) * r));
    }
    out
}
