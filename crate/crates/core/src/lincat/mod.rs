//! Finite K-linear categories given by structure constants.
//!
//! `hom(x, y)` holds the morphisms from `x` to `y`; composition is
//! `hom(y, z) × hom(x, y) → hom(x, z)`, `(g, f) ↦ g∘f`. Basis labels are
//! globally unique, and every basis element carries a global index that the
//! rest of the crate uses for lookups.

mod category;
mod format;
mod presentation;

pub use category::{BasisElement, FinLinCat, Morphism, ValidationReport};
pub use format::CategoryDoc;
pub use presentation::{random_presentation, Classification, FiniteCatPresentation, PresentationDoc};

use crate::error::Result;
use crate::exactalg::FieldSpec;

/// K-linearization: the hom bases are the morphism sets of `p`, and
/// composites of basis elements are the composites in `p`.
pub fn linearize(p: &FiniteCatPresentation, k: FieldSpec) -> Result<FinLinCat> {
    p.check()?;
    let n = p.object_count();
    let mut homs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let labels: Vec<String> = p
                .hom_set(x, y)
                .iter()
                .map(|&m| p.morphism_name(m).to_string())
                .collect();
            homs.push(((x, y), labels));
        }
    }
    let mut c = FinLinCat::new(k, p.object_names().to_vec(), homs)?;
    for x in 0..p.object_count() {
        let id = p.identity(x);
        c.set_identity(x, c.unit_vector(c.basis_id(p.morphism_name(id))?))?;
    }
    for ((g, f), h) in p.composition_entries() {
        let gi = c.basis_id(p.morphism_name(g))?;
        let fi = c.basis_id(p.morphism_name(f))?;
        let hi = c.basis_id(p.morphism_name(h))?;
        c.set_composition(gi, fi, c.unit_vector(hi));
    }
    Ok(c)
}
