//! Hochschild-Mitchell cohomology through the (non-normalized) bar cochain
//! complex.
//!
//! `C^n` is the product over chains `x_0 ← x_1 ← … ← x_n` of
//! `Hom_K(hom(x_1, x_0) ⊗ … ⊗ hom(x_n, x_{n-1}), M[x_0][x_n])` and
//!
//! ```text
//! (dφ)(f_1, …, f_{n+1}) = f_1 ▷ φ(f_2, …, f_{n+1})
//!                       + Σ_i (−1)^i φ(…, f_i ∘ f_{i+1}, …)
//!                       + (−1)^{n+1} φ(f_1, …, f_n) ◁ f_{n+1}
//! ```

mod complex;
mod les;
mod obstruction;

pub use complex::{
    build_hm_complex, cochain_dims, cohomology_dims, hm_cohomology, invariants_dim, Block, CochainComplex,
    CochainSpace, CohomologyResult, DegreeReport, DEFAULT_BUDGET, DEFAULT_MAX_DEGREE,
};
pub use les::{induced_cochain_map, les_analysis, LesDegree, LesPosition, LesReport};
pub use obstruction::{obstruction_cocycle, obstruction_with_section, shifted_section, standard_section, Obstruction};
