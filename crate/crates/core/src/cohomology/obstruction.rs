use serde::Serialize;

use crate::cmod::{kernel_of, tensor_square};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::lincat::FinLinCat;

use super::complex::build_hm_complex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    /// Coordinates in `C^1(C, ker comp)`.
    pub cocycle: Vec<Scalar>,
    pub is_zero: bool,
    pub is_coboundary: bool,
}

/// `σ_x = 1_x ⊗ 1_x`, placed in the `z = x` summand of
/// `(C ⊗ C)[x][x] = ⊕_z hom(z, x) ⊗ hom(x, z)`.
pub fn standard_section(c: &FinLinCat) -> Vec<Vec<Scalar>> {
    let n = c.object_count();
    let k = c.field();
    (0..n)
        .map(|x| {
            let mut v = Vec::new();
            for z in 0..n {
                let block = c.hom_dim(z, x) * c.hom_dim(x, z);
                if z == x {
                    let e = c.identity(x);
                    for a in e {
                        for b in e {
                            v.push(a * b);
                        }
                    }
                } else {
                    v.extend(std::iter::repeat_n(k.zero(), block));
                }
            }
            v
        })
        .collect()
}

/// The obstruction to splitting `comp: C ⊗ C → C` as a bimodule map,
/// computed from the section `u ↦ u ⊗ 1`.
pub fn obstruction_cocycle(c: &FinLinCat, budget: usize) -> Result<Obstruction> {
    obstruction_with_section(c, &standard_section(c), budget)
}

/// Same, for any linear choice of `σ_x ∈ (C ⊗ C)[x][x]` with
/// `comp(σ_x) = 1_x`. The cocycle is `c(f) = f ▷ σ_x − σ_z ◁ f` for basis
/// `f: x → z`, read in `ker comp`.
pub fn obstruction_with_section(c: &FinLinCat, sigma: &[Vec<Scalar>], budget: usize) -> Result<Obstruction> {
    c.require_valid()?;
    let n = c.object_count();
    let k = c.field();
    let (t, comp) = tensor_square(c);
    for x in 0..n {
        if sigma.get(x).map(Vec::len) != Some(t.dim(x, x)) {
            return Err(Error::DimensionMismatch(format!(
                "section at {} has the wrong length",
                c.object_name(x)
            )));
        }
        if comp.component(x, x).mul_vec(&sigma[x]) != c.identity(x) {
            return Err(Error::InvalidFamily(format!(
                "section at {} does not map to the identity",
                c.object_name(x)
            )));
        }
    }
    let (kc, incl) = kernel_of(c, &t, &comp)?;
    let complex = build_hm_complex(c, &kc, 1, budget)?;
    let c1 = &complex.spaces[1];
    let mut cocycle = vec![k.zero(); c1.dim];
    for (f, fb) in c.basis_elements().iter().enumerate() {
        let (x, z) = (fb.source, fb.target);
        let left = t.left(f, x).mul_vec(&sigma[x]);
        let right = t.right(f, z).mul_vec(&sigma[z]);
        let value: Vec<Scalar> = left.iter().zip(&right).map(|(a, b)| a - b).collect();
        let coords = incl
            .component(z, x)
            .solve_vec(&value)?
            .ok_or_else(|| Error::CrossCheck(format!("obstruction at {} leaves ker comp", fb.label)))?;
        if let Some(b) = c1.block(&[z, x]) {
            let base = b.offset + b.tensor_index(&[fb.local]) * b.m_dim;
            for (i, s) in coords.into_iter().enumerate() {
                cocycle[base + i] = s;
            }
        }
    }
    if complex.d(1).mul_vec(&cocycle).iter().any(|s| !s.is_zero()) {
        return Err(Error::CrossCheck("obstruction is not a cocycle".into()));
    }
    let is_coboundary = complex.d(0).solve_vec(&cocycle)?.is_some();
    Ok(Obstruction {
        is_zero: cocycle.iter().all(Scalar::is_zero),
        cocycle,
        is_coboundary,
    })
}

/// Adds `t_x` (coordinates in `ker comp`) to the standard section, for
/// checking that the verdict does not depend on the section.
pub fn shifted_section(c: &FinLinCat, shifts: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let (t, comp) = tensor_square(c);
    let (_, incl) = kernel_of(c, &t, &comp)?;
    let base = standard_section(c);
    (0..c.object_count())
        .map(|x| {
            let m: &Matrix = incl.component(x, x);
            if shifts[x].len() != m.cols() {
                return Err(Error::DimensionMismatch("shift has the wrong length".into()));
            }
            let delta = m.mul_vec(&shifts[x]);
            Ok(base[x].iter().zip(&delta).map(|(a, b)| a + b).collect())
        })
        .collect()
}
