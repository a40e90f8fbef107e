use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix};
use crate::lincat::{linearize, FinLinCat, FiniteCatPresentation};

use super::{solve_separability, verify_family, SeparabilityFamily};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaschkeVerdict {
    pub separable: bool,
    /// `(x, y, |G(x, y)|)` for a hom set whose size vanishes in the field.
    pub witness: Option<(String, String, usize)>,
    pub certificate: Option<SeparabilityFamily>,
}

/// Groupoid criterion: separable iff every nonempty hom set has a size that
/// is invertible in `k`.
///
/// The certificate uses one reference object `y₀` per connected component:
/// `a_x^{y₀} = |G(x, y₀)|⁻¹ Σ_{g ∈ G(y₀, x)} g ⊗ g⁻¹` and `a_x^y = 0` for
/// every other `y`. For a group this is the usual averaging element.
pub fn maschke_predict(p: &FiniteCatPresentation, k: FieldSpec) -> Result<MaschkeVerdict> {
    p.check()?;
    if !p.classify().is_groupoid {
        return Err(Error::NotGroupoid("some morphism has no inverse".into()));
    }
    let n = p.object_count();
    for x in 0..n {
        for y in 0..n {
            let size = p.hom_size(x, y);
            if size > 0 && k.from_u64(size as u64).is_zero() {
                return Ok(MaschkeVerdict {
                    separable: false,
                    witness: Some((p.object_names()[x].clone(), p.object_names()[y].clone(), size)),
                    certificate: None,
                });
            }
        }
    }
    let c = linearize(p, k)?;
    Ok(MaschkeVerdict {
        separable: true,
        witness: None,
        certificate: Some(groupoid_certificate(p, &c)?),
    })
}

fn groupoid_certificate(p: &FiniteCatPresentation, c: &FinLinCat) -> Result<SeparabilityFamily> {
    let n = p.object_count();
    let k = c.field();
    let mut fam = SeparabilityFamily::zero(c);
    for x in 0..n {
        let y0 = (0..n).find(|&y| p.hom_size(y, x) > 0).expect("identity");
        let inv = k.from_u64(p.hom_size(x, y0) as u64).inverse()?;
        let mut a = Matrix::zeros(k, c.hom_dim(y0, x), c.hom_dim(x, y0));
        for g in p.hom_set(y0, x) {
            let gi = p.inverse_of(g).expect("groupoid");
            let u = c.basis(c.basis_id(p.morphism_name(g))?).local;
            let v = c.basis(c.basis_id(p.morphism_name(gi))?).local;
            a.set(u, v, a.get(u, v) + &inv);
        }
        fam.set_block(x, y0, a);
    }
    Ok(fam)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaVerdict {
    pub separable: bool,
    /// A morphism that is not an identity, when the category is not discrete.
    pub witness: Option<String>,
}

impl DeltaVerdict {
    /// `a_x^x = 1_x ⊗ 1_x` and zero elsewhere, for a discrete verdict.
    pub fn certificate(&self, c: &FinLinCat) -> Option<SeparabilityFamily> {
        if !self.separable {
            return None;
        }
        let mut fam = SeparabilityFamily::zero(c);
        for x in 0..c.object_count() {
            let e = Matrix::column_vector(c.field(), c.identity(x).to_vec());
            fam.set_block(x, x, e.mul(&e.transpose()).expect("outer product"));
        }
        Some(fam)
    }
}

/// Delta criterion: a skeletal category with only trivial endomorphisms is
/// separable iff it is discrete.
pub fn delta_predict(p: &FiniteCatPresentation) -> Result<DeltaVerdict> {
    p.check()?;
    let class = p.classify();
    if !class.is_delta {
        return Err(Error::NotDelta(
            "needs trivial endomorphisms and no pair of objects with morphisms both ways".into(),
        ));
    }
    let witness = (0..p.morphism_count())
        .find(|&m| p.source(m) != p.target(m))
        .map(|m| p.morphism_name(m).to_string());
    Ok(DeltaVerdict {
        separable: class.is_discrete,
        witness,
    })
}

/// Runs the solver and compares it with a predicted verdict. A
/// disagreement, or a predicted certificate that does not verify, is a
/// [`Error::CrossCheck`]. Returns the solver's family.
pub fn cross_check(
    c: &FinLinCat,
    predicted: bool,
    certificate: Option<&SeparabilityFamily>,
) -> Result<Option<SeparabilityFamily>> {
    let solved = solve_separability(c)?;
    if solved.is_some() != predicted {
        return Err(Error::CrossCheck(format!(
            "criterion predicts separable = {predicted}, linear solver finds {}",
            solved.is_some()
        )));
    }
    if let Some(fam) = certificate {
        let report = verify_family(c, fam)?;
        if !report.ok() {
            return Err(Error::CrossCheck(format!(
                "predicted certificate fails verification:\n{report}"
            )));
        }
    }
    Ok(solved)
}
