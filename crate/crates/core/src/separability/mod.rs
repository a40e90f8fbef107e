//! Separability families: the linear system whose solutions are exactly the
//! families `(a_x^y)` with `Σ_y comp(a_x^y) = 1_x` and
//! `f ▷ a_x^y = a_z^y ◁ f`, certificate verification and reduction, the
//! groupoid and delta criteria, and the two constructions that consume a
//! family (the module section and the hom-space embedding).

mod criteria;
mod reduce;
mod section;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix};
use crate::lincat::FinLinCat;

pub use criteria::{cross_check, delta_predict, maschke_predict, DeltaVerdict, MaschkeVerdict};
pub use reduce::{reduce_family, ReducedFamily, Term};
pub use section::{module_section, zelinsky_report, PairReport, SectionResult, ZelinskyReport};
pub use solver::{
    separability_system, solve_separability, verify_family, CResidual, DResidual, SeparabilitySystem,
    VerificationReport,
};

/// Coefficient matrices `A^{x,y}`: entry `(i, j)` is the coefficient of
/// `u_i ⊗ v_j` with `u_i` running over the basis of `hom(y, x)` and `v_j`
/// over the basis of `hom(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityFamily {
    field: FieldSpec,
    blocks: Vec<Vec<Matrix>>,
}

impl SeparabilityFamily {
    pub fn zero(c: &FinLinCat) -> Self {
        let n = c.object_count();
        let blocks = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| Matrix::zeros(c.field(), c.hom_dim(y, x), c.hom_dim(x, y)))
                    .collect()
            })
            .collect();
        SeparabilityFamily {
            field: c.field(),
            blocks,
        }
    }

    pub fn from_blocks(c: &FinLinCat, blocks: Vec<Vec<Matrix>>) -> Result<Self> {
        let fam = SeparabilityFamily {
            field: c.field(),
            blocks,
        };
        fam.check_shapes(c)?;
        Ok(fam)
    }

    pub fn check_shapes(&self, c: &FinLinCat) -> Result<()> {
        let n = c.object_count();
        if self.field != c.field() {
            return Err(Error::FieldMismatch(self.field.to_string(), c.field().to_string()));
        }
        if self.blocks.len() != n || self.blocks.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "family has {} object rows, category has {n} objects",
                self.blocks.len()
            )));
        }
        for x in 0..n {
            for y in 0..n {
                let b = &self.blocks[x][y];
                if b.rows() != c.hom_dim(y, x) || b.cols() != c.hom_dim(x, y) {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({}, {}) is {}x{}, expected {}x{}",
                        c.object_name(x),
                        c.object_name(y),
                        b.rows(),
                        b.cols(),
                        c.hom_dim(y, x),
                        c.hom_dim(x, y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn object_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, x: usize, y: usize) -> &Matrix {
        &self.blocks[x][y]
    }

    pub fn set_block(&mut self, x: usize, y: usize, m: Matrix) {
        self.blocks[x][y] = m;
    }

    /// Objects `y` with `a_x^y ≠ 0`.
    pub fn support(&self, x: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&y| !self.blocks[x][y].is_zero())
            .collect()
    }

    /// All `(x, y)` with a zero block.
    pub fn zero_blocks(&self) -> Vec<(usize, usize)> {
        let n = self.blocks.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.blocks[x][y].is_zero())
            .collect()
    }

    pub fn to_certificate(&self, c: &FinLinCat) -> Vec<CertificateBlock> {
        let n = self.blocks.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let b = &self.blocks[x][y];
                if b.is_zero() {
                    continue;
                }
                let mut terms = Vec::new();
                for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                    for (j, &v) in c.hom_basis(x, y).iter().enumerate() {
                        let s = b.get(i, j);
                        if !s.is_zero() {
                            terms.push(CertificateTerm {
                                coeff: s.to_string(),
                                u: c.basis(u).label.clone(),
                                v: c.basis(v).label.clone(),
                            });
                        }
                    }
                }
                out.push(CertificateBlock {
                    x: c.object_name(x).into(),
                    y: c.object_name(y).into(),
                    terms,
                });
            }
        }
        out
    }

    /// Reads a certificate; repeated terms are added up.
    pub fn from_certificate(c: &FinLinCat, cert: &[CertificateBlock]) -> Result<Self> {
        let mut fam = SeparabilityFamily::zero(c);
        for block in cert {
            let x = c.object_index(&block.x)?;
            let y = c.object_index(&block.y)?;
            for t in &block.terms {
                let u = c.basis_id(&t.u)?;
                let v = c.basis_id(&t.v)?;
                let (ub, vb) = (c.basis(u), c.basis(v));
                if ub.source != y || ub.target != x {
                    return Err(Error::Format(format!(
                        "term u = {} is not in hom({}, {})",
                        t.u, block.y, block.x
                    )));
                }
                if vb.source != x || vb.target != y {
                    return Err(Error::Format(format!(
                        "term v = {} is not in hom({}, {})",
                        t.v, block.x, block.y
                    )));
                }
                let coeff = c.field().parse_scalar(&t.coeff)?;
                let cell = &mut fam.blocks[x][y];
                let sum = cell.get(ub.local, vb.local) + &coeff;
                cell.set(ub.local, vb.local, sum);
            }
        }
        Ok(fam)
    }

    pub fn to_json(&self, c: &FinLinCat) -> String {
        serde_json::to_string_pretty(&self.to_certificate(c)).expect("certificate serializes")
    }

    pub fn from_json(c: &FinLinCat, text: &str) -> Result<Self> {
        let cert: Vec<CertificateBlock> = serde_json::from_str(text)?;
        Self::from_certificate(c, &cert)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateTerm {
    pub coeff: String,
    pub u: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBlock {
    pub x: String,
    pub y: String,
    pub terms: Vec<CertificateTerm>,
}
