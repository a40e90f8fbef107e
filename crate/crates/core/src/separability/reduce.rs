use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::lincat::FinLinCat;

use super::{verify_family, SeparabilityFamily};

/// One term `f ⊗ g` with `f ∈ hom(y, x)` and `g ∈ hom(x, y)` as coefficient
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub f: Vec<Scalar>,
    pub g: Vec<Scalar>,
}

/// A family written as `a_x^y = Σ_{i < n_{x,y}} f^i ⊗ g^i` with the `f^i`
/// and the `g^i` of each block linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedFamily {
    pub family: SeparabilityFamily,
    pub terms: Vec<Vec<Vec<Term>>>,
}

impl ReducedFamily {
    pub fn term_count(&self, x: usize, y: usize) -> usize {
        self.terms[x][y].len()
    }

    pub fn terms(&self, x: usize, y: usize) -> &[Term] {
        &self.terms[x][y]
    }

    /// `Σ_i f^i g^iᵀ` for every block.
    pub fn recompose(&self, c: &FinLinCat) -> SeparabilityFamily {
        let n = c.object_count();
        let k = c.field();
        let mut fam = SeparabilityFamily::zero(c);
        for x in 0..n {
            for y in 0..n {
                let mut a = Matrix::zeros(k, c.hom_dim(y, x), c.hom_dim(x, y));
                for t in &self.terms[x][y] {
                    let outer = Matrix::column_vector(k, t.f.clone())
                        .mul(&Matrix::column_vector(k, t.g.clone()).transpose())
                        .expect("outer product shapes");
                    a = a.add(&outer).expect("same shape");
                }
                fam.set_block(x, y, a);
            }
        }
        fam
    }

    /// Matrix whose columns are the `f^i` of block `(x, y)`.
    pub fn f_matrix(&self, c: &FinLinCat, x: usize, y: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.terms[x][y].iter().map(|t| t.f.clone()).collect();
        Matrix::from_columns(c.field(), c.hom_dim(y, x), &cols)
    }

    /// Matrix whose columns are the `g^i` of block `(x, y)`.
    pub fn g_matrix(&self, c: &FinLinCat, x: usize, y: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.terms[x][y].iter().map(|t| t.g.clone()).collect();
        Matrix::from_columns(c.field(), c.hom_dim(x, y), &cols)
    }
}

/// Rank factorization of every block: with `R` the reduced row echelon
/// form of `A`, the `f^i` are the pivot columns of `A` and the `g^i` the
/// nonzero rows of `R`, so `A = Σ_i f^i g^iᵀ` with exactly `rank A` terms.
pub fn reduce_family(c: &FinLinCat, fam: &SeparabilityFamily) -> Result<ReducedFamily> {
    let report = verify_family(c, fam)?;
    if !report.ok() {
        return Err(Error::InvalidFamily(format!("family does not verify:\n{report}")));
    }
    let n = c.object_count();
    let terms = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let a = fam.block(x, y);
                    let r = a.rref();
                    (0..r.rank)
                        .map(|i| Term {
                            f: a.column(r.pivot_cols[i]),
                            g: r.reduced.row(i).to_vec(),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(ReducedFamily {
        family: fam.clone(),
        terms,
    })
}
