use serde::Serialize;

use crate::cmod::LeftModule;
use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::lincat::FinLinCat;

use super::{verify_family, ReducedFamily};

fn require_verified(c: &FinLinCat, fam: &ReducedFamily) -> Result<()> {
    let report = verify_family(c, &fam.family)?;
    if !report.ok() {
        return Err(Error::InvalidFamily(format!("family does not verify:\n{report}")));
    }
    if fam.recompose(c) != fam.family {
        return Err(Error::InvalidFamily("terms do not recompose to the family".into()));
    }
    Ok(())
}

/// The section `ψ_x = (ψ_x^y)_y` of the evaluation map
/// `⊕_y hom(y, x) ⊗ M[y] → M[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionResult {
    /// `psi[x][y]`: `M[x] → hom(y, x) ⊗ M[y]`, with the `hom(y, x)` index
    /// outermost.
    pub psi: Vec<Vec<Matrix>>,
    pub section_ok: bool,
    pub linear_ok: bool,
    pub failures: Vec<String>,
}

/// Builds `ψ_x^y(m) = Σ_i f^i ⊗ (g^i ▷ m)` and checks that it splits the
/// evaluation map and commutes with the action.
pub fn module_section(c: &FinLinCat, fam: &ReducedFamily, m: &LeftModule) -> Result<SectionResult> {
    require_verified(c, fam)?;
    m.require_valid(c)?;
    let n = c.object_count();
    let k = c.field();

    let psi: Vec<Vec<Matrix>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let mut out = Matrix::zeros(k, c.hom_dim(y, x) * m.dim(y), m.dim(x));
                    for t in fam.terms(x, y) {
                        let f = Matrix::column_vector(k, t.f.clone());
                        out = out.add(&f.kron(&m.action_vec(c, x, y, &t.g))).expect("shapes");
                    }
                    out
                })
                .collect()
        })
        .collect();

    let mut failures = Vec::new();
    let mut section_ok = true;
    for x in 0..n {
        let mut total = Matrix::zeros(k, m.dim(x), m.dim(x));
        for y in 0..n {
            total = total.add(&evaluation(c, m, y, x).mul(&psi[x][y])?)?;
        }
        if total != Matrix::identity(k, m.dim(x)) {
            section_ok = false;
            failures.push(format!(
                "evaluation after section is not the identity on M[{}]",
                c.object_name(x)
            ));
        }
    }

    let mut linear_ok = true;
    for (f, fb) in c.basis_elements().iter().enumerate() {
        let (x, z) = (fb.source, fb.target);
        for y in 0..n {
            let lhs = psi[z][y].mul(m.action(f))?;
            let lift = c.postcomp_matrix(f, y).kron(&Matrix::identity(k, m.dim(y)));
            let rhs = lift.mul(&psi[x][y])?;
            if lhs != rhs {
                linear_ok = false;
                failures.push(format!(
                    "section does not commute with {} at y = {}",
                    fb.label,
                    c.object_name(y)
                ));
            }
        }
    }

    Ok(SectionResult {
        psi,
        section_ok,
        linear_ok,
        failures,
    })
}

/// `hom(y, x) ⊗ M[y] → M[x]`, `u ⊗ m ↦ u ▷ m`.
fn evaluation(c: &FinLinCat, m: &LeftModule, y: usize, x: usize) -> Matrix {
    let mut out = Matrix::zeros(c.field(), m.dim(x), c.hom_dim(y, x) * m.dim(y));
    for (a, &u) in c.hom_basis(y, x).iter().enumerate() {
        out.set_block(0, a * m.dim(y), m.action(u));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanDims {
    pub y: String,
    pub dim_v_yx: usize,
    pub dim_v_yz: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub x: String,
    pub z: String,
    pub hom_dim: usize,
    pub spans: Vec<SpanDims>,
    pub rank: usize,
    pub injective: bool,
    pub bound: usize,
    /// Every `f ∘ f^i_{y,x}` lies in `V_{y,z}`.
    pub range_in_v: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZelinskyReport {
    pub pairs: Vec<PairReport>,
}

impl ZelinskyReport {
    pub fn all_injective(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.injective && p.range_in_v && p.bound >= p.hom_dim)
    }
}

/// For every pair `(x, z)`, the map `hom(x, z) → ⊕_y Hom(V_{y,x}, V_{y,z})`,
/// `f ↦ (v ↦ f∘v)`, over the support `y` of `(a_x^y)_y`, where
/// `V_{y,x} = span{f^i_{y,x}}`.
pub fn zelinsky_report(c: &FinLinCat, fam: &ReducedFamily) -> Result<ZelinskyReport> {
    require_verified(c, fam)?;
    let n = c.object_count();
    let k = c.field();
    let mut pairs = Vec::new();
    for x in 0..n {
        let support: Vec<usize> = (0..n).filter(|&y| fam.term_count(x, y) > 0).collect();
        for z in 0..n {
            let mut spans = Vec::new();
            let mut columns: Vec<Vec<_>> = vec![Vec::new(); c.hom_dim(x, z)];
            let mut range_in_v = true;
            let mut bound = 0;
            for &y in &support {
                let (fx, fz) = (fam.f_matrix(c, x, y), fam.f_matrix(c, z, y));
                spans.push(SpanDims {
                    y: c.object_name(y).into(),
                    dim_v_yx: fx.cols(),
                    dim_v_yz: fz.cols(),
                });
                bound += fx.cols() * fz.cols();
                for (col, &f) in columns.iter_mut().zip(c.hom_basis(x, z)) {
                    let images = c.postcomp_matrix(f, y).mul(&fx)?;
                    match fz.solve(&images)? {
                        Some(coords) => col.extend(coords.entries().iter().cloned()),
                        None => {
                            range_in_v = false;
                            col.extend(std::iter::repeat_n(k.zero(), fx.cols() * fz.cols()));
                        }
                    }
                }
            }
            let rows = bound;
            let phi = Matrix::from_columns(k, rows, &columns);
            let rank = phi.rank();
            pairs.push(PairReport {
                x: c.object_name(x).into(),
                z: c.object_name(z).into(),
                hom_dim: c.hom_dim(x, z),
                spans,
                rank,
                injective: rank == c.hom_dim(x, z),
                bound,
                range_in_v,
            });
        }
    }
    Ok(ZelinskyReport { pairs })
}
