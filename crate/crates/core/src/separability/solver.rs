use std::fmt;

use crate::error::Result;
use crate::exactalg::{Matrix, Scalar};
use crate::exec;
use crate::lincat::FinLinCat;

use super::SeparabilityFamily;

/// The linear system over the entries of all `A^{x,y}`.
///
/// Unknowns are laid out block by block in `(x, y)` order, row-major inside
/// each block. The first rows are the unit equations (one block per object),
/// followed by the naturality equations for every basis morphism `f` and
/// object `y`.
#[derive(Clone, Debug)]
pub struct SeparabilitySystem {
    pub matrix: Matrix,
    pub rhs: Vec<Scalar>,
    offsets: Vec<Vec<usize>>,
}

impl SeparabilitySystem {
    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    pub fn equations(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Deterministic solution (free variables zero), if any.
    pub fn solve(&self, c: &FinLinCat) -> Result<Option<SeparabilityFamily>> {
        Ok(self
            .matrix
            .solve_vec(&self.rhs)?
            .map(|v| self.family_from_vector(c, &v)))
    }

    /// Dimension of the affine solution space, or `None` when infeasible.
    pub fn solution_dim(&self) -> Result<Option<usize>> {
        let feasible = self.matrix.solve_vec(&self.rhs)?.is_some();
        Ok(feasible.then(|| self.unknowns() - self.rank()))
    }

    /// Basis of the homogeneous solutions, one family per kernel vector.
    pub fn homogeneous_basis(&self, c: &FinLinCat) -> Vec<SeparabilityFamily> {
        let k = self.matrix.kernel_basis();
        (0..k.cols())
            .map(|j| self.family_from_vector(c, &k.column(j)))
            .collect()
    }

    pub fn family_from_vector(&self, c: &FinLinCat, v: &[Scalar]) -> SeparabilityFamily {
        let n = c.object_count();
        let blocks = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (rows, cols) = (c.hom_dim(y, x), c.hom_dim(x, y));
                        let off = self.offsets[x][y];
                        Matrix::from_fn(c.field(), rows, cols, |i, j| v[off + i * cols + j].clone())
                    })
                    .collect()
            })
            .collect();
        SeparabilityFamily {
            field: c.field(),
            blocks,
        }
    }

    pub fn family_to_vector(&self, fam: &SeparabilityFamily) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.unknowns());
        for row in &fam.blocks {
            for b in row {
                v.extend(b.entries().iter().cloned());
            }
        }
        v
    }
}

/// Assembles the system. Naturality rows are built in parallel, one chunk
/// per `(f, y)`.
pub fn separability_system(c: &FinLinCat) -> Result<SeparabilitySystem> {
    c.require_valid()?;
    let n = c.object_count();
    let k = c.field();
    let mut offsets = vec![vec![0; n]; n];
    let mut unknowns = 0;
    for x in 0..n {
        for y in 0..n {
            offsets[x][y] = unknowns;
            unknowns += c.hom_dim(y, x) * c.hom_dim(x, y);
        }
    }

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..n {
        let dxx = c.hom_dim(x, x);
        let mut block = vec![vec![k.zero(); unknowns]; dxx];
        for y in 0..n {
            let cols = c.hom_dim(x, y);
            for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                for (j, &v) in c.hom_basis(x, y).iter().enumerate() {
                    let col = offsets[x][y] + i * cols + j;
                    for (r, s) in c.compose_basis(u, v).into_iter().enumerate() {
                        block[r][col] = s;
                    }
                }
            }
        }
        rows.extend(block);
        rhs.extend(c.identity(x).iter().cloned());
    }

    let items: Vec<(usize, usize)> = (0..c.basis_count()).flat_map(|f| (0..n).map(move |y| (f, y))).collect();
    let chunks = exec::map(&items, |&(f, y)| {
        let fb = c.basis(f);
        let (x, z) = (fb.source, fb.target);
        let p = c.postcomp_matrix(f, y);
        let q = c.precomp_matrix(f, y);
        let (dyz, dxy, dyx, dzy) = (c.hom_dim(y, z), c.hom_dim(x, y), c.hom_dim(y, x), c.hom_dim(z, y));
        let mut chunk = vec![vec![k.zero(); unknowns]; dyz * dxy];
        for a in 0..dyz {
            for b in 0..dxy {
                let row = &mut chunk[a * dxy + b];
                for i in 0..dyx {
                    let s = p.get(a, i);
                    if !s.is_zero() {
                        let col = offsets[x][y] + i * dxy + b;
                        row[col] = &row[col] + s;
                    }
                }
                for j in 0..dzy {
                    let s = q.get(b, j);
                    if !s.is_zero() {
                        let col = offsets[z][y] + a * dzy + j;
                        row[col] = &row[col] - s;
                    }
                }
            }
        }
        chunk
    });
    for chunk in chunks {
        rhs.extend(std::iter::repeat_n(k.zero(), chunk.len()));
        rows.extend(chunk);
    }

    let equations = rows.len();
    let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
    Ok(SeparabilitySystem {
        matrix: Matrix::from_entries(k, equations, unknowns, entries)?,
        rhs,
        offsets,
    })
}

/// Solves for a separability family. `None` means the system is
/// infeasible, i.e. the category is not separable.
pub fn solve_separability(c: &FinLinCat) -> Result<Option<SeparabilityFamily>> {
    separability_system(c)?.solve(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CResidual {
    pub x: String,
    pub residual: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DResidual {
    pub f: String,
    pub y: String,
    /// Coefficients of `f ▷ a_x^y − a_z^y ◁ f` in `hom(y, z) ⊗ hom(x, y)`.
    pub residual: Matrix,
}

/// Nonzero residuals only; empty lists mean the family is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub unit_checked: usize,
    pub naturality_checked: usize,
    pub unit_failures: Vec<CResidual>,
    pub naturality_failures: Vec<DResidual>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.unit_failures.is_empty() && self.naturality_failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "unit equations: {} checked, {} failing",
            self.unit_checked,
            self.unit_failures.len()
        )?;
        writeln!(
            f,
            "naturality equations: {} checked, {} failing",
            self.naturality_checked,
            self.naturality_failures.len()
        )?;
        for r in &self.unit_failures {
            let v: Vec<String> = r.residual.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  unit residual at {}: [{}]", r.x, v.join(", "))?;
        }
        for r in &self.naturality_failures {
            writeln!(
                f,
                "  naturality residual at f = {}, y = {}: [{}]",
                r.f,
                r.y,
                r.residual.to_text().join(", ")
            )?;
        }
        Ok(())
    }
}

/// Evaluates both families of equations term by term from the structure
/// constants, independently of the assembled system.
pub fn verify_family(c: &FinLinCat, fam: &SeparabilityFamily) -> Result<VerificationReport> {
    fam.check_shapes(c)?;
    let n = c.object_count();
    let k = c.field();
    let mut report = VerificationReport::default();

    for x in 0..n {
        let mut total = c.zero_vector(x, x);
        for y in 0..n {
            let a = fam.block(x, y);
            for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                for (j, &v) in c.hom_basis(x, y).iter().enumerate() {
                    let s = a.get(i, j);
                    if s.is_zero() {
                        continue;
                    }
                    for (t, w) in total.iter_mut().zip(c.compose_basis(u, v)) {
                        *t = &*t + &(s * &w);
                    }
                }
            }
        }
        let residual: Vec<Scalar> = total.iter().zip(c.identity(x)).map(|(t, e)| t - e).collect();
        report.unit_checked += 1;
        if residual.iter().any(|s| !s.is_zero()) {
            report.unit_failures.push(CResidual {
                x: c.object_name(x).into(),
                residual,
            });
        }
    }

    for (f, fb) in c.basis_elements().iter().enumerate() {
        let (x, z) = (fb.source, fb.target);
        for y in 0..n {
            let mut res = Matrix::zeros(k, c.hom_dim(y, z), c.hom_dim(x, y));
            // f ▷ a_x^y = Σ A_ij (f∘u_i) ⊗ v_j
            let a = fam.block(x, y);
            for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                let fu = c.compose_basis(f, u);
                for j in 0..c.hom_dim(x, y) {
                    let s = a.get(i, j);
                    if s.is_zero() {
                        continue;
                    }
                    for (r, w) in fu.iter().enumerate() {
                        if !w.is_zero() {
                            res.set(r, j, res.get(r, j) + &(s * w));
                        }
                    }
                }
            }
            // a_z^y ◁ f = Σ B_ij u_i ⊗ (v_j∘f)
            let b = fam.block(z, y);
            for (j, &v) in c.hom_basis(z, y).iter().enumerate() {
                let vf = c.compose_basis(v, f);
                for i in 0..c.hom_dim(y, z) {
                    let s = b.get(i, j);
                    if s.is_zero() {
                        continue;
                    }
                    for (r, w) in vf.iter().enumerate() {
                        if !w.is_zero() {
                            res.set(i, r, res.get(i, r) - &(s * w));
                        }
                    }
                }
            }
            report.naturality_checked += 1;
            if !res.is_zero() {
                report.naturality_failures.push(DResidual {
                    f: fb.label.clone(),
                    y: c.object_name(y).into(),
                    residual: res,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;
    use crate::lincat::{linearize, FiniteCatPresentation};

    fn lin(p: FiniteCatPresentation, k: FieldSpec) -> FinLinCat {
        linearize(&p, k).unwrap()
    }

    #[test]
    fn z2_over_q_is_separable() {
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), FieldSpec::Rationals);
        let fam = solve_separability(&c).unwrap().expect("feasible");
        assert!(verify_family(&c, &fam).unwrap().ok());
    }

    #[test]
    fn z2_over_f2_and_a2_are_not() {
        let f2 = FieldSpec::prime(2).unwrap();
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), f2);
        assert!(solve_separability(&c).unwrap().is_none());
        let c = lin(FiniteCatPresentation::chain(2).unwrap(), FieldSpec::Rationals);
        assert!(solve_separability(&c).unwrap().is_none());
    }

    #[test]
    fn half_sum_passes_and_unit_only_fails_naturality() {
        let q = FieldSpec::Rationals;
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), q);
        let half = q.parse_scalar("1/2").unwrap();
        let fam = SeparabilityFamily::from_blocks(&c, vec![vec![Matrix::identity(q, 2).scale(&half)]]).unwrap();
        assert!(verify_family(&c, &fam).unwrap().ok());

        let mut e = Matrix::zeros(q, 2, 2);
        e.set(0, 0, q.one());
        let fam = SeparabilityFamily::from_blocks(&c, vec![vec![e]]).unwrap();
        let report = verify_family(&c, &fam).unwrap();
        assert!(report.unit_failures.is_empty());
        assert_eq!(report.naturality_failures.len(), 1);
        assert_eq!(report.naturality_failures[0].f, "g");
        // g⊗e − e⊗g
        assert_eq!(
            report.naturality_failures[0].residual,
            Matrix::from_i64(q, &[&[0, -1], &[1, 0]])
        );
    }

    #[test]
    fn discrete_identity_family() {
        let c = lin(FiniteCatPresentation::discrete(2).unwrap(), FieldSpec::Rationals);
        let mut fam = SeparabilityFamily::zero(&c);
        for x in 0..2 {
            fam.set_block(x, x, Matrix::identity(c.field(), 1));
        }
        assert!(verify_family(&c, &fam).unwrap().ok());
    }

    #[test]
    fn wrong_shape_is_an_error() {
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), FieldSpec::Rationals);
        assert!(SeparabilityFamily::from_blocks(&c, vec![vec![Matrix::identity(c.field(), 1)]]).is_err());
    }

    #[test]
    fn kernel_directions_preserve_validity() {
        let c = lin(FiniteCatPresentation::cyclic_group(3).unwrap(), FieldSpec::Rationals);
        let sys = separability_system(&c).unwrap();
        let base = sys.solve(&c).unwrap().unwrap();
        let v0 = sys.family_to_vector(&base);
        for h in sys.homogeneous_basis(&c) {
            let v: Vec<Scalar> = v0.iter().zip(sys.family_to_vector(&h)).map(|(a, b)| a + &b).collect();
            assert!(verify_family(&c, &sys.family_from_vector(&c, &v)).unwrap().ok());
        }
    }

    #[test]
    fn sequential_and_parallel_assembly_agree() {
        let c = lin(
            FiniteCatPresentation::connected_groupoid(2, &[2]).unwrap(),
            FieldSpec::Rationals,
        );
        let a = separability_system(&c).unwrap();
        let b = exec::sequential(|| separability_system(&c).unwrap());
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.rhs, b.rhs);
    }
}
