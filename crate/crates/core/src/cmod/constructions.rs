use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::lincat::FinLinCat;

use super::{Bimodule, BimoduleMap, LeftModule, ShortExactSeq};

/// The category as a bimodule over itself: `M[x][y] = hom(y, x)`, left
/// action by post-composition, right action by pre-composition.
pub fn canonical_bimodule(c: &FinLinCat) -> Bimodule {
    let n = c.object_count();
    let dims = (0..n).map(|x| (0..n).map(|y| c.hom_dim(y, x)).collect()).collect();
    Bimodule::from_actions(c, dims, |f, y| c.postcomp_matrix(f, y), |g, x| c.precomp_matrix(g, x))
}

/// The representable bimodule `P(a, b)[x][y] = hom(a, x) ⊗ hom(y, b)`, with
/// basis `u ⊗ v` ordered row-major (u outer).
pub fn representable(c: &FinLinCat, a: usize, b: usize) -> Bimodule {
    let k = c.field();
    let n = c.object_count();
    let dims = (0..n)
        .map(|x| (0..n).map(|y| c.hom_dim(a, x) * c.hom_dim(y, b)).collect())
        .collect();
    Bimodule::from_actions(
        c,
        dims,
        |f, y| c.postcomp_matrix(f, a).kron(&Matrix::identity(k, c.hom_dim(y, b))),
        |g, x| Matrix::identity(k, c.hom_dim(a, x)).kron(&c.precomp_matrix(g, b)),
    )
}

/// Block direct sum, summands in the given order.
pub fn direct_sum(c: &FinLinCat, parts: &[Bimodule]) -> Bimodule {
    let n = c.object_count();
    let k = c.field();
    let dims: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| parts.iter().map(|p| p.dim(x, y)).sum()).collect())
        .collect();
    let block_diag = |blocks: Vec<&Matrix>| {
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut m = Matrix::zeros(k, rows, cols);
        let (mut r, mut s) = (0, 0);
        for b in blocks {
            m.set_block(r, s, b);
            r += b.rows();
            s += b.cols();
        }
        m
    };
    Bimodule::from_actions(
        c,
        dims,
        |f, y| block_diag(parts.iter().map(|p| p.left(f, y)).collect()),
        |g, x| block_diag(parts.iter().map(|p| p.right(g, x)).collect()),
    )
}

/// `C ⊗ C` with components `⊕_z hom(z, x) ⊗ hom(y, z)` (z in object
/// order, then row-major over the factors), together with the composition
/// map `u ⊗ v ↦ u∘v` onto the regular bimodule.
pub fn tensor_square(c: &FinLinCat) -> (Bimodule, BimoduleMap) {
    let n = c.object_count();
    let parts: Vec<Bimodule> = (0..n).map(|z| representable(c, z, z)).collect();
    let t = direct_sum(c, &parts);
    let comps = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let mut columns = Vec::new();
                    for z in 0..n {
                        for &u in c.hom_basis(z, x) {
                            for &v in c.hom_basis(y, z) {
                                columns.push(c.compose_basis(u, v));
                            }
                        }
                    }
                    Matrix::from_columns(c.field(), c.hom_dim(y, x), &columns)
                })
                .collect()
        })
        .collect();
    (t, BimoduleMap::new(comps))
}

/// Restricts actions to the subspaces spanned by the columns of
/// `basis[x][y]`, which must be invariant.
fn restrict(c: &FinLinCat, m: &Bimodule, basis: &[Vec<Matrix>]) -> Result<Bimodule> {
    let n = c.object_count();
    let dims = (0..n).map(|x| (0..n).map(|y| basis[x][y].cols()).collect()).collect();
    let mut out = Bimodule::from_actions(
        c,
        dims,
        |_, _| Matrix::zeros(c.field(), 0, 0),
        |_, _| Matrix::zeros(c.field(), 0, 0),
    );
    for (f, b) in c.basis_elements().iter().enumerate() {
        for y in 0..n {
            let image = m.left(f, y).mul(&basis[b.source][y])?;
            let action = basis[b.target][y]
                .solve(&image)?
                .ok_or_else(|| Error::InvalidModule("subspace is not closed under the left action".into()))?;
            out.set_left(f, y, action);
        }
        for x in 0..n {
            let image = m.right(f, x).mul(&basis[x][b.target])?;
            let action = basis[x][b.source]
                .solve(&image)?
                .ok_or_else(|| Error::InvalidModule("subspace is not closed under the right action".into()))?;
            out.set_right(f, x, action);
        }
    }
    Ok(out)
}

/// Componentwise kernel of `map: source → _` with the induced actions and
/// the inclusion into `source`.
pub fn kernel_of(c: &FinLinCat, source: &Bimodule, map: &BimoduleMap) -> Result<(Bimodule, BimoduleMap)> {
    let n = c.object_count();
    let basis: Vec<Vec<Matrix>> = (0..n)
        .map(|x| (0..n).map(|y| map.component(x, y).kernel_basis()).collect())
        .collect();
    let k = restrict(c, source, &basis)?;
    Ok((k, BimoduleMap::new(basis)))
}

/// Componentwise image of `map: source → target`. Returns the image, the
/// corestriction `source → image` and the inclusion `image → target`. The
/// image basis is the set of pivot columns of each component.
pub fn image_of(c: &FinLinCat, target: &Bimodule, map: &BimoduleMap) -> Result<(Bimodule, BimoduleMap, BimoduleMap)> {
    let n = c.object_count();
    let basis: Vec<Vec<Matrix>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let m = map.component(x, y);
                    m.submatrix_cols(&m.rref().pivot_cols)
                })
                .collect()
        })
        .collect();
    let im = restrict(c, target, &basis)?;
    let mut coords = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let q = basis[x][y]
                .solve(map.component(x, y))?
                .expect("columns lie in their own span");
            row.push(q);
        }
        coords.push(row);
    }
    Ok((im, BimoduleMap::new(coords), BimoduleMap::new(basis)))
}

/// The bimodule map `P(a, b) → target` sending `1_a ⊗ 1_b` to `element`
/// (a vector in `target[a][b]`): `u ⊗ v ↦ u ▷ element ◁ v`.
pub fn yoneda_map(c: &FinLinCat, a: usize, b: usize, target: &Bimodule, element: &[Scalar]) -> BimoduleMap {
    let n = c.object_count();
    let k = c.field();
    let e = Matrix::column_vector(k, element.to_vec());
    let comps = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let mut columns = Vec::new();
                    for &u in c.hom_basis(a, x) {
                        for &v in c.hom_basis(y, b) {
                            // element ◁ v lands in target[a][y]
                            let ev = target.right(v, a).mul(&e).expect("shapes");
                            let uev = target.left(u, y).mul(&ev).expect("shapes");
                            columns.push(uev.column(0));
                        }
                    }
                    Matrix::from_columns(k, target.dim(x, y), &columns)
                })
                .collect()
        })
        .collect();
    BimoduleMap::new(comps)
}

/// `0 → ker(comp) → C ⊗ C → C → 0`.
pub fn kernel_comp_sequence(c: &FinLinCat) -> Result<ShortExactSeq> {
    let (t, comp) = tensor_square(c);
    let (k, incl) = kernel_of(c, &t, &comp)?;
    Ok(ShortExactSeq {
        m: k,
        n: t,
        p: canonical_bimodule(c),
        i: incl,
        q: comp,
    })
}

// ---- left modules ---------------------------------------------------------

/// The representable left module `P(a)[x] = hom(a, x)`.
pub fn representable_left(c: &FinLinCat, a: usize) -> LeftModule {
    let n = c.object_count();
    LeftModule::from_action(c, (0..n).map(|x| c.hom_dim(a, x)).collect(), |f| {
        c.postcomp_matrix(f, a)
    })
}

/// `⊕_a P(a)`: the category acting on itself by post-composition.
pub fn regular_left_module(c: &FinLinCat) -> LeftModule {
    let parts: Vec<LeftModule> = (0..c.object_count()).map(|a| representable_left(c, a)).collect();
    left_direct_sum(c, &parts)
}

pub(crate) fn left_direct_sum(c: &FinLinCat, parts: &[LeftModule]) -> LeftModule {
    let n = c.object_count();
    let k = c.field();
    let dims = (0..n).map(|x| parts.iter().map(|p| p.dim(x)).sum()).collect();
    LeftModule::from_action(c, dims, |f| {
        let blocks: Vec<&Matrix> = parts.iter().map(|p| p.action(f)).collect();
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut m = Matrix::zeros(k, rows, cols);
        let (mut r, mut s) = (0, 0);
        for b in blocks {
            m.set_block(r, s, b);
            r += b.rows();
            s += b.cols();
        }
        m
    })
}

/// One-dimensional module at every object with every basis morphism acting
/// by `signs[f]`. Only valid when the structure constants allow it.
fn scalar_module(c: &FinLinCat, signs: &[Scalar]) -> LeftModule {
    let n = c.object_count();
    LeftModule::from_action(c, vec![1; n], |f| {
        Matrix::column_vector(c.field(), vec![signs[f].clone()])
    })
}

/// All basis morphisms act by `1` on a one-dimensional space per object,
/// if that is a module.
pub fn trivial_left_module(c: &FinLinCat) -> Option<LeftModule> {
    let m = scalar_module(c, &vec![c.field().one(); c.basis_count()]);
    m.validate(c).ok().then_some(m)
}

/// A one-dimensional module per object on which every basis morphism acts
/// by `±1`, not all `+1`: the sign representation of a group with a
/// subgroup of index two. Found by exhaustive search over sign patterns;
/// `None` when there is none, in characteristic 2, or when the basis is
/// larger than 16.
pub fn sign_module(c: &FinLinCat) -> Option<LeftModule> {
    let k = c.field();
    let nb = c.basis_count();
    if k.characteristic() == 2 || nb > 16 || nb == 0 {
        return None;
    }
    let (one, minus) = (k.one(), k.from_i64(-1));
    (1u32..(1 << nb)).find_map(|mask| {
        let signs: Vec<Scalar> = (0..nb)
            .map(|f| if mask >> f & 1 == 1 { minus.clone() } else { one.clone() })
            .collect();
        let m = scalar_module(c, &signs);
        m.validate(c).ok().then_some(m)
    })
}
