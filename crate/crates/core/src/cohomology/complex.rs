use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cmod::Bimodule;
use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix, Scalar};
use crate::exec;
use crate::lincat::FinLinCat;

pub const DEFAULT_BUDGET: usize = 20_000;
pub const DEFAULT_MAX_DEGREE: usize = 2;

/// One nonzero block of `C^n`: the cochains on chains `x_0 ← x_1 ← … ← x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub objects: Vec<usize>,
    pub offset: usize,
    /// `dim hom(x_i, x_{i-1})` for `i = 1..=n`.
    pub tensor_dims: Vec<usize>,
    pub tensor_size: usize,
    /// `dim M[x_0][x_n]`.
    pub m_dim: usize,
}

impl Block {
    pub fn size(&self) -> usize {
        self.tensor_size * self.m_dim
    }

    /// Row-major position of a tensor of basis elements, `f_1` outermost.
    pub fn tensor_index(&self, locals: &[usize]) -> usize {
        locals.iter().zip(&self.tensor_dims).fold(0, |acc, (l, d)| acc * d + l)
    }

    pub fn tensor_locals(&self, mut t: usize) -> Vec<usize> {
        let mut out = vec![0; self.tensor_dims.len()];
        for (slot, d) in out.iter_mut().zip(&self.tensor_dims).rev() {
            *slot = t % d;
            t /= d;
        }
        out
    }
}

/// Basis of `C^n`: blocks in lexicographic order of their object tuples,
/// then tensor index, then the basis of `M[x_0][x_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainSpace {
    pub blocks: Vec<Block>,
    pub dim: usize,
    index: HashMap<Vec<usize>, usize>,
}

impl CochainSpace {
    fn build(c: &FinLinCat, m: &Bimodule, n: usize) -> Self {
        let objs = c.object_count();
        let mut blocks = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        let mut tuple = vec![0; n + 1];
        if objs == 0 {
            return CochainSpace { blocks, dim: 0, index };
        }
        loop {
            let tensor_dims: Vec<usize> = (1..=n).map(|i| c.hom_dim(tuple[i], tuple[i - 1])).collect();
            let tensor_size: usize = tensor_dims.iter().product();
            let m_dim = m.dim(tuple[0], tuple[n]);
            if tensor_size * m_dim > 0 {
                index.insert(tuple.clone(), blocks.len());
                blocks.push(Block {
                    objects: tuple.clone(),
                    offset,
                    tensor_dims,
                    tensor_size,
                    m_dim,
                });
                offset += tensor_size * m_dim;
            }
            // next tuple, last coordinate fastest
            let mut i = n + 1;
            loop {
                if i == 0 {
                    return CochainSpace {
                        blocks,
                        dim: offset,
                        index,
                    };
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < objs {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }

    pub fn block(&self, objects: &[usize]) -> Option<&Block> {
        self.index.get(objects).map(|&i| &self.blocks[i])
    }
}

/// The bar cochain complex `C^0 → C^1 → … → C^{N+1}` of a bimodule, with
/// differentials `d^0, …, d^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub field: FieldSpec,
    pub max_degree: usize,
    pub spaces: Vec<CochainSpace>,
    pub differentials: Vec<Matrix>,
}

impl CochainComplex {
    pub fn dim(&self, n: usize) -> usize {
        self.spaces[n].dim
    }

    pub fn d(&self, n: usize) -> &Matrix {
        &self.differentials[n]
    }

    /// `d^{n+1} d^n = 0` for every `n < max_degree`.
    pub fn check_square_zero(&self) -> Result<()> {
        for n in 0..self.max_degree {
            if !self.differentials[n + 1].mul(&self.differentials[n])?.is_zero() {
                return Err(Error::CrossCheck(format!("d^{} d^{} is not zero", n + 1, n)));
            }
        }
        Ok(())
    }
}

/// `dim C^n` for `n = 0..=top`, counted without enumerating anything and
/// saturating on overflow.
pub fn cochain_dims(c: &FinLinCat, m: &Bimodule, top: usize) -> Vec<usize> {
    let objs = c.object_count();
    // chains[x0][y] = number of basis tensors on chains from y up to x0
    let mut chains: Vec<Vec<u128>> = (0..objs)
        .map(|x| (0..objs).map(|y| u128::from(x == y)).collect())
        .collect();
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        if n > 0 {
            chains = (0..objs)
                .map(|x0| {
                    (0..objs)
                        .map(|y| {
                            (0..objs).fold(0u128, |acc, x1| {
                                acc.saturating_add((c.hom_dim(x1, x0) as u128).saturating_mul(chains[x1][y]))
                            })
                        })
                        .collect()
                })
                .collect();
        }
        let mut total = 0u128;
        for x0 in 0..objs {
            for y in 0..objs {
                total = total.saturating_add(chains[x0][y].saturating_mul(m.dim(x0, y) as u128));
            }
        }
        out.push(usize::try_from(total).unwrap_or(usize::MAX));
    }
    out
}

/// Builds the complex up to `C^{max_degree+1}`. Fails with
/// [`Error::BudgetExceeded`] before allocating if some `C^n` has more than
/// `budget` basis vectors. Rows of each differential are assembled in
/// parallel, one chunk per block of the target space, and `d∘d = 0` is
/// checked before returning.
pub fn build_hm_complex(c: &FinLinCat, m: &Bimodule, max_degree: usize, budget: usize) -> Result<CochainComplex> {
    if max_degree == 0 {
        return Err(Error::Format("max degree must be at least 1".into()));
    }
    m.require_valid(c)?;
    for (n, &needed) in cochain_dims(c, m, max_degree + 1).iter().enumerate() {
        if needed > budget {
            return Err(Error::BudgetExceeded {
                degree: n,
                needed,
                budget,
            });
        }
    }
    let spaces: Vec<CochainSpace> = (0..=max_degree + 1).map(|n| CochainSpace::build(c, m, n)).collect();
    let differentials: Vec<Matrix> = (0..=max_degree)
        .map(|n| differential(c, m, &spaces[n], &spaces[n + 1], n))
        .collect();
    let complex = CochainComplex {
        field: c.field(),
        max_degree,
        spaces,
        differentials,
    };
    complex.check_square_zero()?;
    Ok(complex)
}

fn differential(c: &FinLinCat, m: &Bimodule, src: &CochainSpace, tgt: &CochainSpace, n: usize) -> Matrix {
    let k = c.field();
    let sign = |i: usize| if i.is_multiple_of(2) { k.one() } else { -&k.one() };
    let chunks: Vec<Vec<(usize, usize, Scalar)>> = exec::map(&tgt.blocks, |b| {
        let mut out = Vec::new();
        let x = &b.objects;
        for t in 0..b.tensor_size {
            let locals = b.tensor_locals(t);
            let f: Vec<usize> = (1..=n + 1)
                .map(|i| c.hom_basis(x[i], x[i - 1])[locals[i - 1]])
                .collect();
            let row0 = b.offset + t * b.m_dim;

            // f_1 ▷ φ(f_2, …, f_{n+1})
            if let Some(s) = src.block(&x[1..]) {
                let col0 = s.offset + s.tensor_index(&locals[1..]) * s.m_dim;
                let l = m.left(f[0], x[n + 1]);
                for r in 0..l.rows() {
                    for q in 0..l.cols() {
                        let v = l.get(r, q);
                        if !v.is_zero() {
                            out.push((row0 + r, col0 + q, v.clone()));
                        }
                    }
                }
            }

            // (−1)^i φ(…, f_i ∘ f_{i+1}, …)
            for i in 1..=n {
                let mut objects = x.clone();
                objects.remove(i);
                let Some(s) = src.block(&objects) else { continue };
                let h = c.compose_basis(f[i - 1], f[i]);
                for (hk, coeff) in h.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut ls = locals.clone();
                    ls.remove(i);
                    ls[i - 1] = hk;
                    let col0 = s.offset + s.tensor_index(&ls) * s.m_dim;
                    let v = &sign(i) * coeff;
                    for r in 0..b.m_dim {
                        out.push((row0 + r, col0 + r, v.clone()));
                    }
                }
            }

            // (−1)^{n+1} φ(f_1, …, f_n) ◁ f_{n+1}
            if let Some(s) = src.block(&x[..=n]) {
                let col0 = s.offset + s.tensor_index(&locals[..n]) * s.m_dim;
                let rm = m.right(f[n], x[0]);
                let sg = sign(n + 1);
                for r in 0..rm.rows() {
                    for q in 0..rm.cols() {
                        let v = rm.get(r, q);
                        if !v.is_zero() {
                            out.push((row0 + r, col0 + q, &sg * v));
                        }
                    }
                }
            }
        }
        out
    });
    let mut d = Matrix::zeros(k, tgt.dim, src.dim);
    for (r, col, v) in chunks.into_iter().flatten() {
        let sum = d.get(r, col) + &v;
        d.set(r, col, sum);
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub n: usize,
    pub dim_cochain: usize,
    /// Rank of the outgoing differential `d^n`.
    pub rank_d: usize,
    pub dim_ker: usize,
    /// Rank of the incoming differential `d^{n-1}`.
    pub rank_incoming: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub degrees: Vec<DegreeReport>,
    pub budget_exceeded: bool,
}

impl CohomologyResult {
    pub fn dim_h(&self, n: usize) -> usize {
        self.degrees[n].dim_h
    }

    pub fn exceeded() -> Self {
        CohomologyResult {
            degrees: Vec::new(),
            budget_exceeded: true,
        }
    }
}

/// `dim H^n = dim ker d^n − rank d^{n−1}` for `n = 0..=max_degree`.
pub fn cohomology_dims(complex: &CochainComplex) -> CohomologyResult {
    let ranks = exec::map(&complex.differentials, Matrix::rank);
    let degrees = (0..=complex.max_degree)
        .map(|n| {
            let dim = complex.dim(n);
            let incoming = if n == 0 { 0 } else { ranks[n - 1] };
            DegreeReport {
                n,
                dim_cochain: dim,
                rank_d: ranks[n],
                dim_ker: dim - ranks[n],
                rank_incoming: incoming,
                dim_h: dim - ranks[n] - incoming,
            }
        })
        .collect();
    CohomologyResult {
        degrees,
        budget_exceeded: false,
    }
}

/// `dim {(t_x) ∈ ∏_x M[x][x] : f ▷ t_x = t_z ◁ f for every basis f: x → z}`,
/// computed directly from the action matrices.
pub fn invariants_dim(c: &FinLinCat, m: &Bimodule) -> usize {
    let n = c.object_count();
    let k = c.field();
    let mut offs = Vec::with_capacity(n);
    let mut total = 0;
    for x in 0..n {
        offs.push(total);
        total += m.dim(x, x);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (f, fb) in c.basis_elements().iter().enumerate() {
        let (x, z) = (fb.source, fb.target);
        let l = m.left(f, x);
        let r = m.right(f, z);
        for i in 0..m.dim(z, x) {
            let mut row = vec![k.zero(); total];
            for j in 0..m.dim(x, x) {
                row[offs[x] + j] = &row[offs[x] + j] + l.get(i, j);
            }
            for j in 0..m.dim(z, z) {
                row[offs[z] + j] = &row[offs[z] + j] - r.get(i, j);
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return total;
    }
    let count = rows.len();
    let a = Matrix::from_entries(k, count, total, rows.into_iter().flatten().collect()).expect("rectangular");
    total - a.rank()
}

/// Builds the complex and computes its cohomology. `H^0` is cross-checked
/// against [`invariants_dim`].
pub fn hm_cohomology(c: &FinLinCat, m: &Bimodule, max_degree: usize, budget: usize) -> Result<CohomologyResult> {
    let complex = build_hm_complex(c, m, max_degree, budget)?;
    let result = cohomology_dims(&complex);
    let direct = invariants_dim(c, m);
    if result.dim_h(0) != direct {
        return Err(Error::CrossCheck(format!(
            "H^0 from the complex is {}, invariants have dimension {direct}",
            result.dim_h(0)
        )));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmod::{canonical_bimodule, kernel_comp_sequence};
    use crate::lincat::{linearize, FiniteCatPresentation};

    fn lin(p: FiniteCatPresentation, k: FieldSpec) -> FinLinCat {
        linearize(&p, k).unwrap()
    }

    #[test]
    fn trivial_category_has_one_dimensional_cochains() {
        let c = lin(FiniteCatPresentation::cyclic_group(1).unwrap(), FieldSpec::Rationals);
        let m = canonical_bimodule(&c);
        let cx = build_hm_complex(&c, &m, 3, DEFAULT_BUDGET).unwrap();
        assert!((0..=4).all(|n| cx.dim(n) == 1));
        let h = cohomology_dims(&cx);
        assert_eq!(h.degrees.iter().map(|d| d.dim_h).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn z2_dimensions_and_cohomology() {
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), FieldSpec::Rationals);
        let m = canonical_bimodule(&c);
        let cx = build_hm_complex(&c, &m, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!((cx.dim(0), cx.dim(1), cx.dim(2)), (2, 4, 8));
        let h = hm_cohomology(&c, &m, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!((h.dim_h(0), h.dim_h(1), h.dim_h(2)), (2, 0, 0));
    }

    #[test]
    fn z2_over_f2_has_first_cohomology() {
        let c = lin(
            FiniteCatPresentation::cyclic_group(2).unwrap(),
            FieldSpec::prime(2).unwrap(),
        );
        let h = hm_cohomology(&c, &canonical_bimodule(&c), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!((h.dim_h(0), h.dim_h(1)), (2, 2));
    }

    #[test]
    fn a2_and_discrete_counts() {
        let c = lin(FiniteCatPresentation::chain(2).unwrap(), FieldSpec::Rationals);
        let cx = build_hm_complex(&c, &canonical_bimodule(&c), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(cx.dim(0), 2);
        for k in [FieldSpec::Rationals, FieldSpec::prime(3).unwrap()] {
            let c = lin(FiniteCatPresentation::discrete(2).unwrap(), k);
            let h = hm_cohomology(&c, &canonical_bimodule(&c), 2, DEFAULT_BUDGET).unwrap();
            assert_eq!((h.dim_h(0), h.dim_h(1), h.dim_h(2)), (2, 0, 0));
        }
    }

    #[test]
    fn counted_dimensions_match_enumeration() {
        let c = lin(FiniteCatPresentation::chain(3).unwrap(), FieldSpec::Rationals);
        let ses = kernel_comp_sequence(&c).unwrap();
        for m in [&ses.m, &ses.n, &ses.p] {
            let cx = build_hm_complex(&c, m, 2, DEFAULT_BUDGET).unwrap();
            let counted = cochain_dims(&c, m, 3);
            assert_eq!(counted, (0..=3).map(|n| cx.dim(n)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = lin(FiniteCatPresentation::cyclic_group(2).unwrap(), FieldSpec::Rationals);
        let err = build_hm_complex(&c, &canonical_bimodule(&c), 2, 10).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                degree: 3,
                needed: 16,
                budget: 10
            }
        ));
    }

    #[test]
    fn sequential_and_parallel_differentials_agree() {
        let c = lin(
            FiniteCatPresentation::connected_groupoid(2, &[2]).unwrap(),
            FieldSpec::Rationals,
        );
        let m = canonical_bimodule(&c);
        let a = build_hm_complex(&c, &m, 2, DEFAULT_BUDGET).unwrap();
        let b = exec::sequential(|| build_hm_complex(&c, &m, 2, DEFAULT_BUDGET).unwrap());
        assert_eq!(a.differentials, b.differentials);
    }
}
