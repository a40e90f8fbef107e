use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactalg::{Matrix, Scalar};
use crate::lincat::FinLinCat;

use super::constructions::{left_direct_sum, representable_left};
use super::{direct_sum, image_of, kernel_of, representable, Bimodule, BimoduleMap, LeftModule, ShortExactSeq};

const ATTEMPTS: usize = 256;

fn small_scalar(c: &FinLinCat, rng: &mut ChaCha8Rng) -> Scalar {
    c.field().from_i64(rng.gen_range(-1..=1))
}

/// A random bimodule map `⊕ P(a_i, b_i) → target`: the summand `P(a, b)`
/// is sent through the Yoneda map of a random element of `target[a][b]`.
fn random_map_from_representables(
    c: &FinLinCat,
    sources: &[(usize, usize)],
    target: &Bimodule,
    rng: &mut ChaCha8Rng,
) -> BimoduleMap {
    let n = c.object_count();
    let k = c.field();
    let pieces: Vec<BimoduleMap> = sources
        .iter()
        .map(|&(a, b)| {
            let element: Vec<Scalar> = (0..target.dim(a, b)).map(|_| small_scalar(c, rng)).collect();
            super::yoneda_map(c, a, b, target, &element)
        })
        .collect();
    let comps = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let cols: usize = pieces.iter().map(|p| p.component(x, y).cols()).sum();
                    let mut m = Matrix::zeros(k, target.dim(x, y), cols);
                    let mut at = 0;
                    for p in &pieces {
                        m.set_block(0, at, p.component(x, y));
                        at += p.component(x, y).cols();
                    }
                    m
                })
                .collect()
        })
        .collect();
    BimoduleMap::new(comps)
}

fn random_pairs(c: &FinLinCat, rng: &mut ChaCha8Rng, max: usize) -> Vec<(usize, usize)> {
    let n = c.object_count();
    let count = rng.gen_range(1..=max);
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

/// A random valid bimodule whose components have dimension at most
/// `dim_cap`, deterministic in `seed`.
///
/// Candidates are kernels of random maps between direct sums of
/// representables; such kernels satisfy the bimodule axioms by
/// construction. The first nonzero candidate within the cap is returned.
/// If none is found the zero bimodule is returned.
pub fn random_bimodule(c: &FinLinCat, seed: u64, dim_cap: usize) -> Result<Bimodule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.object_count();
    if n == 0 {
        return Ok(Bimodule::zero(c));
    }
    for _ in 0..ATTEMPTS {
        let src_pairs = random_pairs(c, &mut rng, 2);
        let tgt_pairs = if rng.gen_bool(0.15) {
            Vec::new()
        } else {
            random_pairs(c, &mut rng, 2)
        };
        let source = direct_sum(
            c,
            &src_pairs
                .iter()
                .map(|&(a, b)| representable(c, a, b))
                .collect::<Vec<_>>(),
        );
        let target = direct_sum(
            c,
            &tgt_pairs
                .iter()
                .map(|&(a, b)| representable(c, a, b))
                .collect::<Vec<_>>(),
        );
        if source.total_dim() == 0 {
            continue;
        }
        let map = random_map_from_representables(c, &src_pairs, &target, &mut rng);
        let (k, _) = kernel_of(c, &source, &map)?;
        if k.total_dim() > 0 && k.max_component_dim() <= dim_cap {
            return Ok(k);
        }
    }
    Ok(Bimodule::zero(c))
}

/// A random short exact sequence `0 → ker φ → N → im φ → 0` for a random
/// map `φ` out of a sum of representables `N`, with every component of `N`
/// of dimension at most `dim_cap` when possible.
pub fn random_short_exact_sequence(c: &FinLinCat, seed: u64, dim_cap: usize) -> Result<ShortExactSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ShortExactSeq> = None;
    for _ in 0..ATTEMPTS {
        let src_pairs = random_pairs(c, &mut rng, 2);
        let tgt_pairs = random_pairs(c, &mut rng, 2);
        let source = direct_sum(
            c,
            &src_pairs
                .iter()
                .map(|&(a, b)| representable(c, a, b))
                .collect::<Vec<_>>(),
        );
        let target = direct_sum(
            c,
            &tgt_pairs
                .iter()
                .map(|&(a, b)| representable(c, a, b))
                .collect::<Vec<_>>(),
        );
        let map = random_map_from_representables(c, &src_pairs, &target, &mut rng);
        if source.max_component_dim() > dim_cap {
            continue;
        }
        let (k, incl) = kernel_of(c, &source, &map)?;
        let (im, q, _) = image_of(c, &target, &map)?;
        let ses = ShortExactSeq {
            m: k,
            n: source,
            p: im,
            i: incl,
            q,
        };
        let nontrivial = ses.m.total_dim() > 0 && ses.p.total_dim() > 0;
        if nontrivial {
            return Ok(ses);
        }
        if best.is_none() {
            best = Some(ses);
        }
    }
    Ok(best.unwrap_or_else(|| {
        let z = Bimodule::zero(c);
        ShortExactSeq {
            m: z.clone(),
            n: z.clone(),
            p: z.clone(),
            i: BimoduleMap::identity(&z),
            q: BimoduleMap::identity(&z),
        }
    }))
}

/// A random valid left module with every `M[x]` of dimension at most
/// `dim_cap`: the kernel of a random map between sums of representable
/// left modules `P(a)[x] = hom(a, x)`. Falls back to a single
/// representable, then to zero.
pub fn random_left_module(c: &FinLinCat, seed: u64, dim_cap: usize) -> Result<LeftModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.object_count();
    let k = c.field();
    if n == 0 {
        return Ok(LeftModule::from_action(c, vec![], |_| Matrix::zeros(k, 0, 0)));
    }
    for _ in 0..ATTEMPTS {
        let src: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n)).collect();
        let tgt: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..n)).collect();
        let source = left_direct_sum(c, &src.iter().map(|&a| representable_left(c, a)).collect::<Vec<_>>());
        let target = left_direct_sum(c, &tgt.iter().map(|&a| representable_left(c, a)).collect::<Vec<_>>());
        // Yoneda: P(a) → target is u ↦ u ▷ element for element ∈ target[a]
        let elements: Vec<Vec<Scalar>> = src
            .iter()
            .map(|&a| (0..target.dim(a)).map(|_| small_scalar(c, &mut rng)).collect())
            .collect();
        let maps: Vec<Matrix> = (0..n)
            .map(|x| {
                let mut columns = Vec::new();
                for (&a, e) in src.iter().zip(&elements) {
                    for &u in c.hom_basis(a, x) {
                        columns.push(target.action(u).mul_vec(e));
                    }
                }
                Matrix::from_columns(k, target.dim(x), &columns)
            })
            .collect();
        let basis: Vec<Matrix> = maps.iter().map(Matrix::kernel_basis).collect();
        let dims: Vec<usize> = basis.iter().map(Matrix::cols).collect();
        if dims.iter().sum::<usize>() == 0 || dims.iter().any(|&d| d > dim_cap) {
            continue;
        }
        let mut actions = Vec::with_capacity(c.basis_count());
        for (f, b) in c.basis_elements().iter().enumerate() {
            let image = source.action(f).mul(&basis[b.source])?;
            let a = basis[b.target]
                .solve(&image)?
                .expect("kernels of module maps are submodules");
            actions.push(a);
        }
        let mut it = actions.into_iter();
        return Ok(LeftModule::from_action(c, dims, |_| {
            it.next().expect("one per basis element")
        }));
    }
    Ok(LeftModule::from_action(c, vec![0; n], |_| Matrix::zeros(k, 0, 0)))
}
