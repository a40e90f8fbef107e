use serde::{Deserialize, Serialize};

use crate::cmod::{BimoduleMap, ShortExactSeq};
use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::lincat::FinLinCat;

use super::complex::{build_hm_complex, CochainComplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesPosition {
    pub position: String,
    pub degree: usize,
    pub incoming_rank: usize,
    pub kernel_dim: usize,
    /// The composite of the incoming and outgoing maps vanishes.
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesDegree {
    pub n: usize,
    pub dim_h_m: usize,
    pub dim_h_n: usize,
    pub dim_h_p: usize,
    pub rank_i: usize,
    pub rank_q: usize,
    /// Rank of the connecting map `H^n(P) → H^{n+1}(M)`.
    pub rank_connecting: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesReport {
    pub max_degree: usize,
    pub degrees: Vec<LesDegree>,
    pub positions: Vec<LesPosition>,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.positions.iter().all(|p| p.exact)
    }
}

/// `I ⊗ φ_{x_0, x_n}` on every block of `C^n`.
pub fn induced_cochain_map(src: &CochainComplex, tgt: &CochainComplex, map: &BimoduleMap, n: usize) -> Matrix {
    let (s, t) = (&src.spaces[n], &tgt.spaces[n]);
    let mut out = Matrix::zeros(src.field, t.dim, s.dim);
    for b in &s.blocks {
        let Some(tb) = t.block(&b.objects) else { continue };
        let phi = map.component(b.objects[0], b.objects[n]);
        for tensor in 0..b.tensor_size {
            out.set_block(tb.offset + tensor * tb.m_dim, b.offset + tensor * b.m_dim, phi);
        }
    }
    out
}

/// Everything needed about `H^n` of one complex: cocycle basis and the
/// coboundary spanning set.
struct Cohom {
    z: Vec<Matrix>,
    b: Vec<Matrix>,
}

impl Cohom {
    fn new(cx: &CochainComplex) -> Self {
        let top = cx.max_degree;
        let z = (0..=top).map(|n| cx.d(n).kernel_basis()).collect();
        // b[n] spans im d^{n-1} ⊂ C^n, for n = 0..=top+1
        let b = (0..=top + 1)
            .map(|n| {
                if n == 0 {
                    Matrix::zeros(cx.field, cx.dim(0), 0)
                } else {
                    cx.d(n - 1).clone()
                }
            })
            .collect();
        Cohom { z, b }
    }

    fn dim_h(&self, n: usize) -> usize {
        self.z[n].cols() - self.b[n].rank()
    }
}

/// Rank of the class map induced by cochains `images` (one per column,
/// already in the target space) modulo the coboundaries `b`.
fn rank_mod(images: &Matrix, b: &Matrix) -> Result<usize> {
    Ok(images.hstack(b)?.rank() - b.rank())
}

/// Runs the long exact sequence of `0 → M → N → P → 0` through degree
/// `max_degree` and checks exactness at every `H^n(M)`, `H^n(N)`, `H^n(P)`.
pub fn les_analysis(c: &FinLinCat, ses: &ShortExactSeq, max_degree: usize, budget: usize) -> Result<LesReport> {
    ses.require_valid(c)?;
    let cm = build_hm_complex(c, &ses.m, max_degree, budget)?;
    let cn = build_hm_complex(c, &ses.n, max_degree, budget)?;
    let cp = build_hm_complex(c, &ses.p, max_degree, budget)?;
    let (hm, hn, hp) = (Cohom::new(&cm), Cohom::new(&cn), Cohom::new(&cp));

    let i: Vec<Matrix> = (0..=max_degree + 1)
        .map(|n| induced_cochain_map(&cm, &cn, &ses.i, n))
        .collect();
    let q: Vec<Matrix> = (0..=max_degree)
        .map(|n| induced_cochain_map(&cn, &cp, &ses.q, n))
        .collect();

    let mut degrees = Vec::new();
    let mut positions = Vec::new();
    let mut prev_connecting: Option<Matrix> = None;
    let mut prev_rank_connecting = 0;
    for n in 0..=max_degree {
        let (dm, dn, dp) = (hm.dim_h(n), hn.dim_h(n), hp.dim_h(n));

        let i_img = i[n].mul(&hm.z[n])?;
        let rank_i = rank_mod(&i_img, &hn.b[n])?;
        let q_img = q[n].mul(&hn.z[n])?;
        let rank_q = rank_mod(&q_img, &hp.b[n])?;

        // lift P-cocycles through q, apply d, pull back through i
        let lifts = q[n]
            .solve(&hp.z[n])?
            .ok_or_else(|| Error::InexactSequence(format!("cochain map C^{n}(N) → C^{n}(P) is not onto")))?;
        let pushed = cn.d(n).mul(&lifts)?;
        let connecting = i[n + 1]
            .solve(&pushed)?
            .ok_or_else(|| Error::CrossCheck(format!("d of a lift does not come from M in degree {}", n + 1)))?;
        let rank_connecting = rank_mod(&connecting, &hm.b[n + 1])?;

        // at H^n(M): incoming δ^{n-1} (or 0), outgoing i
        let composite_m = match &prev_connecting {
            Some(delta) => i[n].mul(delta)?,
            None => Matrix::zeros(c.field(), cn.dim(n), 0),
        };
        positions.push(position(
            format!("H^{n}(M)"),
            n,
            prev_rank_connecting,
            dm - rank_i,
            &composite_m,
            &hn.b[n],
        )?);
        // at H^n(N): incoming i, outgoing q
        positions.push(position(
            format!("H^{n}(N)"),
            n,
            rank_i,
            dn - rank_q,
            &q[n].mul(&i_img)?,
            &hp.b[n],
        )?);
        // at H^n(P): incoming q, outgoing δ^n
        let lifts_of_images = q[n].solve(&q_img)?.expect("image of q lifts");
        let delta_of_images = i[n + 1]
            .solve(&cn.d(n).mul(&lifts_of_images)?)?
            .ok_or_else(|| Error::CrossCheck("d of a lift does not come from M".into()))?;
        positions.push(position(
            format!("H^{n}(P)"),
            n,
            rank_q,
            dp - rank_connecting,
            &delta_of_images,
            &hm.b[n + 1],
        )?);

        degrees.push(LesDegree {
            n,
            dim_h_m: dm,
            dim_h_n: dn,
            dim_h_p: dp,
            rank_i,
            rank_q,
            rank_connecting,
        });
        prev_rank_connecting = rank_connecting;
        prev_connecting = Some(connecting);
    }
    Ok(LesReport {
        max_degree,
        degrees,
        positions,
    })
}

fn position(
    name: String,
    degree: usize,
    incoming_rank: usize,
    kernel_dim: usize,
    composite: &Matrix,
    coboundaries: &Matrix,
) -> Result<LesPosition> {
    let composite_zero = rank_mod(composite, coboundaries)? == 0;
    Ok(LesPosition {
        position: name,
        degree,
        incoming_rank,
        kernel_dim,
        composite_zero,
        exact: composite_zero && incoming_rank == kernel_dim,
    })
}
