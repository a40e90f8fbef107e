//! Left modules and bimodules over a [`FinLinCat`], given by action
//! matrices.
//!
//! A bimodule `M` has a space `M[x][y]` for every pair of objects. A basis
//! morphism `f ∈ hom(x, x′)` acts on the left `M[x][y] → M[x′][y]`, and
//! `g ∈ hom(y′, y)` acts on the right `M[x][y] → M[x][y′]`. The regular
//! bimodule has `M[x][y] = hom(y, x)`.

mod constructions;
mod format;
mod random;

pub use constructions::{
    canonical_bimodule, direct_sum, image_of, kernel_comp_sequence, kernel_of, regular_left_module, representable,
    representable_left, sign_module, tensor_square, trivial_left_module, yoneda_map,
};
pub use format::{BimoduleDoc, LeftModuleDoc, MapDoc, SesDoc};
pub use random::{random_bimodule, random_left_module, random_short_exact_sequence};

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix, Scalar};
use crate::lincat::{FinLinCat, ValidationReport};

/// A bimodule over a fixed category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: FieldSpec,
    dims: Vec<Vec<usize>>,
    /// `left[f][y]`: `dims[target f][y] × dims[source f][y]`.
    left: Vec<Vec<Matrix>>,
    /// `right[g][x]`: `dims[x][source g] × dims[x][target g]`.
    right: Vec<Vec<Matrix>>,
}

impl Bimodule {
    /// Assembles a bimodule from action callbacks, one call per basis
    /// morphism and object.
    pub fn from_actions(
        c: &FinLinCat,
        dims: Vec<Vec<usize>>,
        mut left: impl FnMut(usize, usize) -> Matrix,
        mut right: impl FnMut(usize, usize) -> Matrix,
    ) -> Self {
        let n = c.object_count();
        let l = (0..c.basis_count())
            .map(|f| (0..n).map(|y| left(f, y)).collect())
            .collect();
        let r = (0..c.basis_count())
            .map(|g| (0..n).map(|x| right(g, x)).collect())
            .collect();
        Bimodule {
            field: c.field(),
            dims,
            left: l,
            right: r,
        }
    }

    pub fn zero(c: &FinLinCat) -> Self {
        let n = c.object_count();
        Bimodule::from_actions(
            c,
            vec![vec![0; n]; n],
            |_, _| Matrix::zeros(c.field(), 0, 0),
            |_, _| Matrix::zeros(c.field(), 0, 0),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn object_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.dims[x][y]
    }

    pub fn dims(&self) -> &[Vec<usize>] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn max_component_dim(&self) -> usize {
        self.dims.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Left action of basis morphism `f` on the column `y`.
    pub fn left(&self, f: usize, y: usize) -> &Matrix {
        &self.left[f][y]
    }

    /// Right action of basis morphism `g` on the row `x`.
    pub fn right(&self, g: usize, x: usize) -> &Matrix {
        &self.right[g][x]
    }

    pub(crate) fn set_left(&mut self, f: usize, y: usize, m: Matrix) {
        self.left[f][y] = m;
    }

    pub(crate) fn set_right(&mut self, g: usize, x: usize, m: Matrix) {
        self.right[g][x] = m;
    }

    /// Left action of `Σ coeffs_i f_i` with `f_i` the basis of `hom(x, x2)`.
    pub fn left_vec(&self, c: &FinLinCat, x: usize, x2: usize, coeffs: &[Scalar], y: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dims[x2][y], self.dims[x][y]);
        for (&f, s) in c.hom_basis(x, x2).iter().zip(coeffs) {
            out.add_scaled(s, &self.left[f][y]);
        }
        out
    }

    /// Right action of `Σ coeffs_i g_i` with `g_i` the basis of `hom(y2, y)`.
    pub fn right_vec(&self, c: &FinLinCat, y2: usize, y: usize, coeffs: &[Scalar], x: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dims[x][y2], self.dims[x][y]);
        for (&g, s) in c.hom_basis(y2, y).iter().zip(coeffs) {
            out.add_scaled(s, &self.right[g][x]);
        }
        out
    }

    /// Checks shapes, unitality, functoriality of both actions and that the
    /// actions commute.
    pub fn validate(&self, c: &FinLinCat) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = c.object_count();
        let label = |id: usize| c.basis(id).label.as_str();
        let obj = |x: usize| c.object_name(x);
        if self.field != c.field() {
            report.push("bimodule and category are over different fields");
            return report;
        }
        if self.dims.len() != n || self.dims.iter().any(|r| r.len() != n) {
            report.push("dimension table does not match the object count");
            return report;
        }
        if self.left.len() != c.basis_count() || self.right.len() != c.basis_count() {
            report.push("action tables do not match the basis count");
            return report;
        }
        for (f, b) in c.basis_elements().iter().enumerate() {
            for y in 0..n {
                let m = &self.left[f][y];
                if (m.rows(), m.cols()) != (self.dims[b.target][y], self.dims[b.source][y]) {
                    report.push(format!("left action of {} at {} has the wrong shape", b.label, obj(y)));
                }
            }
            for x in 0..n {
                let m = &self.right[f][x];
                if (m.rows(), m.cols()) != (self.dims[x][b.source], self.dims[x][b.target]) {
                    report.push(format!("right action of {} at {} has the wrong shape", b.label, obj(x)));
                }
            }
        }
        if !report.ok() {
            return report;
        }
        for x in 0..n {
            for y in 0..n {
                let id_l = self.left_vec(c, x, x, c.identity(x), y);
                if id_l != Matrix::identity(self.field, self.dims[x][y]) {
                    report.push(format!(
                        "1_{} does not act as the identity on the left of ({}, {})",
                        obj(x),
                        obj(x),
                        obj(y)
                    ));
                }
                let id_r = self.right_vec(c, y, y, c.identity(y), x);
                if id_r != Matrix::identity(self.field, self.dims[x][y]) {
                    report.push(format!(
                        "1_{} does not act as the identity on the right of ({}, {})",
                        obj(y),
                        obj(x),
                        obj(y)
                    ));
                }
            }
        }
        for (h, hb) in c.basis_elements().iter().enumerate() {
            for (f, fb) in c.basis_elements().iter().enumerate() {
                if hb.source != fb.target {
                    continue;
                }
                let hf = c.compose_basis(h, f);
                for y in 0..n {
                    let lhs = self.left_vec(c, fb.source, hb.target, &hf, y);
                    let rhs = self.left[h][y].mul(&self.left[f][y]).expect("shapes checked");
                    if lhs != rhs {
                        report.push(format!(
                            "left action not functorial on ({}, {}) at {}",
                            label(h),
                            label(f),
                            obj(y)
                        ));
                    }
                }
                // m ◁ h ◁ f = m ◁ (h∘f)
                for x in 0..n {
                    let lhs = self.right_vec(c, fb.source, hb.target, &hf, x);
                    let rhs = self.right[f][x].mul(&self.right[h][x]).expect("shapes checked");
                    if lhs != rhs {
                        report.push(format!(
                            "right action not functorial on ({}, {}) at {}",
                            label(h),
                            label(f),
                            obj(x)
                        ));
                    }
                }
            }
        }
        for (f, fb) in c.basis_elements().iter().enumerate() {
            for (g, gb) in c.basis_elements().iter().enumerate() {
                let (x, x2) = (fb.source, fb.target);
                let (y2, y) = (gb.source, gb.target);
                let lhs = self.right[g][x2].mul(&self.left[f][y]).expect("shapes");
                let rhs = self.left[f][y2].mul(&self.right[g][x]).expect("shapes");
                if lhs != rhs {
                    report.push(format!(
                        "left action of {} and right action of {} do not commute",
                        label(f),
                        label(g)
                    ));
                }
            }
        }
        report
    }

    pub fn require_valid(&self, c: &FinLinCat) -> Result<()> {
        self.validate(c).into_result(Error::InvalidModule)
    }
}

/// A covariant left module: `f ∈ hom(x, y)` acts `M[x] → M[y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftModule {
    field: FieldSpec,
    dims: Vec<usize>,
    /// `action[f]`: `dims[target f] × dims[source f]`.
    action: Vec<Matrix>,
}

impl LeftModule {
    pub fn from_action(c: &FinLinCat, dims: Vec<usize>, action: impl FnMut(usize) -> Matrix) -> Self {
        LeftModule {
            field: c.field(),
            dims,
            action: (0..c.basis_count()).map(action).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn action(&self, f: usize) -> &Matrix {
        &self.action[f]
    }

    /// Action of `Σ coeffs_i f_i` over the basis of `hom(x, y)`.
    pub fn action_vec(&self, c: &FinLinCat, x: usize, y: usize, coeffs: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dims[y], self.dims[x]);
        for (&f, s) in c.hom_basis(x, y).iter().zip(coeffs) {
            out.add_scaled(s, &self.action[f]);
        }
        out
    }

    pub fn validate(&self, c: &FinLinCat) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = c.object_count();
        if self.field != c.field() {
            report.push("module and category are over different fields");
            return report;
        }
        if self.dims.len() != n || self.action.len() != c.basis_count() {
            report.push("module tables do not match the category");
            return report;
        }
        for (f, b) in c.basis_elements().iter().enumerate() {
            let m = &self.action[f];
            if (m.rows(), m.cols()) != (self.dims[b.target], self.dims[b.source]) {
                report.push(format!("action of {} has the wrong shape", b.label));
            }
        }
        if !report.ok() {
            return report;
        }
        for x in 0..n {
            if self.action_vec(c, x, x, c.identity(x)) != Matrix::identity(self.field, self.dims[x]) {
                report.push(format!("1_{} does not act as the identity", c.object_name(x)));
            }
        }
        for (h, hb) in c.basis_elements().iter().enumerate() {
            for (f, fb) in c.basis_elements().iter().enumerate() {
                if hb.source != fb.target {
                    continue;
                }
                let lhs = self.action_vec(c, fb.source, hb.target, &c.compose_basis(h, f));
                let rhs = self.action[h].mul(&self.action[f]).expect("shapes");
                if lhs != rhs {
                    report.push(format!("action not functorial on ({}, {})", hb.label, fb.label));
                }
            }
        }
        report
    }

    pub fn require_valid(&self, c: &FinLinCat) -> Result<()> {
        self.validate(c).into_result(Error::InvalidModule)
    }
}

/// A bimodule morphism given componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    /// `comps[x][y]`: `target.dim(x, y) × source.dim(x, y)`.
    comps: Vec<Vec<Matrix>>,
}

impl BimoduleMap {
    pub fn new(comps: Vec<Vec<Matrix>>) -> Self {
        BimoduleMap { comps }
    }

    pub fn identity(m: &Bimodule) -> Self {
        let n = m.object_count();
        BimoduleMap {
            comps: (0..n)
                .map(|x| (0..n).map(|y| Matrix::identity(m.field(), m.dim(x, y))).collect())
                .collect(),
        }
    }

    pub fn zero(source: &Bimodule, target: &Bimodule) -> Self {
        let n = source.object_count();
        BimoduleMap {
            comps: (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| Matrix::zeros(source.field(), target.dim(x, y), source.dim(x, y)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn component(&self, x: usize, y: usize) -> &Matrix {
        &self.comps[x][y]
    }

    pub fn components(&self) -> &[Vec<Matrix>] {
        &self.comps
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BimoduleMap) -> Result<BimoduleMap> {
        let comps = self
            .comps
            .iter()
            .zip(&first.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.mul(q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BimoduleMap { comps })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(Matrix::is_zero)
    }

    /// Checks shapes and that the map intertwines both actions.
    pub fn validate(&self, c: &FinLinCat, source: &Bimodule, target: &Bimodule) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = c.object_count();
        if self.comps.len() != n || self.comps.iter().any(|r| r.len() != n) {
            report.push("component table does not match the object count");
            return report;
        }
        for x in 0..n {
            for y in 0..n {
                let m = &self.comps[x][y];
                if (m.rows(), m.cols()) != (target.dim(x, y), source.dim(x, y)) {
                    report.push(format!(
                        "component ({}, {}) has the wrong shape",
                        c.object_name(x),
                        c.object_name(y)
                    ));
                }
            }
        }
        if !report.ok() {
            return report;
        }
        for (f, b) in c.basis_elements().iter().enumerate() {
            for y in 0..n {
                let lhs = self.comps[b.target][y].mul(source.left(f, y)).expect("shapes");
                let rhs = target.left(f, y).mul(&self.comps[b.source][y]).expect("shapes");
                if lhs != rhs {
                    report.push(format!(
                        "map does not commute with the left action of {} at {}",
                        b.label,
                        c.object_name(y)
                    ));
                }
            }
            for x in 0..n {
                let lhs = self.comps[x][b.source].mul(source.right(f, x)).expect("shapes");
                let rhs = target.right(f, x).mul(&self.comps[x][b.target]).expect("shapes");
                if lhs != rhs {
                    report.push(format!(
                        "map does not commute with the right action of {} at {}",
                        b.label,
                        c.object_name(x)
                    ));
                }
            }
        }
        report
    }
}

/// `0 → M → N → P → 0` with maps `i: M → N` and `q: N → P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSeq {
    pub m: Bimodule,
    pub n: Bimodule,
    pub p: Bimodule,
    pub i: BimoduleMap,
    pub q: BimoduleMap,
}

impl ShortExactSeq {
    /// Checks the three bimodules, both maps, and exactness by ranks:
    /// `i` injective, `q` surjective, `q∘i = 0` and `dim N = dim M + dim P`
    /// in every component.
    pub fn validate(&self, c: &FinLinCat) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (name, b) in [("M", &self.m), ("N", &self.n), ("P", &self.p)] {
            for v in b.validate(c).violations {
                report.push(format!("{name}: {v}"));
            }
        }
        for v in self.i.validate(c, &self.m, &self.n).violations {
            report.push(format!("i: {v}"));
        }
        for v in self.q.validate(c, &self.n, &self.p).violations {
            report.push(format!("q: {v}"));
        }
        if !report.ok() {
            return report;
        }
        let n = c.object_count();
        for x in 0..n {
            for y in 0..n {
                let at = format!("({}, {})", c.object_name(x), c.object_name(y));
                let i = self.i.component(x, y);
                let q = self.q.component(x, y);
                if i.rank() != self.m.dim(x, y) {
                    report.push(format!("i is not injective at {at}"));
                }
                if q.rank() != self.p.dim(x, y) {
                    report.push(format!("q is not surjective at {at}"));
                }
                if !q.mul(i).expect("shapes").is_zero() {
                    report.push(format!("q∘i ≠ 0 at {at}"));
                }
                if self.n.dim(x, y) != self.m.dim(x, y) + self.p.dim(x, y) {
                    report.push(format!("image of i differs from kernel of q at {at}"));
                }
            }
        }
        report
    }

    pub fn require_valid(&self, c: &FinLinCat) -> Result<()> {
        self.validate(c).into_result(Error::InexactSequence)
    }
}
