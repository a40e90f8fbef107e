use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix, Scalar};

/// One basis morphism of some hom space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub source: usize,
    pub target: usize,
    /// Position inside the basis of `hom(source, target)`.
    pub local: usize,
}

/// A morphism `source → target` as a coefficient vector over the hom basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<Scalar>,
}

/// Outcome of a validator: violations are data, not failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: impl Into<String>) {
        self.violations.push(v.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn into_result(self, wrap: impl FnOnce(String) -> Error) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(wrap(self.violations.join("; ")))
        }
    }
}

/// A finite K-linear category.
///
/// Basis elements are numbered globally in `(source, target, local)` order.
/// Composition structure constants are stored sparsely: an absent entry for
/// a pair of basis elements means their composite is zero. Identities are
/// coefficient vectors, so a category whose identity is not a basis element
/// is representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLinCat {
    field: FieldSpec,
    objects: Vec<String>,
    hom: Vec<Vec<Vec<usize>>>,
    basis: Vec<BasisElement>,
    labels: HashMap<String, usize>,
    comp: HashMap<(usize, usize), Vec<Scalar>>,
    identity: Vec<Option<Vec<Scalar>>>,
}

impl FinLinCat {
    /// Creates a category with the given hom bases and no composition data.
    /// Unlisted hom spaces are zero.
    pub fn new(field: FieldSpec, objects: Vec<String>, homs: Vec<((usize, usize), Vec<String>)>) -> Result<Self> {
        let n = objects.len();
        for (i, o) in objects.iter().enumerate() {
            if objects[..i].contains(o) {
                return Err(Error::InvalidCategory(format!("duplicate object {o:?}")));
            }
        }
        let mut by_pair: Vec<Vec<Option<Vec<String>>>> = vec![vec![None; n]; n];
        for ((x, y), labels) in homs {
            if x >= n || y >= n {
                return Err(Error::InvalidCategory(format!("hom ({x},{y}) out of range")));
            }
            if by_pair[x][y].is_some() {
                return Err(Error::InvalidCategory(format!(
                    "hom({}, {}) listed twice",
                    objects[x], objects[y]
                )));
            }
            by_pair[x][y] = Some(labels);
        }
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut basis = Vec::new();
        let mut labels = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for (local, label) in by_pair[x][y].take().unwrap_or_default().into_iter().enumerate() {
                    let id = basis.len();
                    if labels.insert(label.clone(), id).is_some() {
                        return Err(Error::InvalidCategory(format!("basis label {label:?} is not unique")));
                    }
                    hom[x][y].push(id);
                    basis.push(BasisElement {
                        label,
                        source: x,
                        target: y,
                        local,
                    });
                }
            }
        }
        Ok(FinLinCat {
            field,
            objects,
            hom,
            basis,
            labels,
            comp: HashMap::new(),
            identity: vec![None; n],
        })
    }

    /// Records `g∘f` for basis elements `g`, `f`. Shape and composability
    /// are checked by [`FinLinCat::validate`], not here.
    pub fn set_composition(&mut self, g: usize, f: usize, result: Vec<Scalar>) {
        self.comp.insert((g, f), result);
    }

    pub fn set_identity(&mut self, x: usize, v: Vec<Scalar>) -> Result<()> {
        if x >= self.objects.len() {
            return Err(Error::InvalidCategory(format!("object {x} out of range")));
        }
        self.identity[x] = Some(v);
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom[x][y].len()
    }

    /// Global ids of the basis of `hom(x, y)`, in basis order.
    pub fn hom_basis(&self, x: usize, y: usize) -> &[usize] {
        &self.hom[x][y]
    }

    pub fn basis_count(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self, id: usize) -> &BasisElement {
        &self.basis[id]
    }

    pub fn basis_elements(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn basis_id(&self, label: &str) -> Result<usize> {
        self.labels
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn composition_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Scalar>)> {
        self.comp.iter()
    }

    pub fn identity_entry(&self, x: usize) -> Option<&[Scalar]> {
        self.identity[x].as_deref()
    }

    /// The identity of `x`. Panics if missing; call on validated categories.
    pub fn identity(&self, x: usize) -> &[Scalar] {
        self.identity[x]
            .as_deref()
            .unwrap_or_else(|| panic!("missing identity for {}", self.objects[x]))
    }

    pub fn zero_vector(&self, x: usize, y: usize) -> Vec<Scalar> {
        vec![self.field.zero(); self.hom_dim(x, y)]
    }

    /// Coordinates of basis element `id` in its own hom space.
    pub fn unit_vector(&self, id: usize) -> Vec<Scalar> {
        let b = &self.basis[id];
        let mut v = self.zero_vector(b.source, b.target);
        v[b.local] = self.field.one();
        v
    }

    /// `g∘f` for basis elements, as a vector over `hom(source f, target g)`.
    pub fn compose_basis(&self, g: usize, f: usize) -> Vec<Scalar> {
        let (gb, fb) = (&self.basis[g], &self.basis[f]);
        debug_assert_eq!(gb.source, fb.target);
        match self.comp.get(&(g, f)) {
            Some(v) => v.clone(),
            None => self.zero_vector(fb.source, gb.target),
        }
    }

    /// Bilinear extension of the structure constants:
    /// `g ∈ hom(y, z)`, `f ∈ hom(x, y)` as coefficient vectors.
    pub fn compose_vectors(&self, x: usize, y: usize, z: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector(x, z);
        for (gi, gc) in self.hom[y][z].iter().zip(g) {
            if gc.is_zero() {
                continue;
            }
            for (fi, fc) in self.hom[x][y].iter().zip(f) {
                if fc.is_zero() {
                    continue;
                }
                if let Some(v) = self.comp.get(&(*gi, *fi)) {
                    let coef = gc * fc;
                    let neg = -&coef;
                    for (o, c) in out.iter_mut().zip(v) {
                        if !c.is_zero() {
                            o.sub_assign_mul(&neg, c);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if g.source != f.target {
            return Err(Error::NotComposable(format!(
                "{} -> {} after {} -> {}",
                self.objects[g.source], self.objects[g.target], self.objects[f.source], self.objects[f.target]
            )));
        }
        self.check_morphism(g)?;
        self.check_morphism(f)?;
        Ok(Morphism {
            source: f.source,
            target: g.target,
            coeffs: self.compose_vectors(f.source, f.target, g.target, &g.coeffs, &f.coeffs),
        })
    }

    fn check_morphism(&self, m: &Morphism) -> Result<()> {
        let n = self.objects.len();
        if m.source >= n || m.target >= n || m.coeffs.len() != self.hom_dim(m.source, m.target) {
            return Err(Error::DimensionMismatch("morphism does not fit its hom space".into()));
        }
        Ok(())
    }

    pub fn basis_morphism(&self, id: usize) -> Morphism {
        let b = &self.basis[id];
        Morphism {
            source: b.source,
            target: b.target,
            coeffs: self.unit_vector(id),
        }
    }

    /// Post-composition with basis element `f ∈ hom(a, b)` as a matrix
    /// `hom(y, a) → hom(y, b)`.
    pub fn postcomp_matrix(&self, f: usize, y: usize) -> Matrix {
        let fb = &self.basis[f];
        let src = &self.hom[y][fb.source];
        let columns: Vec<Vec<Scalar>> = src.iter().map(|&t| self.compose_basis(f, t)).collect();
        Matrix::from_columns(self.field, self.hom_dim(y, fb.target), &columns)
    }

    /// Pre-composition with basis element `g ∈ hom(a, b)` as a matrix
    /// `hom(b, x) → hom(a, x)`.
    pub fn precomp_matrix(&self, g: usize, x: usize) -> Matrix {
        let gb = &self.basis[g];
        let src = &self.hom[gb.target][x];
        let columns: Vec<Vec<Scalar>> = src.iter().map(|&t| self.compose_basis(t, g)).collect();
        Matrix::from_columns(self.field, self.hom_dim(gb.source, x), &columns)
    }

    /// Checks shapes, identities, unit laws and associativity on all basis
    /// triples.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.objects.len();
        let mut keys: Vec<&(usize, usize)> = self.comp.keys().collect();
        keys.sort();
        for &(g, f) in keys {
            let (gb, fb) = (&self.basis[g], &self.basis[f]);
            if gb.source != fb.target {
                report.push(format!(
                    "composition entry ({}, {}) is not composable",
                    gb.label, fb.label
                ));
                continue;
            }
            let want = self.hom_dim(fb.source, gb.target);
            let got = self.comp[&(g, f)].len();
            if got != want {
                report.push(format!(
                    "composition ({}, {}) has {got} coefficients, hom space has dimension {want}",
                    gb.label, fb.label
                ));
            }
            if self.comp[&(g, f)].iter().any(|s| s.field() != self.field) {
                report.push(format!(
                    "composition ({}, {}) has scalars from another field",
                    gb.label, fb.label
                ));
            }
        }
        for x in 0..n {
            match &self.identity[x] {
                None => report.push(format!("missing identity for object {}", self.objects[x])),
                Some(v) if v.len() != self.hom_dim(x, x) => report.push(format!(
                    "identity of {} has {} coefficients, hom space has dimension {}",
                    self.objects[x],
                    v.len(),
                    self.hom_dim(x, x)
                )),
                _ => {}
            }
        }
        if !report.ok() {
            return report;
        }
        for (id, b) in self.basis.iter().enumerate() {
            let f = self.unit_vector(id);
            let left = self.compose_vectors(b.source, b.target, b.target, self.identity(b.target), &f);
            if left != f {
                report.push(format!(
                    "unit law fails: 1_{} ∘ {} ≠ {}",
                    self.objects[b.target], b.label, b.label
                ));
            }
            let right = self.compose_vectors(b.source, b.source, b.target, &f, self.identity(b.source));
            if right != f {
                report.push(format!(
                    "unit law fails: {} ∘ 1_{} ≠ {}",
                    b.label, self.objects[b.source], b.label
                ));
            }
        }
        for (h, hb) in self.basis.iter().enumerate() {
            for &g in &self.hom_of_target(hb.source) {
                let gb = &self.basis[g];
                let hg = self.compose_basis(h, g);
                for &f in &self.hom_of_target(gb.source) {
                    let fb = &self.basis[f];
                    let gf = self.compose_basis(g, f);
                    let lhs = self.compose_vectors(fb.source, gb.source, hb.target, &hg, &self.unit_vector(f));
                    let rhs = self.compose_vectors(fb.source, hb.source, hb.target, &self.unit_vector(h), &gf);
                    if lhs != rhs {
                        report.push(format!(
                            "associativity fails on ({}, {}, {})",
                            hb.label, gb.label, fb.label
                        ));
                    }
                }
            }
        }
        report
    }

    fn hom_of_target(&self, y: usize) -> Vec<usize> {
        (0..self.objects.len())
            .flat_map(|x| self.hom[x][y].iter().copied())
            .collect()
    }

    /// Errors unless [`FinLinCat::validate`] is clean.
    pub fn require_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidCategory)
    }

    /// Labels of a vector's nonzero terms, e.g. `1/2*e + g`.
    pub fn describe(&self, x: usize, y: usize, v: &[Scalar]) -> String {
        let terms: Vec<String> = self.hom[x][y]
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&id, c)| {
                if c.is_one() {
                    self.basis[id].label.clone()
                } else {
                    format!("{}*{}", c, self.basis[id].label)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    /// ℚ[ℤ/2] with an adjustable `g∘g` and `g∘e`.
    fn z2(gg: &[i64], ge: &[i64]) -> FinLinCat {
        let mut c = FinLinCat::new(Q, vec!["x".into()], vec![((0, 0), vec!["e".into(), "g".into()])]).unwrap();
        let v = |a: &[i64]| a.iter().map(|&n| Q.from_i64(n)).collect::<Vec<_>>();
        c.set_identity(0, v(&[1, 0])).unwrap();
        c.set_composition(0, 0, v(&[1, 0]));
        c.set_composition(0, 1, v(&[0, 1]));
        c.set_composition(1, 0, v(ge));
        c.set_composition(1, 1, v(gg));
        c
    }

    #[test]
    fn group_algebra_is_a_category() {
        let c = z2(&[1, 0], &[0, 1]);
        assert!(c.validate().ok());
        let g = c.basis_morphism(1);
        assert_eq!(c.compose(&g, &g).unwrap().coeffs, c.unit_vector(0));
    }

    #[test]
    fn idempotent_generator_is_still_a_category() {
        // g∘g = g gives the algebra ℚ×ℚ, which is associative and unital
        assert!(z2(&[0, 1], &[0, 1]).validate().ok());
    }

    #[test]
    fn broken_unit_law_is_reported_with_witnesses() {
        let c = z2(&[1, 0], &[1, 0]);
        let r = c.validate();
        assert!(r.violations.iter().any(|v| v.contains("g ∘ 1_x")));
        assert!(r.violations.iter().any(|v| v.contains("(g, e, g)")));
    }

    #[test]
    fn missing_identity_is_reported() {
        let mut c = z2(&[1, 0], &[0, 1]);
        c.identity[0] = None;
        let r = c.validate();
        assert_eq!(r.violations, vec!["missing identity for object x".to_string()]);
    }

    #[test]
    fn composition_is_bilinear() {
        let c = z2(&[1, 0], &[0, 1]);
        let g = c.basis_morphism(1);
        let f = Morphism {
            source: 0,
            target: 0,
            coeffs: vec![Q.from_i64(1), Q.from_i64(2)],
        };
        // g∘(e + 2g) = g + 2e
        assert_eq!(c.compose(&g, &f).unwrap().coeffs, vec![Q.from_i64(2), Q.from_i64(1)]);
    }

    #[test]
    fn non_composable_pair_is_an_error() {
        let mut c = FinLinCat::new(
            Q,
            vec!["x".into(), "y".into()],
            vec![
                ((0, 0), vec!["1x".into()]),
                ((1, 1), vec!["1y".into()]),
                ((0, 1), vec!["a".into()]),
            ],
        )
        .unwrap();
        c.set_identity(0, vec![Q.one()]).unwrap();
        c.set_identity(1, vec![Q.one()]).unwrap();
        let a = c.basis_morphism(c.basis_id("a").unwrap());
        assert!(matches!(c.compose(&a, &a), Err(Error::NotComposable(_))));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = FinLinCat::new(
            Q,
            vec!["x".into(), "y".into()],
            vec![((0, 0), vec!["a".into()]), ((1, 1), vec!["a".into()])],
        );
        assert!(r.is_err());
    }

    /// `x → y` plus an idempotent `e` on `y`: the middle objects of the
    /// two bracketings differ and `hom(y, y)` is two-dimensional.
    #[test]
    fn associativity_across_objects_of_different_sizes() {
        let mut c = FinLinCat::new(
            Q,
            vec!["x".into(), "y".into()],
            vec![
                ((0, 0), vec!["1x".into()]),
                ((0, 1), vec!["a".into()]),
                ((1, 1), vec!["1y".into(), "e".into()]),
            ],
        )
        .unwrap();
        let id = |c: &FinLinCat, l: &str| c.basis_id(l).unwrap();
        let (ix, a, iy, e) = (id(&c, "1x"), id(&c, "a"), id(&c, "1y"), id(&c, "e"));
        c.set_identity(0, vec![Q.one()]).unwrap();
        c.set_identity(1, vec![Q.one(), Q.zero()]).unwrap();
        c.set_composition(ix, ix, vec![Q.one()]);
        c.set_composition(a, ix, vec![Q.one()]);
        c.set_composition(iy, a, vec![Q.one()]);
        c.set_composition(e, a, vec![Q.one()]);
        c.set_composition(iy, iy, vec![Q.one(), Q.zero()]);
        c.set_composition(iy, e, vec![Q.zero(), Q.one()]);
        c.set_composition(e, iy, vec![Q.zero(), Q.one()]);
        c.set_composition(e, e, vec![Q.zero(), Q.one()]);
        assert!(c.validate().ok(), "{:?}", c.validate());

        c.set_composition(e, a, vec![Q.from_i64(2)]);
        let r = c.validate();
        assert!(r.violations.iter().any(|v| v.starts_with("associativity")), "{r:?}");
    }
}
