use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite ordinary (non-linear) category: named objects and morphisms, an
/// identity per object and a total composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCatPresentation {
    objects: Vec<String>,
    names: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<Option<usize>>,
    table: HashMap<(usize, usize), usize>,
    inverses: Option<HashMap<usize, usize>>,
}

/// Structural flags of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_groupoid: bool,
    pub is_delta: bool,
    pub is_discrete: bool,
}

impl FiniteCatPresentation {
    pub fn new(objects: Vec<String>) -> Self {
        let n = objects.len();
        FiniteCatPresentation {
            objects,
            names: Vec::new(),
            source: Vec::new(),
            target: Vec::new(),
            identity: vec![None; n],
            table: HashMap::new(),
            inverses: None,
        }
    }

    pub fn add_morphism(&mut self, name: impl Into<String>, from: usize, to: usize) -> Result<usize> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::InvalidPresentation(format!("duplicate morphism {name:?}")));
        }
        if from >= self.objects.len() || to >= self.objects.len() {
            return Err(Error::InvalidPresentation(format!("{name:?} has an unknown endpoint")));
        }
        self.names.push(name);
        self.source.push(from);
        self.target.push(to);
        Ok(self.names.len() - 1)
    }

    pub fn set_identity(&mut self, x: usize, m: usize) {
        self.identity[x] = Some(m);
    }

    /// Records `g∘f = h`.
    pub fn set_composite(&mut self, g: usize, f: usize, h: usize) {
        self.table.insert((g, f), h);
    }

    pub fn set_inverse(&mut self, f: usize, g: usize) {
        self.inverses.get_or_insert_with(HashMap::new).insert(f, g);
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.names.len()
    }

    pub fn morphism_name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn source(&self, m: usize) -> usize {
        self.source[m]
    }

    pub fn target(&self, m: usize) -> usize {
        self.target[m]
    }

    /// Identity of `x`; the presentation must have passed [`Self::check`].
    pub fn identity(&self, x: usize) -> usize {
        self.identity[x].expect("identity present")
    }

    /// Morphisms `x → y` in declaration order.
    pub fn hom_set(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.names.len())
            .filter(|&m| self.source[m] == x && self.target[m] == y)
            .collect()
    }

    /// `g∘f`, if recorded or implied by a unit law.
    pub fn composite(&self, g: usize, f: usize) -> Option<usize> {
        if let Some(&h) = self.table.get(&(g, f)) {
            return Some(h);
        }
        if self.source[g] != self.target[f] {
            return None;
        }
        if self.identity[self.target[f]] == Some(g) {
            return Some(f);
        }
        if self.identity[self.source[g]] == Some(f) {
            return Some(g);
        }
        None
    }

    /// All composable pairs with their composites, sorted by `(g, f)`.
    pub fn composition_entries(&self) -> Vec<((usize, usize), usize)> {
        let mut out = Vec::new();
        for g in 0..self.names.len() {
            for f in 0..self.names.len() {
                if self.source[g] == self.target[f] {
                    if let Some(h) = self.composite(g, f) {
                        out.push(((g, f), h));
                    }
                }
            }
        }
        out
    }

    /// Validates the presentation as an ordinary category. Compositions with
    /// an identity may be omitted; they are implied by the unit laws.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        let n = self.names.len();
        for x in 0..self.objects.len() {
            match self.identity[x] {
                None => return bad(format!("missing identity for {}", self.objects[x])),
                Some(i) if self.source[i] != x || self.target[i] != x => {
                    return bad(format!("identity of {} is not an endomorphism of it", self.objects[x]))
                }
                _ => {}
            }
        }
        for (&(g, f), &h) in &self.table {
            if self.source[g] != self.target[f] {
                return bad(format!("{} ∘ {} is not composable", self.names[g], self.names[f]));
            }
            if self.source[h] != self.source[f] || self.target[h] != self.target[g] {
                return bad(format!(
                    "{} ∘ {} = {} has the wrong endpoints",
                    self.names[g], self.names[f], self.names[h]
                ));
            }
        }
        for m in 0..n {
            let (x, y) = (self.source[m], self.target[m]);
            if self.composite(self.identity(y), m) != Some(m) || self.composite(m, self.identity(x)) != Some(m) {
                return bad(format!("unit law fails for {}", self.names[m]));
            }
        }
        for g in 0..n {
            for f in 0..n {
                if self.source[g] == self.target[f] && self.composite(g, f).is_none() {
                    return bad(format!("composition {} ∘ {} is missing", self.names[g], self.names[f]));
                }
            }
        }
        for h in 0..n {
            for g in 0..n {
                if self.source[h] != self.target[g] {
                    continue;
                }
                let hg = self.composite(h, g).expect("total");
                for f in 0..n {
                    if self.source[g] != self.target[f] {
                        continue;
                    }
                    let gf = self.composite(g, f).expect("total");
                    if self.composite(hg, f) != self.composite(h, gf) {
                        return bad(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[h], self.names[g], self.names[f]
                        ));
                    }
                }
            }
        }
        if let Some(inv) = &self.inverses {
            for (&f, &g) in inv {
                if self.inverse_of(f) != Some(g) {
                    return bad(format!("{} is not inverse to {}", self.names[g], self.names[f]));
                }
            }
        }
        Ok(())
    }

    /// The two-sided inverse of `f`, if any.
    pub fn inverse_of(&self, f: usize) -> Option<usize> {
        let (x, y) = (self.source[f], self.target[f]);
        self.hom_set(y, x)
            .into_iter()
            .find(|&g| self.composite(g, f) == self.identity[x] && self.composite(f, g) == self.identity[y])
    }

    pub fn classify(&self) -> Classification {
        let n = self.objects.len();
        let is_groupoid = (0..self.names.len()).all(|f| self.inverse_of(f).is_some());
        let trivial_ends = (0..n).all(|x| self.hom_set(x, x).len() == 1);
        let skeletal =
            (0..n).all(|x| (0..n).all(|y| x == y || self.hom_set(x, y).is_empty() || self.hom_set(y, x).is_empty()));
        let is_discrete = self.names.len() == n;
        Classification {
            is_groupoid,
            is_delta: trivial_ends && skeletal,
            is_discrete,
        }
    }

    /// Cardinality of `hom(x, y)`.
    pub fn hom_size(&self, x: usize, y: usize) -> usize {
        (0..self.names.len())
            .filter(|&m| self.source[m] == x && self.target[m] == y)
            .count()
    }

    // ---- standard examples ------------------------------------------------

    /// One-object category of a finite group given by its multiplication
    /// table `mul[a][b] = a·b`, with element 0 the unit.
    pub fn group(names: &[String], mul: &[Vec<usize>]) -> Result<Self> {
        let mut p = FiniteCatPresentation::new(vec!["x".into()]);
        for name in names {
            p.add_morphism(name.clone(), 0, 0)?;
        }
        p.set_identity(0, 0);
        for (a, row) in mul.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                p.set_composite(a, b, c);
            }
        }
        p.check()?;
        Ok(p)
    }

    /// Product of cyclic groups `ℤ/n₁ × … × ℤ/n_k` as a one-object category.
    /// Elements are named `e` and `g`, `g^2`, … for one factor, and by
    /// exponent tuples such as `g0^1g1^1` for several.
    pub fn abelian_group(orders: &[usize]) -> Result<Self> {
        let size: usize = orders.iter().product();
        let digits = |mut k: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&o| {
                    let d = k % o;
                    k /= o;
                    d
                })
                .collect()
        };
        let index = |ds: &[usize]| -> usize { ds.iter().zip(orders).rev().fold(0, |acc, (&d, &o)| acc * o + d) };
        let names: Vec<String> = (0..size)
            .map(|k| {
                let ds = digits(k);
                if ds.iter().all(|&d| d == 0) {
                    "e".to_string()
                } else if orders.len() == 1 {
                    if ds[0] == 1 {
                        "g".to_string()
                    } else {
                        format!("g^{}", ds[0])
                    }
                } else {
                    ds.iter()
                        .enumerate()
                        .filter(|(_, &d)| d != 0)
                        .map(|(i, d)| format!("g{i}^{d}"))
                        .collect()
                }
            })
            .collect();
        let mul: Vec<Vec<usize>> = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        let sum: Vec<usize> = da.iter().zip(&db).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                        index(&sum)
                    })
                    .collect()
            })
            .collect();
        Self::group(&names, &mul)
    }

    pub fn cyclic_group(n: usize) -> Result<Self> {
        Self::abelian_group(&[n])
    }

    /// The connected groupoid on `n` objects whose vertex group is the
    /// abelian group with the given factor orders. Every hom set has the
    /// order of the vertex group.
    pub fn connected_groupoid(n: usize, orders: &[usize]) -> Result<Self> {
        let group = Self::abelian_group(orders)?;
        let size = group.morphism_count();
        let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut p = FiniteCatPresentation::new(objects);
        let mut ids = vec![vec![Vec::new(); n]; n];
        for x in 0..n {
            for y in 0..n {
                for h in 0..size {
                    let name = format!("{}:x{x}->x{y}", group.morphism_name(h));
                    ids[x][y].push(p.add_morphism(name, x, y)?);
                }
            }
        }
        for x in 0..n {
            p.set_identity(x, ids[x][x][0]);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for a in 0..size {
                        for b in 0..size {
                            let c = group.composite(b, a).expect("group table total");
                            p.set_composite(ids[y][z][b], ids[x][y][a], ids[x][z][c]);
                        }
                    }
                }
            }
        }
        p.check()?;
        Ok(p)
    }

    /// The poset on objects `0..n` generated by the relations `a ≤ b` given
    /// as pairs; morphisms are named `a<b`, identities `1_a`.
    pub fn poset(objects: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = objects.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPresentation("relations contain a cycle".into()));
                }
            }
        }
        let mut p = FiniteCatPresentation::new(objects.clone());
        let mut id = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    let name = if i == j {
                        format!("1_{}", objects[i])
                    } else {
                        format!("{}<{}", objects[i], objects[j])
                    };
                    id[i][j] = Some(p.add_morphism(name, i, j)?);
                }
            }
        }
        for i in 0..n {
            p.set_identity(i, id[i][i].expect("reflexive"));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(f), Some(g)) = (id[i][j], id[j][k]) {
                        p.set_composite(g, f, id[i][k].expect("transitive"));
                    }
                }
            }
        }
        p.check()?;
        Ok(p)
    }

    /// The chain `o0 < o1 < … < o(n-1)`.
    pub fn chain(n: usize) -> Result<Self> {
        let objects = (0..n).map(|i| format!("o{i}")).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::poset(objects, &rel)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::poset((0..n).map(|i| format!("o{i}")).collect(), &[])
    }

    // ---- interchange ------------------------------------------------------

    pub fn from_doc(doc: &PresentationDoc) -> Result<Self> {
        let mut p = FiniteCatPresentation::new(doc.objects.clone());
        let obj = |name: &str| {
            doc.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))
        };
        for m in &doc.morphisms {
            p.add_morphism(m.name.clone(), obj(&m.from)?, obj(&m.to)?)?;
        }
        for (o, m) in &doc.identities {
            let m = p.morphism_index(m)?;
            p.set_identity(obj(o)?, m);
        }
        for e in &doc.composition {
            let g = p.morphism_index(&e.g)?;
            let f = p.morphism_index(&e.f)?;
            let h = p.morphism_index(&e.result)?;
            if p.table.insert((g, f), h).is_some() {
                return Err(Error::InvalidPresentation(format!("{} ∘ {} listed twice", e.g, e.f)));
            }
        }
        if let Some(inv) = &doc.inverses {
            for (f, g) in inv {
                let (f, g) = (p.morphism_index(f)?, p.morphism_index(g)?);
                p.set_inverse(f, g);
            }
        }
        p.check()?;
        Ok(p)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            objects: self.objects.clone(),
            morphisms: (0..self.names.len())
                .map(|m| MorphismDecl {
                    name: self.names[m].clone(),
                    from: self.objects[self.source[m]].clone(),
                    to: self.objects[self.target[m]].clone(),
                })
                .collect(),
            identities: (0..self.objects.len())
                .filter_map(|x| self.identity[x].map(|m| (self.objects[x].clone(), self.names[m].clone())))
                .collect(),
            composition: self
                .composition_entries()
                .into_iter()
                .map(|((g, f), h)| CompositeDecl {
                    g: self.names[g].clone(),
                    f: self.names[f].clone(),
                    result: self.names[h].clone(),
                })
                .collect(),
            inverses: self.inverses.as_ref().map(|inv| {
                inv.iter()
                    .map(|(&f, &g)| (self.names[f].clone(), self.names[g].clone()))
                    .collect()
            }),
        }
    }
}

/// JSON form of a [`FiniteCatPresentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDecl>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<CompositeDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverses: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDecl {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeDecl {
    pub g: String,
    pub f: String,
    pub result: String,
}

/// A random finite category: a subcategory of finite sets generated by a
/// few random maps between small sets, closed under composition. Draws
/// whose closure exceeds `max_morphisms` are rejected and redrawn.
/// Deterministic in `seed`.
pub fn random_presentation(seed: u64, max_morphisms: usize) -> FiniteCatPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n_obj = rng.gen_range(1..=3usize);
        let sizes: Vec<usize> = (0..n_obj).map(|_| rng.gen_range(1..=3usize)).collect();
        let bijective = rng.gen_bool(0.25);
        let n_gen = rng.gen_range(0..=3usize);
        let mut gens = Vec::new();
        for _ in 0..n_gen {
            let a = rng.gen_range(0..n_obj);
            let b = if bijective {
                let same: Vec<usize> = (0..n_obj).filter(|&b| sizes[b] == sizes[a]).collect();
                same[rng.gen_range(0..same.len())]
            } else {
                rng.gen_range(0..n_obj)
            };
            let map: Vec<usize> = if bijective {
                let mut perm: Vec<usize> = (0..sizes[a]).collect();
                for i in (1..perm.len()).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                perm
            } else {
                (0..sizes[a]).map(|_| rng.gen_range(0..sizes[b])).collect()
            };
            gens.push((a, b, map));
        }
        if let Some(p) = close_under_composition(&sizes, &gens, max_morphisms) {
            return p;
        }
    }
}

type Arrow = (usize, usize, Vec<usize>);

fn close_under_composition(sizes: &[usize], gens: &[Arrow], max_morphisms: usize) -> Option<FiniteCatPresentation> {
    let n = sizes.len();
    let mut arrows: Vec<Arrow> = (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
    let mut seen: HashSet<Arrow> = arrows.iter().cloned().collect();
    for g in gens {
        if seen.insert(g.clone()) {
            arrows.push(g.clone());
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = arrows.clone();
        for g in &snapshot {
            for f in &snapshot {
                if g.0 != f.1 {
                    continue;
                }
                let h: Arrow = (f.0, g.1, f.2.iter().map(|&i| g.2[i]).collect());
                if seen.insert(h.clone()) {
                    arrows.push(h);
                    changed = true;
                    if arrows.len() > max_morphisms {
                        return None;
                    }
                }
            }
        }
    }
    let objects: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut p = FiniteCatPresentation::new(objects);
    let mut index = HashMap::new();
    for (k, a) in arrows.iter().enumerate() {
        let name = if k < n { format!("1_s{k}") } else { format!("m{k}") };
        let id = p.add_morphism(name, a.0, a.1).ok()?;
        index.insert(a.clone(), id);
    }
    for x in 0..n {
        p.set_identity(x, x);
    }
    for g in &arrows {
        for f in &arrows {
            if g.0 == f.1 {
                let h: Arrow = (f.0, g.1, f.2.iter().map(|&i| g.2[i]).collect());
                p.set_composite(index[g], index[f], index[&h]);
            }
        }
    }
    p.check().ok()?;
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let z2 = FiniteCatPresentation::cyclic_group(2).unwrap().classify();
        assert_eq!(
            z2,
            Classification {
                is_groupoid: true,
                is_delta: false,
                is_discrete: false
            }
        );
        let a2 = FiniteCatPresentation::chain(2).unwrap().classify();
        assert_eq!(
            a2,
            Classification {
                is_groupoid: false,
                is_delta: true,
                is_discrete: false
            }
        );
        let d2 = FiniteCatPresentation::discrete(2).unwrap().classify();
        assert!(d2.is_groupoid && d2.is_delta && d2.is_discrete);
    }

    #[test]
    fn isomorphic_distinct_objects_are_not_delta() {
        // two objects joined by a unique isomorphism: trivial endomorphisms
        // but not skeletal
        let p = FiniteCatPresentation::connected_groupoid(2, &[1]).unwrap();
        let c = p.classify();
        assert!(c.is_groupoid && !c.is_delta && !c.is_discrete);
    }

    #[test]
    fn groupoid_hom_sets_have_vertex_group_order() {
        let p = FiniteCatPresentation::connected_groupoid(2, &[2]).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(p.hom_size(x, y), 2);
            }
        }
        assert!(p.classify().is_groupoid);
    }

    #[test]
    fn klein_four_and_cyclic_tables_are_groups() {
        for orders in [&[2usize, 2][..], &[4], &[3]] {
            let p = FiniteCatPresentation::abelian_group(orders).unwrap();
            assert!(p.classify().is_groupoid);
        }
    }

    #[test]
    fn broken_table_is_rejected() {
        let mut p = FiniteCatPresentation::cyclic_group(2).unwrap();
        // e∘g = e breaks the unit law
        p.set_composite(0, 1, 0);
        assert!(p.check().is_err());
    }

    #[test]
    fn poset_with_two_minimal_elements() {
        let p = FiniteCatPresentation::poset(vec!["x".into(), "y".into(), "z".into()], &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(p.morphism_count(), 5);
        assert!(p.classify().is_delta);
        assert!(FiniteCatPresentation::poset(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn random_presentations_are_categories_and_deterministic() {
        for seed in 0..40 {
            let p = random_presentation(seed, 10);
            p.check().unwrap();
            assert!(p.morphism_count() <= 10);
            assert_eq!(p, random_presentation(seed, 10));
        }
    }

    #[test]
    fn doc_round_trip() {
        let p = FiniteCatPresentation::connected_groupoid(2, &[2]).unwrap();
        let doc = p.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back: PresentationDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(FiniteCatPresentation::from_doc(&back).unwrap().to_doc(), doc);
    }
}
