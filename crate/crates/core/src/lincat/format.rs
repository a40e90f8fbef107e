use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::FieldSpec;

use super::FinLinCat;

/// Field member of the interchange formats: `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl FieldDoc {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Named(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDoc::Named(s) => Err(Error::Format(format!("unknown field {s:?}"))),
            FieldDoc::Prime { fp } => FieldSpec::prime(*fp),
        }
    }

    pub fn from_spec(k: FieldSpec) -> Self {
        match k {
            FieldSpec::Rationals => FieldDoc::Named("Q".into()),
            FieldSpec::PrimeField(p) => FieldDoc::Prime { fp: p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub from: String,
    pub to: String,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionDoc {
    pub g: String,
    pub f: String,
    pub result: Vec<TermDoc>,
}

/// JSON interchange form of a [`FinLinCat`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub field: FieldDoc,
    pub objects: Vec<String>,
    pub homs: Vec<HomDoc>,
    pub identity: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub composition: Vec<CompositionDoc>,
}

impl FinLinCat {
    /// Builds a category from its interchange form. Structural problems
    /// (unknown labels, bad scalars) are errors; axiom failures are left for
    /// [`FinLinCat::validate`].
    pub fn from_doc(doc: &CategoryDoc) -> Result<Self> {
        let k = doc.field.to_spec()?;
        let obj = |name: &str| {
            doc.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))
        };
        let mut homs = Vec::new();
        for h in &doc.homs {
            homs.push(((obj(&h.from)?, obj(&h.to)?), h.basis.clone()));
        }
        let mut c = FinLinCat::new(k, doc.objects.clone(), homs)?;
        for (o, terms) in &doc.identity {
            let x = obj(o)?;
            let mut v = c.zero_vector(x, x);
            for (label, coeff) in terms {
                let id = c.basis_id(label)?;
                let b = c.basis(id);
                if b.source != x || b.target != x {
                    return Err(Error::Format(format!(
                        "identity of {o} uses {label}, not an endomorphism"
                    )));
                }
                v[b.local] = k.parse_scalar(coeff)?;
            }
            c.set_identity(x, v)?;
        }
        let mut seen = std::collections::HashSet::new();
        for e in &doc.composition {
            let g = c.basis_id(&e.g)?;
            let f = c.basis_id(&e.f)?;
            if !seen.insert((g, f)) {
                return Err(Error::Format(format!("composition ({}, {}) listed twice", e.g, e.f)));
            }
            let (gb, fb) = (c.basis(g).clone(), c.basis(f).clone());
            if gb.source != fb.target {
                return Err(Error::Format(format!("{} ∘ {} is not composable", e.g, e.f)));
            }
            let mut v = c.zero_vector(fb.source, gb.target);
            for t in &e.result {
                let id = c.basis_id(&t.basis)?;
                let b = c.basis(id);
                if b.source != fb.source || b.target != gb.target {
                    return Err(Error::Format(format!(
                        "{} ∘ {} has a term {} outside the target hom space",
                        e.g, e.f, t.basis
                    )));
                }
                v[b.local] = &v[b.local] + &k.parse_scalar(&t.coeff)?;
            }
            c.set_composition(g, f, v);
        }
        Ok(c)
    }

    /// Interchange form with deterministic ordering; zero composites and
    /// zero coefficients are omitted.
    pub fn to_doc(&self) -> CategoryDoc {
        let n = self.object_count();
        let mut homs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.hom_dim(x, y) > 0 {
                    homs.push(HomDoc {
                        from: self.object_name(x).to_string(),
                        to: self.object_name(y).to_string(),
                        basis: self
                            .hom_basis(x, y)
                            .iter()
                            .map(|&id| self.basis(id).label.clone())
                            .collect(),
                    });
                }
            }
        }
        let mut identity = BTreeMap::new();
        for x in 0..n {
            if let Some(v) = self.identity_entry(x) {
                let terms = self
                    .hom_basis(x, x)
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&id, c)| (self.basis(id).label.clone(), c.to_string()))
                    .collect();
                identity.insert(self.object_name(x).to_string(), terms);
            }
        }
        let mut entries: Vec<_> = self.composition_entries().collect();
        entries.sort_by_key(|(k, _)| **k);
        let composition = entries
            .into_iter()
            .filter_map(|(&(g, f), v)| {
                let fb = self.basis(f);
                let gb = self.basis(g);
                let result: Vec<TermDoc> = self
                    .hom_basis(fb.source, gb.target)
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&id, c)| TermDoc {
                        basis: self.basis(id).label.clone(),
                        coeff: c.to_string(),
                    })
                    .collect();
                (!result.is_empty()).then(|| CompositionDoc {
                    g: gb.label.clone(),
                    f: fb.label.clone(),
                    result,
                })
            })
            .collect();
        CategoryDoc {
            field: FieldDoc::from_spec(self.field()),
            objects: self.object_names().to_vec(),
            homs,
            identity,
            composition,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CategoryDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }
}
