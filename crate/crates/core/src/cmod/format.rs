use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix};
use crate::lincat::FinLinCat;

use super::{Bimodule, BimoduleMap, LeftModule, ShortExactSeq};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub x: String,
    pub y: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeftActionDoc {
    pub f: String,
    pub y: String,
    pub matrix: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RightActionDoc {
    pub g: String,
    pub x: String,
    pub matrix: Vec<String>,
}

/// JSON form of a [`Bimodule`]. Unlisted spaces are zero; unlisted action
/// matrices are zero matrices of the right shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    pub spaces: Vec<SpaceDoc>,
    #[serde(default)]
    pub left_action: Vec<LeftActionDoc>,
    #[serde(default)]
    pub right_action: Vec<RightActionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpaceDoc {
    pub x: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub f: String,
    pub matrix: Vec<String>,
}

/// JSON form of a [`LeftModule`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeftModuleDoc {
    pub spaces: Vec<ModuleSpaceDoc>,
    #[serde(default)]
    pub action: Vec<ActionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub x: String,
    pub y: String,
    pub matrix: Vec<String>,
}

/// JSON form of a [`BimoduleMap`]; shapes come from the source and target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub components: Vec<ComponentDoc>,
}

/// JSON form of a [`ShortExactSeq`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SesDoc {
    pub m: BimoduleDoc,
    pub n: BimoduleDoc,
    pub p: BimoduleDoc,
    pub i: MapDoc,
    pub q: MapDoc,
}

fn parse_matrix(k: FieldSpec, rows: usize, cols: usize, text: &[String], what: &str) -> Result<Matrix> {
    if text.len() != rows * cols {
        return Err(Error::Format(format!(
            "{what}: expected {rows}x{cols} = {} entries, found {}",
            rows * cols,
            text.len()
        )));
    }
    let entries = text.iter().map(|t| k.parse_scalar(t)).collect::<Result<Vec<_>>>()?;
    Matrix::from_entries(k, rows, cols, entries)
}

fn object(c: &FinLinCat, name: &str) -> Result<usize> {
    c.object_index(name)
}

impl Bimodule {
    pub fn from_doc(c: &FinLinCat, doc: &BimoduleDoc) -> Result<Self> {
        let n = c.object_count();
        let k = c.field();
        let mut dims = vec![vec![0; n]; n];
        for s in &doc.spaces {
            dims[object(c, &s.x)?][object(c, &s.y)?] = s.dim;
        }
        let mut m = Bimodule::from_actions(
            c,
            dims.clone(),
            |f, y| {
                let b = c.basis(f);
                Matrix::zeros(k, dims[b.target][y], dims[b.source][y])
            },
            |g, x| {
                let b = c.basis(g);
                Matrix::zeros(k, dims[x][b.source], dims[x][b.target])
            },
        );
        for a in &doc.left_action {
            let f = c.basis_id(&a.f)?;
            let y = object(c, &a.y)?;
            let b = c.basis(f);
            let what = format!("left action of {} at {}", a.f, a.y);
            m.set_left(
                f,
                y,
                parse_matrix(k, dims[b.target][y], dims[b.source][y], &a.matrix, &what)?,
            );
        }
        for a in &doc.right_action {
            let g = c.basis_id(&a.g)?;
            let x = object(c, &a.x)?;
            let b = c.basis(g);
            let what = format!("right action of {} at {}", a.g, a.x);
            m.set_right(
                g,
                x,
                parse_matrix(k, dims[x][b.source], dims[x][b.target], &a.matrix, &what)?,
            );
        }
        Ok(m)
    }

    /// Interchange form; spaces of dimension zero and empty matrices are
    /// omitted.
    pub fn to_doc(&self, c: &FinLinCat) -> BimoduleDoc {
        let n = c.object_count();
        let mut spaces = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.dim(x, y) > 0 {
                    spaces.push(SpaceDoc {
                        x: c.object_name(x).into(),
                        y: c.object_name(y).into(),
                        dim: self.dim(x, y),
                    });
                }
            }
        }
        let mut left_action = Vec::new();
        let mut right_action = Vec::new();
        for (f, b) in c.basis_elements().iter().enumerate() {
            for y in 0..n {
                let m = self.left(f, y);
                if m.rows() * m.cols() > 0 {
                    left_action.push(LeftActionDoc {
                        f: b.label.clone(),
                        y: c.object_name(y).into(),
                        matrix: m.to_text(),
                    });
                }
            }
            for x in 0..n {
                let m = self.right(f, x);
                if m.rows() * m.cols() > 0 {
                    right_action.push(RightActionDoc {
                        g: b.label.clone(),
                        x: c.object_name(x).into(),
                        matrix: m.to_text(),
                    });
                }
            }
        }
        BimoduleDoc {
            spaces,
            left_action,
            right_action,
        }
    }
}

impl LeftModule {
    pub fn from_doc(c: &FinLinCat, doc: &LeftModuleDoc) -> Result<Self> {
        let n = c.object_count();
        let k = c.field();
        let mut dims = vec![0; n];
        for s in &doc.spaces {
            dims[object(c, &s.x)?] = s.dim;
        }
        let mut actions: Vec<Matrix> = c
            .basis_elements()
            .iter()
            .map(|b| Matrix::zeros(k, dims[b.target], dims[b.source]))
            .collect();
        for a in &doc.action {
            let f = c.basis_id(&a.f)?;
            let b = c.basis(f);
            actions[f] = parse_matrix(
                k,
                dims[b.target],
                dims[b.source],
                &a.matrix,
                &format!("action of {}", a.f),
            )?;
        }
        let mut it = actions.into_iter();
        Ok(LeftModule::from_action(c, dims, |_| {
            it.next().expect("one per basis element")
        }))
    }

    pub fn to_doc(&self, c: &FinLinCat) -> LeftModuleDoc {
        LeftModuleDoc {
            spaces: (0..c.object_count())
                .filter(|&x| self.dim(x) > 0)
                .map(|x| ModuleSpaceDoc {
                    x: c.object_name(x).into(),
                    dim: self.dim(x),
                })
                .collect(),
            action: c
                .basis_elements()
                .iter()
                .enumerate()
                .filter(|(f, _)| self.action(*f).rows() * self.action(*f).cols() > 0)
                .map(|(f, b)| ActionDoc {
                    f: b.label.clone(),
                    matrix: self.action(f).to_text(),
                })
                .collect(),
        }
    }
}

impl BimoduleMap {
    pub fn from_doc(c: &FinLinCat, source: &Bimodule, target: &Bimodule, doc: &MapDoc) -> Result<Self> {
        let n = c.object_count();
        let k = c.field();
        let mut comps: Vec<Vec<Matrix>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| Matrix::zeros(k, target.dim(x, y), source.dim(x, y)))
                    .collect()
            })
            .collect();
        for e in &doc.components {
            let (x, y) = (object(c, &e.x)?, object(c, &e.y)?);
            let what = format!("component ({}, {})", e.x, e.y);
            comps[x][y] = parse_matrix(k, target.dim(x, y), source.dim(x, y), &e.matrix, &what)?;
        }
        Ok(BimoduleMap::new(comps))
    }

    pub fn to_doc(&self, c: &FinLinCat) -> MapDoc {
        let n = c.object_count();
        let mut components = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let m = self.component(x, y);
                if m.rows() * m.cols() > 0 {
                    components.push(ComponentDoc {
                        x: c.object_name(x).into(),
                        y: c.object_name(y).into(),
                        matrix: m.to_text(),
                    });
                }
            }
        }
        MapDoc { components }
    }
}

impl ShortExactSeq {
    pub fn from_doc(c: &FinLinCat, doc: &SesDoc) -> Result<Self> {
        let m = Bimodule::from_doc(c, &doc.m)?;
        let n = Bimodule::from_doc(c, &doc.n)?;
        let p = Bimodule::from_doc(c, &doc.p)?;
        let i = BimoduleMap::from_doc(c, &m, &n, &doc.i)?;
        let q = BimoduleMap::from_doc(c, &n, &p, &doc.q)?;
        Ok(ShortExactSeq { m, n, p, i, q })
    }

    pub fn to_doc(&self, c: &FinLinCat) -> SesDoc {
        SesDoc {
            m: self.m.to_doc(c),
            n: self.n.to_doc(c),
            p: self.p.to_doc(c),
            i: self.i.to_doc(c),
            q: self.q.to_doc(c),
        }
    }
}
