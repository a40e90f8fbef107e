#![allow(dead_code, clippy::needless_range_loop)]

use sepcat::lincat::{linearize, random_presentation, FiniteCatPresentation};
use sepcat::{FieldSpec, FinLinCat};

pub fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::Rationals,
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
    ]
}

/// The groupoids of the Maschke check: four groups and the connected
/// two-object groupoid with vertex group Z/2.
pub fn groupoids() -> Vec<(String, FiniteCatPresentation)> {
    vec![
        ("Z/2".into(), FiniteCatPresentation::cyclic_group(2).unwrap()),
        ("Z/3".into(), FiniteCatPresentation::cyclic_group(3).unwrap()),
        ("Z/4".into(), FiniteCatPresentation::cyclic_group(4).unwrap()),
        ("Z/2xZ/2".into(), FiniteCatPresentation::abelian_group(&[2, 2]).unwrap()),
        (
            "2-object groupoid".into(),
            FiniteCatPresentation::connected_groupoid(2, &[2]).unwrap(),
        ),
    ]
}

pub fn non_discrete_posets() -> Vec<(String, FiniteCatPresentation)> {
    vec![
        ("A2".into(), FiniteCatPresentation::chain(2).unwrap()),
        ("A3".into(), FiniteCatPresentation::chain(3).unwrap()),
        (
            "x<z>y".into(),
            FiniteCatPresentation::poset(vec!["x".into(), "y".into(), "z".into()], &[(0, 2), (1, 2)]).unwrap(),
        ),
    ]
}

pub fn discretes() -> Vec<(String, FiniteCatPresentation)> {
    (1..=3)
        .map(|n| (format!("discrete({n})"), FiniteCatPresentation::discrete(n).unwrap()))
        .collect()
}

pub fn delta_fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::Rationals,
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
    ]
}

/// Order of the hom sets is invertible in `k`, checked by plain integer
/// arithmetic.
pub fn sizes_invertible(p: &FiniteCatPresentation, k: FieldSpec) -> bool {
    let ch = k.characteristic() as usize;
    let n = p.object_count();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let s = p.hom_size(x, y);
            s == 0 || ch == 0 || !s.is_multiple_of(ch)
        })
    })
}

pub struct Instance {
    pub name: String,
    pub cat: FinLinCat,
}

/// Every separable instance of the groupoid and delta checks.
pub fn separable_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, p) in groupoids() {
        for k in fields() {
            if sizes_invertible(&p, k) {
                out.push(Instance {
                    name: format!("{name} over {k}"),
                    cat: linearize(&p, k).unwrap(),
                });
            }
        }
    }
    for (name, p) in discretes() {
        for k in delta_fields() {
            out.push(Instance {
                name: format!("{name} over {k}"),
                cat: linearize(&p, k).unwrap(),
            });
        }
    }
    out
}

/// Every instance of the groupoid and delta checks, separable or not.
pub fn named_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, p) in groupoids() {
        for k in fields() {
            out.push(Instance {
                name: format!("{name} over {k}"),
                cat: linearize(&p, k).unwrap(),
            });
        }
    }
    for (name, p) in non_discrete_posets().into_iter().chain(discretes()) {
        for k in delta_fields() {
            out.push(Instance {
                name: format!("{name} over {k}"),
                cat: linearize(&p, k).unwrap(),
            });
        }
    }
    out
}

pub fn random_instances(seeds: std::ops::Range<u64>, max_morphisms: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in seeds {
        let p = random_presentation(seed, max_morphisms);
        for k in [FieldSpec::Rationals, FieldSpec::prime(2).unwrap()] {
            out.push(Instance {
                name: format!("random seed {seed} over {k}"),
                cat: linearize(&p, k).unwrap(),
            });
        }
    }
    out
}

/// Residue of a scalar of F2 as a bit.
pub fn bit(s: &sepcat::Scalar) -> u8 {
    match s.to_string().as_str() {
        "0" => 0,
        "1" => 1,
        other => panic!("not an F2 scalar: {other}"),
    }
}

/// Exhaustive feasibility over F2: tries every 0/1 assignment of the
/// coefficients of all `a_x^y` and evaluates both conditions with bit
/// arithmetic. `None` when there are more than `max_unknowns` unknowns.
pub fn f2_exhaustive_feasible(c: &FinLinCat, max_unknowns: usize) -> Option<bool> {
    let n = c.object_count();
    let mut blocks = Vec::new();
    for x in 0..n {
        for y in 0..n {
            blocks.push((x, y, c.hom_dim(y, x), c.hom_dim(x, y)));
        }
    }
    let unknowns: usize = blocks.iter().map(|b| b.2 * b.3).sum();
    if unknowns > max_unknowns {
        return None;
    }
    let comp = |g: usize, f: usize| -> Vec<u8> { c.compose_basis(g, f).iter().map(bit).collect() };
    for mask in 0u32..(1 << unknowns) {
        // a[x][y][i][j]
        let mut a = vec![vec![Vec::new(); n]; n];
        let mut pos = 0;
        for &(x, y, r, s) in &blocks {
            let mut m = vec![vec![0u8; s]; r];
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = ((mask >> pos) & 1) as u8;
                    pos += 1;
                }
            }
            a[x][y] = m;
        }
        let mut ok = true;
        for x in 0..n {
            let mut total = vec![0u8; c.hom_dim(x, x)];
            for y in 0..n {
                for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                    for (j, &v) in c.hom_basis(x, y).iter().enumerate() {
                        if a[x][y][i][j] == 1 {
                            for (t, w) in total.iter_mut().zip(comp(u, v)) {
                                *t ^= w;
                            }
                        }
                    }
                }
            }
            let id: Vec<u8> = c.identity(x).iter().map(bit).collect();
            ok &= total == id;
        }
        for (f, fb) in c.basis_elements().iter().enumerate() {
            if !ok {
                break;
            }
            let (x, z) = (fb.source, fb.target);
            for y in 0..n {
                let mut res = vec![vec![0u8; c.hom_dim(x, y)]; c.hom_dim(y, z)];
                for (i, &u) in c.hom_basis(y, x).iter().enumerate() {
                    for j in 0..c.hom_dim(x, y) {
                        if a[x][y][i][j] == 1 {
                            for (r, w) in comp(f, u).into_iter().enumerate() {
                                res[r][j] ^= w;
                            }
                        }
                    }
                }
                for (j, &v) in c.hom_basis(z, y).iter().enumerate() {
                    for i in 0..c.hom_dim(y, z) {
                        if a[z][y][i][j] == 1 {
                            for (r, w) in comp(v, f).into_iter().enumerate() {
                                res[i][r] ^= w;
                            }
                        }
                    }
                }
                ok &= res.iter().flatten().all(|&b| b == 0);
            }
        }
        if ok {
            return Some(true);
        }
    }
    Some(false)
}

/// `dim Der(A) − dim Inn(A)` for a one-object category over F2, by brute
/// force over all linear maps `A → A` (feasible for `dim A ≤ 3`).
pub fn f2_outer_derivations_dim(c: &FinLinCat) -> usize {
    assert_eq!(c.object_count(), 1);
    let d = c.hom_dim(0, 0);
    assert!(d <= 3);
    let basis = c.hom_basis(0, 0).to_vec();
    let mul = |a: &[u8], b: &[u8]| -> Vec<u8> {
        let mut out = vec![0u8; d];
        for (i, &gi) in basis.iter().enumerate() {
            for (j, &fj) in basis.iter().enumerate() {
                if a[i] & b[j] == 1 {
                    for (o, w) in out.iter_mut().zip(c.compose_basis(gi, fj).iter().map(bit)) {
                        *o ^= w;
                    }
                }
            }
        }
        out
    };
    let unit = |i: usize| -> Vec<u8> { (0..d).map(|k| u8::from(k == i)).collect() };
    let apply = |m: u32, v: &[u8]| -> Vec<u8> {
        // column j of the map is bits j*d .. j*d+d
        let mut out = vec![0u8; d];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 1 {
                for (i, o) in out.iter_mut().enumerate() {
                    *o ^= ((m >> (j * d + i)) & 1) as u8;
                }
            }
        }
        out
    };
    let xor = |a: &[u8], b: &[u8]| -> Vec<u8> { a.iter().zip(b).map(|(x, y)| x ^ y).collect() };
    let mut derivations = std::collections::BTreeSet::new();
    for m in 0u32..(1 << (d * d)) {
        let leibniz = (0..d).all(|i| {
            (0..d).all(|j| {
                let (a, b) = (unit(i), unit(j));
                apply(m, &mul(&a, &b)) == xor(&mul(&a, &apply(m, &b)), &mul(&apply(m, &a), &b))
            })
        });
        if leibniz {
            derivations.insert(m);
        }
    }
    let mut inner = std::collections::BTreeSet::new();
    for bits in 0u32..(1 << d) {
        let a: Vec<u8> = (0..d).map(|k| ((bits >> k) & 1) as u8).collect();
        let mut m = 0u32;
        for j in 0..d {
            let b = unit(j);
            let v = xor(&mul(&a, &b), &mul(&b, &a));
            for (i, &vi) in v.iter().enumerate() {
                m |= u32::from(vi) << (j * d + i);
            }
        }
        inner.insert(m);
    }
    (derivations.len().trailing_zeros() - inner.len().trailing_zeros()) as usize
}
