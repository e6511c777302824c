use std::collections::BTreeMap;

use proptest::prelude::*;

use polymmp::lp::{lp_extremize, LinearSystem, LpOutcome, Sense};
use polymmp::polytope::HPolyhedron;
use polymmp::{Rat, RatMat, RatVec};

/// `A x >= b` with random rows plus a bounding box `|x_i| <= 4`.
#[derive(Debug, Clone)]
struct Boxed {
    n: usize,
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

fn boxed() -> impl Strategy<Value = Boxed> {
    (1usize..=3).prop_flat_map(|n| {
        (prop::collection::vec(prop::collection::vec(-3i64..=3, n), 0..=5), prop::collection::vec(-6i64..=2, 5)).prop_map(
            move |(mut rows, extra)| {
                let mut rhs: Vec<i64> = extra[..rows.len()].to_vec();
                for i in 0..n {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    rows.push(e.clone());
                    e[i] = -1;
                    rows.push(e);
                    rhs.extend([-4, -4]);
                }
                Boxed { n, rows, rhs }
            },
        )
    })
}

impl Boxed {
    fn polyhedron(&self) -> HPolyhedron {
        let rows: Vec<&[i64]> = self.rows.iter().map(Vec::as_slice).collect();
        HPolyhedron::new(RatMat::from_int_rows(self.n, &rows), RatVec::from_ints(&self.rhs)).unwrap()
    }

    fn system(&self) -> LinearSystem {
        let mut s = LinearSystem::new(self.n);
        for (r, b) in self.rows.iter().zip(&self.rhs) {
            s.ge(RatVec::from_ints(r), Rat::from_int(*b));
        }
        s
    }

    fn feasible(&self, x: &[Rat]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(r, b)| {
            let lhs: Rat = r.iter().zip(x).map(|(a, xi)| &Rat::from_int(*a) * xi).sum();
            lhs >= Rat::from_int(*b)
        })
    }

    /// Vertices by Cramer's rule on every `n`-subset of rows.
    fn cramer_vertices(&self) -> Vec<Vec<Rat>> {
        let n = self.n;
        let m = self.rows.len();
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for mask in 0u32..1 << m {
            if mask.count_ones() as usize != n {
                continue;
            }
            let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let a: Vec<Vec<i64>> = idx.iter().map(|&i| self.rows[i].clone()).collect();
            let d = det(&a);
            if d == 0 {
                continue;
            }
            let x: Vec<Rat> = (0..n)
                .map(|j| {
                    let mut aj = a.clone();
                    for (k, &i) in idx.iter().enumerate() {
                        aj[k][j] = self.rhs[i];
                    }
                    Rat::frac(det(&aj), d)
                })
                .collect();
            if self.feasible(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let sub: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&sub)
            })
            .sum(),
    }
}

/// Fourier–Motzkin: `A x >= b` is infeasible iff elimination produces `0 >= c` with `c > 0`.
fn fm_empty(rows: Vec<(Vec<Rat>, Rat)>) -> bool {
    let Some(n) = rows.first().map(|r| r.0.len()) else { return false };
    if n == 0 {
        return rows.iter().any(|(_, b)| b.is_positive());
    }
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for (a, b) in rows {
        let last = a[n - 1].clone();
        let head: Vec<Rat> = a[..n - 1].to_vec();
        match last.signum() {
            1 => pos.push((head, b, last)),
            -1 => neg.push((head, b, last)),
            _ => rest.push((head, b)),
        }
    }
    for (pa, pb, pc) in &pos {
        for (na, nb, nc) in &neg {
            let (sp, sn) = (-nc.clone(), pc.clone());
            let a: Vec<Rat> = pa.iter().zip(na).map(|(x, y)| &(x * &sp) + &(y * &sn)).collect();
            rest.push((a, &(pb * &sp) + &(nb * &sn)));
        }
    }
    if rest.is_empty() {
        return false;
    }
    fm_empty(rest)
}

fn objective() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lp_minimum_is_the_best_vertex(p in boxed(), c in objective()) {
        let c = RatVec::from_ints(&c[..p.n]);
        let verts = p.cramer_vertices();
        let out = lp_extremize(&p.system(), &c, Sense::Minimize);
        if verts.is_empty() {
            prop_assert_eq!(out, LpOutcome::Infeasible);
        } else {
            let best = verts.iter().map(|v| c.dot(&RatVec(v.clone()))).min().unwrap();
            prop_assert_eq!(out.value(), Some(&best));
        }
    }

    #[test]
    fn emptiness_matches_fourier_motzkin(p in boxed()) {
        let rows = p.rows.iter().zip(&p.rhs).map(|(r, b)| (r.iter().map(|&x| Rat::from_int(x)).collect(), Rat::from_int(*b))).collect();
        prop_assert_eq!(p.polyhedron().is_empty(), fm_empty(rows));
    }

    #[test]
    fn vertices_match_cramer_enumeration(p in boxed()) {
        let mut ours: Vec<Vec<Rat>> = p.polyhedron().vertices().unwrap().into_iter().map(|v| v.point.0).collect();
        let mut theirs = p.cramer_vertices();
        ours.sort();
        theirs.sort();
        prop_assert_eq!(ours, theirs);
    }

    #[test]
    fn face_lattice_has_euler_characteristic_one(p in boxed()) {
        let h = p.polyhedron();
        let faces = h.faces().unwrap();
        prop_assume!(!faces.is_empty());
        let mut by_dim: BTreeMap<usize, i64> = BTreeMap::new();
        for f in &faces {
            *by_dim.entry(f.dim).or_default() += 1;
        }
        let chi: i64 = by_dim.iter().map(|(&d, &c)| if d % 2 == 0 { c } else { -c }).sum();
        prop_assert_eq!(chi, 1);
        let top = *by_dim.keys().max().unwrap();
        prop_assert_eq!(by_dim[&top], 1);
        prop_assert_eq!(Some(top), h.dimension().unwrap());
    }

    #[test]
    fn facets_of_full_polytopes_have_codimension_one(p in boxed()) {
        let h = p.polyhedron();
        prop_assume!(h.dimension().unwrap() == Some(p.n));
        let faces = h.faces().unwrap();
        for f in h.facets().unwrap() {
            let rec = faces.iter().find(|r| r.active == f.active).expect("facet is a face");
            prop_assert_eq!(rec.dim + 1, p.n);
        }
    }
}
