mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use polymmp::horospherical::*;
use polymmp::roots::{RootKind, RootSystem};
use polymmp::{Rat, RatVec};

fn a2_full() -> HoroSpace {
    HoroSpace::new(
        RootSystem::new(RootKind::A, 2).unwrap(),
        BTreeSet::new(),
        vec![RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])],
        Some(vec!["alpha".into(), "beta".into()]),
    )
    .unwrap()
}

fn rank_two_example() -> PolarizedEmbedding {
    let space = a2_full();
    let rays = vec![RatVec::from_ints(&[0, -1]), RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[-1, 1])];
    let specs = [
        ConeSpec { rays: vec![1, 2], colors: [1].into_iter().collect() },
        ConeSpec { rays: vec![0, 1], colors: BTreeSet::new() },
        ConeSpec { rays: vec![0, 2], colors: BTreeSet::new() },
    ];
    let fan = ColoredFan::from_specs(&space, &rays, &specs).unwrap();
    let divisor = BDivisor {
        g_stable: vec![Rat::from_int(3), Rat::zero(), Rat::one()],
        colors: BTreeMap::from([(0, Rat::one()), (1, Rat::one())]),
    };
    PolarizedEmbedding::new(space, rays, fan, divisor).unwrap()
}

fn toric_embedding(a: &[i64]) -> PolarizedEmbedding {
    let space = HoroSpace::toric(3);
    let rows = toric_rows();
    let rays: Vec<RatVec> = rows.rows_iter().collect();
    let divisor = BDivisor { g_stable: a.iter().map(|&x| Rat::from_int(x)).collect(), colors: BTreeMap::new() };
    let rs = RowSystem::new(&space, &rays).unwrap();
    let b: RatVec = a.iter().map(|&x| Rat::from_int(-x)).collect();
    let view = PolytopeView::new(&rs, b, &(0..rays.len()).collect::<Vec<_>>(), Rat::zero()).unwrap();
    let fan = fan_from_polytope(&view, &rs);
    PolarizedEmbedding::new(space, rays, fan, divisor).unwrap()
}

#[test]
fn rank_two_moment_polytope() {
    let e = rank_two_example();
    assert_eq!(e.b_tilde(), RatVec::from_ints(&[-3, 0, -1, -1, -1]));
    let rows = e.rows().unwrap();
    assert_eq!(rows.c_tilde, RatVec::from_ints(&[1, 1, 1, 2, 2]));
    let m = e.moment_polytopes().unwrap();
    let got: BTreeSet<RatVec> = m.q_vertices.into_iter().collect();
    let want: BTreeSet<RatVec> =
        [[1, 0], [1, 4], [5, 4]].iter().map(|p| RatVec::from_ints(p)).collect();
    assert_eq!(got, want);
    let view = e.validate_ample().unwrap();
    assert!(gh_valid(&e.space, &view, &rows).is_ok());
    assert!(is_q_gorenstein(&view, &rows).is_ok());
}

#[test]
fn rank_two_divisor_round_trip() {
    let e = rank_two_example();
    let m = e.moment_polytopes().unwrap();
    let d = divisor_from_polytopes(&e.space, &e.rays, &m.q_tilde_vertices, &m.q_vertices).unwrap();
    assert_eq!(d, e.divisor);
}

#[test]
fn wrong_fan_is_not_ample() {
    let mut e = rank_two_example();
    let cone = e.fan.cones.iter().next().unwrap().clone();
    e.fan.cones.remove(&cone);
    assert!(matches!(e.validate_ample(), Err(HoroError::NotAmple(_))));
}

#[test]
fn toric_fan_and_picard() {
    let e = toric_embedding(&[1, 5, 3, 3, 3, 3]);
    assert_eq!(e.fan.cones.len(), 8);
    let view = e.validate_ample().unwrap();
    let rows = e.rows().unwrap();
    assert!(is_q_factorial(&view, &rows));
    assert_eq!(picard_number(&view, &rows), 3);
    let m = e.moment_polytopes().unwrap();
    let d = divisor_from_polytopes(&e.space, &e.rays, &m.q_tilde_vertices, &m.q_vertices).unwrap();
    assert_eq!(d, e.divisor);
}

#[test]
fn toric_curves_have_positive_degree() {
    let e = toric_embedding(&[1, 5, 3, 3, 3, 3]);
    let view = e.validate_ample().unwrap();
    let rows = e.rows().unwrap();
    let curves = curves_with_intersections(&view, &rows);
    assert_eq!(curves.len(), 12);
    assert!(curves.iter().all(|c| c.d_dot.is_positive() && c.k_dot.is_some()));
}

#[test]
fn morphism_to_a_point_and_not_back() {
    let e = toric_embedding(&[1, 5, 3, 3, 3, 3]);
    let rows = e.rows().unwrap();
    let all: Vec<usize> = (0..rows.len()).collect();
    let x = PolytopeView::new(&rows, e.b_tilde(), &all, Rat::zero()).unwrap();
    let rhs = e.b_tilde().add(&rows.c_tilde.scale(&Rat::from_int(2)));
    let y = PolytopeView::new(&rows, rhs, &all, Rat::from_int(2)).unwrap();
    assert_eq!(y.dim, Some(0));
    assert!(morphism_exists(&x, &y, &rows).exists);
    assert!(!morphism_exists(&y, &x, &rows).exists);
}

