mod common;

use std::collections::BTreeSet;

use common::{fixture, r};
use polymmp::horospherical::*;
use polymmp::mmp::{build_family, run_mmp, terminal_data, FamilyData, StepKind};
use polymmp::roots::{RootKind, RootSystem};
use polymmp::{Rat, RatVec};

fn data(name: &str) -> FamilyData {
    build_family(&fixture(name)).unwrap()
}

fn all_rows(d: &FamilyData) -> Vec<usize> {
    (0..d.rows.len()).collect()
}

fn view_at(d: &FamilyData, eps: Rat) -> PolytopeView {
    d.view(&all_rows(d), &eps).unwrap()
}

fn a2(parabolic: &[usize], basis: &[&[i64]]) -> HoroSpace {
    HoroSpace::new(
        RootSystem::new(RootKind::A, 2).unwrap(),
        parabolic.iter().copied().collect(),
        basis.iter().map(|b| RatVec::from_ints(b)).collect(),
        Some(vec!["alpha".into(), "beta".into()]),
    )
    .unwrap()
}

#[test]
fn c_values_of_a2() {
    let full = a2(&[], &[&[1, 0], &[0, 1]]);
    let c: Vec<Rat> = full.c_values().into_iter().map(|(_, c)| c).collect();
    assert_eq!(c, [Rat::from_int(2), Rat::from_int(2)]);
    let levi = a2(&[0], &[&[0, 1]]);
    assert_eq!(levi.c_values(), [(1, Rat::from_int(3))]);
}

#[test]
fn coroot_restrictions_to_rank_one_lattices() {
    let diag = a2(&[], &[&[1, 1]]);
    assert_eq!(diag.coroot_restriction(0).unwrap(), RatVec::from_ints(&[1]));
    assert_eq!(diag.coroot_restriction(1).unwrap(), RatVec::from_ints(&[1]));
    let skew = a2(&[], &[&[1, 2]]);
    assert_eq!(skew.coroot_restriction(0).unwrap(), RatVec::from_ints(&[1]));
    assert_eq!(skew.coroot_restriction(1).unwrap(), RatVec::from_ints(&[2]));
}

#[test]
fn bundle_moment_segment_and_round_trip() {
    let e = fixture("ex_horo1");
    let m = e.moment_polytopes().unwrap();
    let got: BTreeSet<RatVec> = m.q_vertices.iter().map(|v| e.space.to_weight(v)).collect();
    let want: BTreeSet<RatVec> = [RatVec::from_ints(&[1, 1]), RatVec::from_ints(&[4, 4])].into_iter().collect();
    assert_eq!(got, want);
    let d = divisor_from_polytopes(&e.space, &e.rays, &m.q_tilde_vertices, &m.q_vertices).unwrap();
    assert_eq!(d, e.divisor);
}

#[test]
fn bundle_curve_degrees() {
    let d = data("ex_horo1");
    let curves = curves_with_intersections(&view_at(&d, Rat::zero()), &d.rows);
    let edges: Vec<&Rat> =
        curves.iter().filter(|c| matches!(c.curve, Curve::Edge { .. })).map(|c| &c.d_dot).collect();
    assert_eq!(edges, [&Rat::from_int(3)]);
    let alpha: BTreeSet<Rat> = curves
        .iter()
        .filter(|c| matches!(&c.curve, Curve::Schubert { color, .. } if color == "alpha"))
        .map(|c| c.d_dot.clone())
        .collect();
    assert_eq!(alpha, [Rat::one(), Rat::from_int(4)].into_iter().collect());
}

#[test]
fn bundle_trace_ends_over_a_point() {
    let d = data("ex_horo1");
    let (dec, trace) = run_mmp(&d).unwrap();
    let steps: Vec<(StepKind, Rat)> = trace.steps.iter().map(|s| (s.kind, s.epsilon.clone())).collect();
    assert_eq!(steps, [(StepKind::Divisorial, Rat::one()), (StepKind::MoriFibration, r(4, 3))]);
    let t = terminal_data(&d, &dec).unwrap().unwrap();
    assert!(t.m1_basis.is_empty());
    assert_eq!(t.r1, ["alpha", "beta"]);
    assert_eq!(t.z_dim, Some(0));
}

#[test]
fn bundle_with_a_heavier_color_keeps_a_q_factorial_segment() {
    let d = data("ex_horo2");
    let (dec, _) = run_mmp(&d).unwrap();
    let class = dec.classes.iter().find(|c| c.interval.to_string() == "[1,4/3)").unwrap();
    let view = d.view_of(class).unwrap();
    assert!(is_q_factorial(&view, &d.rows));
    assert_eq!(picard_number(&view, &d.rows), 2);
}

#[test]
fn pyramid_is_gorenstein_but_not_factorial() {
    let d = data("ex_toric1");
    let x = view_at(&d, r(1, 2));
    assert!(is_q_factorial(&x, &d.rows));
    assert_eq!(picard_number(&x, &d.rows), 3);
    let y = view_at(&d, r(3, 2));
    assert!(is_q_gorenstein(&y, &d.rows).is_ok());
    assert!(!is_q_factorial(&y, &d.rows));
}

#[test]
fn general_cut_is_not_gorenstein_at_the_flip() {
    let d = data("ex_toric2");
    let y = view_at(&d, r(1, 2));
    assert!(matches!(is_q_gorenstein(&y, &d.rows), Err(HoroError::NotQGorenstein(_))));
}

#[test]
fn divisorial_contraction_of_the_pyramid() {
    let d = data("ex_toric1");
    let x = view_at(&d, r(1, 2));
    let y = view_at(&d, r(3, 2));
    assert!(morphism_exists(&x, &y, &d.rows).exists);
    let back = morphism_exists(&y, &x, &d.rows);
    assert!(!back.exists);
    assert!(back.reason.is_some());
    let q0 = view_at(&data("ex_horo5"), Rat::zero());
    assert!(morphism_exists(&q0, &q0, &data("ex_horo5").rows).exists);
}

#[test]
fn apex_normal_cone() {
    let d = data("ex_toric1");
    let y = view_at(&d, r(3, 2));
    let apex = y.vertices.iter().find(|v| v.active.len() == 4).expect("apex");
    let names: BTreeSet<&str> = apex.active.iter().map(|&i| d.rows.name(i)).collect();
    assert_eq!(names, ["x3", "x4", "x5", "x6"].into_iter().collect());
}

#[test]
fn rank_two_validity_and_equivalence() {
    let d = data("ex_horo5");
    assert!(gh_valid(&d.embedding.space, &view_at(&d, Rat::one()), &d.rows).is_ok());
    assert!(gh_valid(&d.embedding.space, &view_at(&d, r(5, 4)), &d.rows).is_err());
    assert!(gh_equivalent(&view_at(&d, r(1, 2)), &view_at(&d, r(3, 4)), &d.rows));
    assert!(!gh_equivalent(&view_at(&d, Rat::one()), &view_at(&d, r(9, 8)), &d.rows));
    let fan = fan_from_polytope(&view_at(&d, r(9, 8)), &d.rows);
    assert_eq!(fan.colors(), [0].into_iter().collect());
}

#[test]
fn rank_two_vertex_on_a_wall() {
    let d = data("ex_horo5");
    let v = view_at(&d, Rat::zero());
    let mv = v.moment_vertices(&d.embedding.space, &d.rows);
    let k = mv.iter().position(|p| d.embedding.space.to_weight(p) == RatVec::from_ints(&[1, 0])).unwrap();
    let names: BTreeSet<&str> = v.vertices[k].active.iter().map(|&i| d.rows.name(i)).collect();
    assert_eq!(names, ["x2", "x3", "beta"].into_iter().collect());
    let vertex = &v.vertices[k];
    let through: BTreeSet<&str> = v
        .facets
        .iter()
        .filter(|f| f.active.iter().all(|i| vertex.active.contains(i)))
        .flat_map(|f| f.rows.iter().map(|&i| d.rows.name(i)))
        .collect();
    assert_eq!(through, ["x2", "x3"].into_iter().collect());
    let curves = curves_with_intersections(&v, &d.rows);
    let at_k = &v.vertices[k].point;
    assert!(!curves
        .iter()
        .any(|c| matches!(&c.curve, Curve::Schubert { vertex, color } if vertex == at_k && color == "beta")));
}

#[test]
fn random_embeddings_round_trip_and_factorial_implies_gorenstein() {
    let mut rng = common::random::rng();
    let mut seen = 0;
    let mut factorial = 0;
    while seen < 200 {
        let e = if seen % 2 == 0 { common::random::toric(&mut rng) } else { common::random::a2(&mut rng) };
        let Some(e) = e else { continue };
        seen += 1;
        let m = e.moment_polytopes().unwrap();
        let d = divisor_from_polytopes(&e.space, &e.rays, &m.q_tilde_vertices, &m.q_vertices).unwrap();
        assert_eq!(d, e.divisor);
        let view = e.validate_ample().unwrap();
        let rows = e.rows().unwrap();
        assert_eq!(fan_from_polytope(&view, &rows), e.fan);
        if is_q_factorial(&view, &rows) {
            factorial += 1;
            assert!(is_q_gorenstein(&view, &rows).is_ok(), "Q-factorial but not Q-Gorenstein: {:?}", e.divisor);
        }
    }
    assert!(factorial > 0);
}

#[test]
fn ray_through_a_color_image_is_rejected() {
    let space = a2(&[], &[&[1, 0], &[0, 1]]);
    let rays: Vec<RatVec> = [[-1, -2], [1, -1], [0, 1]].iter().map(|r| RatVec::from_ints(r)).collect();
    let rows = RowSystem::new(&space, &rays).unwrap();
    let view = PolytopeView::new(&rows, RatVec::from_ints(&[-5, -3, -1, -3, -1]), &[0, 1, 2, 3, 4], Rat::zero()).unwrap();
    let fan = fan_from_polytope(&view, &rows);
    assert!(fan.colors().contains(&1));
    let divisor = BDivisor {
        g_stable: vec![Rat::from_int(5), Rat::from_int(3), Rat::one()],
        colors: [(0, Rat::from_int(3)), (1, Rat::one())].into_iter().collect(),
    };
    let err = PolarizedEmbedding::new(space, rays, fan, divisor).unwrap_err();
    assert!(matches!(err, HoroError::Fan(_)), "{err}");
}
