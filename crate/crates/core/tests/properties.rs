mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use idealtri::builders::{build_x101, build_x103, double_cover};
use idealtri::census::{figure_eight, gieseking};
use idealtri::geom::{lobachevsky, max_volume};
use idealtri::homology::{first_homology, smith_normal_form, IntMatrix};
use idealtri::io::{parse, serialize};
use idealtri::iso::{are_isomorphic, canonical_signature, decode, random_isomorphism, relabel, Isomorphism};
use idealtri::moves::{apply, available_moves, move_44_at, pachner_23_at, pachner_32_at, MoveKind};
use idealtri::skeleton::{skeleton, validate};
use idealtri::{FaceRef, TetEdge, Triangulation};

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5i64..=5, c), r))
}

fn pool() -> Vec<Triangulation> {
    let fig8 = figure_eight();
    let grown = apply(&fig8, &available_moves(&fig8, false)[0]).unwrap();
    vec![build_x101(), build_x103(0).unwrap(), fig8, gieseking(), grown]
}

/// Follows a list of choices through the available moves.
fn walk(start: &Triangulation, picks: &[usize], with_44: bool) -> Triangulation {
    let mut tri = start.clone();
    for &p in picks {
        let moves = available_moves(&tri, with_44);
        tri = apply(&tri, &moves[p % moves.len()]).unwrap();
    }
    tri
}

fn map_face(iso: &Isomorphism, f: FaceRef) -> FaceRef {
    FaceRef {
        tet: iso.tet_map[f.tet],
        face: iso.perms[f.tet].apply(f.face),
    }
}

fn map_edge(iso: &Isomorphism, e: TetEdge) -> TetEdge {
    let p = iso.perms[e.tet];
    TetEdge::new(iso.tet_map[e.tet], p.apply(e.v0), p.apply(e.v1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_determinantal_divisors(m in matrix()) {
        let a = IntMatrix::from_rows(&m);
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.s.clone());
        prop_assert!(f.u.is_unimodular() && f.v.is_unimodular());
        let got: Vec<String> = f.invariant_factors().iter().map(ToString::to_string).collect();
        let want: Vec<String> = common::invariant_factors_by_minors(&m).iter().map(ToString::to_string).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn signature_agrees_with_isomorphism_test(i in 0usize..5, j in 0usize..5, s in any::<u64>(), t in any::<u64>()) {
        let p = pool();
        let a = relabel(&p[i], s);
        let b = relabel(&p[j], t);
        let same = canonical_signature(&a).unwrap() == canonical_signature(&b).unwrap();
        let iso = are_isomorphic(&a, &b);
        prop_assert_eq!(same, iso.is_some());
        prop_assert_eq!(same, i == j);
        if let Some(w) = iso {
            prop_assert!(w.is_witness(&a, &b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn signature_survives_relabelling(seed in any::<u64>()) {
        let tri = build_x101();
        let r = relabel(&tri, seed);
        prop_assert_eq!(canonical_signature(&r).unwrap(), canonical_signature(&tri).unwrap());
        prop_assert_eq!(validate(&r).census_valid(), true);
        let mut d0 = skeleton(&tri).unwrap().degrees();
        let mut d1 = skeleton(&r).unwrap().degrees();
        d0.sort_unstable();
        d1.sort_unstable();
        prop_assert_eq!(d0, d1);
        prop_assert_eq!(r, relabel(&tri, seed));
    }

    #[test]
    fn witnesses_compose(s in any::<u64>(), t in any::<u64>()) {
        let a = build_x103(0).unwrap();
        let b = relabel(&a, s);
        let c = relabel(&a, t);
        let ab = are_isomorphic(&a, &b).unwrap();
        let bc = are_isomorphic(&b, &c).unwrap();
        prop_assert!(ab.then(&bc).is_witness(&a, &c));
    }

    #[test]
    fn invariants_survive_move_sequences(picks in prop::collection::vec(any::<usize>(), 0..=6)) {
        let start = build_x101();
        let tri = walk(&start, &picks, true);
        prop_assert!(validate(&tri).census_valid());
        prop_assert!(tri.is_connected());
        prop_assert_eq!(first_homology(&tri).unwrap(), first_homology(&start).unwrap());
        prop_assert_eq!(skeleton(&tri).unwrap().vertices.len(), skeleton(&start).unwrap().vertices.len());
        prop_assert_eq!(tri.is_orientable(), start.is_orientable());
        let sig = canonical_signature(&tri).unwrap();
        let back = decode(sig.as_str()).unwrap();
        prop_assert!(are_isomorphic(&back, &tri).is_some());
        prop_assert_eq!(first_homology(&back).unwrap(), first_homology(&tri).unwrap());
    }

    #[test]
    fn files_round_trip(picks in prop::collection::vec(any::<usize>(), 0..=4), seed in any::<u64>()) {
        let tri = relabel(&walk(&build_x101(), &picks, true), seed);
        let text = serialize(&tri);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back, tri);
    }

    #[test]
    fn moves_commute_with_relabelling(seed in any::<u64>(), pick in any::<usize>()) {
        let tri = build_x101();
        let iso = random_isomorphism(tri.size(), seed);
        let r = iso.apply(&tri);
        let skel = skeleton(&tri).unwrap();

        let pairs = tri.face_pairs();
        let face = pairs[pick % pairs.len()].a;
        if pairs[pick % pairs.len()].b.tet != face.tet {
            let x = pachner_23_at(&tri, face).unwrap().tri;
            let y = pachner_23_at(&r, map_face(&iso, face)).unwrap().tri;
            prop_assert!(are_isomorphic(&x, &y).is_some());
        }

        let deg4: Vec<TetEdge> = skel
            .edges
            .iter()
            .filter(|e| e.degree() == 4 && e.meets_distinct_tets())
            .map(|e| {
                let m = e.members[0];
                let (a, b) = idealtri::triangulation::EDGE_VERTICES[m.edge];
                TetEdge::new(m.tet, a, b)
            })
            .collect();
        let e = deg4[pick % deg4.len()];
        let mut xs: Vec<_> = (0..2).map(|c| canonical_signature(&move_44_at(&tri, e, c).unwrap().tri).unwrap()).collect();
        let mut ys: Vec<_> = (0..2)
            .map(|c| canonical_signature(&move_44_at(&r, map_edge(&iso, e), c).unwrap().tri).unwrap())
            .collect();
        xs.sort();
        ys.sort();
        prop_assert_eq!(xs, ys);

        let grown = pachner_23_at(&tri, pairs.iter().find(|p| p.a.tet != p.b.tet).unwrap().a).unwrap();
        let iso2 = random_isomorphism(grown.tri.size(), seed ^ 1);
        let new_edge = grown.new_edge.unwrap();
        let x = pachner_32_at(&grown.tri, new_edge).unwrap().tri;
        let y = pachner_32_at(&iso2.apply(&grown.tri), map_edge(&iso2, new_edge)).unwrap().tri;
        prop_assert!(are_isomorphic(&x, &y).is_some());
    }
}

#[test]
fn two_three_then_three_two_is_identity() {
    let tri = build_x101();
    let h = first_homology(&tri).unwrap();
    for p in tri.face_pairs() {
        if p.a.tet == p.b.tet {
            continue;
        }
        let up = pachner_23_at(&tri, p.a).unwrap();
        assert_eq!(up.tri.size(), 7);
        assert_eq!(first_homology(&up.tri).unwrap(), h);
        let down = pachner_32_at(&up.tri, up.new_edge.unwrap()).unwrap();
        assert_eq!(down.tri.size(), 6);
        assert!(are_isomorphic(&down.tri, &tri).is_some());
    }
}

#[test]
fn four_four_is_reversible() {
    let x = idealtri::builders::build_x101_with_edge();
    for c in 0..2 {
        let out = move_44_at(&x.tri, x.edge_e, c).unwrap();
        let axis = out.new_edge.unwrap();
        let skel = skeleton(&out.tri).unwrap();
        assert_eq!(skel.edges[skel.edge_of(axis)].degree(), 4);
        let restored = (0..2).any(|d| are_isomorphic(&move_44_at(&out.tri, axis, d).unwrap().tri, &x.tri).is_some());
        assert!(restored, "choice {c}");
    }
}

#[test]
fn three_two_rejects_degree_four() {
    let x = idealtri::builders::build_x101_with_edge();
    assert!(pachner_32_at(&x.tri, x.edge_e).is_err());
    assert!(available_moves(&x.tri, false)
        .iter()
        .all(|m| m.kind == MoveKind::TwoThree));
}

#[test]
fn lobachevsky_symmetries_on_grid() {
    for i in 0..1000 {
        let t = -10.0 + 20.0 * i as f64 / 999.0;
        assert!((lobachevsky(t) + lobachevsky(-t)).abs() <= 1e-12, "odd at {t}");
        assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() <= 1e-12, "periodic at {t}");
    }
}

#[test]
fn lobachevsky_matches_quadrature() {
    for i in 0..=200 {
        let t = PI / 2.0 * i as f64 / 200.0;
        let q = common::lobachevsky_by_quadrature(t);
        assert!(
            (lobachevsky(t) - q).abs() <= 1e-10,
            "θ = {t}: {} vs {q}",
            lobachevsky(t)
        );
    }
    assert!((lobachevsky(PI / 6.0) - 0.5074708032).abs() < 1e-10);
}

#[test]
fn double_cover_doubles_volume() {
    let base = max_volume(&gieseking()).unwrap();
    let cover = double_cover(&gieseking()).unwrap();
    assert!(cover.tri.is_orientable());
    let up = max_volume(&cover.tri).unwrap();
    assert!((up.volume - 2.0 * base.volume).abs() < 1e-9);
    assert!(are_isomorphic(&cover.tri, &figure_eight()).is_some());
}
