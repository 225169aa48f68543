//! Move-path search and census deduplication.

use idealtri::builders::{build_x101, build_x103};
use idealtri::census::{figure_eight, gieseking};
use idealtri::iso::{canonical_signature, decode, relabel};
use idealtri::moves::{apply, available_moves};
use idealtri::search::{bfs_connect, dedupe_census, CensusEntry, ConnectOutcome, Distinction, SearchBudget};
use idealtri::Triangulation;

fn budget(extra: usize, depth: usize) -> SearchBudget {
    SearchBudget {
        max_extra_tets: extra,
        max_depth: depth,
        max_nodes: 100_000,
    }
}

fn entry(name: &str, tri: Triangulation) -> CensusEntry {
    CensusEntry {
        name: name.to_string(),
        tri,
    }
}

fn canonical(tri: &Triangulation) -> Triangulation {
    decode(canonical_signature(tri).unwrap().as_str()).unwrap()
}

/// Two 2-3 moves up from the figure-eight knot complement.
fn grown_figure_eight() -> Triangulation {
    let mut tri = canonical(&figure_eight());
    for _ in 0..2 {
        let m = available_moves(&tri, false)[0];
        tri = canonical(&apply(&tri, &m).unwrap());
    }
    tri
}

#[test]
fn x101_and_x103_are_two_moves_apart() {
    for choice in 0..2 {
        let x103 = build_x103(choice).unwrap();
        let out = bfs_connect(&build_x101(), &x103, &budget(1, 2)).unwrap();
        let path = out.path().expect("connected");
        assert_eq!(path.len(), 2);
        assert!(path.verify());
        let sigs = path.replay().unwrap();
        assert_eq!(sigs.len(), 3);
        assert!(sigs[1].as_str().len() > sigs[0].as_str().len());
        assert_eq!(sigs.last().unwrap(), &path.end);
    }
}

#[test]
fn reported_paths_are_shortest() {
    let x103 = build_x103(0).unwrap();
    let out = bfs_connect(&build_x101(), &x103, &budget(1, 1)).unwrap();
    assert!(matches!(out, ConnectOutcome::NotFoundWithinBudget { .. }));

    let target = grown_figure_eight();
    let path = bfs_connect(&figure_eight(), &target, &budget(2, 2))
        .unwrap()
        .path()
        .cloned()
        .unwrap();
    assert_eq!(path.len(), 2);
    let shorter = bfs_connect(&figure_eight(), &target, &budget(2, 1)).unwrap();
    assert!(matches!(shorter, ConnectOutcome::NotFoundWithinBudget { .. }));
}

#[test]
fn bidirectional_search_agrees_with_forward_search() {
    let pairs = [
        (build_x101(), build_x103(0).unwrap(), 1),
        (figure_eight(), grown_figure_eight(), 2),
    ];
    for (a, b, extra) in pairs {
        let forward = bfs_connect(&a, &b, &budget(extra, 2)).unwrap();
        for depth in [3, 4] {
            let both = bfs_connect(&a, &b, &budget(extra, depth)).unwrap();
            assert_eq!(
                both.path().unwrap().moves,
                forward.path().unwrap().moves,
                "depth {depth}"
            );
        }
    }
}

#[test]
fn search_ignores_input_labelling() {
    let a = build_x101();
    let b = build_x103(1).unwrap();
    let reference = bfs_connect(&a, &b, &budget(1, 2)).unwrap().path().cloned().unwrap();
    for seed in 0..5 {
        let out = bfs_connect(&relabel(&a, seed), &relabel(&b, seed + 100), &budget(1, 2)).unwrap();
        assert_eq!(out.path().unwrap(), &reference);
    }
}

#[test]
fn different_manifolds_are_told_apart() {
    let out = bfs_connect(&build_x101(), &figure_eight(), &budget(1, 2)).unwrap();
    assert!(matches!(out, ConnectOutcome::Distinct(Distinction::Homology(_, _))));
    let out = bfs_connect(&figure_eight(), &gieseking(), &budget(1, 2)).unwrap();
    assert!(matches!(out, ConnectOutcome::Distinct(_)));
}

#[test]
fn invalid_input_is_an_error() {
    assert!(bfs_connect(&Triangulation::with_tets(1), &figure_eight(), &budget(1, 2)).is_err());
}

#[test]
fn dedupe_groups_the_census_pair() {
    let entries = vec![
        entry("x101", build_x101()),
        entry("x103", build_x103(0).unwrap()),
        entry("fig8", figure_eight()),
    ];
    let report = dedupe_census(&entries, &budget(1, 2)).unwrap();
    let groups: Vec<Vec<String>> = report.groups.iter().map(|g| g.members.clone()).collect();
    assert_eq!(groups.len(), 2);
    assert!(groups.contains(&vec!["fig8".to_string()]));
    let pair = report.duplicates().next().unwrap();
    let mut members = pair.members.clone();
    members.sort();
    assert_eq!(members, ["x101", "x103"]);
    assert_eq!(pair.witnesses.len(), 1);
    assert!(pair.witnesses[0].path.verify());
    assert_eq!(pair.witnesses[0].path.len(), 2);
}

#[test]
fn dedupe_ignores_order_and_labelling() {
    let forward = vec![
        entry("x101", build_x101()),
        entry("x103", build_x103(0).unwrap()),
        entry("fig8", figure_eight()),
    ];
    let backward = vec![
        entry("fig8", relabel(&figure_eight(), 3)),
        entry("x103", relabel(&build_x103(0).unwrap(), 4)),
        entry("x101", relabel(&build_x101(), 5)),
    ];
    let a = dedupe_census(&forward, &budget(1, 2)).unwrap();
    let b = dedupe_census(&backward, &budget(1, 2)).unwrap();
    let members = |r: &idealtri::search::DedupeReport| r.groups.iter().map(|g| g.members.clone()).collect::<Vec<_>>();
    assert_eq!(members(&a), members(&b));
}

#[test]
fn dedupe_of_copies_needs_no_moves() {
    let entries = vec![entry("a", build_x101()), entry("b", relabel(&build_x101(), 9))];
    let report = dedupe_census(&entries, &budget(1, 2)).unwrap();
    assert_eq!(report.groups.len(), 1);
    assert_eq!(report.groups[0].witnesses.len(), 1);
    assert!(report.groups[0].witnesses[0].path.is_empty());

    assert!(dedupe_census(&[], &budget(1, 2)).unwrap().groups.is_empty());
}
