//! Breadth-first search of the Pachner graph.
//!
//! States are canonical signatures. Moves out of a state are located on the
//! decoded canonical representative, so a path is a list of descriptors
//! read against `decode(signature)` at every step.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::homology::{first_homology, AbelianGroup};
use crate::iso::{canonical_signature, decode, IsoSig, SigError};
use crate::moves::{apply, available_moves, MoveDescriptor, MoveError, MoveKind};
use crate::skeleton::{skeleton, validate};
use crate::triangulation::Triangulation;
use crate::union_find::ParityUnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("input {0} is not a connected census-valid triangulation")]
    Invalid(String),
    #[error("move {step} ({descriptor}) failed: {source}")]
    Replay {
        step: usize,
        descriptor: MoveDescriptor,
        source: MoveError,
    },
    #[error(transparent)]
    Signature(#[from] SigError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest allowed tetrahedron count above the larger input.
    pub max_extra_tets: usize,
    pub max_depth: usize,
    /// Cap on distinct states visited.
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_extra_tets: 1,
            max_depth: 2,
            max_nodes: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PachnerPath {
    pub moves: Vec<MoveDescriptor>,
    pub start: IsoSig,
    pub end: IsoSig,
}

impl PachnerPath {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Signatures visited, `start` first and `end` last.
    pub fn replay(&self) -> Result<Vec<IsoSig>, SearchError> {
        let mut sigs = vec![self.start.clone()];
        let mut tri = decode(self.start.as_str())?;
        for (step, m) in self.moves.iter().enumerate() {
            let next = apply(&tri, m).map_err(|source| SearchError::Replay {
                step,
                descriptor: *m,
                source,
            })?;
            let sig = canonical_signature(&next)?;
            tri = decode(sig.as_str())?;
            sigs.push(sig);
        }
        Ok(sigs)
    }

    /// True when replaying from `start` ends at `end`.
    pub fn verify(&self) -> bool {
        matches!(self.replay(), Ok(s) if s.last() == Some(&self.end))
    }
}

impl fmt::Display for PachnerPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let moves: Vec<String> = self.moves.iter().map(ToString::to_string).collect();
        write!(f, "{} -> {} via [{}]", self.start, self.end, moves.join(", "))
    }
}

/// Invariant that already tells two manifolds apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    Homology(AbelianGroup, AbelianGroup),
    Cusps(usize, usize),
    Orientability(bool, bool),
}

impl fmt::Display for Distinction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinction::Homology(a, b) => write!(f, "H1 differs: {a} vs {b}"),
            Distinction::Cusps(a, b) => write!(f, "cusp count differs: {a} vs {b}"),
            Distinction::Orientability(a, b) => write!(f, "orientability differs: {a} vs {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectOutcome {
    Connected(PachnerPath),
    /// Different manifolds, decided by invariants.
    Distinct(Distinction),
    /// Nothing found; says nothing about the manifolds.
    NotFoundWithinBudget {
        visited: usize,
    },
}

impl ConnectOutcome {
    pub fn path(&self) -> Option<&PachnerPath> {
        match self {
            ConnectOutcome::Connected(p) => Some(p),
            _ => None,
        }
    }
}

/// Cheap invariants used to rule out a search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    pub cusps: usize,
    pub orientable: bool,
    pub h1_rank: usize,
    pub h1_torsion: Vec<String>,
}

struct Profile {
    sig: IsoSig,
    h1: AbelianGroup,
    cusps: usize,
    orientable: bool,
}

impl Profile {
    fn of(tri: &Triangulation, name: &str) -> Result<Self, SearchError> {
        let invalid = || SearchError::Invalid(name.to_string());
        if !validate(tri).census_valid() {
            return Err(invalid());
        }
        Ok(Profile {
            sig: canonical_signature(tri)?,
            h1: first_homology(tri).map_err(|_| invalid())?,
            cusps: skeleton(tri).map_err(|_| invalid())?.vertices.len(),
            orientable: tri.is_orientable(),
        })
    }

    fn key(&self) -> InvariantKey {
        InvariantKey {
            cusps: self.cusps,
            orientable: self.orientable,
            h1_rank: self.h1.rank,
            h1_torsion: self.h1.torsion.iter().map(ToString::to_string).collect(),
        }
    }

    fn distinction(&self, other: &Profile) -> Option<Distinction> {
        if self.h1 != other.h1 {
            Some(Distinction::Homology(self.h1.clone(), other.h1.clone()))
        } else if self.cusps != other.cusps {
            Some(Distinction::Cusps(self.cusps, other.cusps))
        } else if self.orientable != other.orientable {
            Some(Distinction::Orientability(self.orientable, other.orientable))
        } else {
            None
        }
    }
}

/// Pachner graph restricted to triangulations of at most `max_tets`
/// tetrahedra, with neighbour lists cached.
struct Graph {
    max_tets: usize,
    cache: HashMap<IsoSig, Vec<(MoveDescriptor, IsoSig)>>,
}

impl Graph {
    fn new(max_tets: usize) -> Self {
        Graph {
            max_tets,
            cache: HashMap::new(),
        }
    }

    /// Neighbours in increasing descriptor order.
    fn neighbours(&mut self, sig: &IsoSig) -> &[(MoveDescriptor, IsoSig)] {
        if !self.cache.contains_key(sig) {
            let tri = decode(sig.as_str()).expect("states are valid signatures");
            let mut out = Vec::new();
            for m in available_moves(&tri, false) {
                if m.kind == MoveKind::TwoThree && tri.size() + 1 > self.max_tets {
                    continue;
                }
                let Ok(next) = apply(&tri, &m) else { continue };
                if let Ok(s) = canonical_signature(&next) {
                    out.push((m, s));
                }
            }
            self.cache.insert(sig.clone(), out);
        }
        &self.cache[sig]
    }
}

/// Shortest move path from `a` to `b` using 2-3 and 3-2 moves.
///
/// Among shortest paths the lexicographically least descriptor sequence is
/// returned. Budgets deeper than two run the search from both ends.
pub fn bfs_connect(a: &Triangulation, b: &Triangulation, budget: &SearchBudget) -> Result<ConnectOutcome, SearchError> {
    let pa = Profile::of(a, "A")?;
    let pb = Profile::of(b, "B")?;
    if pa.sig == pb.sig {
        return Ok(ConnectOutcome::Connected(PachnerPath {
            moves: Vec::new(),
            start: pa.sig.clone(),
            end: pb.sig,
        }));
    }
    if let Some(d) = pa.distinction(&pb) {
        return Ok(ConnectOutcome::Distinct(d));
    }
    let mut graph = Graph::new(a.size().max(b.size()) + budget.max_extra_tets);
    let found = if budget.max_depth <= 2 {
        forward_search(&mut graph, &pa.sig, &pb.sig, budget)
    } else {
        bidirectional_search(&mut graph, &pa.sig, &pb.sig, budget)
    };
    Ok(match found {
        Ok(moves) => ConnectOutcome::Connected(PachnerPath {
            moves,
            start: pa.sig,
            end: pb.sig,
        }),
        Err(visited) => ConnectOutcome::NotFoundWithinBudget { visited },
    })
}

/// Level-by-level search from `start`. Parents are recorded on first
/// discovery; since each level is scanned in path order and moves in
/// descriptor order, the recorded path is the least one.
fn forward_search(
    graph: &mut Graph,
    start: &IsoSig,
    goal: &IsoSig,
    budget: &SearchBudget,
) -> Result<Vec<MoveDescriptor>, usize> {
    let mut parent: HashMap<IsoSig, Option<(IsoSig, MoveDescriptor)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut level = vec![start.clone()];
    for _ in 0..budget.max_depth {
        let mut next = Vec::new();
        for s in &level {
            for (m, t) in graph.neighbours(s).to_vec() {
                if parent.contains_key(&t) {
                    continue;
                }
                if parent.len() >= budget.max_nodes {
                    return Err(parent.len());
                }
                parent.insert(t.clone(), Some((s.clone(), m)));
                if &t == goal {
                    let mut moves = Vec::new();
                    let mut cur = t;
                    while let Some(Some((p, m))) = parent.get(&cur) {
                        moves.push(*m);
                        cur = p.clone();
                    }
                    moves.reverse();
                    return Ok(moves);
                }
                next.push(t);
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Err(parent.len())
}

struct Side {
    dist: HashMap<IsoSig, usize>,
    frontier: Vec<IsoSig>,
    radius: usize,
}

impl Side {
    fn new(root: &IsoSig) -> Self {
        Side {
            dist: HashMap::from([(root.clone(), 0)]),
            frontier: vec![root.clone()],
            radius: 0,
        }
    }
}

/// Grows whole levels alternately from both ends, always the smaller
/// frontier, until they meet; then recovers the least path of the meeting
/// length by a depth-first walk constrained by the recorded distances.
fn bidirectional_search(
    graph: &mut Graph,
    start: &IsoSig,
    goal: &IsoSig,
    budget: &SearchBudget,
) -> Result<Vec<MoveDescriptor>, usize> {
    let mut sides = [Side::new(start), Side::new(goal)];
    let visited = |sides: &[Side; 2]| sides[0].dist.len() + sides[1].dist.len();
    let length = loop {
        if sides[0].radius + sides[1].radius >= budget.max_depth {
            return Err(visited(&sides));
        }
        let grow = usize::from(sides[1].frontier.len() < sides[0].frontier.len());
        if sides[grow].frontier.is_empty() {
            return Err(visited(&sides));
        }
        let r = sides[grow].radius + 1;
        let mut next = Vec::new();
        for s in std::mem::take(&mut sides[grow].frontier) {
            for (_, t) in graph.neighbours(&s).to_vec() {
                if sides[grow].dist.contains_key(&t) {
                    continue;
                }
                if visited(&sides) >= budget.max_nodes {
                    return Err(visited(&sides));
                }
                sides[grow].dist.insert(t.clone(), r);
                next.push(t);
            }
        }
        sides[grow].frontier = next;
        sides[grow].radius = r;
        let other = &sides[1 - grow];
        let best = sides[grow]
            .frontier
            .iter()
            .filter_map(|t| other.dist.get(t).map(|d| r + d))
            .min();
        if let Some(len) = best {
            break len;
        }
    };

    let [from_start, from_goal] = &sides;
    let mut dead: HashSet<(usize, IsoSig)> = HashSet::new();
    let mut moves = Vec::new();
    let ok = least_path(graph, start, 0, length, from_start, from_goal, &mut dead, &mut moves);
    assert!(ok, "a path of the meeting length exists");
    Ok(moves)
}

/// Depth-first search in descriptor order for a path of exactly `length`
/// moves whose `i`-th state lies at distance `i` from the start and
/// `length - i` from the goal wherever those distances were recorded.
#[allow(clippy::too_many_arguments)]
fn least_path(
    graph: &mut Graph,
    at: &IsoSig,
    step: usize,
    length: usize,
    from_start: &Side,
    from_goal: &Side,
    dead: &mut HashSet<(usize, IsoSig)>,
    moves: &mut Vec<MoveDescriptor>,
) -> bool {
    if step == length {
        return from_goal.dist.get(at) == Some(&0);
    }
    if dead.contains(&(step, at.clone())) {
        return false;
    }
    let i = step + 1;
    for (m, t) in graph.neighbours(at).to_vec() {
        if i <= from_start.radius && from_start.dist.get(&t) != Some(&i) {
            continue;
        }
        if length - i <= from_goal.radius && from_goal.dist.get(&t) != Some(&(length - i)) {
            continue;
        }
        moves.push(m);
        if least_path(graph, &t, i, length, from_start, from_goal, dead, moves) {
            return true;
        }
        moves.pop();
    }
    dead.insert((step, at.clone()));
    false
}

/// One named input to [`dedupe_census`].
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub name: String,
    pub tri: Triangulation,
}

/// A move path showing two entries triangulate the same manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub from: String,
    pub to: String,
    pub path: PachnerPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedupeGroup {
    pub key: InvariantKey,
    /// Entry names, ordered by canonical signature and then name.
    pub members: Vec<String>,
    /// Paths joining the members into one connected piece.
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedupeReport {
    pub groups: Vec<DedupeGroup>,
}

impl DedupeReport {
    /// Groups with more than one member.
    pub fn duplicates(&self) -> impl Iterator<Item = &DedupeGroup> {
        self.groups.iter().filter(|g| g.members.len() > 1)
    }
}

/// Partitions entries into classes joined by move paths within `budget`.
///
/// Entries are first split by cusp count, orientability and H1; searches
/// run only inside a split. Members of a group are provably the same
/// manifold; separate groups may still coincide beyond the budget.
pub fn dedupe_census(entries: &[CensusEntry], budget: &SearchBudget) -> Result<DedupeReport, SearchError> {
    let mut profiled = Vec::with_capacity(entries.len());
    for e in entries {
        profiled.push((Profile::of(&e.tri, &e.name)?, e));
    }
    profiled.sort_by(|(pa, ea), (pb, eb)| (&pa.sig, &ea.name).cmp(&(&pb.sig, &eb.name)));

    let mut buckets: Vec<(InvariantKey, Vec<usize>)> = Vec::new();
    for (i, (p, _)) in profiled.iter().enumerate() {
        let key = p.key();
        match buckets.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i),
            None => buckets.push((key, vec![i])),
        }
    }

    let mut groups = Vec::new();
    for (key, members) in buckets {
        let mut uf = ParityUnionFind::new(members.len());
        let mut witnesses: Vec<Vec<Witness>> = vec![Vec::new(); members.len()];
        for x in 0..members.len() {
            for y in x + 1..members.len() {
                if uf.find(x).0 == uf.find(y).0 {
                    continue;
                }
                let (ea, eb) = (profiled[members[x]].1, profiled[members[y]].1);
                if let ConnectOutcome::Connected(path) = bfs_connect(&ea.tri, &eb.tri, budget)? {
                    let (rx, ry) = (uf.find(x).0, uf.find(y).0);
                    let mut moved = std::mem::take(&mut witnesses[rx]);
                    moved.append(&mut witnesses[ry]);
                    moved.push(Witness {
                        from: ea.name.clone(),
                        to: eb.name.clone(),
                        path,
                    });
                    uf.union(x, y, false);
                    let root = uf.find(x).0;
                    witnesses[root] = moved;
                }
            }
        }
        let (classes, _) = uf.classes();
        for class in classes {
            let root = uf.find(class[0]).0;
            groups.push(DedupeGroup {
                key: key.clone(),
                members: class.iter().map(|&i| profiled[members[i]].1.name.clone()).collect(),
                witnesses: std::mem::take(&mut witnesses[root]),
            });
        }
    }
    groups.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(DedupeReport { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_x101, build_x103};
    use crate::census::{figure_eight, gieseking};
    use crate::iso::relabel;

    fn entry(name: &str, tri: Triangulation) -> CensusEntry {
        CensusEntry {
            name: name.to_string(),
            tri,
        }
    }

    #[test]
    fn isomorphic_inputs_give_empty_path() {
        let t = build_x101();
        let out = bfs_connect(&t, &relabel(&t, 5), &SearchBudget::default()).unwrap();
        let p = out.path().unwrap();
        assert!(p.is_empty());
        assert!(p.verify());
    }

    #[test]
    fn homology_prefilter() {
        let out = bfs_connect(&build_x101(), &figure_eight(), &SearchBudget::default()).unwrap();
        assert!(matches!(out, ConnectOutcome::Distinct(Distinction::Homology(_, _))));
        let out = bfs_connect(&figure_eight(), &gieseking(), &SearchBudget::default()).unwrap();
        assert!(matches!(
            out,
            ConnectOutcome::Distinct(Distinction::Orientability(true, false))
        ));
    }

    #[test]
    fn figure_eight_to_its_two_three_image() {
        let a = figure_eight();
        let b = apply(&a, &MoveDescriptor::two_three(2)).unwrap();
        let out = bfs_connect(&b, &a, &SearchBudget::default()).unwrap();
        let p = out.path().unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.moves[0].kind, MoveKind::ThreeTwo);
        assert!(p.verify());
    }

    #[test]
    fn zero_depth_budget_finds_nothing() {
        let budget = SearchBudget {
            max_depth: 0,
            ..SearchBudget::default()
        };
        let out = bfs_connect(&build_x101(), &build_x103(0).unwrap(), &budget).unwrap();
        assert!(matches!(out, ConnectOutcome::NotFoundWithinBudget { .. }));
    }

    #[test]
    fn dedupe_small_cases() {
        let b = SearchBudget::default();
        assert!(dedupe_census(&[], &b).unwrap().groups.is_empty());
        let t = figure_eight();
        let r = dedupe_census(&[entry("p", t.clone()), entry("q", relabel(&t, 9))], &b).unwrap();
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].members.len(), 2);
        assert!(r.groups[0].witnesses.iter().all(|w| w.path.is_empty()));
    }
}
