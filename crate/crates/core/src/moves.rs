//! Local retriangulation moves: Pachner 2-3 and 3-2, and the 4-4 move about
//! a degree-four edge.
//!
//! All three moves go through one engine: the tetrahedra being removed are
//! described as quadruples of abstract points of a small ball, the
//! replacement tetrahedra as quadruples of the same points, and faces are
//! matched by their point sets. Faces of the ball's boundary keep whatever
//! they were glued to, including other boundary faces of the same ball.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::perm::Perm4;
use crate::skeleton::{skeleton, EdgeEmbedding, Skeleton, SkeletonError};
use crate::triangulation::{FaceRef, Gluing, TetEdge, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    TwoThree,
    ThreeTwo,
    FourFour,
}

impl MoveKind {
    pub fn code(self) -> &'static str {
        match self {
            MoveKind::TwoThree => "23",
            MoveKind::ThreeTwo => "32",
            MoveKind::FourFour => "44",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "23" => Some(MoveKind::TwoThree),
            "32" => Some(MoveKind::ThreeTwo),
            "44" => Some(MoveKind::FourFour),
            _ => None,
        }
    }
}

/// A move located by index: `loc` is a face index (position in
/// [`Triangulation::face_pairs`]) for 2-3 moves and an edge class index for
/// 3-2 and 4-4 moves. `choice` is only meaningful for 4-4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub loc: usize,
    pub choice: u8,
}

impl MoveDescriptor {
    pub fn two_three(face: usize) -> Self {
        MoveDescriptor {
            kind: MoveKind::TwoThree,
            loc: face,
            choice: 0,
        }
    }

    pub fn three_two(edge: usize) -> Self {
        MoveDescriptor {
            kind: MoveKind::ThreeTwo,
            loc: edge,
            choice: 0,
        }
    }

    pub fn four_four(edge: usize, choice: u8) -> Self {
        MoveDescriptor {
            kind: MoveKind::FourFour,
            loc: edge,
            choice,
        }
    }
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::TwoThree => write!(f, "2-3 on face {}", self.loc),
            MoveKind::ThreeTwo => write!(f, "3-2 on edge {}", self.loc),
            MoveKind::FourFour => write!(f, "4-4 on edge {} choice {}", self.loc, self.choice),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("face index {0} out of range")]
    FaceOutOfRange(usize),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("face {} of tetrahedron {} is on the boundary", .0.face, .0.tet)]
    BoundaryFace(FaceRef),
    #[error("face glues tetrahedron {0} to itself")]
    SameTet(usize),
    #[error("edge has degree {found}, expected {expected}")]
    WrongDegree { expected: usize, found: usize },
    #[error("edge meets tetrahedron {0} more than once")]
    RepeatedTet(usize),
    #[error("edge is invalid or meets the boundary")]
    BadEdge,
    #[error("4-4 choice must be 0 or 1, got {0}")]
    BadChoice(u8),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

/// Result of a move together with enough bookkeeping to locate things in
/// the new triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub tri: Triangulation,
    /// New index of each surviving old tetrahedron; removed ones are `None`.
    pub old_to_new: Vec<Option<usize>>,
    /// Indices of the tetrahedra created by the move.
    pub new_tets: Vec<usize>,
    /// 2-3: the new degree-three edge. 4-4: the new axis.
    pub new_edge: Option<TetEdge>,
    /// 3-2: the new face shared by the two new tetrahedra.
    pub new_face: Option<FaceRef>,
}

struct Piece {
    tet: usize,
    /// Ball point of each vertex of `tet`.
    points: [usize; 4],
}

fn face_key(points: &[usize; 4], face: usize) -> [usize; 3] {
    let mut k = [0; 3];
    let mut j = 0;
    for (i, &p) in points.iter().enumerate() {
        if i != face {
            k[j] = p;
            j += 1;
        }
    }
    k.sort_unstable();
    k
}

/// Permutation sending vertex `i` of a tetrahedron with points `from` to the
/// vertex of a tetrahedron with points `to` carrying the same point; the
/// vertices opposite the matched faces correspond.
fn point_perm(from: &[usize; 4], from_face: usize, to: &[usize; 4], to_face: usize) -> Perm4 {
    let mut images = [0u8; 4];
    for i in 0..4 {
        images[i] = if i == from_face {
            to_face as u8
        } else {
            to.iter().position(|&p| p == from[i]).expect("shared face point") as u8
        };
    }
    Perm4::from_images(images)
}

fn retriangulate(
    tri: &Triangulation,
    old: &[Piece],
    internal: &[FaceRef],
    new: &[[usize; 4]],
) -> (Triangulation, Vec<Option<usize>>, Vec<usize>) {
    let n = tri.size();
    let mut removed = vec![None; n];
    for (i, piece) in old.iter().enumerate() {
        debug_assert!(removed[piece.tet].is_none(), "pieces must be distinct");
        removed[piece.tet] = Some(i);
    }
    let mut old_to_new = vec![None; n];
    let mut next = 0;
    for t in 0..n {
        if removed[t].is_none() {
            old_to_new[t] = Some(next);
            next += 1;
        }
    }
    let base = next;
    let new_tets: Vec<usize> = (base..base + new.len()).collect();
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; base + new.len()];

    for t in 0..n {
        let Some(nt) = old_to_new[t] else { continue };
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                if let Some(ng) = old_to_new[g.tet] {
                    table[nt][f] = Some(Gluing { tet: ng, perm: g.perm });
                }
            }
        }
    }

    // Boundary faces of the old ball, keyed by point set.
    let mut old_faces: HashMap<[usize; 3], (usize, usize)> = HashMap::new();
    for (i, piece) in old.iter().enumerate() {
        for f in 0..4 {
            if internal.contains(&FaceRef {
                tet: piece.tet,
                face: f,
            }) {
                continue;
            }
            let prev = old_faces.insert(face_key(&piece.points, f), (i, f));
            debug_assert!(prev.is_none(), "ball boundary faces must be distinct");
        }
    }
    let mut new_faces: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for (k, pts) in new.iter().enumerate() {
        for f in 0..4 {
            new_faces.entry(face_key(pts, f)).or_default().push((k, f));
        }
    }
    // Which new face covers a given old boundary face.
    let mut cover_of: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (key, faces) in &new_faces {
        if faces.len() == 1 {
            let old_face = old_faces.get(key).expect("new boundary matches old boundary");
            cover_of.insert(*old_face, faces[0]);
        }
    }
    debug_assert_eq!(cover_of.len(), old_faces.len());

    for (key, faces) in &new_faces {
        match *faces.as_slice() {
            [(k1, f1), (k2, f2)] => {
                table[base + k1][f1] = Some(Gluing {
                    tet: base + k2,
                    perm: point_perm(&new[k1], f1, &new[k2], f2),
                });
                table[base + k2][f2] = Some(Gluing {
                    tet: base + k1,
                    perm: point_perm(&new[k2], f2, &new[k1], f1),
                });
            }
            [(k, f)] => {
                let (pi, g_face) = old_faces[key];
                let piece = &old[pi];
                // new vertex labels -> old tetrahedron labels
                let to_old = point_perm(&new[k], f, &piece.points, g_face);
                let Some(g) = tri.gluing(piece.tet, g_face) else {
                    continue;
                };
                let across = g.perm.compose(to_old);
                match removed[g.tet] {
                    None => {
                        let outside = old_to_new[g.tet].unwrap();
                        table[base + k][f] = Some(Gluing {
                            tet: outside,
                            perm: across,
                        });
                        table[outside][across.apply(f)] = Some(Gluing {
                            tet: base + k,
                            perm: across.inverse(),
                        });
                    }
                    Some(pj) => {
                        let partner_face = g.perm.apply(g_face);
                        let (k2, f2) = cover_of[&(pj, partner_face)];
                        let from_old = point_perm(&old[pj].points, partner_face, &new[k2], f2);
                        table[base + k][f] = Some(Gluing {
                            tet: base + k2,
                            perm: from_old.compose(across),
                        });
                    }
                }
            }
            _ => unreachable!("a face is shared by at most two new tetrahedra"),
        }
    }
    let out = Triangulation::from_table(table);
    debug_assert!(out.is_involutive());
    (out, old_to_new, new_tets)
}

fn face_from_index(tri: &Triangulation, face: usize) -> Result<FaceRef, MoveError> {
    tri.face_pairs()
        .get(face)
        .map(|p| p.a)
        .ok_or(MoveError::FaceOutOfRange(face))
}

/// 2-3 move on the face with the given index.
pub fn pachner_23(tri: &Triangulation, face: usize) -> Result<Triangulation, MoveError> {
    Ok(pachner_23_at(tri, face_from_index(tri, face)?)?.tri)
}

/// 2-3 move on a face named by one of its sides.
pub fn pachner_23_at(tri: &Triangulation, face: FaceRef) -> Result<MoveOutcome, MoveError> {
    let g = tri.gluing(face.tet, face.face).ok_or(MoveError::BoundaryFace(face))?;
    if g.tet == face.tet {
        return Err(MoveError::SameTet(face.tet));
    }
    const BOTTOM: usize = 4;
    let top = face.face;
    let other_face = g.perm.apply(face.face);
    let inv = g.perm.inverse();
    let upper = Piece {
        tet: face.tet,
        points: [0, 1, 2, 3],
    };
    let lower = Piece {
        tet: g.tet,
        points: std::array::from_fn(|j| if j == other_face { BOTTOM } else { inv.apply(j) }),
    };
    let rim: Vec<usize> = (0..4).filter(|&i| i != top).collect();
    let new: Vec<[usize; 4]> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| [top, BOTTOM, rim[i], rim[j]])
        .collect();
    let internal = [
        face,
        FaceRef {
            tet: g.tet,
            face: other_face,
        },
    ];
    let (out, old_to_new, new_tets) = retriangulate(tri, &[upper, lower], &internal, &new);
    Ok(MoveOutcome {
        tri: out,
        old_to_new,
        new_edge: Some(TetEdge::new(new_tets[0], 0, 1)),
        new_tets,
        new_face: None,
    })
}

fn edge_embeddings(skel: &Skeleton, edge: usize, degree: usize) -> Result<Vec<EdgeEmbedding>, MoveError> {
    let class = skel.edges.get(edge).ok_or(MoveError::EdgeOutOfRange(edge))?;
    if class.degree() != degree {
        return Err(MoveError::WrongDegree {
            expected: degree,
            found: class.degree(),
        });
    }
    let emb = class.embeddings.clone().ok_or(MoveError::BadEdge)?;
    let mut tets: Vec<usize> = emb.iter().map(|e| e.tet).collect();
    tets.sort_unstable();
    if let Some(w) = tets.windows(2).find(|w| w[0] == w[1]) {
        return Err(MoveError::RepeatedTet(w[0]));
    }
    Ok(emb)
}

/// Pieces around an edge: points 0 and 1 are the endpoints, `2 + k` is the
/// vertex shared by tetrahedra `k` and `k + 1` (cyclically).
fn pieces_around(emb: &[EdgeEmbedding]) -> (Vec<Piece>, Vec<FaceRef>) {
    let d = emb.len();
    let mut pieces = Vec::with_capacity(d);
    let mut internal = Vec::with_capacity(2 * d);
    for (k, e) in emb.iter().enumerate() {
        let mut points = [0; 4];
        points[e.roles.apply(0)] = 0;
        points[e.roles.apply(1)] = 1;
        points[e.roles.apply(2)] = 2 + k;
        points[e.roles.apply(3)] = 2 + (k + d - 1) % d;
        pieces.push(Piece { tet: e.tet, points });
        internal.push(FaceRef {
            tet: e.tet,
            face: e.roles.apply(2),
        });
        internal.push(FaceRef {
            tet: e.tet,
            face: e.roles.apply(3),
        });
    }
    (pieces, internal)
}

/// 3-2 move on the edge class with the given index.
pub fn pachner_32(tri: &Triangulation, edge: usize) -> Result<Triangulation, MoveError> {
    let skel = skeleton(tri)?;
    Ok(pachner_32_on(tri, &skel, edge)?.tri)
}

/// 3-2 move on the edge class containing a given tetrahedron edge.
pub fn pachner_32_at(tri: &Triangulation, edge: TetEdge) -> Result<MoveOutcome, MoveError> {
    let skel = skeleton(tri)?;
    pachner_32_on(tri, &skel, skel.edge_of(edge))
}

fn pachner_32_on(tri: &Triangulation, skel: &Skeleton, edge: usize) -> Result<MoveOutcome, MoveError> {
    let emb = edge_embeddings(skel, edge, 3)?;
    let (pieces, internal) = pieces_around(&emb);
    let new = [[2, 3, 4, 0], [2, 3, 4, 1]];
    let (out, old_to_new, new_tets) = retriangulate(tri, &pieces, &internal, &new);
    Ok(MoveOutcome {
        tri: out,
        old_to_new,
        new_face: Some(FaceRef {
            tet: new_tets[0],
            face: 3,
        }),
        new_tets,
        new_edge: None,
    })
}

/// 4-4 move on the edge class with the given index.
pub fn move_44(tri: &Triangulation, edge: usize, choice: u8) -> Result<Triangulation, MoveError> {
    let skel = skeleton(tri)?;
    Ok(move_44_on(tri, &skel, edge, choice)?.tri)
}

/// 4-4 move about the edge class containing a given tetrahedron edge.
///
/// The equator of the octahedron is read from the edge's embedding list,
/// which starts at the lowest-numbered tetrahedron edge of the class:
/// equator vertex `q_k` is shared by the `k`-th and `(k+1)`-th tetrahedra
/// around the edge. Choice 0 makes `q_0 q_2` the new axis, choice 1 makes
/// `q_1 q_3` the new axis.
pub fn move_44_at(tri: &Triangulation, edge: TetEdge, choice: u8) -> Result<MoveOutcome, MoveError> {
    let skel = skeleton(tri)?;
    move_44_on(tri, &skel, skel.edge_of(edge), choice)
}

fn move_44_on(tri: &Triangulation, skel: &Skeleton, edge: usize, choice: u8) -> Result<MoveOutcome, MoveError> {
    if choice > 1 {
        return Err(MoveError::BadChoice(choice));
    }
    let emb = edge_embeddings(skel, edge, 4)?;
    let (pieces, internal) = pieces_around(&emb);
    let c = choice as usize;
    let (p, r) = (2 + c, 4 + c);
    // ring around the new axis: endpoint 0, q_{c+1}, endpoint 1, q_{c+3}
    let ring = [0, 2 + (c + 1) % 4, 1, 2 + (c + 3) % 4];
    let new: Vec<[usize; 4]> = (0..4).map(|i| [p, r, ring[i], ring[(i + 1) % 4]]).collect();
    let (out, old_to_new, new_tets) = retriangulate(tri, &pieces, &internal, &new);
    Ok(MoveOutcome {
        tri: out,
        old_to_new,
        new_edge: Some(TetEdge::new(new_tets[0], 0, 1)),
        new_tets,
        new_face: None,
    })
}

/// The same 4-4 move expressed as a 2-3 move on the face between the
/// `(1-choice)`-th and `(2-choice)`-th tetrahedra around the edge, followed
/// by a 3-2 move on the original edge, now of degree three.
pub fn move_44_via_pachner(tri: &Triangulation, edge: TetEdge, choice: u8) -> Result<Triangulation, MoveError> {
    if choice > 1 {
        return Err(MoveError::BadChoice(choice));
    }
    let skel = skeleton(tri)?;
    let class = skel.edge_of(edge);
    let emb = edge_embeddings(&skel, class, 4)?;
    let c = choice as usize;
    let hinge = emb[1 - c];
    let step = pachner_23_at(
        tri,
        FaceRef {
            tet: hinge.tet,
            face: hinge.exit_face(),
        },
    )?;
    let keep = emb[(3 - c) % 4];
    let moved = TetEdge::new(
        step.old_to_new[keep.tet].expect("tetrahedron away from the hinge survives"),
        keep.roles.apply(0),
        keep.roles.apply(1),
    );
    Ok(pachner_32_at(&step.tri, moved)?.tri)
}

/// Applies a located move.
pub fn apply(tri: &Triangulation, m: &MoveDescriptor) -> Result<Triangulation, MoveError> {
    match m.kind {
        MoveKind::TwoThree => pachner_23(tri, m.loc),
        MoveKind::ThreeTwo => pachner_32(tri, m.loc),
        MoveKind::FourFour => move_44(tri, m.loc, m.choice),
    }
}

/// Every admissible move, in increasing descriptor order. 4-4 moves are
/// included only when `with_44` is set.
pub fn available_moves(tri: &Triangulation, with_44: bool) -> Vec<MoveDescriptor> {
    let mut out = Vec::new();
    for (i, p) in tri.face_pairs().iter().enumerate() {
        if p.a.tet != p.b.tet {
            out.push(MoveDescriptor::two_three(i));
        }
    }
    let Ok(skel) = skeleton(tri) else { return out };
    for (i, e) in skel.edges.iter().enumerate() {
        if e.embeddings.is_some() && e.meets_distinct_tets() && e.degree() == 3 {
            out.push(MoveDescriptor::three_two(i));
        }
    }
    if with_44 {
        for (i, e) in skel.edges.iter().enumerate() {
            if e.embeddings.is_some() && e.meets_distinct_tets() && e.degree() == 4 {
                out.push(MoveDescriptor::four_four(i, 0));
                out.push(MoveDescriptor::four_four(i, 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::figure_eight;
    use crate::skeleton::validate;

    #[test]
    fn two_three_adds_a_degree_three_edge() {
        let tri = figure_eight();
        for m in available_moves(&tri, false) {
            assert_eq!(m.kind, MoveKind::TwoThree);
            let face = face_from_index(&tri, m.loc).unwrap();
            let out = pachner_23_at(&tri, face).unwrap();
            assert_eq!(out.tri.size(), 3);
            assert!(validate(&out.tri).census_valid());
            let skel = skeleton(&out.tri).unwrap();
            let e = &skel.edges[skel.edge_of(out.new_edge.unwrap())];
            assert_eq!(e.degree(), 3);
            let back = pachner_32(&out.tri, skel.edge_of(out.new_edge.unwrap())).unwrap();
            assert_eq!(back.size(), 2);
            assert!(validate(&back).census_valid());
        }
    }

    #[test]
    fn rejects_bad_locations() {
        let tri = figure_eight();
        assert_eq!(pachner_23(&tri, 99), Err(MoveError::FaceOutOfRange(99)));
        assert!(matches!(
            pachner_32(&tri, 0),
            Err(MoveError::WrongDegree { expected: 3, found: 6 })
        ));
        assert!(matches!(
            move_44(&tri, 0, 0),
            Err(MoveError::WrongDegree { expected: 4, .. })
        ));
        assert_eq!(move_44(&tri, 0, 2), Err(MoveError::BadChoice(2)));
        let gieseking = crate::census::gieseking();
        assert_eq!(pachner_23(&gieseking, 0), Err(MoveError::SameTet(0)));
        let open = Triangulation::with_tets(1);
        assert_eq!(
            pachner_23_at(&open, FaceRef { tet: 0, face: 1 }),
            Err(MoveError::BoundaryFace(FaceRef { tet: 0, face: 1 }))
        );
    }

    #[test]
    fn descriptors_order_by_kind_then_location() {
        let a = MoveDescriptor::two_three(5);
        let b = MoveDescriptor::three_two(0);
        assert!(a < b);
        assert!(MoveDescriptor::three_two(1) < MoveDescriptor::four_four(0, 0));
    }
}
