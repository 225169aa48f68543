//! Edge and vertex classes, vertex links and validity of ideal
//! triangulations.

use thiserror::Error;

use crate::perm::Perm4;
use crate::triangulation::{edge_number, FaceRef, TetEdge, Triangulation, EDGE_VERTICES};
use crate::union_find::ParityUnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("gluing table is not an involution at face {} of tetrahedron {}", .0.face, .0.tet)]
    NotInvolutive(FaceRef),
}

/// One tetrahedron edge belonging to an edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeMember {
    pub tet: usize,
    /// Edge number in `0..6`, see [`EDGE_VERTICES`].
    pub edge: usize,
    /// +1 if the member's `low → high` vertex direction agrees with the
    /// class's first member, -1 otherwise.
    pub sign: i8,
}

/// Position of a tetrahedron around an edge. `roles(0)` and `roles(1)` are
/// the edge endpoints, `roles(2)` and `roles(3)` the remaining vertices.
/// Walking around the edge leaves through face `roles(3)` and enters the
/// next tetrahedron through face `roles(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEmbedding {
    pub tet: usize,
    pub roles: Perm4,
}

impl EdgeEmbedding {
    pub fn exit_face(&self) -> usize {
        self.roles.apply(3)
    }

    pub fn edge_number(&self) -> usize {
        edge_number(self.roles.apply(0), self.roles.apply(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub members: Vec<EdgeMember>,
    /// False if the edge is identified with itself in reverse.
    pub valid: bool,
    /// Cyclic sequence of tetrahedra around the edge, present when the edge
    /// is valid and does not meet the boundary.
    pub embeddings: Option<Vec<EdgeEmbedding>>,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }

    pub fn incident_tets(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.tet).collect()
    }

    /// Degree equals the number of distinct incident tetrahedra.
    pub fn meets_distinct_tets(&self) -> bool {
        let mut tets = self.incident_tets();
        tets.sort_unstable();
        tets.dedup();
        tets.len() == self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// `(tet, vertex label)` pairs.
    pub members: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub edges: Vec<EdgeClass>,
    pub vertices: Vec<VertexClass>,
    edge_of: Vec<[usize; 6]>,
    vertex_of: Vec<[usize; 4]>,
    pub num_faces: usize,
}

impl Skeleton {
    /// Class index of edge `edge` (`0..6`) of `tet`.
    pub fn edge_index(&self, tet: usize, edge: usize) -> usize {
        self.edge_of[tet][edge]
    }

    pub fn edge_of(&self, e: TetEdge) -> usize {
        self.edge_of[e.tet][e.number()]
    }

    pub fn vertex_index(&self, tet: usize, vertex: usize) -> usize {
        self.vertex_of[tet][vertex]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.edges.iter().map(EdgeClass::degree).collect()
    }
}

/// Computes edge and vertex classes by union-find over the face gluings.
pub fn skeleton(tri: &Triangulation) -> Result<Skeleton, SkeletonError> {
    if let Some(&bad) = tri.involution_violations().first() {
        return Err(SkeletonError::NotInvolutive(bad));
    }
    let n = tri.size();
    let mut edge_uf = ParityUnionFind::new(6 * n);
    let mut vert_uf = ParityUnionFind::new(4 * n);
    for t in 0..n {
        for f in 0..4 {
            let Some(g) = tri.gluing(t, f) else { continue };
            for (k, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a == f || b == f {
                    continue;
                }
                let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                edge_uf.union(6 * t + k, 6 * g.tet + edge_number(pa, pb), pa > pb);
            }
            for v in (0..4).filter(|&v| v != f) {
                vert_uf.union(4 * t + v, 4 * g.tet + g.perm.apply(v), false);
            }
        }
    }

    let (edge_groups, edge_class_of) = edge_uf.classes();
    let mut edges = Vec::with_capacity(edge_groups.len());
    for group in &edge_groups {
        let (_, first_parity) = edge_uf.find(group[0]);
        let members = group
            .iter()
            .map(|&x| {
                let (_, par) = edge_uf.find(x);
                EdgeMember {
                    tet: x / 6,
                    edge: x % 6,
                    sign: if par == first_parity { 1 } else { -1 },
                }
            })
            .collect::<Vec<_>>();
        let valid = !edge_uf.has_conflict(group[0]);
        let embeddings = if valid {
            walk_edge(tri, group[0] / 6, group[0] % 6, members.len())
        } else {
            None
        };
        edges.push(EdgeClass {
            members,
            valid,
            embeddings,
        });
    }

    let (vert_groups, vert_class_of) = vert_uf.classes();
    let vertices = vert_groups
        .iter()
        .map(|g| VertexClass {
            members: g.iter().map(|&x| (x / 4, x % 4)).collect(),
        })
        .collect();

    let edge_of = (0..n)
        .map(|t| std::array::from_fn(|k| edge_class_of[6 * t + k]))
        .collect();
    let vertex_of = (0..n)
        .map(|t| std::array::from_fn(|v| vert_class_of[4 * t + v]))
        .collect();
    let num_faces = tri.face_pairs().len() + tri.unglued_faces().len();

    Ok(Skeleton {
        edges,
        vertices,
        edge_of,
        vertex_of,
        num_faces,
    })
}

/// Walks around a valid edge starting at edge `edge` of `tet`, with the
/// endpoints and the remaining vertices each in increasing order. Returns
/// `None` if the walk runs into an unglued face.
fn walk_edge(tri: &Triangulation, tet: usize, edge: usize, degree: usize) -> Option<Vec<EdgeEmbedding>> {
    let (a, b) = EDGE_VERTICES[edge];
    let (c, d) = EDGE_VERTICES[5 - edge];
    let start = EdgeEmbedding {
        tet,
        roles: Perm4::from_images([a as u8, b as u8, c as u8, d as u8]),
    };
    let mut out = vec![start];
    let mut cur = start;
    loop {
        let g = tri.gluing(cur.tet, cur.exit_face())?;
        let roles = g.perm.compose(cur.roles).compose(Perm4::swap(2, 3));
        cur = EdgeEmbedding { tet: g.tet, roles };
        if cur == start {
            break;
        }
        out.push(cur);
        // A valid closed edge returns to its start after `degree` steps.
        if out.len() > degree {
            return None;
        }
    }
    Some(out)
}

/// The link of a vertex class, built as a triangulated surface with one
/// triangle per tetrahedron corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkSurface {
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub connected: bool,
    /// Every triangle edge is glued to another.
    pub closed: bool,
}

impl LinkSurface {
    pub fn is_torus(&self) -> bool {
        self.closed && self.connected && self.euler_characteristic == 0 && self.orientable
    }

    pub fn is_klein_bottle(&self) -> bool {
        self.closed && self.connected && self.euler_characteristic == 0 && !self.orientable
    }

    pub fn kind(&self) -> &'static str {
        if self.is_torus() {
            "torus"
        } else if self.is_klein_bottle() {
            "Klein bottle"
        } else if self.closed && self.connected && self.euler_characteristic == 2 {
            "sphere"
        } else if self.closed && self.connected && self.euler_characteristic == 1 {
            "projective plane"
        } else {
            "other"
        }
    }
}

/// Sign of the bijection between the sorted triangle-corner positions of
/// corner `v` and of corner `p(v)`, extended by the opposite vertex.
fn link_gluing_sign(p: Perm4, v: usize) -> i32 {
    // positions within {0..3} \ {v}, followed by v itself
    let order = |w: usize| -> [usize; 4] {
        let mut o = [0; 4];
        for (i, x) in (0..4).filter(|&x| x != w).enumerate() {
            o[i] = x;
        }
        o[3] = w;
        o
    };
    let src = order(v);
    let dst = order(p.apply(v));
    let mut images = [0u8; 4];
    for (i, &x) in src.iter().enumerate() {
        let y = p.apply(x);
        images[i] = dst.iter().position(|&z| z == y).unwrap() as u8;
    }
    Perm4::from_images(images).sign()
}

/// Builds the link of vertex class `vertex` of `tri`.
pub fn vertex_link(tri: &Triangulation, skel: &Skeleton, vertex: usize) -> LinkSurface {
    let corners = &skel.vertices[vertex].members;
    let index_of = |t: usize, v: usize| corners.iter().position(|&c| c == (t, v));
    let m = corners.len();

    // Link vertices are (corner, direction w); link edges are (corner, face f).
    let mut lv = ParityUnionFind::new(m * 4);
    let mut le = ParityUnionFind::new(m * 4);
    let mut tri_uf = ParityUnionFind::new(m);
    let mut orient = vec![0i32; m];
    let mut orientable = true;
    let mut closed = true;

    for (i, &(t, v)) in corners.iter().enumerate() {
        for f in (0..4).filter(|&f| f != v) {
            let Some(g) = tri.gluing(t, f) else {
                closed = false;
                continue;
            };
            let j = index_of(g.tet, g.perm.apply(v)).expect("vertex class closed under gluing");
            tri_uf.union(i, j, false);
            le.union(4 * i + f, 4 * j + g.perm.apply(f), false);
            for w in (0..4).filter(|&w| w != v && w != f) {
                lv.union(4 * i + w, 4 * j + g.perm.apply(w), false);
            }
        }
    }

    // Orientability by propagation over the link triangles.
    let mut queue = std::collections::VecDeque::new();
    for s in 0..m {
        if orient[s] != 0 {
            continue;
        }
        orient[s] = 1;
        queue.push_back(s);
        while let Some(i) = queue.pop_front() {
            let (t, v) = corners[i];
            for f in (0..4).filter(|&f| f != v) {
                let Some(g) = tri.gluing(t, f) else { continue };
                let j = index_of(g.tet, g.perm.apply(v)).unwrap();
                let want = -orient[i] * link_gluing_sign(g.perm, v);
                if orient[j] == 0 {
                    orient[j] = want;
                    queue.push_back(j);
                } else if orient[j] != want {
                    orientable = false;
                }
            }
        }
    }

    let count_classes = |uf: &mut ParityUnionFind, valid: &dyn Fn(usize) -> bool| {
        let mut roots: Vec<usize> = (0..m * 4).filter(|&x| valid(x)).map(|x| uf.find(x).0).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    // slot x = 4 * i + k is meaningful only when k differs from the corner's vertex
    let real_slot = |x: usize| corners[x / 4].1 != x % 4;
    let vertices = count_classes(&mut lv, &real_slot);
    let edges = count_classes(&mut le, &real_slot);
    let mut tri_roots: Vec<usize> = (0..m).map(|i| tri_uf.find(i).0).collect();
    tri_roots.sort_unstable();
    tri_roots.dedup();

    LinkSurface {
        triangles: m,
        edges,
        vertices,
        euler_characteristic: vertices as i64 - edges as i64 + m as i64,
        orientable,
        connected: tri_roots.len() == 1,
        closed,
    }
}

/// Links of all vertex classes, in class order.
pub fn vertex_links(tri: &Triangulation, skel: &Skeleton) -> Vec<LinkSurface> {
    (0..skel.vertices.len()).map(|v| vertex_link(tri, skel, v)).collect()
}

pub fn is_orientable(tri: &Triangulation) -> bool {
    tri.is_orientable()
}

/// Diagnoses of everything that makes a table a census-style ideal
/// triangulation. Problems are data here, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub tets: usize,
    pub involution_violations: Vec<FaceRef>,
    pub unglued_faces: Vec<FaceRef>,
    pub connected: bool,
    /// Indices of edge classes identified with themselves in reverse.
    pub invalid_edges: Vec<usize>,
    /// Vertex classes whose link is not a closed connected surface of Euler
    /// characteristic zero.
    pub bad_links: Vec<(usize, LinkSurface)>,
    pub links: Vec<LinkSurface>,
    /// `false` when the skeleton could not be computed.
    pub skeleton_checked: bool,
}

impl ValidationReport {
    pub fn involution_ok(&self) -> bool {
        self.involution_violations.is_empty()
    }

    pub fn closed(&self) -> bool {
        self.unglued_faces.is_empty()
    }

    pub fn edges_valid(&self) -> bool {
        self.skeleton_checked && self.invalid_edges.is_empty()
    }

    pub fn links_ok(&self) -> bool {
        self.skeleton_checked && self.bad_links.is_empty()
    }

    pub fn census_valid(&self) -> bool {
        self.tets > 0
            && self.involution_ok()
            && self.closed()
            && self.connected
            && self.edges_valid()
            && self.links_ok()
    }

    /// One human-readable line per problem found.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.tets == 0 {
            out.push("no tetrahedra".to_string());
        }
        for f in &self.involution_violations {
            out.push(format!("involution violated at tet {} face {}", f.tet, f.face));
        }
        for f in &self.unglued_faces {
            out.push(format!("unglued face: tet {} face {}", f.tet, f.face));
        }
        if !self.connected && self.tets > 0 {
            out.push("face-pairing graph is disconnected".to_string());
        }
        for e in &self.invalid_edges {
            out.push(format!("edge {e} is identified with itself in reverse"));
        }
        for (v, link) in &self.bad_links {
            out.push(format!(
                "vertex {v} link is not a closed surface with chi = 0 (chi = {}, closed = {}, connected = {})",
                link.euler_characteristic, link.closed, link.connected
            ));
        }
        out
    }
}

pub fn validate(tri: &Triangulation) -> ValidationReport {
    let involution_violations = tri.involution_violations();
    let mut report = ValidationReport {
        tets: tri.size(),
        unglued_faces: tri.unglued_faces(),
        connected: tri.is_connected(),
        involution_violations,
        invalid_edges: Vec::new(),
        bad_links: Vec::new(),
        links: Vec::new(),
        skeleton_checked: false,
    };
    let Ok(skel) = skeleton(tri) else {
        return report;
    };
    report.skeleton_checked = true;
    report.invalid_edges = skel
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.valid)
        .map(|(i, _)| i)
        .collect();
    report.links = vertex_links(tri, &skel);
    report.bad_links = report
        .links
        .iter()
        .enumerate()
        .filter(|(_, l)| !(l.closed && l.connected && l.euler_characteristic == 0))
        .map(|(i, l)| (i, *l))
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn lone_tetrahedron() {
        let tri = Triangulation::with_tets(1);
        let skel = skeleton(&tri).unwrap();
        assert_eq!(skel.edges.len(), 6);
        assert_eq!(skel.vertices.len(), 4);
        assert!(skel.edges.iter().all(|e| e.valid && e.embeddings.is_none()));
        let report = validate(&tri);
        assert!(!report.closed());
        assert_eq!(report.unglued_faces.len(), 4);
        assert!(!report.census_valid());
        let link = vertex_link(&tri, &skel, 0);
        assert_eq!((link.triangles, link.edges, link.vertices), (1, 3, 3));
        assert!(!link.closed);
    }

    #[test]
    fn figure_eight_skeleton() {
        let tri = census::figure_eight();
        let skel = skeleton(&tri).unwrap();
        assert_eq!(skel.edges.len(), 2);
        assert_eq!(skel.vertices.len(), 1);
        assert_eq!(skel.degrees(), vec![6, 6]);
        let link = vertex_link(&tri, &skel, 0);
        assert!(link.is_torus(), "{link:?}");
        assert_eq!(link.triangles, 8);
        assert!(tri.is_orientable());
        assert!(validate(&tri).census_valid());
    }

    #[test]
    fn gieseking_has_klein_bottle_cusp() {
        let tri = census::gieseking();
        let skel = skeleton(&tri).unwrap();
        assert_eq!(skel.edges.len(), 1);
        assert_eq!(skel.degrees(), vec![6]);
        assert!(vertex_link(&tri, &skel, 0).is_klein_bottle());
        assert!(!tri.is_orientable());
        assert!(validate(&tri).census_valid());
    }

    #[test]
    fn non_involutive_rejected() {
        let id = Perm4::IDENTITY;
        let g = crate::triangulation::Gluing { tet: 1, perm: id };
        let tri = Triangulation::from_table(vec![[Some(g), None, None, None], [None; 4]]);
        assert!(matches!(skeleton(&tri), Err(SkeletonError::NotInvolutive(_))));
        let report = validate(&tri);
        assert!(!report.involution_ok());
        assert!(!report.skeleton_checked);
        assert!(!report.census_valid());
    }

    #[test]
    fn reversed_edge_is_invalid() {
        // Fold one tetrahedron onto itself: face 2 to face 3 swapping 2 and 3
        // while also swapping 0 and 1 reverses edge 01.
        let mut tri = Triangulation::with_tets(1);
        tri.join(0, 2, 0, Perm4::from_images([1, 0, 3, 2])).unwrap();
        let skel = skeleton(&tri).unwrap();
        let e01 = skel.edge_index(0, 0);
        assert!(!skel.edges[e01].valid);
        assert!(validate(&tri).invalid_edges.contains(&e01));
    }

    #[test]
    fn walk_visits_each_member_once() {
        let tri = census::figure_eight();
        let skel = skeleton(&tri).unwrap();
        for e in &skel.edges {
            let emb = e.embeddings.as_ref().unwrap();
            assert_eq!(emb.len(), e.degree());
            let mut seen: Vec<_> = emb.iter().map(|x| (x.tet, x.edge_number())).collect();
            seen.sort_unstable();
            let mut want: Vec<_> = e.members.iter().map(|m| (m.tet, m.edge)).collect();
            want.sort_unstable();
            assert_eq!(seen, want);
        }
    }
}
