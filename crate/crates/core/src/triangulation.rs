//! Face-gluing tables for collections of tetrahedra.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A [`Gluing`]
//! stored at `(t, f)` with target `u` and permutation `p` identifies face `f`
//! of `t` with face `p(f)` of `u`, sending vertex `i` of `t` to vertex `p(i)`
//! of `u`. The table is expected to be an involution: the gluing stored at
//! `(u, p(f))` must be `(t, p⁻¹)`. This is checked, never assumed.

use std::collections::VecDeque;

use thiserror::Error;

use crate::perm::Perm4;

/// The six edges of a tetrahedron as vertex pairs. Edge `k` and edge `5 - k`
/// are opposite.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index in [`EDGE_VERTICES`] of the edge joining vertices `a` and `b`.
pub fn edge_number(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("({a}, {b}) is not an edge of a tetrahedron"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// A face of a particular tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub tet: usize,
    pub face: usize,
}

/// An edge of a particular tetrahedron, given by its two vertex labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetEdge {
    pub tet: usize,
    pub v0: usize,
    pub v1: usize,
}

impl TetEdge {
    pub fn new(tet: usize, v0: usize, v1: usize) -> Self {
        assert!(v0 < 4 && v1 < 4 && v0 != v1, "bad edge ({v0}, {v1})");
        TetEdge { tet, v0, v1 }
    }

    pub fn number(&self) -> usize {
        edge_number(self.v0, self.v1)
    }
}

/// A glued pair of faces; `a < b` in `(tet, face)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FacePair {
    pub a: FaceRef,
    pub b: FaceRef,
    /// Gluing from `a` to `b`.
    pub perm: Perm4,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("face {face} of tetrahedron {tet} is already glued")]
    AlreadyGlued { tet: usize, face: usize },
    #[error("tetrahedron index {0} is out of range")]
    TetOutOfRange(usize),
    #[error("cannot glue face {face} of tetrahedron {tet} to itself")]
    SelfGluedFace { tet: usize, face: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Triangulation {
    tets: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// `n` tetrahedra with every face unglued.
    pub fn with_tets(n: usize) -> Self {
        Triangulation {
            tets: vec![[None; 4]; n],
        }
    }

    /// Wraps a raw table as-is. No consistency checks are made; use
    /// [`Triangulation::involution_violations`] or `validate` afterwards.
    pub fn from_table(tets: Vec<[Option<Gluing>; 4]>) -> Self {
        Triangulation { tets }
    }

    pub fn table(&self) -> &[[Option<Gluing>; 4]] {
        &self.tets
    }

    pub fn size(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.tets[tet][face]
    }

    /// Appends an unglued tetrahedron and returns its index.
    pub fn add_tet(&mut self) -> usize {
        self.tets.push([None; 4]);
        self.tets.len() - 1
    }

    /// Glues face `face` of `tet` to face `perm(face)` of `target`, setting
    /// both sides of the table.
    pub fn join(&mut self, tet: usize, face: usize, target: usize, perm: Perm4) -> Result<(), TriangulationError> {
        let n = self.tets.len();
        if tet >= n {
            return Err(TriangulationError::TetOutOfRange(tet));
        }
        if target >= n {
            return Err(TriangulationError::TetOutOfRange(target));
        }
        let target_face = perm.apply(face);
        if tet == target && target_face == face {
            return Err(TriangulationError::SelfGluedFace { tet, face });
        }
        if self.tets[tet][face].is_some() {
            return Err(TriangulationError::AlreadyGlued { tet, face });
        }
        if self.tets[target][target_face].is_some() {
            return Err(TriangulationError::AlreadyGlued {
                tet: target,
                face: target_face,
            });
        }
        self.tets[tet][face] = Some(Gluing { tet: target, perm });
        self.tets[target][target_face] = Some(Gluing {
            tet,
            perm: perm.inverse(),
        });
        Ok(())
    }

    /// Faces whose stored gluing is not matched by the reverse gluing.
    pub fn involution_violations(&self) -> Vec<FaceRef> {
        let mut bad = Vec::new();
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Some(g) = g else { continue };
                let ok = g.tet < self.tets.len() && {
                    let back = self.tets[g.tet][g.perm.apply(f)];
                    back == Some(Gluing {
                        tet: t,
                        perm: g.perm.inverse(),
                    }) && !(g.tet == t && g.perm.apply(f) == f)
                };
                if !ok {
                    bad.push(FaceRef { tet: t, face: f });
                }
            }
        }
        bad
    }

    pub fn is_involutive(&self) -> bool {
        self.involution_violations().is_empty()
    }

    pub fn unglued_faces(&self) -> Vec<FaceRef> {
        let mut out = Vec::new();
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if g.is_none() {
                    out.push(FaceRef { tet: t, face: f });
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.tets.iter().all(|faces| faces.iter().all(Option::is_some))
    }

    /// Connectivity of the face-pairing graph. The empty triangulation is not
    /// connected.
    pub fn is_connected(&self) -> bool {
        let n = self.tets.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = queue.pop_front() {
            for g in self.tets[t].iter().flatten() {
                if g.tet < n && !seen[g.tet] {
                    seen[g.tet] = true;
                    count += 1;
                    queue.push_back(g.tet);
                }
            }
        }
        count == n
    }

    /// All glued face pairs, ordered by their smaller face. The position in
    /// this list is the face index used by move descriptors.
    pub fn face_pairs(&self) -> Vec<FacePair> {
        let mut out = Vec::new();
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Some(g) = g else { continue };
                let a = FaceRef { tet: t, face: f };
                let b = FaceRef {
                    tet: g.tet,
                    face: g.perm.apply(f),
                };
                if a < b {
                    out.push(FacePair { a, b, perm: g.perm });
                }
            }
        }
        out
    }

    /// Per-tetrahedron orientation signs making every gluing orientation
    /// reversing, or `None` when no such assignment exists.
    ///
    /// Convention: two tetrahedra with signs `s`, `s'` glued by `p` are
    /// coherently oriented iff `s * s' * sign(p) == -1`, i.e. a gluing
    /// between equally signed tetrahedra must be an odd permutation.
    pub fn orientation(&self) -> Option<Vec<i32>> {
        let n = self.tets.len();
        let mut sign = vec![0i32; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for g in self.tets[t].iter().flatten() {
                    let want = -sign[t] * g.perm.sign();
                    if sign[g.tet] == 0 {
                        sign[g.tet] = want;
                        queue.push_back(g.tet);
                    } else if sign[g.tet] != want {
                        return None;
                    }
                }
            }
        }
        Some(sign)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_sets_both_sides() {
        let mut tri = Triangulation::with_tets(2);
        let p = Perm4::from_images([1, 0, 2, 3]);
        tri.join(0, 0, 1, p).unwrap();
        assert_eq!(
            tri.gluing(1, 1),
            Some(Gluing {
                tet: 0,
                perm: p.inverse()
            })
        );
        assert!(tri.is_involutive());
        assert!(!tri.is_closed());
        assert_eq!(tri.unglued_faces().len(), 6);
        assert_eq!(
            tri.join(0, 0, 1, Perm4::IDENTITY),
            Err(TriangulationError::AlreadyGlued { tet: 0, face: 0 })
        );
    }

    #[test]
    fn face_cannot_glue_to_itself() {
        let mut tri = Triangulation::with_tets(1);
        assert!(tri.join(0, 2, 0, Perm4::IDENTITY).is_err());
        tri.join(0, 0, 0, Perm4::from_images([1, 0, 2, 3])).unwrap();
        assert!(tri.is_involutive());
    }

    #[test]
    fn detects_non_involutive_table() {
        let id = Perm4::IDENTITY;
        let tri = Triangulation::from_table(vec![
            [Some(Gluing { tet: 1, perm: id }), None, None, None],
            [None, None, None, None],
        ]);
        assert_eq!(tri.involution_violations(), vec![FaceRef { tet: 0, face: 0 }]);
    }

    #[test]
    fn edge_numbers_pair_opposites() {
        for (k, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_number(a, b), k);
            assert_eq!(edge_number(b, a), k);
            let (c, d) = EDGE_VERTICES[5 - k];
            assert!(c != a && c != b && d != a && d != b);
        }
    }

    #[test]
    fn connectivity() {
        let mut tri = Triangulation::with_tets(3);
        tri.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        assert!(!tri.is_connected());
        tri.join(1, 1, 2, Perm4::IDENTITY).unwrap();
        assert!(tri.is_connected());
        assert!(!Triangulation::default().is_connected());
    }
}
